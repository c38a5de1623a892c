//! The second-order coefficient `E_{1,1}^m`, stored as a flat table of
//! quadratic monomials and assembled by exact series products.
//!
//! `E_{1,1}^m = −csc²(π/m)/32 · Σ coeff · trig(m) · a · b` where `a`, `b`
//! range over `p₁`, its first two derivatives and `u₁`, each unshifted or
//! shifted by `±2π/m`. Grouped summands of the closed form are distributed
//! into single monomials so that every row is independently checkable.

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fourier::{FourierSeries, ModeSet, ZERO_TOL};
use crate::obstruction::poly_p;

/// A factor of a monomial: `p₁^{(d)}` or `u₁`, evaluated at `t`, `t + 2π/m`
/// (`Plus`) or `t − 2π/m` (`Minus`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Field {
    P,
    PPlus,
    PMinus,
    Pd,
    PdPlus,
    PdMinus,
    Pdd,
    PddPlus,
    PddMinus,
    U,
    UPlus,
    UMinus,
}

/// Trigonometric weight of a monomial, as a function of `x = π/m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Trig {
    /// `cos x`
    C1,
    /// `cos 3x`
    C3,
    /// `sin x`
    S1,
    /// `sin 3x`
    S3,
    /// `sin³ x`
    S1Cubed,
    /// `sin x · cos 2x`
    S1C2,
    /// `sin x · sin 2x`
    S1S2,
}

impl Trig {
    pub fn value(self, m: u32) -> f64 {
        let x = PI / m as f64;
        match self {
            Trig::C1 => x.cos(),
            Trig::C3 => (3.0 * x).cos(),
            Trig::S1 => x.sin(),
            Trig::S3 => (3.0 * x).sin(),
            Trig::S1Cubed => x.sin().powi(3),
            Trig::S1C2 => x.sin() * (2.0 * x).cos(),
            Trig::S1S2 => x.sin() * (2.0 * x).sin(),
        }
    }
}

/// One monomial `coeff · trig · a · b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct E11Term {
    pub coeff: i32,
    pub trig: Trig,
    pub a: Field,
    pub b: Field,
}

const fn t(coeff: i32, trig: Trig, a: Field, b: Field) -> E11Term {
    E11Term { coeff, trig, a, b }
}

pub const E11_TERM_COUNT: usize = 77;

use Field::*;
use Trig::*;

/// The monomials of `E_{1,1}^m` before the common factor `−csc²(π/m)/32`.
pub static E11_TERMS: [E11Term; E11_TERM_COUNT] = [
    // squares and products with p⁺
    t(-5, C1, PPlus, PPlus),
    t(1, C3, PPlus, PPlus),
    t(6, S1, U, PPlus),
    t(-2, S3, U, PPlus),
    t(-6, S1, UPlus, PPlus),
    t(2, S3, UPlus, PPlus),
    t(10, S1, Pd, PPlus),
    t(2, S3, Pd, PPlus),
    t(6, S1, PdPlus, PPlus),
    t(-2, S3, PdPlus, PPlus),
    t(4, C1, Pdd, PPlus),
    t(-4, C3, Pdd, PPlus),
    t(-1, C3, PMinus, PMinus),
    t(5, C1, PMinus, PMinus),
    t(-1, C1, UPlus, UPlus),
    t(1, C3, UPlus, UPlus),
    t(1, C1, UMinus, UMinus),
    t(-1, C3, UMinus, UMinus),
    t(1, C1, PdPlus, PdPlus),
    t(-1, C3, PdPlus, PdPlus),
    t(-1, C1, PdMinus, PdMinus),
    t(1, C3, PdMinus, PdMinus),
    // cross terms in u and ṗ
    t(2, C1, U, UPlus),
    t(-2, C3, U, UPlus),
    t(-2, C1, U, UMinus),
    t(2, C3, U, UMinus),
    t(-2, C1, UPlus, Pd),
    t(2, C3, UPlus, Pd),
    t(2, C1, UMinus, Pd),
    t(-2, C3, UMinus, Pd),
    t(2, C1, U, PdPlus),
    t(-2, C3, U, PdPlus),
    t(2, C1, UPlus, PdPlus),
    t(-2, C3, UPlus, PdPlus),
    t(-2, C1, Pd, PdPlus),
    t(2, C3, Pd, PdPlus),
    // 2p · (…)
    t(-2, C3, P, PPlus),
    t(10, C1, P, PPlus),
    t(2, C3, P, PMinus),
    t(-10, C1, P, PMinus),
    t(16, S1Cubed, P, U),
    t(-8, S1Cubed, P, UMinus),
    t(4, S1C2, P, UPlus),
    t(-4, S1, P, UPlus),
    t(-8, S1C2, P, Pd),
    t(-24, S1, P, Pd),
    t(4, S1C2, P, PdPlus),
    t(-4, S1, P, PdPlus),
    t(4, S1C2, P, PdMinus),
    t(-4, S1, P, PdMinus),
    // terms with ṗ⁻
    t(-2, C1, U, PdMinus),
    t(2, C3, U, PdMinus),
    t(-2, C1, UMinus, PdMinus),
    t(2, C3, UMinus, PdMinus),
    t(2, C1, Pd, PdMinus),
    t(-2, C3, Pd, PdMinus),
    // terms with p̈
    t(-12, S1, UPlus, Pdd),
    t(4, S3, UPlus, Pdd),
    t(-12, S1, UMinus, Pdd),
    t(4, S3, UMinus, Pdd),
    t(-24, S1, Pd, Pdd),
    t(8, S3, Pd, Pdd),
    t(-12, S1, PdPlus, Pdd),
    t(4, S3, PdPlus, Pdd),
    t(-12, S1, PdMinus, Pdd),
    t(4, S3, PdMinus, Pdd),
    // 4p⁻ sin(π/m) · (…)
    t(8, S1Cubed, PMinus, U),
    t(-8, S1Cubed, PMinus, UMinus),
    t(4, S1C2, PMinus, Pd),
    t(12, S1, PMinus, Pd),
    t(-4, S1C2, PMinus, PdMinus),
    t(4, S1, PMinus, PdMinus),
    t(-8, S1S2, PMinus, Pdd),
    // shifted p̈
    t(-12, S1, UPlus, PddPlus),
    t(4, S3, UPlus, PddPlus),
    t(-12, S1, UMinus, PddMinus),
    t(4, S3, UMinus, PddMinus),
];

struct Fields {
    series: BTreeMap<Field, FourierSeries>,
}

impl Fields {
    fn new(m: u32, p1: &FourierSeries, u1: &FourierSeries) -> Self {
        let h = TAU / m as f64;
        let derivs = [p1.clone(), p1.derivative(1), p1.derivative(2)];
        let names = [[P, PPlus, PMinus], [Pd, PdPlus, PdMinus], [Pdd, PddPlus, PddMinus]];
        let mut series = BTreeMap::new();
        for (d, row) in derivs.iter().zip(names) {
            series.insert(row[0], d.clone());
            series.insert(row[1], d.shift(h));
            series.insert(row[2], d.shift(-h));
        }
        series.insert(U, u1.clone());
        series.insert(UPlus, u1.shift(h));
        series.insert(UMinus, u1.shift(-h));
        Self { series }
    }

    fn get(&self, f: Field) -> &FourierSeries {
        &self.series[&f]
    }
}

/// `E_{1,1}^m(p₁, u₁)`, the `ε²` Taylor coefficient of
/// `E^m(1 + εp₁, id + εu₁)`. The result has order `2K`.
pub fn expansion_term_e11(m: u32, p1: &FourierSeries, u1: &FourierSeries) -> FourierSeries {
    let fields = Fields::new(m, p1, u1);
    // Collect weights per unordered pair so each product is formed once.
    let mut weights: BTreeMap<(Field, Field), f64> = BTreeMap::new();
    for term in &E11_TERMS {
        let key = if term.a <= term.b {
            (term.a, term.b)
        } else {
            (term.b, term.a)
        };
        *weights.entry(key).or_insert(0.0) += term.coeff as f64 * term.trig.value(m);
    }
    let order = 2 * p1.order().max(u1.order());
    let mut acc = FourierSeries::zeros(order, p1.is_real() && u1.is_real());
    for ((a, b), w) in weights {
        if w != 0.0 {
            acc = &acc + &(&(fields.get(a) * fields.get(b)) * w);
        }
    }
    let s = (PI / m as f64).sin();
    &acc * (-1.0 / (32.0 * s * s))
}

/// Modes `2(2l+1)n`, `n ≠ 0`, of `E_{1,1}^{2l+1}` computed directly from `p₁`
/// with `u₁` given by the first-order solve:
///
/// `𝓕_{2(2l+1)n}(E_{1,1}) = (n/2) Σ_k Σ_r 𝒫^l_r(n, k) p_{1, 2(2l+1)k + r} p_{1, 2(2l+1)(n−k) − r}`,
///
/// `r ∈ [1, 4l+1] ∖ {2l+1}`. Requires `𝓕_{(2l+1)Z∖{0}}(p₁) = 0`.
pub fn e11_projection(l: u32, p1: &FourierSeries) -> Result<FourierSeries> {
    if l < 1 {
        return Err(Error::InvalidArgument("l must be at least 1".into()));
    }
    let odd = 2 * l as i64 + 1;
    let big = 2 * odd;
    let resonant = p1.project(&ModeSet::NonzeroMultiples(odd));
    if resonant.max_abs_coeff() >= ZERO_TOL * p1.l2_norm().max(1.0) {
        return Err(Error::Hypothesis(vec![format!(
            "p1 has modes in {odd}Z∖{{0}} (largest {:e})",
            resonant.max_abs_coeff()
        )]));
    }
    let order = 2 * p1.order();
    let kk = p1.order() as i64;
    let n_max = order as i64 / big;
    let mut modes = Vec::new();
    for n in -n_max..=n_max {
        if n == 0 {
            continue;
        }
        let mut total = Complex64::new(0.0, 0.0);
        for r in 1..=(4 * l as i64 + 1) {
            if r == odd {
                continue;
            }
            // both mode indices must lie within the window
            let k_lo = (-kk - r).div_euclid(big) - 1;
            let k_hi = (kk - r).div_euclid(big) + 1;
            for k in k_lo..=k_hi {
                let a = p1.coeff(big * k + r);
                let b = p1.coeff(big * (n - k) - r);
                if a.norm_sqr() == 0.0 || b.norm_sqr() == 0.0 {
                    continue;
                }
                total += poly_p(l, r as u32, n, k)? * a * b;
            }
        }
        modes.push((big * n, total * (n as f64 / 2.0)));
    }
    FourierSeries::from_modes(order, modes, false)
}
