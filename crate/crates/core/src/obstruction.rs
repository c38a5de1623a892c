//! Second-order obstructions for odd moduli `M' = 2l + 1`.
//!
//! Once the first-order solve succeeds, the Fourier modes `Mn`, `M = 2M'`,
//! of `E_{1,1}^{M'}` are quadratic in `p₁`:
//!
//! ```text
//! value(n) = −(i/16) Σ_k Σ_r 𝒫^l_r(n, k) p_{1, Mk + r} p_{1, M(n−k) − r},   r ∈ [1, 4l+1] ∖ {M'}.
//! ```
//!
//! Each `𝒫^l_r` factors as `−16i c*² (k − c**)(n − k + c**)`, so with
//! `f^{(r)}_k = c* (k − c**) p_{1, Mk + r}` the value is the sum over residue
//! classes of the autocorrelations `Σ_k f^{(r)}_k conj(f^{(r)}_{k−n})`. A finitely
//! supported `f` with at least two nonzero entries has a nonzero autocorrelation
//! at the span of its support, which is what the certificate looks for.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier::{FourierSeries, ModeSet, ZERO_TOL};

/// Absolute verdict tolerance, scaled by `‖p₁‖²`.
pub const VERDICT_TOL: f64 = 1e-10;
/// Bound asserted on the skipped `r = 2l+1` class.
pub const SKIPPED_TOL: f64 = 1e-14;

fn check_lr(l: u32, r: u32) -> Result<()> {
    if l < 1 {
        return Err(Error::InvalidArgument("l must be at least 1".into()));
    }
    let odd = 2 * l + 1;
    if r < 1 || r > 4 * l + 1 || r.is_multiple_of(odd) {
        return Err(Error::SingularResidue { modulus: odd, r });
    }
    Ok(())
}

/// `c_{l,r} = −4M' csc(π/M') / (−1 + w)²`, `w = e^{2πir/M'}`.
pub fn c_lr(l: u32, r: u32) -> Result<Complex64> {
    check_lr(l, r)?;
    let odd = (2 * l + 1) as f64;
    let w = Complex64::from_polar(1.0, 2.0 * PI * r as f64 / odd);
    let d = w - 1.0;
    Ok(Complex64::new(-4.0 * odd / (PI / odd).sin(), 0.0) / (d * d))
}

/// `𝒫^l_r(n, k)` in the product form
/// `c_{l,r} · [(w−1)cos(π/M') − i(1+w)sin(π/M')(k(4l+2) + r)]
///          · [(1+w)sin(π/M')((4l+2)(n−k) − r) − i(w−1)cos(π/M')]`.
pub fn poly_p(l: u32, r: u32, n: i64, k: i64) -> Result<Complex64> {
    let c = c_lr(l, r)?;
    let odd = (2 * l + 1) as f64;
    let big = 2.0 * odd;
    let w = Complex64::from_polar(1.0, 2.0 * PI * r as f64 / odd);
    let (s, co) = (PI / odd).sin_cos();
    let i = Complex64::i();
    let wm = w - 1.0;
    let wp = w + 1.0;
    let left = wm * co - i * wp * s * (k as f64 * big + r as f64);
    let right = wp * s * (big * (n - k) as f64 - r as f64) - i * wm * co;
    Ok(c * left * right)
}

/// `(c*, c**)` with `c* = √(M'³ sin(π/M') cot²(πr/M'))` and
/// `c** = (cot(π/M') tan(πr/M') − r)/(4l+2)`.
pub fn split_constants(l: u32, r: u32) -> Result<(f64, f64)> {
    check_lr(l, r)?;
    let odd = (2 * l + 1) as f64;
    let x = PI / odd;
    let y = PI * r as f64 / odd;
    let radicand = odd.powi(3) * x.sin() / y.tan().powi(2);
    if radicand < 0.0 {
        return Err(Error::NegativeRadicand { l, r, value: radicand });
    }
    let c_star = radicand.sqrt();
    let c_star_star = (y.tan() / x.tan() - r as f64) / (2.0 * odd);
    Ok((c_star, c_star_star))
}

/// Residue classes entering the sums.
pub fn residues(l: u32) -> impl Iterator<Item = u32> {
    let odd = 2 * l + 1;
    (1..=4 * l + 1).filter(move |r| *r != odd)
}

/// Lists each violated standing hypothesis on `p₁`.
pub fn hypothesis_violations(l: u32, p1: &FourierSeries) -> Vec<String> {
    let mut out = Vec::new();
    if !p1.is_real() {
        out.push("p1 must be real-flagged".into());
    }
    let tol = ZERO_TOL * p1.l2_norm().max(1.0);
    let even = p1.project(&ModeSet::Multiples(2)).max_abs_coeff();
    if even >= tol {
        out.push(format!("p1 has even modes (largest {even:e})"));
    }
    let odd = 2 * l as i64 + 1;
    let resonant = p1.project(&ModeSet::NonzeroMultiples(odd)).max_abs_coeff();
    if resonant >= tol {
        out.push(format!("p1 has modes in {odd}Z∖{{0}} (largest {resonant:e})"));
    }
    if l == 1 {
        let unit = p1.coeff(1).norm().max(p1.coeff(-1).norm());
        if unit >= tol {
            out.push(format!("p1 has modes ±1 (|p_1| = {unit:e})"));
        }
    }
    out
}

/// `f^{(r)}_k = c*_{l,r} (k − c**_{l,r}) p_{1, 2(2l+1)k + r}` over the window.
pub fn class_sequence(l: u32, r: u32, p1: &FourierSeries) -> Result<FourierSeries> {
    let (cs, css) = split_constants(l, r)?;
    let big = 2 * (2 * l as i64 + 1);
    let kk = p1.order() as i64;
    let k_max = (kk + big) / big + 1;
    let modes = (-k_max..=k_max).map(|k| {
        let c = p1.coeff(big * k + r as i64);
        (k, c * (cs * (k as f64 - css)))
    });
    FourierSeries::from_modes(k_max as usize, modes, false)
}

/// `Σ_k k(k − n) p_{1, Mk+1} p_{1, M(n−k)−1}`, the `r = 1` sum with constants
/// stripped (for `l = 1` this is the classical `6k ± 1` system).
pub fn bare_sum(l: u32, p1: &FourierSeries, n: i64) -> Complex64 {
    let big = 2 * (2 * l as i64 + 1);
    let kk = p1.order() as i64;
    let k_max = (kk + big) / big + 1;
    (-k_max..=k_max)
        .map(|k| {
            p1.coeff(big * k + 1) * p1.coeff(big * (n - k) - 1) * (k * (k - n)) as f64
        })
        .sum()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObstructionReport {
    /// `2l + 1`.
    pub modulus: u32,
    pub n_max: i64,
    /// `n ↦ value(n)` for `n ∈ [−n_max, n_max] ∖ {0}`.
    pub values: BTreeMap<i64, Complex64>,
    /// `n ↦ bare_sum(n)` over the same range.
    pub bare_values: BTreeMap<i64, Complex64>,
    pub max_abs: f64,
    pub trivial_verdict: bool,
    /// `n > 0` where `|value(n)|` is largest (first on ties), if any is nonzero.
    pub witness_n: Option<i64>,
    /// `max_n |Σ_k p_{Mk+M'} p_{M(n−k)−M'}|`, the skipped class without weights.
    pub skipped_bound: f64,
    /// `value(0) = Σ_r ‖f^{(r)}‖²`, never expected to vanish.
    pub norm_diagnostic: f64,
    pub tolerance: f64,
}

/// Default `n_max = 2K / (2(2l+1)) + 2`.
pub fn default_n_max(l: u32, p1: &FourierSeries) -> i64 {
    (2 * p1.order() as i64) / (2 * (2 * l as i64 + 1)) + 2
}

/// Evaluates the quadratic system by autocorrelations of the class sequences.
pub fn quadratic_obstruction(l: u32, p1: &FourierSeries, n_max: Option<i64>) -> Result<ObstructionReport> {
    if l < 1 {
        return Err(Error::InvalidArgument("l must be at least 1".into()));
    }
    let violations = hypothesis_violations(l, p1);
    if !violations.is_empty() {
        return Err(Error::Hypothesis(violations));
    }
    let n_max = n_max.unwrap_or_else(|| default_n_max(l, p1));
    if n_max < 1 {
        return Err(Error::InvalidArgument(format!("n_max = {n_max} must be positive")));
    }
    let classes = residues(l)
        .map(|r| class_sequence(l, r, p1))
        .collect::<Result<Vec<_>>>()?;
    let value = |n: i64| -> Complex64 { classes.iter().map(|f| f.autocorrelation(n)).sum() };

    let mut values = BTreeMap::new();
    let mut bare_values = BTreeMap::new();
    for n in (-n_max..=n_max).filter(|&n| n != 0) {
        values.insert(n, value(n));
        bare_values.insert(n, bare_sum(l, p1, n));
    }
    let max_abs = values.values().fold(0.0_f64, |a, v| a.max(v.norm()));
    let mut witness_n = None;
    let mut best = 0.0;
    for n in 1..=n_max {
        let a = values[&n].norm();
        if a > best {
            best = a;
            witness_n = Some(n);
        }
    }

    let odd = 2 * l as i64 + 1;
    let big = 2 * odd;
    let kk = p1.order() as i64;
    let k_max = (kk + big) / big + 1;
    let mut skipped_bound: f64 = 0.0;
    for n in -n_max..=n_max {
        let s: Complex64 = (-k_max..=k_max)
            .map(|k| p1.coeff(big * k + odd) * p1.coeff(big * (n - k) - odd))
            .sum();
        skipped_bound = skipped_bound.max(s.norm());
    }
    if skipped_bound >= SKIPPED_TOL {
        return Err(Error::Hypothesis(vec![format!(
            "skipped class r = {odd} contributes {skipped_bound:e}"
        )]));
    }

    let norm = p1.l2_norm();
    let tolerance = VERDICT_TOL * norm * norm;
    Ok(ObstructionReport {
        modulus: odd as u32,
        n_max,
        values,
        bare_values,
        max_abs,
        trivial_verdict: max_abs <= tolerance,
        witness_n,
        skipped_bound,
        norm_diagnostic: value(0).re,
        tolerance,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    /// Every class sequence vanishes: the relevant modes of `p₁` are zero.
    ForcedTrivial,
    /// A class autocorrelation is nonzero at `n`.
    Obstructed { r: u32, n: i64, value: Complex64 },
    /// Every populated class is a single mode; all autocorrelations `n ≠ 0` vanish.
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub verdict: Verdict,
    /// `(r, ‖f^{(r)}‖)` per residue class.
    pub class_norms: Vec<(u32, f64)>,
}

/// Per-class autocorrelation certificate.
///
/// The witness is searched over the span of each class's support, where a
/// nonzero autocorrelation is guaranteed whenever the class has two or more
/// nonzero entries.
pub fn triviality_certificate(l: u32, p1: &FourierSeries, tol: f64) -> Result<Certificate> {
    let violations = hypothesis_violations(l, p1);
    if !violations.is_empty() {
        return Err(Error::Hypothesis(violations));
    }
    let mut class_norms = Vec::new();
    let mut witness: Option<(u32, i64, Complex64)> = None;
    for r in residues(l) {
        let f = class_sequence(l, r, p1)?;
        class_norms.push((r, f.l2_norm()));
        let support: Vec<i64> = f
            .modes()
            .filter(|(_, c)| c.norm() > tol)
            .map(|(k, _)| k)
            .collect();
        if support.len() < 2 {
            continue;
        }
        let span = support[support.len() - 1] - support[0];
        for n in 1..=span {
            let v = f.autocorrelation(n);
            let better = witness.is_none_or(|(_, _, w)| v.norm() > w.norm());
            if v.norm() > tol && better {
                witness = Some((r, n, v));
            }
        }
    }
    let verdict = match witness {
        Some((r, n, value)) => Verdict::Obstructed { r, n, value },
        None if class_norms.iter().all(|(_, nrm)| *nrm <= tol) => Verdict::ForcedTrivial,
        None => Verdict::Inconclusive,
    };
    Ok(Certificate {
        verdict,
        class_norms,
    })
}
