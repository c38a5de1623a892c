//! Strictly convex domains given by their support function.
//!
//! For a support function `p`, the boundary point with outward normal angle
//! `t` is `(p cos t − ṗ sin t, p sin t + ṗ cos t)` and the radius of curvature
//! there is `p + p̈`. The billiard generating function `S_p(t, t')` is the chord
//! length between two such points, written in closed form in `p, ṗ` at both
//! ends so that its partial derivatives come out without square-root sign
//! ambiguities.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier::{FourierSeries, ModeSet};

/// Chords with endpoints closer than this (mod 2π) are refused.
pub const DEGENERATE_CHORD: f64 = 1e-9;

const MIN_CERT_GRID: usize = 512;
const MAX_CERT_DOUBLINGS: usize = 6;

/// A real trigonometric polynomial certified to be a positive, strictly
/// convex support function.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportFunction {
    series: FourierSeries,
    convexity_margin: f64,
}

impl SupportFunction {
    /// Certifies `p > 0` and `p + p̈ > 0` on a grid of `max(4K+1, 512)` points,
    /// doubling the grid until the convexity margin moves by less than 1%.
    pub fn new(series: FourierSeries) -> Result<Self> {
        if !series.is_real() {
            return Err(Error::InvalidArgument(
                "support function must be a real-flagged series".into(),
            ));
        }
        let mut n = (4 * series.order() + 1).max(MIN_CERT_GRID);
        let mut margin = certify(&series, n)?;
        for _ in 0..MAX_CERT_DOUBLINGS {
            n *= 2;
            let refined = certify(&series, n)?;
            let settled = (refined - margin).abs() <= 0.01 * margin.abs();
            margin = margin.min(refined);
            if settled {
                break;
            }
        }
        Ok(Self {
            series,
            convexity_margin: margin,
        })
    }

    /// The disc of radius `radius` centred at the origin.
    pub fn disc(radius: f64) -> Result<Self> {
        Self::new(FourierSeries::constant(radius))
    }

    /// `√(cos²t + (b sin t)²)`, the support function of the ellipse with
    /// semi-axes `1` and `b`, truncated at `order` modes.
    pub fn ellipse(b: f64, order: usize) -> Result<Self> {
        let n = 8 * order.max(8) + 1;
        let values: Vec<f64> = (0..n)
            .map(|j| {
                let t = TAU * j as f64 / n as f64;
                (t.cos().powi(2) + (b * t.sin()).powi(2)).sqrt()
            })
            .collect();
        Self::new(FourierSeries::from_real_samples(&values, order)?)
    }

    /// The shared cross-module fixture: semi-axes `1` and `0.95`, `K = 32`.
    pub fn ellipse_fixture() -> Self {
        Self::ellipse(0.95, 32).expect("fixture ellipse is strictly convex")
    }

    pub fn series(&self) -> &FourierSeries {
        &self.series
    }

    pub fn convexity_margin(&self) -> f64 {
        self.convexity_margin
    }

    /// `λ p`; every chord length scales by `λ`.
    pub fn scaled(&self, lambda: f64) -> Result<Self> {
        Self::new(&self.series * lambda)
    }

    /// `t ↦ p(t + σ)`, the domain rotated by `-σ`.
    pub fn rotated(&self, sigma: f64) -> Result<Self> {
        Self::new(self.series.shift(sigma))
    }

    /// `(p, ṗ, p̈)` at `t`.
    #[inline]
    pub fn jet(&self, t: f64) -> [f64; 3] {
        self.series.eval_jet2(t)
    }
}

fn certify(series: &FourierSeries, n: usize) -> Result<f64> {
    let mut margin = f64::INFINITY;
    for j in 0..n {
        let t = TAU * j as f64 / n as f64;
        let [p, _, pdd] = series.eval_jet2(t);
        if p <= 0.0 {
            return Err(Error::NonPositiveSupport { at: t, value: p });
        }
        let rc = p + pdd;
        if rc <= 0.0 {
            return Err(Error::NotConvex { at: t, margin: rc });
        }
        margin = margin.min(rc);
    }
    Ok(margin)
}

/// The boundary point with outward normal angle `t`.
pub fn boundary_point(p: &SupportFunction, t: f64) -> [f64; 2] {
    let [pv, pd, _] = p.jet(t);
    let (s, c) = t.sin_cos();
    [pv * c - pd * s, pv * s + pd * c]
}

/// `p(t) + p̈(t)`.
pub fn radius_of_curvature(p: &SupportFunction, t: f64) -> f64 {
    let [pv, _, pdd] = p.jet(t);
    pv + pdd
}

/// Outcome of a constant-width test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WidthReport {
    pub is_constant_width: bool,
    /// Average width `2 p_0`.
    pub omega: f64,
    /// ℓ² norm of the nonzero even modes.
    pub even_norm: f64,
    /// Positive even modes whose amplitude is at least `tol`.
    pub offending_modes: Vec<i64>,
}

/// A convex body has constant width iff its support function has no nonzero
/// even modes; the width is then `ω = 2 p_0`.
pub fn constant_width_check(p: &SupportFunction, tol: f64) -> WidthReport {
    let even = p.series.project(&ModeSet::NonzeroMultiples(2));
    let even_norm = even.l2_norm();
    let offending_modes = even
        .modes()
        .filter(|(k, c)| *k > 0 && c.norm() >= tol)
        .map(|(k, _)| k)
        .collect();
    WidthReport {
        is_constant_width: even_norm < tol,
        omega: 2.0 * p.series.coeff(0).re,
        even_norm,
        offending_modes,
    }
}

fn check_chord(t: f64, t_prime: f64) -> Result<()> {
    let d = (t - t_prime).rem_euclid(TAU);
    if d.min(TAU - d) < DEGENERATE_CHORD {
        return Err(Error::DegenerateChord { t, t_prime });
    }
    Ok(())
}

/// Chord data shared by `S` and its partials.
#[derive(Debug, Clone, Copy)]
pub struct Chord {
    /// `S(t, t')`.
    pub length: f64,
    /// `∂S/∂t`.
    pub d1: f64,
    /// `∂S/∂t'`.
    pub d2: f64,
    /// `∂²S/∂t∂t'`.
    pub d12: f64,
}

/// Chord length and its derivatives, from jets at both ends.
#[inline]
fn chord_from_jets(a: [f64; 3], b: [f64; 3], t: f64, t_prime: f64) -> Chord {
    let [p, pd, pdd] = a;
    let [q, qd, qdd] = b;
    let (s, c) = (t - t_prime).sin_cos();
    // |X(t) − X(t')| loses one order of the gap to cancellation where the
    // expanded S² loses two.
    let (sa, ca) = t.sin_cos();
    let (sb, cb) = t_prime.sin_cos();
    let dx = (p * ca - pd * sa) - (q * cb - qd * sb);
    let dy = (p * sa + pd * ca) - (q * sb + qd * cb);
    let length = dx.hypot(dy);
    // ∂(S²)/∂t = 2(p + p̈)(ṗ + q sin − q̇ cos), ∂(S²)/∂t' = 2(q + q̈)(q̇ − p sin − ṗ cos)
    let rp = p + pdd;
    let rq = q + qdd;
    let d1 = rp * (pd + q * s - qd * c) / length;
    let d2 = rq * (qd - p * s - pd * c) / length;
    let d12 = -(rp * rq * c + d1 * d2) / length;
    Chord {
        length,
        d1,
        d2,
        d12,
    }
}

/// Full chord data at `(t, t')`.
pub fn chord(p: &SupportFunction, t: f64, t_prime: f64) -> Result<Chord> {
    check_chord(t, t_prime)?;
    Ok(chord_from_jets(p.jet(t), p.jet(t_prime), t, t_prime))
}

/// `S_p(t, t')`, the chord length between the boundary points `t` and `t'`.
pub fn generating_function(p: &SupportFunction, t: f64, t_prime: f64) -> Result<f64> {
    chord(p, t, t_prime).map(|c| c.length)
}

/// Which argument of `S` to differentiate in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Slot {
    First,
    Second,
}

/// `∂_1 S_p(t, t')` or `∂_2 S_p(t, t')`.
pub fn partial_s(p: &SupportFunction, t: f64, t_prime: f64, which: Slot) -> Result<f64> {
    let c = chord(p, t, t_prime)?;
    Ok(match which {
        Slot::First => c.d1,
        Slot::Second => c.d2,
    })
}

/// A polynomial deformation `P_N(ε) = Σ ε^n p_n` of the unit disc together
/// with its companion circle maps `U_N(ε) = id + Σ ε^n u_n`.
#[derive(Debug, Clone)]
pub struct Deformation {
    p_orders: Vec<FourierSeries>,
    u_orders: Vec<FourierSeries>,
    epsilon_max: f64,
}

impl Deformation {
    /// `p_orders[n-1] = p_n` and `u_orders[n-1] = u_n` for `n = 1..=N`.
    /// Every `p_n` must be real with zero mean (`𝓕_0(p_n) = 0`).
    pub fn new(p_orders: Vec<FourierSeries>, u_orders: Vec<FourierSeries>) -> Result<Self> {
        if p_orders.len() != u_orders.len() {
            return Err(Error::InvalidArgument(format!(
                "{} support orders but {} circle-map orders",
                p_orders.len(),
                u_orders.len()
            )));
        }
        for (n, p) in p_orders.iter().enumerate() {
            if !p.is_real() {
                return Err(Error::InvalidArgument(format!("p_{} is not real", n + 1)));
            }
            if p.coeff(0).norm() > crate::fourier::ZERO_TOL {
                return Err(Error::InvalidArgument(format!(
                    "p_{} has nonzero mean {}",
                    n + 1,
                    p.coeff(0).re
                )));
            }
        }
        let mut d = Self {
            p_orders,
            u_orders,
            epsilon_max: 0.0,
        };
        d.epsilon_max = d.find_epsilon_max();
        Ok(d)
    }

    pub fn degree(&self) -> usize {
        self.p_orders.len()
    }

    pub fn p(&self, n: usize) -> &FourierSeries {
        &self.p_orders[n - 1]
    }

    pub fn u(&self, n: usize) -> &FourierSeries {
        &self.u_orders[n - 1]
    }

    /// Largest `ε ∈ [0, 1]` (to bisection accuracy) for which `P_N(ε)` is a
    /// valid support function.
    pub fn epsilon_max(&self) -> f64 {
        self.epsilon_max
    }

    /// Drops orders above `n`.
    pub fn truncated(&self, n: usize) -> Result<Self> {
        Self::new(self.p_orders[..n].to_vec(), self.u_orders[..n].to_vec())
    }

    /// `Σ_{n ≤ N} ε^n p_n` with `p_0 = 1`, as a bare series.
    pub fn support_series(&self, eps: f64) -> FourierSeries {
        let mut acc = FourierSeries::constant(1.0);
        let mut pow = 1.0;
        for p in &self.p_orders {
            pow *= eps;
            acc = &acc + &(p * pow);
        }
        acc
    }

    /// `Σ_{1 ≤ n ≤ N} ε^n u_n`, the periodic part of `U_N(ε)`.
    pub fn map_series(&self, eps: f64) -> FourierSeries {
        let mut acc = FourierSeries::zeros(0, true);
        let mut pow = 1.0;
        for u in &self.u_orders {
            pow *= eps;
            acc = &acc + &(u * pow);
        }
        acc
    }

    pub fn support_at(&self, eps: f64) -> Result<SupportFunction> {
        SupportFunction::new(self.support_series(eps))
    }

    fn find_epsilon_max(&self) -> f64 {
        let valid = |e: f64| self.support_at(e).is_ok();
        if valid(1.0) {
            return 1.0;
        }
        let (mut lo, mut hi) = (0.0, 1.0);
        for _ in 0..40 {
            let mid = 0.5 * (lo + hi);
            if valid(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn p_cos(k: usize, eps: f64) -> SupportFunction {
        SupportFunction::new(FourierSeries::from_cos_sin(1.0, &[(k, eps)], &[])).unwrap()
    }

    #[test]
    fn boundary_point_examples() {
        let disc = SupportFunction::disc(1.0).unwrap();
        let [x, y] = boundary_point(&disc, 0.0);
        assert_abs_diff_eq!(x, 1.0);
        assert_abs_diff_eq!(y, 0.0);
        let big = SupportFunction::disc(2.5).unwrap();
        let [x, y] = boundary_point(&big, 1.1);
        assert_abs_diff_eq!(x, 2.5 * 1.1f64.cos(), epsilon = 1e-15);
        assert_abs_diff_eq!(y, 2.5 * 1.1f64.sin(), epsilon = 1e-15);
        let [x, y] = boundary_point(&p_cos(3, 0.1), 0.0);
        assert_abs_diff_eq!(x, 1.1, epsilon = 1e-15);
        assert_abs_diff_eq!(y, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn radius_of_curvature_examples() {
        let disc = SupportFunction::disc(1.0).unwrap();
        assert_abs_diff_eq!(radius_of_curvature(&disc, 0.4), 1.0);
        let eps = 0.05;
        let p = p_cos(3, eps);
        for t in [0.0, 0.3, 1.7] {
            assert_abs_diff_eq!(
                radius_of_curvature(&p, t),
                1.0 - 8.0 * eps * (3.0 * t).cos(),
                epsilon = 1e-14
            );
        }
        // ε = 1/8 touches the convexity boundary: certification must refuse it.
        let edge = FourierSeries::from_cos_sin(1.0, &[(3, 0.125)], &[]);
        assert_abs_diff_eq!(edge.eval_jet2(0.0)[0] + edge.eval_jet2(0.0)[2], 0.0, epsilon = 1e-15);
        assert!(matches!(SupportFunction::new(edge), Err(Error::NotConvex { .. })));
    }

    #[test]
    fn constant_width_examples() {
        let disc = constant_width_check(&SupportFunction::disc(1.0).unwrap(), 1e-10);
        assert!(disc.is_constant_width);
        assert_abs_diff_eq!(disc.omega, 2.0);
        let reuleaux_like = constant_width_check(&p_cos(3, 0.1), 1e-10);
        assert!(reuleaux_like.is_constant_width);
        assert_abs_diff_eq!(reuleaux_like.omega, 2.0);
        let oval = constant_width_check(&p_cos(2, 0.1), 1e-10);
        assert!(!oval.is_constant_width);
        assert_abs_diff_eq!(oval.omega, 2.0);
        assert_eq!(oval.offending_modes, vec![2]);
    }

    #[test]
    fn generating_function_examples() {
        let disc = SupportFunction::disc(1.0).unwrap();
        let s = generating_function(&disc, 0.0, 2.0 * PI / 3.0).unwrap();
        assert_abs_diff_eq!(s, 3f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(generating_function(&disc, 0.0, PI).unwrap(), 2.0, epsilon = 1e-15);
        let big = SupportFunction::disc(1.7).unwrap();
        for (t, tp) in [(0.1, 2.0), (4.0, 0.3)] {
            let lhs = generating_function(&big, t, tp).unwrap();
            let rhs = 1.7 * generating_function(&disc, t, tp).unwrap();
            assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-14);
        }
        assert!(matches!(
            generating_function(&disc, 1.0, 1.0 + TAU),
            Err(Error::DegenerateChord { .. })
        ));
    }

    #[test]
    fn partial_examples() {
        let disc = SupportFunction::disc(1.0).unwrap();
        let a = 2.0 * PI / 3.0;
        assert_abs_diff_eq!(partial_s(&disc, 0.0, a, Slot::First).unwrap(), -0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(partial_s(&disc, 0.0, a, Slot::Second).unwrap(), 0.5, epsilon = 1e-15);
        for a in [0.3, 1.0, 2.5, 4.0, 6.0] {
            for t in [0.0, 1.3] {
                let lhs = partial_s(&disc, t, t + a, Slot::First).unwrap()
                    + partial_s(&disc, t - a, t, Slot::Second).unwrap();
                assert_abs_diff_eq!(lhs, 0.0, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn mixed_partial_matches_finite_difference() {
        let p = SupportFunction::ellipse_fixture();
        let (t, tp) = (0.4, 2.9);
        let h = 1e-5;
        let d1 = |x: f64| chord(&p, t, x).unwrap().d1;
        let fd = (d1(tp + h) - d1(tp - h)) / (2.0 * h);
        assert_abs_diff_eq!(chord(&p, t, tp).unwrap().d12, fd, epsilon = 1e-8);
    }

    #[test]
    fn deformation_validity_radius() {
        let p1 = FourierSeries::cos_mode(3, 1.0);
        let d = Deformation::new(vec![p1], vec![FourierSeries::zeros(0, true)]).unwrap();
        // 1 + ε cos 3t is convex iff 8ε < 1
        assert_abs_diff_eq!(d.epsilon_max(), 0.125, epsilon = 1e-9);
        let bad = Deformation::new(vec![FourierSeries::constant(0.1)], vec![FourierSeries::constant(0.0)]);
        assert!(bad.is_err());
    }
}
