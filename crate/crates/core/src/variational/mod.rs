//! The periodic-orbit error functional `E^m(p, u)` and its expansion around
//! the unit disc.
//!
//! A circle map `u(t) = t + φ(t)` parametrizes an `n/m` caustic of `p` when
//! every `m`-gon `u(t), u(t + 2πn/m), …` is a billiard orbit, which is the
//! statement `E^m(p, u) ≡ 0` with
//!
//! ```text
//! E^m(p, u)(t) = ∂_1 S_p(u(t), u⁺(t)) + ∂_2 S_p(u⁻(t), u(t)),   u±(t) = u(t ± 2πn/m).
//! ```
//!
//! Along a deformation `p = 1 + εp₁ + …`, `u = id + εu₁ + …` the functional
//! expands as `ε E_{1,0} + ε² E_{1,1} + O(ε³)`. Both coefficients are
//! assembled here from closed forms by coefficient algebra and checked
//! against numerical ε-derivatives of the functional itself.

mod e11;
mod newton;

pub use e11::{e11_projection, expansion_term_e11, E11Term, Field, Trig, E11_TERMS, E11_TERM_COUNT};
pub use newton::{
    newton_solve_caustic, newton_solve_caustic_with, rotate_candidate, NewtonOptions, NewtonReport,
};

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dynamics::Orbit;
use crate::error::{Error, Result};
use crate::fourier::{FourierSeries, ModeSet, ZERO_TOL};
use crate::geometry::{chord, Deformation, SupportFunction};

/// Smallest sampling grid used for monotonicity and residual checks.
pub const MIN_GRID: usize = 64;

/// Rotation number `n/m` of a caustic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rotation {
    pub n: i64,
    pub m: u32,
}

impl Rotation {
    pub fn new(n: i64, m: u32) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidArgument(format!("period m = {m} must be at least 2")));
        }
        if n < 1 || n >= m as i64 {
            return Err(Error::InvalidArgument(format!(
                "winding n = {n} must lie in [1, m - 1] for m = {m}"
            )));
        }
        Ok(Self { n, m })
    }

    /// The parameter advance `2πn/m` per bounce.
    pub fn step(&self) -> f64 {
        TAU * self.n as f64 / self.m as f64
    }
}

/// A degree-one circle map `u(t) = t + φ(t)` tagged with the rotation number
/// of the caustic it is meant to parametrize.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CausticCandidate {
    pub periodic_part: FourierSeries,
    pub rotation: Rotation,
}

impl CausticCandidate {
    /// Validates that `φ` is real and `1 + φ' > 0` on the sample grid.
    pub fn new(periodic_part: FourierSeries, rotation: Rotation) -> Result<Self> {
        if !periodic_part.is_real() {
            return Err(Error::InvalidArgument(
                "periodic part of a circle map must be real-flagged".into(),
            ));
        }
        let candidate = Self {
            periodic_part,
            rotation,
        };
        candidate.check_monotone()?;
        Ok(candidate)
    }

    /// `u = id` with rotation `1/m`.
    pub fn identity(m: u32) -> Result<Self> {
        Self::new(FourierSeries::zeros(0, true), Rotation::new(1, m)?)
    }

    pub fn m(&self) -> u32 {
        self.rotation.m
    }

    /// `u(t)`.
    pub fn eval(&self, t: f64) -> f64 {
        t + self.periodic_part.eval_re(t)
    }

    /// `min (1 + φ')` over the monotonicity grid.
    pub fn monotonicity_margin(&self) -> f64 {
        let dphi = self.periodic_part.derivative(1);
        let n = grid_size(self.periodic_part.order());
        dphi.samples_re(n)
            .into_iter()
            .map(|d| 1.0 + d)
            .fold(f64::INFINITY, f64::min)
    }

    fn check_monotone(&self) -> Result<()> {
        let dphi = self.periodic_part.derivative(1);
        let n = grid_size(self.periodic_part.order());
        for (j, d) in dphi.samples_re(n).into_iter().enumerate() {
            if 1.0 + d <= 0.0 {
                return Err(Error::NotMonotone {
                    at: TAU * j as f64 / n as f64,
                    margin: 1.0 + d,
                });
            }
        }
        Ok(())
    }

    /// The `m` boundary parameters `u(t0 + 2πnj/m)`.
    pub fn orbit(&self, t0: f64) -> Orbit {
        Orbit::from_map(|t| self.eval(t), t0, self.rotation.n, self.rotation.m as usize)
    }
}

fn grid_size(order: usize) -> usize {
    (4 * order + 1).max(MIN_GRID)
}

/// Grid samples of `E^m(p, u)` and the interpolating series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorReport {
    pub series: FourierSeries,
    pub samples: Vec<f64>,
    pub sup_norm: f64,
    /// Shortest chord met while sampling.
    pub min_chord: f64,
}

/// `E^m(p, u)` sampled on `max(4K + 1, 64)` points, `K` the larger of the
/// two truncation orders.
pub fn error_functional(p: &SupportFunction, u: &CausticCandidate) -> Result<ErrorReport> {
    let order = p.series().order().max(u.periodic_part.order());
    error_functional_on(p, u, grid_size(order))
}

/// `E^m(p, u)` on a uniform grid of `n` points.
pub fn error_functional_on(p: &SupportFunction, u: &CausticCandidate, n: usize) -> Result<ErrorReport> {
    u.check_monotone()?;
    let h = u.rotation.step();
    let mut samples = Vec::with_capacity(n);
    let mut min_chord = f64::INFINITY;
    for j in 0..n {
        let t = TAU * j as f64 / n as f64;
        let (um, u0, up) = (u.eval(t - h), u.eval(t), u.eval(t + h));
        let fwd = chord(p, u0, up)?;
        let bwd = chord(p, um, u0)?;
        min_chord = min_chord.min(fwd.length).min(bwd.length);
        samples.push(fwd.d1 + bwd.d2);
    }
    let series = FourierSeries::from_real_samples(&samples, (n - 1) / 2)?;
    let sup_norm = samples.iter().fold(0.0_f64, |a, s| a.max(s.abs()));
    Ok(ErrorReport {
        series,
        samples,
        sup_norm,
        min_chord,
    })
}

/// `a_{m,k} = i (k cot²(πk/m) − cot(π/m) cot(πk/m))`, the first-order
/// response of mode `k` of `u` to mode `k` of `p`.
pub fn a_coeff(m: u32, k: i64) -> Result<Complex64> {
    check_m(m)?;
    if k.rem_euclid(m as i64) == 0 {
        return Err(Error::ResonantMode { m, k });
    }
    let mf = m as f64;
    let ck = 1.0 / (PI * k as f64 / mf).tan();
    let c1 = 1.0 / (PI / mf).tan();
    Ok(Complex64::new(0.0, k as f64 * ck * ck - c1 * ck))
}

fn check_m(m: u32) -> Result<()> {
    if m < 2 {
        return Err(Error::InvalidArgument(format!("period m = {m} must be at least 2")));
    }
    Ok(())
}

/// Result of the first-order cohomological solve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum FirstOrder {
    /// `u₁` with `u_{1,k} = a_{m,k} p_{1,k}` off `mZ` and zero on `mZ`.
    Solved { u1: FourierSeries },
    /// `𝓕_{mZ∖{0}}(p₁) ≠ 0`; no `u₁` cancels these modes.
    Obstructed { projection: FourierSeries },
}

impl FirstOrder {
    pub fn solved(self) -> Option<FourierSeries> {
        match self {
            FirstOrder::Solved { u1 } => Some(u1),
            FirstOrder::Obstructed { .. } => None,
        }
    }
}

/// Solves `E_{1,0}^m(p₁, u₁) = 0` for `u₁`, or reports the obstruction.
pub fn solve_first_order(m: u32, p1: &FourierSeries) -> Result<FirstOrder> {
    check_m(m)?;
    if !p1.is_real() {
        return Err(Error::InvalidArgument("p1 must be real-flagged".into()));
    }
    let resonant = p1.project(&ModeSet::NonzeroMultiples(m as i64));
    if resonant.max_abs_coeff() >= ZERO_TOL {
        return Ok(FirstOrder::Obstructed {
            projection: resonant,
        });
    }
    let mut modes = Vec::new();
    for (k, c) in p1.modes() {
        if k.rem_euclid(m as i64) != 0 {
            modes.push((k, a_coeff(m, k)? * c));
        }
    }
    let u1 = FourierSeries::from_modes(p1.order(), modes, true)?;
    Ok(FirstOrder::Solved { u1 })
}

/// `½[sin(π/m)(ṗ⁺ + ṗ⁻ + 2ṗ + u⁺ + u⁻ − 2u) + cos(π/m)(p⁻ − p⁺)]` with
/// shifts by `2π/m`.
fn linear_form(m: u32, p: &FourierSeries, u: &FourierSeries) -> FourierSeries {
    let h = TAU / m as f64;
    let (s, c) = (PI / m as f64).sin_cos();
    let pd = p.derivative(1);
    let order = p.order().max(u.order());
    let pd = pd.with_order(order);
    let u = u.with_order(order);
    let p = p.with_order(order);
    let slope = &(&(&pd.shift(h) + &pd.shift(-h)) + &(&pd * 2.0))
        + &(&(&u.shift(h) + &u.shift(-h)) - &(&u * 2.0));
    let tilt = &p.shift(-h) - &p.shift(h);
    &(&slope * (0.5 * s)) + &(&tilt * (0.5 * c))
}

/// The first-order coefficient `E_{1,0}^m(p₁, u₁)`.
pub fn expansion_term_e10(m: u32, p1: &FourierSeries, u1: &FourierSeries) -> FourierSeries {
    linear_form(m, p1, u1)
}

/// The new top-order term `Ẽ_{N+1,0}^m(p_{N+1}, u_{N+1})` of the recurrence;
/// it has the same linear form as `E_{1,0}^m`.
pub fn recurrence_tilde(m: u32, p_next: &FourierSeries, u_next: &FourierSeries) -> FourierSeries {
    linear_form(m, p_next, u_next)
}

/// Analytic versus numerical expansion coefficient.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpansionReport {
    pub order: u32,
    pub analytic_term: FourierSeries,
    pub numeric_term: FourierSeries,
    /// Sup over the grid of `|analytic − numeric|`.
    pub discrepancy: f64,
}

/// Stencil steps for numerical ε-derivatives; combined by Richardson
/// extrapolation with ratio `(h₀/h₁)⁴`.
pub const EPS_STEPS: [f64; 2] = [1e-3, 1e-4];

/// Samples of `E^m(1 + εp₁, id + εu₁)` on `n` points.
pub fn perturbed_samples(m: u32, p1: &FourierSeries, u1: &FourierSeries, eps: f64, n: usize) -> Result<Vec<f64>> {
    let p = SupportFunction::new(&FourierSeries::constant(1.0) + &(p1 * eps))?;
    let u = CausticCandidate::new(u1 * eps, Rotation::new(1, m)?)?;
    Ok(error_functional_on(&p, &u, n)?.samples)
}

/// Richardson-extrapolated first derivative and half second derivative of
/// `ε ↦ E^m(1 + εp₁, id + εu₁)` at `ε = 0`, i.e. the Taylor coefficients of
/// order 1 and 2, sampled on `n` points.
pub fn numeric_taylor(m: u32, p1: &FourierSeries, u1: &FourierSeries, n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let f0 = perturbed_samples(m, p1, u1, 0.0, n)?;
    let mut firsts = Vec::new();
    let mut seconds = Vec::new();
    for h in EPS_STEPS {
        let fm2 = perturbed_samples(m, p1, u1, -2.0 * h, n)?;
        let fm1 = perturbed_samples(m, p1, u1, -h, n)?;
        let fp1 = perturbed_samples(m, p1, u1, h, n)?;
        let fp2 = perturbed_samples(m, p1, u1, 2.0 * h, n)?;
        let d1: Vec<f64> = (0..n)
            .map(|j| (fm2[j] - 8.0 * fm1[j] + 8.0 * fp1[j] - fp2[j]) / (12.0 * h))
            .collect();
        let d2: Vec<f64> = (0..n)
            .map(|j| {
                (-fm2[j] + 16.0 * fm1[j] - 30.0 * f0[j] + 16.0 * fp1[j] - fp2[j]) / (24.0 * h * h)
            })
            .collect();
        firsts.push(d1);
        seconds.push(d2);
    }
    let ratio = (EPS_STEPS[0] / EPS_STEPS[1]).powi(4);
    let extrapolate = |coarse: &[f64], fine: &[f64]| -> Vec<f64> {
        coarse
            .iter()
            .zip(fine)
            .map(|(c, f)| (ratio * f - c) / (ratio - 1.0))
            .collect()
    };
    Ok((
        extrapolate(&firsts[0], &firsts[1]),
        extrapolate(&seconds[0], &seconds[1]),
    ))
}

/// Compares `E_{1,0}^m` and `E_{1,1}^m` with numerical ε-derivatives of the
/// functional on a grid fine enough to resolve `E_{1,1}` exactly.
pub fn expansion_reports(m: u32, p1: &FourierSeries, u1: &FourierSeries) -> Result<[ExpansionReport; 2]> {
    check_m(m)?;
    let order = p1.order().max(u1.order()).max(1);
    let n = 8 * order + 1;
    let (d1, d2) = numeric_taylor(m, p1, u1, n)?;
    let e10 = expansion_term_e10(m, p1, u1);
    let e11 = expansion_term_e11(m, p1, u1);
    let report = |ord: u32, analytic: FourierSeries, numeric: Vec<f64>| -> Result<ExpansionReport> {
        let grid = analytic.samples_re(n);
        let discrepancy = grid
            .iter()
            .zip(&numeric)
            .fold(0.0_f64, |a, (x, y)| a.max((x - y).abs()));
        Ok(ExpansionReport {
            order: ord,
            numeric_term: FourierSeries::from_real_samples(&numeric, (n - 1) / 2)?,
            analytic_term: analytic,
            discrepancy,
        })
    };
    Ok([report(1, e10, d1)?, report(2, e11, d2)?])
}

/// `E^m(P_N(ε), U_N(ε))` for a polynomial deformation.
pub fn deformation_residual(m: u32, deformation: &Deformation, eps: f64, n: usize) -> Result<Vec<f64>> {
    let p = deformation.support_at(eps)?;
    let u = CausticCandidate::new(deformation.map_series(eps), Rotation::new(1, m)?)?;
    Ok(error_functional_on(&p, &u, n)?.samples)
}

/// Log-log slope of `ε ↦ ‖E^m(P_{N+1}, U_{N+1}) − E^m(P_N, U_N) − ε^{N+1} Ẽ‖`
/// over `eps`, where `N + 1` is the degree of `deformation`. The recurrence
/// predicts a slope of at least `N + 2`.
pub fn recurrence_order_slope(m: u32, deformation: &Deformation, eps: &[f64]) -> Result<f64> {
    let top = deformation.degree();
    if top < 2 || eps.len() < 2 {
        return Err(Error::InvalidArgument(
            "recurrence check needs degree ≥ 2 and at least two ε values".into(),
        ));
    }
    let lower = deformation.truncated(top - 1)?;
    let tilde = recurrence_tilde(m, deformation.p(top), deformation.u(top));
    let order = deformation
        .p(top)
        .order()
        .max(deformation.u(top).order())
        .max(1);
    let n = grid_size(4 * order);
    let tilde_grid = tilde.samples_re(n);
    let mut xs = Vec::with_capacity(eps.len());
    let mut ys = Vec::with_capacity(eps.len());
    for &e in eps {
        let hi = deformation_residual(m, deformation, e, n)?;
        let lo = deformation_residual(m, &lower, e, n)?;
        let scale = e.powi(top as i32);
        let gap = (0..n)
            .map(|j| (hi[j] - lo[j] - scale * tilde_grid[j]).abs())
            .fold(0.0_f64, f64::max);
        xs.push(e.ln());
        ys.push(gap.ln());
    }
    Ok(least_squares_slope(&xs, &ys))
}

fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}
