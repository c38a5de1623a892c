//! The billiard map as an explicit dynamical system.
//!
//! Orbits are computed two ways: from stationarity of the generating function
//! (`∂_2 S(t, t') + ∂_1 S(t', t'') = 0`) and from the vector reflection law at
//! the boundary. Neither route touches the variational machinery, so both
//! serve as oracles for caustics found by [`crate::variational`].
//!
//! Boundary parameters are kept as real-line lifts; an `(n, m)` orbit advances
//! by `2πn` over one period.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{boundary_point, chord, SupportFunction};

const BRACKET_INSET: f64 = 1e-6;
const BISECTION_WIDTH: f64 = 1e-6;
const POLISH_STEP: f64 = 1e-13;

/// An ordered pair of boundary parameters `(t, t')`, `t ≠ t'` mod 2π.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChordState {
    pub t: f64,
    pub t_next: f64,
}

impl ChordState {
    pub fn new(t: f64, t_next: f64) -> Self {
        Self { t, t_next }
    }

    pub fn reversed(self) -> Self {
        Self {
            t: self.t_next,
            t_next: self.t,
        }
    }
}

/// A sampled periodic configuration of boundary parameters (lifted).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Orbit {
    pub points: Vec<f64>,
    pub period: usize,
    pub rotation_index: i64,
}

impl Orbit {
    /// The `m` points `u(t0 + 2πnj/m)` of an orbit on a caustic with
    /// parametrization `u`.
    pub fn from_map(u: impl Fn(f64) -> f64, t0: f64, n: i64, m: usize) -> Self {
        let points = (0..m)
            .map(|j| u(t0 + TAU * n as f64 * j as f64 / m as f64))
            .collect();
        Self {
            points,
            period: m,
            rotation_index: n,
        }
    }
}

/// `g(t'') = ∂_2 S(t, t') + ∂_1 S(t', t'')`.
fn stationarity(p: &SupportFunction, incoming: f64, t_prime: f64, t_pp: f64) -> Result<f64> {
    Ok(incoming + chord(p, t_prime, t_pp)?.d1)
}

/// The bounce after the chord `(t, t')`: the unique `t'' ∈ (t', t' + 2π)`
/// solving `∂_2 S(t, t') + ∂_1 S(t', t'') = 0`.
///
/// Bisection narrows the bracket to `1e-6`, then Newton steps using the mixed
/// partial `∂_{12} S` polish to `1e-13`, falling back to bisection whenever a
/// step leaves the bracket.
pub fn next_point(p: &SupportFunction, t: f64, t_prime: f64) -> Result<f64> {
    let incoming = chord(p, t, t_prime)?.d2;
    let mut lo = t_prime + BRACKET_INSET;
    let mut hi = t_prime + TAU - BRACKET_INSET;
    let g_lo = stationarity(p, incoming, t_prime, lo)?;
    let g_hi = stationarity(p, incoming, t_prime, hi)?;
    // twist: ∂_1 S(t', ·) increases from -|∇| to +|∇| across the bracket
    if !(g_lo < 0.0 && g_hi > 0.0) {
        return Err(Error::Bracketing {
            t,
            t_prime,
            g_lo,
            g_hi,
        });
    }
    while hi - lo > BISECTION_WIDTH {
        let mid = 0.5 * (lo + hi);
        if stationarity(p, incoming, t_prime, mid)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..50 {
        let c = chord(p, t_prime, x)?;
        let g = incoming + c.d1;
        if g == 0.0 {
            break;
        }
        if g < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let mut step = -g / c.d12;
        if !(x + step > lo && x + step < hi) {
            step = 0.5 * (lo + hi) - x;
        }
        x += step;
        if step.abs() < POLISH_STEP {
            break;
        }
    }
    Ok(x)
}

/// The same bounce from the reflection law: reflect the incoming direction
/// about the outward normal `(cos t', sin t')` and intersect the reflected ray
/// with the boundary.
pub fn next_point_by_reflection(p: &SupportFunction, t: f64, t_prime: f64) -> Result<f64> {
    chord(p, t, t_prime)?;
    let a = boundary_point(p, t);
    let b = boundary_point(p, t_prime);
    let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
    let (ny, nx) = t_prime.sin_cos();
    let dot = dx * nx + dy * ny;
    let (rx, ry) = (dx - 2.0 * dot * nx, dy - 2.0 * dot * ny);
    // Signed angle between the reflected ray and the chord b → X(τ) changes
    // sign exactly once as τ sweeps (t', t' + 2π) on a convex curve.
    let side = |tau: f64| {
        let x = boundary_point(p, tau);
        rx * (x[1] - b[1]) - ry * (x[0] - b[0])
    };
    let mut lo = t_prime + BRACKET_INSET;
    let mut hi = t_prime + TAU - BRACKET_INSET;
    let (s_lo, s_hi) = (side(lo), side(hi));
    if (s_lo * s_hi).is_nan() || s_lo * s_hi >= 0.0 {
        return Err(Error::Bracketing {
            t,
            t_prime,
            g_lo: s_lo,
            g_hi: s_hi,
        });
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if side(mid) * s_lo > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Iterates the billiard map, returning `iterations + 2` lifted parameters
/// starting with `seed.t, seed.t_next`.
pub fn iterate(p: &SupportFunction, seed: ChordState, iterations: usize) -> Result<Vec<f64>> {
    let mut pts = Vec::with_capacity(iterations + 2);
    pts.push(seed.t);
    pts.push(seed.t_next);
    for j in 0..iterations {
        let next = next_point(p, pts[j], pts[j + 1])?;
        pts.push(next);
    }
    Ok(pts)
}

/// `max_j |∂_2 S(t_{j-1}, t_j) + ∂_1 S(t_j, t_{j+1})|` with cyclic indexing.
pub fn reflection_residual(p: &SupportFunction, orbit: &Orbit) -> Result<f64> {
    let pts = &orbit.points;
    let m = pts.len();
    if m < 2 {
        return Err(Error::InvalidArgument("orbit needs at least two points".into()));
    }
    let mut worst: f64 = 0.0;
    for j in 0..m {
        let prev = pts[(j + m - 1) % m];
        let next = pts[(j + 1) % m];
        let r = chord(p, prev, pts[j])?.d2 + chord(p, pts[j], next)?.d1;
        worst = worst.max(r.abs());
    }
    Ok(worst)
}

/// Pointwise residuals `|∂_2 S(t_{j-1}, t_j) + ∂_1 S(t_j, t_{j+1})|` for the
/// interior points of an open trajectory.
pub fn trajectory_residuals(p: &SupportFunction, pts: &[f64]) -> Result<Vec<f64>> {
    pts.windows(3)
        .map(|w| Ok((chord(p, w[0], w[1])?.d2 + chord(p, w[1], w[2])?.d1).abs()))
        .collect()
}

/// Rotation-number estimate with a continued-fraction lock-on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RotationEstimate {
    pub value: f64,
    pub iterations: usize,
    /// First convergent `(n, m)` within `1/iterations` of the estimate.
    pub rational: Option<(i64, i64)>,
}

/// `(t_N − t_0) / (2π N)` along the lifted orbit.
pub fn rotation_number(
    p: &SupportFunction,
    seed: ChordState,
    iterations: usize,
) -> Result<RotationEstimate> {
    if iterations < 100 {
        return Err(Error::InvalidArgument(format!(
            "rotation number needs at least 100 iterations, got {iterations}"
        )));
    }
    let pts = iterate(p, seed, iterations - 1)?;
    let value = (pts[iterations] - pts[0]) / (TAU * iterations as f64);
    let rational = lock_on(value, 1.0 / iterations as f64, 1000);
    Ok(RotationEstimate {
        value,
        iterations,
        rational,
    })
}

/// First continued-fraction convergent `n/m` with `|x − n/m| ≤ tol` and
/// `m ≤ max_den`.
pub fn lock_on(x: f64, tol: f64, max_den: i64) -> Option<(i64, i64)> {
    let (mut h0, mut h1) = (0i64, 1i64);
    let (mut k0, mut k1) = (1i64, 0i64);
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        let ai = a as i64;
        let h = ai.checked_mul(h1)?.checked_add(h0)?;
        let k = ai.checked_mul(k1)?.checked_add(k0)?;
        if k > max_den {
            return None;
        }
        if (x - h as f64 / k as f64).abs() <= tol {
            return Some((h, k));
        }
        (h0, h1, k0, k1) = (h1, h, k1, k);
        let frac = r - a;
        if frac < 1e-15 {
            return None;
        }
        r = 1.0 / frac;
    }
    None
}
