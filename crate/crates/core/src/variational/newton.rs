//! Damped Gauss–Newton on the sampled error functional.
//!
//! Unknowns are the real cosine/sine coefficients of the modes `k ∉ mZ` of the
//! periodic part of `u`. Mode 0 (the rotation gauge) and the resonant modes
//! `k ∈ mZ` (the kernel of the linearization at the disc) stay at their
//! initial values.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{error_functional_on, CausticCandidate};
use crate::error::{Error, Result};
use crate::fourier::FourierSeries;
use crate::geometry::SupportFunction;

const MIN_CHORD: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NewtonOptions {
    pub tol: f64,
    pub max_iterations: usize,
    pub max_halvings: usize,
    /// Central-difference step for Jacobian columns.
    pub fd_step: f64,
    /// Truncation order of the unknown; defaults to `max(K_p, K_u, 4)`.
    pub order: Option<usize>,
}

impl NewtonOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            tol,
            ..Self::default()
        }
    }
}

impl Default for NewtonOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iterations: 50,
            max_halvings: 8,
            fd_step: 1e-7,
            order: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NewtonReport {
    pub candidate: CausticCandidate,
    pub iterations: usize,
    /// Grid sup-norm of the final residual.
    pub residual: f64,
    /// Residual sup-norm before each iteration, then the final one.
    pub history: Vec<f64>,
}

/// Solves `E^m(p, u) = 0` starting from `u_init` with default options.
pub fn newton_solve_caustic(
    p: &SupportFunction,
    m: u32,
    u_init: &CausticCandidate,
    tol: f64,
) -> Result<NewtonReport> {
    if u_init.m() != m {
        return Err(Error::InvalidArgument(format!(
            "initial candidate has period {} but m = {m}",
            u_init.m()
        )));
    }
    newton_solve_caustic_with(p, u_init, NewtonOptions::with_tol(tol))
}

struct Layout {
    order: usize,
    modes: Vec<i64>,
    base: FourierSeries,
}

impl Layout {
    fn new(u: &CausticCandidate, order: usize) -> Self {
        let m = u.m() as i64;
        let modes = (1..=order as i64).filter(|k| k % m != 0).collect();
        Self {
            order,
            modes,
            base: u.periodic_part.with_order(order),
        }
    }

    fn unknowns(&self) -> usize {
        2 * self.modes.len()
    }

    /// `(a_k, b_k)` with `φ ⊃ a_k cos kt + b_k sin kt`.
    fn pack(&self, phi: &FourierSeries) -> DVector<f64> {
        let mut x = DVector::zeros(self.unknowns());
        for (i, &k) in self.modes.iter().enumerate() {
            let c = phi.coeff(k);
            x[2 * i] = 2.0 * c.re;
            x[2 * i + 1] = -2.0 * c.im;
        }
        x
    }

    fn unpack(&self, x: &DVector<f64>) -> Result<FourierSeries> {
        let mut modes: Vec<(i64, Complex64)> = self
            .base
            .modes()
            .filter(|(k, _)| !self.modes.contains(&k.abs()))
            .collect();
        for (i, &k) in self.modes.iter().enumerate() {
            let c = Complex64::new(0.5 * x[2 * i], -0.5 * x[2 * i + 1]);
            modes.push((k, c));
            modes.push((-k, c.conj()));
        }
        FourierSeries::from_modes(self.order, modes, true)
    }
}

/// Damped Gauss–Newton with explicit options.
pub fn newton_solve_caustic_with(
    p: &SupportFunction,
    u_init: &CausticCandidate,
    opts: NewtonOptions,
) -> Result<NewtonReport> {
    let order = opts
        .order
        .unwrap_or_else(|| p.series().order().max(u_init.periodic_part.order()).max(4));
    let grid = 4 * order + 1;
    let layout = Layout::new(u_init, order);
    let rotation = u_init.rotation;

    let residual = |x: &DVector<f64>| -> Result<(CausticCandidate, DVector<f64>, f64)> {
        let cand = CausticCandidate::new(layout.unpack(x)?, rotation)?;
        let rep = error_functional_on(p, &cand, grid)?;
        if rep.min_chord < MIN_CHORD {
            return Err(Error::InvalidArgument(format!(
                "chord length {:e} fell below {MIN_CHORD:e}",
                rep.min_chord
            )));
        }
        let sup = rep.sup_norm;
        Ok((cand, DVector::from_vec(rep.samples), sup))
    };

    let mut x = layout.pack(&layout.base);
    let (mut cand, mut r, mut sup) = residual(&x)?;
    let mut history = vec![sup];
    let mut iterations = 0;
    while sup >= opts.tol {
        if iterations == opts.max_iterations {
            return Err(Error::NoConvergence {
                iterations,
                residual: sup,
            });
        }
        iterations += 1;
        let n = layout.unknowns();
        let mut jac = DMatrix::zeros(grid, n);
        for j in 0..n {
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[j] += opts.fd_step;
            xm[j] -= opts.fd_step;
            let (_, rp, _) = residual(&xp)?;
            let (_, rm, _) = residual(&xm)?;
            jac.set_column(j, &((rp - rm) / (2.0 * opts.fd_step)));
        }
        let step = jac
            .svd(true, true)
            .solve(&(-&r), 1e-12)
            .map_err(|e| Error::InvalidArgument(format!("least-squares solve failed: {e}")))?;

        let current = r.norm();
        let mut scale = 1.0;
        let mut accepted = None;
        let mut last_err = None;
        for _ in 0..=opts.max_halvings {
            let trial = &x + &step * scale;
            match residual(&trial) {
                Ok((c, rt, s)) if rt.norm() < current => {
                    accepted = Some((trial, c, rt, s));
                    break;
                }
                Ok(_) => {}
                Err(e) => last_err = Some(e),
            }
            scale *= 0.5;
        }
        match accepted {
            Some((xt, c, rt, s)) => {
                x = xt;
                cand = c;
                r = rt;
                sup = s;
                history.push(sup);
            }
            None => {
                return Err(match last_err {
                    Some(e @ Error::NotMonotone { .. }) => e,
                    _ => Error::NoConvergence {
                        iterations,
                        residual: sup,
                    },
                })
            }
        }
    }
    Ok(NewtonReport {
        candidate: cand,
        iterations,
        residual: sup,
        history,
    })
}

/// Rotates a solution: if `u` solves for `p`, then `t ↦ u(t + σ) − σ` solves
/// for `t ↦ p(t + σ)`.
pub fn rotate_candidate(u: &CausticCandidate, sigma: f64) -> Result<CausticCandidate> {
    let shifted = u.periodic_part.shift(sigma);
    CausticCandidate::new(shifted, u.rotation)
}
