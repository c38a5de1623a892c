//! Truncated Fourier series on the circle.
//!
//! A [`FourierSeries`] stores the complex amplitudes of modes `-K..=K` densely.
//! Every operation acts on coefficients: derivatives multiply by `(ik)^n`,
//! shifts by `e^{iks}`, products are exact Cauchy convolutions that widen the
//! truncation to `K_f + K_g`. Nothing aliases unless a caller re-truncates.
//!
//! Series flagged `real` satisfy `c(-k) = conj(c(k))`; constructors check it.

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default absolute tolerance on coefficients for "is zero" checks.
pub const ZERO_TOL: f64 = 1e-10;

const HERMITIAN_TOL: f64 = 1e-12;

/// A set of integer Fourier modes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModeSet {
    /// `nZ`.
    Multiples(i64),
    /// `nZ \ {0}`.
    NonzeroMultiples(i64),
    /// `nZ + r`, with `r` taken mod `n`.
    Residue { modulus: i64, residue: i64 },
    /// An explicit finite set.
    Finite(BTreeSet<i64>),
    /// Everything not in the inner set.
    Complement(Box<ModeSet>),
}

impl ModeSet {
    pub fn contains(&self, k: i64) -> bool {
        match self {
            ModeSet::Multiples(n) => *n != 0 && k.rem_euclid(*n) == 0 || (*n == 0 && k == 0),
            ModeSet::NonzeroMultiples(n) => k != 0 && *n != 0 && k.rem_euclid(*n) == 0,
            ModeSet::Residue { modulus, residue } => {
                k.rem_euclid(*modulus) == residue.rem_euclid(*modulus)
            }
            ModeSet::Finite(set) => set.contains(&k),
            ModeSet::Complement(inner) => !inner.contains(k),
        }
    }

    pub fn complement(self) -> ModeSet {
        ModeSet::Complement(Box::new(self))
    }

    fn symmetric_within(&self, order: usize) -> bool {
        let k_max = order as i64;
        (1..=k_max).all(|k| self.contains(k) == self.contains(-k))
    }
}

/// Truncated complex Fourier series `Σ_{|k| ≤ K} c_k e^{ikt}`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierSeries {
    order: usize,
    coeffs: Vec<Complex64>,
    real: bool,
    rho: f64,
}

impl FourierSeries {
    pub fn zeros(order: usize, real: bool) -> Self {
        Self {
            order,
            coeffs: vec![Complex64::new(0.0, 0.0); 2 * order + 1],
            real,
            rho: 0.0,
        }
    }

    pub fn constant(value: f64) -> Self {
        let mut s = Self::zeros(0, true);
        s.coeffs[0] = Complex64::new(value, 0.0);
        s
    }

    /// Builds a series from a dense coefficient vector indexed `-K..=K`.
    pub fn from_dense(coeffs: Vec<Complex64>, real: bool) -> Result<Self> {
        if coeffs.len().is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!(
                "dense coefficient vector must have odd length, got {}",
                coeffs.len()
            )));
        }
        let s = Self {
            order: coeffs.len() / 2,
            coeffs,
            real,
            rho: 0.0,
        };
        if real {
            s.check_hermitian(HERMITIAN_TOL)?;
        }
        Ok(s)
    }

    /// Builds a series from `(mode, amplitude)` pairs; unspecified modes are zero.
    pub fn from_modes<I>(order: usize, modes: I, real: bool) -> Result<Self>
    where
        I: IntoIterator<Item = (i64, Complex64)>,
    {
        let mut s = Self::zeros(order, real);
        for (k, c) in modes {
            if k.unsigned_abs() as usize > order {
                return Err(Error::InvalidArgument(format!(
                    "mode {k} outside truncation order {order}"
                )));
            }
            s.coeffs[(k + order as i64) as usize] += c;
        }
        if real {
            s.check_hermitian(HERMITIAN_TOL)?;
        }
        Ok(s)
    }

    /// Real series from cosine and sine amplitudes:
    /// `a_0 + Σ a_k cos kt + b_k sin kt`.
    pub fn from_cos_sin(a0: f64, cos: &[(usize, f64)], sin: &[(usize, f64)]) -> Self {
        let order = cos
            .iter()
            .chain(sin.iter())
            .map(|(k, _)| *k)
            .max()
            .unwrap_or(0);
        let mut s = Self::zeros(order, true);
        s.coeffs[order] = Complex64::new(a0, 0.0);
        for &(k, a) in cos {
            s.coeffs[order + k] += Complex64::new(a / 2.0, 0.0);
            s.coeffs[order - k] += Complex64::new(a / 2.0, 0.0);
        }
        for &(k, b) in sin {
            s.coeffs[order + k] += Complex64::new(0.0, -b / 2.0);
            s.coeffs[order - k] += Complex64::new(0.0, b / 2.0);
        }
        s
    }

    /// `amplitude · cos(k t)`.
    pub fn cos_mode(k: usize, amplitude: f64) -> Self {
        Self::from_cos_sin(0.0, &[(k, amplitude)], &[])
    }

    /// `amplitude · sin(k t)`.
    pub fn sin_mode(k: usize, amplitude: f64) -> Self {
        Self::from_cos_sin(0.0, &[], &[(k, amplitude)])
    }

    /// A single complex exponential `amplitude · e^{ikt}` (not real).
    pub fn exp_mode(k: i64, amplitude: Complex64) -> Self {
        let order = k.unsigned_abs() as usize;
        let mut s = Self::zeros(order, false);
        s.coeffs[(k + order as i64) as usize] = amplitude;
        s
    }

    pub fn with_rho(mut self, rho: f64) -> Self {
        self.rho = rho.max(0.0);
        self
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn is_real(&self) -> bool {
        self.real
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// Dense coefficients indexed `-K..=K`.
    pub fn dense(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Amplitude of mode `k`; zero outside the truncation window.
    #[inline]
    pub fn coeff(&self, k: i64) -> Complex64 {
        if k.unsigned_abs() as usize > self.order {
            Complex64::new(0.0, 0.0)
        } else {
            self.coeffs[(k + self.order as i64) as usize]
        }
    }

    /// Iterates `(k, c_k)` over the window.
    pub fn modes(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        let k0 = self.order as i64;
        self.coeffs
            .iter()
            .enumerate()
            .map(move |(i, c)| (i as i64 - k0, *c))
    }

    fn check_hermitian(&self, tol: f64) -> Result<()> {
        let scale = self.max_abs_coeff().max(1.0);
        for k in 0..=self.order as i64 {
            let defect = (self.coeff(k) - self.coeff(-k).conj()).norm();
            if defect > tol * scale {
                return Err(Error::NotHermitian { mode: k, defect });
            }
        }
        Ok(())
    }

    /// `Σ c_k e^{ikt}`; for real series the imaginary part is dropped.
    pub fn evaluate(&self, t: f64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        if self.real {
            // Pair ±k so the result is real by construction.
            acc.re = self.coeff(0).re;
            for k in 1..=self.order as i64 {
                let (s, c) = (k as f64 * t).sin_cos();
                let z = self.coeff(k);
                acc.re += 2.0 * (z.re * c - z.im * s);
            }
            return acc;
        }
        for (k, c) in self.modes() {
            let (s, co) = (k as f64 * t).sin_cos();
            acc += c * Complex64::new(co, s);
        }
        acc
    }

    /// Real part of [`Self::evaluate`].
    #[inline]
    pub fn eval_re(&self, t: f64) -> f64 {
        self.evaluate(t).re
    }

    /// Evaluates the series and its first two derivatives at `t` in one pass.
    pub fn eval_jet2(&self, t: f64) -> [f64; 3] {
        let mut out = [self.coeff(0).re, 0.0, 0.0];
        for k in 1..=self.order as i64 {
            let kf = k as f64;
            let (s, c) = (kf * t).sin_cos();
            let z = self.coeff(k);
            if self.real {
                let re = z.re * c - z.im * s;
                let im = z.re * s + z.im * c;
                out[0] += 2.0 * re;
                out[1] -= 2.0 * kf * im;
                out[2] -= 2.0 * kf * kf * re;
            } else {
                let w = self.coeff(-k);
                let plus = z * Complex64::new(c, s);
                let minus = w * Complex64::new(c, -s);
                out[0] += (plus + minus).re;
                out[1] += (Complex64::i() * kf * (plus - minus)).re;
                out[2] -= kf * kf * (plus + minus).re;
            }
        }
        out
    }

    /// `d^n/dt^n`: `c_k ↦ (ik)^n c_k`.
    pub fn derivative(&self, n: u32) -> Self {
        let mut out = self.clone();
        if n == 0 {
            return out;
        }
        for (c, (k, _)) in out.coeffs.iter_mut().zip(self.modes()) {
            *c *= Complex64::new(0.0, k as f64).powu(n);
        }
        out
    }

    /// Keeps exactly the modes in `set`.
    pub fn project(&self, set: &ModeSet) -> Self {
        let mut out = self.clone();
        for (c, (k, _)) in out.coeffs.iter_mut().zip(self.modes()) {
            if !set.contains(k) {
                *c = Complex64::new(0.0, 0.0);
            }
        }
        out.real = self.real && set.symmetric_within(self.order);
        out
    }

    /// `t ↦ f(t + s)`: `c_k ↦ e^{iks} c_k`.
    pub fn shift(&self, s: f64) -> Self {
        let mut out = self.clone();
        for (c, (k, _)) in out.coeffs.iter_mut().zip(self.modes()) {
            let (sn, cs) = (k as f64 * s).sin_cos();
            *c *= Complex64::new(cs, sn);
        }
        out
    }

    /// `f(t) - f(t - s)`: `c_k ↦ (1 - e^{-iks}) c_k`.
    pub fn shift_difference(&self, s: f64) -> Self {
        let mut out = self.clone();
        for (c, (k, _)) in out.coeffs.iter_mut().zip(self.modes()) {
            let (sn, cs) = (k as f64 * s).sin_cos();
            *c *= Complex64::new(1.0 - cs, sn);
        }
        out
    }

    /// `∇f(t) = f(t) - f(t - 2π/3)`.
    pub fn nabla(&self) -> Self {
        self.shift_difference(2.0 * PI / 3.0)
    }

    /// Exact product; the result has order `K_f + K_g`.
    pub fn product(&self, other: &Self) -> Self {
        let order = self.order + other.order;
        let mut out = Self::zeros(order, self.real && other.real);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.re == 0.0 && a.im == 0.0 {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                // (i - K_f) + (j - K_g) + K = i + j
                out.coeffs[i + j] += a * b;
            }
        }
        out.rho = self.rho.min(other.rho);
        out
    }

    /// `Σ_k c_k conj(c_{k-n})`, the `n`-th Fourier coefficient of `|f|²`.
    pub fn autocorrelation(&self, n: i64) -> Complex64 {
        let k0 = self.order as i64;
        let lo = (-k0).max(n - k0);
        let hi = k0.min(n + k0);
        (lo..=hi)
            .map(|k| self.coeff(k) * self.coeff(k - n).conj())
            .sum()
    }

    /// `Σ |c_k| e^{ρ'|k|}`, an upper bound for `|f|` on the strip `|Im z| ≤ ρ'`.
    pub fn strip_norm_bound(&self, rho_prime: f64) -> f64 {
        self.modes()
            .map(|(k, c)| c.norm() * (rho_prime * k.abs() as f64).exp())
            .sum()
    }

    /// Smallest `C` with `|c_k| ≤ C e^{-ρ|k|}` over the window, using the
    /// recorded `rho`; `None` when `rho` is unknown.
    pub fn decay_constant(&self) -> Option<f64> {
        (self.rho > 0.0).then(|| {
            self.modes()
                .map(|(k, c)| c.norm() * (self.rho * k.abs() as f64).exp())
                .fold(0.0, f64::max)
        })
    }

    /// ℓ² norm of the coefficient vector.
    pub fn l2_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.max_abs_coeff() <= tol
    }

    /// Restricts or zero-pads the window to `order`.
    pub fn with_order(&self, order: usize) -> Self {
        let mut out = Self::zeros(order, self.real);
        for (k, c) in self.modes() {
            if k.unsigned_abs() as usize <= order {
                out.coeffs[(k + order as i64) as usize] = c;
            }
        }
        out.rho = self.rho;
        out
    }

    /// Conjugate series `conj(f(t))`, i.e. `c_k ↦ conj(c_{-k})`.
    pub fn conj(&self) -> Self {
        let mut out = self.clone();
        for (i, c) in out.coeffs.iter_mut().enumerate() {
            *c = self.coeffs[2 * self.order - i].conj();
        }
        out
    }

    /// Values on the equispaced grid `t_j = 2πj/n`, `j = 0..n`.
    pub fn samples(&self, n: usize) -> Vec<Complex64> {
        let roots = unit_roots(n);
        let n_i = n as i64;
        (0..n_i)
            .map(|j| {
                self.modes()
                    .map(|(k, c)| c * roots[(k * j).rem_euclid(n_i) as usize])
                    .sum()
            })
            .collect()
    }

    /// Real values on the grid `t_j = 2πj/n` (real part for complex series).
    pub fn samples_re(&self, n: usize) -> Vec<f64> {
        self.samples(n).into_iter().map(|z| z.re).collect()
    }

    /// Discrete transform of grid values back to modes `-order..=order`.
    /// Requires `values.len() ≥ 2·order + 1` to avoid aliasing.
    pub fn from_samples(values: &[Complex64], order: usize) -> Result<Self> {
        let n = values.len();
        if n < 2 * order + 1 {
            return Err(Error::InvalidArgument(format!(
                "{n} samples cannot resolve order {order}"
            )));
        }
        let roots = unit_roots(n);
        let n_i = n as i64;
        let mut s = Self::zeros(order, false);
        for k in -(order as i64)..=order as i64 {
            let acc: Complex64 = values
                .iter()
                .enumerate()
                .map(|(j, v)| v * roots[(-k * j as i64).rem_euclid(n_i) as usize])
                .sum();
            s.coeffs[(k + order as i64) as usize] = acc / n as f64;
        }
        Ok(s)
    }

    /// Discrete transform of real grid values; the result is exactly Hermitian.
    pub fn from_real_samples(values: &[f64], order: usize) -> Result<Self> {
        let n = values.len();
        if n < 2 * order + 1 {
            return Err(Error::InvalidArgument(format!(
                "{n} samples cannot resolve order {order}"
            )));
        }
        let roots = unit_roots(n);
        let n_i = n as i64;
        let mut s = Self::zeros(order, true);
        for k in 0..=order as i64 {
            let acc: Complex64 = values
                .iter()
                .enumerate()
                .map(|(j, v)| *v * roots[(-k * j as i64).rem_euclid(n_i) as usize])
                .sum();
            let c = acc / n as f64;
            s.coeffs[(k + order as i64) as usize] = c;
            s.coeffs[(order as i64 - k) as usize] = c.conj();
        }
        s.coeffs[order].im = 0.0;
        Ok(s)
    }

    /// Sup of `|f|` over the grid of `n` points.
    pub fn grid_sup(&self, n: usize) -> f64 {
        self.samples(n).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        let order = self.order.max(other.order);
        let mut out = Self::zeros(order, self.real && other.real);
        for k in -(order as i64)..=order as i64 {
            out.coeffs[(k + order as i64) as usize] = f(self.coeff(k), other.coeff(k));
        }
        out.rho = self.rho.min(other.rho);
        out
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        let mut out = self.clone();
        out.coeffs.iter_mut().for_each(|c| *c *= factor);
        out.real = self.real && factor.im == 0.0;
        out
    }
}

/// `e^{2πij/n}` for `j = 0..n`, each computed directly from its angle.
fn unit_roots(n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|j| {
            let (s, c) = (2.0 * PI * j as f64 / n as f64).sin_cos();
            Complex64::new(c, s)
        })
        .collect()
}

impl Add for &FourierSeries {
    type Output = FourierSeries;
    fn add(self, rhs: &FourierSeries) -> FourierSeries {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &FourierSeries {
    type Output = FourierSeries;
    fn sub(self, rhs: &FourierSeries) -> FourierSeries {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Add for FourierSeries {
    type Output = FourierSeries;
    fn add(self, rhs: FourierSeries) -> FourierSeries {
        &self + &rhs
    }
}

impl Sub for FourierSeries {
    type Output = FourierSeries;
    fn sub(self, rhs: FourierSeries) -> FourierSeries {
        &self - &rhs
    }
}

impl Neg for &FourierSeries {
    type Output = FourierSeries;
    fn neg(self) -> FourierSeries {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

impl Mul<f64> for &FourierSeries {
    type Output = FourierSeries;
    fn mul(self, rhs: f64) -> FourierSeries {
        self.scale(Complex64::new(rhs, 0.0))
    }
}

impl Mul<f64> for FourierSeries {
    type Output = FourierSeries;
    fn mul(self, rhs: f64) -> FourierSeries {
        self.scale(Complex64::new(rhs, 0.0))
    }
}

impl Mul<&FourierSeries> for &FourierSeries {
    type Output = FourierSeries;
    fn mul(self, rhs: &FourierSeries) -> FourierSeries {
        self.product(rhs)
    }
}

/// Wire form: `{"K": int, "real": bool, "rho": float, "coeffs": [[k, re, im], ...]}`.
#[derive(Serialize, Deserialize)]
struct SeriesJson {
    #[serde(rename = "K")]
    order: usize,
    #[serde(default)]
    real: bool,
    #[serde(default)]
    rho: f64,
    #[serde(default)]
    coeffs: Vec<(i64, f64, f64)>,
}

impl Serialize for FourierSeries {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        SeriesJson {
            order: self.order,
            real: self.real,
            rho: self.rho,
            coeffs: self
                .modes()
                .filter(|(_, c)| c.re != 0.0 || c.im != 0.0)
                .map(|(k, c)| (k, c.re, c.im))
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for FourierSeries {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = SeriesJson::deserialize(deserializer)?;
        if raw.rho.is_nan() || raw.rho < 0.0 {
            return Err(serde::de::Error::custom(format!("rho must be ≥ 0, got {}", raw.rho)));
        }
        let modes = raw.coeffs.into_iter().map(|(k, re, im)| (k, Complex64::new(re, im)));
        FourierSeries::from_modes(raw.order, modes, raw.real)
            .map(|s| s.with_rho(raw.rho))
            .map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn evaluate_examples() {
        assert_abs_diff_eq!(FourierSeries::constant(1.0).eval_re(0.7), 1.0);
        let e1 = FourierSeries::exp_mode(1, c(1.0, 0.0));
        let z = e1.evaluate(PI);
        assert_abs_diff_eq!(z.re, -1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(z.im, 0.0, epsilon = 1e-15);
        let cos3 = FourierSeries::cos_mode(3, 1.0);
        assert_abs_diff_eq!(cos3.eval_re(PI / 3.0), -1.0, epsilon = 1e-15);
        // dense-grid round trip agrees with direct synthesis
        let grid = cos3.samples(13);
        let back = FourierSeries::from_samples(&grid, 3).unwrap();
        assert_abs_diff_eq!(back.coeff(3).re, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(back.evaluate(PI / 3.0).re, -1.0, epsilon = 1e-14);
    }

    #[test]
    fn derivative_examples() {
        assert!(FourierSeries::constant(1.0).derivative(1).is_zero(1e-15));
        let d2 = FourierSeries::cos_mode(1, 1.0).derivative(2);
        assert_abs_diff_eq!(d2.coeff(1).re, -0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(d2.coeff(-1).re, -0.5, epsilon = 1e-15);
        let p = &FourierSeries::constant(1.0) + &FourierSeries::cos_mode(3, 0.1);
        let d2 = p.derivative(2);
        assert_abs_diff_eq!(d2.coeff(3).re, -0.45, epsilon = 1e-15);
        assert_abs_diff_eq!(d2.coeff(0).re, 0.0);
        assert!(d2.is_real());
    }

    #[test]
    fn project_examples() {
        let cos1 = FourierSeries::cos_mode(1, 1.0);
        assert!(cos1.project(&ModeSet::Multiples(2)).is_zero(1e-15));
        let f = &FourierSeries::constant(1.0) + &FourierSeries::cos_mode(3, 1.0);
        assert_eq!(f.project(&ModeSet::Multiples(3)), f);
        let g = FourierSeries::from_cos_sin(1.0, &[(3, 0.1), (2, 0.2)], &[]);
        let proj = g.project(&ModeSet::NonzeroMultiples(2));
        assert_eq!(proj.with_order(2), FourierSeries::cos_mode(2, 0.2));
        assert!(proj.is_real());
    }

    #[test]
    fn shift_difference_examples() {
        let s = 2.0 * PI / 3.0;
        assert!(FourierSeries::constant(4.0).shift_difference(s).is_zero(1e-15));
        assert!(FourierSeries::cos_mode(3, 1.0).nabla().is_zero(1e-15));
        let e1 = FourierSeries::exp_mode(1, c(1.0, 0.0)).shift_difference(s);
        let expected = c(1.0, 0.0) - Complex64::from_polar(1.0, -s);
        assert_abs_diff_eq!((e1.coeff(1) - expected).norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn product_examples() {
        let f = FourierSeries::from_cos_sin(0.3, &[(2, 0.7)], &[(1, -0.2)]);
        let one = FourierSeries::constant(1.0);
        assert_eq!(f.product(&one).with_order(2), f);
        let cos1 = FourierSeries::cos_mode(1, 1.0);
        let sq = cos1.product(&cos1);
        assert_eq!(sq.order(), 2);
        assert_abs_diff_eq!(sq.coeff(0).re, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(sq.coeff(2).re, 0.25, epsilon = 1e-15);
        let up = FourierSeries::exp_mode(1, c(1.0, 0.0));
        let down = FourierSeries::exp_mode(-1, c(1.0, 0.0));
        let one_again = up.product(&down);
        assert_abs_diff_eq!(one_again.coeff(0).re, 1.0);
        assert_abs_diff_eq!(one_again.max_abs_coeff(), 1.0);
    }

    #[test]
    fn autocorrelation_examples() {
        assert_eq!(FourierSeries::constant(3.0).autocorrelation(2), c(0.0, 0.0));
        assert_eq!(FourierSeries::exp_mode(1, c(1.0, 0.0)).autocorrelation(1), c(0.0, 0.0));
        let two_cos = FourierSeries::cos_mode(1, 2.0);
        assert_abs_diff_eq!(two_cos.autocorrelation(2).re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(two_cos.autocorrelation(0).re, 2.0, epsilon = 1e-15);
    }

    #[test]
    fn strip_norm_examples() {
        assert_abs_diff_eq!(FourierSeries::constant(1.0).strip_norm_bound(3.0), 1.0);
        let cos1 = FourierSeries::cos_mode(1, 1.0);
        assert_abs_diff_eq!(cos1.strip_norm_bound(0.0), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(cos1.strip_norm_bound(2f64.ln()), 2.0, epsilon = 1e-15);
    }

    #[test]
    fn real_flag_rejects_asymmetric_input() {
        let err = FourierSeries::from_modes(2, [(1, c(1.0, 0.0))], true).unwrap_err();
        assert!(matches!(err, Error::NotHermitian { mode: 1, .. }));
    }

    #[test]
    fn json_wire_format() {
        let f = FourierSeries::from_cos_sin(1.0, &[(3, 0.1)], &[]).with_rho(0.5);
        let text = serde_json::to_string(&f).unwrap();
        assert_eq!(
            text,
            r#"{"K":3,"real":true,"rho":0.5,"coeffs":[[-3,0.05,0.0],[0,1.0,0.0],[3,0.05,0.0]]}"#
        );
        let back: FourierSeries = serde_json::from_str(&text).unwrap();
        assert_eq!(back, f);
        let sparse: FourierSeries =
            serde_json::from_str(r#"{"K": 4, "real": false, "rho": 0, "coeffs": [[2, 1, 0]]}"#).unwrap();
        assert_eq!(sparse.coeff(2), c(1.0, 0.0));
        assert_eq!(sparse.coeff(-2), c(0.0, 0.0));
        assert!(serde_json::from_str::<FourierSeries>(r#"{"K": 1, "coeffs": [[2, 1, 0]]}"#).is_err());
    }

    #[test]
    fn decay_constant_is_recorded_not_assumed() {
        let f = FourierSeries::cos_mode(2, 2.0);
        assert_eq!(f.decay_constant(), None);
        let g = f.with_rho(0.5);
        assert_abs_diff_eq!(g.decay_constant().unwrap(), 1.0f64.exp(), epsilon = 1e-14);
    }
}
