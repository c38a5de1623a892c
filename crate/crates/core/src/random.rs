//! Seeded generators for random test inputs. All randomness in the crate and
//! its front ends flows through [`seeded`].

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::fourier::FourierSeries;

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Real series with independent Gaussian modes `1 ≤ |k| ≤ order` for which
/// `keep(k)` holds, each of size `amplitude`; mode 0 is zero.
pub fn real_series(rng: &mut SeededRng, order: usize, amplitude: f64, keep: impl Fn(i64) -> bool) -> FourierSeries {
    let mut modes = Vec::new();
    for k in 1..=order as i64 {
        if !keep(k) {
            continue;
        }
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        let c = Complex64::new(re, im) * (0.5 * amplitude);
        modes.push((k, c));
        modes.push((-k, c.conj()));
    }
    FourierSeries::from_modes(order, modes, true).expect("modes are Hermitian by construction")
}

/// A random `p₁` satisfying the standing hypotheses of the quadratic system
/// for modulus `2l+1`: odd modes only, none in `(2l+1)Z`, and no `±1` when
/// `l = 1`. Normalized to unit `ℓ²` norm.
pub fn admissible_p1(rng: &mut SeededRng, l: u32, order: usize) -> FourierSeries {
    let odd = 2 * l as i64 + 1;
    let keep = |k: i64| k % 2 != 0 && k % odd != 0 && !(l == 1 && k == 1);
    let p1 = real_series(rng, order, 1.0, keep);
    let norm = p1.l2_norm();
    &p1 * (1.0 / norm)
}

/// Uniform draw in `[lo, hi)`.
pub fn uniform(rng: &mut SeededRng, lo: f64, hi: f64) -> f64 {
    rng.random_range(lo..hi)
}
