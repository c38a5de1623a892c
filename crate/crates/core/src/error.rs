use thiserror::Error;

/// Errors raised by the geometric and variational routines.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("degenerate chord: parameters {t} and {t_prime} coincide mod 2π")]
    DegenerateChord { t: f64, t_prime: f64 },

    #[error("support function is not positive: p({at}) = {value}")]
    NonPositiveSupport { at: f64, value: f64 },

    #[error("domain is not strictly convex: p + p'' = {margin} at t = {at}")]
    NotConvex { at: f64, margin: f64 },

    #[error("series is flagged real but mode {mode} breaks Hermitian symmetry by {defect:e}")]
    NotHermitian { mode: i64, defect: f64 },

    #[error("circle map is not monotone: 1 + u' = {margin} at t = {at}")]
    NotMonotone { at: f64, margin: f64 },

    #[error("mode {k} lies in {m}Z where the cotangent has a pole")]
    ResonantMode { m: u32, k: i64 },

    #[error("residue r = {r} is singular for modulus {modulus}")]
    SingularResidue { modulus: u32, r: u32 },

    #[error("negative radicand {value} in split constant (l = {l}, r = {r})")]
    NegativeRadicand { l: u32, r: u32, value: f64 },

    #[error("root bracket lost after chord ({t}, {t_prime}): g(lo) = {g_lo}, g(hi) = {g_hi}")]
    Bracketing {
        t: f64,
        t_prime: f64,
        g_lo: f64,
        g_hi: f64,
    },

    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("hypotheses violated: {}", .0.join("; "))]
    Hypothesis(Vec<String>),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
