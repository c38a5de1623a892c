//! Billiards in convex domains close to the circle, described by support
//! functions `p(t)`.
//!
//! * [`fourier`]: truncated Fourier series with exact coefficient algebra.
//! * [`geometry`]: support functions, boundary points, the chord-length
//!   generating function and its partials.
//! * [`dynamics`]: the billiard map, orbits and rotation numbers.
//! * [`variational`]: the periodic-orbit error functional, its expansion
//!   around the disc, and a Newton solver for rational caustics.
//! * [`obstruction`]: the quadratic system for odd moduli and its
//!   autocorrelation certificate.

pub mod dynamics;
pub mod error;
pub mod fourier;
pub mod geometry;
pub mod obstruction;
pub mod random;
pub mod variational;

pub use dynamics::{ChordState, Orbit, RotationEstimate};
pub use error::{Error, Result};
pub use fourier::{FourierSeries, ModeSet};
pub use geometry::{Chord, Deformation, SupportFunction, WidthReport};
pub use num_complex::Complex64;
pub use obstruction::{Certificate, ObstructionReport, Verdict};
pub use variational::{CausticCandidate, ErrorReport, ExpansionReport, FirstOrder, NewtonReport, Rotation};
