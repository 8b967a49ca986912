//! Solvers for Caputo fractional differential equations with one
//! time-dependent coefficient,
//!
//! ```text
//!     D^beta y(t) + a(t) y(t) = b(t),    t in [0, T],
//! ```
//!
//! under homogeneous initial conditions, where `D^beta` is the Caputo
//! derivative of real order `beta > 0` and `a` is analytic.
//!
//! Two independent solution routes are provided and cross-validated:
//!
//! * [`neumann`] — the nested-operator series
//!   `y = sum_k (-1)^k I^beta (a I^beta)^k b`, evaluated by repeated
//!   application of the discrete fractional integral;
//! * [`series`] — a representation of the same solution as a double series
//!   of *single* fractional integrals `I^{(k+1)beta+n} b` weighted by
//!   products of derivatives of `a` and gamma-ratio coefficients over
//!   integer compositions.
//!
//! Supporting modules: [`specfun`] (pole-safe gamma machinery and the
//! Mittag-Leffler function), [`funcrep`] (analytic coefficients and grid
//! functions), [`fracops`] (Riemann-Liouville integral quadrature and the
//! Caputo residual check), and [`spectral`] (a Fourier solver for the
//! time-fractional/space-fractional Cauchy problem, which reduces to one
//! fractional ODE per mode).
//!
//! The crate is `no_std`-compatible (`alloc` required); all floating-point
//! math goes through [`libm`] so results do not depend on the enabled
//! feature set.

#![cfg_attr(not(feature = "std"), no_std)]
#![deny(unsafe_code)]

extern crate alloc;

pub mod fracops;
pub mod funcrep;
pub mod neumann;
pub mod series;
pub mod specfun;
pub mod spectral;

pub use fracops::FracOrder;
pub use funcrep::{AnalyticCoefficient, Grid, GridFunction};
pub use series::{SeriesTruncation, SolveReport};

/// Wall-clock stage timer. With the `std` feature disabled every stage is
/// reported as taking zero seconds.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Stopwatch {
    #[cfg(feature = "std")]
    start: std::time::Instant,
}

impl Stopwatch {
    pub(crate) fn start() -> Self {
        Stopwatch {
            #[cfg(feature = "std")]
            start: std::time::Instant::now(),
        }
    }

    #[cfg(feature = "std")]
    pub(crate) fn seconds(&self) -> f64 {
        self.start.elapsed().as_secs_f64()
    }

    #[cfg(not(feature = "std"))]
    pub(crate) fn seconds(&self) -> f64 {
        0.0
    }
}
