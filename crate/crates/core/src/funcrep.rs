//! Representations of the problem data: the analytic coefficient `a(t)` with
//! exact derivatives of arbitrary order, and functions sampled on a uniform
//! time grid.
//!
//! The series representation multiplies up to `k` derivative factors
//! `a^{(i_1)}(t) ... a^{(i_k)}(t)` per term, so derivatives are exact closed
//! forms per family rather than numerical differences.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// Default number of trusted derivative orders for the Taylor family.
pub const TAYLOR_DERIVATIVE_CAP: u32 = 64;

/// Errors from evaluating an [`AnalyticCoefficient`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CoeffError {
    /// Evaluation point outside the supported domain (negative time, or
    /// beyond the declared radius of convergence for a Taylor family).
    OutOfDomain { t: f64 },
    /// Requested derivative order exceeds the trusted cap of a Taylor
    /// family.
    OrderTooHigh { order: u32, cap: u32 },
}

impl fmt::Display for CoeffError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoeffError::OutOfDomain { t } => write!(f, "evaluation point t = {t} out of domain"),
            CoeffError::OrderTooHigh { order, cap } => {
                write!(f, "derivative order {order} beyond trusted cap {cap}")
            }
        }
    }
}

impl core::error::Error for CoeffError {}

/// A coefficient function with an exact derivative oracle of arbitrary
/// order.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum AnalyticCoefficient {
    /// `a(t) = value`
    Constant { value: f64 },
    /// `a(t) = sum_j coeffs[j] t^j`
    Polynomial { coeffs: Vec<f64> },
    /// `a(t) = amplitude * exp(rate * t)`
    Exponential { amplitude: f64, rate: f64 },
    /// `a(t) = amplitude * sin(omega * t + phase)`
    Sinusoid { amplitude: f64, omega: f64, phase: f64 },
    /// Truncated Taylor series at 0 with a declared radius of convergence;
    /// values and derivatives are those of the stored polynomial.
    Taylor {
        coeffs: Vec<f64>,
        radius: f64,
        derivative_cap: u32,
    },
}

impl AnalyticCoefficient {
    pub fn constant(value: f64) -> Self {
        AnalyticCoefficient::Constant { value }
    }

    pub fn polynomial(coeffs: Vec<f64>) -> Self {
        AnalyticCoefficient::Polynomial { coeffs }
    }

    pub fn exponential(amplitude: f64, rate: f64) -> Self {
        AnalyticCoefficient::Exponential { amplitude, rate }
    }

    pub fn sinusoid(amplitude: f64, omega: f64, phase: f64) -> Self {
        AnalyticCoefficient::Sinusoid { amplitude, omega, phase }
    }

    pub fn taylor(coeffs: Vec<f64>, radius: f64) -> Self {
        AnalyticCoefficient::Taylor { coeffs, radius, derivative_cap: TAYLOR_DERIVATIVE_CAP }
    }

    /// `a(t)`. Negative times are outside every family's domain; the Taylor
    /// family additionally rejects points beyond its radius of convergence.
    pub fn value(&self, t: f64) -> Result<f64, CoeffError> {
        self.deriv(0, t)
    }

    /// Exact `order`-th derivative at `t`.
    pub fn deriv(&self, order: u32, t: f64) -> Result<f64, CoeffError> {
        if t < 0.0 || !t.is_finite() {
            return Err(CoeffError::OutOfDomain { t });
        }
        match self {
            AnalyticCoefficient::Constant { value } => {
                Ok(if order == 0 { *value } else { 0.0 })
            }
            AnalyticCoefficient::Polynomial { coeffs } => Ok(poly_deriv(coeffs, order, t)),
            AnalyticCoefficient::Exponential { amplitude, rate } => {
                let mut scale = *amplitude;
                for _ in 0..order {
                    scale *= rate;
                }
                Ok(scale * libm::exp(rate * t))
            }
            AnalyticCoefficient::Sinusoid { amplitude, omega, phase } => {
                let mut scale = *amplitude;
                for _ in 0..order {
                    scale *= omega;
                }
                // d/dt sin(w t + p) shifts the phase by pi/2 each order.
                Ok(scale * libm::sin(omega * t + phase + order as f64 * core::f64::consts::FRAC_PI_2))
            }
            AnalyticCoefficient::Taylor { coeffs, radius, derivative_cap } => {
                if order > *derivative_cap {
                    return Err(CoeffError::OrderTooHigh { order, cap: *derivative_cap });
                }
                if t > *radius {
                    return Err(CoeffError::OutOfDomain { t });
                }
                Ok(poly_deriv(coeffs, order, t))
            }
        }
    }

    /// Maximum order guaranteed exact (`None` = unlimited).
    pub fn derivative_cap(&self) -> Option<u32> {
        match self {
            AnalyticCoefficient::Taylor { derivative_cap, .. } => Some(*derivative_cap),
            _ => None,
        }
    }

    /// Largest order with a not-identically-zero derivative, when that
    /// cutoff exists. The series solver uses this to stop the inner series
    /// of a polynomial coefficient exactly.
    pub fn max_nonzero_derivative_order(&self) -> Option<u32> {
        match self {
            AnalyticCoefficient::Constant { .. } => Some(0),
            AnalyticCoefficient::Polynomial { coeffs } => Some(poly_degree(coeffs)),
            AnalyticCoefficient::Taylor { coeffs, .. } => Some(poly_degree(coeffs)),
            _ => None,
        }
    }

    /// Whether the `order`-th derivative is identically zero on the whole
    /// domain.
    pub fn deriv_is_identically_zero(&self, order: u32) -> bool {
        match self.max_nonzero_derivative_order() {
            Some(d) => order > d,
            None => false,
        }
    }

    /// The constant value when this is the constant family.
    pub fn as_constant(&self) -> Option<f64> {
        match self {
            AnalyticCoefficient::Constant { value } => Some(*value),
            _ => None,
        }
    }

    /// The same function multiplied by a scalar; exact for every family.
    /// Scaling by zero collapses to the zero constant.
    pub fn scaled(&self, factor: f64) -> Self {
        if factor == 0.0 {
            return AnalyticCoefficient::Constant { value: 0.0 };
        }
        match self {
            AnalyticCoefficient::Constant { value } => {
                AnalyticCoefficient::Constant { value: factor * value }
            }
            AnalyticCoefficient::Polynomial { coeffs } => AnalyticCoefficient::Polynomial {
                coeffs: coeffs.iter().map(|c| factor * c).collect(),
            },
            AnalyticCoefficient::Exponential { amplitude, rate } => {
                AnalyticCoefficient::Exponential { amplitude: factor * amplitude, rate: *rate }
            }
            AnalyticCoefficient::Sinusoid { amplitude, omega, phase } => {
                AnalyticCoefficient::Sinusoid {
                    amplitude: factor * amplitude,
                    omega: *omega,
                    phase: *phase,
                }
            }
            AnalyticCoefficient::Taylor { coeffs, radius, derivative_cap } => {
                AnalyticCoefficient::Taylor {
                    coeffs: coeffs.iter().map(|c| factor * c).collect(),
                    radius: *radius,
                    derivative_cap: *derivative_cap,
                }
            }
        }
    }

    /// Radius of convergence when the family declares one.
    pub fn radius(&self) -> Option<f64> {
        match self {
            AnalyticCoefficient::Taylor { radius, .. } => Some(*radius),
            _ => None,
        }
    }
}

fn poly_degree(coeffs: &[f64]) -> u32 {
    coeffs
        .iter()
        .rposition(|&c| c != 0.0)
        .map(|d| d as u32)
        .unwrap_or(0)
}

/// `order`-th derivative of `sum_j c_j t^j`, evaluated by Horner on the
/// differentiated coefficients.
fn poly_deriv(coeffs: &[f64], order: u32, t: f64) -> f64 {
    let ord = order as usize;
    if ord >= coeffs.len() {
        return 0.0;
    }
    let mut acc = 0.0;
    for j in (ord..coeffs.len()).rev() {
        // falling factorial j (j-1) ... (j-order+1)
        let mut fall = 1.0;
        for r in 0..ord {
            fall *= (j - r) as f64;
        }
        acc = acc * t + coeffs[j] * fall;
    }
    acc
}

/// Errors from grid construction and grid-function pairing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GridError {
    BadHorizon { t_horizon: f64 },
    TooFewNodes { n_pts: usize },
    LengthMismatch { expected: usize, got: usize },
}

impl fmt::Display for GridError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GridError::BadHorizon { t_horizon } => {
                write!(f, "time horizon must be positive, got {t_horizon}")
            }
            GridError::TooFewNodes { n_pts } => {
                write!(f, "grid needs at least 2 nodes, got {n_pts}")
            }
            GridError::LengthMismatch { expected, got } => {
                write!(f, "value vector length {got} does not match grid size {expected}")
            }
        }
    }
}

impl core::error::Error for GridError {}

/// Uniform time grid on `[0, T]` with nodes `t_j = j T / (N - 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Grid {
    t_horizon: f64,
    n_pts: usize,
}

impl Grid {
    pub fn new(t_horizon: f64, n_pts: usize) -> Result<Self, GridError> {
        if !(t_horizon > 0.0) || !t_horizon.is_finite() {
            return Err(GridError::BadHorizon { t_horizon });
        }
        if n_pts < 2 {
            return Err(GridError::TooFewNodes { n_pts });
        }
        Ok(Grid { t_horizon, n_pts })
    }

    pub fn horizon(&self) -> f64 {
        self.t_horizon
    }

    pub fn len(&self) -> usize {
        self.n_pts
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Node spacing `h = T / (N - 1)`.
    pub fn step(&self) -> f64 {
        self.t_horizon / (self.n_pts - 1) as f64
    }

    /// `t_j`, computed so that the last node lands exactly on `T`.
    pub fn node(&self, j: usize) -> f64 {
        debug_assert!(j < self.n_pts);
        self.t_horizon * j as f64 / (self.n_pts - 1) as f64
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_pts).map(move |j| self.node(j))
    }
}

/// Values of a function on the nodes of a [`Grid`].
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GridFunction {
    grid: Grid,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn zeros(grid: Grid) -> Self {
        GridFunction { values: vec![0.0; grid.len()], grid }
    }

    pub fn from_values(grid: Grid, values: Vec<f64>) -> Result<Self, GridError> {
        if values.len() != grid.len() {
            return Err(GridError::LengthMismatch { expected: grid.len(), got: values.len() });
        }
        Ok(GridFunction { grid, values })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Max (sup) norm over the grid.
    pub fn max_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, &v| m.max(libm::fabs(v)))
    }

    /// Max-norm distance to another grid function on the same grid.
    pub fn max_diff(&self, other: &GridFunction) -> f64 {
        debug_assert_eq!(self.grid, other.grid);
        self.values
            .iter()
            .zip(&other.values)
            .fold(0.0, |m, (&a, &b)| m.max(libm::fabs(a - b)))
    }

    /// `self += scale * other`, node-wise.
    pub fn axpy(&mut self, scale: f64, other: &GridFunction) {
        debug_assert_eq!(self.grid, other.grid);
        for (v, o) in self.values.iter_mut().zip(&other.values) {
            *v += scale * o;
        }
    }

    pub fn scale(&mut self, factor: f64) {
        for v in &mut self.values {
            *v *= factor;
        }
    }
}

/// Pointwise evaluation of `f` at the grid nodes.
pub fn sample<F: Fn(f64) -> f64>(f: F, grid: &Grid) -> GridFunction {
    GridFunction {
        grid: *grid,
        values: grid.nodes().map(f).collect(),
    }
}

/// Sample an [`AnalyticCoefficient`] on a grid.
pub fn sample_coefficient(
    a: &AnalyticCoefficient,
    grid: &Grid,
) -> Result<GridFunction, CoeffError> {
    let mut values = Vec::with_capacity(grid.len());
    for t in grid.nodes() {
        values.push(a.value(t)?);
    }
    Ok(GridFunction { grid: *grid, values })
}
