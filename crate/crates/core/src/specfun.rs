//! Special-function kernel: gamma machinery that stays finite at the poles,
//! generalized factorials and binomials, the hypergeometric summation closed
//! form, and the two-parameter Mittag-Leffler function.
//!
//! Everything here is a pure function of its arguments, reentrant, and safe
//! to call from any number of workers. All arithmetic is in `f64`; the
//! coefficient formulas downstream rely on `1/Gamma` being *exactly* zero at
//! the poles of the gamma function, so [`recip_gamma`] snaps near-integer
//! arguments (tolerance [`POLE_SNAP_TOL`]) onto the exact zero.

use core::f64::consts::PI;
use core::fmt;

/// Inputs within this distance of a non-positive integer are treated as
/// sitting exactly on the gamma pole.
pub const POLE_SNAP_TOL: f64 = 1e-9;

/// Arguments above this make `Gamma(x)` overflow an `f64`.
const GAMMA_OVERFLOW: f64 = 171.624_376_956_302_7;

/// Lanczos coefficients for g = 7, n = 9 (the GSL/Numerical-Recipes set).
const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Errors reported by the fallible operations of this module.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpecFunError {
    /// `gen_factorial` was asked for the value at a negative-integer pole.
    PoleValue { x: f64 },
    /// `gauss_sum` preconditions violated: the defining series diverges.
    DivergentSeries { a: f64, b: f64, c: f64 },
    /// The Mittag-Leffler series failed to converge within the term cap.
    NonConvergence { terms: u32 },
}

impl fmt::Display for SpecFunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpecFunError::PoleValue { x } => {
                write!(f, "generalized factorial has a pole at x = {x}")
            }
            SpecFunError::DivergentSeries { a, b, c } => write!(
                f,
                "hypergeometric series diverges for (a, b, c) = ({a}, {b}, {c})"
            ),
            SpecFunError::NonConvergence { terms } => {
                write!(f, "Mittag-Leffler series did not converge within {terms} terms")
            }
        }
    }
}

impl core::error::Error for SpecFunError {}

/// Returns `Some(x rounded)` when `x` is within [`POLE_SNAP_TOL`] of an
/// integer.
fn near_integer(x: f64) -> Option<f64> {
    let r = libm::round(x);
    if libm::fabs(x - r) <= POLE_SNAP_TOL {
        Some(r)
    } else {
        None
    }
}

fn is_nonpositive_integer(x: f64) -> bool {
    matches!(near_integer(x), Some(r) if r <= 0.0)
}

/// Lanczos kernel sum; valid for `x >= 0.5`.
fn lanczos_sum(x: f64) -> f64 {
    let z = x - 1.0;
    let mut acc = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    acc
}

/// `Gamma(x)` for `x >= 0.5`. Overflows to `inf` beyond ~171.6.
fn gamma_pos(x: f64) -> f64 {
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    libm::sqrt(2.0 * PI) * libm::pow(t, z + 0.5) * libm::exp(-t) * lanczos_sum(x)
}

/// `ln Gamma(x)` for `x >= 0.5`; used where the plain value would overflow.
fn ln_gamma_pos(x: f64) -> f64 {
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    0.5 * libm::log(2.0 * PI) + (z + 0.5) * libm::log(t) - t + libm::log(lanczos_sum(x))
}

/// The gamma function on the real line, via reflection for `x < 0.5`.
///
/// Returns `inf`/`-inf` style values at the poles; callers that need finite
/// behaviour there should use [`recip_gamma`] or [`gamma_ratio_shift`].
pub fn gamma(x: f64) -> f64 {
    if x >= 0.5 {
        gamma_pos(x)
    } else {
        // Gamma(x) Gamma(1-x) = pi / sin(pi x)
        let s = libm::sin(PI * x);
        if s == 0.0 {
            return f64::INFINITY;
        }
        PI / (s * gamma_pos(1.0 - x))
    }
}

/// `1/Gamma(x)`, computed as a total function.
///
/// `1/Gamma` is entire, so this is finite for every representable input and
/// exactly zero at the non-positive integers (detection tolerance
/// [`POLE_SNAP_TOL`]).
pub fn recip_gamma(x: f64) -> f64 {
    if x >= 0.5 {
        if x > GAMMA_OVERFLOW {
            // The true value underflows far below the subnormal range.
            return 0.0;
        }
        return 1.0 / gamma_pos(x);
    }
    if is_nonpositive_integer(x) {
        return 0.0;
    }
    // 1/Gamma(x) = sin(pi x) Gamma(1-x) / pi, with a log-space fallback once
    // Gamma(1-x) overflows (the reciprocal gamma genuinely explodes there,
    // but going through logs keeps intermediate NaNs out).
    let s = libm::sin(PI * x);
    let y = 1.0 - x;
    if y > GAMMA_OVERFLOW {
        let magnitude = libm::exp(ln_gamma_pos(y) - libm::log(PI));
        return s * magnitude;
    }
    s * gamma_pos(y) / PI
}

/// Generalized factorial `x! = Gamma(x + 1)`.
///
/// Signals [`SpecFunError::PoleValue`] at the negative integers; callers that
/// need the reciprocal there should use [`recip_gamma`] instead, which is
/// zero at those points.
pub fn gen_factorial(x: f64) -> Result<f64, SpecFunError> {
    if is_nonpositive_integer(x + 1.0) {
        return Err(SpecFunError::PoleValue { x });
    }
    Ok(gamma(x + 1.0))
}

/// Generalized binomial coefficient `C(alpha, n)` in the falling-product
/// form `prod_{j=0}^{n-1} (alpha - j) / n!`, finite for every real `alpha`.
pub fn gen_binomial(alpha: f64, n: u32) -> f64 {
    let mut acc = 1.0;
    for j in 0..n {
        acc *= (alpha - j as f64) / (j as f64 + 1.0);
    }
    acc
}

/// `Gamma(x) / Gamma(x - m)` as the finite product `(x-1)(x-2)...(x-m)`.
///
/// Defined for all real `x`, including where either gamma factor alone has a
/// pole; `m = 0` gives the empty product 1.
pub fn gamma_ratio_shift(x: f64, m: u32) -> f64 {
    let mut acc = 1.0;
    for r in 1..=m {
        acc *= x - r as f64;
    }
    acc
}

/// Closed form of the series `sum_n 1/((a-n)!(b-n)!(c+n)!n!)`:
///
/// ```text
///     (a+b+c)! / (a! b! (a+c)! (b+c)!)
/// ```
///
/// valid when `a + b + c > -1` or when `a` or `b` is a non-negative integer
/// (the series is then finite). For integer `a` (or `b`) the quotient
/// `(a+b+c)!/(b+c)!` is evaluated as an integer-offset gamma ratio so the
/// result stays finite when both factorials sit on poles.
pub fn gauss_sum(a: f64, b: f64, c: f64) -> Result<f64, SpecFunError> {
    let a_int = near_integer(a).filter(|&r| r >= 0.0);
    let b_int = near_integer(b).filter(|&r| r >= 0.0);
    if let Some(n) = a_int {
        let ratio = gamma_ratio_shift(a + b + c + 1.0, n as u32);
        return Ok(ratio * recip_gamma(a + 1.0) * recip_gamma(b + 1.0) * recip_gamma(a + c + 1.0));
    }
    if let Some(n) = b_int {
        let ratio = gamma_ratio_shift(a + b + c + 1.0, n as u32);
        return Ok(ratio * recip_gamma(b + 1.0) * recip_gamma(a + 1.0) * recip_gamma(b + c + 1.0));
    }
    if a + b + c > -1.0 {
        return Ok(gamma(a + b + c + 1.0)
            * recip_gamma(a + 1.0)
            * recip_gamma(b + 1.0)
            * recip_gamma(a + c + 1.0)
            * recip_gamma(b + c + 1.0));
    }
    Err(SpecFunError::DivergentSeries { a, b, c })
}

/// Parameters of the two-parameter Mittag-Leffler function `E_{alpha,beta}(z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MLParams {
    pub alpha: f64,
    pub beta: f64,
    pub z: f64,
}

impl MLParams {
    /// Both parameters must be positive.
    pub fn new(alpha: f64, beta: f64, z: f64) -> Self {
        assert!(alpha > 0.0 && beta > 0.0, "Mittag-Leffler parameters must be positive");
        MLParams { alpha, beta, z }
    }
}

/// Maximum number of Taylor terms attempted by [`mittag_leffler`].
pub const ML_TERM_CAP: u32 = 10_000;

const ML_REL_TOL: f64 = 1e-12;

/// Two-parameter Mittag-Leffler function `E_{alpha,beta}(z) = sum_k z^k /
/// Gamma(alpha k + beta)`.
///
/// Plain Taylor summation with compensated (Kahan) accumulation and a term
/// cap; there is no asymptotic branch, so accuracy degrades for large
/// negative `z` where the series cancels catastrophically. The solvers only
/// evaluate it for `|z|` up to roughly `lambda * T^beta` at desk scale.
pub fn mittag_leffler(p: MLParams) -> Result<f64, SpecFunError> {
    assert!(p.alpha > 0.0 && p.beta > 0.0, "Mittag-Leffler parameters must be positive");
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    let mut z_pow = 1.0f64;
    let mut small_streak = 0u32;
    for k in 0..ML_TERM_CAP {
        let rec = recip_gamma(p.alpha * k as f64 + p.beta);
        let term = if rec == 0.0 { 0.0 } else { z_pow * rec };
        // Kahan compensated add.
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        if libm::fabs(term) <= ML_REL_TOL * libm::fabs(sum) {
            small_streak += 1;
            if small_streak >= 2 && k >= 1 {
                return Ok(sum);
            }
        } else {
            small_streak = 0;
        }
        z_pow *= p.z;
        if !z_pow.is_finite() {
            return Err(SpecFunError::NonConvergence { terms: k + 1 });
        }
    }
    Err(SpecFunError::NonConvergence { terms: ML_TERM_CAP })
}
