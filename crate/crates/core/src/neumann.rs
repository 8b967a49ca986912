//! Nested-operator series solver, used as the independent cross-validation
//! oracle for the single-integral representation.
//!
//! The solution of `D^beta y + a y = b` under homogeneous initial data is
//!
//! ```text
//!     y = sum_k (-1)^k I^beta (a I^beta)^k b,
//! ```
//!
//! evaluated here in the factored form: each term reuses the previous one,
//! `term_{k+1} = I^beta (a * term_k)`, so the k-th partial sum costs one
//! pointwise multiplication and one fractional integral per term instead of
//! re-nesting from scratch.

use alloc::vec::Vec;

use crate::fracops::{rl_integral, FracOpsError};
use crate::funcrep::{sample_coefficient, AnalyticCoefficient, GridFunction};

/// Result of a [`neumann_solve`] run. The partial sum is always returned,
/// with flags describing how the iteration stopped.
#[derive(Debug, Clone)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct NeumannSolution {
    pub solution: GridFunction,
    /// Index of the last term accumulated.
    pub k_used: usize,
    /// Max-norm of every accumulated term.
    pub term_norms: Vec<f64>,
    /// The last term fell below the stopping tolerance.
    pub converged: bool,
    /// Term norms were non-decreasing for 3 consecutive terms; for the
    /// convergent series this flags a quadrature fault or an operating point
    /// far outside desk scale.
    pub diverging: bool,
}

/// One application of the nested operator: `I^beta (a * prev)`.
///
/// Starting from `term_0 = I^beta b`, iterating this map produces exactly
/// the terms `I^beta (a I^beta)^k b` of the series.
pub fn nested_term(
    prev: &GridFunction,
    a: &AnalyticCoefficient,
    beta: f64,
) -> Result<GridFunction, FracOpsError> {
    let a_vals = sample_coefficient(a, prev.grid()).map_err(|_| FracOpsError::GridMismatch)?;
    let mut product = prev.clone();
    for (p, w) in product.values_mut().iter_mut().zip(a_vals.values()) {
        *p *= w;
    }
    rl_integral(&product, beta)
}

/// Alternating accumulation of the nested series, stopping when the latest
/// term's max-norm drops below `tol` or `max_terms` terms have been used.
pub fn neumann_solve(
    a: &AnalyticCoefficient,
    b: &GridFunction,
    beta: f64,
    max_terms: usize,
    tol: f64,
) -> Result<NeumannSolution, FracOpsError> {
    assert!(max_terms >= 1, "need at least one term");
    assert!(tol > 0.0, "tolerance must be positive");

    let mut term = rl_integral(b, beta)?;
    let mut acc = term.clone();
    let mut term_norms = Vec::with_capacity(max_terms + 1);
    term_norms.push(term.max_norm());

    let mut sign = -1.0;
    let mut growth_streak = 0u32;
    let mut converged = term_norms[0] < tol;
    let mut diverging = false;
    let mut k_used = 0;

    if !converged {
        for k in 1..=max_terms {
            term = nested_term(&term, a, beta)?;
            let norm = term.max_norm();
            if norm == 0.0 {
                // Identically zero term contributes nothing; k_used stays at
                // the last term that did.
                term_norms.push(norm);
                converged = true;
                break;
            }
            acc.axpy(sign, &term);
            sign = -sign;
            k_used = k;

            if norm >= term_norms[k - 1] {
                growth_streak += 1;
            } else {
                growth_streak = 0;
            }
            term_norms.push(norm);

            if norm < tol {
                converged = true;
                break;
            }
            if growth_streak >= 3 {
                diverging = true;
                break;
            }
        }
    }

    Ok(NeumannSolution { solution: acc, k_used, term_norms, converged, diverging })
}
