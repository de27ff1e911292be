//! Truncation contract shared by all infinite-series evaluators.

use serde::{Deserialize, Serialize};

use crate::error::{QError, Result};
use crate::scalar::{ensure_finite, QField, Scalar};

/// Stopping rule for an infinite series: stop once `consecutive_small`
/// successive terms each fall below `rel_tol * |partial sum|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesPolicy {
    pub rel_tol: f64,
    pub max_terms: usize,
    pub consecutive_small: usize,
}

impl Default for SeriesPolicy {
    fn default() -> Self {
        SeriesPolicy {
            rel_tol: 1e-14,
            max_terms: 10_000,
            consecutive_small: 3,
        }
    }
}

impl SeriesPolicy {
    pub fn new(rel_tol: f64, max_terms: usize, consecutive_small: usize) -> Result<Self> {
        let policy = SeriesPolicy {
            rel_tol,
            max_terms,
            consecutive_small,
        };
        policy.validate()?;
        Ok(policy)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol.is_finite()) {
            return Err(QError::domain("series policy: rel_tol must be positive"));
        }
        if self.max_terms < 1 || self.consecutive_small < 1 {
            return Err(QError::domain(
                "series policy: max_terms and consecutive_small must be >= 1",
            ));
        }
        Ok(())
    }

    /// Same policy with a tighter or looser tolerance.
    pub fn with_rel_tol(self, rel_tol: f64) -> Self {
        SeriesPolicy { rel_tol, ..self }
    }
}

/// Result record of a series evaluation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesEval<T = Scalar> {
    pub value: T,
    pub terms_used: usize,
    pub converged: bool,
    /// Magnitude of the last included term.
    pub est_error: f64,
}

impl<T: QField> SeriesEval<T> {
    /// Record for a finite sum: always converged, `est_error` is the last
    /// term's magnitude (zero when the sum terminates on a vanishing factor).
    pub(crate) fn finite(value: T, terms_used: usize, est_error: f64) -> Self {
        SeriesEval {
            value,
            terms_used,
            converged: true,
            est_error,
        }
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> SeriesEval<U> {
        SeriesEval {
            value: f(self.value),
            terms_used: self.terms_used,
            converged: self.converged,
            est_error: self.est_error,
        }
    }
}

/// Sums `term(0) + term(1) + ...` under `policy`.
///
/// `term` is called with consecutive indices and may carry state (running
/// ratios). Returns `NonConvergence` once `max_terms` terms are used without
/// meeting the stopping rule.
pub fn sum_series<T, F>(policy: &SeriesPolicy, mut term: F) -> Result<SeriesEval<T>>
where
    T: QField,
    F: FnMut(usize) -> Result<T>,
{
    policy.validate()?;
    let mut sum = T::zero();
    let mut small_run = 0usize;
    let mut last = 0.0f64;
    let mut prev_nonzero = 0.0f64;
    for k in 0..policy.max_terms {
        let t = term(k)?;
        last = t.magnitude();
        sum = ensure_finite(sum + t, "series partial sum")?;
        // geometric tail estimate from the ratio to the previous nonzero term
        let tail = if last == 0.0 {
            0.0
        } else if prev_nonzero > 0.0 && last < prev_nonzero {
            last / (1.0 - last / prev_nonzero)
        } else {
            f64::INFINITY
        };
        if last > 0.0 {
            prev_nonzero = last;
        }
        if tail <= policy.rel_tol * sum.magnitude() {
            small_run += 1;
            if small_run >= policy.consecutive_small {
                return Ok(SeriesEval {
                    value: sum,
                    terms_used: k + 1,
                    converged: true,
                    est_error: tail,
                });
            }
        } else {
            small_run = 0;
        }
    }
    Err(QError::NonConvergence {
        terms: policy.max_terms,
        last_term: last,
    })
}

/// Sums exactly `count` terms.
pub fn sum_finite<T, F>(count: usize, mut term: F) -> Result<SeriesEval<T>>
where
    T: QField,
    F: FnMut(usize) -> Result<T>,
{
    let mut sum = T::zero();
    let mut last = 0.0;
    for k in 0..count {
        let t = term(k)?;
        last = t.magnitude();
        sum = sum + t;
    }
    let sum = ensure_finite(sum, "finite sum")?;
    Ok(SeriesEval::finite(sum, count, last))
}

/// Pairwise summation in a fixed association order, so that a sum of
/// independently computed values is bitwise reproducible.
pub fn pairwise_sum(values: &[Scalar]) -> Scalar {
    match values.len() {
        0 => Scalar::new(0.0, 0.0),
        1 => values[0],
        n if n <= 8 => values.iter().sum(),
        n => {
            let (a, b) = values.split_at(n / 2);
            pairwise_sum(a) + pairwise_sum(b)
        }
    }
}
