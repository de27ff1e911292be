use thiserror::Error;

/// Failure modes shared by every evaluator in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum QError {
    /// An argument or parameter lies outside the region where the quantity is defined.
    #[error("{0}")]
    Domain(String),
    /// A series did not meet the convergence criterion within the term budget.
    #[error("series did not converge after {terms} terms (last term magnitude {last_term:e})")]
    NonConvergence { terms: usize, last_term: f64 },
    /// Two independent quadrature rules disagreed beyond the allowed margin.
    #[error("quadrature rules disagree: relative difference {rel_diff:e} exceeds {limit:e}")]
    Quadrature { rel_diff: f64, limit: f64 },
    #[error("non-finite value produced by {0}")]
    NonFinite(&'static str),
}

impl QError {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        QError::Domain(msg.into())
    }

    /// Short machine-readable tag, used in JSON error objects.
    pub fn kind(&self) -> &'static str {
        match self {
            QError::Domain(_) => "domain",
            QError::NonConvergence { .. } => "non_convergence",
            QError::Quadrature { .. } => "quadrature",
            QError::NonFinite(_) => "non_finite",
        }
    }
}

pub type Result<T> = std::result::Result<T, QError>;
