use serde::{Deserialize, Serialize};

use crate::error::{QError, Result};

/// Validated deformation parameters.
///
/// In q-only mode `0 < q < 1`. In (p,q) mode `p, q > 0` and `0 < pq < 1`;
/// when exponent labels `(mu, nu)` are attached the series side condition
/// `q^{2 mu} p^{1 - 2 nu} < 1` must also hold. Construction never clamps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeformationParams {
    q: f64,
    p: Option<f64>,
    mu: Option<f64>,
    nu: Option<f64>,
}

impl DeformationParams {
    pub fn q_only(q: f64) -> Result<Self> {
        if !(q.is_finite() && q > 0.0 && q < 1.0) {
            return Err(QError::domain(format!(
                "q out of domain: q = {q} must satisfy 0 < q < 1"
            )));
        }
        Ok(DeformationParams {
            q,
            p: None,
            mu: None,
            nu: None,
        })
    }

    pub fn pq(p: f64, q: f64) -> Result<Self> {
        if !(p.is_finite() && p > 0.0) {
            return Err(QError::domain(format!("p out of domain: p = {p} must be > 0")));
        }
        if !(q.is_finite() && q > 0.0) {
            return Err(QError::domain(format!("q out of domain: q = {q} must be > 0")));
        }
        let prod = p * q;
        if !(prod < 1.0) {
            return Err(QError::domain(format!(
                "pq out of domain: p*q = {prod} must satisfy 0 < pq < 1"
            )));
        }
        Ok(DeformationParams {
            q,
            p: Some(p),
            mu: None,
            nu: None,
        })
    }

    /// Attaches exponent labels, checking `q^{2 mu} p^{1-2 nu} < 1`
    /// in (p,q) mode, or `mu >= 0` in q-only mode.
    pub fn with_exponents(mut self, mu: f64, nu: f64) -> Result<Self> {
        if !(mu.is_finite() && nu.is_finite()) {
            return Err(QError::domain("exponent labels must be finite"));
        }
        match self.p {
            Some(p) => {
                let c = exponent_ratio(p, self.q, mu, nu);
                if !(c < 1.0) {
                    return Err(QError::domain(format!(
                        "exponent labels out of domain: q^(2mu) p^(1-2nu) = {c} must be < 1 \
                         (p = {p}, q = {}, mu = {mu}, nu = {nu})",
                        self.q
                    )));
                }
            }
            None => {
                if mu < 0.0 {
                    return Err(QError::domain(format!("mu out of domain: mu = {mu} must be >= 0")));
                }
            }
        }
        self.mu = Some(mu);
        self.nu = Some(nu);
        Ok(self)
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn p(&self) -> Option<f64> {
        self.p
    }

    /// `p` in (p,q) mode, `1` in q-only mode.
    pub fn p_or_one(&self) -> f64 {
        self.p.unwrap_or(1.0)
    }

    pub fn mu(&self) -> Option<f64> {
        self.mu
    }

    pub fn nu(&self) -> Option<f64> {
        self.nu
    }

    pub fn is_pq(&self) -> bool {
        self.p.is_some()
    }

    /// `q / p` (equals `q` in q-only mode).
    pub fn ratio(&self) -> f64 {
        self.q / self.p_or_one()
    }
}

/// `q^{2 mu} p^{1 - 2 nu}`: the quadratic growth rate of the (p,q,mu,nu)
/// exponential coefficients.
pub fn exponent_ratio(p: f64, q: f64, mu: f64, nu: f64) -> f64 {
    (2.0 * mu * q.ln() + (1.0 - 2.0 * nu) * p.ln()).exp()
}
