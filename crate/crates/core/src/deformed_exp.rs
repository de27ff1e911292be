//! Deformed exponentials `E_q^{(mu)}`, `E_{p,q}^{mu,nu}` and `E_{p,q}^{(zeta)}`.
//!
//! All three share the coefficient `w^{n^2} / [p,q;p,q]_n` with
//! `w = q^mu / p^nu`; the q-only family is the `p = 1` member, where the
//! (p,q)-factorial reduces to `(q;q)_n`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{QError, Result};
use crate::params::DeformationParams;
use crate::scalar::{ensure_finite, QField, Scalar};
use crate::series::{sum_series, SeriesEval, SeriesPolicy};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExpKind {
    QMu,
    PqMuNu,
    PqZeta,
}

/// One member of the deformed exponential families, with validated labels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpFamily {
    pub kind: ExpKind,
    pub params: DeformationParams,
    pub mu: f64,
    pub nu: f64,
    pub zeta: Option<f64>,
}

impl ExpFamily {
    /// `E_q^{(mu)}`, requiring `mu >= 0`, `0 < q < 1`.
    pub fn q_mu(q: f64, mu: f64) -> Result<Self> {
        let params = DeformationParams::q_only(q)?.with_exponents(mu, 0.0)?;
        Ok(ExpFamily {
            kind: ExpKind::QMu,
            params,
            mu,
            nu: 0.0,
            zeta: None,
        })
    }

    /// `E_{p,q}^{mu,nu}`, requiring `0 < pq < 1` and `q^{2mu} p^{1-2nu} < 1`.
    pub fn pq_munu(p: f64, q: f64, mu: f64, nu: f64) -> Result<Self> {
        let params = DeformationParams::pq(p, q)?.with_exponents(mu, nu)?;
        Ok(ExpFamily {
            kind: ExpKind::PqMuNu,
            params,
            mu,
            nu,
            zeta: None,
        })
    }

    /// `E_{p,q}^{(zeta)} = E_{p,q}^{zeta/2, zeta/2}`.
    pub fn pq_zeta(p: f64, q: f64, zeta: f64) -> Result<Self> {
        let inner = ExpFamily::pq_munu(p, q, zeta / 2.0, zeta / 2.0)?;
        Ok(ExpFamily {
            kind: ExpKind::PqZeta,
            zeta: Some(zeta),
            ..inner
        })
    }

    fn p(&self) -> f64 {
        self.params.p_or_one()
    }

    fn q(&self) -> f64 {
        self.params.q()
    }

    /// `ln w` with `w = q^mu / p^nu`.
    fn ln_weight(&self) -> f64 {
        self.mu * self.q().ln() - self.nu * self.p().ln()
    }

    /// `p^{-k} - q^k`, the k-th factor of `[p,q;p,q]_n`.
    fn factorial_factor(&self, k: usize) -> f64 {
        let p = self.p();
        let k = k as i64;
        QField::powi(&p, -k) * (p * self.q()).one_minus_pow(k)
    }

    /// Series coefficient `w^{n^2} / [p,q;p,q]_n`.
    pub fn coefficient(&self, n: usize) -> f64 {
        let mut c = (self.ln_weight() * (n * n) as f64).exp();
        for k in 1..=n {
            c /= self.factorial_factor(k);
        }
        c
    }

    /// Whether the series has a finite radius (only `E_q^{(0)}`, radius 1).
    pub fn radius(&self) -> f64 {
        if self.ln_weight() + 0.5 * self.p().ln() < 0.0 {
            f64::INFINITY
        } else {
            1.0
        }
    }

    pub fn eval(&self, z: Scalar, policy: &SeriesPolicy) -> Result<SeriesEval> {
        if z.norm() >= self.radius() {
            return Err(QError::domain(format!(
                "|z| = {} outside the convergence radius {} of this exponential",
                z.norm(),
                self.radius()
            )));
        }
        let lw = self.ln_weight();
        let mut term = Complex64::new(1.0, 0.0);
        sum_series(policy, |n| {
            if n > 0 {
                let k = n - 1;
                let w = (lw * (2 * k + 1) as f64).exp();
                term = term * z * w / self.factorial_factor(n);
            }
            ensure_finite(term, "deformed exponential term")
        })
    }
}

/// `E_q^{(mu)}(z) = sum_n q^{mu n^2} z^n / (q;q)_n`.
pub fn eq_mu(z: Scalar, q: f64, mu: f64, policy: &SeriesPolicy) -> Result<SeriesEval> {
    ExpFamily::q_mu(q, mu)?.eval(z, policy)
}

/// `E_{p,q}^{mu,nu}(z) = sum_n (q^mu/p^nu)^{n^2} z^n / [p,q;p,q]_n`.
pub fn epq_munu(z: Scalar, p: f64, q: f64, mu: f64, nu: f64, policy: &SeriesPolicy) -> Result<SeriesEval> {
    ExpFamily::pq_munu(p, q, mu, nu)?.eval(z, policy)
}

/// `E_{p,q}(z) = sum_n (q/p)^{n(n-1)/2} z^n / [p,q;p,q]_n`; at `p = 1` this
/// is `E_q(z) = (-z;q)_inf`.
pub fn vinet_exp(z: Scalar, p: f64, q: f64, policy: &SeriesPolicy) -> Result<SeriesEval> {
    // same term growth as E^{1/2,1/2}
    DeformationParams::pq(p, q)?.with_exponents(0.5, 0.5)?;
    let lr = (q / p).ln();
    let fam = ExpFamily::pq_munu(p, q, 0.5, 0.5)?;
    let mut term = Complex64::new(1.0, 0.0);
    sum_series(policy, |n| {
        if n > 0 {
            term = term * z * (lr * (n - 1) as f64).exp() / fam.factorial_factor(n);
        }
        ensure_finite(term, "Vinet exponential term")
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NamedExp {
    /// `e_q = E_q^{(0)}`
    EQ,
    /// `E_q(z) = sum q^{n(n-1)/2} z^n/(q;q)_n`
    EQVinet,
    /// `e_{p,q} = E^{0,0}_{p,q}`
    EPq,
    /// `E_{p,q}`, the Vinet (p,q)-exponential
    EPqVinet,
    /// `epsilon_{p,q} = E^{(1/2)}_{p,q}`
    EpsPq,
}

/// Dispatch to the standard named exponentials.
pub fn named_exp(name: NamedExp, z: Scalar, params: &DeformationParams, policy: &SeriesPolicy) -> Result<SeriesEval> {
    let q = params.q();
    let need_p = || {
        params
            .p()
            .ok_or_else(|| QError::domain(format!("{name:?} needs a (p,q) parameter set")))
    };
    match name {
        NamedExp::EQ => eq_mu(z, q, 0.0, policy),
        NamedExp::EQVinet => vinet_exp(z, 1.0, q, policy),
        NamedExp::EPq => epq_munu(z, need_p()?, q, 0.0, 0.0, policy),
        NamedExp::EPqVinet => vinet_exp(z, need_p()?, q, policy),
        NamedExp::EpsPq => ExpFamily::pq_zeta(need_p()?, q, 0.5)?.eval(z, policy),
    }
}

/// `|E((1-q) z) - e^z|` for q-only points, `|E((1/p - q) z) - e^z|` for
/// (p,q) points, one entry per ladder point.
pub fn classical_limit_report(
    z: Scalar,
    mu: f64,
    nu: f64,
    ladder: &[DeformationParams],
    policy: &SeriesPolicy,
) -> Result<Vec<f64>> {
    let target = z.exp();
    ladder
        .iter()
        .map(|pt| {
            let q = pt.q();
            let value = match pt.p() {
                None => eq_mu(z * (1.0 - q), q, mu, policy)?,
                Some(p) => epq_munu(z * (1.0 / p - q), p, q, mu, nu, policy)?,
            };
            Ok((value.value - target).norm())
        })
        .collect()
}
