//! Closed-form matrix elements `U_{m,n}` of `E(c_+ A_+) E(c_- A_-)` and their
//! kernel polynomials `Q^{(mu,nu)}_n` (q-oscillator) and `L^{(gamma;mu,nu)}_n`
//! ((p,q)-oscillator).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{QError, Result};
use crate::params::DeformationParams;
use crate::qcore::{pq_factorial, qbinomial, qpochhammer};
use crate::scalar::{ensure_finite, QField, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    /// the `m >= n` formula
    RaisingDominant,
    /// the `m <= n` formula, also returned on the diagonal
    LoweringDominant,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MatrixElementResult {
    pub value: Scalar,
    pub branch: Branch,
    pub kernel_value: Scalar,
}

fn check_q(q: f64) -> Result<()> {
    DeformationParams::q_only(q).map(|_| ())
}

/// `Q^{(mu,nu)}_n(x; q^gamma | q) = sum_k q^{k^2(mu+nu) + (2 nu gamma + n) k}
/// (q^{-n};q)_k / ((q;q)_k (q^{gamma+1};q)_k) q^{-k(k-1)/2} x^k`.
pub fn q_kernel_q(n: usize, x: Scalar, gamma: f64, mu: f64, nu: f64, q: f64) -> Result<Scalar> {
    check_q(q)?;
    let qg1 = q.powf(gamma + 1.0);
    let qn = q.powi(-(n as i32));
    let mut ratio = 1.0f64;
    let mut sum = Complex64::new(1.0, 0.0);
    let mut xk = Complex64::new(1.0, 0.0);
    for k in 1..=n {
        let j = (k - 1) as i32;
        let den = q.one_minus_pow(k as i64) * (1.0 - qg1 * q.powi(j));
        if den.is_vanishing() {
            return Err(QError::domain(format!("Q kernel: lower parameter pole at k = {k}")));
        }
        ratio *= (1.0 - qn * q.powi(j)) / den;
        xk *= x;
        let kf = k as f64;
        let expo = kf * kf * (mu + nu) + (2.0 * nu * gamma + n as f64) * kf - kf * (kf - 1.0) / 2.0;
        sum += xk * ratio * q.powf(expo);
    }
    ensure_finite(sum, "Q kernel")
}

/// `L^{(gamma;mu,nu)}_n(x; p, q) = sum_k (q^mu/p^nu)^{2k(gamma+k)}
/// ((pq)^{-n};pq)_k / ((pq;pq)_k ((pq)^{gamma+1};pq)_k) p^{k(k+1)/2}
/// [x (1-pq) p^{gamma+n}]^k`.
pub fn pq_kernel_l(n: usize, x: Scalar, gamma: usize, mu: f64, nu: f64, p: f64, q: f64) -> Result<Scalar> {
    DeformationParams::pq(p, q)?;
    let b = p * q;
    let ln_w = mu * q.ln() - nu * p.ln();
    let bg1 = b.powi(gamma as i32 + 1);
    let bn = b.powi(-(n as i32));
    let arg = x * ((1.0 - b) * p.powi((gamma + n) as i32));
    let mut ratio = 1.0f64;
    let mut sum = Complex64::new(1.0, 0.0);
    let mut ak = Complex64::new(1.0, 0.0);
    for k in 1..=n {
        let j = (k - 1) as i32;
        ratio *= (1.0 - bn * b.powi(j)) / (b.one_minus_pow(k as i64) * (1.0 - bg1 * b.powi(j)));
        ak *= arg;
        let kf = k as f64;
        let weight = (ln_w * 2.0 * kf * (gamma as f64 + kf)).exp() * p.powf(kf * (kf + 1.0) / 2.0);
        sum += ak * ratio * weight;
    }
    ensure_finite(sum, "L kernel")
}

/// `[n m]_{p,q} = [n]! / ([m]! [n-m]!)` with `[k]! = prod_{l<=k} (p^{-l} - q^l)`.
pub fn pq_binomial(n: usize, m: usize, p: f64, q: f64) -> Result<f64> {
    if m > n {
        return Err(QError::domain(format!(
            "(p,q)-binomial needs m <= n, got m = {m}, n = {n}"
        )));
    }
    Ok(pq_factorial(1.0, 1.0, p, q, n)? / (pq_factorial(1.0, 1.0, p, q, m)? * pq_factorial(1.0, 1.0, p, q, n - m)?))
}

fn branch_for(m: usize, n: usize) -> Branch {
    if m > n {
        Branch::RaisingDominant
    } else {
        Branch::LoweringDominant
    }
}

fn check_branch(m: usize, n: usize, branch: Branch) -> Result<()> {
    let ok = match branch {
        Branch::RaisingDominant => m >= n,
        Branch::LoweringDominant => m <= n,
    };
    if ok {
        Ok(())
    } else {
        Err(QError::domain(format!(
            "{branch:?} formula does not apply at m = {m}, n = {n}"
        )))
    }
}

/// q-oscillator element from the requested branch formula.
#[allow(clippy::too_many_arguments)]
pub fn u_q_branch(
    m: usize,
    n: usize,
    alpha: Scalar,
    beta: Scalar,
    mu: f64,
    nu: f64,
    q: f64,
    branch: Branch,
) -> Result<MatrixElementResult> {
    check_q(q)?;
    check_branch(m, n, branch)?;
    let x = -alpha * beta * (1.0 - q);
    let (pref, kernel) = match branch {
        Branch::LoweringDominant => {
            let d = n - m;
            let pref = beta.powu(d as u32) * qbinomial(n, m, &q)? * q.powf(nu * (d * d) as f64);
            (pref, q_kernel_q(m, x, d as f64, mu, nu, q)?)
        }
        Branch::RaisingDominant => {
            let d = m - n;
            let pref = (alpha * (1.0 - q)).powu(d as u32) * q.powf(mu * (d * d) as f64) / qpochhammer(&q, &q, d);
            // mu and nu trade places in the kernel
            (pref, q_kernel_q(n, x, d as f64, nu, mu, q)?)
        }
    };
    Ok(MatrixElementResult {
        value: ensure_finite(pref * kernel, "q matrix element")?,
        branch,
        kernel_value: kernel,
    })
}

/// `U_{m,n}` of `E_q^{(mu)}((1-q) alpha A_+) E_q^{(nu)}((1-q) beta A_-)`.
pub fn u_q(m: usize, n: usize, alpha: Scalar, beta: Scalar, mu: f64, nu: f64, q: f64) -> Result<MatrixElementResult> {
    u_q_branch(m, n, alpha, beta, mu, nu, q, branch_for(m, n))
}

/// (p,q)-oscillator element from the requested branch formula.
#[allow(clippy::too_many_arguments)]
pub fn u_pq_branch(
    m: usize,
    n: usize,
    alpha: Scalar,
    beta: Scalar,
    mu: f64,
    nu: f64,
    p: f64,
    q: f64,
    branch: Branch,
) -> Result<MatrixElementResult> {
    DeformationParams::pq(p, q)?;
    check_branch(m, n, branch)?;
    let x = -alpha * beta;
    let shift = q.powf(mu - 0.25) / p.powf(nu - 0.25);
    let r = q / p;
    let (pref, kernel) = match branch {
        Branch::LoweringDominant => {
            let d = n - m;
            let pref = (-beta).powu(d as u32)
                * pq_binomial(n, m, p, q)?
                * shift.powi((d * d) as i32)
                * r.powf(-((d * (1 + 2 * m)) as f64) / 4.0);
            (pref, pq_kernel_l(m, x, d, mu, nu, p, q)?)
        }
        Branch::RaisingDominant => {
            let d = m - n;
            let pref = (-alpha * (1.0 / p - q)).powu(d as u32) / pq_factorial(1.0, 1.0, p, q, d)?
                * shift.powi((d * d) as i32)
                * r.powf(-((d * (1 + 2 * n)) as f64) / 4.0);
            (pref, pq_kernel_l(n, x, d, mu, nu, p, q)?)
        }
    };
    Ok(MatrixElementResult {
        value: ensure_finite(pref * kernel, "(p,q) matrix element")?,
        branch,
        kernel_value: kernel,
    })
}

/// `U_{m,n}` of `E^{mu,nu}_{p,q}(alpha (1/p - q) A_+) E^{mu,nu}_{p,q}(beta p/q (1/p - q) A_-)`.
#[allow(clippy::too_many_arguments)]
pub fn u_pq(
    m: usize,
    n: usize,
    alpha: Scalar,
    beta: Scalar,
    mu: f64,
    nu: f64,
    p: f64,
    q: f64,
) -> Result<MatrixElementResult> {
    u_pq_branch(m, n, alpha, beta, mu, nu, p, q, branch_for(m, n))
}
