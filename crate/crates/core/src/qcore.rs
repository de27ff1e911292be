//! Elementary q- and (p,q)-combinatorial quantities and the two basic
//! operators on polynomials: the Jackson derivative and the q-dilation.

use crate::error::{QError, Result};
use crate::poly::QPolynomial;
use crate::scalar::QField;
use crate::series::{SeriesEval, SeriesPolicy};

/// Finite q-shifted factorial `(a;q)_n = prod_{i<n} (1 - a q^i)`.
pub fn qpochhammer<T: QField>(a: &T, q: &T, n: usize) -> T {
    let mut acc = T::one();
    let mut aq = a.clone();
    for _ in 0..n {
        acc = acc * (T::one() - aq.clone());
        aq = aq * q.clone();
    }
    acc
}

/// Infinite product `(a;q)_inf`, truncated once `consecutive_small`
/// successive factors have a geometric tail bound `|a q^k| / (1 - |q|)`
/// below `rel_tol`.
pub fn qpochhammer_inf<T: QField>(a: &T, q: &T, policy: &SeriesPolicy) -> Result<SeriesEval<T>> {
    policy.validate()?;
    if q.magnitude() >= 1.0 {
        return Err(QError::domain(format!(
            "infinite q-Pochhammer requires |q| < 1, got |q| = {}",
            q.magnitude()
        )));
    }
    let mut acc = T::one();
    let mut aq = a.clone();
    let mut small_run = 0;
    let tail_factor = 1.0 / (1.0 - q.magnitude());
    for i in 0..policy.max_terms {
        let dev = aq.magnitude() * tail_factor;
        acc = acc * (T::one() - aq.clone());
        if acc.is_zero() {
            return Ok(SeriesEval::finite(acc, i + 1, 0.0));
        }
        if dev <= policy.rel_tol {
            small_run += 1;
            if small_run >= policy.consecutive_small {
                return Ok(SeriesEval {
                    value: acc,
                    terms_used: i + 1,
                    converged: true,
                    est_error: dev,
                });
            }
        } else {
            small_run = 0;
        }
        aq = aq * q.clone();
    }
    Err(QError::NonConvergence {
        terms: policy.max_terms,
        last_term: aq.magnitude(),
    })
}

/// Gaussian binomial `(q;q)_n / ((q;q)_k (q;q)_{n-k})`, evaluated as the
/// telescoped product `prod_{i=1}^{k} (1 - q^{n-k+i}) / (1 - q^i)`.
pub fn qbinomial<T: QField>(n: usize, k: usize, q: &T) -> Result<T> {
    if k > n {
        return Err(QError::domain(format!(
            "q-binomial requires k <= n, got n = {n}, k = {k}"
        )));
    }
    let k = k.min(n - k);
    let mut acc = T::one();
    for i in 1..=k {
        let den = q.one_minus_pow(i as i64);
        if den.is_zero() {
            return Err(QError::domain(
                "q-binomial undefined: 1 - q^i vanishes (q = 1 or a root of unity)",
            ));
        }
        acc = acc * q.one_minus_pow((n - k + i) as i64) / den;
    }
    Ok(acc)
}

/// q-number `[n]_q = (1 - q^n)/(1 - q)`.
pub fn qnumber_m<T: QField>(n: usize, q: &T) -> Result<T> {
    let den = T::one() - q.clone();
    if den.is_zero() {
        return Err(QError::domain("q-number [n]_q undefined at q = 1; use the integer n"));
    }
    Ok(q.one_minus_pow(n as i64) / den)
}

fn check_symmetric_base<T: QField>(q: &T) -> Result<()> {
    if q.is_zero() || (q.clone() - T::one()).is_zero() || (q.clone() + T::one()).is_zero() {
        return Err(QError::domain("symmetric q-number requires q not in {0, 1, -1}"));
    }
    Ok(())
}

/// Symmetric q-number `(q^n - q^{-n})/(q - q^{-1})`.
pub fn qnumber_p<T: QField>(n: i64, q: &T) -> Result<T> {
    check_symmetric_base(q)?;
    let inv = T::one() / q.clone();
    Ok((q.powi(n) - q.powi(-n)) / (q.clone() - inv))
}

/// `[n]^P! = [n]^P [n-1]^P ... [1]^P`.
pub fn qfactorial_p<T: QField>(n: usize, q: &T) -> Result<T> {
    check_symmetric_base(q)?;
    let mut acc = T::one();
    for i in 1..=n {
        acc = acc * qnumber_p(i as i64, q)?;
    }
    Ok(acc)
}

/// Symmetric q-binomial `[m]^P! / ([n]^P! [m-n]^P!)`.
pub fn qbinomial_p<T: QField>(m: usize, n: usize, q: &T) -> Result<T> {
    if n > m {
        return Err(QError::domain(format!(
            "symmetric q-binomial requires n <= m, got m = {m}, n = {n}"
        )));
    }
    Ok(qfactorial_p(m, q)? / (qfactorial_p(n, q)? * qfactorial_p(m - n, q)?))
}

/// (p,q)-factorial `[p^rho, q^delta; p, q]_n = prod_{i<n} (p^{-(rho+i)} - q^{delta+i})`,
/// by direct product.
pub fn pq_factorial(rho: f64, delta: f64, p: f64, q: f64, n: usize) -> Result<f64> {
    if p == 0.0 {
        return Err(QError::domain("(p,q)-factorial requires p != 0"));
    }
    let mut acc = 1.0;
    for i in 0..n {
        let i = i as f64;
        acc *= p.powf(-(rho + i)) - q.powf(delta + i);
    }
    Ok(acc)
}

/// Jackson derivative `(f(y) - f(qy)) / ((1-q) y)`, acting on coefficients
/// as `c_n y^n -> c_n [n]_q y^{n-1}`.
pub fn jackson_derivative<T: QField>(f: &QPolynomial<T>, q: &T) -> Result<QPolynomial<T>> {
    if (T::one() - q.clone()).is_zero() {
        return Err(QError::domain("Jackson derivative undefined at q = 1"));
    }
    let coeffs = f
        .coeffs()
        .iter()
        .enumerate()
        .skip(1)
        .map(|(n, c)| qnumber_m(n, q).map(|qn| c.clone() * qn))
        .collect::<Result<Vec<_>>>()?;
    Ok(QPolynomial::new(coeffs))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dilation {
    /// `f(y) -> f(qy)`
    Forward,
    /// `f(y) -> f(y/q)`
    Inverse,
}

/// q-dilation `T f(y) = f(qy)` or its inverse.
pub fn q_dilation<T: QField>(f: &QPolynomial<T>, q: &T, direction: Dilation) -> Result<QPolynomial<T>> {
    let exp_sign = match direction {
        Dilation::Forward => 1,
        Dilation::Inverse => {
            if q.is_zero() {
                return Err(QError::domain("inverse q-dilation undefined at q = 0"));
            }
            -1
        }
    };
    Ok(f.map_indexed(|m, c| c.clone() * q.powi(exp_sign * m as i64)))
}
