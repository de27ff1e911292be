//! Rogers-Szegő polynomials `H_n(y|q) = sum_k [n k]_q y^k`, their raising
//! and lowering operators, generating functions and q-difference equation.
//!
//! Operators act on monomial coefficient vectors. The number operator `q^N`
//! inside `S_+ = I + y q^N T^{-1}` is diagonal in the `H`-basis
//! (`q^N H_n = q^n H_n`); since every `H_n` is monic of degree `n`, the
//! change to that basis is a triangular elimination.

use crate::error::{QError, Result};
use crate::poly::QPolynomial;
use crate::qcore::{jackson_derivative, q_dilation, qbinomial, qnumber_m, qpochhammer_inf, Dilation};
use crate::qseries::{phi_rs, PhiSpec};
use crate::scalar::QField;
use crate::series::{sum_series, SeriesEval, SeriesPolicy};

/// `H_n` from its defining q-binomial sum.
pub fn rs_direct<T: QField>(n: usize, q: &T) -> Result<QPolynomial<T>> {
    let coeffs = (0..=n).map(|k| qbinomial(n, k, q)).collect::<Result<Vec<_>>>()?;
    Ok(QPolynomial::new(coeffs))
}

/// `H_0, ..., H_n` from `H_{k+1} = (1+y) H_k - y (1-q^k) H_{k-1}`.
pub fn rs_sequence<T: QField>(n: usize, q: &T) -> Vec<QPolynomial<T>> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(QPolynomial::one());
    if n == 0 {
        return out;
    }
    out.push(QPolynomial::new(vec![T::one(), T::one()]));
    for k in 1..n {
        let hk = &out[k];
        let one_plus_y = &hk.mul_y() + hk;
        let tail = out[k - 1].mul_y().scale(&q.one_minus_pow(k as i64));
        out.push(&one_plus_y - &tail);
    }
    out
}

/// `H_n` built by the three-term recurrence.
pub fn rs_recurrence<T: QField>(n: usize, q: &T) -> QPolynomial<T> {
    rs_sequence(n, q).pop().expect("sequence is never empty")
}

/// `H_n(y|q)` by Horner evaluation of the direct coefficients.
pub fn rs_eval<T: QField>(n: usize, y: &T, q: &T) -> Result<T> {
    Ok(rs_direct(n, q)?.eval(y))
}

/// Coordinates of `f` in the basis `H_0, H_1, ...`.
pub fn h_basis_coordinates<T: QField>(f: &QPolynomial<T>, q: &T) -> Vec<T> {
    let Some(deg) = f.degree() else {
        return Vec::new();
    };
    let basis = rs_sequence(deg, q);
    let mut rest = f.clone();
    let mut coords = vec![T::zero(); deg + 1];
    for k in (0..=deg).rev() {
        let lead = rest.coeff(k);
        if !lead.is_zero() {
            rest = &rest - &basis[k].scale(&lead);
        }
        coords[k] = lead;
    }
    coords
}

fn from_h_basis<T: QField>(coords: &[T], q: &T) -> QPolynomial<T> {
    if coords.is_empty() {
        return QPolynomial::zero();
    }
    let basis = rs_sequence(coords.len() - 1, q);
    coords
        .iter()
        .zip(&basis)
        .fold(QPolynomial::zero(), |acc, (c, h)| &acc + &h.scale(c))
}

/// `q^N f` with `N` the `H`-index number operator.
pub fn q_power_number<T: QField>(f: &QPolynomial<T>, q: &T) -> QPolynomial<T> {
    let coords: Vec<T> = h_basis_coordinates(f, q)
        .into_iter()
        .enumerate()
        .map(|(n, c)| c * q.powi(n as i64))
        .collect();
    from_h_basis(&coords, q)
}

/// `N f` with `N` the `H`-index number operator (`N H_n = n H_n`).
pub fn number_operator<T: QField>(f: &QPolynomial<T>, q: &T) -> QPolynomial<T> {
    let coords: Vec<T> = h_basis_coordinates(f, q)
        .into_iter()
        .enumerate()
        .map(|(n, c)| c * T::from_i64(n as i64))
        .collect();
    from_h_basis(&coords, q)
}

/// Monomial degree operator `y d/dy`: `c_m -> m c_m`.
pub fn degree_operator<T: QField>(f: &QPolynomial<T>) -> QPolynomial<T> {
    f.map_indexed(|m, c| c.clone() * T::from_i64(m as i64))
}

/// Raising operator `S_+ f = f + y T^{-1} (q^N f)`.
///
/// With `n_hint = Some(n)` the argument is taken to be a multiple of `H_n`
/// and `q^N` acts as the scalar `q^n`; otherwise `q^N` is applied through
/// the `H`-basis, which makes `S_+` linear on all polynomials.
pub fn rs_raise<T: QField>(f: &QPolynomial<T>, q: &T, n_hint: Option<usize>) -> Result<QPolynomial<T>> {
    let scaled = match n_hint {
        Some(n) => f.scale(&q.powi(n as i64)),
        None => q_power_number(f, q),
    };
    let shifted = q_dilation(&scaled, q, Dilation::Inverse)?.mul_y();
    Ok(f + &shifted)
}

/// Lowering operator `S_- = qD_y` (Jackson derivative).
pub fn rs_lower<T: QField>(f: &QPolynomial<T>, q: &T) -> Result<QPolynomial<T>> {
    jackson_derivative(f, q)
}

/// `N_q = S_+ S_-`.
pub fn rs_number<T: QField>(f: &QPolynomial<T>, q: &T) -> Result<QPolynomial<T>> {
    rs_raise(&rs_lower(f, q)?, q, None)
}

fn check_generating_region<T: QField>(alpha: &T, y: &T) -> Result<()> {
    if alpha.magnitude() >= 1.0 || (alpha.clone() * y.clone()).magnitude() >= 1.0 {
        return Err(QError::domain(format!(
            "generating function requires |alpha| < 1 and |alpha y| < 1 (|alpha| = {}, |alpha y| = {})",
            alpha.magnitude(),
            (alpha.clone() * y.clone()).magnitude()
        )));
    }
    Ok(())
}

/// Closed form `1/((alpha;q)_inf (alpha y;q)_inf)` of `sum_m alpha^m H_m(y)/(q;q)_m`.
pub fn rs_generating_closed<T: QField>(alpha: &T, y: &T, q: &T, policy: &SeriesPolicy) -> Result<T> {
    check_generating_region(alpha, y)?;
    let a = qpochhammer_inf(alpha, q, policy)?;
    let b = qpochhammer_inf(&(alpha.clone() * y.clone()), q, policy)?;
    Ok(T::one() / (a.value * b.value))
}

/// Series side `sum_m alpha^m H_m(y)/(q;q)_m`, with `H_m(y)` advanced by the
/// value form of the three-term recurrence.
pub fn rs_generating_series<T: QField>(alpha: &T, y: &T, q: &T, policy: &SeriesPolicy) -> Result<SeriesEval<T>> {
    check_generating_region(alpha, y)?;
    generating_sum(y, q, policy, |m, prev| {
        if m == 0 {
            T::one()
        } else {
            prev * alpha.clone() / q.one_minus_pow(m as i64)
        }
    })
}

/// Closed form of `sum_m t^m q^{m(m-1)/2} H_m(y)/(q;q)_m`:
/// `(-t;q)_inf * 1phi1(0; -t; q, -t y)`.
pub fn rs_generating2_closed<T: QField>(t: &T, y: &T, q: &T, policy: &SeriesPolicy) -> Result<T> {
    if q.magnitude() >= 1.0 {
        return Err(QError::domain("second generating function requires |q| < 1"));
    }
    let prod = qpochhammer_inf(&(-t.clone()), q, policy)?;
    let spec = PhiSpec::basic(vec![T::zero()], vec![-t.clone()], q.clone(), -(t.clone() * y.clone()));
    Ok(prod.value * phi_rs(&spec, policy)?.value)
}

/// Series side `sum_m t^m q^{m(m-1)/2} H_m(y)/(q;q)_m`.
pub fn rs_generating2_series<T: QField>(t: &T, y: &T, q: &T, policy: &SeriesPolicy) -> Result<SeriesEval<T>> {
    if q.magnitude() >= 1.0 {
        return Err(QError::domain("second generating function requires |q| < 1"));
    }
    generating_sum(y, q, policy, |m, prev| {
        if m == 0 {
            T::one()
        } else {
            prev * t.clone() * q.powi(m as i64 - 1) / q.one_minus_pow(m as i64)
        }
    })
}

/// `sum_m w_m H_m(y)`, with weights produced from the previous weight.
fn generating_sum<T: QField>(
    y: &T,
    q: &T,
    policy: &SeriesPolicy,
    mut weight: impl FnMut(usize, T) -> T,
) -> Result<SeriesEval<T>> {
    let one_plus_y = T::one() + y.clone();
    let (mut h_prev, mut h_cur) = (T::zero(), T::one());
    let mut w = T::one();
    sum_series(policy, |m| {
        if m > 0 {
            let next = one_plus_y.clone() * h_cur.clone() - y.clone() * q.one_minus_pow(m as i64 - 1) * h_prev.clone();
            h_prev = std::mem::replace(&mut h_cur, next);
        }
        w = weight(m, w.clone());
        Ok(w.clone() * h_cur.clone())
    })
}

/// The q-difference operator `qD + y q^n qD T^{-1} - [n]_q` applied to `H_n`,
/// as a polynomial (identically zero).
pub fn rs_qdifference_poly<T: QField>(n: usize, q: &T) -> Result<QPolynomial<T>> {
    let h = rs_direct(n, q)?;
    let d = jackson_derivative(&h, q)?;
    let dt = jackson_derivative(&q_dilation(&h, q, Dilation::Inverse)?, q)?;
    let middle = dt.mul_y().scale(&q.powi(n as i64));
    let eig = h.scale(&qnumber_m(n, q)?);
    Ok(&(&d + &middle) - &eig)
}

/// Value at `y` of the q-difference equation's left side on `H_n`.
pub fn rs_qdifference_residual<T: QField>(n: usize, y: &T, q: &T) -> Result<T> {
    Ok(rs_qdifference_poly(n, q)?.eval(y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::qpochhammer;
    use crate::scalar::{rational, ExactRational};

    fn rq(n: i64, d: i64) -> ExactRational {
        rational(n, d)
    }

    #[test]
    fn direct_small_cases() {
        let q = rq(1, 3);
        assert_eq!(rs_direct(0, &q).unwrap(), QPolynomial::one());
        assert_eq!(rs_direct(1, &q).unwrap().coeffs(), &[rq(1, 1), rq(1, 1)]);
        assert_eq!(rs_direct(2, &q).unwrap().coeffs(), &[rq(1, 1), rq(4, 3), rq(1, 1)]);
    }

    #[test]
    fn recurrence_agrees_with_direct() {
        let q = rq(1, 3);
        assert_eq!(rs_recurrence(0, &q), QPolynomial::one());
        assert_eq!(rs_recurrence(2, &q), rs_direct(2, &q).unwrap());
        assert_eq!(rs_recurrence(10, &q), rs_direct(10, &q).unwrap());
    }

    #[test]
    fn evaluation_examples() {
        assert_eq!(rs_eval(7, &0.0, &0.4).unwrap(), 1.0);
        assert!((rs_eval(2, &1.0, &0.5).unwrap() - 3.5).abs() < 1e-15);
        let q = rq(2, 5);
        let sum: ExactRational = (0..=3).map(|k| qbinomial(3, k, &q).unwrap()).sum();
        assert_eq!(rs_eval(3, &rq(1, 1), &q).unwrap(), sum);
    }

    #[test]
    fn raising_examples() {
        let q = rq(1, 2);
        let h0 = rs_direct(0, &q).unwrap();
        let h1 = rs_direct(1, &q).unwrap();
        let h2 = rs_direct(2, &q).unwrap();
        assert_eq!(rs_raise(&h0, &q, Some(0)).unwrap(), h1);
        assert_eq!(rs_raise(&h1, &q, Some(1)).unwrap(), h2);
        assert_eq!(rs_raise(&h1, &q, None).unwrap(), h2);
        assert!(rs_raise(&QPolynomial::zero(), &q, None).unwrap().is_zero());
    }

    #[test]
    fn lowering_and_number_examples() {
        let q = rq(1, 2);
        assert!(rs_lower(&rs_direct(0, &q).unwrap(), &q).unwrap().is_zero());
        assert_eq!(rs_lower(&rs_direct(1, &q).unwrap(), &q).unwrap(), QPolynomial::one());
        assert_eq!(
            rs_lower(&rs_direct(3, &q).unwrap(), &q).unwrap(),
            rs_direct(2, &q).unwrap().scale(&rq(7, 4))
        );
        assert!(rs_number(&QPolynomial::one(), &q).unwrap().is_zero());
        let h2 = rs_direct(2, &q).unwrap();
        assert_eq!(rs_number(&h2, &q).unwrap(), h2.scale(&rq(3, 2)));
        let h1 = rs_direct(1, &q).unwrap();
        assert_eq!(rs_number(&h1, &q).unwrap(), h1);
        assert!(rs_lower(&h1, &rq(1, 1)).is_err());
    }

    #[test]
    fn h_basis_round_trip() {
        let q = rq(2, 5);
        let f = QPolynomial::new(vec![rq(1, 2), rq(-3, 1), rq(0, 1), rq(5, 7)]);
        let coords = h_basis_coordinates(&f, &q);
        assert_eq!(from_h_basis(&coords, &q), f);
    }

    #[test]
    fn generating_function_examples() {
        let policy = SeriesPolicy::default();
        assert_eq!(rs_generating_closed(&0.0, &0.7, &0.5, &policy).unwrap(), 1.0);
        let (a, y, q) = (0.3, 0.7, 0.5);
        let closed = rs_generating_closed(&a, &y, &q, &policy).unwrap();
        let series = rs_generating_series(&a, &y, &q, &policy).unwrap();
        assert!((closed - series.value).abs() / closed.abs() < 1e-12);
        let y0 = rs_generating_closed(&a, &0.0, &q, &policy).unwrap();
        let einv = 1.0 / qpochhammer_inf(&a, &q, &policy).unwrap().value;
        assert!((y0 - einv).abs() < 1e-15);
        assert!(rs_generating_closed(&1.2, &0.1, &q, &policy).is_err());
        assert!(rs_generating_closed(&0.5, &3.0, &q, &policy).is_err());
    }

    #[test]
    fn second_generating_function_examples() {
        let policy = SeriesPolicy::default();
        assert_eq!(rs_generating2_closed(&0.0, &0.6, &0.5, &policy).unwrap(), 1.0);
        let (t, y, q) = (0.4f64, 0.6f64, 0.5f64);
        // 30-term series side built from the direct coefficients
        let series: f64 = (0..30usize)
            .map(|m| {
                let mf = m as f64;
                t.powi(m as i32) * q.powf(mf * (mf - 1.0) / 2.0) * rs_eval(m, &y, &q).unwrap() / qpochhammer(&q, &q, m)
            })
            .sum();
        let closed = rs_generating2_closed(&t, &y, &q, &policy).unwrap();
        assert!((closed - series).abs() / series.abs() < 1e-12, "{closed} vs {series}");
        // y = 0 collapses to the Euler product (-t;q)_inf
        let y0 = rs_generating2_closed(&t, &0.0, &q, &policy).unwrap();
        let euler = qpochhammer_inf(&(-t), &q, &policy).unwrap().value;
        assert!((y0 - euler).abs() < 1e-15);
    }

    #[test]
    fn half_shifted_closed_form_is_not_the_generating_function() {
        // 1phi1(0; -q^{1/2} t; q, t y) (-t q^{1/2}; q)_inf differs from the series
        let policy = SeriesPolicy::default();
        let (t, y, q) = (0.4f64, 0.6f64, 0.5f64);
        let shifted = -q.sqrt() * t;
        let spec = PhiSpec::basic(vec![0.0], vec![shifted], q, t * y);
        let variant = phi_rs(&spec, &policy).unwrap().value * qpochhammer_inf(&shifted, &q, &policy).unwrap().value;
        let series = rs_generating2_series(&t, &y, &q, &policy).unwrap().value;
        assert!((variant - 1.1349195646103651).abs() < 1e-12);
        assert!((variant - series).abs() > 1.0);
    }

    #[test]
    fn qdifference_examples() {
        assert_eq!(rs_qdifference_residual(0, &0.7, &0.4).unwrap(), 0.0);
        let r = rs_qdifference_residual(5, &0.3, &0.6).unwrap();
        let h = rs_eval(5, &0.3, &0.6).unwrap();
        assert!(r.abs() <= 1e-12 * (1.0 + h.abs()));
        let exact = rs_qdifference_residual(8, &rq(2, 3), &rq(1, 2)).unwrap();
        assert_eq!(exact, rq(0, 1));
        assert!(rs_qdifference_poly(8, &rq(1, 2)).unwrap().is_zero());
        assert!(rs_qdifference_residual(3, &0.2, &1.0).is_err());
    }

    #[test]
    fn qdifference_fails_with_shifted_exponent() {
        // the same operator with q^{n+1} in place of q^n does not annihilate H_n
        let q = rq(1, 2);
        let n = 3;
        let h = rs_direct(n, &q).unwrap();
        let d = jackson_derivative(&h, &q).unwrap();
        let dt = jackson_derivative(&q_dilation(&h, &q, Dilation::Inverse).unwrap(), &q).unwrap();
        let wrong = &(&d + &dt.mul_y().scale(&q.powi(n as i64 + 1))) - &h.scale(&qnumber_m(n, &q).unwrap());
        assert!(!wrong.is_zero());
    }
}
