use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::scalar::QField;

/// Polynomial in one formal variable `y`, coefficients indexed by degree.
///
/// Trailing zero coefficients are trimmed on construction, so the zero
/// polynomial has no coefficients and `degree() == None`. For floating
/// backends only exact zeros are trimmed.
#[derive(Clone, PartialEq)]
pub struct QPolynomial<T> {
    coeffs: Vec<T>,
}

impl<T: QField> QPolynomial<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        QPolynomial { coeffs }
    }

    pub fn zero() -> Self {
        QPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        QPolynomial::new(vec![T::one()])
    }

    /// `c * y^k`
    pub fn monomial(k: usize, c: T) -> Self {
        let mut coeffs = vec![T::zero(); k];
        coeffs.push(c);
        QPolynomial::new(coeffs)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// Coefficient of `y^k` (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(T::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Horner evaluation.
    pub fn eval(&self, y: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * y.clone() + c.clone())
    }

    pub fn scale(&self, s: &T) -> Self {
        QPolynomial::new(self.coeffs.iter().map(|c| c.clone() * s.clone()).collect())
    }

    /// Applies `c_m -> f(m, c_m)` to every coefficient.
    pub fn map_indexed(&self, mut f: impl FnMut(usize, &T) -> T) -> Self {
        QPolynomial::new(self.coeffs.iter().enumerate().map(|(m, c)| f(m, c)).collect())
    }

    /// Multiplication by the variable: `f(y) -> y f(y)`.
    pub fn mul_y(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(T::zero());
        coeffs.extend(self.coeffs.iter().cloned());
        QPolynomial { coeffs }
    }

    /// Largest coefficient-wise difference magnitude.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let n = self.coeffs.len().max(other.coeffs.len());
        (0..n)
            .map(|k| (self.coeff(k) - other.coeff(k)).magnitude())
            .fold(0.0, f64::max)
    }

    /// Largest coefficient magnitude.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.magnitude()).fold(0.0, f64::max)
    }
}

impl<T: QField> Add for &QPolynomial<T> {
    type Output = QPolynomial<T>;

    fn add(self, rhs: Self) -> QPolynomial<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        QPolynomial::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl<T: QField> Sub for &QPolynomial<T> {
    type Output = QPolynomial<T>;

    fn sub(self, rhs: Self) -> QPolynomial<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        QPolynomial::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl<T: QField> Neg for &QPolynomial<T> {
    type Output = QPolynomial<T>;

    fn neg(self) -> QPolynomial<T> {
        QPolynomial::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

impl<T: QField> fmt::Debug for QPolynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "({c:?})")?,
                1 => write!(f, "({c:?})y")?,
                _ => write!(f, "({c:?})y^{k}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rational, ExactRational};

    #[test]
    fn trailing_zeros_are_trimmed() {
        let p = QPolynomial::new(vec![1.0, 2.0, 0.0, 0.0]);
        assert_eq!(p.degree(), Some(1));
        assert!(QPolynomial::<f64>::new(vec![0.0]).is_zero());
    }

    #[test]
    fn horner_matches_direct_sum() {
        let p = QPolynomial::new(vec![rational(1, 1), rational(-1, 2), rational(1, 3)]);
        let y = rational(3, 2);
        let direct: ExactRational = rational(1, 1) - rational(3, 4) + rational(3, 4);
        assert_eq!(p.eval(&y), direct);
    }

    #[test]
    fn mul_y_shifts_degree() {
        let p = QPolynomial::new(vec![1.0, 1.0]).mul_y();
        assert_eq!(p.coeffs(), &[0.0, 1.0, 1.0]);
    }
}
