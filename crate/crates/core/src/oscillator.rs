//! Ladder actions of the q- and (p,q)-oscillators on their bases, checks of
//! the defining relations, and the brute-force matrix-element oracle.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::deformed_exp::ExpFamily;
use crate::error::{QError, Result};
use crate::params::DeformationParams;
use crate::poly::QPolynomial;
use crate::qcore::{jackson_derivative, qnumber_m};
use crate::report::{params_map, VerificationReport};
use crate::rogers_szego::rs_sequence;
use crate::scalar::{QField, Scalar};

/// A finite linear combination of basis vectors. Zero coefficients are never
/// stored.
#[derive(Debug, Clone, PartialEq)]
pub struct StateExpansion<T = Scalar> {
    entries: BTreeMap<usize, T>,
}

impl<T: QField> Default for StateExpansion<T> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<T: QField> StateExpansion<T> {
    pub fn zero() -> Self {
        StateExpansion {
            entries: BTreeMap::new(),
        }
    }

    pub fn basis(n: usize) -> Self {
        let mut s = Self::zero();
        s.add_term(n, T::one());
        s
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (usize, T)>) -> Self {
        let mut s = Self::zero();
        for (n, c) in terms {
            s.add_term(n, c);
        }
        s
    }

    /// Adds `c` to the coefficient of basis `n`, dropping it if it cancels.
    pub fn add_term(&mut self, n: usize, c: T) {
        let updated = match self.entries.remove(&n) {
            Some(old) => old + c,
            None => c,
        };
        if !updated.is_zero() {
            self.entries.insert(n, updated);
        }
    }

    pub fn coeff(&self, n: usize) -> T {
        self.entries.get(&n).cloned().unwrap_or_else(T::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &T)> {
        self.entries.iter().map(|(&n, c)| (n, c))
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn scale(&self, s: &T) -> Self {
        Self::from_terms(self.iter().map(|(n, c)| (n, c.clone() * s.clone())))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (n, c) in other.iter() {
            out.add_term(n, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-T::one()))
    }

    /// Largest coefficient magnitude, 0 for the empty expansion.
    pub fn max_abs(&self) -> f64 {
        self.entries.values().map(|c| c.magnitude()).fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Generator {
    Plus,
    Minus,
    Number,
}

/// Diagonal-shift coefficients of an oscillator representation:
/// `A_+ e_n = raise(n) e_{n+1}` and `A_- e_n = lower(n) e_{n-1}`.
pub trait Ladder<T: QField> {
    fn raise(&self, n: usize) -> T;
    fn lower(&self, n: usize) -> T;
    /// The two defining relations `A_- A_+ - c A_+ A_- = f(N)` as `(name, c)`.
    fn relations(&self) -> Vec<(&'static str, T)>;
    /// `f(n)` of relation `which`.
    fn relation_rhs(&self, which: usize, n: usize) -> T;
}

/// The q-oscillator on `theta_n`: `A_+ theta_n = theta_{n+1}`,
/// `A_- theta_n = [n]_q theta_{n-1}`. Works over any field, exact included.
#[derive(Debug, Clone, PartialEq)]
pub struct QLadder<T> {
    q: T,
}

impl<T: QField> QLadder<T> {
    pub fn new(q: T) -> Result<Self> {
        if q.is_vanishing() || q == T::one() {
            return Err(QError::domain("q-oscillator needs q different from 0 and 1"));
        }
        Ok(QLadder { q })
    }
}

impl<T: QField> Ladder<T> for QLadder<T> {
    fn raise(&self, _n: usize) -> T {
        T::one()
    }

    fn lower(&self, n: usize) -> T {
        qnumber_m(n, &self.q).expect("q = 1 excluded at construction")
    }

    fn relations(&self) -> Vec<(&'static str, T)> {
        vec![("A-A+ - A+A- = q^N", T::one()), ("A-A+ - qA+A- = I", self.q.clone())]
    }

    fn relation_rhs(&self, which: usize, n: usize) -> T {
        match which {
            0 => self.q.powi(n as i64),
            _ => T::one(),
        }
    }
}

/// The (p,q)-oscillator on `zeta_n = z^n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PqLadder {
    p: f64,
    q: f64,
}

impl PqLadder {
    pub fn new(p: f64, q: f64) -> Result<Self> {
        DeformationParams::pq(p, q)?;
        Ok(PqLadder { p, q })
    }
}

impl Ladder<f64> for PqLadder {
    fn raise(&self, n: usize) -> f64 {
        -(self.q / self.p).powf(-((n + 1) as f64) / 2.0)
    }

    fn lower(&self, n: usize) -> f64 {
        let (p, q) = (self.p, self.q);
        let e = n as i32;
        (q / p).powf(1.0 + n as f64 / 2.0) * (p.powi(e) - q.powi(-e)) / (1.0 / p - q)
    }

    fn relations(&self) -> Vec<(&'static str, f64)> {
        vec![("A-A+ - pA+A- = q^-N", self.p), ("A-A+ - q^-1A+A- = p^N", 1.0 / self.q)]
    }

    fn relation_rhs(&self, which: usize, n: usize) -> f64 {
        match which {
            0 => self.q.powi(-(n as i32)),
            _ => self.p.powi(n as i32),
        }
    }
}

/// Apply one generator to a state, by linear extension.
pub fn apply_ladder<T: QField, L: Ladder<T>>(
    ladder: &L,
    gen: Generator,
    state: &StateExpansion<T>,
) -> StateExpansion<T> {
    let mut out = StateExpansion::zero();
    for (n, c) in state.iter() {
        match gen {
            Generator::Plus => out.add_term(n + 1, c.clone() * ladder.raise(n)),
            Generator::Minus => {
                if n > 0 {
                    out.add_term(n - 1, c.clone() * ladder.lower(n));
                }
            }
            Generator::Number => out.add_term(n, c.clone() * T::from_i64(n as i64)),
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OscFamily {
    QOsc,
    PqOsc,
}

/// An oscillator family together with its validated deformation parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OscKind {
    pub family: OscFamily,
    pub params: DeformationParams,
}

impl OscKind {
    pub fn q_osc(q: f64) -> Result<Self> {
        Ok(OscKind {
            family: OscFamily::QOsc,
            params: DeformationParams::q_only(q)?,
        })
    }

    pub fn pq_osc(p: f64, q: f64) -> Result<Self> {
        Ok(OscKind {
            family: OscFamily::PqOsc,
            params: DeformationParams::pq(p, q)?,
        })
    }

    fn coefficient(&self, n: usize, raise: bool) -> f64 {
        let q = self.params.q();
        match self.family {
            OscFamily::QOsc => {
                let l = QLadder { q };
                if raise {
                    l.raise(n)
                } else {
                    l.lower(n)
                }
            }
            OscFamily::PqOsc => {
                let l = PqLadder {
                    p: self.params.p_or_one(),
                    q,
                };
                if raise {
                    l.raise(n)
                } else {
                    l.lower(n)
                }
            }
        }
    }
}

impl Ladder<Scalar> for OscKind {
    fn raise(&self, n: usize) -> Scalar {
        Scalar::new(self.coefficient(n, true), 0.0)
    }

    fn lower(&self, n: usize) -> Scalar {
        Scalar::new(self.coefficient(n, false), 0.0)
    }

    fn relations(&self) -> Vec<(&'static str, Scalar)> {
        let q = self.params.q();
        match self.family {
            OscFamily::QOsc => QLadder { q }
                .relations()
                .into_iter()
                .map(|(s, c)| (s, Scalar::new(c, 0.0)))
                .collect(),
            OscFamily::PqOsc => PqLadder {
                p: self.params.p_or_one(),
                q,
            }
            .relations()
            .into_iter()
            .map(|(s, c)| (s, Scalar::new(c, 0.0)))
            .collect(),
        }
    }

    fn relation_rhs(&self, which: usize, n: usize) -> Scalar {
        let q = self.params.q();
        let v = match self.family {
            OscFamily::QOsc => QLadder { q }.relation_rhs(which, n),
            OscFamily::PqOsc => PqLadder {
                p: self.params.p_or_one(),
                q,
            }
            .relation_rhs(which, n),
        };
        Scalar::new(v, 0.0)
    }
}

pub fn osc_apply(kind: &OscKind, gen: Generator, state: &StateExpansion) -> StateExpansion {
    apply_ladder(kind, gen, state)
}

/// Residual expansions of all four defining relations on basis `n`.
pub fn relation_residuals<T: QField, L: Ladder<T>>(
    ladder: &L,
    n: usize,
) -> Vec<(&'static str, StateExpansion<T>, f64)> {
    let e = StateExpansion::<T>::basis(n);
    let ap = |s: &StateExpansion<T>| apply_ladder(ladder, Generator::Plus, s);
    let am = |s: &StateExpansion<T>| apply_ladder(ladder, Generator::Minus, s);
    let nn = |s: &StateExpansion<T>| apply_ladder(ladder, Generator::Number, s);
    let mp = am(&ap(&e));
    let pm = ap(&am(&e));
    let mut out = Vec::new();
    for (which, (name, c)) in ladder.relations().into_iter().enumerate() {
        let rhs = e.scale(&ladder.relation_rhs(which, n));
        let res = mp.sub(&pm.scale(&c)).sub(&rhs);
        let scale = mp.max_abs().max(rhs.max_abs()).max(1.0);
        out.push((name, res, scale));
    }
    // [N, A_-] = -A_-  and  [N, A_+] = A_+
    let res = nn(&am(&e)).sub(&am(&nn(&e))).add(&am(&e));
    let scale = am(&e).max_abs().max(1.0);
    out.push(("[N,A-] = -A-", res, scale));
    let res = nn(&ap(&e)).sub(&ap(&nn(&e))).sub(&ap(&e));
    let scale = ap(&e).max_abs().max(1.0);
    out.push(("[N,A+] = A+", res, scale));
    out
}

/// Checks the defining relations on every basis vector `0..=max_index`.
/// Exact fields must give identically empty residuals; floating fields are
/// held to `1e-13` relative to the size of the terms.
pub fn verify_relations_with<T: QField, L: Ladder<T>>(ladder: &L, max_index: usize, label: &str) -> VerificationReport {
    let mut worst = 0.0f64;
    let mut nonzero = false;
    for n in 0..=max_index {
        for (_, res, scale) in relation_residuals(ladder, n) {
            nonzero |= !res.is_empty();
            worst = worst.max(res.max_abs() / scale);
        }
    }
    let (tolerance, err) = if T::EXACT {
        (0.0, if nonzero { worst.max(f64::MIN_POSITIVE) } else { 0.0 })
    } else {
        (1e-13, worst)
    };
    VerificationReport::from_error(
        "oscillator algebra relations",
        params_map([("kind", label.to_string()), ("max_index", max_index.to_string())]),
        err,
        tolerance,
    )
}

pub fn verify_algebra_relations(kind: &OscKind, max_index: usize) -> Result<VerificationReport> {
    if max_index < 1 {
        return Err(QError::domain("max_index must be at least 1"));
    }
    let label = format!("{:?}", kind.family);
    Ok(verify_relations_with(kind, max_index, &label))
}

/// `A_- f = D_q f` and `A_+ f = (1+y) f - (1-q) y D_q f` on polynomials.
pub fn jackson_lower<T: QField>(f: &QPolynomial<T>, q: &T) -> Result<QPolynomial<T>> {
    jackson_derivative(f, q)
}

pub fn jackson_raise<T: QField>(f: &QPolynomial<T>, q: &T) -> Result<QPolynomial<T>> {
    let d = jackson_derivative(f, q)?;
    Ok(&(f + &f.mul_y()) - &d.mul_y().scale(&(T::one() - q.clone())))
}

/// Confirms `A_+ H_n = H_{n+1}` and `A_- H_n = [n]_q H_{n-1}` under the
/// Jackson realization for all `n <= max_degree`.
pub fn verify_jackson_realization<T: QField>(q: &T, max_degree: usize) -> Result<VerificationReport> {
    if max_degree < 1 {
        return Err(QError::domain("max_degree must be at least 1"));
    }
    let h = rs_sequence(max_degree + 1, q);
    let mut worst = 0.0f64;
    let mut nonzero = false;
    for n in 0..=max_degree {
        let up = &jackson_raise(&h[n], q)? - &h[n + 1];
        let expected_down = if n == 0 {
            QPolynomial::zero()
        } else {
            h[n - 1].scale(&qnumber_m(n, q)?)
        };
        let down = &jackson_lower(&h[n], q)? - &expected_down;
        for diff in [up, down] {
            nonzero |= !diff.is_zero();
            worst = worst.max(diff.max_abs() / h[n].max_abs().max(1.0));
        }
    }
    let (tolerance, err) = if T::EXACT {
        (0.0, if nonzero { worst.max(f64::MIN_POSITIVE) } else { 0.0 })
    } else {
        (1e-13, worst)
    };
    Ok(VerificationReport::from_error(
        "Jackson realization of the q-oscillator",
        params_map([("q", q.describe()), ("max_degree", max_degree.to_string())]),
        err,
        tolerance,
    ))
}

/// Scalings and exponential families entering `E(c_+ A_+) E(c_- A_-)`.
struct OracleSetup {
    c_plus: Scalar,
    c_minus: Scalar,
    raise_family: ExpFamily,
    lower_family: ExpFamily,
}

fn oracle_setup(kind: &OscKind, alpha: Scalar, beta: Scalar, mu: f64, nu: f64) -> Result<OracleSetup> {
    let q = kind.params.q();
    match kind.family {
        OscFamily::QOsc => Ok(OracleSetup {
            c_plus: alpha * (1.0 - q),
            c_minus: beta * (1.0 - q),
            raise_family: ExpFamily::q_mu(q, mu)?,
            lower_family: ExpFamily::q_mu(q, nu)?,
        }),
        OscFamily::PqOsc => {
            let p = kind.params.p_or_one();
            let fam = ExpFamily::pq_munu(p, q, mu, nu)?;
            Ok(OracleSetup {
                c_plus: alpha * (1.0 / p - q),
                c_minus: beta * (p / q) * (1.0 / p - q),
                raise_family: fam,
                lower_family: fam,
            })
        }
    }
}

/// `E(c_+ A_+) E(c_- A_-)` applied to a finite state. Lowering first; the
/// lowering exponential truncates after `n` steps on basis `n`, and only the
/// raising orders up to `max_out - n_min` can land on indices `<= max_out`.
pub fn oracle_apply(
    kind: &OscKind,
    state: &StateExpansion,
    alpha: Scalar,
    beta: Scalar,
    mu: f64,
    nu: f64,
    max_out: usize,
) -> Result<StateExpansion> {
    let setup = oracle_setup(kind, alpha, beta, mu, nu)?;
    let mut lowered = StateExpansion::zero();
    let mut current = state.clone();
    let mut power = Scalar::new(1.0, 0.0);
    let mut j = 0usize;
    while !current.is_empty() {
        let w = power * setup.lower_family.coefficient(j);
        lowered = lowered.add(&current.scale(&w));
        current = osc_apply(kind, Generator::Minus, &current);
        power *= setup.c_minus;
        j += 1;
    }
    let mut out = StateExpansion::zero();
    let mut current = lowered;
    let mut power = Scalar::new(1.0, 0.0);
    let mut i = 0usize;
    while current.iter().any(|(n, _)| n <= max_out) {
        let w = power * setup.raise_family.coefficient(i);
        for (n, c) in current.iter() {
            if n <= max_out {
                out.add_term(n, *c * w);
            }
        }
        current = osc_apply(kind, Generator::Plus, &current);
        power *= setup.c_plus;
        i += 1;
    }
    Ok(out)
}

/// Coefficient of basis `m` in `E(c_+ A_+) E(c_- A_-)` applied to basis `n`,
/// as the explicit single sum over the lowering depth `j = 0..=n` with the
/// raising order fixed at `m - n + j`.
pub fn oracle_matrix_element(
    kind: &OscKind,
    m: usize,
    n: usize,
    alpha: Scalar,
    beta: Scalar,
    mu: f64,
    nu: f64,
) -> Result<Scalar> {
    let setup = oracle_setup(kind, alpha, beta, mu, nu)?;
    let mut total = Scalar::zero();
    for j in 0..=n {
        if m + j < n {
            continue;
        }
        let i = m + j - n;
        let mut c = setup.c_minus.powu(j as u32) * setup.lower_family.coefficient(j);
        let mut s = n;
        for _ in 0..j {
            c *= kind.lower(s);
            s -= 1;
        }
        c *= setup.c_plus.powu(i as u32) * setup.raise_family.coefficient(i);
        for _ in 0..i {
            c *= kind.raise(s);
            s += 1;
        }
        total += c;
    }
    Ok(total)
}
