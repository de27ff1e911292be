//! Basic (`r phi s`) and bibasic hypergeometric series, and the named
//! special functions built on them.

use num_complex::Complex64;

use crate::error::{QError, Result};
use crate::qcore::qpochhammer_inf;
use crate::scalar::{ensure_finite, QField, Scalar};
use crate::series::{sum_finite, sum_series, SeriesEval, SeriesPolicy};

/// Parameters of a basic or bibasic hypergeometric series.
///
/// `upper_q`/`lower_q` are the numerator/denominator parameters in base
/// `base_q`; `upper_p`/`lower_p` are the parameters in the second base
/// `base_p` (bibasic series only).
#[derive(Debug, Clone, PartialEq)]
pub struct PhiSpec<T> {
    pub upper_q: Vec<T>,
    pub lower_q: Vec<T>,
    pub upper_p: Vec<T>,
    pub lower_p: Vec<T>,
    pub base_q: T,
    pub base_p: Option<T>,
    pub argument: T,
}

impl<T: QField> PhiSpec<T> {
    /// Single-base series `r phi s (upper; lower; q, x)`.
    pub fn basic(upper: Vec<T>, lower: Vec<T>, q: T, x: T) -> Self {
        PhiSpec {
            upper_q: upper,
            lower_q: lower,
            upper_p: Vec::new(),
            lower_p: Vec::new(),
            base_q: q,
            base_p: None,
            argument: x,
        }
    }

    /// Two-base series `Phi[a : c ; b : d ; q, p, z]`.
    pub fn bibasic(a: Vec<T>, c: Vec<T>, b: Vec<T>, d: Vec<T>, q: T, p: T, z: T) -> Self {
        PhiSpec {
            upper_q: a,
            lower_q: b,
            upper_p: c,
            lower_p: d,
            base_q: q,
            base_p: Some(p),
            argument: z,
        }
    }
}

const TERMINATION_TOL: f64 = 1e-12;

/// Smallest `N <= limit` such that some parameter equals `base^{-N}`.
fn terminating_index<T: QField>(params: &[T], base: &T, limit: usize) -> Option<usize> {
    let lb = base.magnitude().ln();
    params
        .iter()
        .filter_map(|a| {
            if a.is_zero() {
                return None;
            }
            let guess = if lb.is_finite() && lb != 0.0 {
                (-a.magnitude().ln() / lb).round()
            } else {
                0.0
            };
            if !(guess >= 0.0 && guess <= limit as f64) {
                return None;
            }
            let n = guess as usize;
            let dev = a.clone() * base.powi(n as i64) - T::one();
            let hit = if T::EXACT {
                dev.is_zero()
            } else {
                dev.magnitude() <= TERMINATION_TOL
            };
            hit.then_some(n)
        })
        .min()
}

/// One-step ratio machinery shared by the single- and two-base series.
struct TermRatio<'a, T> {
    spec: &'a PhiSpec<T>,
    base_p: T,
    q_exp: i64,
    p_exp: i64,
    qk: T,
    pk: T,
    term: T,
}

impl<'a, T: QField> TermRatio<'a, T> {
    fn new(spec: &'a PhiSpec<T>, q_exp: i64, p_exp: i64) -> Self {
        TermRatio {
            spec,
            base_p: spec.base_p.clone().unwrap_or_else(T::one),
            q_exp,
            p_exp,
            qk: T::one(),
            pk: T::one(),
            term: T::one(),
        }
    }

    /// Returns term `k`, advancing the running state.
    fn next(&mut self, k: usize) -> Result<T> {
        if k == 0 {
            return Ok(self.term.clone());
        }
        // ratio term_k / term_{k-1}, with qk = q^{k-1}, pk = p^{k-1}
        let one = T::one();
        let mut num = self.spec.argument.clone();
        let mut den = one.clone() - self.qk.clone() * self.spec.base_q.clone();
        if den.is_vanishing() {
            return Err(QError::domain("(q;q)_k vanishes: base is a root of unity"));
        }
        for a in &self.spec.upper_q {
            num = num * (one.clone() - a.clone() * self.qk.clone());
        }
        for c in &self.spec.upper_p {
            num = num * (one.clone() - c.clone() * self.pk.clone());
        }
        for b in &self.spec.lower_q {
            let f = one.clone() - b.clone() * self.qk.clone();
            if f.is_vanishing() {
                return Err(QError::domain(format!(
                    "lower parameter {b:?} hits a pole (b q^{} = 1)",
                    k - 1
                )));
            }
            den = den * f;
        }
        for d in &self.spec.lower_p {
            let f = one.clone() - d.clone() * self.pk.clone();
            if f.is_vanishing() {
                return Err(QError::domain(format!(
                    "lower p-parameter {d:?} hits a pole (d p^{} = 1)",
                    k - 1
                )));
            }
            den = den * f;
        }
        let sign_q = (-self.qk.clone()).powi(self.q_exp);
        let sign_p = (-self.pk.clone()).powi(self.p_exp);
        self.term = self.term.clone() * num / den * sign_q * sign_p;
        self.qk = self.qk.clone() * self.spec.base_q.clone();
        self.pk = self.pk.clone() * self.base_p.clone();
        ensure_finite(self.term.clone(), "hypergeometric term")
    }
}

fn run_series<T: QField>(
    spec: &PhiSpec<T>,
    policy: &SeriesPolicy,
    q_exp: i64,
    p_exp: i64,
    terminate_at: Option<usize>,
) -> Result<SeriesEval<T>> {
    policy.validate()?;
    if spec.argument.is_zero() {
        return Ok(SeriesEval::finite(T::one(), 1, 0.0));
    }
    let mut ratio = TermRatio::new(spec, q_exp, p_exp);
    match terminate_at {
        Some(n) => sum_finite(n + 1, |k| ratio.next(k)),
        None => sum_series(policy, |k| ratio.next(k)),
    }
}

/// Basic hypergeometric series
/// `sum_k prod(a_i;q)_k / ((q;q)_k prod(b_j;q)_k) [(-1)^k q^{k(k-1)/2}]^{1+s-r} x^k`.
///
/// An upper parameter equal to `q^{-N}` (within `1e-12` relative for floats,
/// exactly for rationals) makes the sum finite, ending at `k = N`.
pub fn phi_rs<T: QField>(spec: &PhiSpec<T>, policy: &SeriesPolicy) -> Result<SeriesEval<T>> {
    if !spec.upper_p.is_empty() || !spec.lower_p.is_empty() || spec.base_p.is_some() {
        return Err(QError::domain("phi_rs takes no p-base parameters; use phi_bibasic"));
    }
    let r = spec.upper_q.len() as i64;
    let s = spec.lower_q.len() as i64;
    let stop = terminating_index(&spec.upper_q, &spec.base_q, policy.max_terms.saturating_sub(1));
    run_series(spec, policy, 1 + s - r, 0, stop)
}

/// Bibasic series
/// `sum_l (a;q)_l (c;p)_l / ((q;q)_l (b;q)_l (d;p)_l) [(-1)^l q^{l(l-1)/2}]^{1+m-n} [(-1)^l p^{l(l-1)/2}]^{s-r} z^l`
/// with `n = #a, m = #b, r = #c, s = #d`.
pub fn phi_bibasic<T: QField>(spec: &PhiSpec<T>, policy: &SeriesPolicy) -> Result<SeriesEval<T>> {
    let p = spec
        .base_p
        .as_ref()
        .ok_or_else(|| QError::domain("phi_bibasic requires base_p"))?;
    let n = spec.upper_q.len() as i64;
    let m = spec.lower_q.len() as i64;
    let r = spec.upper_p.len() as i64;
    let s = spec.lower_p.len() as i64;
    let limit = policy.max_terms.saturating_sub(1);
    let stop = [
        terminating_index(&spec.upper_q, &spec.base_q, limit),
        terminating_index(&spec.upper_p, p, limit),
    ]
    .into_iter()
    .flatten()
    .min();
    run_series(spec, policy, 1 + m - n, s - r, stop)
}

/// Sums a series known to terminate at index `n`.
fn phi_terminating<T: QField>(spec: &PhiSpec<T>, n: usize) -> Result<T> {
    let r = spec.upper_q.len() as i64;
    let s = spec.lower_q.len() as i64;
    let policy = SeriesPolicy::default();
    Ok(run_series(spec, &policy, 1 + s - r, 0, Some(n))?.value)
}

/// Little q-Jacobi polynomial `p_n(z; alpha, beta; q) = 2phi1(q^{-n}, q^{n+1} alpha beta; alpha q; q, q z)`.
pub fn little_q_jacobi<T: QField>(n: usize, z: &T, alpha: &T, beta: &T, q: &T) -> Result<T> {
    let ni = n as i64;
    let spec = PhiSpec::basic(
        vec![q.powi(-ni), q.powi(ni + 1) * alpha.clone() * beta.clone()],
        vec![alpha.clone() * q.clone()],
        q.clone(),
        q.clone() * z.clone(),
    );
    phi_terminating(&spec, n)
}

/// Big q-Jacobi polynomial
/// `P_n(z; alpha, beta; q) = 3phi2(q^{-n}, q^{n+1} alpha beta, q alpha z; q alpha, 0; q, q)`.
pub fn big_q_jacobi<T: QField>(n: usize, z: &T, alpha: &T, beta: &T, q: &T) -> Result<T> {
    let ni = n as i64;
    let qa = q.clone() * alpha.clone();
    let spec = PhiSpec::basic(
        vec![
            q.powi(-ni),
            q.powi(ni + 1) * alpha.clone() * beta.clone(),
            qa.clone() * z.clone(),
        ],
        vec![qa, T::zero()],
        q.clone(),
        q.clone(),
    );
    phi_terminating(&spec, n)
}

fn check_unit_interval(q: f64, what: &str) -> Result<()> {
    if !(q > 0.0 && q < 1.0) {
        return Err(QError::domain(format!(
            "q out of domain for {what}: q = {q} must satisfy 0 < q < 1"
        )));
    }
    Ok(())
}

/// Hahn-Exton q-Bessel function
/// `J_n(z;q) = z^n (q^{n+1};q)_inf / (q;q)_inf * 1phi1(0; q^{n+1}; q, q z^2)`, `n >= 0`.
pub fn hahn_exton_bessel(n: usize, z: Scalar, q: f64, policy: &SeriesPolicy) -> Result<SeriesEval> {
    check_unit_interval(q, "Hahn-Exton q-Bessel")?;
    let qc = Complex64::new(q, 0.0);
    let qn1 = Complex64::new(q.powi(n as i32 + 1), 0.0);
    let num = qpochhammer_inf(&qn1, &qc, policy)?;
    let den = qpochhammer_inf(&qc, &qc, policy)?;
    let spec = PhiSpec::basic(vec![Complex64::new(0.0, 0.0)], vec![qn1], qc, qc * z * z);
    let series = phi_rs(&spec, policy)?;
    let prefactor = QField::powi(&z, n as i64) * num.value / den.value;
    Ok(SeriesEval {
        value: ensure_finite(prefactor * series.value, "Hahn-Exton q-Bessel")?,
        terms_used: series.terms_used,
        converged: series.converged && num.converged && den.converged,
        est_error: series.est_error * prefactor.norm(),
    })
}

/// Jackson q-Bessel function of the second kind
/// `J^(2)_nu(x;q) = sum_n q^{n(n+nu)} (-1)^n / ((q;q)_n (q;q)_{n+nu}) (x/2)^{2n+nu}`.
pub fn q_bessel_2(nu: usize, x: Scalar, q: f64, policy: &SeriesPolicy) -> Result<SeriesEval> {
    check_unit_interval(q, "q-Bessel J^(2)")?;
    let half = x / 2.0;
    let mut first = QField::powi(&half, nu as i64);
    for i in 1..=nu {
        first /= q.one_minus_pow(i as i64);
    }
    let h2 = half * half;
    let mut term = first;
    sum_series(policy, |k| {
        if k > 0 {
            let k1 = (k - 1) as i32;
            let nu_i = nu as i32;
            // term_k / term_{k-1} = -q^{2k-1+nu} (x/2)^2 / ((1-q^k)(1-q^{k+nu}))
            term *=
                -q.powi(2 * k1 + 1 + nu_i) * h2 / (q.one_minus_pow(k as i64) * q.one_minus_pow(k as i64 + nu as i64));
        }
        ensure_finite(term, "q-Bessel term")
    })
}

/// q-Laguerre polynomial
/// `L_n^(gamma)(x;q) = (q^{gamma+1};q)_n / (q;q)_n * 1phi1(q^{-n}; q^{gamma+1}; q, -x q^{gamma+n+1})`.
pub fn q_laguerre(n: usize, gamma: f64, x: Scalar, q: f64) -> Result<Scalar> {
    check_unit_interval(q, "q-Laguerre")?;
    let qg1 = q.powf(gamma + 1.0);
    let mut pref = 1.0;
    for i in 0..n {
        let num = 1.0 - qg1 * q.powi(i as i32);
        if num.is_vanishing() {
            return Err(QError::domain(format!(
                "q-Laguerre: q^(gamma+1) hits a pole, gamma = {gamma}"
            )));
        }
        pref *= num / q.one_minus_pow(i as i64 + 1);
    }
    let qc = Complex64::new(q, 0.0);
    let spec = PhiSpec::basic(
        vec![Complex64::new(q.powi(-(n as i32)), 0.0)],
        vec![Complex64::new(qg1, 0.0)],
        qc,
        -x * q.powf(gamma + n as f64 + 1.0),
    );
    Ok(phi_terminating(&spec, n)? * pref)
}
