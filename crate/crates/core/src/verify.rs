//! Identity suites run by the command-line `verify` command.
//!
//! Random parameters come from a ChaCha generator seeded per suite, and all
//! draws are made before any evaluation, so report order and content depend
//! only on the options, never on the thread schedule.

use std::collections::BTreeMap;
use std::f64::consts::SQRT_2;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::deformed_exp::classical_limit_report;
use crate::error::{QError, Result};
use crate::fourier_gauss::{fg_verify_with, Direction, FGSpec};
use crate::matrix_elements::{pq_kernel_l, q_kernel_q, u_pq, u_pq_branch, u_q, u_q_branch, Branch};
use crate::oscillator::{
    oracle_matrix_element, verify_algebra_relations, verify_jackson_realization, verify_relations_with, OscKind,
    QLadder,
};
use crate::par::{self, Execution};
use crate::params::DeformationParams;
use crate::poly::QPolynomial;
use crate::qcore::{q_dilation, qnumber_m, qpochhammer, Dilation};
use crate::qseries::{little_q_jacobi, phi_bibasic, phi_rs, q_laguerre, PhiSpec};
use crate::report::{params_map, VerificationReport};
use crate::rogers_szego::{
    degree_operator, number_operator, rs_direct, rs_generating2_closed, rs_generating2_series, rs_generating_closed,
    rs_generating_series, rs_lower, rs_number, rs_qdifference_poly, rs_raise, rs_recurrence, rs_sequence,
};
use crate::scalar::{rational, DoubleDouble, ExactRational, QField, Scalar};
use crate::series::SeriesPolicy;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Suite {
    Generating,
    Recurrence,
    Commutators,
    Qdifference,
    MatrixQ,
    MatrixPq,
    Reductions,
    FourierGauss,
    Limits,
    AlgebraRelations,
}

impl Suite {
    pub const ALL: [Suite; 10] = [
        Suite::Generating,
        Suite::Recurrence,
        Suite::Commutators,
        Suite::Qdifference,
        Suite::MatrixQ,
        Suite::MatrixPq,
        Suite::Reductions,
        Suite::FourierGauss,
        Suite::Limits,
        Suite::AlgebraRelations,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Generating => "generating",
            Suite::Recurrence => "recurrence",
            Suite::Commutators => "commutators",
            Suite::Qdifference => "qdifference",
            Suite::MatrixQ => "matrix-q",
            Suite::MatrixPq => "matrix-pq",
            Suite::Reductions => "reductions",
            Suite::FourierGauss => "fourier-gauss",
            Suite::Limits => "limits",
            Suite::AlgebraRelations => "algebra-relations",
        }
    }

    /// Tolerance used when the caller gives none.
    pub fn default_tolerance(&self) -> f64 {
        match self {
            Suite::MatrixQ | Suite::MatrixPq => 1e-9,
            Suite::FourierGauss => 1e-7,
            Suite::AlgebraRelations => 1e-13,
            Suite::Limits => 0.0,
            _ => 1e-12,
        }
    }

    fn default_max_n(&self) -> usize {
        match self {
            Suite::Recurrence => 20,
            Suite::Commutators => 15,
            Suite::MatrixQ => 12,
            _ => 10,
        }
    }

    /// Per-suite seed offset, so suites draw independent streams.
    fn stream(&self) -> u64 {
        Suite::ALL.iter().position(|s| s == self).unwrap_or(0) as u64
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = QError;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .iter()
            .copied()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| QError::domain(format!("unknown suite '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuiteOptions {
    pub seed: u64,
    /// overrides the suite's default tolerance
    pub tol: Option<f64>,
    /// overrides the suite's default index range
    pub max_n: Option<usize>,
    /// structural suites run on rationals with q in {1/2, 1/3, 2/5}
    pub exact: bool,
    pub execution: Execution,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            seed: 42,
            tol: None,
            max_n: None,
            exact: false,
            execution: Execution::default(),
        }
    }
}

struct Ctx {
    rng: ChaCha8Rng,
    tol: f64,
    max_n: usize,
    exact: bool,
    mode: Execution,
}

impl Ctx {
    fn new(suite: Suite, opts: &SuiteOptions) -> Self {
        Ctx {
            rng: ChaCha8Rng::seed_from_u64(opts.seed.wrapping_mul(0x9E37_79B9).wrapping_add(suite.stream())),
            tol: opts.tol.unwrap_or_else(|| suite.default_tolerance()),
            max_n: opts.max_n.unwrap_or_else(|| suite.default_max_n()),
            exact: opts.exact,
            mode: opts.execution,
        }
    }

    fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.gen_range(lo..hi)
    }
}

/// Runs one suite and returns its reports in definition order.
pub fn run_suite(suite: Suite, opts: &SuiteOptions) -> Result<Vec<VerificationReport>> {
    if let Some(tol) = opts.tol {
        if !(tol >= 0.0) {
            return Err(QError::domain(format!("tolerance must be nonnegative, got {tol}")));
        }
    }
    let mut ctx = Ctx::new(suite, opts);
    match suite {
        Suite::Generating => generating(&mut ctx),
        Suite::Recurrence => structural(&mut ctx, recurrence_checks::<ExactRational>, recurrence_checks::<f64>),
        Suite::Commutators => structural(&mut ctx, commutator_checks::<ExactRational>, commutator_checks::<f64>),
        Suite::Qdifference => structural(&mut ctx, qdifference_checks::<ExactRational>, qdifference_checks::<f64>),
        Suite::MatrixQ => matrix_q(&mut ctx),
        Suite::MatrixPq => matrix_pq(&mut ctx),
        Suite::Reductions => reductions(&mut ctx),
        Suite::FourierGauss => fourier_gauss(&mut ctx),
        Suite::Limits => limits(&mut ctx),
        Suite::AlgebraRelations => algebra_relations(&mut ctx),
    }
}

fn fmt_f(v: f64) -> String {
    format!("{v:?}")
}

fn fmt_q<T: QField>(q: &T) -> String {
    q.describe()
}

fn exact_qs() -> Vec<ExactRational> {
    vec![rational(1, 2), rational(1, 3), rational(2, 5)]
}

type Check<T> = fn(&T, usize, f64) -> Result<Vec<VerificationReport>>;

fn structural(ctx: &mut Ctx, exact: Check<ExactRational>, float: Check<f64>) -> Result<Vec<VerificationReport>> {
    let mut out = Vec::new();
    if ctx.exact {
        for q in exact_qs() {
            out.extend(exact(&q, ctx.max_n, ctx.tol)?);
        }
    } else {
        let qs: Vec<f64> = (0..3).map(|_| ctx.uniform(0.2, 0.9)).collect();
        for q in qs {
            out.extend(float(&q, ctx.max_n, ctx.tol)?);
        }
    }
    Ok(out)
}

/// Residual report for a polynomial difference: exact fields must give the
/// zero polynomial, floating fields are judged relative to `scale`.
fn poly_report<T: QField>(
    name: &str,
    params: BTreeMap<String, String>,
    diffs: &[(QPolynomial<T>, f64)],
    tol: f64,
) -> VerificationReport {
    let mut worst = 0.0f64;
    let mut nonzero = false;
    for (d, scale) in diffs {
        nonzero |= !d.is_zero();
        worst = worst.max(d.max_abs() / scale.max(f64::MIN_POSITIVE));
    }
    let err = if T::EXACT && nonzero {
        worst.max(f64::MIN_POSITIVE)
    } else {
        worst
    };
    VerificationReport::from_error(name, params, err, tol)
}

fn recurrence_checks<T: QField>(q: &T, max_n: usize, tol: f64) -> Result<Vec<VerificationReport>> {
    let params = || params_map([("q", fmt_q(q)), ("max_n", max_n.to_string())]);
    let mut direct_vs_rec = Vec::new();
    for n in 0..=max_n {
        let d = rs_direct(n, q)?;
        let r = rs_recurrence(n, q);
        let scale = d.max_abs();
        direct_vs_rec.push((&d - &r, scale));
    }
    let h = rs_sequence(max_n + 1, q);
    let mut creation = Vec::new();
    let mut three_term = Vec::new();
    for n in 0..=max_n {
        let step = q_dilation(&h[n], q, Dilation::Inverse)?
            .mul_y()
            .scale(&q.powi(n as i64));
        creation.push((&(&h[n] + &step) - &h[n + 1], h[n + 1].max_abs()));
        if n >= 1 {
            let one_plus_y = &h[n] + &h[n].mul_y();
            let tail = h[n - 1].mul_y().scale(&q.one_minus_pow(n as i64));
            three_term.push((&(&h[n + 1] - &one_plus_y) + &tail, h[n + 1].max_abs()));
        }
    }
    Ok(vec![
        poly_report("H_n direct sum equals recurrence", params(), &direct_vs_rec, tol),
        poly_report("creation step H_{n+1} = H_n + y q^n T^-1 H_n", params(), &creation, tol),
        poly_report("three-term recurrence", params(), &three_term, tol),
    ])
}

fn commutator_checks<T: QField>(q: &T, max_n: usize, tol: f64) -> Result<Vec<VerificationReport>> {
    let params = || params_map([("q", fmt_q(q)), ("max_n", max_n.to_string())]);
    let h = rs_sequence(max_n + 1, q);
    let (mut c1, mut c2, mut c3, mut c3h, mut c4) = (Vec::new(), Vec::new(), Vec::new(), Vec::new(), Vec::new());
    for (n, hn) in h.iter().enumerate().take(max_n + 1) {
        let qn = q.powi(n as i64);
        let sp = rs_raise(hn, q, None)?;
        let sm = rs_lower(hn, q)?;
        let scale = hn.max_abs().max(sp.max_abs());
        // (i) [S-, S+] = q^N
        let lhs = &rs_lower(&sp, q)? - &rs_raise(&sm, q, None)?;
        c1.push((&lhs - &hn.scale(&qn), scale));
        // (ii) [N_q, S+] = S+ q^N
        let lhs = &rs_number(&sp, q)? - &rs_raise(&rs_number(hn, q)?, q, None)?;
        c2.push((&lhs - &sp.scale(&qn), scale));
        // (iii) [N, S-] = -S-, with N the degree operator and with N the H-index
        let lhs = &degree_operator(&sm) - &rs_lower(&degree_operator(hn), q)?;
        c3.push((&lhs + &sm, scale));
        let lhs = &number_operator(&sm, q) - &rs_lower(&number_operator(hn, q), q)?;
        c3h.push((&lhs + &sm, scale));
        // (iv) [N_q, S-] = -q^N S-
        let lhs = &rs_number(&sm, q)? - &rs_lower(&rs_number(hn, q)?, q)?;
        let rhs = if n == 0 {
            QPolynomial::zero()
        } else {
            sm.scale(&q.powi(n as i64 - 1))
        };
        c4.push((&lhs + &rhs, scale));
    }
    Ok(vec![
        poly_report("[S-, S+] = q^N on H_n", params(), &c1, tol),
        poly_report("[N_q, S+] = S+ q^N on H_n", params(), &c2, tol),
        poly_report("[N, S-] = -S- on H_n (degree operator)", params(), &c3, tol),
        poly_report("[N, S-] = -S- on H_n (H-index operator)", params(), &c3h, tol),
        poly_report("[N_q, S-] = -q^N S- on H_n", params(), &c4, tol),
    ])
}

fn qdifference_checks<T: QField>(q: &T, max_n: usize, tol: f64) -> Result<Vec<VerificationReport>> {
    let mut diffs = Vec::new();
    for n in 0..=max_n {
        let scale = rs_direct(n, q)?.max_abs() * qnumber_m(n, q)?.magnitude().max(1.0);
        diffs.push((rs_qdifference_poly(n, q)?, scale));
    }
    Ok(vec![poly_report(
        "q-difference equation (D + y q^n D T^-1 - [n]) H_n = 0",
        params_map([("q", fmt_q(q)), ("max_n", max_n.to_string())]),
        &diffs,
        tol,
    )])
}

fn c(x: f64) -> Scalar {
    Scalar::new(x, 0.0)
}

fn evaluate<I: Sync, O: Send>(ctx: &Ctx, items: &[I], f: impl Fn(&I) -> O + Sync + Send) -> Vec<O> {
    par::map(ctx.mode, items, f)
}

fn guard(
    name: &str,
    params: BTreeMap<String, String>,
    tol: f64,
    f: impl FnOnce() -> Result<(Scalar, Scalar)>,
) -> VerificationReport {
    match f() {
        Ok((lhs, rhs)) => VerificationReport::new(name, params, lhs, rhs, tol),
        Err(e) => VerificationReport::failed(name, params, e.to_string()),
    }
}

fn generating(ctx: &mut Ctx) -> Result<Vec<VerificationReport>> {
    // truncate at double-double resolution, see below
    let policy = SeriesPolicy::default().with_rel_tol(1e-26);
    let mut first = Vec::new();
    for _ in 0..50 {
        let q = ctx.uniform(0.2, 0.9);
        let alpha = ctx.uniform(-0.7, 0.7);
        let ymax = (0.7 / alpha.abs()).min(2.0);
        let y = ctx.uniform(-ymax, ymax);
        first.push((alpha, y, q));
    }
    let mut second = Vec::new();
    for _ in 0..50 {
        let q = ctx.uniform(0.2, 0.9);
        second.push((ctx.uniform(-0.7, 0.7), ctx.uniform(-2.0, 2.0), q));
    }
    // Both series alternate for negative alpha or t, and near q = 1 their
    // terms exceed the sum by up to thirteen orders of magnitude, so both
    // sides are evaluated in double-double arithmetic.
    let tol = ctx.tol;
    let dd = |v: f64| DoubleDouble::from(v);
    let to_scalar = |v: DoubleDouble| c(v.to_f64());
    let mut out = evaluate(ctx, &first, |&(alpha, y, q)| {
        let params = params_map([("alpha", fmt_f(alpha)), ("y", fmt_f(y)), ("q", fmt_f(q))]);
        let (alpha, y, q) = (dd(alpha), dd(y), dd(q));
        guard(
            "sum alpha^m H_m/(q;q)_m = 1/((alpha;q)(alpha y;q))",
            params,
            tol,
            || {
                Ok((
                    to_scalar(rs_generating_series(&alpha, &y, &q, &policy)?.value),
                    to_scalar(rs_generating_closed(&alpha, &y, &q, &policy)?),
                ))
            },
        )
    });
    out.extend(evaluate(ctx, &second, |&(t, y, q)| {
        let params = params_map([("t", fmt_f(t)), ("y", fmt_f(y)), ("q", fmt_f(q))]);
        let (t, y, q) = (dd(t), dd(y), dd(q));
        guard(
            "sum t^m q^{m(m-1)/2} H_m/(q;q)_m = (-t;q) 1phi1(0;-t;q,-ty)",
            params,
            tol,
            || {
                Ok((
                    to_scalar(rs_generating2_series(&t, &y, &q, &policy)?.value),
                    to_scalar(rs_generating2_closed(&t, &y, &q, &policy)?),
                ))
            },
        )
    }));
    Ok(out)
}

/// Index pair with the largest relative error over a grid, as a report.
fn worst_over_grid(
    name: &str,
    params: BTreeMap<String, String>,
    tol: f64,
    pairs: impl Iterator<Item = Result<(usize, usize, Scalar, Scalar)>>,
) -> VerificationReport {
    let mut worst: Option<(usize, usize, Scalar, Scalar, f64)> = None;
    for item in pairs {
        match item {
            Ok((m, n, a, b)) => {
                let e = crate::report::relative_error(a, b);
                if worst.as_ref().is_none_or(|w| !(e <= w.4)) {
                    worst = Some((m, n, a, b, e));
                }
            }
            Err(e) => return VerificationReport::failed(name, params, e.to_string()),
        }
    }
    let mut params = params;
    match worst {
        Some((m, n, a, b, _)) => {
            params.insert("worst_m".into(), m.to_string());
            params.insert("worst_n".into(), n.to_string());
            VerificationReport::new(name, params, a, b, tol)
        }
        None => VerificationReport::new(name, params, c(0.0), c(0.0), tol),
    }
}

struct MatrixDraw {
    alpha: f64,
    beta: f64,
    mu: f64,
    nu: f64,
    p: f64,
    q: f64,
}

impl MatrixDraw {
    fn params(&self, pq: bool) -> BTreeMap<String, String> {
        let mut m = params_map([
            ("alpha", fmt_f(self.alpha)),
            ("beta", fmt_f(self.beta)),
            ("mu", fmt_f(self.mu)),
            ("nu", fmt_f(self.nu)),
            ("q", fmt_f(self.q)),
        ]);
        if pq {
            m.insert("p".into(), fmt_f(self.p));
        }
        m
    }
}

fn matrix_q(ctx: &mut Ctx) -> Result<Vec<VerificationReport>> {
    let draws: Vec<MatrixDraw> = (0..20)
        .map(|_| MatrixDraw {
            alpha: ctx.uniform(-0.5, 0.5),
            beta: ctx.uniform(-0.5, 0.5),
            mu: ctx.uniform(0.0, 1.0),
            nu: ctx.uniform(0.0, 1.0),
            p: 1.0,
            q: ctx.uniform(0.2, 0.9),
        })
        .collect();
    let (tol, max_n) = (ctx.tol, ctx.max_n);
    let branch_tol = ctx.tol.min(1e-13);
    let reports = evaluate(ctx, &draws, |d| {
        let kind = match OscKind::q_osc(d.q) {
            Ok(k) => k,
            Err(e) => {
                return vec![VerificationReport::failed(
                    "q matrix elements",
                    d.params(false),
                    e.to_string(),
                )]
            }
        };
        let (a, b) = (c(d.alpha), c(d.beta));
        let grid = (0..=max_n).flat_map(|m| (0..=max_n).map(move |n| (m, n)));
        let oracle = worst_over_grid(
            "q matrix element closed form equals operator oracle",
            d.params(false),
            tol,
            grid.map(|(m, n)| {
                let o = oracle_matrix_element(&kind, m, n, a, b, d.mu, d.nu)?;
                Ok((m, n, o, u_q(m, n, a, b, d.mu, d.nu, d.q)?.value))
            }),
        );
        let diag = worst_over_grid(
            "q matrix element branches agree at m = n",
            d.params(false),
            branch_tol,
            (0..=max_n).map(|n| {
                let lo = u_q_branch(n, n, a, b, d.mu, d.nu, d.q, Branch::LoweringDominant)?.value;
                Ok((
                    n,
                    n,
                    lo,
                    u_q_branch(n, n, a, b, d.mu, d.nu, d.q, Branch::RaisingDominant)?.value,
                ))
            }),
        );
        vec![oracle, diag]
    });
    Ok(reports.into_iter().flatten().collect())
}

fn matrix_pq(ctx: &mut Ctx) -> Result<Vec<VerificationReport>> {
    let mut draws = Vec::new();
    while draws.len() < 20 {
        let d = MatrixDraw {
            alpha: ctx.uniform(-0.5, 0.5),
            beta: ctx.uniform(-0.5, 0.5),
            mu: ctx.uniform(0.0, 1.0),
            nu: ctx.uniform(0.0, 1.0),
            p: ctx.uniform(0.5, 0.99),
            q: ctx.uniform(0.2, 0.9),
        };
        if DeformationParams::pq(d.p, d.q)
            .and_then(|x| x.with_exponents(d.mu, d.nu))
            .is_ok()
        {
            draws.push(d);
        }
    }
    let (tol, max_n) = (ctx.tol, ctx.max_n);
    let branch_tol = ctx.tol.min(1e-13);
    let reports = evaluate(ctx, &draws, |d| {
        let kind = match OscKind::pq_osc(d.p, d.q) {
            Ok(k) => k,
            Err(e) => {
                return vec![VerificationReport::failed(
                    "(p,q) matrix elements",
                    d.params(true),
                    e.to_string(),
                )]
            }
        };
        let (a, b) = (c(d.alpha), c(d.beta));
        let grid = (0..=max_n).flat_map(|m| (0..=max_n).map(move |n| (m, n)));
        let oracle = worst_over_grid(
            "(p,q) matrix element closed form equals operator oracle",
            d.params(true),
            tol,
            grid.map(|(m, n)| {
                let o = oracle_matrix_element(&kind, m, n, a, b, d.mu, d.nu)?;
                Ok((m, n, o, u_pq(m, n, a, b, d.mu, d.nu, d.p, d.q)?.value))
            }),
        );
        let diag = worst_over_grid(
            "(p,q) matrix element branches agree at m = n",
            d.params(true),
            branch_tol,
            (0..=max_n).map(|n| {
                let lo = u_pq_branch(n, n, a, b, d.mu, d.nu, d.p, d.q, Branch::LoweringDominant)?.value;
                Ok((
                    n,
                    n,
                    lo,
                    u_pq_branch(n, n, a, b, d.mu, d.nu, d.p, d.q, Branch::RaisingDominant)?.value,
                ))
            }),
        );
        vec![oracle, diag]
    });
    Ok(reports.into_iter().flatten().collect())
}

/// `Q^{(0,0)}_n(x; q^gamma|q) = 3phi1(q^{-n}, 0, 0; q^{gamma+1}; q, -x q^n)`.
pub fn q_kernel_00_reduction(n: usize, x: f64, gamma: f64, q: f64) -> Result<f64> {
    let spec = PhiSpec::basic(
        vec![q.powi(-(n as i32)), 0.0, 0.0],
        vec![q.powf(gamma + 1.0)],
        q,
        -x * q.powi(n as i32),
    );
    Ok(phi_rs(&spec, &SeriesPolicy::default())?.value)
}

/// `Q^{(0,1/2)}_n(x; q^gamma|q) = p_n(x q^{gamma+n-1/2}; q^gamma, 0 | q)`.
pub fn q_kernel_0h_reduction(n: usize, x: f64, gamma: f64, q: f64) -> Result<f64> {
    little_q_jacobi(n, &(x * q.powf(gamma + n as f64 - 0.5)), &q.powf(gamma), &0.0, &q)
}

/// `Q^{(1/2,1/2)}_n(x; q^gamma|q) = (q;q)_n / (q^{gamma+1};q)_n L_n^{(gamma)}(x; q)`.
pub fn q_kernel_hh_reduction(n: usize, x: f64, gamma: f64, q: f64) -> Result<f64> {
    let qg1 = q.powf(gamma + 1.0);
    let ratio = qpochhammer(&q, &q, n) / qpochhammer(&qg1, &q, n);
    Ok(ratio * q_laguerre(n, gamma, c(x), q)?.re)
}

/// `L^{(gamma;0,0)}_n(x;p,q) = Phi([(pq)^{-n}, 0], [], [(pq)^{gamma+1}], [0]; pq, p; -x (1-pq) p^{gamma+n+1})`.
pub fn pq_kernel_00_reduction(n: usize, x: f64, gamma: usize, p: f64, q: f64) -> Result<f64> {
    let b = p * q;
    let spec = PhiSpec::bibasic(
        vec![b.powi(-(n as i32)), 0.0],
        vec![],
        vec![b.powi(gamma as i32 + 1)],
        vec![0.0],
        b,
        p,
        -x * (1.0 - b) * p.powi((gamma + n + 1) as i32),
    );
    Ok(phi_bibasic(&spec, &SeriesPolicy::default())?.value)
}

/// `L^{(gamma;1/4,1/4)}_n(x;p,q) = Phi([(pq)^{-n}], [0], [(pq)^{gamma+1}], []; pq, p;
/// x (1-pq) (q/p)^{(gamma+1)/2} p^{gamma+n+1})`.
pub fn pq_kernel_qq_reduction(n: usize, x: f64, gamma: usize, p: f64, q: f64) -> Result<f64> {
    let b = p * q;
    let spec = PhiSpec::bibasic(
        vec![b.powi(-(n as i32))],
        vec![0.0],
        vec![b.powi(gamma as i32 + 1)],
        vec![],
        b,
        p,
        x * (1.0 - b) * (q / p).powf((gamma as f64 + 1.0) / 2.0) * p.powi((gamma + n + 1) as i32),
    );
    Ok(phi_bibasic(&spec, &SeriesPolicy::default())?.value)
}

#[derive(Clone, Copy)]
enum Reduction {
    Q00,
    Q0h,
    Qhh,
    L00,
    Lqq,
}

fn reductions(ctx: &mut Ctx) -> Result<Vec<VerificationReport>> {
    let max_n = ctx.max_n;
    let mut items = Vec::new();
    for red in [
        Reduction::Q00,
        Reduction::Q0h,
        Reduction::Qhh,
        Reduction::L00,
        Reduction::Lqq,
    ] {
        for _ in 0..20 {
            let n = ctx.rng.gen_range(0..=max_n);
            let gamma = ctx.rng.gen_range(0..=max_n);
            let x = ctx.uniform(-1.0, 1.0);
            let q = ctx.uniform(0.2, 0.9);
            let p = ctx.uniform(0.5, 0.99);
            items.push((red, n, gamma, x, p, q));
        }
    }
    let tol = ctx.tol;
    Ok(evaluate(ctx, &items, |&(red, n, gamma, x, p, q)| {
        let g = gamma as f64;
        let mut params = params_map([
            ("n", n.to_string()),
            ("gamma", gamma.to_string()),
            ("x", fmt_f(x)),
            ("q", fmt_f(q)),
        ]);
        let (name, result) = match red {
            Reduction::Q00 => (
                "Q^(0,0) equals 3phi1",
                (|| {
                    Ok((
                        q_kernel_q(n, c(x), g, 0.0, 0.0, q)?,
                        c(q_kernel_00_reduction(n, x, g, q)?),
                    ))
                })(),
            ),
            Reduction::Q0h => (
                "Q^(0,1/2) equals little q-Jacobi",
                (|| {
                    Ok((
                        q_kernel_q(n, c(x), g, 0.0, 0.5, q)?,
                        c(q_kernel_0h_reduction(n, x, g, q)?),
                    ))
                })(),
            ),
            Reduction::Qhh => (
                "Q^(1/2,1/2) equals scaled q-Laguerre",
                (|| {
                    Ok((
                        q_kernel_q(n, c(x), g, 0.5, 0.5, q)?,
                        c(q_kernel_hh_reduction(n, x, g, q)?),
                    ))
                })(),
            ),
            Reduction::L00 => {
                params.insert("p".into(), fmt_f(p));
                (
                    "L^(gamma;0,0) equals bibasic Phi",
                    (|| {
                        Ok((
                            pq_kernel_l(n, c(x), gamma, 0.0, 0.0, p, q)?,
                            c(pq_kernel_00_reduction(n, x, gamma, p, q)?),
                        ))
                    })(),
                )
            }
            Reduction::Lqq => {
                params.insert("p".into(), fmt_f(p));
                (
                    "L^(gamma;1/4,1/4) equals bibasic Phi",
                    (|| {
                        Ok((
                            pq_kernel_l(n, c(x), gamma, 0.25, 0.25, p, q)?,
                            c(pq_kernel_qq_reduction(n, x, gamma, p, q)?),
                        ))
                    })(),
                )
            }
        };
        guard(name, params, tol, || result)
    }))
}

/// The acceptance grid of Fourier-Gauss cases: `(direction, zeta, rho)`.
pub fn fourier_gauss_cases() -> Vec<(Direction, f64, f64)> {
    vec![
        (Direction::Forward, 0.0, 1.0),
        (Direction::Forward, 0.5, 1.0),
        (Direction::Inverse, 0.5, 1.0),
        (Direction::Inverse, 1.0, 1.0),
        (Direction::Unified, 0.0, 1.0),
        (Direction::Unified, 0.0, SQRT_2),
        (Direction::Unified, 0.0, 2.0),
    ]
}

fn fourier_gauss(ctx: &mut Ctx) -> Result<Vec<VerificationReport>> {
    let mut specs = Vec::new();
    for (direction, zeta, rho) in fourier_gauss_cases() {
        for p in [0.85, 0.9, 0.95] {
            for k in [0.2, 0.3] {
                for x in [0.0, 0.5, -0.5, 1.0, -1.0] {
                    let t = ctx.uniform(-0.3, 0.3);
                    let spec = FGSpec::new(p, k, zeta, c(t), x)
                        .with_rho(rho)
                        .with_target_tol(ctx.tol.max(1e-12));
                    specs.push((direction, spec));
                }
            }
        }
    }
    let tol = ctx.tol;
    let mode = ctx.mode;
    // node evaluations already run in parallel inside each spec
    Ok(specs
        .iter()
        .map(|(direction, spec)| {
            let params = params_map([
                ("direction", format!("{direction:?}")),
                ("p", fmt_f(spec.p)),
                ("k", fmt_f(spec.k)),
                ("zeta", fmt_f(spec.zeta)),
                ("rho", fmt_f(spec.rho)),
                ("t", fmt_f(spec.t.re)),
                ("x", fmt_f(spec.x)),
                ("nodes", spec.nodes.to_string()),
            ]);
            let name = match direction {
                Direction::Forward => "Fourier-Gauss forward transform",
                Direction::Inverse => "Fourier-Gauss inverse transform",
                Direction::Unified => "Fourier-Gauss unified transform",
            };
            match fg_verify_with(spec, *direction, tol, mode) {
                Ok(r) => {
                    let mut params = params;
                    params.insert("node_doubling_diff".into(), format!("{:e}", r.node_doubling_diff));
                    let mut report = VerificationReport::new(name, params, r.lhs, r.rhs, tol);
                    report.passed &= r.node_doubling_diff <= tol;
                    report
                }
                Err(e) => VerificationReport::failed(name, params, e.to_string()),
            }
        })
        .collect())
}

fn decreasing_report(name: &str, mut params: BTreeMap<String, String>, devs: Result<Vec<f64>>) -> VerificationReport {
    match devs {
        Ok(devs) => {
            let strictly = devs.windows(2).all(|w| w[1] < w[0]);
            params.insert("deviations".into(), format!("{devs:?}"));
            VerificationReport::from_error(name, params, if strictly { 0.0 } else { 1.0 }, 0.0)
        }
        Err(e) => VerificationReport::failed(name, params, e.to_string()),
    }
}

fn limits(ctx: &mut Ctx) -> Result<Vec<VerificationReport>> {
    let policy = SeriesPolicy::default();
    let q_ladder: Vec<DeformationParams> = [0.9, 0.99, 0.999]
        .iter()
        .map(|&q| DeformationParams::q_only(q))
        .collect::<Result<_>>()?;
    let pq_ladder: Vec<DeformationParams> = [0.1, 0.01, 0.001]
        .iter()
        .map(|&e| DeformationParams::pq(1.0 - e / 2.0, 1.0 - e))
        .collect::<Result<_>>()?;
    let mut items = Vec::new();
    for z in [0.5, 1.0, -0.5] {
        for mu in [0.0, 0.5] {
            items.push((false, z, mu));
            items.push((true, z, mu));
        }
    }
    Ok(evaluate(ctx, &items, |&(pq, z, mu)| {
        let params = params_map([("z", fmt_f(z)), ("mu", fmt_f(mu)), ("nu", fmt_f(mu))]);
        if pq {
            decreasing_report(
                "(p,q) classical limit deviation decreases along p = 1 - e/2, q = 1 - e",
                params,
                classical_limit_report(c(z), mu, mu, &pq_ladder, &policy),
            )
        } else {
            decreasing_report(
                "q classical limit deviation decreases along q = 0.9, 0.99, 0.999",
                params,
                classical_limit_report(c(z), mu, 0.0, &q_ladder, &policy),
            )
        }
    }))
}

fn algebra_relations(ctx: &mut Ctx) -> Result<Vec<VerificationReport>> {
    let max_n = ctx.max_n.max(1);
    let mut out = Vec::new();
    let with_tol = |mut r: VerificationReport, tol: f64| {
        r.tolerance = tol;
        r.passed = r.rel_err <= tol;
        r
    };
    if ctx.exact {
        for q in exact_qs() {
            let mut r = verify_relations_with(&QLadder::new(q.clone())?, max_n, "QOsc exact");
            r.parameters.insert("q".into(), fmt_q(&q));
            out.push(r);
            out.push(verify_jackson_realization(&q, max_n.max(12))?);
        }
    } else {
        for _ in 0..3 {
            let q = ctx.uniform(0.2, 0.9);
            let mut r = verify_algebra_relations(&OscKind::q_osc(q)?, max_n)?;
            r.parameters.insert("q".into(), fmt_f(q));
            out.push(with_tol(r, ctx.tol));
            out.push(with_tol(verify_jackson_realization(&q, max_n.max(12))?, ctx.tol));
        }
    }
    let mut pairs = vec![(0.8, 0.5)];
    for _ in 0..3 {
        pairs.push((ctx.uniform(0.5, 1.5), ctx.uniform(0.2, 0.6)));
    }
    for (p, q) in pairs {
        let mut r = verify_algebra_relations(&OscKind::pq_osc(p, q)?, max_n)?;
        r.parameters.insert("p".into(), fmt_f(p));
        r.parameters.insert("q".into(), fmt_f(q));
        out.push(with_tol(r, ctx.tol));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(suite: Suite, opts: SuiteOptions) -> Vec<VerificationReport> {
        run_suite(suite, &opts).unwrap()
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn exact_structural_suites_pass_with_zero_residual() {
        let opts = SuiteOptions {
            exact: true,
            max_n: Some(8),
            ..Default::default()
        };
        for suite in [
            Suite::Recurrence,
            Suite::Commutators,
            Suite::Qdifference,
            Suite::AlgebraRelations,
        ] {
            for r in run(suite, opts) {
                assert!(r.passed, "{r:?}");
                if r.parameters.get("kind").is_some_and(|k| k.contains("exact")) || r.tolerance == 0.0 {
                    assert_eq!(r.rel_err, 0.0);
                }
            }
        }
    }

    #[test]
    fn float_structural_suites_pass() {
        let opts = SuiteOptions {
            max_n: Some(10),
            ..Default::default()
        };
        for suite in [
            Suite::Recurrence,
            Suite::Commutators,
            Suite::Qdifference,
            Suite::AlgebraRelations,
        ] {
            for r in run(suite, opts) {
                assert!(r.passed, "{r:?}");
            }
        }
    }

    #[test]
    fn zero_tolerance_fails_in_floating_mode() {
        let reports = run(
            Suite::Reductions,
            SuiteOptions {
                tol: Some(0.0),
                ..Default::default()
            },
        );
        assert!(reports.iter().any(|r| !r.passed));
    }

    #[test]
    fn seeded_runs_are_reproducible_across_modes() {
        let seq = SuiteOptions {
            execution: Execution::Sequential,
            ..Default::default()
        };
        let a = run(Suite::Reductions, seq);
        let b = run(Suite::Reductions, SuiteOptions::default());
        assert_eq!(a, b);
        let c = run(Suite::Reductions, SuiteOptions { seed: 7, ..seq });
        assert_ne!(a, c);
    }

    #[test]
    fn negative_tolerance_is_rejected() {
        assert!(run_suite(
            Suite::Limits,
            &SuiteOptions {
                tol: Some(-1.0),
                ..Default::default()
            }
        )
        .is_err());
    }
}
