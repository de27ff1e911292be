//! Named functions reachable from `eval` and `table`.

use std::collections::BTreeMap;

use clap::ValueEnum;
use num_complex::Complex64;
use qdeform::deformed_exp::{epq_munu, eq_mu};
use qdeform::matrix_elements::{pq_kernel_l, q_kernel_q, u_pq, u_q};
use qdeform::qseries::{
    big_q_jacobi, hahn_exton_bessel, little_q_jacobi, phi_bibasic, phi_rs, q_bessel_2, q_laguerre, PhiSpec,
};
use qdeform::rogers_szego::rs_eval;
use qdeform::{QError, Scalar, SeriesEval, SeriesPolicy};
use serde::Serialize;

use crate::parse::{parse_index, parse_list, parse_real, parse_scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Function {
    EqMu,
    EpqMunu,
    Rs,
    QJacobiLittle,
    QJacobiBig,
    HahnExton,
    QBessel2,
    QLaguerre,
    PhiRs,
    PhiBibasic,
    #[value(name = "u-q")]
    UQ,
    #[value(name = "u-pq")]
    UPq,
    KernelQ,
    KernelL,
}

impl Function {
    /// Parameter names the function reads, in table column order.
    pub fn parameters(&self) -> &'static [&'static str] {
        match self {
            Function::EqMu => &["z", "q", "mu"],
            Function::EpqMunu => &["z", "p", "q", "mu", "nu"],
            Function::Rs => &["n", "y", "q"],
            Function::QJacobiLittle | Function::QJacobiBig => &["n", "z", "alpha", "beta", "q"],
            Function::HahnExton => &["n", "z", "q"],
            Function::QBessel2 => &["n", "x", "q"],
            Function::QLaguerre => &["n", "gamma", "x", "q"],
            Function::PhiRs => &["upper", "lower", "q", "z"],
            Function::PhiBibasic => &["upper", "lower", "upper-p", "lower-p", "q", "p", "z"],
            Function::UQ => &["m", "n", "alpha", "beta", "mu", "nu", "q"],
            Function::UPq => &["m", "n", "alpha", "beta", "mu", "nu", "p", "q"],
            Function::KernelQ => &["n", "x", "gamma", "mu", "nu", "q"],
            Function::KernelL => &["n", "x", "gamma", "mu", "nu", "p", "q"],
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ValueJson {
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct EvalOutput {
    pub value: ValueJson,
    pub terms_used: usize,
    pub converged: bool,
    pub est_error: f64,
}

impl From<SeriesEval> for EvalOutput {
    fn from(s: SeriesEval) -> Self {
        EvalOutput {
            value: ValueJson {
                re: s.value.re,
                im: s.value.im,
            },
            terms_used: s.terms_used,
            converged: s.converged,
            est_error: s.est_error,
        }
    }
}

/// A finite closed form evaluated without truncation.
fn exact_sum(value: Scalar, terms: usize) -> EvalOutput {
    EvalOutput {
        value: ValueJson {
            re: value.re,
            im: value.im,
        },
        terms_used: terms,
        converged: true,
        est_error: 0.0,
    }
}

/// Failure of an evaluation: a usage problem or a library error.
#[derive(Debug)]
pub enum EvalError {
    Usage(String),
    Library(QError),
}

impl From<QError> for EvalError {
    fn from(e: QError) -> Self {
        EvalError::Library(e)
    }
}

struct Args<'a> {
    values: &'a BTreeMap<&'static str, String>,
}

impl Args<'_> {
    fn raw(&self, name: &str) -> Result<&str, EvalError> {
        self.values
            .get(name)
            .map(String::as_str)
            .ok_or_else(|| EvalError::Usage(format!("missing --{name}")))
    }

    fn raw_or<'b>(&'b self, name: &str, default: &'b str) -> &'b str {
        self.values.get(name).map(String::as_str).unwrap_or(default)
    }

    fn scalar(&self, name: &str) -> Result<Scalar, EvalError> {
        parse_scalar(self.raw(name)?).map_err(EvalError::Usage)
    }

    fn real(&self, name: &str) -> Result<f64, EvalError> {
        parse_real(self.raw(name)?).map_err(EvalError::Usage)
    }

    fn real_or(&self, name: &str, default: f64) -> Result<f64, EvalError> {
        match self.values.get(name) {
            Some(v) => parse_real(v).map_err(EvalError::Usage),
            None => Ok(default),
        }
    }

    fn index(&self, name: &str) -> Result<usize, EvalError> {
        parse_index(self.raw(name)?).map_err(EvalError::Usage)
    }

    fn list(&self, name: &str) -> Result<Vec<Scalar>, EvalError> {
        parse_list(self.raw_or(name, "")).map_err(EvalError::Usage)
    }
}

fn real_q(q: f64) -> Complex64 {
    Complex64::new(q, 0.0)
}

/// Evaluates `func` at the named parameter values.
pub fn evaluate(
    func: Function,
    values: &BTreeMap<&'static str, String>,
    policy: &SeriesPolicy,
) -> Result<EvalOutput, EvalError> {
    let a = Args { values };
    Ok(match func {
        Function::EqMu => eq_mu(a.scalar("z")?, a.real("q")?, a.real("mu")?, policy)?.into(),
        Function::EpqMunu => epq_munu(
            a.scalar("z")?,
            a.real("p")?,
            a.real("q")?,
            a.real("mu")?,
            a.real("nu")?,
            policy,
        )?
        .into(),
        Function::Rs => {
            let (n, y, q) = (a.index("n")?, a.scalar("y")?, a.real("q")?);
            check_q(q)?;
            exact_sum(rs_eval(n, &y, &real_q(q))?, n + 1)
        }
        Function::QJacobiLittle | Function::QJacobiBig => {
            let (n, z, q) = (a.index("n")?, a.scalar("z")?, a.real("q")?);
            check_q(q)?;
            let (alpha, beta) = (a.scalar("alpha")?, a.scalar("beta")?);
            let v = if func == Function::QJacobiLittle {
                little_q_jacobi(n, &z, &alpha, &beta, &real_q(q))?
            } else {
                big_q_jacobi(n, &z, &alpha, &beta, &real_q(q))?
            };
            exact_sum(v, n + 1)
        }
        Function::HahnExton => hahn_exton_bessel(a.index("n")?, a.scalar("z")?, a.real("q")?, policy)?.into(),
        Function::QBessel2 => q_bessel_2(a.index("n")?, a.scalar("x")?, a.real("q")?, policy)?.into(),
        Function::QLaguerre => {
            let n = a.index("n")?;
            exact_sum(q_laguerre(n, a.real("gamma")?, a.scalar("x")?, a.real("q")?)?, n + 1)
        }
        Function::PhiRs => {
            let q = a.scalar("q")?;
            phi_rs(
                &PhiSpec::basic(a.list("upper")?, a.list("lower")?, q, a.scalar("z")?),
                policy,
            )?
            .into()
        }
        Function::PhiBibasic => {
            let spec = PhiSpec::bibasic(
                a.list("upper")?,
                a.list("upper-p")?,
                a.list("lower")?,
                a.list("lower-p")?,
                a.scalar("q")?,
                a.scalar("p")?,
                a.scalar("z")?,
            );
            phi_bibasic(&spec, policy)?.into()
        }
        Function::UQ => {
            let (m, n) = (a.index("m")?, a.index("n")?);
            let r = u_q(
                m,
                n,
                a.scalar("alpha")?,
                a.scalar("beta")?,
                a.real("mu")?,
                a.real("nu")?,
                a.real("q")?,
            )?;
            exact_sum(r.value, m.min(n) + 1)
        }
        Function::UPq => {
            let (m, n) = (a.index("m")?, a.index("n")?);
            let r = u_pq(
                m,
                n,
                a.scalar("alpha")?,
                a.scalar("beta")?,
                a.real("mu")?,
                a.real("nu")?,
                a.real("p")?,
                a.real("q")?,
            )?;
            exact_sum(r.value, m.min(n) + 1)
        }
        Function::KernelQ => {
            let n = a.index("n")?;
            let v = q_kernel_q(
                n,
                a.scalar("x")?,
                a.real("gamma")?,
                a.real_or("mu", 0.0)?,
                a.real_or("nu", 0.0)?,
                a.real("q")?,
            )?;
            exact_sum(v, n + 1)
        }
        Function::KernelL => {
            let n = a.index("n")?;
            let v = pq_kernel_l(
                n,
                a.scalar("x")?,
                a.index("gamma")?,
                a.real_or("mu", 0.0)?,
                a.real_or("nu", 0.0)?,
                a.real("p")?,
                a.real("q")?,
            )?;
            exact_sum(v, n + 1)
        }
    })
}

fn check_q(q: f64) -> Result<(), EvalError> {
    qdeform::DeformationParams::q_only(q)?;
    Ok(())
}
