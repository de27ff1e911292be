//! Fourier-Gauss transforms of `E^{(zeta)}_{p,q}` under the coupling
//! `q = p exp(-2 k^2)`, checked by Gauss-Hermite quadrature with a trapezoid
//! cross-check.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::deformed_exp::ExpFamily;
use crate::error::{QError, Result};
use crate::par::{self, Execution};
use crate::params::DeformationParams;
use crate::scalar::{ensure_finite, Scalar};
use crate::series::{pairwise_sum, SeriesPolicy};

/// Half-width of the trapezoid cross-check interval in `y`.
const TRAPEZOID_HALF_WIDTH: f64 = 12.0;
const TRAPEZOID_POINTS: usize = 1201;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    /// `E^{(zeta)}(t e^{iky})` on the integral side, `zeta + 1/2` on the closed side
    Forward,
    /// `E^{(zeta)}(t e^{ky})` on the integral side, `zeta - 1/2` on the closed side
    Inverse,
    /// `E^{(zeta)}(t e^{i rho k y})` on the integral side, `zeta + rho^2/2` on the closed side
    Unified,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FGSpec {
    pub p: f64,
    pub k: f64,
    pub zeta: f64,
    pub rho: f64,
    pub t: Scalar,
    pub x: f64,
    pub nodes: usize,
    /// tolerance the run is judged against; the trapezoid cross-check allows
    /// ten times this
    pub target_tol: f64,
}

impl FGSpec {
    pub fn new(p: f64, k: f64, zeta: f64, t: Scalar, x: f64) -> Self {
        FGSpec {
            p,
            k,
            zeta,
            rho: 1.0,
            t,
            x,
            nodes: 128,
            target_tol: 1e-7,
        }
    }

    pub fn with_rho(self, rho: f64) -> Self {
        FGSpec { rho, ..self }
    }

    pub fn with_nodes(self, nodes: usize) -> Self {
        FGSpec { nodes, ..self }
    }

    pub fn with_target_tol(self, target_tol: f64) -> Self {
        FGSpec { target_tol, ..self }
    }

    /// `q = p exp(-2 k^2)`.
    pub fn q(&self) -> f64 {
        self.p * (-2.0 * self.k * self.k).exp()
    }

    fn rho_for(&self, direction: Direction) -> f64 {
        match direction {
            Direction::Unified => self.rho,
            _ => 1.0,
        }
    }

    /// Label of the exponential on the closed side.
    pub fn shifted_zeta(&self, direction: Direction) -> f64 {
        match direction {
            Direction::Forward => self.zeta + 0.5,
            Direction::Inverse => self.zeta - 0.5,
            Direction::Unified => self.zeta + self.rho * self.rho / 2.0,
        }
    }

    /// Parameters induced by the coupling, with `(mu, nu) = (zeta/2, zeta/2)`.
    pub fn params(&self) -> Result<DeformationParams> {
        for (v, what) in [
            (self.p, "p"),
            (self.k, "k"),
            (self.zeta, "zeta"),
            (self.rho, "rho"),
            (self.x, "x"),
        ] {
            if !v.is_finite() {
                return Err(QError::domain(format!("Fourier-Gauss spec: {what} must be finite")));
            }
        }
        if !(self.t.re.is_finite() && self.t.im.is_finite()) {
            return Err(QError::domain("Fourier-Gauss spec: t must be finite"));
        }
        if self.nodes < 2 {
            return Err(QError::domain("Fourier-Gauss spec: at least 2 quadrature nodes"));
        }
        if !(self.target_tol > 0.0) {
            return Err(QError::domain("Fourier-Gauss spec: target_tol must be positive"));
        }
        DeformationParams::pq(self.p, self.q())?.with_exponents(self.zeta / 2.0, self.zeta / 2.0)
    }

    fn family(&self, zeta: f64) -> Result<ExpFamily> {
        ExpFamily::pq_zeta(self.p, self.q(), zeta)
    }
}

/// Orthonormal Hermite value `h_n(z)` and derivative `h_n'(z)`, both
/// without the weight factor.
fn hermite_orthonormal(n: usize, z: f64) -> (f64, f64) {
    let mut p1 = PI.powf(-0.25);
    let mut p2 = 0.0;
    for j in 0..n {
        let p3 = p2;
        p2 = p1;
        let jf = j as f64;
        p1 = z * (2.0 / (jf + 1.0)).sqrt() * p2 - (jf / (jf + 1.0)).sqrt() * p3;
    }
    (p1, (2.0 * n as f64).sqrt() * p2)
}

/// Gauss-Hermite nodes and weights for the weight `e^{-u^2}`. Nodes are the
/// eigenvalues of the symmetric Jacobi matrix, each polished by Newton steps
/// on the orthonormal recurrence; the weights follow from the derivative at
/// the polished node. Nodes come out in descending order.
pub fn gauss_hermite(n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    cached_rule(n).map(|rule| (rule.0.clone(), rule.1.clone()))
}

type Rule = Arc<(Vec<f64>, Vec<f64>)>;

/// Rules are deterministic in `n`, so each size is built once per process.
fn cached_rule(n: usize) -> Result<Rule> {
    static RULES: OnceLock<Mutex<HashMap<usize, Rule>>> = OnceLock::new();
    let rules = RULES.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(rule) = rules.lock().unwrap_or_else(|e| e.into_inner()).get(&n) {
        return Ok(rule.clone());
    }
    let rule = Arc::new(build_gauss_hermite(n)?);
    rules.lock().unwrap_or_else(|e| e.into_inner()).insert(n, rule.clone());
    Ok(rule)
}

fn build_gauss_hermite(n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if n == 0 {
        return Err(QError::domain("Gauss-Hermite rule needs at least one node"));
    }
    let jacobi = DMatrix::from_fn(n, n, |i, j| {
        if i + 1 == j || j + 1 == i {
            (i.max(j) as f64 / 2.0).sqrt()
        } else {
            0.0
        }
    });
    let mut guesses: Vec<f64> = SymmetricEigen::new(jacobi).eigenvalues.iter().copied().collect();
    guesses.sort_by(|a, b| b.total_cmp(a));
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    // the rule is symmetric, so only the nonnegative half is computed
    for i in 0..n.div_ceil(2) {
        let mut z = if n % 2 == 1 && i == n / 2 { 0.0 } else { guesses[i] };
        let mut deriv = hermite_orthonormal(n, z).1;
        for _ in 0..20 {
            let (v, d) = hermite_orthonormal(n, z);
            deriv = d;
            let step = v / d;
            z -= step;
            if step.abs() <= 1e-15 * z.abs().max(1.0) {
                deriv = hermite_orthonormal(n, z).1;
                break;
            }
        }
        x[i] = z;
        x[n - 1 - i] = -z;
        w[i] = 2.0 / (deriv * deriv);
        w[n - 1 - i] = w[i];
    }
    let spread = x.windows(2).map(|p| p[0] - p[1]).fold(f64::INFINITY, f64::min);
    let total: f64 = w.iter().sum();
    let drift = (total - PI.sqrt()).abs() / PI.sqrt();
    if !(spread > 0.0 && drift <= 1e-12) {
        return Err(QError::Quadrature {
            rel_diff: drift,
            limit: 1e-12,
        });
    }
    Ok((x, w))
}

/// `E^{(shifted zeta)}(argument) e^{-x^2/2}`.
pub fn fg_closed_side(spec: &FGSpec, direction: Direction) -> Result<Scalar> {
    spec.params()?;
    let zeta = spec.shifted_zeta(direction);
    let fam = spec.family(zeta)?;
    let arg = match direction {
        Direction::Inverse => spec.t * Complex64::from_polar(1.0, spec.k * spec.x),
        _ => spec.t * (-spec.rho_for(direction) * spec.k * spec.x).exp(),
    };
    let e = fam.eval(arg, &SeriesPolicy::default())?.value;
    ensure_finite(e * (-spec.x * spec.x / 2.0).exp(), "Fourier-Gauss closed side")
}

/// `e^{ixy} E^{(zeta)}(...)` at the point `y`, without the Gaussian.
fn integrand(spec: &FGSpec, fam: &ExpFamily, direction: Direction, y: f64) -> Result<Scalar> {
    let arg = match direction {
        Direction::Inverse => spec.t * (spec.k * y).exp(),
        _ => spec.t * Complex64::from_polar(1.0, spec.rho_for(direction) * spec.k * y),
    };
    let e = fam.eval(arg, &SeriesPolicy::default())?.value;
    Ok(Complex64::from_polar(1.0, spec.x * y) * e)
}

fn collect(values: Vec<Result<Scalar>>) -> Result<Vec<Scalar>> {
    values.into_iter().collect()
}

/// Gauss-Hermite value of `(1/sqrt(2 pi)) int e^{ixy - y^2/2} E(...) dy`
/// with `nodes` nodes.
pub fn gauss_hermite_side(spec: &FGSpec, direction: Direction, nodes: usize, mode: Execution) -> Result<Scalar> {
    spec.params()?;
    let fam = spec.family(spec.zeta)?;
    let rule = cached_rule(nodes)?;
    let (u, w) = (&rule.0, &rule.1);
    let idx: Vec<usize> = (0..nodes).collect();
    let terms = collect(par::map(mode, &idx, |&i| {
        integrand(spec, &fam, direction, std::f64::consts::SQRT_2 * u[i]).map(|f| f * w[i])
    }))?;
    ensure_finite(pairwise_sum(&terms) / PI.sqrt(), "Gauss-Hermite sum")
}

/// Trapezoid value of the same integral on `[-12, 12]`.
pub fn trapezoid_side(spec: &FGSpec, direction: Direction, mode: Execution) -> Result<Scalar> {
    spec.params()?;
    let fam = spec.family(spec.zeta)?;
    let h = 2.0 * TRAPEZOID_HALF_WIDTH / (TRAPEZOID_POINTS - 1) as f64;
    let terms = collect(par::map_range(mode, TRAPEZOID_POINTS, |i| {
        let y = -TRAPEZOID_HALF_WIDTH + h * i as f64;
        let end = if i == 0 || i == TRAPEZOID_POINTS - 1 { 0.5 } else { 1.0 };
        integrand(spec, &fam, direction, y).map(|f| f * (end * (-y * y / 2.0).exp()))
    }))?;
    ensure_finite(pairwise_sum(&terms) * h / (2.0 * PI).sqrt(), "trapezoid sum")
}

fn rel_diff(a: Scalar, b: Scalar) -> f64 {
    (a - b).norm() / a.norm().max(f64::MIN_POSITIVE)
}

/// The integral side at `spec.nodes` Gauss-Hermite nodes, refused with a
/// quadrature error when the trapezoid rule disagrees by more than
/// `10 * spec.target_tol`.
pub fn fg_quadrature_side_with(spec: &FGSpec, direction: Direction, mode: Execution) -> Result<Scalar> {
    let gh = gauss_hermite_side(spec, direction, spec.nodes, mode)?;
    let tr = trapezoid_side(spec, direction, mode)?;
    let diff = rel_diff(gh, tr);
    let limit = 10.0 * spec.target_tol;
    if !(diff <= limit) {
        return Err(QError::Quadrature { rel_diff: diff, limit });
    }
    Ok(gh)
}

pub fn fg_quadrature_side(spec: &FGSpec, direction: Direction) -> Result<Scalar> {
    fg_quadrature_side_with(spec, direction, Execution::default())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FGReport {
    pub lhs: Scalar,
    pub rhs: Scalar,
    pub abs_err: f64,
    pub rel_err: f64,
    pub nodes_used: usize,
    pub direction: Direction,
    /// `|Q_n - Q_{2n}| / |Q_n|` between `nodes` and doubled node counts
    pub node_doubling_diff: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// Closed side against the quadrature side. Passes when the relative error
/// and the node-doubling difference are both within `tol`.
pub fn fg_verify_with(spec: &FGSpec, direction: Direction, tol: f64, mode: Execution) -> Result<FGReport> {
    let lhs = fg_closed_side(spec, direction)?;
    let rhs = fg_quadrature_side_with(spec, direction, mode)?;
    let doubled = gauss_hermite_side(spec, direction, 2 * spec.nodes, mode)?;
    let abs_err = (lhs - rhs).norm();
    let rel_err = abs_err / lhs.norm().max(f64::MIN_POSITIVE);
    let node_doubling_diff = rel_diff(rhs, doubled);
    Ok(FGReport {
        lhs,
        rhs,
        abs_err,
        rel_err,
        nodes_used: spec.nodes,
        direction,
        node_doubling_diff,
        tolerance: tol,
        passed: rel_err <= tol && node_doubling_diff <= tol,
    })
}

pub fn fg_verify(spec: &FGSpec, direction: Direction, tol: f64) -> Result<FGReport> {
    fg_verify_with(spec, direction, tol, Execution::default())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Scalar {
        Scalar::new(x, 0.0)
    }

    #[test]
    fn hermite_rule_moments() {
        for n in [1usize, 2, 5, 128, 256] {
            let (u, w) = gauss_hermite(n).unwrap();
            let total: f64 = w.iter().sum();
            assert!((total - PI.sqrt()).abs() < 1e-13, "n = {n}");
            if n >= 2 {
                let second: f64 = u.iter().zip(&w).map(|(u, w)| u * u * w).sum();
                assert!((second - PI.sqrt() / 2.0).abs() < 1e-12, "n = {n}");
            }
            // int cos(a u) e^{-u^2} du = sqrt(pi) e^{-a^2/4}
            if n >= 64 {
                let a = 1.3;
                let cosm: f64 = u.iter().zip(&w).map(|(u, w)| (a * u).cos() * w).sum();
                assert!((cosm - PI.sqrt() * (-a * a / 4.0).exp()).abs() < 1e-13);
            }
        }
        let two = gauss_hermite(2).unwrap().0;
        assert!((two[0] - 0.5f64.sqrt()).abs() < 1e-15 && two[1] == -two[0]);
        assert!(gauss_hermite(0).is_err());
    }

    #[test]
    fn zero_t_gives_gaussian() {
        for direction in [Direction::Forward, Direction::Inverse, Direction::Unified] {
            let spec = FGSpec::new(0.9, 0.3, 0.5, c(0.0), 0.7).with_rho(2.0);
            let g = (-0.49f64 / 2.0).exp();
            assert!((fg_closed_side(&spec, direction).unwrap() - c(g)).norm() < 1e-16);
            let r = fg_verify(&spec, direction, 1e-14).unwrap();
            assert!(r.passed, "{r:?}");
        }
    }

    #[test]
    fn forward_example_passes() {
        let spec = FGSpec::new(0.9, 0.3, 0.0, c(0.2), 0.5);
        let r = fg_verify(&spec, Direction::Forward, 1e-7).unwrap();
        assert!(r.passed, "{r:?}");
        assert!(r.rel_err < 1e-10);
    }

    #[test]
    fn inverse_and_ramanujan_cases_pass() {
        let spec = FGSpec::new(0.85, 0.2, 0.5, c(-0.3), -1.0);
        assert!(fg_verify(&spec, Direction::Inverse, 1e-7).unwrap().passed);
        let spec = FGSpec::new(0.95, 0.3, 0.0, c(0.25), 1.0).with_rho(2f64.sqrt());
        assert!(fg_verify(&spec, Direction::Unified, 1e-7).unwrap().passed);
    }

    #[test]
    fn forward_is_unified_at_rho_one() {
        let spec = FGSpec::new(0.9, 0.2, 0.5, c(0.3), 0.5).with_rho(1.0);
        assert_eq!(
            fg_closed_side(&spec, Direction::Forward).unwrap(),
            fg_closed_side(&spec, Direction::Unified).unwrap()
        );
    }

    #[test]
    fn wrong_sign_in_the_exponent_is_detected() {
        // with e^{+rho k x} on the closed side the identity fails
        let spec = FGSpec::new(0.9, 0.3, 0.0, c(0.3), 1.0).with_rho(2f64.sqrt());
        let quad = fg_quadrature_side(&spec, Direction::Unified).unwrap();
        let flipped = FGSpec { x: -1.0, ..spec };
        let wrong = fg_closed_side(&flipped, Direction::Unified).unwrap();
        assert!(rel_diff(wrong, quad) > 1e-3);
    }

    #[test]
    fn coupling_and_domain() {
        let a = FGSpec::new(0.9, 0.2, 0.0, c(0.1), 0.0);
        let b = FGSpec { k: 0.3, ..a };
        assert!(b.q() < a.q());
        assert!((a.q() - 0.9 * (-0.08f64).exp()).abs() < 1e-16);
        let bad = FGSpec::new(1.2, 0.0, 0.0, c(0.1), 0.0);
        assert!(fg_closed_side(&bad, Direction::Forward).is_err());
        assert!(FGSpec::new(0.9, 0.2, 0.0, c(0.1), 0.0).with_nodes(1).params().is_err());
    }

    #[test]
    fn execution_modes_agree_bitwise() {
        let spec = FGSpec::new(0.9, 0.3, 0.5, c(0.2), 0.5);
        let a = fg_quadrature_side_with(&spec, Direction::Forward, Execution::Sequential).unwrap();
        let b = fg_quadrature_side_with(&spec, Direction::Forward, Execution::Parallel).unwrap();
        assert_eq!(a, b);
    }
}
