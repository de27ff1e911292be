//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Library suites are exercised through `run_suite` with their documented
//! defaults; product forms, aliases and the named special functions are
//! checked here against plain loops that share no code with the library.
//! Tolerance tests read `!(err <= tol)` so that NaN fails.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use qdeform::deformed_exp::{classical_limit_report, epq_munu, eq_mu, named_exp, vinet_exp, NamedExp};
use qdeform::oscillator::{verify_jackson_realization, verify_relations_with, QLadder};
use qdeform::qseries::{big_q_jacobi, hahn_exton_bessel, little_q_jacobi, phi_rs, q_bessel_2, PhiSpec};
use qdeform::report::VerificationReport;
use qdeform::scalar::rational;
use qdeform::verify::{run_suite, Suite, SuiteOptions};
use qdeform::{DeformationParams, SeriesPolicy};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

fn rng(stream: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0x5eed_0000 + stream)
}

fn suite(suite: Suite, opts: SuiteOptions) -> Result<Vec<VerificationReport>, String> {
    run_suite(suite, &opts).map_err(|e| format!("{} suite did not run: {e}", suite.name()))
}

/// Largest relative error in `reports`, failing if any exceeds `tol`.
fn worst_within(label: &str, reports: &[VerificationReport], tol: f64) -> Result<f64, String> {
    let mut worst = 0.0f64;
    for r in reports {
        if !(r.rel_err <= tol) {
            return Err(format!(
                "{label}: '{}' at {:?} has rel_err {:e} > {tol:e}",
                r.identity_name, r.parameters, r.rel_err
            ));
        }
        worst = worst.max(r.rel_err);
    }
    Ok(worst)
}

fn expect_count(label: &str, reports: &[VerificationReport], want: usize) -> Result<(), String> {
    if reports.len() == want {
        Ok(())
    } else {
        Err(format!("{label}: expected {want} reports, got {}", reports.len()))
    }
}

/// `prod_{i < terms} (1 - a q^i)` by plain multiplication.
fn product_loop(a: f64, q: f64, terms: usize) -> f64 {
    let mut acc = 1.0;
    let mut aq = a;
    for _ in 0..terms {
        acc *= 1.0 - aq;
        aq *= q;
    }
    acc
}

/// Loop sums are compared only where their condition number
/// `sum |t_k| / |sum t_k|` is at most this; beyond it no f64 summation
/// order is accurate to 1e-13, whichever side is right.
const MAX_CONDITION: f64 = 100.0;

/// Sum of `terms` with its condition number.
fn summed(terms: impl Iterator<Item = f64>) -> (f64, f64) {
    let (sum, abs) = terms.fold((0.0, 0.0), |(s, a), t| (s + t, a + t.abs()));
    let cond = if sum == 0.0 { f64::INFINITY } else { abs / sum.abs() };
    (sum, cond)
}

/// `prod_{i=1..n} (p^{-i} - q^i)`.
fn pq_factorial_loop(p: f64, q: f64, n: usize) -> f64 {
    (1..=n).map(|i| p.powi(-(i as i32)) - q.powi(i as i32)).product()
}

fn exact_structural() -> Check {
    let opts = SuiteOptions {
        exact: true,
        ..Default::default()
    };
    let mut reports = Vec::new();
    for (s, max_n) in [
        (Suite::Recurrence, 20),
        (Suite::Commutators, 15),
        (Suite::Qdifference, 10),
    ] {
        let r = suite(
            s,
            SuiteOptions {
                max_n: Some(max_n),
                ..opts
            },
        )?;
        if r.is_empty() {
            return Err(format!("{} produced no reports", s.name()));
        }
        reports.extend(r);
    }
    for q in [rational(1, 2), rational(1, 3), rational(2, 5)] {
        let ladder = QLadder::new(q.clone()).map_err(|e| e.to_string())?;
        reports.push(verify_relations_with(&ladder, 10, "q-oscillator relations"));
        reports.push(verify_jackson_realization(&q, 12).map_err(|e| e.to_string())?);
    }
    for r in &reports {
        if !(r.abs_err == 0.0 && r.passed) {
            return Err(format!(
                "'{}' at {:?} has residual {:e}",
                r.identity_name, r.parameters, r.abs_err
            ));
        }
        if let Some(q) = r.parameters.get("q") {
            if !["1/2", "1/3", "2/5"].contains(&q.as_str()) {
                return Err(format!("'{}' ran at q = {q}, not an exact rational", r.identity_name));
            }
        }
    }
    Ok(format!("{} exact reports, all residuals zero", reports.len()))
}

fn generating() -> Check {
    let reports = suite(Suite::Generating, SuiteOptions::default())?;
    expect_count("generating", &reports, 100)?;
    let param =
        |r: &VerificationReport, k: &str| -> f64 { r.parameters.get(k).and_then(|v| v.parse().ok()).unwrap_or(0.0) };
    for r in &reports {
        let q = param(r, "q");
        let (alpha, y, t) = (param(r, "alpha"), param(r, "y"), param(r, "t"));
        let inside = q > 0.2 && q < 0.9 && alpha.abs() <= 0.7 && (alpha * y).abs() <= 0.7 && t.abs() <= 0.7;
        if !inside {
            return Err(format!("draw {:?} outside the required region", r.parameters));
        }
    }
    let worst = worst_within("generating", &reports, 1e-12)?;
    Ok(format!("100 points, worst rel_err {worst:.2e}"))
}

fn product_forms() -> Check {
    let policy = SeriesPolicy::default();
    let mut r = rng(3);
    let (mut w1, mut w2, mut w3, mut w4, mut w5) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for _ in 0..25 {
        // E^{(0)}(z) = 1/(z;q)_inf
        let q: f64 = r.gen_range(0.2..0.9);
        let z: f64 = r.gen_range(-0.3..0.9);
        let lhs = eq_mu(c(z), q, 0.0, &policy).map_err(|e| e.to_string())?.value.re;
        w1 = w1.max(rel(lhs, 1.0 / product_loop(z, q, 2000)));
        // E^{(1/2)}(z) = (-q^{1/2} z; q)_inf
        let q: f64 = r.gen_range(0.2..0.9);
        let z: f64 = r.gen_range(-0.3..3.0);
        let lhs = eq_mu(c(z), q, 0.5, &policy).map_err(|e| e.to_string())?.value.re;
        w2 = w2.max(rel(lhs, product_loop(-q.sqrt() * z, q, 2000)));
    }
    for _ in 0..25 {
        // E^{mu,nu}_{1,q} = E^{(mu)}_q for every nu
        let q: f64 = r.gen_range(0.2..0.9);
        let mu: f64 = r.gen_range(0.05..1.0);
        let nu: f64 = r.gen_range(-1.0..1.0);
        let z: f64 = r.gen_range(-1.0..1.0);
        let a = epq_munu(c(z), 1.0, q, mu, nu, &policy)
            .map_err(|e| e.to_string())?
            .value
            .re;
        let b = eq_mu(c(z), q, mu, &policy).map_err(|e| e.to_string())?.value.re;
        w3 = w3.max(rel(a, b));
    }
    for _ in 0..25 {
        let (p, q) = loop {
            let p: f64 = r.gen_range(0.5..0.99);
            let q: f64 = r.gen_range(0.2..0.9);
            if p * q < 1.0 && q < p {
                break (p, q);
            }
        };
        let z: f64 = r.gen_range(-0.3..1.0);
        let params = DeformationParams::pq(p, q).map_err(|e| e.to_string())?;
        // epsilon_{p,q}(z) = sum (q/p)^{n^2/4} z^n / [p,q;p,q]_n
        let eps = named_exp(NamedExp::EpsPq, c(z), &params, &policy)
            .map_err(|e| e.to_string())?
            .value
            .re;
        let brute: f64 = (0..400)
            .map(|n| (q / p).powf((n * n) as f64 / 4.0) * z.powi(n as i32) / pq_factorial_loop(p, q, n))
            .take_while(|t| t.is_finite())
            .sum();
        w4 = w4.max(rel(eps, brute));
        // E^{1/2,1/2}_{p,q}(z) = E_{p,q}((q/p)^{1/2} z)
        let a = epq_munu(c(z), p, q, 0.5, 0.5, &policy)
            .map_err(|e| e.to_string())?
            .value
            .re;
        let b = vinet_exp(c((q / p).sqrt() * z), p, q, &policy)
            .map_err(|e| e.to_string())?
            .value
            .re;
        w5 = w5.max(rel(a, b));
    }
    let checks = [
        ("E^(0) product form", w1, 1e-12),
        ("E^(1/2) product form", w2, 1e-12),
        ("p = 1 reduction", w3, 1e-14),
        ("epsilon_pq alias", w4, 1e-13),
        ("E^{1/2,1/2} Vinet alias", w5, 1e-13),
    ];
    for (name, worst, tol) in checks {
        if !(worst <= tol) {
            return Err(format!("{name}: worst rel_err {worst:e} > {tol:e}"));
        }
    }
    Ok(checks
        .iter()
        .map(|(n, w, _)| format!("{n} {w:.1e}"))
        .collect::<Vec<_>>()
        .join(", "))
}

fn matrix_elements() -> Check {
    let mut out = Vec::new();
    for (s, max_n) in [(Suite::MatrixQ, 12), (Suite::MatrixPq, 10)] {
        let reports = suite(
            s,
            SuiteOptions {
                max_n: Some(max_n),
                tol: Some(1e-9),
                ..Default::default()
            },
        )?;
        let (oracle, branch): (Vec<_>, Vec<_>) = reports
            .into_iter()
            .partition(|r| r.identity_name.contains("operator oracle"));
        expect_count(s.name(), &oracle, 20)?;
        expect_count(s.name(), &branch, 20)?;
        let wo = worst_within(s.name(), &oracle, 1e-9)?;
        let wb = worst_within(s.name(), &branch, 1e-13)?;
        out.push(format!("{} oracle {wo:.1e} branch {wb:.1e}", s.name()));
    }
    Ok(out.join(", "))
}

fn reductions() -> Check {
    let reports = suite(Suite::Reductions, SuiteOptions::default())?;
    expect_count("reductions", &reports, 100)?;
    let mut by_name: BTreeMap<&str, usize> = BTreeMap::new();
    for r in &reports {
        *by_name.entry(r.identity_name.as_str()).or_default() += 1;
    }
    if by_name.len() != 5 || by_name.values().any(|&n| n != 20) {
        return Err(format!("expected five reductions at 20 points each, got {by_name:?}"));
    }
    let worst = worst_within("reductions", &reports, 1e-12)?;
    Ok(format!("5 x 20 points, worst rel_err {worst:.2e}"))
}

fn fourier_gauss() -> Check {
    let reports = suite(
        Suite::FourierGauss,
        SuiteOptions {
            tol: Some(1e-7),
            ..Default::default()
        },
    )?;
    expect_count("fourier-gauss", &reports, 7 * 3 * 2 * 5)?;
    let worst = worst_within("fourier-gauss", &reports, 1e-7)?;
    let mut worst_doubling = 0.0f64;
    for r in &reports {
        if r.parameters.get("nodes").map(String::as_str) != Some("128") {
            return Err(format!("{:?} not evaluated at 128 nodes", r.parameters));
        }
        let d: f64 = r
            .parameters
            .get("node_doubling_diff")
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| format!("{:?} lacks the 256-node comparison", r.parameters))?;
        if !(d <= 1e-7) {
            return Err(format!("{:?}: 128 vs 256 nodes differ by {d:e}", r.parameters));
        }
        worst_doubling = worst_doubling.max(d);
        let t: f64 = r.parameters["t"].parse().unwrap_or(f64::NAN);
        if !(t.abs() <= 0.3) {
            return Err(format!("{:?}: |t| > 0.3", r.parameters));
        }
    }
    Ok(format!(
        "{} transforms, worst rel_err {worst:.2e}, worst 128/256 node difference {worst_doubling:.2e}",
        reports.len()
    ))
}

fn classical_limits() -> Check {
    let policy = SeriesPolicy::default();
    let err = |e: qdeform::QError| e.to_string();
    let q_ladder = [0.9, 0.99, 0.999]
        .iter()
        .map(|&q| DeformationParams::q_only(q))
        .collect::<Result<Vec<_>, _>>()
        .map_err(err)?;
    let pq_ladder = [0.1, 0.01, 0.001]
        .iter()
        .map(|&e| DeformationParams::pq(1.0 - e / 2.0, 1.0 - e))
        .collect::<Result<Vec<_>, _>>()
        .map_err(err)?;
    let mut count = 0;
    for z in [0.5, 1.0, -0.5] {
        for mu in [0.0, 0.5] {
            for (label, ladder, nu) in [("q", &q_ladder, 0.0), ("(p,q)", &pq_ladder, mu)] {
                let devs = classical_limit_report(c(z), mu, nu, ladder, &policy).map_err(err)?;
                if !devs.windows(2).all(|w| w[1] < w[0]) {
                    return Err(format!(
                        "{label} ladder at z = {z}, mu = {mu}: deviations {devs:?} not decreasing"
                    ));
                }
                count += 1;
            }
        }
    }
    Ok(format!("{count} ladders strictly decreasing"))
}

fn heine_and_named() -> Check {
    let policy = SeriesPolicy::default();
    let mut r = rng(8);
    let mut heine = 0.0f64;
    for _ in 0..50 {
        let a: f64 = r.gen_range(-0.9..0.9);
        let z: f64 = r.gen_range(-0.5..0.9);
        let q: f64 = r.gen_range(0.05..0.8);
        let lhs = phi_rs(&PhiSpec::basic(vec![a], vec![], q, z), &policy)
            .map_err(|e| e.to_string())?
            .value;
        let rhs = product_loop(a * z, q, 2000) / product_loop(z, q, 2000);
        heine = heine.max(rel(lhs, rhs));
    }
    if !(heine <= 1e-12) {
        return Err(format!("Heine's theorem: worst rel_err {heine:e} > 1e-12"));
    }
    // each entry draws a point and returns (library value, loop sum, loop condition)
    type Draw = Box<dyn FnMut(&mut ChaCha8Rng) -> Result<(f64, f64, f64), String>>;
    let err = |e: qdeform::QError| e.to_string();
    let hahn_exton: Draw = Box::new(move |r| {
        // J_n(z;q) = z^n (q^{n+1};q)_inf/(q;q)_inf sum_k (-1)^k q^{k(k-1)/2} (q z^2)^k / ((q;q)_k (q^{n+1};q)_k)
        let q: f64 = r.gen_range(0.2..0.9);
        let n = r.gen_range(0..6usize);
        let z: f64 = r.gen_range(-1.5..1.5);
        let lib = hahn_exton_bessel(n, c(z), q, &policy).map_err(err)?.value.re;
        let qn1 = q.powi(n as i32 + 1);
        let (sum, cond) = summed((0..200usize).map(|k| {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            sign * q.powi(((k * k - k) / 2) as i32) * (q * z * z).powi(k as i32)
                / (product_loop(q, q, k) * product_loop(qn1, q, k))
        }));
        let brute = z.powi(n as i32) * product_loop(qn1, q, 2000) / product_loop(q, q, 2000) * sum;
        Ok((lib, brute, cond))
    });
    let bessel_2: Draw = Box::new(move |r| {
        // J^(2)_nu(x;q) = sum_m (-1)^m q^{m(m+nu)} (x/2)^{2m+nu} / ((q;q)_m (q;q)_{m+nu})
        let q: f64 = r.gen_range(0.2..0.9);
        let nu = r.gen_range(0..6usize);
        let x: f64 = r.gen_range(-3.0..3.0);
        let lib = q_bessel_2(nu, c(x), q, &policy).map_err(err)?.value.re;
        let (brute, cond) = summed((0..200usize).map(|m| {
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            sign * q.powi((m * (m + nu)) as i32) * (x / 2.0).powi((2 * m + nu) as i32)
                / (product_loop(q, q, m) * product_loop(q, q, m + nu))
        }));
        Ok((lib, brute, cond))
    });
    let jacobi = |big: bool| -> Draw {
        Box::new(move |r| {
            // 3phi2(q^{-n}, q^{n+1} a b, q a z; q a, 0; q, q) and 2phi1(q^{-n}, q^{n+1} a b; q a; q, q z)
            let q: f64 = r.gen_range(0.3..0.9);
            let n = r.gen_range(0..8usize);
            let alpha: f64 = r.gen_range(0.05..0.95);
            let beta: f64 = r.gen_range(0.05..0.95);
            let z: f64 = r.gen_range(0.0..1.0);
            let qmn = q.powi(-(n as i32));
            let ab = q.powi(n as i32 + 1) * alpha * beta;
            let common = |k: usize| {
                product_loop(qmn, q, k) * product_loop(ab, q, k)
                    / (product_loop(q, q, k) * product_loop(q * alpha, q, k))
            };
            if big {
                let lib = big_q_jacobi(n, &z, &alpha, &beta, &q).map_err(err)?;
                let (brute, cond) =
                    summed((0..=n).map(|k| common(k) * product_loop(q * alpha * z, q, k) * q.powi(k as i32)));
                Ok((lib, brute, cond))
            } else {
                let lib = little_q_jacobi(n, &z, &alpha, &beta, &q).map_err(err)?;
                let (brute, cond) = summed((0..=n).map(|k| common(k) * (q * z).powi(k as i32)));
                Ok((lib, brute, cond))
            }
        })
    };
    let named: [(&str, Draw); 4] = [
        ("Hahn-Exton", hahn_exton),
        ("J^(2)", bessel_2),
        ("big q-Jacobi", jacobi(true)),
        ("little q-Jacobi", jacobi(false)),
    ];
    let mut summary = vec![format!("Heine {heine:.1e}")];
    for (name, mut draw) in named {
        let (mut worst, mut accepted, mut redrawn) = (0.0f64, 0, 0);
        while accepted < 20 {
            let (lib, brute, cond) = draw(&mut r)?;
            if !(cond <= MAX_CONDITION) {
                redrawn += 1;
                if redrawn > 1000 {
                    return Err(format!("{name}: too few well-conditioned points"));
                }
                continue;
            }
            accepted += 1;
            worst = worst.max(rel(lib, brute));
        }
        if !(worst <= 1e-13) {
            return Err(format!("{name}: worst rel_err {worst:e} > 1e-13"));
        }
        summary.push(format!("{name} {worst:.1e} ({redrawn} redrawn)"));
    }
    Ok(summary.join(", "))
}

struct Criterion {
    id: u8,
    title: &'static str,
    limit_secs: Option<f64>,
    check: fn() -> Check,
}

const fn criterion(id: u8, title: &'static str, limit_secs: Option<f64>, check: fn() -> Check) -> Criterion {
    Criterion {
        id,
        title,
        limit_secs,
        check,
    }
}

fn main() -> ExitCode {
    let criteria = [
        criterion(1, "exact structural suite", Some(10.0), exact_structural),
        criterion(2, "generating functions", Some(5.0), generating),
        criterion(3, "deformed exponential product forms and aliases", None, product_forms),
        criterion(
            4,
            "matrix elements against the operator oracle",
            Some(30.0),
            matrix_elements,
        ),
        criterion(5, "kernel reductions", None, reductions),
        criterion(6, "Fourier-Gauss transforms", Some(60.0), fourier_gauss),
        criterion(7, "classical limits", None, classical_limits),
        criterion(8, "Heine's theorem and named special functions", None, heine_and_named),
    ];
    let mut failed = 0;
    for Criterion {
        id,
        title,
        limit_secs,
        check,
    } in criteria
    {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let outcome = match (outcome, limit_secs) {
            (Ok(_), Some(secs)) if elapsed > Duration::from_secs_f64(secs) => {
                Err(format!("took {:.2} s, limit {secs} s", elapsed.as_secs_f64()))
            }
            (o, _) => o,
        };
        match outcome {
            Ok(detail) => println!("PASS [{id}] {title}: {detail} ({:.2} s)", elapsed.as_secs_f64()),
            Err(reason) => {
                failed += 1;
                println!("FAIL [{id}] {title}: {reason} ({:.2} s)", elapsed.as_secs_f64());
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
