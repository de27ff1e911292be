//! Command-line front end: `eval`, `table` and `verify`.

mod functions;
mod parse;

use std::collections::BTreeMap;
use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qdeform::par::Execution;
use qdeform::verify::{run_suite, Suite, SuiteOptions};
use qdeform::{QError, SeriesPolicy};
use serde_json::json;

use functions::{evaluate, EvalError, Function};
use parse::expand_axis;

const EXIT_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_NON_CONVERGENCE: u8 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "qdeform",
    version,
    about = "Evaluate and verify q-deformed special functions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate one function and print a JSON result
    Eval {
        #[command(flatten)]
        call: Call,
    },
    /// Tabulate a function over a parameter grid as CSV
    Table {
        #[command(flatten)]
        call: Call,
    },
    /// Run an identity suite and print the JSON report array
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
struct Call {
    #[arg(long = "fn", value_enum)]
    func: Function,
    #[arg(long, allow_hyphen_values = true)]
    z: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    y: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    x: Option<String>,
    #[arg(long)]
    q: Option<String>,
    #[arg(long)]
    p: Option<String>,
    #[arg(long)]
    mu: Option<String>,
    #[arg(long)]
    nu: Option<String>,
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    m: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<String>,
    #[arg(long)]
    gamma: Option<String>,
    /// comma-separated upper parameters (base q)
    #[arg(long, allow_hyphen_values = true)]
    upper: Option<String>,
    /// comma-separated lower parameters (base q)
    #[arg(long, allow_hyphen_values = true)]
    lower: Option<String>,
    /// comma-separated upper parameters on the second base
    #[arg(long = "upper-p", allow_hyphen_values = true)]
    upper_p: Option<String>,
    /// comma-separated lower parameters on the second base
    #[arg(long = "lower-p", allow_hyphen_values = true)]
    lower_p: Option<String>,
    #[arg(long = "rel-tol", default_value_t = 1e-14)]
    rel_tol: f64,
    #[arg(long = "max-terms", default_value_t = 10_000)]
    max_terms: usize,
}

impl Call {
    fn values(&self) -> BTreeMap<&'static str, String> {
        let pairs: [(&'static str, &Option<String>); 16] = [
            ("z", &self.z),
            ("y", &self.y),
            ("x", &self.x),
            ("q", &self.q),
            ("p", &self.p),
            ("mu", &self.mu),
            ("nu", &self.nu),
            ("n", &self.n),
            ("m", &self.m),
            ("alpha", &self.alpha),
            ("beta", &self.beta),
            ("gamma", &self.gamma),
            ("upper", &self.upper),
            ("lower", &self.lower),
            ("upper-p", &self.upper_p),
            ("lower-p", &self.lower_p),
        ];
        pairs
            .into_iter()
            .filter_map(|(k, v)| v.clone().map(|v| (k, v)))
            .collect()
    }

    fn policy(&self) -> Result<SeriesPolicy, QError> {
        SeriesPolicy::new(self.rel_tol, self.max_terms, SeriesPolicy::default().consecutive_small)
    }
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// suite name, or `all`
    #[arg(long)]
    suite: String,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long = "max-n")]
    max_n: Option<usize>,
    /// run structural suites in exact rational arithmetic
    #[arg(long)]
    exact: bool,
    /// worker threads for the parallel sweeps
    #[arg(long)]
    threads: Option<usize>,
    /// evaluate suite items one after another
    #[arg(long)]
    sequential: bool,
}

fn error_json(kind: &str, message: &str) -> String {
    serde_json::to_string(&json!({ "error": { "kind": kind, "message": message } })).expect("static JSON shape")
}

fn exit_for(e: &QError) -> u8 {
    match e {
        QError::NonConvergence { .. } | QError::NonFinite(_) => EXIT_NON_CONVERGENCE,
        _ => EXIT_USAGE,
    }
}

fn report_eval_error(e: EvalError) -> ExitCode {
    match e {
        EvalError::Usage(msg) => {
            println!("{}", error_json("usage", &msg));
            ExitCode::from(EXIT_USAGE)
        }
        EvalError::Library(e) => {
            println!("{}", error_json(e.kind(), &e.to_string()));
            ExitCode::from(exit_for(&e))
        }
    }
}

fn cmd_eval(call: &Call) -> ExitCode {
    let policy = match call.policy() {
        Ok(p) => p,
        Err(e) => return report_eval_error(e.into()),
    };
    match evaluate(call.func, &call.values(), &policy) {
        Ok(out) => {
            println!("{}", serde_json::to_string(&out).expect("finite output serializes"));
            ExitCode::SUCCESS
        }
        Err(e) => report_eval_error(e),
    }
}

fn cmd_table(call: &Call) -> ExitCode {
    let policy = match call.policy() {
        Ok(p) => p,
        Err(e) => return report_eval_error(e.into()),
    };
    let given = call.values();
    let mut columns = Vec::new();
    let mut axes = Vec::new();
    for &name in call.func.parameters() {
        let Some(raw) = given.get(name) else { continue };
        // list-valued parameters are passed through unexpanded
        let values = if matches!(name, "upper" | "lower" | "upper-p" | "lower-p") {
            Ok(vec![raw.clone()])
        } else {
            expand_axis(raw)
        };
        match values {
            Ok(v) => {
                columns.push(name);
                axes.push(v);
            }
            Err(msg) => return report_eval_error(EvalError::Usage(msg)),
        }
    }
    let mut rows: Vec<Vec<String>> = vec![Vec::new()];
    for axis in &axes {
        rows = rows
            .into_iter()
            .flat_map(|row| {
                axis.iter().map(move |v| {
                    let mut r = row.clone();
                    r.push(v.clone());
                    r
                })
            })
            .collect();
    }
    let mut out = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<String> = columns.iter().map(|s| s.to_string()).collect();
    header.extend(["re".to_string(), "im".to_string()]);
    out.write_record(&header).expect("in-memory CSV");
    for row in rows {
        let values: BTreeMap<&'static str, String> = columns.iter().copied().zip(row.iter().cloned()).collect();
        match evaluate(call.func, &values, &policy) {
            Ok(v) => {
                let mut record = row.clone();
                record.push(format!("{:.16e}", v.value.re));
                record.push(format!("{:.16e}", v.value.im));
                out.write_record(&record).expect("in-memory CSV");
            }
            Err(e) => {
                eprintln!("row {row:?} failed");
                return report_eval_error(e);
            }
        }
    }
    let bytes = out.into_inner().expect("in-memory CSV");
    let _ = std::io::stdout().write_all(&bytes);
    ExitCode::SUCCESS
}

fn cmd_verify(args: &VerifyArgs) -> ExitCode {
    let suites: Vec<Suite> = if args.suite == "all" {
        Suite::ALL.to_vec()
    } else {
        match args.suite.parse() {
            Ok(s) => vec![s],
            Err(e) => {
                println!("{}", error_json("usage", &QError::to_string(&e)));
                return ExitCode::from(EXIT_USAGE);
            }
        }
    };
    if let Some(threads) = args.threads {
        if threads == 0 {
            println!("{}", error_json("usage", "--threads must be at least 1"));
            return ExitCode::from(EXIT_USAGE);
        }
        #[cfg(feature = "parallel")]
        {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
        }
    }
    let opts = SuiteOptions {
        seed: args.seed,
        tol: args.tol,
        max_n: args.max_n,
        exact: args.exact,
        execution: if args.sequential || !Execution::parallel_available() {
            Execution::Sequential
        } else {
            Execution::Parallel
        },
    };
    let mut reports = Vec::new();
    for suite in suites {
        match run_suite(suite, &opts) {
            Ok(r) => reports.extend(r),
            Err(e) => {
                println!("{}", error_json(e.kind(), &e.to_string()));
                return ExitCode::from(exit_for(&e));
            }
        }
    }
    println!("{}", serde_json::to_string_pretty(&reports).expect("reports serialize"));
    if reports.iter().all(|r| r.passed) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAILED)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e)
            if matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            ) =>
        {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            println!("{}", error_json("usage", e.to_string().trim()));
            return ExitCode::from(EXIT_USAGE);
        }
    };
    match &cli.command {
        Command::Eval { call } => cmd_eval(call),
        Command::Table { call } => cmd_table(call),
        Command::Verify(args) => cmd_verify(args),
    }
}
