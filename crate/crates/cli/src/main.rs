use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use paracalc_core::{
    run_convergence, run_suite, ConvergenceRow, FieldKind, Suite, SuiteConfig, SuiteReport,
};

#[derive(Parser, Debug)]
#[command(
    name = "paracalc",
    version,
    about = "Residual checks for paravector calculus identities"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a verification suite and report per-case residuals.
    Check(CheckArgs),
    /// Tabulate finite-difference error against step size.
    Convergence(ConvergenceArgs),
}

#[derive(clap::Args, Debug)]
struct CheckArgs {
    /// algebra, diffop, transforms, wave, maxwell or all
    suite: String,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 50)]
    samples: usize,
    #[arg(long, default_value_t = 1e-10)]
    tol_exact: f64,
    #[arg(long, default_value_t = 1e-5)]
    tol_numeric: f64,
    /// Central-difference step
    #[arg(long, default_value_t = 1e-5)]
    step: f64,
    #[arg(long)]
    json: bool,
    /// Also print the worst residual components of each case
    #[arg(long)]
    verbose: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FieldArg {
    Poly,
    Planewave,
}

#[derive(clap::Args, Debug)]
struct ConvergenceArgs {
    #[arg(long, value_enum)]
    field: FieldArg,
    /// Strictly decreasing step sizes
    #[arg(long, value_delimiter = ',', required = true)]
    steps: Vec<f64>,
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

const EXIT_FAIL: u8 = 1;
const EXIT_CONFIG: u8 = 2;

fn print_table(report: &SuiteReport, verbose: bool) {
    let width = report
        .cases
        .iter()
        .map(|c| c.name.len())
        .max()
        .unwrap_or(4)
        .max(4);
    println!(
        "suite {}  seed {}  samples {}  tol-exact {:e}  tol-numeric {:e}  step {:e}",
        report.suite,
        report.seed,
        report.samples,
        report.tolerances.exact,
        report.tolerances.numeric,
        report.tolerances.step
    );
    println!(
        "{:<width$}  {:>12}  {:>12}  result",
        "case", "residual", "threshold"
    );
    for c in &report.cases {
        println!(
            "{:<width$}  {:>12.3e}  {:>12.3e}  {}",
            c.name,
            c.residual,
            c.threshold,
            if c.pass { "PASS" } else { "FAIL" }
        );
        if verbose {
            if let Some(w) = c.worst {
                println!("{:<width$}    worst components {}", "", w.as_paravector());
            }
        }
    }
    println!("{} passed, {} failed", report.passed, report.failed);
}

fn print_convergence(rows: &[ConvergenceRow]) {
    println!(
        "{:>12}  {:>12}  {:>10}  {:>10}",
        "h", "max_error", "ratio", "expected"
    );
    for r in rows {
        let fmt = |v: Option<f64>| v.map_or_else(|| "n/a".to_string(), |x| format!("{x:.4}"));
        println!(
            "{:>12.3e}  {:>12.3e}  {:>10}  {:>10}",
            r.h,
            r.max_error,
            fmt(r.ratio),
            fmt(r.expected_ratio)
        );
    }
}

fn check(args: CheckArgs) -> ExitCode {
    let suite: Suite = match args.suite.parse() {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    let cfg = SuiteConfig {
        suite,
        seed: args.seed,
        samples: args.samples,
        tol_exact: args.tol_exact,
        tol_numeric: args.tol_numeric,
        h: args.step,
        json: args.json,
        verbose: args.verbose,
    };
    let report = match run_suite(&cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    if cfg.json {
        print!("{}", report.to_json());
    } else {
        print_table(&report, cfg.verbose);
    }
    if report.all_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAIL)
    }
}

fn convergence(args: ConvergenceArgs) -> ExitCode {
    let kind = match args.field {
        FieldArg::Poly => FieldKind::Poly,
        FieldArg::Planewave => FieldKind::PlaneWave,
    };
    match run_convergence(kind, &args.steps, args.seed) {
        Ok(rows) => {
            print_convergence(&rows);
            if rows.iter().all(ConvergenceRow::within_band) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_FAIL)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_CONFIG)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_CONFIG)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match cli.command {
        Command::Check(args) => check(args),
        Command::Convergence(args) => convergence(args),
    }
}
