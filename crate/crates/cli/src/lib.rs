//! Library side of the `pseudoeig` binary: argument types, matrix I/O, JSON
//! reports and the command implementations. Every command returns its exit
//! code and the text for stdout so it can be tested without a subprocess.

pub mod experiments;
pub mod io;
pub mod report;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pseudoeig::{
    anchor_search_with, certify, numerical_nullity, pseudoeig, refine, AnchorThresholds, CStrategy, ComplexMatrix,
    Error, SolverConfig, C64,
};
use sha2::{Digest, Sha256};

use crate::io::{parse_matrix, Format, ReadError};
use crate::report::{CertificateSummary, Diagnostics, InputDigest, SolutionReport, SolutionSummary, SolveReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_UNSOLVED: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "pseudoeig", version, about = "Multiple eigenvalues of perturbed matrices via pseudo-eigenvalues")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Gauss-Newton solve for a pseudo-eigenvalue with a given multiplicity structure.
    Solve(SolveArgs),
    /// Solve, then orthonormalize the pencil and solve again from there.
    Refine(SolveArgs),
    /// Numerical nullity and Segre anchor sweep at an eigenvalue estimate.
    Identify(IdentifyArgs),
    /// Re-run the reference experiments on the embedded matrices.
    Fixtures(FixturesArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CChoice {
    /// Kernel singular vectors of A - lambda0 I plus a random mix.
    Aligned,
    /// Plain seeded random matrix.
    Random,
}

#[derive(Clone, Debug, Args)]
pub struct MatrixArgs {
    /// Matrix Market array file or CSV.
    #[arg(long)]
    pub matrix: PathBuf,
    /// Input format; guessed from the extension when omitted.
    #[arg(long, value_parser = parse_format)]
    pub format: Option<Format>,
    /// Eigenvalue estimate, `re` or `re,im`.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_lambda)]
    pub lambda0: C64,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = CChoice::Aligned)]
    pub c_choice: CChoice,
    /// Weight of the random part of an aligned `C`.
    #[arg(long, default_value_t = 0.2)]
    pub mix: f64,
    /// Singular value tolerance for the numerical nullity.
    #[arg(long)]
    pub theta: Option<f64>,
    #[arg(long)]
    pub max_iter: Option<usize>,
}

#[derive(Clone, Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub common: MatrixArgs,
    /// Geometric multiplicity.
    #[arg(long)]
    pub m: usize,
    /// Segre anchor (size of the largest Jordan block).
    #[arg(long)]
    pub k: usize,
    /// Orthonormalize the converged pencil and solve once more.
    #[arg(long)]
    pub orthonormalize: bool,
    /// Add a backward-error certificate to the report.
    #[arg(long)]
    pub certify: bool,
    /// Check the Jacobian against finite differences first.
    #[arg(long)]
    pub fd_check: bool,
}

#[derive(Clone, Debug, Args)]
pub struct IdentifyArgs {
    #[command(flatten)]
    pub common: MatrixArgs,
    #[arg(long, default_value_t = 8)]
    pub kmax: usize,
    /// Residuals at or below this count as zero; default `1e3 eps ||A||_F`.
    #[arg(long)]
    pub resid_floor: Option<f64>,
    #[arg(long)]
    pub cond_threshold: Option<f64>,
    #[arg(long)]
    pub jump_factor: Option<f64>,
}

#[derive(Clone, Debug, Args)]
pub struct FixturesArgs {
    /// One of grid20, jbiteA, jbiteA-perturbed, example4, matrixB, or all.
    #[arg(long, default_value = "all")]
    pub name: String,
    /// Print JSON instead of a table.
    #[arg(long)]
    pub json: bool,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
}

/// Exit code and stdout text of one command.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
}

impl Outcome {
    fn report(code: i32, report: &SolveReport) -> Self {
        Self {
            code,
            stdout: report.to_json(),
        }
    }
}

fn parse_format(s: &str) -> Result<Format, String> {
    s.parse()
}

pub fn parse_lambda(s: &str) -> Result<C64, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |t: &str| t.parse::<f64>().map_err(|e| format!("'{t}': {e}"));
    let z = match parts.as_slice() {
        [re] => C64::new(num(re)?, 0.0),
        [re, im] => C64::new(num(re)?, num(im)?),
        _ => return Err(format!("expected 're' or 're,im', got '{s}'")),
    };
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(format!("lambda0 must be finite, got '{s}'"))
    }
}

pub fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Solve(args) => solve(&args, false),
        Command::Refine(args) => solve(&args, true),
        Command::Identify(args) => identify(&args),
        Command::Fixtures(args) => fixtures(&args),
    }
}

struct Loaded {
    a: ComplexMatrix,
    sha256: String,
}

fn load(args: &MatrixArgs) -> Result<Loaded, ReadError> {
    let bytes = std::fs::read(&args.matrix).map_err(|source| ReadError::Io {
        path: args.matrix.display().to_string(),
        source,
    })?;
    let text = String::from_utf8(bytes.clone()).map_err(|e| ReadError::Parse {
        line: 0,
        message: format!("input is not UTF-8: {e}"),
    })?;
    let format = args.format.unwrap_or_else(|| Format::from_path(&args.matrix));
    let a = parse_matrix(&text, format)?;
    Ok(Loaded {
        a,
        sha256: hex::encode(Sha256::digest(&bytes)),
    })
}

fn config(args: &MatrixArgs) -> SolverConfig {
    let strategy = match args.c_choice {
        CChoice::Aligned => CStrategy::KernelAligned { mix: args.mix },
        CChoice::Random => CStrategy::Random,
    };
    let mut cfg = SolverConfig::default().with_seed(args.seed).with_c_strategy(strategy);
    if let Some(t) = args.theta {
        cfg = cfg.with_theta(t);
    }
    if let Some(it) = args.max_iter {
        cfg.max_iter = it;
    }
    cfg
}

fn c_choice_label(args: &MatrixArgs) -> String {
    match args.c_choice {
        CChoice::Aligned => format!("aligned(mix={})", args.mix),
        CChoice::Random => "random".into(),
    }
}

fn digest(args: &MatrixArgs, loaded: &Loaded, cfg: &SolverConfig, m: Option<usize>, k: Option<usize>) -> InputDigest {
    InputDigest {
        source: args.matrix.display().to_string(),
        rows: loaded.a.rows(),
        cols: loaded.a.cols(),
        sha256: Some(loaded.sha256.clone()),
        lambda0: args.lambda0.into(),
        m,
        k,
        seed: args.seed,
        theta: cfg.theta_for(&loaded.a),
        c_choice: c_choice_label(args),
    }
}

/// Caller mistakes exit with 1, numerical failures with 2.
fn solver_failure(e: &Error, mut report: SolveReport) -> Outcome {
    let (code, kind) = match e {
        Error::InvalidArgument(_) | Error::NonFinite { .. } | Error::Dimension(_) | Error::LengthMismatch { .. } => {
            (EXIT_INPUT, "argument")
        }
        _ => (EXIT_UNSOLVED, "solver"),
    };
    report.error = SolveReport::from_error(kind, e.to_string()).error;
    Outcome::report(code, &report)
}

fn read_failure(e: &ReadError) -> Outcome {
    Outcome::report(EXIT_INPUT, &SolveReport::from_error(e.kind(), e.to_string()))
}

pub fn solve(args: &SolveArgs, always_refine: bool) -> Outcome {
    let loaded = match load(&args.common) {
        Ok(l) => l,
        Err(e) => return read_failure(&e),
    };
    let mut cfg = config(&args.common);
    cfg.fd_check = args.fd_check;
    let mut report = SolveReport {
        input: Some(digest(&args.common, &loaded, &cfg, Some(args.m), Some(args.k))),
        ..SolveReport::default()
    };
    let a = &loaded.a;
    let first = match pseudoeig(a, args.common.lambda0, args.m, args.k, &cfg) {
        Ok(s) => s,
        Err(e) => return solver_failure(&e, report),
    };
    let sol = if always_refine || args.orthonormalize {
        match refine(a, &first, &cfg) {
            Ok(r) => {
                report.unrefined = Some(SolutionSummary::from(&first));
                r
            }
            Err(e) => {
                report.solution = Some(SolutionReport::from(&first));
                return solver_failure(&e, report);
            }
        }
    } else {
        first
    };
    if args.certify && sol.converged {
        match certify(a, &sol) {
            Ok(c) => report.certificate = Some(CertificateSummary::from(&c)),
            Err(e) => {
                report.solution = Some(SolutionReport::from(&sol));
                return solver_failure(&e, report);
            }
        }
    }
    let code = if sol.converged { EXIT_OK } else { EXIT_UNSOLVED };
    report.solution = Some(SolutionReport::from(&sol));
    Outcome::report(code, &report)
}

pub fn identify(args: &IdentifyArgs) -> Outcome {
    let loaded = match load(&args.common) {
        Ok(l) => l,
        Err(e) => return read_failure(&e),
    };
    let cfg = config(&args.common);
    let a = &loaded.a;
    let mut report = SolveReport {
        input: Some(digest(&args.common, &loaded, &cfg, None, None)),
        ..SolveReport::default()
    };
    if let Err(e) = cfg.validate() {
        return solver_failure(&e, report);
    }
    let m = match numerical_nullity(a, args.common.lambda0, cfg.theta_for(a)) {
        Ok(m) => m,
        Err(e) => return solver_failure(&e, report),
    };
    if let Some(input) = report.input.as_mut() {
        input.m = Some(m);
    }
    if m == 0 {
        report.error = SolveReport::from_error(
            "solver",
            "numerical nullity is 0: lambda0 is not within theta of an eigenvalue",
        )
        .error;
        return Outcome::report(EXIT_UNSOLVED, &report);
    }
    let mut thresholds = AnchorThresholds::for_matrix(a);
    if let Some(f) = args.resid_floor {
        thresholds = thresholds.with_resid_floor(f);
    }
    if let Some(c) = args.cond_threshold {
        thresholds.cond_threshold = c;
    }
    if let Some(j) = args.jump_factor {
        thresholds.jump_factor = j;
    }
    match anchor_search_with(a, args.common.lambda0, m, args.kmax, &cfg, &thresholds) {
        Ok((k, diag)) => {
            if let Some(input) = report.input.as_mut() {
                input.k = k;
            }
            report.diagnostics = Some(Diagnostics::new(k, &diag));
            let code = if k.is_some() { EXIT_OK } else { EXIT_UNSOLVED };
            Outcome::report(code, &report)
        }
        Err(e) => solver_failure(&e, report),
    }
}

pub fn fixtures(args: &FixturesArgs) -> Outcome {
    let cfg = SolverConfig::default().with_seed(args.seed);
    let table = if args.name == "all" {
        experiments::run_all(&cfg)
    } else {
        match experiments::run(&args.name, &cfg) {
            Some(f) => experiments::FixtureTable {
                pass: f.pass,
                fixtures: vec![f],
            },
            None => {
                let message = format!(
                    "unknown fixture '{}' (expected one of {} or all)",
                    args.name,
                    experiments::NAMES.join(", ")
                );
                return Outcome::report(EXIT_INPUT, &SolveReport::from_error("argument", message));
            }
        }
    };
    let stdout = if args.json {
        serde_json::to_string_pretty(&table).expect("fixture tables serialize")
    } else {
        experiments::render(&table)
    };
    Outcome {
        code: if table.pass { EXIT_OK } else { EXIT_UNSOLVED },
        stdout,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lambda_forms() {
        assert_eq!(parse_lambda("2").unwrap(), C64::new(2.0, 0.0));
        assert_eq!(parse_lambda("-1.5, 0.25").unwrap(), C64::new(-1.5, 0.25));
        assert!(parse_lambda("1,2,3").is_err());
        assert!(parse_lambda("nan").is_err());
        assert!(parse_lambda("x").is_err());
    }

    #[test]
    fn negative_lambda_is_not_a_flag() {
        let cli = Cli::try_parse_from([
            "pseudoeig", "solve", "--matrix", "a.mtx", "--lambda0", "-2,1", "--m", "1", "--k", "2",
        ])
        .unwrap();
        let Command::Solve(args) = cli.command else { panic!("wrong subcommand") };
        assert_eq!(args.common.lambda0, C64::new(-2.0, 1.0));
        assert_eq!(args.common.seed, 42);
        assert_eq!(args.common.c_choice, CChoice::Aligned);
    }

    #[test]
    fn unknown_fixture_is_an_input_error() {
        let out = fixtures(&FixturesArgs {
            name: "nope".into(),
            json: false,
            seed: 42,
        });
        assert_eq!(out.code, EXIT_INPUT);
        assert!(out.stdout.contains("\"argument\""));
    }
}
