use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use ppi_core::canon::{halmos_wallen, normalize_staircase, staircase_form};
use ppi_core::io::{parse_eigenvalues, profile_to_csv, read_matrix, write_matrix};
use ppi_core::isometry::analyze;
use ppi_core::numrange::{boundary_points, is_disc_at_origin};
use ppi_core::repro::repro;
use ppi_core::snmat::{is_sn, search_pa, sn_from_eigenvalues};
use ppi_core::{Error, Matrix, Tolerance};

const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;

/// Power partial isometries, canonical forms and numerical ranges.
#[derive(Parser)]
#[command(name = "ppi", version)]
struct Cli {
    /// Absolute tolerance, in (0, 1e-4].
    #[arg(long, global = true, default_value_t = 1e-10, value_parser = parse_tol)]
    tol: f64,
    /// Machine output only; suppresses the summary on stderr.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for randomized searches.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Ascent, index, partial-isometry chain and unitary part.
    Analyze { matrix: PathBuf },
    /// Staircase, normalized staircase or Halmos–Wallen form.
    Canon {
        matrix: PathBuf,
        /// Number of leading powers required to be partial isometries.
        #[arg(long)]
        ell: Option<usize>,
        #[arg(long, value_enum, default_value_t = CanonMode::Staircase)]
        mode: CanonMode,
    },
    /// Support function of the numerical range.
    Wrange {
        matrix: PathBuf,
        #[arg(long, default_value_t = 720)]
        samples: usize,
        /// Boundary CSV with columns theta,r,re_z,im_z.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Decide whether the numerical range is a disc centred at 0.
        #[arg(long)]
        disc_test: bool,
    },
    /// S_n matrices.
    #[command(subcommand)]
    Sn(SnCommand),
    /// Search for a matrix with prescribed index and ascent.
    Search {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        j: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
    },
    /// Replay a worked example by id: 2.7, 3.5 or 3.6.
    Repro { example: String },
}

#[derive(Subcommand)]
enum SnCommand {
    /// Build an S_n matrix with the given eigenvalues.
    Make {
        #[arg(long)]
        eigs: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Test membership in S_n.
    Check { matrix: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum CanonMode {
    Staircase,
    Normalized,
    HalmosWallen,
}

fn parse_tol(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    Tolerance::with_abs(v).map(|t| t.abs).map_err(|e| e.to_string())
}

struct Outcome {
    report: Value,
    summary: Vec<(String, String)>,
    pass: bool,
}

impl Outcome {
    fn ok(report: Value) -> Self {
        Self { report, summary: Vec::new(), pass: true }
    }

    fn line(mut self, key: &str, value: impl ToString) -> Self {
        self.summary.push((key.to_owned(), value.to_string()));
        self
    }
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report serialization")
}

fn load(path: &Path) -> Result<Matrix, Error> {
    read_matrix(path)
}

fn run(cli: &Cli) -> Result<Outcome, Error> {
    let tol = Tolerance::with_abs(cli.tol)?;
    match &cli.command {
        Command::Analyze { matrix } => {
            let a = load(matrix)?;
            let r = analyze(&a, &tol)?;
            Ok(Outcome::ok(to_value(&r))
                .line("n", r.n)
                .line("ascent", r.ascent)
                .line("ppi_index", r.ppi_index)
                .line("norm", format!("{:.6}", r.norm)))
        }
        Command::Canon { matrix, ell, mode } => {
            let a = load(matrix)?;
            let ell = ell.unwrap_or(a.rows().max(1));
            match mode {
                CanonMode::Staircase => {
                    let sf = staircase_form(&a, ell, &tol)?;
                    Ok(Outcome::ok(to_value(&sf))
                        .line("levels", sf.k)
                        .line("sizes", format!("{:?}", sf.sizes))
                        .line("core", sf.core_size)
                        .line("residual", format!("{:.3e}", sf.residual)))
                }
                CanonMode::Normalized => {
                    let ns = normalize_staircase(&staircase_form(&a, ell, &tol)?)?;
                    Ok(Outcome::ok(to_value(&ns))
                        .line("sizes", format!("{:?}", ns.staircase.sizes))
                        .line("tail_blocks", format!("{:?}", ns.tail.block_sizes))
                        .line("residual", format!("{:.3e}", ns.residual)))
                }
                CanonMode::HalmosWallen => {
                    let js = halmos_wallen(&a, &tol)?;
                    Ok(Outcome::ok(to_value(&js))
                        .line("unitary_dim", js.unitary_dim())
                        .line("jordan_blocks", format!("{:?}", js.block_sizes))
                        .line("residual", format!("{:.3e}", js.residual)))
                }
            }
        }
        Command::Wrange { matrix, samples, out, disc_test } => {
            let a = load(matrix)?;
            let profile = boundary_points(&a, *samples)?;
            if let Some(path) = out {
                std::fs::write(path, profile_to_csv(&profile))
                    .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
            }
            let mut report = json!({ "profile": profile });
            let mut outcome_lines = vec![
                ("samples".to_owned(), profile.n_samples.to_string()),
                ("numerical_radius".to_owned(), format!("{:.12}", profile.r_max)),
                ("min_support".to_owned(), format!("{:.12}", profile.r_min_over_theta)),
            ];
            if *disc_test {
                let cert = is_disc_at_origin(&a, &tol)?;
                outcome_lines.push(("verdict".to_owned(), to_value(&cert.verdict).to_string()));
                outcome_lines.push(("method".to_owned(), to_value(&cert.method).to_string()));
                report["certificate"] = to_value(&cert);
            }
            let mut o = Outcome::ok(report);
            o.summary = outcome_lines;
            Ok(o)
        }
        Command::Sn(SnCommand::Make { eigs, output }) => {
            let text = std::fs::read_to_string(eigs).map_err(|e| Error::Parse(format!("{}: {e}", eigs.display())))?;
            let lams = parse_eigenvalues(&text)?;
            let a = sn_from_eigenvalues(&lams, &tol)?;
            if let Some(path) = output {
                write_matrix(path, &a)?;
            }
            let report = is_sn(&a, &tol)?;
            let mut o = Outcome::ok(json!({ "matrix": a, "report": report }))
                .line("n", report.n)
                .line("is_sn", report.is_sn);
            o.pass = report.is_sn;
            Ok(o)
        }
        Command::Sn(SnCommand::Check { matrix }) => {
            let a = load(matrix)?;
            let report = is_sn(&a, &tol)?;
            let mut o = Outcome::ok(to_value(&report))
                .line("n", report.n)
                .line("contraction", report.is_contraction)
                .line("eigenvalues_in_open_disc", report.eigenvalues_in_open_disc)
                .line("defect_rank", report.defect_rank)
                .line("is_sn", report.is_sn);
            o.pass = report.is_sn;
            Ok(o)
        }
        Command::Search { n, j, k, trials } => {
            let r = search_pa(*n, *j, *k, *trials, cli.seed, &tol)?;
            let mut o = Outcome::ok(to_value(&r)).line("status", r.status).line("trials_run", r.trials_run);
            o.pass = r.found();
            Ok(o)
        }
        Command::Repro { example } => {
            let r = repro(example, &tol)?;
            let mut o = Outcome::ok(to_value(&r));
            for c in &r.checks {
                o = o.line(&c.name, if c.pass { "pass" } else { "FAIL" });
            }
            o.pass = r.all_pass;
            Ok(o)
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        _ if e.is_numerical() => EXIT_NUMERICAL,
        Error::NotPowerPartialIsometry { .. }
        | Error::NotInfiniteIndex { .. }
        | Error::NotSn(_)
        | Error::Invertible
        | Error::NotAContraction { .. }
        | Error::NotIsometric { .. } => EXIT_CHECK_FAILED,
        _ => EXIT_USAGE,
    }
}

fn emit(v: &Value) {
    let _ = writeln!(std::io::stdout().lock(), "{v}");
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            emit(&outcome.report);
            if !cli.json {
                let width = outcome.summary.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
                let mut err = std::io::stderr().lock();
                for (k, v) in &outcome.summary {
                    let _ = writeln!(err, "{k:<width$}  {v}");
                }
            }
            if outcome.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_CHECK_FAILED)
            }
        }
        Err(e) => {
            let code = exit_code(&e);
            emit(&json!({ "error": e.to_string(), "exit_code": code }));
            eprintln!("error: {e}");
            ExitCode::from(code)
        }
    }
}
