// Copyright 2026 The coherent-path Authors
// SPDX-License-Identifier: Apache-2.0

//! `cpath`: run coherent-state amplitude pipelines from scenario files.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use coherent_path::diagnostics;
use coherent_path::pipeline::{self, COMPARE_TOL};
use coherent_path::report;
use coherent_path::{Error, Execution, FamilyFile, Scenario};

const EXIT_CHECK: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_VALIDATION: u8 = 3;
const EXIT_NUMERICAL: u8 = 4;

#[derive(Parser)]
#[command(
    name = "cpath",
    version,
    about = "Coherent-state transition amplitudes for quadratic bosonic Hamiltonians"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Worker threads for scenario batches and inner parallel loops.
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form amplitude, saddle data and propagator diagnostics.
    Amplitude(RunArgs),
    /// Green-function, trace, finite-difference and determinant checks.
    Verify(RunArgs),
    /// Closed form against the truncated-Fock and path-integral oracles.
    Compare(RunArgs),
    /// Implementability scan of a mode family.
    Scan(ScanArgs),
    /// Propagator history along the time grid.
    EvolveDump {
        #[command(flatten)]
        run: RunArgs,
        /// Keep every n-th step.
        #[arg(long, default_value_t = 1)]
        stride: usize,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Scenario file; repeat for a batch.
    #[arg(long, required = true)]
    scenario: Vec<PathBuf>,
    /// Directory for per-scenario CSV reports (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long)]
    lambda: Option<f64>,
}

#[derive(Args)]
struct ScanArgs {
    /// Mode-family file.
    #[arg(long)]
    family: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// A failure with the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn from_error(context: &Path, e: Error) -> Self {
        let code = match &e {
            Error::Usage(_) => EXIT_USAGE,
            e if e.is_validation() => EXIT_VALIDATION,
            Error::Io(_) => EXIT_VALIDATION,
            _ => EXIT_NUMERICAL,
        };
        Failure {
            code,
            message: format!("{}: {e}", context.display()),
        }
    }
}

/// Output of one scenario: named CSV files plus a summary line.
struct Outcome {
    files: Vec<(String, Vec<u8>)>,
    summary: String,
    failed: bool,
}

fn load(path: &Path, args: &RunArgs) -> Result<Scenario, Failure> {
    let mut sc = Scenario::load(path).map_err(|e| Failure::from_error(path, e))?;
    if let Some(seed) = args.seed {
        sc.seed = seed;
    }
    if let Some(steps) = args.steps {
        sc.integrator.steps = steps;
    }
    if let Some(lambda) = args.lambda {
        sc.integrator.lambda = lambda;
    }
    Ok(sc)
}

fn run_one(command: &Command, path: &Path, args: &RunArgs) -> Result<Outcome, Failure> {
    let sc = load(path, args)?;
    let fail = |e| Failure::from_error(path, e);
    let name = sc.name.clone();
    match command {
        Command::Amplitude(_) => {
            let r = pipeline::run_amplitude(&sc).map_err(fail)?;
            let a = &r.amplitude;
            let summary = format!(
                "{name}: I = {:+.12e} {:+.12e}i  log I = {:+.12e} {:+.12e}i  defect {:.2e}{}",
                a.value_re,
                a.value_im,
                a.log_re,
                a.log_im,
                a.symplectic_defect,
                if a.overflow {
                    "  (value overflows, use log)"
                } else {
                    ""
                }
            );
            let files = vec![
                (
                    format!("{name}.amplitude.csv"),
                    report::to_csv_string(std::slice::from_ref(a))
                        .map_err(fail)?
                        .into_bytes(),
                ),
                (
                    format!("{name}.saddle.csv"),
                    report::to_csv_string(&r.saddle).map_err(fail)?.into_bytes(),
                ),
            ];
            Ok(Outcome {
                files,
                summary,
                failed: false,
            })
        }
        Command::Verify(_) => {
            let rows = pipeline::run_verify(&sc, Execution::default()).map_err(fail)?;
            let mut summary = String::new();
            for r in &rows {
                summary.push_str(&format!(
                    "{name}: {:<24} {:.3e} (tol {:.0e}) {}\n",
                    r.check,
                    r.residual,
                    r.tolerance,
                    if r.passed { "ok" } else { "FAILED" }
                ));
            }
            summary.pop();
            Ok(Outcome {
                failed: rows.iter().any(|r| !r.passed),
                files: vec![(
                    format!("{name}.verify.csv"),
                    report::to_csv_string(&rows).map_err(fail)?.into_bytes(),
                )],
                summary,
            })
        }
        Command::Compare(_) => {
            let r = pipeline::run_compare(&sc, Execution::default()).map_err(fail)?;
            let failed = !r.agrees(COMPARE_TOL);
            let summary = format!(
                "{name}: closed/fock {:.2e}  closed/pi {:.2e}  fock/pi {:.2e}  fock leak {:.1e}{}",
                r.closed_vs_fock,
                r.closed_vs_pi,
                r.fock_vs_pi,
                r.fock_leak,
                if failed { "  DISAGREE" } else { "" }
            );
            Ok(Outcome {
                files: vec![(
                    format!("{name}.compare.csv"),
                    report::to_csv_string(std::slice::from_ref(&r))
                        .map_err(fail)?
                        .into_bytes(),
                )],
                summary,
                failed,
            })
        }
        Command::EvolveDump { stride, .. } => {
            let bytes = pipeline::run_evolve_dump(&sc, *stride).map_err(fail)?;
            Ok(Outcome {
                files: vec![(format!("{name}.history.csv"), bytes)],
                summary: format!("{name}: history written"),
                failed: false,
            })
        }
        Command::Scan(_) => unreachable!("scan takes a family file"),
    }
}

fn emit(out: Option<&Path>, files: &[(String, Vec<u8>)]) -> Result<(), Failure> {
    match out {
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(|e| Failure::from_error(dir, e.into()))?;
            for (file, bytes) in files {
                let path = dir.join(file);
                report::write_atomic(&path, bytes).map_err(|e| Failure::from_error(&path, e))?;
            }
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            for (_, bytes) in files {
                stdout
                    .write_all(bytes)
                    .map_err(|e| Failure::from_error(Path::new("stdout"), e.into()))?;
            }
        }
    }
    Ok(())
}

fn run_batch(command: &Command, args: &RunArgs) -> Result<(), Failure> {
    let results = Execution::default().map_slice(&args.scenario, |p| run_one(command, p, args));
    let mut worst: Option<Failure> = None;
    let mut checks_failed = Vec::new();
    for (path, r) in args.scenario.iter().zip(results) {
        match r {
            Ok(o) => {
                eprintln!("{}", o.summary);
                emit(args.out.as_deref(), &o.files)?;
                if o.failed {
                    checks_failed.push(path.display().to_string());
                }
            }
            Err(f) => {
                eprintln!("error: {}", f.message);
                if worst.as_ref().is_none_or(|w| f.code > w.code) {
                    worst = Some(f);
                }
            }
        }
    }
    // Everything has been reported above; only the exit code is left.
    if let Some(f) = worst {
        return Err(Failure {
            code: f.code,
            message: String::new(),
        });
    }
    if !checks_failed.is_empty() {
        eprintln!("checks failed: {}", checks_failed.join(", "));
        return Err(Failure {
            code: EXIT_CHECK,
            message: String::new(),
        });
    }
    Ok(())
}

fn run_scan(args: &ScanArgs) -> Result<(), Failure> {
    let fail = |e| Failure::from_error(&args.family, e);
    let file = FamilyFile::load(&args.family).map_err(fail)?;
    let fam = file.family().map_err(fail)?;
    let rows = diagnostics::implementability_scan(&fam, file.horizon).map_err(fail)?;
    for r in &rows {
        eprintln!(
            "{}: K = {:<8} hs {:.6e}  |I(0,0)| {:.6e}  {}",
            fam.name, r.k, r.hs_norm_sq, r.abs_vacuum_amplitude, r.verdict
        );
    }
    if diagnostics::modulus_settles_phase_drifts(&rows, fam.tolerance) {
        eprintln!(
            "{}: |det| has settled but the phase is still moving",
            fam.name
        );
    }
    let bytes = report::to_csv_string(&rows).map_err(fail)?.into_bytes();
    emit(
        args.out.as_deref(),
        &[(format!("{}.scan.csv", fam.name), bytes)],
    )
}

fn configure_pool(jobs: Option<usize>) -> Result<(), Failure> {
    let Some(jobs) = jobs else { return Ok(()) };
    if jobs == 0 {
        return Err(Failure {
            code: EXIT_USAGE,
            message: "--jobs must be at least 1".into(),
        });
    }
    #[cfg(feature = "parallel")]
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build_global()
        .map_err(|e| Failure {
            code: EXIT_USAGE,
            message: e.to_string(),
        })?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    let result = configure_pool(cli.jobs).and_then(|_| match &cli.command {
        Command::Scan(args) => run_scan(args),
        Command::Amplitude(args) | Command::Verify(args) | Command::Compare(args) => {
            run_batch(&cli.command, args)
        }
        Command::EvolveDump { run, .. } => run_batch(&cli.command, run),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            if !f.message.is_empty() {
                eprintln!("error: {}", f.message);
            }
            ExitCode::from(f.code)
        }
    }
}
