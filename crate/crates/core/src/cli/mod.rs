//! Command-line front end. [`run`] parses arguments, resolves the config,
//! runs one experiment and returns the process exit code:
//! 0 on success, 1 for invalid arguments or configs, 2 for runtime failures.

pub mod config;
pub mod selftest;

use std::ffi::OsString;
use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::experiments::adiabatic::{OMEGA_FACTOR, STEP_FRACTION};
use crate::experiments::manifest::{digest_file, FileDigest, Manifest, RunStatus};
use crate::experiments::{
    run_adiabatic_check, run_capacity_experiment, run_classification_experiment, run_effective_dimension_sweep,
    run_unitary_learning_experiment, Progress,
};
pub use config::ExperimentConfig;

#[derive(Debug, Parser)]
#[command(name = "sqpnet", version, about = "Quantum perceptron network experiments")]
pub struct Cli {
    /// JSON config file; omitted keys take their defaults.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Master seed, overriding the config.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output directory (default `results/<subcommand>`).
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..=1024))]
    pub jobs: Option<u64>,
    /// Suppress progress messages on stderr.
    #[arg(long, short, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Normalized effective dimension over a sweep of matched networks.
    Effdim,
    /// Final training loss on random labels with both feature maps.
    Capacity,
    /// Iris classification with multi-restart training.
    Classify,
    /// Learning Ising and Haar target unitaries from state pairs.
    UnitaryLearn,
    /// Adiabatic ramp against the closed-form perceptron gate.
    AdiabaticCheck,
    /// Fast invariant checks.
    Selftest,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Effdim => "effdim",
            Command::Capacity => "capacity",
            Command::Classify => "classify",
            Command::UnitaryLearn => "unitary-learn",
            Command::AdiabaticCheck => "adiabatic-check",
            Command::Selftest => "selftest",
        }
    }
}

/// Entry point shared by the binary and the tests.
pub fn run<I, A>(args: I) -> i32
where
    I: IntoIterator<Item = A>,
    A: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    if cli.command == Command::Selftest {
        return run_selftest(cli.quiet);
    }
    let resolved = match resolve(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };
    match execute(&cli, resolved) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn run_selftest(quiet: bool) -> i32 {
    let checks = selftest::run_selftest();
    let mut failed = 0;
    for c in &checks {
        if !c.passed {
            failed += 1;
        }
        if !quiet || !c.passed {
            println!("{} {}: {}", if c.passed { "ok  " } else { "FAIL" }, c.name, c.detail);
        }
    }
    if failed == 0 {
        0
    } else {
        eprintln!("{failed} of {} checks failed", checks.len());
        2
    }
}

enum Resolved {
    Effdim(crate::experiments::EffDimSweepConfig),
    Capacity(crate::experiments::CapacityConfig),
    Classify(crate::experiments::ClassifyConfig),
    Unitary(crate::experiments::UnitaryConfig),
    Adiabatic(crate::experiments::AdiabaticCheckConfig),
}

impl Resolved {
    fn seed(&self) -> u64 {
        match self {
            Resolved::Effdim(c) => c.seed,
            Resolved::Capacity(c) => c.seed,
            Resolved::Classify(c) => c.seed,
            Resolved::Unitary(c) => c.seed,
            Resolved::Adiabatic(c) => c.seed,
        }
    }

    fn echo(&self) -> Result<serde_json::Value> {
        fn v<T: Serialize>(t: &T) -> Result<serde_json::Value> {
            Ok(serde_json::to_value(t)?)
        }
        match self {
            Resolved::Effdim(c) => v(c),
            Resolved::Capacity(c) => v(c),
            Resolved::Classify(c) => v(c),
            Resolved::Unitary(c) => v(c),
            Resolved::Adiabatic(c) => v(c),
        }
    }
}

fn resolve(cli: &Cli) -> Result<(Resolved, PathBuf)> {
    let mut cfg = match &cli.config {
        Some(p) => ExperimentConfig::load(p)?,
        None => ExperimentConfig::default(),
    };
    if cli.seed.is_some() {
        cfg.seed = cli.seed;
    }
    let resolved = match cli.command {
        Command::Effdim => Resolved::Effdim(cfg.effdim()?),
        Command::Capacity => Resolved::Capacity(cfg.capacity()?),
        Command::Classify => Resolved::Classify(cfg.classify()?),
        Command::UnitaryLearn => Resolved::Unitary(cfg.unitary()?),
        Command::AdiabaticCheck => Resolved::Adiabatic(cfg.adiabatic()?),
        Command::Selftest => unreachable!("handled before resolution"),
    };
    let out = cli
        .out
        .clone()
        .unwrap_or_else(|| Path::new("results").join(cli.command.name()));
    std::fs::create_dir_all(&out).map_err(|e| Error::io(&out, e))?;
    Ok((resolved, out))
}

fn write_csv(out: &Path, name: &str, f: impl FnOnce(BufWriter<File>) -> Result<()>) -> Result<FileDigest> {
    let path = out.join(name);
    let file = File::create(&path).map_err(|e| Error::io(&path, e))?;
    f(BufWriter::new(file))?;
    let mut d = digest_file(&path)?;
    d.path = name.to_string();
    Ok(d)
}

fn execute(cli: &Cli, (resolved, out): (Resolved, PathBuf)) -> Result<()> {
    let start = Instant::now();
    let jobs = match cli.jobs {
        Some(j) => j as usize,
        None => std::thread::available_parallelism().map_or(1, |n| n.get()),
    };
    let manifest_path = out.join("manifest.json");
    let mut manifest = Manifest::new(cli.command.name(), resolved.seed(), jobs, resolved.echo()?);
    manifest.write(&manifest_path)?;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::InvalidNetwork(format!("thread pool: {e}")))?;
    let progress = if cli.quiet {
        Progress::silent()
    } else {
        Progress::stderr(Duration::from_secs(5))
    };
    let result = pool.install(|| run_experiment(&resolved, &out, &progress, &mut manifest));

    manifest.wall_clock_seconds = start.elapsed().as_secs_f64();
    match &result {
        Ok(()) => manifest.status = RunStatus::Complete,
        Err(e) => {
            manifest.status = RunStatus::Failed;
            manifest.error = Some(e.to_string());
        }
    }
    manifest.write(&manifest_path)?;
    if result.is_ok() && !cli.quiet {
        eprintln!("wrote {}", out.display());
    }
    result
}

fn run_experiment(resolved: &Resolved, out: &Path, progress: &Progress, m: &mut Manifest) -> Result<()> {
    match resolved {
        Resolved::Effdim(cfg) => {
            let r = run_effective_dimension_sweep(cfg, progress)?;
            m.notes.push(format!("Fisher information kind: {}", r.fisher_kind));
            m.outputs.push(write_csv(out, "effdim_samples.csv", |w| r.write_samples_csv(w))?);
            m.outputs.push(write_csv(out, "effdim_summary.csv", |w| r.write_summary_csv(w))?);
        }
        Resolved::Capacity(cfg) => {
            let r = run_capacity_experiment(cfg, progress)?;
            let flagged = r.cells.iter().filter(|c| c.flagged).count();
            if flagged > 0 {
                m.notes.push(format!("{flagged} cells hit a non-finite loss"));
            }
            m.outputs.push(write_csv(out, "capacity_curves.csv", |w| r.write_curves_csv(w))?);
            m.outputs.push(write_csv(out, "capacity_summary.csv", |w| r.write_summary_csv(w))?);
        }
        Resolved::Classify(cfg) => {
            let r = run_classification_experiment(cfg, progress)?;
            m.inputs.push(r.input.clone());
            m.notes.push(format!(
                "{} iris rows, {} held out for validation",
                r.n_rows, r.n_validation
            ));
            m.outputs.push(write_csv(out, "classify_curves.csv", |w| r.write_curves_csv(w))?);
            m.outputs.push(write_csv(out, "classify_traces.csv", |w| r.write_traces_csv(w))?);
        }
        Resolved::Unitary(cfg) => {
            let r = run_unitary_learning_experiment(cfg, progress)?;
            if let Some(p) = &r.ising {
                m.notes.push(format!(
                    "Ising target uses a periodic chain; couplings {:?}, fields {:?}",
                    p.couplings, p.fields
                ));
            }
            m.outputs.push(write_csv(out, "unitary_curves.csv", |w| r.write_curves_csv(w))?);
        }
        Resolved::Adiabatic(cfg) => {
            let r = run_adiabatic_check(cfg, progress)?;
            m.notes.push(format!(
                "ramp shape {:?}, initial transverse field {OMEGA_FACTOR:e} x parameter scale, step <= {STEP_FRACTION} / local frequency",
                cfg.ramp_shape
            ));
            m.outputs.push(write_csv(out, "adiabatic_rows.csv", |w| r.write_rows_csv(w))?);
            m.outputs.push(write_csv(out, "adiabatic_summary.csv", |w| r.write_summary_csv(w))?);
        }
    }
    Ok(())
}
