//! Iris classification with multi-restart training.

use std::io::Write;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::experiments::datasets::{bundled_iris, read_iris, split_iris, IrisTable, BUNDLED_IRIS};
use crate::experiments::manifest::{digest_bytes, digest_file, FileDigest};
use crate::experiments::progress::Progress;
use crate::networks::{Family, NetworkSpec, Readout};
use crate::rng::derive_seed;
use crate::training::evaluator::Task;
use crate::training::train::{fmt_metric, train, TrainConfig, TrainResult};

const SPLIT_STREAM: u64 = 0;
const INIT_STREAM: u64 = 1;

/// HEA with 32 layers, Hannover with two hidden layers of width 3 and SQP
/// with two hidden layers of width 4; three class-probe outputs each.
pub fn default_classify_networks() -> Vec<NetworkSpec> {
    vec![
        NetworkSpec::hea(4, 32).with_readout(Readout::class_probe(vec![0, 1, 2])),
        NetworkSpec::hannover(vec![4, 3, 3, 3]),
        NetworkSpec::sqp(vec![4, 4, 4, 3]),
    ]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassifyConfig {
    pub seed: u64,
    /// CSV with four feature columns and a species column; `None` uses the
    /// copy bundled with the crate.
    pub iris_path: Option<PathBuf>,
    pub n_train: usize,
    pub networks: Vec<NetworkSpec>,
    pub train: TrainConfig,
}

impl Default for ClassifyConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            iris_path: None,
            n_train: 30,
            networks: default_classify_networks(),
            train: TrainConfig {
                n_epochs: 100,
                n_restarts: 16,
                ..TrainConfig::default()
            },
        }
    }
}

impl ClassifyConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_train == 0 {
            return Err(Error::config(".n_train", "must be at least 1"));
        }
        if self.networks.is_empty() {
            return Err(Error::config(".networks", "needs at least one network"));
        }
        for (i, s) in self.networks.iter().enumerate() {
            let path = format!(".networks[{i}]");
            s.validate().map_err(|e| Error::config(&path, e.to_string()))?;
            if s.input_width() < 4 {
                return Err(Error::config(&path, "iris needs four input qubits"));
            }
            if s.readout.output_len(s.output_width()) != 3 {
                return Err(Error::config(format!("{path}.readout"), "iris needs three outputs"));
            }
        }
        self.train.validate()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClassifyRun {
    pub spec_id: String,
    pub family: Family,
    pub result: TrainResult,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClassifyReport {
    pub runs: Vec<ClassifyRun>,
    pub n_rows: usize,
    pub n_validation: usize,
    pub input: FileDigest,
}

impl ClassifyReport {
    /// Per-epoch mean and minimum (over restarts) of both costs.
    pub fn write_curves_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record([
            "spec_id",
            "epoch",
            "mean_validation_cost",
            "min_validation_cost",
            "mean_train_cost",
            "min_train_cost",
        ])?;
        for run in &self.runs {
            let r = &run.result;
            for e in 0..r.mean_train.len() {
                out.write_record([
                    run.spec_id.clone(),
                    e.to_string(),
                    fmt_metric(r.mean_validation[e]),
                    fmt_metric(r.best_validation[e]),
                    fmt_metric(r.mean_train[e]),
                    fmt_metric(r.best_train[e]),
                ])?;
            }
        }
        out.flush().map_err(|e| Error::io("<csv>", e))?;
        Ok(())
    }

    /// Every restart's trajectory.
    pub fn write_traces_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["spec_id", "restart", "epoch", "train_cost", "validation_cost", "flagged"])?;
        for run in &self.runs {
            for (k, t) in run.result.restarts.iter().enumerate() {
                for (e, c) in t.train.iter().enumerate() {
                    out.write_record([
                        run.spec_id.clone(),
                        k.to_string(),
                        e.to_string(),
                        fmt_metric(*c),
                        fmt_metric(t.validation[e]),
                        t.flagged.to_string(),
                    ])?;
                }
            }
        }
        out.flush().map_err(|e| Error::io("<csv>", e))?;
        Ok(())
    }
}

fn load_table(cfg: &ClassifyConfig) -> Result<(IrisTable, FileDigest)> {
    match &cfg.iris_path {
        Some(p) => {
            let table = read_iris(p)?;
            let mut d = digest_file(p)?;
            d.lines = Some(table.line_count);
            Ok((table, d))
        }
        None => {
            let table = bundled_iris();
            let mut d = digest_bytes("<bundled iris.csv>", BUNDLED_IRIS.as_bytes());
            d.lines = Some(table.line_count);
            Ok((table, d))
        }
    }
}

/// The shuffled split is shared by all networks; restart `r` of every
/// network starts from the stream `(seed, init, r)`.
pub fn run_classification_experiment(cfg: &ClassifyConfig, progress: &Progress) -> Result<ClassifyReport> {
    cfg.validate()?;
    let (table, input) = load_table(cfg)?;
    let data = split_iris(&table, cfg.n_train, derive_seed(cfg.seed, &[SPLIT_STREAM]))?;
    let tc = TrainConfig {
        seed: derive_seed(cfg.seed, &[INIT_STREAM]),
        ..cfg.train.clone()
    };
    let mut runs = Vec::with_capacity(cfg.networks.len());
    for spec in &cfg.networks {
        progress.note(|| format!("classify: training {} ({} restarts)", spec.id(), tc.n_restarts));
        let result = train(spec, &tc, Task::Classify(&data))?;
        runs.push(ClassifyRun {
            spec_id: spec.id(),
            family: spec.family,
            result,
        });
    }
    Ok(ClassifyReport {
        runs,
        n_rows: table.features.len(),
        n_validation: data.validation.len(),
        input,
    })
}
