//! Effective capacity: how well each network fits randomly labelled data
//! under the easy and hard feature maps.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::experiments::datasets::gen_random_dataset;
use crate::experiments::progress::Progress;
use crate::networks::{Family, FeatureMap, NetworkSpec, Readout};
use crate::rng::derive_seed;
use crate::training::evaluator::Task;
use crate::training::train::{fmt_metric, train, TrainConfig};

const DATA_STREAM: u64 = 0;
const INIT_STREAM: u64 = 1;

/// Networks with 23-24 parameters on four input qubits and two readout
/// qubits.
pub fn default_capacity_networks() -> Vec<NetworkSpec> {
    vec![
        NetworkSpec::sqp(vec![4, 3, 2]),
        NetworkSpec::hannover(vec![4, 2]),
        NetworkSpec::hea(4, 6).with_readout(Readout::class_probe(vec![0, 1])),
    ]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CapacityConfig {
    pub seed: u64,
    pub n_samples: usize,
    pub n_features: usize,
    pub n_classes: usize,
    /// Independent datasets; each network and feature map is trained once
    /// per dataset.
    pub n_seeds: usize,
    pub feature_maps: Vec<FeatureMap>,
    /// Feature maps listed above replace the networks' own.
    pub networks: Vec<NetworkSpec>,
    pub train: TrainConfig,
}

impl Default for CapacityConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            n_samples: 30,
            n_features: 4,
            n_classes: 2,
            n_seeds: 8,
            feature_maps: vec![FeatureMap::Easy, FeatureMap::Hard],
            networks: default_capacity_networks(),
            train: TrainConfig::default(),
        }
    }
}

impl CapacityConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("n_samples", self.n_samples),
            ("n_features", self.n_features),
            ("n_classes", self.n_classes),
            ("n_seeds", self.n_seeds),
        ] {
            if v == 0 {
                return Err(Error::config(format!(".{name}"), "must be at least 1"));
            }
        }
        if self.feature_maps.is_empty() {
            return Err(Error::config(".feature_maps", "needs at least one entry"));
        }
        if let Some(i) = self.feature_maps.iter().position(|&f| f == FeatureMap::None) {
            return Err(Error::config(format!(".feature_maps[{i}]"), "classical data needs a feature map"));
        }
        if self.networks.is_empty() {
            return Err(Error::config(".networks", "needs at least one network"));
        }
        for (i, s) in self.networks.iter().enumerate() {
            let path = format!(".networks[{i}]");
            s.validate().map_err(|e| Error::config(&path, e.to_string()))?;
            if s.input_width() < self.n_features {
                return Err(Error::config(&path, "input register narrower than n_features"));
            }
            if s.readout.output_len(s.output_width()) != self.n_classes {
                return Err(Error::config(format!("{path}.readout"), "output length must equal n_classes"));
            }
        }
        if self.train.n_restarts != 1 {
            return Err(Error::config(".n_restarts", "capacity cells train a single restart"));
        }
        self.train.validate()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CapacityCell {
    pub spec_id: String,
    pub family: Family,
    pub feature_map: FeatureMap,
    pub seed_idx: usize,
    /// Training loss, epoch 0 first.
    pub losses: Vec<f64>,
    pub flagged: bool,
}

impl CapacityCell {
    pub fn final_loss(&self) -> f64 {
        *self.losses.last().unwrap_or(&f64::NAN)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CapacityReport {
    /// Ordered by network, feature map, seed.
    pub cells: Vec<CapacityCell>,
}

impl CapacityReport {
    pub fn cell(&self, spec_id: &str, fm: FeatureMap, seed_idx: usize) -> Option<&CapacityCell> {
        self.cells
            .iter()
            .find(|c| c.spec_id == spec_id && c.feature_map == fm && c.seed_idx == seed_idx)
    }

    pub fn final_loss(&self, spec_id: &str, fm: FeatureMap, seed_idx: usize) -> Option<f64> {
        self.cell(spec_id, fm, seed_idx).map(CapacityCell::final_loss)
    }

    /// Per-epoch mean loss over seeds, skipping flagged cells.
    pub fn mean_curve(&self, spec_id: &str, fm: FeatureMap) -> Vec<f64> {
        let cells: Vec<&CapacityCell> = self
            .cells
            .iter()
            .filter(|c| c.spec_id == spec_id && c.feature_map == fm && !c.flagged)
            .collect();
        let epochs = cells.iter().map(|c| c.losses.len()).max().unwrap_or(0);
        (0..epochs)
            .map(|e| {
                let v: Vec<f64> = cells.iter().filter_map(|c| c.losses.get(e).copied()).collect();
                v.iter().sum::<f64>() / v.len() as f64
            })
            .collect()
    }

    fn groups(&self) -> Vec<(String, FeatureMap)> {
        let mut out: Vec<(String, FeatureMap)> = Vec::new();
        for c in &self.cells {
            if !out.iter().any(|(s, f)| *s == c.spec_id && *f == c.feature_map) {
                out.push((c.spec_id.clone(), c.feature_map));
            }
        }
        out
    }

    /// One row per cell and epoch.
    pub fn write_curves_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["spec_id", "family", "feature_map", "seed_idx", "epoch", "train_loss", "flagged"])?;
        for c in &self.cells {
            for (e, l) in c.losses.iter().enumerate() {
                out.write_record([
                    c.spec_id.clone(),
                    c.family.name().to_string(),
                    c.feature_map.name().to_string(),
                    c.seed_idx.to_string(),
                    e.to_string(),
                    fmt_metric(*l),
                    c.flagged.to_string(),
                ])?;
            }
        }
        out.flush().map_err(|e| Error::io("<csv>", e))?;
        Ok(())
    }

    /// Mean training loss across seeds per (network, feature map, epoch).
    pub fn write_summary_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["spec_id", "feature_map", "epoch", "mean_train_loss"])?;
        for (id, fm) in self.groups() {
            for (e, l) in self.mean_curve(&id, fm).iter().enumerate() {
                out.write_record([id.clone(), fm.name().to_string(), e.to_string(), fmt_metric(*l)])?;
            }
        }
        out.flush().map_err(|e| Error::io("<csv>", e))?;
        Ok(())
    }
}

/// Trains every (network, feature map, seed) cell. Seed `s` fixes both the
/// dataset and the initial parameters, so feature maps are compared on
/// identical data from identical starting points.
pub fn run_capacity_experiment(cfg: &CapacityConfig, progress: &Progress) -> Result<CapacityReport> {
    cfg.validate()?;
    let datasets = (0..cfg.n_seeds)
        .map(|s| {
            gen_random_dataset(
                cfg.n_samples,
                cfg.n_features,
                cfg.n_classes,
                derive_seed(cfg.seed, &[DATA_STREAM, s as u64]),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let mut jobs = Vec::new();
    for spec in &cfg.networks {
        for &fm in &cfg.feature_maps {
            for s in 0..cfg.n_seeds {
                jobs.push((spec.clone().with_feature_map(fm), s));
            }
        }
    }
    let total = jobs.len();
    let done = std::sync::atomic::AtomicUsize::new(0);
    let cells = jobs
        .into_par_iter()
        .map(|(spec, s)| {
            let tc = TrainConfig {
                seed: derive_seed(cfg.seed, &[INIT_STREAM, s as u64]),
                ..cfg.train.clone()
            };
            let r = train(&spec, &tc, Task::Classify(&datasets[s]))?;
            let trace = r.restarts.into_iter().next().expect("one restart");
            let k = done.fetch_add(1, std::sync::atomic::Ordering::Relaxed) + 1;
            progress.tick(|| format!("capacity: {k}/{total} cells"));
            Ok(CapacityCell {
                spec_id: spec.id(),
                family: spec.family,
                feature_map: spec.feature_map,
                seed_idx: s,
                losses: trace.train,
                flagged: trace.flagged,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CapacityReport { cells })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> CapacityConfig {
        CapacityConfig {
            n_samples: 4,
            n_features: 2,
            n_seeds: 2,
            networks: vec![
                NetworkSpec::sqp(vec![2, 2]),
                NetworkSpec::hea(2, 2).with_readout(Readout::class_probe(vec![0, 1])),
            ],
            train: TrainConfig {
                n_epochs: 3,
                ..TrainConfig::default()
            },
            ..CapacityConfig::default()
        }
    }

    #[test]
    fn cells_losses_and_csv() {
        let r = run_capacity_experiment(&small(), &Progress::silent()).unwrap();
        assert_eq!(r.cells.len(), 2 * 2 * 2);
        assert!(r.cells.iter().all(|c| c.losses.len() == 4 && c.losses.iter().all(|&l| l >= 0.0)));
        let again = run_capacity_experiment(&small(), &Progress::silent()).unwrap();
        assert_eq!(r, again);
        let mut buf = Vec::new();
        r.write_summary_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 1 + 2 * 2 * 4);
        assert!(r.final_loss("SQP[2-2]", FeatureMap::Hard, 1).is_some());
    }

    #[test]
    fn rejects_mismatched_readout() {
        let mut cfg = small();
        cfg.networks.push(NetworkSpec::hannover(vec![2, 3]));
        assert!(matches!(cfg.validate(), Err(Error::Config { path, .. }) if path == ".networks[2].readout"));
    }
}
