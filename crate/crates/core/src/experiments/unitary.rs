//! Learning a two-qubit target unitary from input/output state pairs.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::experiments::progress::Progress;
use crate::experiments::targets::{gen_haar_unitary, gen_ising_unitary, make_quantum_dataset, IsingParams};
use crate::networks::{Family, FeatureMap, NetworkSpec};
use crate::qcore::matrix::Unitary;
use crate::rng::derive_seed;
use crate::training::evaluator::Task;
use crate::training::train::{fmt_metric, train, Optimizer, TrainConfig, TrainResult};

const TARGET_STREAM: u64 = 0;
const DATA_STREAM: u64 = 1;
const INIT_STREAM: u64 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum TargetKind {
    /// `exp[−i Σ_j (J_j Z_j Z_{j+1} + h_j X_j)]`, periodic chain.
    Ising,
    Haar,
}

impl TargetKind {
    pub fn name(self) -> &'static str {
        match self {
            TargetKind::Ising => "ISING",
            TargetKind::Haar => "HAAR",
        }
    }

    fn index(self) -> u64 {
        match self {
            TargetKind::Ising => 0,
            TargetKind::Haar => 1,
        }
    }
}

/// Step size per target kind.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetRates {
    pub ising: f64,
    pub haar: f64,
}

impl TargetRates {
    pub fn uniform(rate: f64) -> Self {
        Self { ising: rate, haar: rate }
    }

    pub fn get(&self, kind: TargetKind) -> f64 {
        match kind {
            TargetKind::Ising => self.ising,
            TargetKind::Haar => self.haar,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UnitaryNetwork {
    pub network: NetworkSpec,
    pub learning_rate: TargetRates,
}

/// HEA with 32 layers and Hannover with two hidden layers of width 3 at
/// `η = 0.1`; SQP with three hidden layers of width 3 at `η = 5` (Ising)
/// and `η = 2` (Haar).
pub fn default_unitary_networks() -> Vec<UnitaryNetwork> {
    let q = |s: NetworkSpec| s.with_feature_map(FeatureMap::None);
    vec![
        UnitaryNetwork {
            network: q(NetworkSpec::hea(2, 32)),
            learning_rate: TargetRates::uniform(0.1),
        },
        UnitaryNetwork {
            network: q(NetworkSpec::hannover(vec![2, 3, 3, 2])),
            learning_rate: TargetRates::uniform(0.1),
        },
        UnitaryNetwork {
            network: q(NetworkSpec::sqp(vec![2, 3, 3, 3, 2])),
            learning_rate: TargetRates { ising: 5.0, haar: 2.0 },
        },
    ]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UnitaryConfig {
    pub seed: u64,
    pub n_qubits: usize,
    pub n_train: usize,
    pub n_validation: usize,
    pub targets: Vec<TargetKind>,
    pub networks: Vec<UnitaryNetwork>,
    pub optimizer: Optimizer,
    pub n_epochs: usize,
    pub n_restarts: usize,
    pub fd_step: f64,
}

impl Default for UnitaryConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            n_qubits: 2,
            n_train: 50,
            n_validation: 10,
            targets: vec![TargetKind::Ising, TargetKind::Haar],
            networks: default_unitary_networks(),
            optimizer: Optimizer::Sgd,
            n_epochs: 300,
            n_restarts: 4,
            fd_step: 1e-3,
        }
    }
}

impl UnitaryConfig {
    fn train_config(&self, rate: f64, seed: u64) -> TrainConfig {
        TrainConfig {
            optimizer: self.optimizer,
            learning_rate: rate,
            fd_step: self.fd_step,
            n_epochs: self.n_epochs,
            n_restarts: self.n_restarts,
            seed,
            ..TrainConfig::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_qubits == 0 || self.n_qubits > 6 {
            return Err(Error::config(".n_qubits", "must lie in 1..=6"));
        }
        if self.n_train == 0 {
            return Err(Error::config(".n_train", "must be at least 1"));
        }
        if self.targets.is_empty() {
            return Err(Error::config(".targets", "needs at least one target kind"));
        }
        if self.networks.is_empty() {
            return Err(Error::config(".networks", "needs at least one network"));
        }
        for (i, n) in self.networks.iter().enumerate() {
            let path = format!(".networks[{i}]");
            let s = &n.network;
            s.validate().map_err(|e| Error::config(&path, e.to_string()))?;
            if s.feature_map != FeatureMap::None {
                return Err(Error::config(format!("{path}.feature_map"), "quantum inputs need feature_map NONE"));
            }
            if s.input_width() != self.n_qubits || s.output_width() != self.n_qubits {
                return Err(Error::config(&path, "input and output registers must match n_qubits"));
            }
            for (name, r) in [("ising", n.learning_rate.ising), ("haar", n.learning_rate.haar)] {
                if !(r > 0.0 && r.is_finite()) {
                    return Err(Error::config(format!("{path}.learning_rate.{name}"), "must be a positive finite number"));
                }
            }
        }
        self.train_config(1.0, 0).validate()
    }

    /// Target unitary of each kind together with the Ising couplings used.
    pub fn target(&self, kind: TargetKind) -> (Unitary<f64>, Option<IsingParams>) {
        let seed = derive_seed(self.seed, &[TARGET_STREAM, kind.index()]);
        match kind {
            TargetKind::Ising => {
                let p = IsingParams::random(self.n_qubits, seed);
                (gen_ising_unitary(&p), Some(p))
            }
            TargetKind::Haar => (gen_haar_unitary(self.n_qubits, seed), None),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryRun {
    pub target: TargetKind,
    pub spec_id: String,
    pub family: Family,
    pub learning_rate: f64,
    pub result: TrainResult,
}

#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryReport {
    pub runs: Vec<UnitaryRun>,
    pub ising: Option<IsingParams>,
}

impl UnitaryReport {
    pub fn run(&self, target: TargetKind, family: Family) -> Option<&UnitaryRun> {
        self.runs.iter().find(|r| r.target == target && r.family == family)
    }

    /// Per-epoch mean and maximum (over restarts) of the objective.
    pub fn write_curves_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record([
            "target",
            "spec_id",
            "learning_rate",
            "epoch",
            "mean_validation_objective",
            "max_validation_objective",
            "mean_train_objective",
            "max_train_objective",
        ])?;
        for run in &self.runs {
            let r = &run.result;
            for e in 0..r.mean_train.len() {
                out.write_record([
                    run.target.name().to_string(),
                    run.spec_id.clone(),
                    fmt_metric(run.learning_rate),
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
}

/// Trains every network on every target kind. Each target kind has its own
/// unitary and dataset, shared by all networks.
pub fn run_unitary_learning_experiment(cfg: &UnitaryConfig, progress: &Progress) -> Result<UnitaryReport> {
    cfg.validate()?;
    let mut runs = Vec::new();
    let mut ising = None;
    for &kind in &cfg.targets {
        let (u, params) = cfg.target(kind);
        if params.is_some() {
            ising = params;
        }
        let data = make_quantum_dataset(
            &u,
            cfg.n_train,
            cfg.n_validation,
            derive_seed(cfg.seed, &[DATA_STREAM, kind.index()]),
        );
        for n in &cfg.networks {
            let rate = n.learning_rate.get(kind);
            let tc = cfg.train_config(rate, derive_seed(cfg.seed, &[INIT_STREAM, kind.index()]));
            progress.note(|| format!("unitary-learn: {} on {} (eta = {rate})", n.network.id(), kind.name()));
            let result = train(&n.network, &tc, Task::Unitary(&data))?;
            runs.push(UnitaryRun {
                target: kind,
                spec_id: n.network.id(),
                family: n.network.family,
                learning_rate: rate,
                result,
            });
        }
    }
    Ok(UnitaryReport { runs, ising })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_run_is_bounded_and_ordered() {
        let cfg = UnitaryConfig {
            n_train: 4,
            n_validation: 2,
            networks: vec![UnitaryNetwork {
                network: NetworkSpec::hea(2, 3).with_feature_map(FeatureMap::None),
                learning_rate: TargetRates::uniform(0.1),
            }],
            n_epochs: 3,
            n_restarts: 2,
            ..UnitaryConfig::default()
        };
        let r = run_unitary_learning_experiment(&cfg, &Progress::silent()).unwrap();
        assert_eq!(r.runs.len(), 2);
        assert!(r.ising.is_some());
        for run in &r.runs {
            let res = &run.result;
            for e in 0..res.mean_validation.len() {
                assert!((0.0..=1.0 + 1e-12).contains(&res.mean_validation[e]));
                assert!(res.best_validation[e] >= res.mean_validation[e]);
            }
        }
    }

    #[test]
    fn defaults_follow_the_reference_protocol() {
        let cfg = UnitaryConfig::default();
        cfg.validate().unwrap();
        assert_eq!((cfg.n_train, cfg.n_validation), (50, 10));
        let sqp = &cfg.networks[2];
        assert_eq!(sqp.network.layer_widths, vec![2, 3, 3, 3, 2]);
        assert_eq!((sqp.learning_rate.ising, sqp.learning_rate.haar), (5.0, 2.0));
    }

    #[test]
    fn rejects_classical_feature_map() {
        let mut cfg = UnitaryConfig::default();
        cfg.networks[0].network.feature_map = FeatureMap::Easy;
        assert!(matches!(cfg.validate(), Err(Error::Config { path, .. }) if path == ".networks[0].feature_map"));
    }
}
