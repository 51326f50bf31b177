//! The experiment config file: one flat JSON object whose keys are all
//! optional. Each subcommand accepts the keys it uses, fills in defaults
//! for the rest and rejects the others.

use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::experiments::adiabatic::RampShape;
use crate::experiments::adiabatic_check::AdiabaticCheckConfig;
use crate::experiments::capacity::CapacityConfig;
use crate::experiments::classify::ClassifyConfig;
use crate::experiments::effdim::{EffDimSweepConfig, SweepPoint};
use crate::experiments::unitary::{TargetKind, TargetRates, UnitaryConfig, UnitaryNetwork};
use crate::metrics::FisherKind;
use crate::networks::{Entangler, Family, FeatureMap, NetworkSpec, Readout, SignVariant};
use crate::training::train::{Optimizer, TrainConfig};

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,

    // Single-network shorthand.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<Family>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub layer_widths: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hea_layers: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub feature_map: Option<FeatureMap>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub readout: Option<Readout>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sign: Option<SignVariant>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub entangler: Option<Entangler>,
    /// Full network list; entries are network specs, or
    /// `{network, learning_rate: {ising, haar}}` for `unitary-learn`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub networks: Option<serde_json::Value>,

    // Training.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub optimizer: Option<Optimizer>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub learning_rate: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps_adam: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fd_step: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_epochs: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_restarts: Option<usize>,

    // Effective dimension.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_observations: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_theta_samples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_x_samples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fisher_kind: Option<FisherKind>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep: Option<Vec<SweepPoint>>,

    // Capacity.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_samples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_features: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_classes: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_seeds: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub feature_maps: Option<Vec<FeatureMap>>,

    // Classification and unitary learning.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub iris_path: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_train: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_validation: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_qubits: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub targets: Option<Vec<TargetKind>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub learning_rates: Option<TargetRates>,

    // Adiabatic check.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_inputs: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_draws: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub param_range: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ramp_times: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ramp_shape: Option<RampShape>,
}

const SHORTHAND: &[&str] = &["family", "layer_widths", "hea_layers", "feature_map", "readout", "sign", "entangler"];
const TRAINING: &[&str] = &[
    "optimizer",
    "learning_rate",
    "beta1",
    "beta2",
    "eps_adam",
    "fd_step",
    "n_epochs",
    "n_restarts",
];

fn json_path(path: &serde_path_to_error::Path) -> String {
    let p = path.to_string();
    if p == "." || p.starts_with('[') {
        p
    } else {
        format!(".{p}")
    }
}

/// Deserializes `value`, reporting failures at `prefix` + the inner path.
fn from_value<T: DeserializeOwned>(value: serde_json::Value, prefix: &str) -> Result<T> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let inner = json_path(e.path());
        let path = if inner == "." { prefix.to_string() } else { format!("{prefix}{inner}") };
        let path = if path.is_empty() { ".".to_string() } else { path };
        Error::config(path, e.into_inner().to_string())
    })
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut de = serde_json::Deserializer::from_str(text);
        let cfg: Self = serde_path_to_error::deserialize(&mut de).map_err(|e| {
            let path = json_path(e.path());
            Error::config(path, e.into_inner().to_string())
        })?;
        de.end().map_err(|e| Error::config(".", e.to_string()))?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    fn present_keys(&self) -> Vec<String> {
        match serde_json::to_value(self) {
            Ok(serde_json::Value::Object(m)) => m.keys().cloned().collect(),
            _ => Vec::new(),
        }
    }

    fn allow_only(&self, command: &str, groups: &[&[&str]]) -> Result<()> {
        for k in self.present_keys() {
            if k != "seed" && !groups.iter().any(|g| g.contains(&k.as_str())) {
                return Err(Error::config(format!(".{k}"), format!("not used by `{command}`")));
            }
        }
        Ok(())
    }

    fn shorthand(&self) -> Result<Option<NetworkSpec>> {
        let Some(family) = self.family else {
            if let Some(k) = self.present_keys().into_iter().find(|k| SHORTHAND.contains(&k.as_str())) {
                return Err(Error::config(format!(".{k}"), "network fields need `family`"));
            }
            return Ok(None);
        };
        let Some(widths) = self.layer_widths.clone() else {
            return Err(Error::config(".layer_widths", "required together with `family`"));
        };
        let spec = NetworkSpec {
            family,
            layer_widths: widths,
            hea_layers: self.hea_layers.unwrap_or(1),
            feature_map: self.feature_map.unwrap_or_default(),
            readout: self.readout.clone().unwrap_or_default(),
            sign: self.sign.unwrap_or_default(),
            entangler: self.entangler.unwrap_or_default(),
        };
        spec.validate().map_err(|e| Error::config(".layer_widths", e.to_string()))?;
        Ok(Some(spec))
    }

    fn network_list(&self, default: Vec<NetworkSpec>) -> Result<Vec<NetworkSpec>> {
        let shorthand = self.shorthand()?;
        match (&self.networks, shorthand) {
            (Some(_), Some(_)) => Err(Error::config(".networks", "give either `networks` or the `family` shorthand")),
            (Some(v), None) => from_value(v.clone(), ".networks"),
            (None, Some(s)) => Ok(vec![s]),
            (None, None) => Ok(default),
        }
    }

    fn train_config(&self, base: TrainConfig) -> TrainConfig {
        TrainConfig {
            optimizer: self.optimizer.unwrap_or(base.optimizer),
            learning_rate: self.learning_rate.unwrap_or(base.learning_rate),
            beta1: self.beta1.unwrap_or(base.beta1),
            beta2: self.beta2.unwrap_or(base.beta2),
            eps_adam: self.eps_adam.unwrap_or(base.eps_adam),
            fd_step: self.fd_step.unwrap_or(base.fd_step),
            n_epochs: self.n_epochs.unwrap_or(base.n_epochs),
            n_restarts: self.n_restarts.unwrap_or(base.n_restarts),
            seed: base.seed,
        }
    }

    pub fn effdim(&self) -> Result<EffDimSweepConfig> {
        self.allow_only(
            "effdim",
            &[SHORTHAND, &["networks", "n_observations", "n_theta_samples", "n_x_samples", "fisher_kind", "sweep"]],
        )?;
        let d = EffDimSweepConfig::default();
        let mut effdim = d.effdim.clone();
        effdim.n_observations = self.n_observations.unwrap_or(effdim.n_observations);
        effdim.n_theta_samples = self.n_theta_samples.unwrap_or(effdim.n_theta_samples);
        effdim.n_x_samples = self.n_x_samples.unwrap_or(effdim.n_x_samples);
        effdim.fisher_kind = self.fisher_kind.unwrap_or(effdim.fisher_kind);
        let single = if self.family.is_some() && self.readout.is_none() {
            self.shorthand()?.map(|s| s.with_readout(Readout::distribution_all()))
        } else {
            self.shorthand()?
        };
        let sweep = match (&self.sweep, &self.networks, single) {
            (Some(_), Some(_), _) | (Some(_), _, Some(_)) => {
                return Err(Error::config(".sweep", "give either `sweep` or a network list"));
            }
            (Some(s), None, None) => s.clone(),
            (None, Some(_), Some(_)) => {
                return Err(Error::config(".networks", "give either `networks` or the `family` shorthand"));
            }
            (None, Some(v), None) => {
                let nets: Vec<NetworkSpec> = from_value(v.clone(), ".networks")?;
                nets.into_iter().map(single_point).collect()
            }
            (None, None, Some(s)) => vec![single_point(s)],
            (None, None, None) => d.sweep,
        };
        let cfg = EffDimSweepConfig {
            seed: self.seed.unwrap_or(d.seed),
            effdim,
            sweep,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn capacity(&self) -> Result<CapacityConfig> {
        self.allow_only(
            "capacity",
            &[SHORTHAND, TRAINING, &["networks", "n_samples", "n_features", "n_classes", "n_seeds", "feature_maps"]],
        )?;
        let d = CapacityConfig::default();
        let cfg = CapacityConfig {
            seed: self.seed.unwrap_or(d.seed),
            n_samples: self.n_samples.unwrap_or(d.n_samples),
            n_features: self.n_features.unwrap_or(d.n_features),
            n_classes: self.n_classes.unwrap_or(d.n_classes),
            n_seeds: self.n_seeds.unwrap_or(d.n_seeds),
            feature_maps: self.feature_maps.clone().unwrap_or(d.feature_maps),
            networks: self.network_list(d.networks)?,
            train: self.train_config(d.train),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn classify(&self) -> Result<ClassifyConfig> {
        self.allow_only("classify", &[SHORTHAND, TRAINING, &["networks", "iris_path", "n_train"]])?;
        let d = ClassifyConfig::default();
        let cfg = ClassifyConfig {
            seed: self.seed.unwrap_or(d.seed),
            iris_path: self.iris_path.clone().or(d.iris_path),
            n_train: self.n_train.unwrap_or(d.n_train),
            networks: self.network_list(d.networks)?,
            train: self.train_config(d.train),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn unitary(&self) -> Result<UnitaryConfig> {
        self.allow_only(
            "unitary-learn",
            &[
                SHORTHAND,
                &["optimizer", "learning_rate", "fd_step", "n_epochs", "n_restarts"],
                &["networks", "n_qubits", "n_train", "n_validation", "targets", "learning_rates"],
            ],
        )?;
        if self.learning_rate.is_some() && self.learning_rates.is_some() {
            return Err(Error::config(".learning_rates", "give either `learning_rate` or `learning_rates`"));
        }
        if let Some(r) = self.learning_rate {
            if !(r > 0.0 && r.is_finite()) {
                return Err(Error::config(".learning_rate", "must be a positive finite number"));
            }
        }
        let d = UnitaryConfig::default();
        let rates = self.learning_rates.or(self.learning_rate.map(TargetRates::uniform));
        let single = if self.family.is_some() && self.feature_map.is_none() {
            self.shorthand()?.map(|s| s.with_feature_map(FeatureMap::None))
        } else {
            self.shorthand()?
        };
        let mut networks = match (&self.networks, single) {
            (Some(_), Some(_)) => {
                return Err(Error::config(".networks", "give either `networks` or the `family` shorthand"));
            }
            (Some(v), None) => from_value(v.clone(), ".networks")?,
            (None, Some(s)) => vec![UnitaryNetwork {
                network: s,
                learning_rate: TargetRates::uniform(0.1),
            }],
            (None, None) => d.networks,
        };
        if let Some(r) = rates {
            networks.iter_mut().for_each(|n| n.learning_rate = r);
        }
        let cfg = UnitaryConfig {
            seed: self.seed.unwrap_or(d.seed),
            n_qubits: self.n_qubits.unwrap_or(d.n_qubits),
            n_train: self.n_train.unwrap_or(d.n_train),
            n_validation: self.n_validation.unwrap_or(d.n_validation),
            targets: self.targets.clone().unwrap_or(d.targets),
            networks,
            optimizer: self.optimizer.unwrap_or(d.optimizer),
            n_epochs: self.n_epochs.unwrap_or(d.n_epochs),
            n_restarts: self.n_restarts.unwrap_or(d.n_restarts),
            fd_step: self.fd_step.unwrap_or(d.fd_step),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn adiabatic(&self) -> Result<AdiabaticCheckConfig> {
        self.allow_only("adiabatic-check", &[&["n_inputs", "n_draws", "param_range", "ramp_times", "ramp_shape"]])?;
        let d = AdiabaticCheckConfig::default();
        let cfg = AdiabaticCheckConfig {
            seed: self.seed.unwrap_or(d.seed),
            n_inputs: self.n_inputs.clone().unwrap_or(d.n_inputs),
            n_draws: self.n_draws.unwrap_or(d.n_draws),
            param_range: self.param_range.unwrap_or(d.param_range),
            ramp_times: self.ramp_times.clone().unwrap_or(d.ramp_times),
            ramp_shape: self.ramp_shape.unwrap_or(d.ramp_shape),
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

fn single_point(spec: NetworkSpec) -> SweepPoint {
    let n_out = spec.readout.qubits(spec.output_width()).len();
    SweepPoint {
        n_in: spec.input_width(),
        n_out,
        networks: vec![spec],
    }
}
