//! Effective-dimension sweep over matched input/output widths.

use std::f64::consts::PI;
use std::io::Write;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::effdim::{effective_dimension_from_spectra, normalize_fisher, EffDimConfig};
use crate::metrics::fisher::{fisher, FisherMatrix};
use crate::experiments::progress::Progress;
use crate::metrics::model::NetworkModel;
use crate::networks::{Family, NetworkSpec, ParamVector, Readout};
use crate::rng;
use crate::training::train::fmt_metric;

/// Networks sharing an `[N_in, N_out]` signature.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepPoint {
    pub n_in: usize,
    pub n_out: usize,
    pub networks: Vec<NetworkSpec>,
}

fn dist(spec: NetworkSpec, n_out: usize) -> NetworkSpec {
    spec.with_readout(Readout::Distribution {
        qubits: Some((0..n_out).collect()),
    })
}

/// Default sweep: three signatures, one network per family with similar
/// parameter counts.
pub fn default_sweep() -> Vec<SweepPoint> {
    let point = |n_in: usize, n_out: usize, sqp: Vec<usize>, han: Vec<usize>, hea_layers: usize| SweepPoint {
        n_in,
        n_out,
        networks: vec![
            dist(NetworkSpec::sqp(sqp), n_out),
            dist(NetworkSpec::hannover(han), n_out),
            dist(NetworkSpec::hea(n_in.max(n_out), hea_layers), n_out),
        ],
    };
    vec![
        point(2, 1, vec![2, 2, 1], vec![2, 1], 4),
        point(2, 2, vec![2, 2, 2], vec![2, 2], 6),
        point(3, 2, vec![3, 2, 2], vec![3, 2], 6),
    ]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EffDimSweepConfig {
    pub seed: u64,
    #[serde(flatten)]
    pub effdim: EffDimConfig,
    pub sweep: Vec<SweepPoint>,
}

impl Default for EffDimSweepConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            effdim: EffDimConfig::default(),
            sweep: default_sweep(),
        }
    }
}

impl EffDimSweepConfig {
    pub fn validate(&self) -> Result<()> {
        self.effdim.validate()?;
        if self.sweep.is_empty() {
            return Err(Error::config(".sweep", "needs at least one point"));
        }
        for (i, p) in self.sweep.iter().enumerate() {
            for (j, s) in p.networks.iter().enumerate() {
                let path = format!(".sweep[{i}].networks[{j}]");
                s.validate().map_err(|e| Error::config(&path, e.to_string()))?;
                if !matches!(s.readout, Readout::Distribution { .. }) {
                    return Err(Error::config(format!("{path}.readout"), "must be a DISTRIBUTION readout"));
                }
                if s.readout.qubits(s.output_width()).len() != p.n_out || s.input_width() < p.n_in {
                    return Err(Error::config(&path, "does not match the point's [n_in, n_out]"));
                }
            }
        }
        Ok(())
    }
}

/// Per-sample statistics of the unnormalized Fisher matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleRow {
    pub spec_id: String,
    pub n_params: usize,
    pub sample_idx: usize,
    pub trace: f64,
    pub min_eig: f64,
    pub max_eig: f64,
    pub excluded: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SummaryRow {
    pub spec_id: String,
    pub family: Family,
    pub n_in: usize,
    pub n_out: usize,
    pub n_params: usize,
    pub n: f64,
    pub dim_eff: f64,
    pub normalized: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EffDimReport {
    pub fisher_kind: &'static str,
    pub samples: Vec<SampleRow>,
    pub summary: Vec<SummaryRow>,
}

impl EffDimReport {
    /// Per-sample rows followed by one summary row per network.
    pub fn write_samples_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["spec_id", "N_P", "n", "sample_idx", "trace", "min_eig", "max_eig", "dim_eff"])?;
        for s in &self.summary {
            let n = fmt_metric(s.n);
            for r in self.samples.iter().filter(|r| r.spec_id == s.spec_id) {
                out.write_record([
                    r.spec_id.clone(),
                    r.n_params.to_string(),
                    n.clone(),
                    r.sample_idx.to_string(),
                    fmt_metric(r.trace),
                    fmt_metric(r.min_eig),
                    fmt_metric(r.max_eig),
                    String::new(),
                ])?;
            }
            out.write_record([
                s.spec_id.clone(),
                s.n_params.to_string(),
                n,
                "summary".into(),
                String::new(),
                String::new(),
                String::new(),
                fmt_metric(s.dim_eff),
            ])?;
        }
        out.flush().map_err(|e| Error::io("<csv>", e))?;
        Ok(())
    }

    pub fn write_summary_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["spec_id", "family", "n_in", "n_out", "N_P", "n", "fisher_kind", "dim_eff", "dim_eff_over_N_P"])?;
        for s in &self.summary {
            out.write_record([
                s.spec_id.clone(),
                s.family.name().to_string(),
                s.n_in.to_string(),
                s.n_out.to_string(),
                s.n_params.to_string(),
                fmt_metric(s.n),
                self.fisher_kind.to_string(),
                fmt_metric(s.dim_eff),
                fmt_metric(s.normalized),
            ])?;
        }
        out.flush().map_err(|e| Error::io("<csv>", e))?;
        Ok(())
    }
}

/// Fisher samples of one network. Sample `k` draws its parameters and
/// inputs from the stream `(seed, network, k)`.
pub fn fisher_samples(spec: &NetworkSpec, n_in: usize, cfg: &EffDimConfig, seed: u64, stream_id: u64) -> Result<Vec<FisherMatrix>> {
    let model = NetworkModel::new(spec.clone())?;
    (0..cfg.n_theta_samples)
        .into_par_iter()
        .map(|k| {
            let mut r = rng::stream(seed, &[stream_id, k as u64]);
            let theta = ParamVector::<f64>::random(spec, &mut r).into_values();
            let xs: Vec<Vec<f64>> = (0..cfg.n_x_samples)
                .map(|_| (0..n_in).map(|_| r.random_range(0.0..=PI)).collect())
                .collect();
            fisher(cfg.fisher_kind, &model, &theta, &xs)
        })
        .collect()
}

pub fn run_effective_dimension_sweep(cfg: &EffDimSweepConfig, progress: &Progress) -> Result<EffDimReport> {
    cfg.validate()?;
    let mut samples = Vec::new();
    let mut summary = Vec::new();
    let mut stream_id = 0u64;
    for point in &cfg.sweep {
        for spec in &point.networks {
            progress.note(|| format!("effdim: {} ({} samples)", spec.id(), cfg.effdim.n_theta_samples));
            let raw = fisher_samples(spec, point.n_in, &cfg.effdim, cfg.seed, stream_id)?;
            stream_id += 1;
            let id = spec.id();
            let np = spec.param_count();
            for (k, f) in raw.iter().enumerate() {
                let ev = f.eigenvalues();
                samples.push(SampleRow {
                    spec_id: id.clone(),
                    n_params: np,
                    sample_idx: k,
                    trace: f.trace(),
                    min_eig: ev[0],
                    max_eig: ev[ev.len() - 1],
                    excluded: f.excluded,
                });
            }
            let normalized = normalize_fisher(&raw)?;
            let spectra: Vec<Vec<f64>> = normalized.par_iter().map(FisherMatrix::eigenvalues).collect();
            let d = effective_dimension_from_spectra(&spectra, cfg.effdim.n_observations)?;
            summary.push(SummaryRow {
                spec_id: id,
                family: spec.family,
                n_in: point.n_in,
                n_out: point.n_out,
                n_params: np,
                n: cfg.effdim.n_observations,
                dim_eff: d,
                normalized: d / np as f64,
            });
        }
    }
    Ok(EffDimReport {
        fisher_kind: cfg.effdim.fisher_kind.name(),
        samples,
        summary,
    })
}
