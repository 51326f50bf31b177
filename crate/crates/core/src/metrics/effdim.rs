use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::fisher::{FisherKind, FisherMatrix};

/// Smallest eigenvalue accepted before clipping to zero.
pub const PSD_FLOOR: f64 = -1e-8;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EffDimConfig {
    pub n_observations: f64,
    pub n_theta_samples: usize,
    pub n_x_samples: usize,
    pub fisher_kind: FisherKind,
}

impl Default for EffDimConfig {
    fn default() -> Self {
        Self {
            n_observations: 1e4,
            n_theta_samples: 100,
            n_x_samples: 100,
            fisher_kind: FisherKind::Ml,
        }
    }
}

impl EffDimConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.n_observations >= 2.0 && self.n_observations / (2.0 * PI) > 1.0) {
            return Err(Error::config(".n_observations", "need n >= 2 and n / 2π > 1"));
        }
        if self.n_theta_samples == 0 {
            return Err(Error::config(".n_theta_samples", "must be at least 1"));
        }
        if self.n_x_samples == 0 {
            return Err(Error::config(".n_x_samples", "must be at least 1"));
        }
        Ok(())
    }
}

/// Rescales every sample by `N_P / mean trace`, so the normalized set has
/// mean trace `N_P`. The parameter-space volume cancels in the ratio.
pub fn normalize_fisher(samples: &[FisherMatrix]) -> Result<Vec<FisherMatrix>> {
    let first = samples.first().ok_or(Error::DegenerateFisher)?;
    let n = first.dim();
    if let Some(bad) = samples.iter().find(|s| s.dim() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: bad.dim(),
        });
    }
    let mean_trace = samples.iter().map(FisherMatrix::trace).sum::<f64>() / samples.len() as f64;
    if !(mean_trace > 0.0) || !mean_trace.is_finite() {
        return Err(Error::DegenerateFisher);
    }
    let s = n as f64 / mean_trace;
    Ok(samples.iter().map(|f| f.scaled(s)).collect())
}

/// `log det(I + κF)` from the eigenvalues of `F`, clipped at zero after the
/// PSD check.
pub fn log_det_shifted(eigenvalues: &[f64], kappa: f64) -> Result<f64> {
    let mut acc = 0.0;
    for &l in eigenvalues {
        if l < PSD_FLOOR {
            return Err(Error::NotPositive(l));
        }
        acc += (kappa * l.max(0.0)).ln_1p();
    }
    Ok(acc)
}

/// Effective dimension from the per-sample eigenvalue spectra of
/// normalized Fisher matrices.
pub fn effective_dimension_from_spectra(spectra: &[Vec<f64>], n: f64) -> Result<f64> {
    let kappa = n / (2.0 * PI);
    if !(kappa > 1.0) {
        return Err(Error::config(".n_observations", "need n / 2π > 1"));
    }
    if spectra.is_empty() {
        return Err(Error::DegenerateFisher);
    }
    let halves = spectra
        .iter()
        .map(|ev| log_det_shifted(ev, kappa).map(|l| 0.5 * l))
        .collect::<Result<Vec<_>>>()?;
    let max = halves.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lse = max + (halves.iter().map(|h| (h - max).exp()).sum::<f64>() / halves.len() as f64).ln();
    Ok(2.0 * lse / kappa.ln())
}

/// Monte-Carlo effective dimension of normalized samples at `n` observations.
pub fn effective_dimension(normalized: &[FisherMatrix], n: f64) -> Result<f64> {
    let spectra: Vec<Vec<f64>> = normalized.iter().map(FisherMatrix::eigenvalues).collect();
    effective_dimension_from_spectra(&spectra, n)
}
