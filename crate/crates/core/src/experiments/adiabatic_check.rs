//! Convergence of the adiabatic ramp to the closed-form perceptron gate
//! over a ladder of ramp times.

use std::io::Write;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::experiments::adiabatic::{adiabatic_ramp_evolve, RampSchedule, RampShape};
use crate::experiments::progress::Progress;
use crate::networks::sqp::{build_sqp_unitary, sqp_activation, SqpEdgeParams};
use crate::networks::SignVariant;
use crate::qcore::state::StateVector;
use crate::rng;
use crate::training::train::fmt_metric;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AdiabaticCheckConfig {
    pub seed: u64,
    pub n_inputs: Vec<usize>,
    pub n_draws: usize,
    /// Weights and bias are drawn uniformly from `[−r, r]`.
    pub param_range: f64,
    pub ramp_times: Vec<f64>,
    pub ramp_shape: RampShape,
}

impl Default for AdiabaticCheckConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            n_inputs: vec![1, 2],
            n_draws: 5,
            param_range: 5.0,
            ramp_times: vec![10.0, 30.0, 100.0],
            ramp_shape: RampShape::default(),
        }
    }
}

impl AdiabaticCheckConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_inputs.is_empty() {
            return Err(Error::config(".n_inputs", "needs at least one entry"));
        }
        if let Some(i) = self.n_inputs.iter().position(|&n| n == 0 || n > 8) {
            return Err(Error::config(format!(".n_inputs[{i}]"), "must lie in 1..=8"));
        }
        if self.n_draws == 0 {
            return Err(Error::config(".n_draws", "must be at least 1"));
        }
        if !(self.param_range > 0.0 && self.param_range.is_finite()) {
            return Err(Error::config(".param_range", "must be a positive finite number"));
        }
        if self.ramp_times.is_empty() {
            return Err(Error::config(".ramp_times", "needs at least one entry"));
        }
        if let Some(i) = self.ramp_times.iter().position(|&t| !(t > 0.0 && t.is_finite())) {
            return Err(Error::config(format!(".ramp_times[{i}]"), "must be a positive finite number"));
        }
        Ok(())
    }

    /// Parameters of draw `d` at input width `n_in`.
    pub fn draw(&self, n_in: usize, d: usize) -> SqpEdgeParams<f64> {
        let mut r = rng::stream(self.seed, &[n_in as u64, d as u64]);
        let range = -self.param_range..=self.param_range;
        let weights = (0..n_in).map(|_| r.random_range(range.clone())).collect();
        SqpEdgeParams::new(weights, r.random_range(range))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AdiabaticRow {
    pub n_in: usize,
    pub draw: usize,
    pub params: SqpEdgeParams<f64>,
    /// Control basis pattern (first control most significant).
    pub pattern: usize,
    pub total_time: f64,
    pub excitation_ramp: f64,
    pub excitation_closed: f64,
    /// Overlap with the closed-form output up to a global phase.
    pub block_fidelity: f64,
}

impl AdiabaticRow {
    pub fn deviation(&self) -> f64 {
        (self.excitation_ramp - self.excitation_closed).abs()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AdiabaticReport {
    pub ramp_times: Vec<f64>,
    pub rows: Vec<AdiabaticRow>,
}

impl AdiabaticReport {
    /// Largest excitation deviation at each ramp time.
    pub fn max_deviation(&self) -> Vec<f64> {
        self.ramp_times
            .iter()
            .map(|&t| {
                self.rows
                    .iter()
                    .filter(|r| r.total_time == t)
                    .map(AdiabaticRow::deviation)
                    .fold(0.0, f64::max)
            })
            .collect()
    }

    pub fn min_fidelity(&self) -> Vec<f64> {
        self.ramp_times
            .iter()
            .map(|&t| {
                self.rows
                    .iter()
                    .filter(|r| r.total_time == t)
                    .map(|r| r.block_fidelity)
                    .fold(1.0, f64::min)
            })
            .collect()
    }

    pub fn write_rows_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record([
            "n_in",
            "draw",
            "weights",
            "bias",
            "pattern",
            "T",
            "excitation_ramp",
            "excitation_closed",
            "deviation",
            "block_fidelity",
        ])?;
        for r in &self.rows {
            let w: Vec<String> = r.params.weights.iter().map(|x| fmt_metric(*x)).collect();
            out.write_record([
                r.n_in.to_string(),
                r.draw.to_string(),
                w.join(" "),
                fmt_metric(r.params.bias),
                r.pattern.to_string(),
                fmt_metric(r.total_time),
                fmt_metric(r.excitation_ramp),
                fmt_metric(r.excitation_closed),
                fmt_metric(r.deviation()),
                fmt_metric(r.block_fidelity),
            ])?;
        }
        out.flush().map_err(|e| Error::io("<csv>", e))?;
        Ok(())
    }

    pub fn write_summary_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["T", "max_deviation", "min_block_fidelity"])?;
        for ((t, d), f) in self.ramp_times.iter().zip(self.max_deviation()).zip(self.min_fidelity()) {
            out.write_record([fmt_metric(*t), fmt_metric(d), fmt_metric(f)])?;
        }
        out.flush().map_err(|e| Error::io("<csv>", e))?;
        Ok(())
    }
}

/// Ramps every basis input `|x⟩|0⟩` and compares with the closed-form gate
/// applied to the same input.
pub fn run_adiabatic_check(cfg: &AdiabaticCheckConfig, progress: &Progress) -> Result<AdiabaticReport> {
    cfg.validate()?;
    let mut jobs = Vec::new();
    for &n_in in &cfg.n_inputs {
        for d in 0..cfg.n_draws {
            for &t in &cfg.ramp_times {
                jobs.push((n_in, d, t));
            }
        }
    }
    let total = jobs.len();
    let done = std::sync::atomic::AtomicUsize::new(0);
    let groups = jobs
        .into_par_iter()
        .map(|(n_in, d, t)| {
            let params = cfg.draw(n_in, d);
            let u = build_sqp_unitary(&params, n_in, SignVariant::Plus)?;
            let schedule = RampSchedule::for_params(&params, t, cfg.ramp_shape);
            let rows = (0..1usize << n_in)
                .map(|x| {
                    let input = StateVector::basis(n_in + 1, 2 * x);
                    let ramp = adiabatic_ramp_evolve(&params, &schedule, &input)?;
                    let closed = StateVector::new(u.matrix().matvec(input.amplitudes()))?;
                    debug_assert!((closed.excitation(n_in) - sqp_activation(params.activation(x))).abs() < 1e-12);
                    Ok(AdiabaticRow {
                        n_in,
                        draw: d,
                        params: params.clone(),
                        pattern: x,
                        total_time: t,
                        excitation_ramp: ramp.excitation(n_in),
                        excitation_closed: closed.excitation(n_in),
                        block_fidelity: closed.overlap(&ramp),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let k = done.fetch_add(1, std::sync::atomic::Ordering::Relaxed) + 1;
            progress.tick(|| format!("adiabatic-check: {k}/{total} ramps"));
            Ok(rows)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(AdiabaticReport {
        ramp_times: cfg.ramp_times.clone(),
        rows: groups.into_iter().flatten().collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn short_ladder_converges() {
        let cfg = AdiabaticCheckConfig {
            n_inputs: vec![1],
            n_draws: 2,
            ramp_times: vec![3.0, 30.0],
            ..AdiabaticCheckConfig::default()
        };
        let r = run_adiabatic_check(&cfg, &Progress::silent()).unwrap();
        assert_eq!(r.rows.len(), 2 * 2 * 2);
        let dev = r.max_deviation();
        assert!(dev[1] < dev[0] && dev[1] < 1e-2, "{dev:?}");
        assert!(r.min_fidelity()[1] > 0.99);
    }
}
