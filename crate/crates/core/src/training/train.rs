use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::networks::{NetworkSpec, ParamVector};
use crate::rng;
use crate::training::adam::{adam_step, AdamParams, AdamState};
use crate::training::evaluator::{Evaluator, Split, Task};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Optimizer {
    Adam,
    /// Plain gradient steps of size `learning_rate`.
    Sgd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Goal {
    Minimize,
    Maximize,
}

impl Goal {
    fn better(self, a: f64, b: f64) -> f64 {
        match self {
            Goal::Minimize => a.min(b),
            Goal::Maximize => a.max(b),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub optimizer: Optimizer,
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps_adam: f64,
    pub fd_step: f64,
    pub n_epochs: usize,
    pub n_restarts: usize,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            optimizer: Optimizer::Adam,
            learning_rate: 0.01,
            beta1: 0.9,
            beta2: 0.99,
            eps_adam: 1e-8,
            fd_step: 1e-3,
            n_epochs: 300,
            n_restarts: 1,
            seed: 0,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::config(format!(".{name}"), "must be a positive finite number"))
            }
        };
        positive("learning_rate", self.learning_rate)?;
        positive("eps_adam", self.eps_adam)?;
        positive("fd_step", self.fd_step)?;
        for (name, b) in [("beta1", self.beta1), ("beta2", self.beta2)] {
            if !(0.0..1.0).contains(&b) {
                return Err(Error::config(format!(".{name}"), "must lie in [0, 1)"));
            }
        }
        if self.n_restarts == 0 {
            return Err(Error::config(".n_restarts", "must be at least 1"));
        }
        Ok(())
    }

    fn adam(&self, alpha: f64) -> AdamParams {
        AdamParams {
            alpha,
            beta1: self.beta1,
            beta2: self.beta2,
            eps: self.eps_adam,
        }
    }
}

/// Per-epoch metrics of one restart. Entry 0 is the initial evaluation.
#[derive(Clone, Debug, PartialEq)]
pub struct RestartTrace {
    pub train: Vec<f64>,
    pub validation: Vec<f64>,
    /// Set when the optimization hit a non-finite objective.
    pub flagged: bool,
    pub final_theta: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrainResult {
    pub goal: Goal,
    pub restarts: Vec<RestartTrace>,
    pub mean_train: Vec<f64>,
    pub mean_validation: Vec<f64>,
    /// Pointwise best (min cost or max objective) over unflagged restarts.
    pub best_train: Vec<f64>,
    pub best_validation: Vec<f64>,
    /// Unflagged restart with the best final training metric.
    pub best_restart: Option<usize>,
}

impl TrainResult {
    fn summarize(goal: Goal, restarts: Vec<RestartTrace>) -> Self {
        let ok: Vec<&RestartTrace> = restarts.iter().filter(|r| !r.flagged).collect();
        let epochs = restarts.iter().map(|r| r.train.len()).max().unwrap_or(0);
        let fold = |get: &dyn Fn(&RestartTrace) -> &Vec<f64>| -> (Vec<f64>, Vec<f64>) {
            (0..epochs)
                .map(|e| {
                    let vals: Vec<f64> = ok.iter().filter_map(|r| get(r).get(e).copied()).collect();
                    if vals.is_empty() {
                        return (f64::NAN, f64::NAN);
                    }
                    let mean = vals.iter().sum::<f64>() / vals.len() as f64;
                    let best = vals.iter().copied().reduce(|a, b| goal.better(a, b)).unwrap_or(f64::NAN);
                    (mean, best)
                })
                .unzip()
        };
        let (mean_train, best_train) = fold(&|r| &r.train);
        let (mean_validation, best_validation) = fold(&|r| &r.validation);
        let best_restart = restarts
            .iter()
            .enumerate()
            .filter(|(_, r)| !r.flagged)
            .map(|(i, r)| (i, *r.train.last().unwrap_or(&f64::NAN)))
            .reduce(|a, b| if goal.better(a.1, b.1) == b.1 && b.1 != a.1 { b } else { a })
            .map(|(i, _)| i);
        Self {
            goal,
            restarts,
            mean_train,
            mean_validation,
            best_train,
            best_validation,
            best_restart,
        }
    }

    /// Rows `(restart, epoch, train_metric, validation_metric)`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["restart", "epoch", "train_metric", "validation_metric"])?;
        for (r, trace) in self.restarts.iter().enumerate() {
            for (e, t) in trace.train.iter().enumerate() {
                let v = trace.validation.get(e).map_or(String::new(), |v| fmt_metric(*v));
                out.write_record([r.to_string(), e.to_string(), fmt_metric(*t), v])?;
            }
        }
        out.flush().map_err(|e| Error::io("<csv>", e))?;
        Ok(())
    }
}

/// Shortest round-trip decimal form, so CSVs are byte-stable.
pub fn fmt_metric(v: f64) -> String {
    if v.is_nan() {
        "NaN".into()
    } else {
        format!("{v:?}")
    }
}

fn take_step(cfg: &TrainConfig, goal: Goal, adam: &mut AdamState, theta: &mut [f64], grad: &[f64], rate: f64) {
    let sign = match goal {
        Goal::Minimize => 1.0,
        Goal::Maximize => -1.0,
    };
    match cfg.optimizer {
        Optimizer::Adam => {
            let g: Vec<f64> = grad.iter().map(|g| sign * g).collect();
            adam_step(adam, theta, &g, &cfg.adam(rate));
        }
        Optimizer::Sgd => {
            for (t, g) in theta.iter_mut().zip(grad) {
                *t -= sign * rate * g;
            }
        }
    }
}

fn run_restart(ev: &Evaluator, cfg: &TrainConfig, restart: usize) -> Result<RestartTrace> {
    let spec = ev.spec();
    let mut theta = ParamVector::<f64>::random(spec, &mut rng::stream(cfg.seed, &[restart as u64])).into_values();
    let has_val = ev.has_validation();
    let val = |t: &[f64]| -> Result<f64> {
        if has_val {
            ev.metric(t, Split::Validation)
        } else {
            Ok(f64::NAN)
        }
    };
    let mut train = vec![ev.metric(&theta, Split::Train)?];
    let mut validation = vec![val(&theta)?];
    let mut adam = AdamState::new(theta.len());
    let mut flagged = !train[0].is_finite();
    for _ in 0..cfg.n_epochs {
        if flagged {
            break;
        }
        let grad = match ev.gradient(&theta, cfg.fd_step) {
            Ok(g) => g,
            Err(Error::NonFinite { .. }) => {
                flagged = true;
                break;
            }
            Err(e) => return Err(e),
        };
        let mut accepted = None;
        for rate in [cfg.learning_rate, cfg.learning_rate / 2.0] {
            let mut trial = theta.clone();
            let mut trial_adam = adam.clone();
            take_step(cfg, ev.goal(), &mut trial_adam, &mut trial, &grad, rate);
            let m = if trial.iter().all(|v| v.is_finite()) {
                ev.metric(&trial, Split::Train)?
            } else {
                f64::NAN
            };
            if m.is_finite() {
                accepted = Some((trial, trial_adam, m));
                break;
            }
        }
        match accepted {
            Some((t, a, m)) => {
                theta = t;
                adam = a;
                train.push(m);
                validation.push(val(&theta)?);
            }
            None => flagged = true,
        }
    }
    Ok(RestartTrace {
        train,
        validation,
        flagged,
        final_theta: theta,
    })
}

/// Multi-restart training. Restart `r` draws its initial parameters from
/// the stream `(seed, r)`; restarts run on the current rayon pool and the
/// result does not depend on its size.
pub fn train(spec: &NetworkSpec, cfg: &TrainConfig, task: Task<'_>) -> Result<TrainResult> {
    cfg.validate()?;
    let ev = Evaluator::new(spec, task)?;
    let restarts = (0..cfg.n_restarts)
        .into_par_iter()
        .map(|r| run_restart(&ev, cfg, r))
        .collect::<Result<Vec<_>>>()?;
    Ok(TrainResult::summarize(ev.goal(), restarts))
}
