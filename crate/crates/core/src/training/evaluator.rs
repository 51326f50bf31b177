//! Dataset-bound evaluation of a network's training metric and its
//! finite-difference gradient. Encoded inputs are prepared once, and the
//! gradient reuses the states entering each stage: perturbing a parameter of
//! stage `s` only reruns stages `s..`.

use crate::error::{Error, Result};
use crate::networks::forward::{condense_input, readout, run_stage, CompiledNetwork, NetworkInput};
use crate::networks::{FeatureMap, NetworkSpec, ParamVector};
use crate::qcore::ensemble::Ensemble;
use crate::qcore::state::StateVector;
use crate::training::cost::squared_distance;
use crate::training::data::{ClassicalDataset, QuantumDataset};
use crate::training::train::Goal;

#[derive(Clone, Copy, Debug)]
pub enum Task<'a> {
    /// Least-squares fit of readout probabilities to label vectors.
    Classify(&'a ClassicalDataset),
    /// Fidelity of output states with target states.
    Unitary(&'a QuantumDataset),
}

impl Task<'_> {
    pub fn goal(&self) -> Goal {
        match self {
            Task::Classify(_) => Goal::Minimize,
            Task::Unitary(_) => Goal::Maximize,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Split {
    Train,
    Validation,
}

#[derive(Clone, Debug)]
enum Targets {
    Labels(Vec<Vec<f64>>),
    States(Vec<StateVector<f64>>),
}

#[derive(Clone, Debug)]
struct Samples {
    inputs: Vec<Ensemble<f64>>,
    targets: Targets,
}

impl Samples {
    fn len(&self) -> usize {
        self.inputs.len()
    }
}

#[derive(Clone, Debug)]
pub struct Evaluator {
    spec: NetworkSpec,
    goal: Goal,
    train: Samples,
    validation: Samples,
}

impl Evaluator {
    pub fn new(spec: &NetworkSpec, task: Task<'_>) -> Result<Self> {
        spec.validate()?;
        // Parameters do not affect input preparation, so any vector works.
        let probe = CompiledNetwork::new(spec, &ParamVector::new(spec, vec![0.0; spec.param_count()])?)?;
        let (train, validation) = match task {
            Task::Classify(data) => {
                if spec.feature_map == FeatureMap::None {
                    return Err(Error::InvalidNetwork("classical data needs a feature map".into()));
                }
                let out_len = spec.readout.output_len(spec.output_width());
                if data.label_len() != out_len {
                    return Err(Error::DimensionMismatch {
                        expected: out_len,
                        actual: data.label_len(),
                    });
                }
                let split = |idx: &[usize]| -> Result<Samples> {
                    Ok(Samples {
                        inputs: idx
                            .iter()
                            .map(|&i| probe.prepare_input(NetworkInput::Classical(&data.inputs[i])))
                            .collect::<Result<_>>()?,
                        targets: Targets::Labels(idx.iter().map(|&i| data.labels[i].clone()).collect()),
                    })
                };
                (split(&data.train)?, split(&data.validation)?)
            }
            Task::Unitary(data) => {
                if data.output_qubits() != spec.output_width() {
                    return Err(Error::DimensionMismatch {
                        expected: spec.output_width(),
                        actual: data.output_qubits(),
                    });
                }
                let split = |pairs: &[(StateVector<f64>, StateVector<f64>)]| -> Result<Samples> {
                    Ok(Samples {
                        inputs: pairs
                            .iter()
                            .map(|(x, _)| probe.prepare_input(NetworkInput::Pure(x)))
                            .collect::<Result<_>>()?,
                        targets: Targets::States(pairs.iter().map(|(_, y)| y.clone()).collect()),
                    })
                };
                (split(&data.train)?, split(&data.validation)?)
            }
        };
        Ok(Self {
            spec: spec.clone(),
            goal: task.goal(),
            train,
            validation,
        })
    }

    pub fn spec(&self) -> &NetworkSpec {
        &self.spec
    }

    pub fn goal(&self) -> Goal {
        self.goal
    }

    pub fn has_validation(&self) -> bool {
        self.validation.len() > 0
    }

    fn samples(&self, split: Split) -> &Samples {
        match split {
            Split::Train => &self.train,
            Split::Validation => &self.validation,
        }
    }

    fn score(&self, samples: &Samples, k: usize, out: &Ensemble<f64>) -> Result<f64> {
        match &samples.targets {
            Targets::Labels(l) => Ok(squared_distance(&readout(&self.spec.readout, out).probabilities, &l[k])),
            Targets::States(s) => out.fidelity_pure(&s[k]),
        }
    }

    /// Mean per-sample metric on a split; NaN for an empty split.
    pub fn metric(&self, theta: &[f64], split: Split) -> Result<f64> {
        let net = CompiledNetwork::from_slice(&self.spec, theta)?;
        let samples = self.samples(split);
        let mut acc = 0.0;
        for (k, input) in samples.inputs.iter().enumerate() {
            acc += self.score(samples, k, &net.run_from(0, input.clone())?)?;
        }
        Ok(acc / samples.len() as f64)
    }

    /// Central-difference gradient of the training metric. Equal to
    /// [`crate::training::finite_diff_grad`] applied to
    /// `|t| self.metric(t, Split::Train)`.
    pub fn gradient(&self, theta: &[f64], eps: f64) -> Result<Vec<f64>> {
        let base = CompiledNetwork::from_slice(&self.spec, theta)?;
        let n_stages = base.stages().len();
        let samples = &self.train;
        // prefix[k][s]: state of sample k entering stage s.
        let mut prefix: Vec<Vec<Ensemble<f64>>> = Vec::with_capacity(samples.len());
        for input in &samples.inputs {
            let mut states = Vec::with_capacity(n_stages);
            let mut st = input.clone();
            for stage in &base.stages()[..n_stages - 1] {
                let st_in = condense_input(stage, st);
                st = run_stage(stage, st_in.clone())?;
                states.push(st_in);
            }
            states.push(condense_input(&base.stages()[n_stages - 1], st));
            prefix.push(states);
        }
        let ranges = self.spec.stage_ranges();
        let mut t = theta.to_vec();
        let mut grad = Vec::with_capacity(theta.len());
        let eval = |t: &[f64], s: usize| -> Result<f64> {
            let net = CompiledNetwork::from_slice(&self.spec, t)?;
            let mut acc = 0.0;
            for (k, states) in prefix.iter().enumerate() {
                acc += self.score(samples, k, &net.run_from(s, states[s].clone())?)?;
            }
            Ok(acc / samples.len() as f64)
        };
        for (s, r) in ranges.iter().enumerate() {
            for i in r.clone() {
                t[i] = theta[i] + eps;
                let plus = eval(&t, s)?;
                t[i] = theta[i] - eps;
                let minus = eval(&t, s)?;
                t[i] = theta[i];
                if !plus.is_finite() || !minus.is_finite() {
                    return Err(Error::NonFinite { index: i });
                }
                grad.push((plus - minus) / (2.0 * eps));
            }
        }
        Ok(grad)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::networks::Readout;
    use crate::rng;
    use crate::training::grad::finite_diff_grad;

    fn toy_data() -> ClassicalDataset {
        ClassicalDataset::new(
            vec![vec![0.1, 2.0], vec![1.5, 0.3], vec![2.9, 2.2]],
            vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 0.0]],
            vec![0, 1],
            vec![2],
        )
        .unwrap()
    }

    #[test]
    fn cached_gradient_matches_plain_finite_differences() {
        let data = toy_data();
        for (k, spec) in [
            NetworkSpec::sqp(vec![2, 2, 2]),
            NetworkSpec::hannover(vec![2, 2, 2]),
            NetworkSpec::hea(2, 3),
        ]
        .into_iter()
        .enumerate()
        {
            let spec = spec.with_readout(Readout::class_probe(vec![0, 1]));
            let ev = Evaluator::new(&spec, Task::Classify(&data)).unwrap();
            let theta = ParamVector::<f64>::random(&spec, &mut rng::stream(2, &[k as u64]));
            let a = ev.gradient(theta.values(), 1e-3).unwrap();
            let b = finite_diff_grad(|t| ev.metric(t, Split::Train), theta.values(), 1e-3).unwrap();
            assert_eq!(a, b, "{}", spec.id());
        }
    }

    #[test]
    fn label_width_must_match_readout() {
        let data = toy_data();
        let spec = NetworkSpec::sqp(vec![2, 3]);
        assert!(matches!(
            Evaluator::new(&spec, Task::Classify(&data)),
            Err(Error::DimensionMismatch { expected: 3, actual: 2 })
        ));
    }
}
