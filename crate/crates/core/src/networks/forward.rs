//! Forward passes. Feedforward families run layer by layer: fresh qubits of
//! the next layer are appended in `|0⟩`, the inter-layer gates act, and the
//! previous layer is traced out. HEA evolves a single register unitarily.
//!
//! Within a feedforward stage the register holds the previous layer on
//! qubits `0..m` and the new layer on `m..m+k`.

use crate::error::{Error, Result};
use crate::networks::canonical::build_canonical_unitary;
use crate::networks::feature_map::encode;
use crate::networks::hea::build_hea_layer;
use crate::networks::params::{ParamVector, StageParams};
use crate::networks::spec::{NetworkSpec, Readout};
use crate::networks::sqp::sqp_gate;
use crate::qcore::density::DensityMatrix;
use crate::qcore::ensemble::Ensemble;
use crate::qcore::gates::{Circuit, Gate};
use crate::qcore::state::StateVector;
use crate::qcore::subset::QubitSubset;
use crate::scalar::Real;

/// Network input: classical features go through the network's feature map,
/// quantum inputs enter the input layer directly.
#[derive(Clone, Copy, Debug)]
pub enum NetworkInput<'a, T> {
    Classical(&'a [T]),
    Pure(&'a StateVector<T>),
    Mixed(&'a DensityMatrix<T>),
}

impl<'a, T> From<&'a StateVector<T>> for NetworkInput<'a, T> {
    fn from(s: &'a StateVector<T>) -> Self {
        NetworkInput::Pure(s)
    }
}

impl<'a, T> From<&'a DensityMatrix<T>> for NetworkInput<'a, T> {
    fn from(r: &'a DensityMatrix<T>) -> Self {
        NetworkInput::Mixed(r)
    }
}

impl<'a, T> From<&'a [T]> for NetworkInput<'a, T> {
    fn from(x: &'a [T]) -> Self {
        NetworkInput::Classical(x)
    }
}

/// Readout values, one per class probe or per basis outcome.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelOutput<T> {
    pub probabilities: Vec<T>,
}

/// One layer transition with its gates on the stage register.
#[derive(Clone, Debug)]
pub struct Stage<T> {
    /// Width of the layer traced out at the end (0 for HEA).
    pub previous: usize,
    /// Fresh qubits appended before the gates (0 for HEA).
    pub fresh: usize,
    pub circuit: Circuit<T>,
}

/// A spec bound to concrete parameters.
#[derive(Clone, Debug)]
pub struct CompiledNetwork<T> {
    spec: NetworkSpec,
    stages: Vec<Stage<T>>,
}

fn compile_stage<T: Real>(spec: &NetworkSpec, index: usize, params: &StageParams<T>) -> Result<Stage<T>> {
    match params {
        StageParams::Hea(angles) => {
            let n = spec.layer_widths[0];
            let gates = build_hea_layer(angles, n, spec.entangler)?;
            Ok(Stage {
                previous: 0,
                fresh: 0,
                circuit: Circuit::from_gates(n, gates)?,
            })
        }
        StageParams::Sqp(edges) => {
            let (m, k) = (spec.layer_widths[index], spec.layer_widths[index + 1]);
            let gates = edges
                .iter()
                .enumerate()
                .map(|(j, e)| sqp_gate(e, (0..m).collect(), m + j, spec.sign))
                .collect();
            Ok(Stage {
                previous: m,
                fresh: k,
                circuit: Circuit::from_gates(m + k, gates)?,
            })
        }
        StageParams::Hannover(rows) => {
            let (m, k) = (spec.layer_widths[index], spec.layer_widths[index + 1]);
            let mut gates = Vec::with_capacity(m * k);
            for (j, row) in rows.iter().enumerate() {
                for (i, p) in row.iter().enumerate() {
                    gates.push(Gate::dense(vec![i, m + j], &build_canonical_unitary(p)));
                }
            }
            Ok(Stage {
                previous: m,
                fresh: k,
                circuit: Circuit::from_gates(m + k, gates)?,
            })
        }
    }
}

impl<T: Real> CompiledNetwork<T> {
    pub fn new(spec: &NetworkSpec, theta: &ParamVector<T>) -> Result<Self> {
        spec.validate()?;
        let stages = theta
            .unflatten(spec)?
            .iter()
            .enumerate()
            .map(|(i, p)| compile_stage(spec, i, p))
            .collect::<Result<_>>()?;
        Ok(Self {
            spec: spec.clone(),
            stages,
        })
    }

    /// Compiles from a raw slice, checking its length.
    pub fn from_slice(spec: &NetworkSpec, theta: &[T]) -> Result<Self> {
        Self::new(spec, &ParamVector::new(spec, theta.to_vec())?)
    }

    pub fn spec(&self) -> &NetworkSpec {
        &self.spec
    }

    pub fn stages(&self) -> &[Stage<T>] {
        &self.stages
    }

    /// Input-layer state as an ensemble.
    pub fn prepare_input(&self, input: NetworkInput<'_, T>) -> Result<Ensemble<T>> {
        let width = self.spec.input_width();
        let check = |n: usize| {
            if n == width {
                Ok(())
            } else {
                Err(Error::DimensionMismatch {
                    expected: width,
                    actual: n,
                })
            }
        };
        match input {
            NetworkInput::Classical(x) => Ok(Ensemble::from_pure(&encode(self.spec.feature_map, x, width)?)),
            NetworkInput::Pure(s) => {
                check(s.n_qubits())?;
                Ok(Ensemble::from_pure(s))
            }
            NetworkInput::Mixed(r) => {
                check(r.n_qubits())?;
                Ok(Ensemble::from_density(r))
            }
        }
    }

    /// Runs stages `from..` on a state living on the register that enters
    /// stage `from`.
    pub fn run_from(&self, from: usize, mut state: Ensemble<T>) -> Result<Ensemble<T>> {
        for stage in &self.stages[from..] {
            state = run_stage(stage, state)?;
        }
        Ok(state)
    }

    /// Output-layer state.
    pub fn forward_ensemble(&self, input: NetworkInput<'_, T>) -> Result<Ensemble<T>> {
        self.run_from(0, self.prepare_input(input)?)
    }

    pub fn forward(&self, input: NetworkInput<'_, T>) -> Result<DensityMatrix<T>> {
        Ok(self.forward_ensemble(input)?.to_density())
    }

    pub fn output(&self, input: NetworkInput<'_, T>) -> Result<ModelOutput<T>> {
        Ok(readout(&self.spec.readout, &self.forward_ensemble(input)?))
    }
}

/// Applies one stage to an ensemble on its entry register.
/// Refactors a mixed stage input down to at most `2^n` components before
/// fresh qubits multiply its size. Idempotent.
pub fn condense_input<T: Real>(stage: &Stage<T>, state: Ensemble<T>) -> Ensemble<T> {
    if stage.fresh > 0 {
        state.compress()
    } else {
        state
    }
}

pub fn run_stage<T: Real>(stage: &Stage<T>, state: Ensemble<T>) -> Result<Ensemble<T>> {
    let mut state = condense_input(stage, state);
    if stage.fresh > 0 {
        state = state.extend_with_zeros(stage.fresh);
    }
    state.apply_circuit(&stage.circuit)?;
    if stage.previous > 0 {
        state = state.partial_trace(&QubitSubset::range(0, stage.previous))?;
    }
    Ok(state)
}

/// Readout of an output-layer ensemble.
pub fn readout<T: Real>(mode: &Readout, state: &Ensemble<T>) -> ModelOutput<T> {
    let qubits = mode.qubits(state.n_qubits());
    let probabilities = match mode {
        Readout::ClassProbe { .. } => qubits.iter().map(|&q| state.excitation(q)).collect(),
        Readout::Distribution { .. } => state.marginal(&qubits),
    };
    ModelOutput { probabilities }
}

pub fn forward<T: Real>(spec: &NetworkSpec, theta: &ParamVector<T>, input: NetworkInput<'_, T>) -> Result<DensityMatrix<T>> {
    CompiledNetwork::new(spec, theta)?.forward(input)
}

pub fn model_output<T: Real>(spec: &NetworkSpec, theta: &ParamVector<T>, input: NetworkInput<'_, T>) -> Result<ModelOutput<T>> {
    CompiledNetwork::new(spec, theta)?.output(input)
}

/// Literal density-matrix evaluation: every gate is applied as `UρU†` and
/// each layer is removed with an explicit partial trace. Slower than
/// [`forward`]; kept as a cross-check.
pub fn forward_channel<T: Real>(spec: &NetworkSpec, theta: &ParamVector<T>, input: NetworkInput<'_, T>) -> Result<DensityMatrix<T>> {
    let net = CompiledNetwork::new(spec, theta)?;
    let mut rho = net.prepare_input(input)?.to_density();
    for stage in net.stages() {
        if stage.fresh > 0 {
            rho = rho.extend_with_zeros(stage.fresh);
        }
        for g in stage.circuit.gates() {
            let targets = g.qubits();
            rho.conjugate_in_place(&g.local_matrix(), &targets);
        }
        if stage.previous > 0 {
            rho = rho.partial_trace(&QubitSubset::range(0, stage.previous))?;
        }
    }
    Ok(rho)
}
