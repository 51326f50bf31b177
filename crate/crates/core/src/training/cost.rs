use crate::error::Result;
use crate::networks::{NetworkSpec, ParamVector};
use crate::training::data::{ClassicalDataset, QuantumDataset};
use crate::training::evaluator::{Evaluator, Split, Task};

/// Mean squared distance between model outputs and labels on the training
/// split.
pub fn ls_cost(spec: &NetworkSpec, theta: &ParamVector<f64>, data: &ClassicalDataset) -> Result<f64> {
    Evaluator::new(spec, Task::Classify(data))?.metric(theta.values(), Split::Train)
}

/// Mean fidelity `⟨y|ρ_x|y⟩` over the training pairs.
pub fn unitary_objective(spec: &NetworkSpec, theta: &ParamVector<f64>, data: &QuantumDataset) -> Result<f64> {
    Evaluator::new(spec, Task::Unitary(data))?.metric(theta.values(), Split::Train)
}

/// `Σ_α (o_α − y_α)²`.
pub fn squared_distance(output: &[f64], label: &[f64]) -> f64 {
    output.iter().zip(label).map(|(o, y)| (o - y) * (o - y)).sum()
}
