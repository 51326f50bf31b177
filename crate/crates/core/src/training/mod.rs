//! Finite-difference gradients, optimizers, costs and the multi-restart
//! training loop.

pub mod adam;
pub mod cost;
pub mod data;
pub mod evaluator;
pub mod grad;
pub mod train;

pub use adam::{adam_step, AdamState};
pub use cost::{ls_cost, unitary_objective};
pub use data::{ClassicalDataset, QuantumDataset, QuantumPair};
pub use evaluator::{Evaluator, Task};
pub use grad::{finite_diff_grad, parameter_shift_grad};
pub use train::{train, Goal, Optimizer, RestartTrace, TrainConfig, TrainResult};
