//! Dense few-qubit linear algebra: pure and mixed states, unitary application
//! on qubit subsets, partial traces, expectation values and fidelities.
//!
//! Basis convention: qubit 0 is the most significant bit of a basis index.

pub mod density;
pub mod ensemble;
pub mod gates;
pub mod kernel;
pub mod linalg;
pub mod matrix;
pub mod state;
pub mod subset;

pub use density::DensityMatrix;
pub use ensemble::Ensemble;
pub use gates::{Circuit, Gate};
pub use matrix::{Matrix, Unitary};
pub use state::StateVector;
pub use subset::QubitSubset;
