//! Simulation and benchmarking of sigmoid quantum perceptron (SQP)
//! networks against the Hannover feedforward QNN and a hardware-efficient
//! ansatz (HEA).
//!
//! The simulator ([`qcore`]) and the network builders ([`networks`]) are
//! generic over the real scalar type; the aliases below pin `f64`, which is
//! what the metrics, training loop and experiment drivers use.

pub mod cli;
pub mod error;
pub mod experiments;
pub mod metrics;
pub mod networks;
pub mod qcore;
pub mod rng;
pub mod scalar;
pub mod training;

pub use error::{Error, Result};
pub use scalar::Real;

pub type Complex = num_complex::Complex<f64>;
pub type StateVector = qcore::StateVector<f64>;
pub type DensityMatrix = qcore::DensityMatrix<f64>;
pub type Ensemble = qcore::Ensemble<f64>;
pub type Matrix = qcore::Matrix<f64>;
pub type Unitary = qcore::Unitary<f64>;
pub type ParamVector = networks::ParamVector<f64>;
pub type SqpEdgeParams = networks::SqpEdgeParams<f64>;
