//! Fisher information and effective dimension.

pub mod effdim;
pub mod fisher;
pub mod model;

pub use effdim::{effective_dimension, normalize_fisher, EffDimConfig};
pub use fisher::{fisher_ls, fisher_ml, fisher_ml_model, fisher_ls_model, FisherKind, FisherMatrix};
pub use model::{NetworkModel, ProbabilityModel};
