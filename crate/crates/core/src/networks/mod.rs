//! Ansatz construction and forward passes for the SQP, Hannover and HEA
//! families.

pub mod canonical;
pub mod feature_map;
pub mod forward;
pub mod hea;
pub mod params;
pub mod spec;
pub mod sqp;

pub use canonical::{build_canonical_unitary, CanonicalParams};
pub use feature_map::{easy_feature_map, encode, hard_feature_map};
pub use forward::{forward, forward_channel, model_output, CompiledNetwork, ModelOutput, NetworkInput};
pub use hea::build_hea_layer;
pub use params::{ParamVector, StageParams};
pub use spec::{Entangler, Family, FeatureMap, NetworkSpec, Readout, SignVariant};
pub use sqp::{build_sqp_unitary, sqp_activation, sqp_theta, SqpEdgeParams};
