//! Dataset generation, the adiabatic oracle and the experiment drivers.

pub mod adiabatic;
pub mod adiabatic_check;
pub mod capacity;
pub mod classify;
pub mod datasets;
pub mod effdim;
pub mod manifest;
pub mod progress;
pub mod targets;
pub mod unitary;

pub use adiabatic_check::{run_adiabatic_check, AdiabaticCheckConfig, AdiabaticReport};
pub use capacity::{run_capacity_experiment, CapacityConfig, CapacityReport};
pub use classify::{run_classification_experiment, ClassifyConfig, ClassifyReport};
pub use effdim::{run_effective_dimension_sweep, EffDimReport, EffDimSweepConfig};
pub use manifest::{FileDigest, Manifest, RunStatus};
pub use progress::Progress;
pub use unitary::{run_unitary_learning_experiment, TargetKind, UnitaryConfig, UnitaryReport};
