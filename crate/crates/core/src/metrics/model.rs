use crate::error::{Error, Result};
use crate::networks::{CompiledNetwork, NetworkInput, NetworkSpec, Readout};

/// A parameterized map from inputs to outcome probabilities.
pub trait ProbabilityModel {
    fn n_params(&self) -> usize;
    fn probabilities(&self, theta: &[f64], x: &[f64]) -> Result<Vec<f64>>;
}

/// A network evaluated on classical inputs.
#[derive(Clone, Debug)]
pub struct NetworkModel {
    spec: NetworkSpec,
}

impl NetworkModel {
    pub fn new(spec: NetworkSpec) -> Result<Self> {
        spec.validate()?;
        Ok(Self { spec })
    }

    /// Same as [`NetworkModel::new`] but rejects readouts that are not a
    /// probability distribution.
    pub fn distribution(spec: NetworkSpec) -> Result<Self> {
        if !matches!(spec.readout, Readout::Distribution { .. }) {
            return Err(Error::InvalidNetwork(
                "maximum-likelihood Fisher information needs a DISTRIBUTION readout".into(),
            ));
        }
        Self::new(spec)
    }

    pub fn spec(&self) -> &NetworkSpec {
        &self.spec
    }
}

impl ProbabilityModel for NetworkModel {
    fn n_params(&self) -> usize {
        self.spec.param_count()
    }

    fn probabilities(&self, theta: &[f64], x: &[f64]) -> Result<Vec<f64>> {
        Ok(CompiledNetwork::from_slice(&self.spec, theta)?
            .output(NetworkInput::Classical(x))?
            .probabilities)
    }
}
