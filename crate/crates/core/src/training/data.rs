use crate::error::{Error, Result};
use crate::qcore::state::StateVector;

/// Feature vectors with target vectors and a train/validation split.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassicalDataset {
    pub inputs: Vec<Vec<f64>>,
    pub labels: Vec<Vec<f64>>,
    pub train: Vec<usize>,
    pub validation: Vec<usize>,
}

impl ClassicalDataset {
    pub fn new(inputs: Vec<Vec<f64>>, labels: Vec<Vec<f64>>, train: Vec<usize>, validation: Vec<usize>) -> Result<Self> {
        if inputs.len() != labels.len() {
            return Err(Error::DimensionMismatch {
                expected: inputs.len(),
                actual: labels.len(),
            });
        }
        let mut seen = vec![false; inputs.len()];
        for &i in train.iter().chain(&validation) {
            if i >= inputs.len() {
                return Err(Error::DimensionMismatch {
                    expected: inputs.len(),
                    actual: i + 1,
                });
            }
            if seen[i] {
                return Err(Error::InvalidNetwork(format!("sample {i} used twice in the split")));
            }
            seen[i] = true;
        }
        Ok(Self {
            inputs,
            labels,
            train,
            validation,
        })
    }

    /// Every sample in the training split.
    pub fn train_only(inputs: Vec<Vec<f64>>, labels: Vec<Vec<f64>>) -> Result<Self> {
        let train = (0..inputs.len()).collect();
        Self::new(inputs, labels, train, Vec::new())
    }

    pub fn len(&self) -> usize {
        self.inputs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inputs.is_empty()
    }

    pub fn n_features(&self) -> usize {
        self.inputs.first().map_or(0, Vec::len)
    }

    pub fn label_len(&self) -> usize {
        self.labels.first().map_or(0, Vec::len)
    }
}

/// `(|x⟩, |y(x)⟩)`.
pub type QuantumPair = (StateVector<f64>, StateVector<f64>);

#[derive(Clone, Debug, PartialEq)]
pub struct QuantumDataset {
    pub train: Vec<QuantumPair>,
    pub validation: Vec<QuantumPair>,
}

impl QuantumDataset {
    pub fn new(train: Vec<QuantumPair>, validation: Vec<QuantumPair>) -> Result<Self> {
        let first = train.first().or(validation.first()).ok_or(Error::DimensionMismatch { expected: 1, actual: 0 })?;
        let (nx, ny) = (first.0.n_qubits(), first.1.n_qubits());
        for (x, y) in train.iter().chain(&validation) {
            if x.n_qubits() != nx || y.n_qubits() != ny {
                return Err(Error::DimensionMismatch {
                    expected: nx,
                    actual: x.n_qubits(),
                });
            }
        }
        Ok(Self { train, validation })
    }

    pub fn input_qubits(&self) -> usize {
        self.train.first().or(self.validation.first()).map_or(0, |p| p.0.n_qubits())
    }

    pub fn output_qubits(&self) -> usize {
        self.train.first().or(self.validation.first()).map_or(0, |p| p.1.n_qubits())
    }
}
