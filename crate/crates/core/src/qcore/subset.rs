use crate::error::{Error, Result};

/// Ordered list of distinct qubit positions. The first entry addresses the
/// most significant bit of an operator's local index.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QubitSubset(Vec<usize>);

impl QubitSubset {
    /// Validates the indices against an `n_qubits` register.
    pub fn new(indices: impl Into<Vec<usize>>, n_qubits: usize) -> Result<Self> {
        let indices = indices.into();
        let mut seen = vec![false; n_qubits];
        for &q in &indices {
            if q >= n_qubits {
                return Err(Error::QubitOutOfRange { index: q, n_qubits });
            }
            if seen[q] {
                return Err(Error::DuplicateQubit(q));
            }
            seen[q] = true;
        }
        Ok(Self(indices))
    }

    /// Contiguous range `start..start + len`.
    pub fn range(start: usize, len: usize) -> Self {
        Self((start..start + len).collect())
    }

    pub fn single(q: usize) -> Self {
        Self(vec![q])
    }

    /// Checks the subset against a register size.
    pub fn check(&self, n_qubits: usize) -> Result<()> {
        Self::new(self.0.clone(), n_qubits).map(|_| ())
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn contains(&self, q: usize) -> bool {
        self.0.contains(&q)
    }

    /// Qubits of an `n_qubits` register not in this subset, ascending.
    pub fn complement(&self, n_qubits: usize) -> Vec<usize> {
        (0..n_qubits).filter(|q| !self.contains(*q)).collect()
    }
}

impl AsRef<[usize]> for QubitSubset {
    fn as_ref(&self) -> &[usize] {
        &self.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(QubitSubset::new(vec![0, 2], 3).is_ok());
        assert!(matches!(
            QubitSubset::new(vec![3], 3),
            Err(Error::QubitOutOfRange { index: 3, n_qubits: 3 })
        ));
        assert!(matches!(QubitSubset::new(vec![1, 1], 3), Err(Error::DuplicateQubit(1))));
        assert_eq!(QubitSubset::range(1, 2).complement(4), vec![0, 3]);
    }
}
