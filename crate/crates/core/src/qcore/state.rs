use crate::error::{Error, Result};
use crate::qcore::density::DensityMatrix;
use crate::qcore::kernel;
use crate::qcore::matrix::{log2_exact, Matrix, Unitary};
use crate::qcore::subset::QubitSubset;
use crate::scalar::{cone, czero, Real, C};

/// Pure state of an `n`-qubit register. Basis index bit `n - 1 - q` holds
/// qubit `q`, so qubit 0 is the most significant bit.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector<T> {
    n_qubits: usize,
    amps: Vec<C<T>>,
}

impl<T: Real> StateVector<T> {
    /// `|0…0⟩`.
    pub fn zero(n_qubits: usize) -> Self {
        Self::basis(n_qubits, 0)
    }

    pub fn basis(n_qubits: usize, index: usize) -> Self {
        let mut amps = vec![czero(); 1 << n_qubits];
        amps[index] = cone();
        Self { n_qubits, amps }
    }

    /// Basis state from a bit string, qubit 0 first.
    pub fn from_bits(bits: &[bool]) -> Self {
        let index = bits.iter().fold(0usize, |acc, &b| (acc << 1) | b as usize);
        Self::basis(bits.len(), index)
    }

    /// Checks the length is a power of two and the norm is one.
    pub fn new(amps: Vec<C<T>>) -> Result<Self> {
        let n_qubits = log2_exact(amps.len())?;
        let s = Self { n_qubits, amps };
        let dev = (s.norm_sqr() - T::one()).abs();
        if !(dev <= T::tol()) {
            return Err(Error::NotNormalized(dev.as_f64()));
        }
        Ok(s)
    }

    /// Rescales arbitrary amplitudes to unit norm.
    pub fn normalized(amps: Vec<C<T>>) -> Result<Self> {
        let n_qubits = log2_exact(amps.len())?;
        let norm = amps.iter().map(|a| a.norm_sqr()).fold(T::zero(), |a, b| a + b).sqrt();
        if norm == T::zero() {
            return Err(Error::NotNormalized(1.0));
        }
        Ok(Self {
            n_qubits,
            amps: amps.into_iter().map(|a| a / norm).collect(),
        })
    }

    pub(crate) fn from_raw(n_qubits: usize, amps: Vec<C<T>>) -> Self {
        debug_assert_eq!(amps.len(), 1 << n_qubits);
        Self { n_qubits, amps }
    }

    #[inline]
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    #[inline]
    pub fn amplitudes(&self) -> &[C<T>] {
        &self.amps
    }

    #[inline]
    pub(crate) fn amplitudes_mut(&mut self) -> &mut [C<T>] {
        &mut self.amps
    }

    pub fn into_amplitudes(self) -> Vec<C<T>> {
        self.amps
    }

    pub fn norm_sqr(&self) -> T {
        self.amps.iter().map(|a| a.norm_sqr()).fold(T::zero(), |a, b| a + b)
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> C<T> {
        self.amps
            .iter()
            .zip(&other.amps)
            .fold(czero(), |acc, (a, b)| acc + a.conj() * b)
    }

    /// `|⟨self|other⟩|²`.
    pub fn overlap(&self, other: &Self) -> T {
        self.inner(other).norm_sqr()
    }

    pub fn probabilities(&self) -> Vec<T> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Probability that `qubit` reads 1.
    pub fn excitation(&self, qubit: usize) -> T {
        self.amps
            .iter()
            .enumerate()
            .filter(|(i, _)| kernel::qubit_is_set(*i, qubit, self.n_qubits))
            .map(|(_, a)| a.norm_sqr())
            .fold(T::zero(), |a, b| a + b)
    }

    /// `self ⊗ other`, `self` on the leading qubits.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut amps = Vec::with_capacity(self.dim() * other.dim());
        for &a in &self.amps {
            amps.extend(other.amps.iter().map(|&b| a * b));
        }
        Self {
            n_qubits: self.n_qubits + other.n_qubits,
            amps,
        }
    }

    /// `self ⊗ |0…0⟩` on `k` appended qubits.
    pub fn extend_with_zeros(&self, k: usize) -> Self {
        let mut amps = vec![czero(); self.dim() << k];
        for (i, &a) in self.amps.iter().enumerate() {
            amps[i << k] = a;
        }
        Self {
            n_qubits: self.n_qubits + k,
            amps,
        }
    }

    pub fn to_density(&self) -> DensityMatrix<T> {
        DensityMatrix::from_pure(self)
    }

    /// Applies `u` on `targets` (`I ⊗ u ⊗ I`).
    pub fn apply_unitary(&self, u: &Unitary<T>, targets: &QubitSubset) -> Result<Self> {
        let mut out = self.clone();
        out.apply_unitary_in_place(u, targets)?;
        Ok(out)
    }

    pub fn apply_unitary_in_place(&mut self, u: &Unitary<T>, targets: &QubitSubset) -> Result<()> {
        check_operator(u.matrix(), targets, self.n_qubits)?;
        if targets.len() == 1 {
            let m = u.matrix();
            let b = [m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]];
            kernel::apply_single(&mut self.amps, self.n_qubits, targets.indices()[0], &b);
        } else {
            kernel::apply_dense(&mut self.amps, self.n_qubits, u.matrix(), targets.indices());
        }
        Ok(())
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(&a, &b)| (a - b).norm())
            .fold(T::zero(), T::max)
    }

    pub fn cast<U: Real>(&self) -> StateVector<U> {
        StateVector {
            n_qubits: self.n_qubits,
            amps: self
                .amps
                .iter()
                .map(|z| C::new(U::lit(z.re.as_f64()), U::lit(z.im.as_f64())))
                .collect(),
        }
    }
}

pub(crate) fn check_operator<T: Real>(m: &Matrix<T>, targets: &QubitSubset, n_qubits: usize) -> Result<()> {
    targets.check(n_qubits)?;
    let expected = 1usize << targets.len();
    if m.dim() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            actual: m.dim(),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::gates::{hadamard, pauli_x};

    #[test]
    fn bit_order_qubit_zero_is_msb() {
        let s = StateVector::<f64>::from_bits(&[true, false]);
        assert_eq!(s.amplitudes()[2], cone());
        assert_eq!(s.excitation(0), 1.0);
        assert_eq!(s.excitation(1), 0.0);
    }

    #[test]
    fn x_flips_zero_to_one() {
        let x = Unitary::new(pauli_x::<f64>()).unwrap();
        let s = StateVector::zero(1).apply_unitary(&x, &QubitSubset::single(0)).unwrap();
        assert_eq!(s, StateVector::basis(1, 1));
    }

    #[test]
    fn identity_leaves_state_unchanged() {
        let s = StateVector::<f64>::normalized(vec![C::new(0.3, 0.1), C::new(-0.2, 0.5), C::new(0.7, 0.0), C::new(0.0, -0.4)]).unwrap();
        let id = Unitary::identity(2);
        let out = s.apply_unitary(&id, &QubitSubset::range(0, 2)).unwrap();
        assert_eq!(out.max_abs_diff(&s), 0.0);
    }

    #[test]
    fn hadamard_is_an_involution() {
        let h = Unitary::new(hadamard::<f64>()).unwrap();
        let q = QubitSubset::single(0);
        let s = StateVector::zero(1).apply_unitary(&h, &q).unwrap().apply_unitary(&h, &q).unwrap();
        assert!(s.max_abs_diff(&StateVector::zero(1)) < 1e-12);
    }

    #[test]
    fn apply_errors() {
        let h = Unitary::new(hadamard::<f64>()).unwrap();
        let s = StateVector::<f64>::zero(2);
        assert!(matches!(
            s.apply_unitary(&h, &QubitSubset::range(0, 2)),
            Err(Error::DimensionMismatch { expected: 4, actual: 2 })
        ));
        assert!(matches!(
            s.apply_unitary(&h, &QubitSubset::single(2)),
            Err(Error::QubitOutOfRange { .. })
        ));
        assert!(StateVector::<f64>::new(vec![cone(), cone()]).is_err());
        assert!(StateVector::<f64>::new(vec![cone(), czero(), czero()]).is_err());
    }
}
