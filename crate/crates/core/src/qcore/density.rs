use crate::error::{Error, Result};
use crate::qcore::kernel;
use crate::qcore::linalg;
use crate::qcore::matrix::{log2_exact, Matrix, Unitary};
use crate::qcore::state::{check_operator, StateVector};
use crate::qcore::subset::QubitSubset;
use crate::scalar::{cr, czero, Real, C};

/// Eigenvalue floor for positivity checks; absorbs rounding accumulated along
/// channel chains.
pub const PSD_FLOOR: f64 = -1e-8;

/// Mixed state of an `n`-qubit register (same bit order as [`StateVector`]).
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix<T> {
    n_qubits: usize,
    m: Matrix<T>,
}

impl<T: Real> DensityMatrix<T> {
    /// Validates hermiticity, unit trace and positivity.
    pub fn new(m: Matrix<T>) -> Result<Self> {
        let n_qubits = log2_exact(m.dim())?;
        let herm = m.hermiticity_defect();
        if !(herm <= T::tol()) {
            return Err(Error::NotHermitian(herm.as_f64()));
        }
        let tr = (m.trace().re - T::one()).abs();
        if !(tr <= T::tol()) {
            return Err(Error::NotNormalized(tr.as_f64()));
        }
        let rho = Self { n_qubits, m };
        let min = rho.min_eigenvalue();
        if min < psd_floor::<T>() {
            return Err(Error::NotPositive(min.as_f64()));
        }
        Ok(rho)
    }

    pub(crate) fn from_matrix_unchecked(m: Matrix<T>) -> Self {
        let n_qubits = log2_exact(m.dim()).expect("power-of-two density matrix");
        Self { n_qubits, m }
    }

    pub fn from_pure(psi: &StateVector<T>) -> Self {
        let a = psi.amplitudes();
        Self {
            n_qubits: psi.n_qubits(),
            m: Matrix::from_fn(a.len(), |r, c| a[r] * a[c].conj()),
        }
    }

    /// `|i⟩⟨i|`.
    pub fn basis(n_qubits: usize, index: usize) -> Self {
        Self::from_pure(&StateVector::basis(n_qubits, index))
    }

    /// `I / 2^n`.
    pub fn maximally_mixed(n_qubits: usize) -> Self {
        let dim = 1usize << n_qubits;
        let p = cr(T::one() / T::from_usize(dim).unwrap());
        Self {
            n_qubits,
            m: Matrix::diagonal(&vec![p; dim]),
        }
    }

    #[inline]
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.m.dim()
    }

    #[inline]
    pub fn matrix(&self) -> &Matrix<T> {
        &self.m
    }

    pub fn into_matrix(self) -> Matrix<T> {
        self.m
    }

    pub fn trace(&self) -> T {
        self.m.trace().re
    }

    /// `Tr[ρ²]`.
    pub fn purity(&self) -> T {
        self.m
            .as_slice()
            .iter()
            .map(|z| z.norm_sqr())
            .fold(T::zero(), |a, b| a + b)
    }

    /// Computational-basis populations.
    pub fn probabilities(&self) -> Vec<T> {
        (0..self.dim()).map(|i| self.m[(i, i)].re).collect()
    }

    /// Probability that `qubit` reads 1.
    pub fn excitation(&self, qubit: usize) -> T {
        (0..self.dim())
            .filter(|&i| kernel::qubit_is_set(i, qubit, self.n_qubits))
            .map(|i| self.m[(i, i)].re)
            .fold(T::zero(), |a, b| a + b)
    }

    pub fn eigenvalues(&self) -> Vec<T> {
        linalg::hermitian_eigen(&self.m).values
    }

    pub fn min_eigenvalue(&self) -> T {
        self.eigenvalues().into_iter().fold(T::infinity(), T::min)
    }

    /// Hermitian, unit trace and eigenvalues above [`PSD_FLOOR`].
    pub fn is_valid(&self) -> bool {
        self.m.hermiticity_defect() <= T::tol()
            && (self.trace() - T::one()).abs() <= T::tol()
            && self.min_eigenvalue() >= psd_floor::<T>()
    }

    /// `UρU†` with `u` acting on `targets`.
    pub fn apply_unitary(&self, u: &Unitary<T>, targets: &QubitSubset) -> Result<Self> {
        check_operator(u.matrix(), targets, self.n_qubits)?;
        let mut out = self.clone();
        out.conjugate_in_place(u.matrix(), targets.indices());
        Ok(out)
    }

    /// Viewing the row-major entries as a `2n`-qubit vector, row bits are
    /// qubits `0..n` and column bits are qubits `n..2n`.
    pub(crate) fn conjugate_in_place(&mut self, u: &Matrix<T>, targets: &[usize]) {
        let n2 = 2 * self.n_qubits;
        let cols: Vec<usize> = targets.iter().map(|q| q + self.n_qubits).collect();
        let data = self.m.as_mut_slice();
        kernel::apply_dense(data, n2, u, targets);
        kernel::apply_dense(data, n2, &u.conj(), &cols);
    }

    /// `ρ ⊗ |0…0⟩⟨0…0|` on `k` appended qubits.
    pub fn extend_with_zeros(&self, k: usize) -> Self {
        let dim = self.dim();
        let mut m = Matrix::zeros(dim << k);
        for r in 0..dim {
            for c in 0..dim {
                m[(r << k, c << k)] = self.m[(r, c)];
            }
        }
        Self {
            n_qubits: self.n_qubits + k,
            m,
        }
    }

    /// Reduced state on the qubits not in `discard`, kept in ascending order.
    pub fn partial_trace(&self, discard: &QubitSubset) -> Result<Self> {
        discard.check(self.n_qubits)?;
        if discard.len() >= self.n_qubits {
            return Err(Error::TraceAll(self.n_qubits));
        }
        let keep = discard.complement(self.n_qubits);
        let keep_idx = scatter_table(&keep, self.n_qubits);
        let disc_idx = scatter_table(discard.indices(), self.n_qubits);
        let kd = keep_idx.len();
        let mut m = Matrix::zeros(kd);
        for (r, &kr) in keep_idx.iter().enumerate() {
            for (c, &kc) in keep_idx.iter().enumerate() {
                let mut acc = czero();
                for &e in &disc_idx {
                    acc = acc + self.m[(kr | e, kc | e)];
                }
                m[(r, c)] = acc;
            }
        }
        Ok(Self {
            n_qubits: keep.len(),
            m,
        })
    }

    /// `Tr[ρ (I ⊗ O ⊗ I)]` with `observable` on `targets`.
    pub fn expectation(&self, observable: &Matrix<T>, targets: &QubitSubset) -> Result<T> {
        check_operator(observable, targets, self.n_qubits)?;
        let herm = observable.hermiticity_defect();
        if !(herm <= T::tol()) {
            return Err(Error::NotHermitian(herm.as_f64()));
        }
        let mut data = self.m.as_slice().to_vec();
        kernel::apply_dense(&mut data, 2 * self.n_qubits, observable, targets.indices());
        let dim = self.dim();
        let tr = (0..dim).fold(czero::<T>(), |acc, i| acc + data[i * dim + i]);
        let scale = observable
            .as_slice()
            .iter()
            .map(|z| z.norm())
            .fold(T::one(), T::max);
        assert!(
            tr.im.abs() <= T::tol() * scale,
            "expectation of a Hermitian observable has imaginary part {}",
            tr.im
        );
        Ok(tr.re)
    }

    /// `⟨y|ρ|y⟩`.
    pub fn fidelity_pure(&self, target: &StateVector<T>) -> Result<T> {
        if target.n_qubits() != self.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.n_qubits,
                actual: target.n_qubits(),
            });
        }
        let y = target.amplitudes();
        let my = self.m.matvec(y);
        let f = y.iter().zip(&my).fold(czero(), |acc: C<T>, (a, b)| acc + a.conj() * b);
        Ok(f.re)
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.m.max_abs_diff(&other.m)
    }
}

pub(crate) fn psd_floor<T: Real>() -> T {
    T::lit(PSD_FLOOR).min(-T::tol())
}

/// Full-register index contribution of every bit pattern of `qubits`, first
/// qubit most significant.
pub(crate) fn scatter_table(qubits: &[usize], n_qubits: usize) -> Vec<usize> {
    let k = qubits.len();
    (0..1usize << k)
        .map(|local| {
            qubits
                .iter()
                .enumerate()
                .filter(|(t, _)| (local >> (k - 1 - t)) & 1 == 1)
                .fold(0usize, |acc, (_, &q)| acc | (1 << kernel::bit_position(q, n_qubits)))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::gates::{pauli_z, ry};
    use crate::scalar::cone;

    fn bell() -> StateVector<f64> {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        StateVector::new(vec![cr(h), czero(), czero(), cr(h)]).unwrap()
    }

    #[test]
    fn extend_basis_state() {
        let rho = DensityMatrix::<f64>::basis(1, 1).extend_with_zeros(1);
        assert_eq!(rho, DensityMatrix::basis(2, 0b10));
        assert!((rho.trace() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn extend_maximally_mixed() {
        // Kronecker oracle: (I/2) ⊗ |0⟩⟨0|.
        let zero = DensityMatrix::<f64>::basis(1, 0);
        let expected = DensityMatrix::maximally_mixed(1).matrix().kron(zero.matrix());
        let rho = DensityMatrix::<f64>::maximally_mixed(1).extend_with_zeros(1);
        assert_eq!(rho.matrix(), &expected);
        assert_eq!(rho.probabilities(), vec![0.5, 0.0, 0.5, 0.0]);
    }

    #[test]
    fn bell_marginals_are_maximally_mixed() {
        let rho = bell().to_density();
        for q in 0..2 {
            let red = rho.partial_trace(&QubitSubset::single(q)).unwrap();
            assert!(red.max_abs_diff(&DensityMatrix::maximally_mixed(1)) < 1e-12);
        }
    }

    #[test]
    fn trace_product_state() {
        let rho = DensityMatrix::<f64>::basis(2, 0b01);
        let red = rho.partial_trace(&QubitSubset::single(1)).unwrap();
        assert_eq!(red, DensityMatrix::basis(1, 0));
        assert!(matches!(
            rho.partial_trace(&QubitSubset::range(0, 2)),
            Err(Error::TraceAll(2))
        ));
    }

    #[test]
    fn z_expectations() {
        let z = pauli_z::<f64>();
        let q = QubitSubset::single(0);
        assert_eq!(DensityMatrix::basis(1, 0).expectation(&z, &q).unwrap(), 1.0);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let plus = StateVector::new(vec![cr(h), cr(h)]).unwrap().to_density();
        assert!(plus.expectation(&z, &q).unwrap().abs() < 1e-15);
        let theta: f64 = 0.7;
        let psi = StateVector::from_raw(1, ry(theta).matvec(&[cone(), czero()]));
        let e = psi.to_density().expectation(&z, &q).unwrap();
        assert!((e - theta.cos()).abs() < 1e-14);
    }

    #[test]
    fn expectation_rejects_non_hermitian() {
        let m = Matrix::<f64>::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        let r = DensityMatrix::basis(1, 0).expectation(&m, &QubitSubset::single(0));
        assert!(matches!(r, Err(Error::NotHermitian(_))));
    }

    #[test]
    fn fidelity_examples() {
        let y = bell();
        assert!((y.to_density().fidelity_pure(&y).unwrap() - 1.0).abs() < 1e-12);
        let mixed = DensityMatrix::maximally_mixed(2);
        assert!((mixed.fidelity_pure(&y).unwrap() - 0.25).abs() < 1e-15);
        let one = DensityMatrix::<f64>::basis(1, 1);
        assert_eq!(one.fidelity_pure(&StateVector::zero(1)).unwrap(), 0.0);
        assert!(one.fidelity_pure(&y).is_err());
    }

    #[test]
    fn validation_rejects_bad_matrices() {
        let neg = Matrix::<f64>::from_real_rows(&[&[1.5, 0.0], &[0.0, -0.5]]);
        assert!(matches!(DensityMatrix::new(neg), Err(Error::NotPositive(_))));
        let tr = Matrix::<f64>::from_real_rows(&[&[0.5, 0.0], &[0.0, 0.4]]);
        assert!(matches!(DensityMatrix::new(tr), Err(Error::NotNormalized(_))));
        let ok = Matrix::<f64>::from_real_rows(&[&[0.5, 0.5], &[0.5, 0.5]]);
        assert!(DensityMatrix::new(ok).is_ok());
    }
}
