//! Random target unitaries and quantum training pairs.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::qcore::gates::pauli_x;
use crate::qcore::linalg::{expm_hermitian, qr_unitary};
use crate::qcore::matrix::{Matrix, Unitary};
use crate::qcore::state::StateVector;
use crate::rng;
use crate::scalar::{c, cr};
use crate::training::data::{QuantumDataset, QuantumPair};

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

/// Haar-random unitary: orthonormalized complex Gaussian matrix. The
/// Gram–Schmidt `R` factor has a positive diagonal, which fixes the column
/// phases.
pub fn gen_haar_unitary(n_qubits: usize, seed: u64) -> Unitary<f64> {
    let mut r = rng::stream(seed, &[]);
    let dim = 1usize << n_qubits;
    let g = Matrix::from_fn(dim, |_, _| c(gaussian(&mut r), gaussian(&mut r)) * cr(std::f64::consts::FRAC_1_SQRT_2));
    Unitary::new(qr_unitary(&g)).expect("Gram–Schmidt output is unitary")
}

/// Haar-random pure state (normalized complex Gaussian vector).
pub fn haar_state<R: Rng + ?Sized>(n_qubits: usize, rng: &mut R) -> StateVector<f64> {
    let amps = (0..1usize << n_qubits).map(|_| c(gaussian(rng), gaussian(rng))).collect();
    StateVector::normalized(amps).expect("nonzero Gaussian vector")
}

/// Couplings and fields of a transverse-field Ising chain with periodic
/// boundary: `H = Σ_j J_j Z_j Z_{j+1 mod N} + h_j X_j`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IsingParams {
    pub couplings: Vec<f64>,
    pub fields: Vec<f64>,
}

impl IsingParams {
    pub fn n_qubits(&self) -> usize {
        self.couplings.len()
    }

    /// `J_j, h_j` uniform in `[−1, 1]`.
    pub fn random(n_qubits: usize, seed: u64) -> Self {
        let mut r = rng::stream(seed, &[]);
        let couplings = (0..n_qubits).map(|_| r.random_range(-1.0..=1.0)).collect();
        let fields = (0..n_qubits).map(|_| r.random_range(-1.0..=1.0)).collect();
        Self { couplings, fields }
    }

    pub fn hamiltonian(&self) -> Matrix<f64> {
        let n = self.n_qubits();
        assert_eq!(self.fields.len(), n, "one field per site");
        let dim = 1usize << n;
        let mut h = Matrix::zeros(dim);
        for idx in 0..dim {
            let z = |q: usize| if crate::qcore::kernel::qubit_is_set(idx, q, n) { -1.0 } else { 1.0 };
            let diag: f64 = (0..n).map(|j| self.couplings[j] * z(j) * z((j + 1) % n)).sum();
            h[(idx, idx)] = cr(diag);
        }
        let x = pauli_x::<f64>();
        for (j, &hj) in self.fields.iter().enumerate() {
            let term = embed(&x.scale(cr(hj)), j, n);
            h = h.add(&term);
        }
        h
    }
}

/// `I ⊗ m ⊗ I` with `m` on qubit `q`.
fn embed(m: &Matrix<f64>, q: usize, n: usize) -> Matrix<f64> {
    Matrix::identity(1 << q).kron(m).kron(&Matrix::identity(1 << (n - q - 1)))
}

/// `exp(−iH)` for the Ising generator, by eigendecomposition.
pub fn gen_ising_unitary(params: &IsingParams) -> Unitary<f64> {
    expm_hermitian(&params.hamiltonian(), 1.0)
}

/// `n_pairs` Haar-random inputs with targets `U|x⟩`.
pub fn make_quantum_training_set(u: &Unitary<f64>, n_pairs: usize, seed: u64) -> Vec<QuantumPair> {
    let mut r = rng::stream(seed, &[]);
    (0..n_pairs)
        .map(|_| {
            let x = haar_state(u.n_qubits(), &mut r);
            let y = StateVector::from_raw(u.n_qubits(), u.matrix().matvec(x.amplitudes()));
            (x, y)
        })
        .collect()
}

/// Training and validation pairs drawn from one stream.
pub fn make_quantum_dataset(u: &Unitary<f64>, n_train: usize, n_validation: usize, seed: u64) -> QuantumDataset {
    let mut all = make_quantum_training_set(u, n_train + n_validation, seed);
    let validation = all.split_off(n_train);
    QuantumDataset::new(all, validation).expect("consistent qubit counts")
}
