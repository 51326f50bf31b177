//! Mixed states as a list of unnormalized pure components,
//! `ρ = Σ_k |ψ_k⟩⟨ψ_k|`. Gate application costs one state-vector pass per
//! component instead of a two-sided density-matrix update, which keeps the
//! layered networks cheap.

use crate::error::{Error, Result};
use crate::qcore::density::{scatter_table, DensityMatrix};
use crate::qcore::gates::{Circuit, Gate};
use crate::qcore::kernel;
use crate::qcore::linalg::psd_factor;
use crate::qcore::matrix::Matrix;
use crate::qcore::state::StateVector;
use crate::qcore::subset::QubitSubset;
use crate::scalar::{czero, Real, C};

#[derive(Clone, Debug)]
pub struct Ensemble<T> {
    n_qubits: usize,
    members: Vec<Vec<C<T>>>,
}

impl<T: Real> Ensemble<T> {
    pub fn from_pure(psi: &StateVector<T>) -> Self {
        Self {
            n_qubits: psi.n_qubits(),
            members: vec![psi.amplitudes().to_vec()],
        }
    }

    pub fn from_density(rho: &DensityMatrix<T>) -> Self {
        Self {
            n_qubits: rho.n_qubits(),
            members: psd_factor(rho.matrix(), T::epsilon()),
        }
    }

    #[inline]
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.members.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[Vec<C<T>>] {
        &self.members
    }

    pub fn trace(&self) -> T {
        self.members
            .iter()
            .flat_map(|m| m.iter())
            .map(|a| a.norm_sqr())
            .fold(T::zero(), |a, b| a + b)
    }

    pub fn extend_with_zeros(&self, k: usize) -> Self {
        let members = self
            .members
            .iter()
            .map(|m| {
                let mut out = vec![czero(); m.len() << k];
                for (i, &a) in m.iter().enumerate() {
                    out[i << k] = a;
                }
                out
            })
            .collect();
        Self {
            n_qubits: self.n_qubits + k,
            members,
        }
    }

    /// Applies a gate already validated against this register.
    pub fn apply_gate(&mut self, gate: &Gate<T>) {
        for m in &mut self.members {
            gate.apply(m, self.n_qubits);
        }
    }

    pub fn apply_circuit(&mut self, circuit: &Circuit<T>) -> Result<()> {
        if circuit.n_qubits() != self.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.n_qubits,
                actual: circuit.n_qubits(),
            });
        }
        for m in &mut self.members {
            circuit.apply_amplitudes(m);
        }
        Ok(())
    }

    /// Reduced ensemble on the remaining qubits (ascending order). The
    /// component count grows by `2^|discard|`; see [`Ensemble::compress`].
    pub fn partial_trace(&self, discard: &QubitSubset) -> Result<Self> {
        discard.check(self.n_qubits)?;
        if discard.len() >= self.n_qubits {
            return Err(Error::TraceAll(self.n_qubits));
        }
        let tiny = T::epsilon() * T::epsilon();
        let keep = discard.complement(self.n_qubits);
        if discard.indices().iter().enumerate().all(|(i, &q)| i == q) {
            // Leading qubits: each component splits into contiguous chunks.
            let chunk = 1usize << keep.len();
            let members = self
                .members
                .iter()
                .flat_map(|m| m.chunks_exact(chunk))
                .filter(|v| v.iter().map(|a| a.norm_sqr()).fold(T::zero(), |a, b| a + b) > tiny)
                .map(|v| v.to_vec())
                .collect();
            return Ok(Self {
                n_qubits: keep.len(),
                members,
            });
        }
        let keep_idx = scatter_table(&keep, self.n_qubits);
        let disc_idx = scatter_table(discard.indices(), self.n_qubits);
        let mut members = Vec::with_capacity(self.members.len() * disc_idx.len());
        for m in &self.members {
            for &e in &disc_idx {
                let v: Vec<C<T>> = keep_idx.iter().map(|&k| m[k | e]).collect();
                let w = v.iter().map(|a| a.norm_sqr()).fold(T::zero(), |a, b| a + b);
                if w > tiny {
                    members.push(v);
                }
            }
        }
        Ok(Self {
            n_qubits: keep.len(),
            members,
        })
    }

    /// Re-factors the state into at most `2^n` components when it holds more.
    pub fn compress(self) -> Self {
        let dim = 1usize << self.n_qubits;
        if self.members.len() <= dim {
            return self;
        }
        let rho = self.gram();
        Self {
            n_qubits: self.n_qubits,
            members: psd_factor(&rho, T::epsilon()),
        }
    }

    fn gram(&self) -> Matrix<T> {
        let dim = 1usize << self.n_qubits;
        let mut rho = Matrix::zeros(dim);
        let buf = rho.as_mut_slice();
        for m in &self.members {
            for (r, &a) in m.iter().enumerate() {
                if a == czero() {
                    continue;
                }
                let row = &mut buf[r * dim + r..(r + 1) * dim];
                for (dst, &b) in row.iter_mut().zip(&m[r..]) {
                    *dst = *dst + a * b.conj();
                }
            }
        }
        for r in 0..dim {
            for c in 0..r {
                buf[r * dim + c] = buf[c * dim + r].conj();
            }
        }
        rho
    }

    pub fn to_density(&self) -> DensityMatrix<T> {
        DensityMatrix::from_matrix_unchecked(self.gram())
    }

    pub fn probabilities(&self) -> Vec<T> {
        let mut p = vec![T::zero(); 1 << self.n_qubits];
        for m in &self.members {
            for (dst, a) in p.iter_mut().zip(m) {
                *dst = *dst + a.norm_sqr();
            }
        }
        p
    }

    /// Probability that `qubit` reads 1.
    pub fn excitation(&self, qubit: usize) -> T {
        let mut acc = T::zero();
        for m in &self.members {
            for (i, a) in m.iter().enumerate() {
                if kernel::qubit_is_set(i, qubit, self.n_qubits) {
                    acc = acc + a.norm_sqr();
                }
            }
        }
        acc
    }

    /// Marginal distribution of `qubits` (first qubit most significant).
    pub fn marginal(&self, qubits: &[usize]) -> Vec<T> {
        let full = self.probabilities();
        let bits: Vec<usize> = qubits.iter().map(|&q| kernel::bit_position(q, self.n_qubits)).collect();
        let mut out = vec![T::zero(); 1 << qubits.len()];
        for (i, p) in full.into_iter().enumerate() {
            let idx = bits.iter().fold(0usize, |acc, &b| (acc << 1) | ((i >> b) & 1));
            out[idx] = out[idx] + p;
        }
        out
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
        Ok(self
            .members
            .iter()
            .map(|m| {
                y.iter()
                    .zip(m)
                    .fold(czero(), |acc: C<T>, (a, b)| acc + a.conj() * b)
                    .norm_sqr()
            })
            .fold(T::zero(), |a, b| a + b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c;

    #[test]
    fn trace_and_compress_match_density_route() {
        let amps: Vec<C<f64>> = (0..8).map(|i| c((i as f64 * 0.37).sin(), (i as f64 * 0.91).cos())).collect();
        let psi = StateVector::normalized(amps).unwrap();
        let discard = QubitSubset::new(vec![0, 2], 3).unwrap();
        let dm = psi.to_density().partial_trace(&discard).unwrap();
        let ens = Ensemble::from_pure(&psi).partial_trace(&discard).unwrap();
        assert_eq!(ens.len(), 4);
        assert!(ens.to_density().max_abs_diff(&dm) < 1e-14);
        let packed = ens.compress();
        assert!(packed.len() <= 2);
        assert!(packed.to_density().max_abs_diff(&dm) < 1e-13);
        assert!((packed.trace() - 1.0).abs() < 1e-13);
    }

    #[test]
    fn marginal_orders_qubits() {
        let psi = StateVector::<f64>::from_bits(&[true, false, true]);
        let e = Ensemble::from_pure(&psi);
        assert_eq!(e.marginal(&[2, 1]), vec![0.0, 0.0, 1.0, 0.0]);
        assert_eq!(e.excitation(0), 1.0);
    }
}
