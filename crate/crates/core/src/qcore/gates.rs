//! Standard gate matrices and the gate list used by the network builders.

use crate::error::{Error, Result};
use crate::qcore::kernel::{self, Block};
use crate::qcore::matrix::{Matrix, Unitary};
use crate::qcore::state::StateVector;
use crate::qcore::subset::QubitSubset;
use crate::scalar::{c, cone, cr, czero, Real, C};

pub fn pauli_x<T: Real>() -> Matrix<T> {
    Matrix::from_real_rows(&[&[T::zero(), T::one()], &[T::one(), T::zero()]])
}

pub fn pauli_y<T: Real>() -> Matrix<T> {
    let i = c(T::zero(), T::one());
    Matrix::from_rows(&[&[czero(), -i], &[i, czero()]])
}

pub fn pauli_z<T: Real>() -> Matrix<T> {
    Matrix::from_real_rows(&[&[T::one(), T::zero()], &[T::zero(), -T::one()]])
}

pub fn hadamard<T: Real>() -> Matrix<T> {
    let h = T::FRAC_1_SQRT_2();
    Matrix::from_real_rows(&[&[h, h], &[h, -h]])
}

/// `Ry(θ) = exp(-iθY/2)`.
pub fn ry<T: Real>(theta: T) -> Matrix<T> {
    let half = theta / T::lit(2.0);
    let (s, co) = half.sin_cos();
    Matrix::from_real_rows(&[&[co, -s], &[s, co]])
}

/// CNOT with the control on the first (most significant) qubit.
pub fn cnot<T: Real>() -> Matrix<T> {
    let (o, l) = (T::zero(), T::one());
    Matrix::from_real_rows(&[&[l, o, o, o], &[o, l, o, o], &[o, o, o, l], &[o, o, l, o]])
}

pub fn cz<T: Real>() -> Matrix<T> {
    Matrix::diagonal(&[cone(), cone(), cone(), cr(-T::one())])
}

pub(crate) fn block_of<T: Real>(m: &Matrix<T>) -> Block<T> {
    debug_assert_eq!(m.dim(), 2);
    [m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]]
}

pub(crate) fn matrix_of<T: Real>(b: &Block<T>) -> Matrix<T> {
    Matrix::from_rows(&[&[b[0], b[1]], &[b[2], b[3]]])
}

/// A gate acting on named qubits of a register.
#[derive(Clone, Debug, PartialEq)]
pub enum Gate<T> {
    Single { qubit: usize, matrix: Block<T> },
    Cnot { control: usize, target: usize },
    Cz { a: usize, b: usize },
    /// One 2×2 block per computational-basis pattern of `controls`.
    Multiplexed {
        controls: Vec<usize>,
        target: usize,
        blocks: Vec<Block<T>>,
    },
    Dense { targets: Vec<usize>, matrix: Matrix<T> },
    /// Diagonal operator on the full register.
    Diagonal { phases: Vec<C<T>> },
}

impl<T: Real> Gate<T> {
    pub fn ry(qubit: usize, theta: T) -> Self {
        Gate::Single {
            qubit,
            matrix: block_of(&ry(theta)),
        }
    }

    pub fn hadamard(qubit: usize) -> Self {
        Gate::Single {
            qubit,
            matrix: block_of(&hadamard()),
        }
    }

    pub fn single(qubit: usize, m: &Matrix<T>) -> Self {
        Gate::Single {
            qubit,
            matrix: block_of(m),
        }
    }

    pub fn dense(targets: Vec<usize>, u: &Unitary<T>) -> Self {
        Gate::Dense {
            targets,
            matrix: u.matrix().clone(),
        }
    }

    /// Qubits the gate touches, in the order of its local matrix. Empty for
    /// full-register diagonal gates.
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Gate::Single { qubit, .. } => vec![*qubit],
            Gate::Cnot { control, target } => vec![*control, *target],
            Gate::Cz { a, b } => vec![*a, *b],
            Gate::Multiplexed { controls, target, .. } => {
                let mut q = controls.clone();
                q.push(*target);
                q
            }
            Gate::Dense { targets, .. } => targets.clone(),
            Gate::Diagonal { .. } => Vec::new(),
        }
    }

    /// Local matrix on [`Gate::qubits`]; for diagonal gates, the full
    /// register matrix.
    pub fn local_matrix(&self) -> Matrix<T> {
        match self {
            Gate::Single { matrix, .. } => matrix_of(matrix),
            Gate::Cnot { .. } => cnot(),
            Gate::Cz { .. } => cz(),
            Gate::Multiplexed { blocks, .. } => {
                let dim = 2 * blocks.len();
                let mut m = Matrix::zeros(dim);
                for (p, b) in blocks.iter().enumerate() {
                    let o = 2 * p;
                    m[(o, o)] = b[0];
                    m[(o, o + 1)] = b[1];
                    m[(o + 1, o)] = b[2];
                    m[(o + 1, o + 1)] = b[3];
                }
                m
            }
            Gate::Dense { matrix, .. } => matrix.clone(),
            Gate::Diagonal { phases } => Matrix::diagonal(phases),
        }
    }

    pub fn validate(&self, n_qubits: usize) -> Result<()> {
        match self {
            Gate::Diagonal { phases } => {
                if phases.len() != 1 << n_qubits {
                    return Err(Error::DimensionMismatch {
                        expected: 1 << n_qubits,
                        actual: phases.len(),
                    });
                }
                Ok(())
            }
            Gate::Multiplexed { controls, blocks, .. } if blocks.len() != 1 << controls.len() => {
                Err(Error::DimensionMismatch {
                    expected: 1 << controls.len(),
                    actual: blocks.len(),
                })
            }
            Gate::Dense { targets, matrix } if matrix.dim() != 1 << targets.len() => {
                Err(Error::DimensionMismatch {
                    expected: 1 << targets.len(),
                    actual: matrix.dim(),
                })
            }
            _ => QubitSubset::new(self.qubits(), n_qubits).map(|_| ()),
        }
    }

    /// Applies the gate in place. The gate must have been validated against
    /// `n_qubits`.
    pub fn apply(&self, amps: &mut [C<T>], n_qubits: usize) {
        match self {
            Gate::Single { qubit, matrix } => kernel::apply_single(amps, n_qubits, *qubit, matrix),
            Gate::Cnot { control, target } => kernel::apply_cnot(amps, n_qubits, *control, *target),
            Gate::Cz { a, b } => kernel::apply_cz(amps, n_qubits, *a, *b),
            Gate::Multiplexed {
                controls,
                target,
                blocks,
            } => kernel::apply_multiplexed(amps, n_qubits, controls, *target, blocks),
            Gate::Dense { targets, matrix } => kernel::apply_dense(amps, n_qubits, matrix, targets),
            Gate::Diagonal { phases } => kernel::apply_diagonal(amps, phases),
        }
    }

    /// Same gate on qubit indices shifted by `offset`.
    pub fn shifted(&self, offset: usize) -> Self {
        let s = |q: &usize| q + offset;
        match self {
            Gate::Single { qubit, matrix } => Gate::Single {
                qubit: qubit + offset,
                matrix: *matrix,
            },
            Gate::Cnot { control, target } => Gate::Cnot {
                control: control + offset,
                target: target + offset,
            },
            Gate::Cz { a, b } => Gate::Cz {
                a: a + offset,
                b: b + offset,
            },
            Gate::Multiplexed {
                controls,
                target,
                blocks,
            } => Gate::Multiplexed {
                controls: controls.iter().map(s).collect(),
                target: target + offset,
                blocks: blocks.clone(),
            },
            Gate::Dense { targets, matrix } => Gate::Dense {
                targets: targets.iter().map(s).collect(),
                matrix: matrix.clone(),
            },
            Gate::Diagonal { .. } => panic!("cannot shift a full-register diagonal gate"),
        }
    }
}

/// Ordered gate list on a fixed register.
#[derive(Clone, Debug, PartialEq)]
pub struct Circuit<T> {
    n_qubits: usize,
    gates: Vec<Gate<T>>,
}

impl<T: Real> Circuit<T> {
    pub fn new(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            gates: Vec::new(),
        }
    }

    pub fn from_gates(n_qubits: usize, gates: Vec<Gate<T>>) -> Result<Self> {
        for g in &gates {
            g.validate(n_qubits)?;
        }
        Ok(Self { n_qubits, gates })
    }

    pub fn push(&mut self, gate: Gate<T>) -> Result<()> {
        gate.validate(self.n_qubits)?;
        self.gates.push(gate);
        Ok(())
    }

    pub fn extend(&mut self, other: Circuit<T>) -> Result<()> {
        if other.n_qubits != self.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.n_qubits,
                actual: other.n_qubits,
            });
        }
        self.gates.extend(other.gates);
        Ok(())
    }

    #[inline]
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    #[inline]
    pub fn gates(&self) -> &[Gate<T>] {
        &self.gates
    }

    pub fn apply_amplitudes(&self, amps: &mut [C<T>]) {
        for g in &self.gates {
            g.apply(amps, self.n_qubits);
        }
    }

    pub fn apply(&self, state: &mut StateVector<T>) -> Result<()> {
        if state.n_qubits() != self.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.n_qubits,
                actual: state.n_qubits(),
            });
        }
        self.apply_amplitudes(state.amplitudes_mut());
        Ok(())
    }

    /// Output state on `|0…0⟩`.
    pub fn prepare(&self) -> StateVector<T> {
        let mut s = StateVector::zero(self.n_qubits);
        self.apply_amplitudes(s.amplitudes_mut());
        s
    }

    /// Full circuit unitary, built column by column.
    pub fn unitary(&self) -> Unitary<T> {
        let dim = 1usize << self.n_qubits;
        let mut m = Matrix::zeros(dim);
        let mut col = vec![czero(); dim];
        for j in 0..dim {
            col.iter_mut().for_each(|a| *a = czero());
            col[j] = cone();
            self.apply_amplitudes(&mut col);
            for (i, &a) in col.iter().enumerate() {
                m[(i, j)] = a;
            }
        }
        Unitary::new_unchecked(m)
    }
}
