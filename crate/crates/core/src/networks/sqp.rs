//! Sigmoid quantum perceptron: a gate whose target excitation probability is
//! `f(a_x)` with `a_x = Σ_j w_j x_j − b` for every computational-basis
//! pattern `x` of its control (input) qubits.

use crate::error::{Error, Result};
use crate::networks::spec::SignVariant;
use crate::qcore::gates::{matrix_of, Gate};
use crate::qcore::kernel::Block;
use crate::qcore::matrix::{Matrix, Unitary};
use crate::scalar::{cr, Real};

/// `f(x) = (1 + x/√(1+x²)) / 2`.
pub fn sqp_activation<T: Real>(x: T) -> T {
    sigmoid_pair(x).0
}

/// `(f(x), 1 − f(x))`, each computed without cancellation.
pub fn sigmoid_pair<T: Real>(x: T) -> (T, T) {
    let half = T::lit(0.5);
    let r = T::one().hypot(x);
    let ax = x.abs();
    let big = half * (T::one() + ax / r);
    let small = half / (r * (r + ax));
    if x >= T::zero() {
        (big, small)
    } else {
        (small, big)
    }
}

/// Angle `θ ∈ (0, π)` with `sin(θ/2) = √f(a)` and `cos(θ/2) = √(1 − f(a))`.
pub fn sqp_theta<T: Real>(a: T) -> T {
    let (f, g) = sigmoid_pair(a);
    T::lit(2.0) * f.sqrt().atan2(g.sqrt())
}

/// Weights (one per control qubit) and bias of one perceptron.
#[derive(Clone, Debug, PartialEq)]
pub struct SqpEdgeParams<T> {
    pub weights: Vec<T>,
    pub bias: T,
}

impl<T: Real> SqpEdgeParams<T> {
    pub fn new(weights: Vec<T>, bias: T) -> Self {
        Self { weights, bias }
    }

    /// Reads `[w_0, …, w_{n-1}, b]`.
    pub fn from_slice(p: &[T]) -> Self {
        let (w, b) = p.split_at(p.len() - 1);
        Self {
            weights: w.to_vec(),
            bias: b[0],
        }
    }

    /// Activation for control pattern `pattern` (first control is the most
    /// significant bit).
    pub fn activation(&self, pattern: usize) -> T {
        let n = self.weights.len();
        self.weights
            .iter()
            .enumerate()
            .filter(|(j, _)| (pattern >> (n - 1 - j)) & 1 == 1)
            .fold(-self.bias, |acc, (_, &w)| acc + w)
    }

    /// One 2×2 target block per control pattern.
    pub fn blocks(&self, sign: SignVariant) -> Vec<Block<T>> {
        (0..1usize << self.weights.len())
            .map(|p| sqp_block(self.activation(p), sign))
            .collect()
    }
}

/// `V^±(a) = [[√(1−f), √f], [±√f, ∓√(1−f)]]`. The PLUS form equals
/// `Ry(θ)·Z = Z·Ry(−θ)` with `θ = sqp_theta(a)`.
pub fn sqp_block<T: Real>(a: T, sign: SignVariant) -> Block<T> {
    let (f, g) = sigmoid_pair(a);
    let (s, co) = (f.sqrt(), g.sqrt());
    match sign {
        SignVariant::Plus => [cr(co), cr(s), cr(s), cr(-co)],
        SignVariant::Minus => [cr(co), cr(s), cr(-s), cr(co)],
    }
}

/// Gate form on an arbitrary register: controls then target.
pub fn sqp_gate<T: Real>(params: &SqpEdgeParams<T>, controls: Vec<usize>, target: usize, sign: SignVariant) -> Gate<T> {
    Gate::Multiplexed {
        blocks: params.blocks(sign),
        controls,
        target,
    }
}

/// Block-diagonal `(n_in + 1)`-qubit unitary `Σ_x |x⟩⟨x| ⊗ V(x)`; the
/// controls are qubits `0..n_in` and the target is qubit `n_in`.
pub fn build_sqp_unitary<T: Real>(params: &SqpEdgeParams<T>, n_in: usize, sign: SignVariant) -> Result<Unitary<T>> {
    if params.weights.len() != n_in {
        return Err(Error::DimensionMismatch {
            expected: n_in,
            actual: params.weights.len(),
        });
    }
    let dim = 2usize << n_in;
    let mut m = Matrix::zeros(dim);
    for (p, b) in params.blocks(sign).iter().enumerate() {
        let o = 2 * p;
        m[(o, o)] = b[0];
        m[(o, o + 1)] = b[1];
        m[(o + 1, o)] = b[2];
        m[(o + 1, o + 1)] = b[3];
    }
    Ok(Unitary::new_unchecked(m))
}

/// Matrix of a single block, for inspection.
pub fn sqp_block_matrix<T: Real>(a: T, sign: SignVariant) -> Matrix<T> {
    matrix_of(&sqp_block(a, sign))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::gates::{pauli_x, pauli_z, ry};
    use crate::qcore::state::StateVector;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    #[test]
    fn activation_values() {
        assert_eq!(sqp_activation(0.0_f64), 0.5);
        assert!((sqp_activation(1.0_f64) - (1.0 + FRAC_1_SQRT_2) / 2.0).abs() < 1e-15);
        for &x in &[0.3, 1.7, 12.0, 1e5] {
            assert!((sqp_activation(x) + sqp_activation(-x) - 1.0_f64).abs() < 1e-15);
        }
        let (f, g) = sigmoid_pair(1e6_f64);
        assert!(g > 0.0 && g < 1e-12 && (f - 1.0).abs() < 1e-12);
    }

    #[test]
    fn activation_is_monotone() {
        let xs: Vec<f64> = (-200..=200).map(|i| i as f64 * 0.05).collect();
        for w in xs.windows(2) {
            assert!(sqp_activation(w[1]) > sqp_activation(w[0]));
        }
    }

    #[test]
    fn theta_values() {
        assert!((sqp_theta(0.0_f64) - PI / 2.0).abs() < 1e-15);
        assert!((sqp_theta(1e6_f64) - PI).abs() < 1e-2);
        let expected = 2.0 * ((1.0 + FRAC_1_SQRT_2) / 2.0_f64).sqrt().asin();
        assert!((sqp_theta(1.0_f64) - expected).abs() < 1e-14);
        for &a in &[-7.0_f64, -1.0, 0.2, 3.0] {
            let t = sqp_theta(a);
            let (f, g) = sigmoid_pair(a);
            assert!(((t / 2.0).sin() - f.sqrt()).abs() < 1e-12);
            assert!(((t / 2.0).cos() - g.sqrt()).abs() < 1e-12);
            assert!(t > 0.0 && t < PI);
        }
    }

    #[test]
    fn zero_weights_give_identity_times_block() {
        let p = SqpEdgeParams::new(vec![0.0_f64], 0.0);
        let u = build_sqp_unitary(&p, 1, SignVariant::Plus).unwrap();
        let block = ry(PI / 2.0).matmul(&pauli_z());
        let expected = Matrix::identity(2).kron(&block);
        assert!(u.matrix().max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn plus_block_is_ry_times_z() {
        for &a in &[-3.0, -0.4, 0.0, 0.9, 4.5] {
            let b = sqp_block_matrix(a, SignVariant::Plus);
            let t = sqp_theta(a);
            assert!(b.max_abs_diff(&ry(t).matmul(&pauli_z())) < 1e-12);
            assert!(b.max_abs_diff(&pauli_z().matmul(&ry(-t))) < 1e-12);
            let m = sqp_block_matrix(a, SignVariant::Minus);
            assert!(m.max_abs_diff(&ry(-t)) < 1e-12);
        }
    }

    #[test]
    fn saturated_blocks() {
        let p = SqpEdgeParams::new(vec![200.0_f64], 100.0);
        let u = build_sqp_unitary(&p, 1, SignVariant::Plus).unwrap();
        let m = u.matrix();
        let block = |o: usize| Matrix::from_fn(2, |r, c| m[(o + r, o + c)]);
        assert!(block(0).max_abs_diff(&pauli_z()) < 1e-2);
        assert!(block(2).max_abs_diff(&pauli_x()) < 1e-2);
    }

    #[test]
    fn excitation_matches_activation_for_all_inputs() {
        let p = SqpEdgeParams::new(vec![0.7_f64, -1.3, 2.1], 0.4);
        for sign in [SignVariant::Plus, SignVariant::Minus] {
            let u = build_sqp_unitary(&p, 3, sign).unwrap();
            assert!(u.matrix().is_unitary(1e-12));
            for x in 0..8 {
                let psi = StateVector::basis(4, x << 1);
                let out = StateVector::from_raw(4, u.matrix().matvec(psi.amplitudes()));
                let expected = sqp_activation(p.activation(x));
                assert!((out.excitation(3) - expected).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn weight_count_mismatch() {
        let p = SqpEdgeParams::new(vec![1.0_f64], 0.0);
        assert!(build_sqp_unitary(&p, 2, SignVariant::Plus).is_err());
    }

    #[test]
    fn single_precision_build() {
        let p = SqpEdgeParams::new(vec![0.5_f32, -2.0], 1.0);
        let u = build_sqp_unitary(&p, 2, SignVariant::Plus).unwrap();
        assert!(u.matrix().is_unitary(1e-5));
    }
}
