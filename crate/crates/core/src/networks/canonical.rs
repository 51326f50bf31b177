use crate::qcore::gates::{pauli_x, pauli_y, pauli_z};
use crate::qcore::matrix::{Matrix, Unitary};
use crate::scalar::{c, cr, Real};

/// Angles of `exp[−(i/2)(θx XX + θy YY + θz ZZ)]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CanonicalParams<T> {
    pub theta_x: T,
    pub theta_y: T,
    pub theta_z: T,
}

impl<T: Real> CanonicalParams<T> {
    pub fn new(theta_x: T, theta_y: T, theta_z: T) -> Self {
        Self {
            theta_x,
            theta_y,
            theta_z,
        }
    }

    pub fn from_slice(p: &[T]) -> Self {
        Self::new(p[0], p[1], p[2])
    }
}

/// `exp(−iθ/2 · P⊗P) = cos(θ/2)·I − i·sin(θ/2)·P⊗P` since `(P⊗P)² = I`.
fn pauli_pair_rotation<T: Real>(pauli: &Matrix<T>, theta: T) -> Matrix<T> {
    let (s, co) = (theta / T::lit(2.0)).sin_cos();
    let pp = pauli.kron(pauli);
    Matrix::identity(4).scale(cr(co)).add(&pp.scale(c(T::zero(), -s)))
}

/// The three generators commute, so the exponential is the product of the
/// three pair rotations.
pub fn build_canonical_unitary<T: Real>(params: &CanonicalParams<T>) -> Unitary<T> {
    let xx = pauli_pair_rotation(&pauli_x(), params.theta_x);
    let yy = pauli_pair_rotation(&pauli_y(), params.theta_y);
    let zz = pauli_pair_rotation(&pauli_z(), params.theta_z);
    Unitary::new_unchecked(xx.matmul(&yy).matmul(&zz))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn zero_angles_give_identity() {
        let u = build_canonical_unitary(&CanonicalParams::new(0.0_f64, 0.0, 0.0));
        assert!(u.matrix().max_abs_diff(&Matrix::identity(4)) < 1e-15);
    }

    #[test]
    fn pi_xx_is_minus_i_xx() {
        let u = build_canonical_unitary(&CanonicalParams::new(PI, 0.0, 0.0));
        let expected = pauli_x::<f64>().kron(&pauli_x()).scale(c(0.0, -1.0));
        assert!(u.matrix().max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn unitary_for_random_angles() {
        for k in 0..20 {
            let t = k as f64 * 0.77;
            let u = build_canonical_unitary(&CanonicalParams::new(t, 1.3 * t - 2.0, 0.5 - t));
            assert!(u.matrix().is_unitary(1e-12));
        }
    }
}
