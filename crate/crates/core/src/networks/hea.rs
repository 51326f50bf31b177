use crate::error::{Error, Result};
use crate::networks::spec::Entangler;
use crate::qcore::gates::Gate;
use crate::scalar::Real;

/// Entangling pairs of an `n`-qubit HEA layer: every `(c, t)` with `c < t`,
/// lexicographic.
pub fn entangling_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|c| (c + 1..n).map(move |t| (c, t))).collect()
}

/// One HEA layer: `Ry(angles[q])` on every qubit, then an entangler on
/// every pair.
pub fn build_hea_layer<T: Real>(angles: &[T], n: usize, entangler: Entangler) -> Result<Vec<Gate<T>>> {
    if angles.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: angles.len(),
        });
    }
    let mut gates: Vec<Gate<T>> = angles.iter().enumerate().map(|(q, &t)| Gate::ry(q, t)).collect();
    gates.extend(entangling_pairs(n).into_iter().map(|(c, t)| match entangler {
        Entangler::Cnot => Gate::Cnot { control: c, target: t },
        Entangler::Cz => Gate::Cz { a: c, b: t },
    }));
    Ok(gates)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::gates::{cnot, ry, Circuit};
    use crate::qcore::matrix::Matrix;

    #[test]
    fn zero_angles_two_qubits_is_cnot() {
        let gates = build_hea_layer(&[0.0_f64, 0.0], 2, Entangler::Cnot).unwrap();
        let u = Circuit::from_gates(2, gates).unwrap().unitary();
        assert!(u.matrix().max_abs_diff(&cnot()) < 1e-15);
    }

    #[test]
    fn single_qubit_layer_is_rotation() {
        let gates = build_hea_layer(&[0.4_f64], 1, Entangler::Cnot).unwrap();
        assert_eq!(gates.len(), 1);
        let u = Circuit::from_gates(1, gates).unwrap().unitary();
        assert!(u.matrix().max_abs_diff(&ry(0.4)) < 1e-15);
    }

    #[test]
    fn pair_order_and_length_check() {
        assert_eq!(entangling_pairs(3), vec![(0, 1), (0, 2), (1, 2)]);
        assert!(build_hea_layer(&[0.0_f64; 2], 3, Entangler::Cnot).is_err());
        let u = Circuit::from_gates(2, build_hea_layer(&[0.0_f64; 2], 2, Entangler::Cz).unwrap())
            .unwrap()
            .unitary();
        assert!(u.matrix().max_abs_diff(&crate::qcore::gates::cz()) < 1e-15);
        let _ = Matrix::<f64>::identity(1);
    }
}
