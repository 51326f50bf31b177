//! Classical-to-quantum encodings. Features are expected pre-scaled to
//! `[0, π]`.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::networks::spec::FeatureMap;
use crate::qcore::gates::{Circuit, Gate};
use crate::qcore::kernel;
use crate::qcore::state::StateVector;
use crate::scalar::Real;

/// `Ry(x_j)` on qubit `j` of an `|x|`-qubit register.
pub fn easy_feature_map<T: Real>(x: &[T]) -> Result<Circuit<T>> {
    if x.is_empty() {
        return Err(Error::FeatureWidth { features: 0, width: 0 });
    }
    Circuit::from_gates(x.len(), x.iter().enumerate().map(|(j, &t)| Gate::ry(j, t)).collect())
}

/// Two repetitions of `[H^{⊗n}, exp(i Σ_S φ_S(x) Z_S)]` with
/// `φ_j = x_j` and `φ_{j,j+1} = (π − x_j)(π − x_{j+1})` on a linear chain.
pub fn hard_feature_map<T: Real>(x: &[T]) -> Result<Circuit<T>> {
    let n = x.len();
    if n == 0 {
        return Err(Error::FeatureWidth { features: 0, width: 0 });
    }
    let phases: Vec<Complex<T>> = (0..1usize << n)
        .map(|i| {
            let z = |q: usize| {
                if kernel::qubit_is_set(i, q, n) {
                    -T::one()
                } else {
                    T::one()
                }
            };
            let single = (0..n).fold(T::zero(), |acc, j| acc + x[j] * z(j));
            let pairs = (0..n.saturating_sub(1)).fold(T::zero(), |acc, j| {
                acc + (T::PI() - x[j]) * (T::PI() - x[j + 1]) * z(j) * z(j + 1)
            });
            Complex::from_polar(T::one(), single + pairs)
        })
        .collect();
    let mut c = Circuit::new(n);
    for _ in 0..2 {
        for q in 0..n {
            c.push(Gate::hadamard(q))?;
        }
        c.push(Gate::Diagonal { phases: phases.clone() })?;
    }
    Ok(c)
}

pub fn feature_circuit<T: Real>(kind: FeatureMap, x: &[T]) -> Result<Circuit<T>> {
    match kind {
        FeatureMap::Easy => easy_feature_map(x),
        FeatureMap::Hard => hard_feature_map(x),
        FeatureMap::None => Err(Error::InvalidNetwork(
            "classical input needs a feature map".into(),
        )),
    }
}

/// Encoded state on a `width`-qubit input register; qubits beyond `|x|`
/// stay in `|0⟩`.
pub fn encode<T: Real>(kind: FeatureMap, x: &[T], width: usize) -> Result<StateVector<T>> {
    if x.len() > width {
        return Err(Error::FeatureWidth {
            features: x.len(),
            width,
        });
    }
    let psi = feature_circuit(kind, x)?.prepare();
    Ok(psi.extend_with_zeros(width - x.len()))
}
