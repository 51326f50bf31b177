//! Flat parameter vectors and their structured view.
//!
//! Layout is stage-major. Within a feedforward stage from a layer of width
//! `m` to a layer of width `k`:
//! - SQP: for each target `j < k`, `[w_0, …, w_{m−1}, b]`;
//! - HANNOVER: for each target `j`, for each source `i`, `[θx, θy, θz]`.
//!
//! HEA stores one angle per qubit per layer.

use rand::Rng;

use crate::error::{Error, Result};
use crate::networks::canonical::CanonicalParams;
use crate::networks::spec::{Family, NetworkSpec};
use crate::networks::sqp::SqpEdgeParams;
use crate::scalar::Real;

#[derive(Clone, Debug, PartialEq)]
pub struct ParamVector<T> {
    values: Vec<T>,
}

/// Parameters of one stage in structured form.
#[derive(Clone, Debug, PartialEq)]
pub enum StageParams<T> {
    /// One perceptron per target qubit.
    Sqp(Vec<SqpEdgeParams<T>>),
    /// `gates[j][i]` couples source `i` to target `j`.
    Hannover(Vec<Vec<CanonicalParams<T>>>),
    /// One rotation angle per qubit.
    Hea(Vec<T>),
}

impl<T: Real> ParamVector<T> {
    pub fn new(spec: &NetworkSpec, values: Vec<T>) -> Result<Self> {
        let expected = spec.param_count();
        if values.len() != expected {
            return Err(Error::ParamLength {
                expected,
                actual: values.len(),
            });
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self { values })
    }

    /// Uniform draw from the network's parameter bounds.
    pub fn random<R: Rng + ?Sized>(spec: &NetworkSpec, rng: &mut R) -> Self {
        let values = spec
            .param_bounds()
            .into_iter()
            .map(|(lo, hi)| T::lit(rng.random_range(lo..hi)))
            .collect();
        Self { values }
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Structured per-stage view.
    pub fn unflatten(&self, spec: &NetworkSpec) -> Result<Vec<StageParams<T>>> {
        if self.values.len() != spec.param_count() {
            return Err(Error::ParamLength {
                expected: spec.param_count(),
                actual: self.values.len(),
            });
        }
        let ranges = spec.stage_ranges();
        Ok(ranges
            .into_iter()
            .enumerate()
            .map(|(s, r)| {
                let p = &self.values[r];
                match spec.family {
                    Family::Sqp => {
                        let m = spec.layer_widths[s];
                        StageParams::Sqp(p.chunks(m + 1).map(SqpEdgeParams::from_slice).collect())
                    }
                    Family::Hannover => {
                        let m = spec.layer_widths[s];
                        StageParams::Hannover(
                            p.chunks(3 * m)
                                .map(|row| row.chunks(3).map(CanonicalParams::from_slice).collect())
                                .collect(),
                        )
                    }
                    Family::Hea => StageParams::Hea(p.to_vec()),
                }
            })
            .collect())
    }

    /// Inverse of [`ParamVector::unflatten`].
    pub fn flatten(stages: &[StageParams<T>]) -> Self {
        let mut values = Vec::new();
        for s in stages {
            match s {
                StageParams::Sqp(edges) => {
                    for e in edges {
                        values.extend_from_slice(&e.weights);
                        values.push(e.bias);
                    }
                }
                StageParams::Hannover(rows) => {
                    for g in rows.iter().flatten() {
                        values.extend_from_slice(&[g.theta_x, g.theta_y, g.theta_z]);
                    }
                }
                StageParams::Hea(angles) => values.extend_from_slice(angles),
            }
        }
        Self { values }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;

    #[test]
    fn round_trip_all_families() {
        let specs = [
            NetworkSpec::sqp(vec![2, 3, 1]),
            NetworkSpec::hannover(vec![2, 3, 2]),
            NetworkSpec::hea(3, 4),
        ];
        for spec in &specs {
            let theta = ParamVector::<f64>::random(spec, &mut rng::stream(3, &[]));
            let back = ParamVector::flatten(&theta.unflatten(spec).unwrap());
            assert_eq!(back, theta);
        }
    }

    #[test]
    fn sqp_layout() {
        let spec = NetworkSpec::sqp(vec![2, 2]);
        let theta = ParamVector::new(&spec, vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]).unwrap();
        match &theta.unflatten(&spec).unwrap()[0] {
            StageParams::Sqp(e) => {
                assert_eq!(e[1].weights, vec![4.0, 5.0]);
                assert_eq!(e[1].bias, 6.0);
            }
            _ => panic!("wrong family"),
        }
    }

    #[test]
    fn length_and_bounds() {
        let spec = NetworkSpec::sqp(vec![1, 1]);
        assert!(matches!(
            ParamVector::new(&spec, vec![0.0_f64]),
            Err(Error::ParamLength { expected: 2, actual: 1 })
        ));
        assert!(matches!(
            ParamVector::new(&spec, vec![0.0_f64, f64::NAN]),
            Err(Error::NonFinite { index: 1 })
        ));
        let t = ParamVector::<f64>::random(&NetworkSpec::sqp(vec![3, 3]), &mut rng::stream(1, &[]));
        assert!(t.values().iter().all(|v| (-5.0..5.0).contains(v)));
    }
}
