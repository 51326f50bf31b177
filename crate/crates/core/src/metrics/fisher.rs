use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::model::{NetworkModel, ProbabilityModel};
use crate::networks::NetworkSpec;
use crate::qcore::linalg::hermitian_eigen;
use crate::qcore::matrix::Matrix;
use crate::scalar::cr;

/// Step of the central differences used for probability derivatives.
pub const FD_STEP: f64 = 1e-3;

/// Outcomes with probability below this are left out of the ML sum.
pub const UNDERFLOW: f64 = 1e-12;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum FisherKind {
    /// `Σ_α ∂_i p_α ∂_j p_α / p_α`.
    #[default]
    Ml,
    /// `Σ_α ∂_i p_α ∂_j p_α`.
    Ls,
}

impl FisherKind {
    pub fn name(self) -> &'static str {
        match self {
            FisherKind::Ml => "ML",
            FisherKind::Ls => "LS",
        }
    }
}

/// Symmetric `N_P × N_P` Fisher matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct FisherMatrix {
    n: usize,
    entries: Vec<f64>,
    pub theta: Vec<f64>,
    /// Outcomes skipped because their probability underflowed.
    pub excluded: usize,
}

impl FisherMatrix {
    pub fn from_entries(n: usize, entries: Vec<f64>, theta: Vec<f64>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                actual: entries.len(),
            });
        }
        Ok(Self {
            n,
            entries,
            theta,
            excluded: 0,
        })
    }

    pub fn identity(n: usize) -> Self {
        let mut entries = vec![0.0; n * n];
        for i in 0..n {
            entries[i * n + i] = 1.0;
        }
        Self {
            n,
            entries,
            theta: Vec::new(),
            excluded: 0,
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            entries: self.entries.iter().map(|v| v * s).collect(),
            ..self.clone()
        }
    }

    pub fn asymmetry(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.n {
            for j in 0..i {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        worst
    }

    /// Ascending eigenvalues.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let m = Matrix::from_fn(self.n, |i, j| cr(self.get(i, j)));
        hermitian_eigen(&m).values
    }

    /// Product of eigenvalues.
    pub fn determinant(&self) -> f64 {
        self.eigenvalues().iter().product()
    }
}

fn central_jacobian<M: ProbabilityModel + ?Sized>(model: &M, theta: &[f64], x: &[f64]) -> Result<Vec<Vec<f64>>> {
    let mut t = theta.to_vec();
    (0..theta.len())
        .map(|i| {
            t[i] = theta[i] + FD_STEP;
            let plus = model.probabilities(&t, x)?;
            t[i] = theta[i] - FD_STEP;
            let minus = model.probabilities(&t, x)?;
            t[i] = theta[i];
            Ok(plus.iter().zip(&minus).map(|(a, b)| (a - b) / (2.0 * FD_STEP)).collect())
        })
        .collect()
}

fn accumulate<M: ProbabilityModel + ?Sized>(
    model: &M,
    theta: &[f64],
    xs: &[Vec<f64>],
    kind: FisherKind,
) -> Result<FisherMatrix> {
    let n = model.n_params();
    if theta.len() != n {
        return Err(Error::ParamLength {
            expected: n,
            actual: theta.len(),
        });
    }
    if xs.is_empty() {
        return Err(Error::DimensionMismatch { expected: 1, actual: 0 });
    }
    let mut f = vec![0.0; n * n];
    let mut excluded = 0;
    for x in xs {
        let jac = central_jacobian(model, theta, x)?;
        let weights: Vec<Option<f64>> = match kind {
            FisherKind::Ls => jac.first().map_or(Vec::new(), |r| vec![Some(1.0); r.len()]),
            FisherKind::Ml => model
                .probabilities(theta, x)?
                .into_iter()
                .map(|p| {
                    if p < UNDERFLOW {
                        excluded += 1;
                        None
                    } else {
                        Some(1.0 / p)
                    }
                })
                .collect(),
        };
        for i in 0..n {
            for j in 0..=i {
                let v: f64 = weights
                    .iter()
                    .enumerate()
                    .filter_map(|(a, w)| w.map(|w| jac[i][a] * jac[j][a] * w))
                    .sum();
                f[i * n + j] += v;
            }
        }
    }
    let inv = 1.0 / xs.len() as f64;
    for i in 0..n {
        for j in 0..=i {
            let v = f[i * n + j] * inv;
            f[i * n + j] = v;
            f[j * n + i] = v;
        }
    }
    Ok(FisherMatrix {
        n,
        entries: f,
        theta: theta.to_vec(),
        excluded,
    })
}

/// Maximum-likelihood Fisher matrix averaged over `xs`.
pub fn fisher_ml_model<M: ProbabilityModel + ?Sized>(model: &M, theta: &[f64], xs: &[Vec<f64>]) -> Result<FisherMatrix> {
    accumulate(model, theta, xs, FisherKind::Ml)
}

/// Least-squares Fisher matrix averaged over `xs`.
pub fn fisher_ls_model<M: ProbabilityModel + ?Sized>(model: &M, theta: &[f64], xs: &[Vec<f64>]) -> Result<FisherMatrix> {
    accumulate(model, theta, xs, FisherKind::Ls)
}

pub fn fisher<M: ProbabilityModel + ?Sized>(kind: FisherKind, model: &M, theta: &[f64], xs: &[Vec<f64>]) -> Result<FisherMatrix> {
    accumulate(model, theta, xs, kind)
}

/// Requires a DISTRIBUTION readout.
pub fn fisher_ml(spec: &NetworkSpec, theta: &[f64], xs: &[Vec<f64>]) -> Result<FisherMatrix> {
    fisher_ml_model(&NetworkModel::distribution(spec.clone())?, theta, xs)
}

pub fn fisher_ls(spec: &NetworkSpec, theta: &[f64], xs: &[Vec<f64>]) -> Result<FisherMatrix> {
    fisher_ls_model(&NetworkModel::new(spec.clone())?, theta, xs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::networks::{FeatureMap, NetworkSpec, Readout};

    fn ry_spec() -> NetworkSpec {
        NetworkSpec::hea(1, 1)
            .with_feature_map(FeatureMap::Easy)
            .with_readout(Readout::distribution_all())
    }

    #[test]
    fn single_rotation_ml_is_one() {
        let xs = vec![vec![0.0]];
        for &t in &[0.4, 1.0, 2.5] {
            let f = fisher_ml(&ry_spec(), &[t], &xs).unwrap();
            assert!((f.get(0, 0) - 1.0).abs() < 1e-4, "{}", f.get(0, 0));
        }
    }

    #[test]
    fn single_rotation_ls_at_half_pi() {
        let f = fisher_ls(&ry_spec(), &[std::f64::consts::FRAC_PI_2], &[vec![0.0]]).unwrap();
        assert!((f.get(0, 0) - 0.5).abs() < 1e-4);
    }

    #[test]
    fn ml_requires_distribution() {
        let spec = NetworkSpec::hea(1, 1);
        assert!(fisher_ml(&spec, &[0.1], &[vec![0.0]]).is_err());
    }

    struct Tied;
    impl ProbabilityModel for Tied {
        fn n_params(&self) -> usize {
            2
        }
        fn probabilities(&self, t: &[f64], _x: &[f64]) -> Result<Vec<f64>> {
            let s = ((t[0] + t[1]) / 2.0).sin().powi(2);
            Ok(vec![1.0 - s, s])
        }
    }

    struct Ignores;
    impl ProbabilityModel for Ignores {
        fn n_params(&self) -> usize {
            2
        }
        fn probabilities(&self, t: &[f64], _x: &[f64]) -> Result<Vec<f64>> {
            let s = (t[0] / 2.0).sin().powi(2);
            Ok(vec![1.0 - s, s])
        }
    }

    #[test]
    fn tied_parameters_are_rank_deficient() {
        let f = fisher_ml_model(&Tied, &[0.3, 0.9], &[vec![]]).unwrap();
        assert!(f.determinant().abs() < 1e-12);
        assert!(f.get(0, 0) > 0.1);
    }

    #[test]
    fn unused_parameter_has_zero_row() {
        let f = fisher_ml_model(&Ignores, &[0.3, 0.9], &[vec![]]).unwrap();
        assert_eq!(f.get(1, 1), 0.0);
        assert_eq!(f.get(0, 1), 0.0);
        assert_eq!(f.get(1, 0), 0.0);
    }

    #[test]
    fn ls_is_finite_at_vanishing_probability() {
        let f = fisher_ls_model(&Ignores, &[0.0, 0.0], &[vec![]]).unwrap();
        assert!(f.entries().iter().all(|v| v.is_finite()));
        let m = fisher_ml_model(&Ignores, &[0.0, 0.0], &[vec![]]).unwrap();
        assert_eq!(m.excluded, 1);
    }
}
