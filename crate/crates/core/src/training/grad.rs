use crate::error::{Error, Result};

/// Central-difference gradient `(f(θ+εe_i) − f(θ−εe_i)) / 2ε`.
pub fn finite_diff_grad<F>(mut f: F, theta: &[f64], eps: f64) -> Result<Vec<f64>>
where
    F: FnMut(&[f64]) -> Result<f64>,
{
    let mut t = theta.to_vec();
    let mut g = Vec::with_capacity(theta.len());
    for i in 0..theta.len() {
        t[i] = theta[i] + eps;
        let plus = f(&t)?;
        t[i] = theta[i] - eps;
        let minus = f(&t)?;
        t[i] = theta[i];
        if !plus.is_finite() || !minus.is_finite() {
            return Err(Error::NonFinite { index: i });
        }
        g.push((plus - minus) / (2.0 * eps));
    }
    Ok(g)
}

/// Two-term parameter-shift gradient `(f(θ+π/2 e_i) − f(θ−π/2 e_i)) / 2`.
///
/// Exact when `f` is an expectation value and every parameter enters
/// through a single rotation `exp(−iθG/2)` with `G² = 1`, e.g. `Ry(θ)`.
pub fn parameter_shift_grad<F>(mut f: F, theta: &[f64]) -> Result<Vec<f64>>
where
    F: FnMut(&[f64]) -> Result<f64>,
{
    let s = std::f64::consts::FRAC_PI_2;
    let mut t = theta.to_vec();
    let mut g = Vec::with_capacity(theta.len());
    for i in 0..theta.len() {
        t[i] = theta[i] + s;
        let plus = f(&t)?;
        t[i] = theta[i] - s;
        let minus = f(&t)?;
        t[i] = theta[i];
        if !plus.is_finite() || !minus.is_finite() {
            return Err(Error::NonFinite { index: i });
        }
        g.push(0.5 * (plus - minus));
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic() {
        let g = finite_diff_grad(|t| Ok(t.iter().map(|x| x * x).sum()), &[1.0, -2.0], 1e-3).unwrap();
        assert!((g[0] - 2.0).abs() < 1e-6 && (g[1] + 4.0).abs() < 1e-6);
    }

    #[test]
    fn shift_rule_is_exact_for_sinusoids() {
        let f = |t: &[f64]| Ok(t[0].cos() * (0.3 + t[1]).sin());
        let g = parameter_shift_grad(f, &[0.4, -1.1]).unwrap();
        assert!((g[0] + 0.4f64.sin() * (-0.8f64).sin()).abs() < 1e-14);
        assert!((g[1] - 0.4f64.cos() * (-0.8f64).cos()).abs() < 1e-14);
    }

    #[test]
    fn constant_is_exactly_zero() {
        let g = finite_diff_grad(|_| Ok(3.5), &[0.1, 0.2, 0.3], 1e-3).unwrap();
        assert_eq!(g, vec![0.0; 3]);
    }

    #[test]
    fn reports_offending_index() {
        let r = finite_diff_grad(|t| Ok(if t[1] > 1.0 { f64::NAN } else { 0.0 }), &[0.0, 1.0], 1e-3);
        assert!(matches!(r, Err(Error::NonFinite { index: 1 })));
    }
}
