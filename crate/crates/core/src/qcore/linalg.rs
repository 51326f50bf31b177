//! Small dense factorizations: Hermitian eigensolver (cyclic Jacobi),
//! pivoted Cholesky for PSD matrices, QR by modified Gram–Schmidt and the
//! unitary exponential of a Hermitian generator.

use crate::qcore::matrix::{Matrix, Unitary};
use crate::scalar::{c, cr, czero, Real, C};

/// Eigenpairs of a Hermitian matrix; values ascending, `vectors` holds the
/// matching eigenvectors as columns.
#[derive(Clone, Debug)]
pub struct Eigen<T> {
    pub values: Vec<T>,
    pub vectors: Matrix<T>,
}

pub fn hermitian_eigen<T: Real>(m: &Matrix<T>) -> Eigen<T> {
    let n = m.dim();
    // Symmetrize so tiny hermiticity defects do not stall the sweeps.
    let mut a = Matrix::from_fn(n, |r, col| (m[(r, col)] + m[(col, r)].conj()) * cr(T::lit(0.5)));
    let mut v = Matrix::identity(n);
    let frob: T = a.as_slice().iter().map(|z| z.norm_sqr()).fold(T::zero(), |x, y| x + y);
    let threshold = frob * T::epsilon() * T::epsilon();
    let two = T::lit(2.0);

    for _sweep in 0..100 {
        let mut off = T::zero();
        for p in 0..n {
            for q in p + 1..n {
                off = off + a[(p, q)].norm_sqr();
            }
        }
        if off <= threshold || off == T::zero() {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let abs = apq.norm();
                if abs == T::zero() {
                    continue;
                }
                let g = apq / abs;
                let gc = g.conj();
                let theta = (a[(q, q)].re - a[(p, p)].re) / (two * abs);
                let t = if theta == T::zero() {
                    T::one()
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt())
                };
                let cs = T::one() / (t * t + T::one()).sqrt();
                let sn = t * cs;
                let (jpp, jpq, jqp, jqq) = (cr(cs), cr(sn), gc * cr(-sn), gc * cr(cs));

                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * jpp + akq * jqp;
                    a[(k, q)] = akp * jpq + akq * jqq;
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * jpp + vkq * jqp;
                    v[(k, q)] = vkp * jpq + vkq * jqq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = jpp.conj() * apk + jqp.conj() * aqk;
                    a[(q, k)] = jpq.conj() * apk + jqq.conj() * aqk;
                }
                a[(p, q)] = czero();
                a[(q, p)] = czero();
                a[(p, p)] = cr(a[(p, p)].re);
                a[(q, q)] = cr(a[(q, q)].re);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.partial_cmp(&a[(j, j)].re).unwrap_or(std::cmp::Ordering::Equal));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = Matrix::from_fn(n, |r, col| v[(r, order[col])]);
    Eigen { values, vectors }
}

/// Factors a Hermitian PSD matrix as `Σ_k l_k l_k†` by diagonally pivoted
/// Cholesky, stopping once every remaining pivot is below `eps · trace`.
/// The dropped remainder is PSD with entries bounded by that pivot.
pub fn psd_factor<T: Real>(m: &Matrix<T>, eps: T) -> Vec<Vec<C<T>>> {
    let n = m.dim();
    let mut a = m.clone();
    let scale = (0..n).map(|i| a[(i, i)].re.abs()).fold(T::zero(), |x, y| x + y);
    let tol = eps * scale.max(T::min_positive_value());
    let mut factors = Vec::new();
    for _ in 0..n {
        let (p, d) = (0..n)
            .map(|i| (i, a[(i, i)].re))
            .fold((0, T::neg_infinity()), |best, cur| if cur.1 > best.1 { cur } else { best });
        if !(d > tol) {
            break;
        }
        let inv = T::one() / d.sqrt();
        let l: Vec<C<T>> = (0..n).map(|i| a[(i, p)] * cr(inv)).collect();
        for r in 0..n {
            for col in 0..n {
                a[(r, col)] = a[(r, col)] - l[r] * l[col].conj();
            }
        }
        factors.push(l);
    }
    factors
}

/// Orthonormalizes the columns of `m` (modified Gram–Schmidt, applied
/// twice). The implied `R` has a positive real diagonal.
pub fn qr_unitary<T: Real>(m: &Matrix<T>) -> Matrix<T> {
    let n = m.dim();
    let mut cols: Vec<Vec<C<T>>> = (0..n).map(|j| (0..n).map(|i| m[(i, j)]).collect()).collect();
    for j in 0..n {
        for _pass in 0..2 {
            for k in 0..j {
                let proj = cols[k]
                    .iter()
                    .zip(&cols[j])
                    .fold(czero(), |acc: C<T>, (a, b)| acc + a.conj() * b);
                let (done, rest) = cols.split_at_mut(j);
                for (x, &q) in rest[0].iter_mut().zip(&done[k]) {
                    *x = *x - proj * q;
                }
            }
        }
        let norm = cols[j].iter().map(|z| z.norm_sqr()).fold(T::zero(), |a, b| a + b).sqrt();
        cols[j].iter_mut().for_each(|z| *z = *z / norm);
    }
    Matrix::from_fn(n, |i, j| cols[j][i])
}

/// `exp(-i·t·H)` for Hermitian `H`, through its eigendecomposition.
pub fn expm_hermitian<T: Real>(h: &Matrix<T>, t: T) -> Unitary<T> {
    let Eigen { values, vectors } = hermitian_eigen(h);
    let n = h.dim();
    let phases: Vec<C<T>> = values
        .iter()
        .map(|&l| {
            let (s, co) = (-(t * l)).sin_cos();
            c(co, s)
        })
        .collect();
    let m = Matrix::from_fn(n, |r, col| {
        (0..n).fold(czero(), |acc, k| acc + vectors[(r, k)] * phases[k] * vectors[(col, k)].conj())
    });
    Unitary::new_unchecked(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_hermitian(n: usize, seed: u64) -> Matrix<f64> {
        let mut s = seed;
        let mut next = move || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        let a = Matrix::from_fn(n, |_, _| c(next(), next()));
        a.add(&a.dagger())
    }

    #[test]
    fn eigen_reconstructs_matrix() {
        for n in 1..7 {
            let h = sample_hermitian(n, n as u64 + 3);
            let e = hermitian_eigen(&h);
            let d = Matrix::diagonal(&e.values.iter().map(|&x| cr(x)).collect::<Vec<_>>());
            let back = e.vectors.matmul(&d).matmul(&e.vectors.dagger());
            assert!(back.max_abs_diff(&h) < 1e-12, "n={n}");
            assert!(e.vectors.is_unitary(1e-12));
            assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn psd_factor_handles_rank_deficiency() {
        let v = [c(0.3, 0.1), c(-0.5, 0.2), c(0.0, 0.7)];
        let m = Matrix::from_fn(3, |r, col| v[r] * v[col].conj());
        let f = psd_factor(&m, 1e-14);
        assert_eq!(f.len(), 1);
        let back = Matrix::from_fn(3, |r, col| f[0][r] * f[0][col].conj());
        assert!(back.max_abs_diff(&m) < 1e-14);
    }

    #[test]
    fn qr_gives_unitary() {
        let h = sample_hermitian(5, 11);
        let q = qr_unitary(&h);
        assert!(q.is_unitary(1e-12));
    }

    #[test]
    fn expm_of_zero_is_identity() {
        let u = expm_hermitian(&Matrix::<f64>::zeros(4), 1.0);
        assert!(u.matrix().max_abs_diff(&Matrix::identity(4)) < 1e-15);
    }
}
