//! Dense linear-algebra helpers shared by the spectral modules.

use ndarray::{Array1, Array2, ArrayView2};
use ndarray_linalg::{Eig, Eigh, Inverse, SVD, UPLO};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMat = Array2<Complex64>;

pub fn to_complex(m: &ArrayView2<'_, f64>) -> CMat {
    m.mapv(|v| Complex64::new(v, 0.0))
}

pub fn real_part(m: &CMat) -> Array2<f64> {
    m.mapv(|v| v.re)
}

/// Largest imaginary magnitude, for "this should be real" checks.
pub fn max_imag(m: &CMat) -> f64 {
    m.iter().fold(0.0f64, |acc, v| acc.max(v.im.abs()))
}

pub fn frobenius(m: &CMat) -> f64 {
    m.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

pub fn frobenius_real(m: &Array2<f64>) -> f64 {
    m.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// `||a - b||_F / max(||b||_F, 1)`.
pub fn rel_error(a: &CMat, b: &CMat) -> f64 {
    let diff = a - b;
    frobenius(&diff) / frobenius(b).max(1.0)
}

pub fn kron_complex(a: &CMat, b: &CMat) -> CMat {
    let (ar, ac) = a.dim();
    let (br, bc) = b.dim();
    let mut out = CMat::zeros((ar * br, ac * bc));
    for i in 0..ar {
        for j in 0..ac {
            let v = a[[i, j]];
            for p in 0..br {
                for q in 0..bc {
                    out[[i * br + p, j * bc + q]] = v * b[[p, q]];
                }
            }
        }
    }
    out
}

/// vec(X) for an N x T matrix: stack columns, entry (n,t) at index t*N + n.
pub fn vectorize(x: &CMat) -> Array1<Complex64> {
    let (n, t) = x.dim();
    let mut v = Array1::zeros(n * t);
    for tt in 0..t {
        for nn in 0..n {
            v[tt * n + nn] = x[[nn, tt]];
        }
    }
    v
}

pub fn unvectorize(v: &Array1<Complex64>, n: usize, t: usize) -> Result<CMat> {
    if v.len() != n * t {
        return Err(Error::DimensionMismatch(format!(
            "cannot reshape length {} into {}x{}",
            v.len(),
            n,
            t
        )));
    }
    let mut x = CMat::zeros((n, t));
    for tt in 0..t {
        for nn in 0..n {
            x[[nn, tt]] = v[tt * n + nn];
        }
    }
    Ok(x)
}

pub fn vectorize_real(x: &Array2<f64>) -> Array1<f64> {
    let (n, t) = x.dim();
    let mut v = Array1::zeros(n * t);
    for tt in 0..t {
        for nn in 0..n {
            v[tt * n + nn] = x[[nn, tt]];
        }
    }
    v
}

pub fn unvectorize_real(v: &Array1<f64>, n: usize, t: usize) -> Array2<f64> {
    let mut x = Array2::zeros((n, t));
    for tt in 0..t {
        for nn in 0..n {
            x[[nn, tt]] = v[tt * n + nn];
        }
    }
    x
}

/// Symmetric eigendecomposition with eigenvalues ascending. Returns
/// `(values, vectors)`; column k of `vectors` is the k-th eigenvector.
pub fn eigh_ascending(m: &Array2<f64>) -> Result<(Array1<f64>, Array2<f64>)> {
    let (vals, vecs) = m.eigh(UPLO::Lower)?;
    Ok((vals, vecs))
}

/// General (possibly non-symmetric) real eigendecomposition: complex
/// eigenvalues and right eigenvectors sorted ascending by (re, im).
pub fn eig_general(m: &Array2<f64>) -> Result<(Array1<Complex64>, CMat)> {
    let (vals, vecs) = m.eig()?;
    let n = vals.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        (vals[a].re, vals[a].im)
            .partial_cmp(&(vals[b].re, vals[b].im))
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let sorted_vals = Array1::from_iter(order.iter().map(|&i| vals[i]));
    let mut sorted_vecs = CMat::zeros((n, n));
    for (k, &i) in order.iter().enumerate() {
        sorted_vecs.column_mut(k).assign(&vecs.column(i));
    }
    Ok((sorted_vals, sorted_vecs))
}

/// 2-norm condition number estimate via SVD.
pub fn condition_number(m: &CMat) -> Result<f64> {
    let (_, s, _) = m.svd(false, false)?;
    let max = s.iter().cloned().fold(0.0f64, f64::max);
    let min = s.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok(if min > 0.0 { max / min } else { f64::INFINITY })
}

pub fn inv_complex(m: &CMat) -> Result<CMat> {
    Ok(m.inv()?)
}

/// Minimum-norm least-squares solution of `a x = b` via SVD with singular
/// values below `rcond * s_max` truncated.
pub fn lstsq_truncated(a: &Array2<f64>, b: &Array1<f64>, rcond: f64) -> Result<Array1<f64>> {
    if a.nrows() != b.len() {
        return Err(Error::DimensionMismatch(format!(
            "lstsq: {} rows vs rhs length {}",
            a.nrows(),
            b.len()
        )));
    }
    let (u, s, vt) = a.svd(true, true)?;
    let u = u.expect("requested");
    let vt = vt.expect("requested");
    let smax = s.iter().cloned().fold(0.0f64, f64::max);
    let cutoff = rcond * smax;
    let mut x = Array1::zeros(a.ncols());
    for (k, &sv) in s.iter().enumerate() {
        if sv > cutoff {
            let coef = u.column(k).dot(b) / sv;
            x.scaled_add(coef, &vt.row(k));
        }
    }
    Ok(x)
}

/// Pseudo-inverse of a real symmetric matrix; eigenvalues with magnitude
/// below `rcond * max|lambda|` are dropped.
pub fn pinv_symmetric(m: &Array2<f64>, rcond: f64) -> Result<Array2<f64>> {
    let (vals, vecs) = eigh_ascending(m)?;
    let max = vals.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let cutoff = rcond * max;
    let n = m.nrows();
    let mut out = Array2::zeros((n, n));
    for k in 0..n {
        if vals[k].abs() > cutoff {
            let col = vecs.column(k);
            let inv = 1.0 / vals[k];
            for i in 0..n {
                for j in 0..n {
                    out[[i, j]] += inv * col[i] * col[j];
                }
            }
        }
    }
    Ok(out)
}

/// Apply a scalar function to a real symmetric matrix through its
/// eigendecomposition.
pub fn symmetric_matrix_function(
    m: &Array2<f64>,
    f: impl Fn(f64) -> f64,
) -> Result<Array2<f64>> {
    let (vals, vecs) = eigh_ascending(m)?;
    let n = m.nrows();
    let mut out = Array2::zeros((n, n));
    for k in 0..n {
        let fv = f(vals[k]);
        if fv != 0.0 {
            let col = vecs.column(k);
            for i in 0..n {
                for j in 0..n {
                    out[[i, j]] += fv * col[i] * col[j];
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn vectorize_convention() {
        // X is N x T with N=2, T=3; (n,t) lands at t*N + n
        let x = to_complex(&array![[1.0, 3.0, 5.0], [2.0, 4.0, 6.0]].view());
        let v = vectorize(&x);
        let expected: Vec<f64> = vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
        for (a, b) in v.iter().zip(expected) {
            assert_eq!(a.re, b);
        }
        assert_eq!(unvectorize(&v, 2, 3).unwrap(), x);
    }

    #[test]
    fn lstsq_exact_and_truncated() {
        let a = array![[1.0, 0.0], [0.0, 2.0], [0.0, 0.0]];
        let b = array![3.0, 4.0, 5.0];
        let x = lstsq_truncated(&a, &b, 1e-10).unwrap();
        assert!((x[0] - 3.0).abs() < 1e-12);
        assert!((x[1] - 2.0).abs() < 1e-12);

        // rank-deficient: duplicate column, minimum-norm solution splits
        let a = array![[1.0, 1.0], [1.0, 1.0]];
        let b = array![2.0, 2.0];
        let x = lstsq_truncated(&a, &b, 1e-10).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-10 && (x[1] - 1.0).abs() < 1e-10);
    }

    #[test]
    fn pinv_symmetric_singular() {
        let m = array![[1.0, -1.0], [-1.0, 1.0]];
        let p = pinv_symmetric(&m, 1e-12).unwrap();
        // Moore-Penrose identity m p m = m
        let mpm = m.dot(&p).dot(&m);
        for (a, b) in mpm.iter().zip(m.iter()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn eig_general_nonsymmetric() {
        // L of the weighted directed 2-cycle; eigenvalues {0, 3}
        let m = array![[2.0, -2.0], [-1.0, 1.0]];
        let (vals, vecs) = eig_general(&m).unwrap();
        assert!((vals[0] - Complex64::new(0.0, 0.0)).norm() < 1e-10);
        assert!((vals[1] - Complex64::new(3.0, 0.0)).norm() < 1e-10);
        let mc = to_complex(&m.view());
        let resid = mc.dot(&vecs) - vecs.dot(&CMat::from_diag(&vals));
        assert!(frobenius(&resid) < 1e-10);
    }
}
