//! Small dense kernels: singular values, determinants, inverses, exponentials.

use super::complex::{Cplx, ONE, ZERO};
use super::matrix::{DenseMatrix, Field};
use crate::error::{Error, Result};

/// Singular values of a real matrix given as a list of columns, by one-sided
/// (Hestenes) Jacobi orthogonalization. Sorted descending; one value per column.
pub fn singular_values_of_columns(columns: &[Vec<f64>]) -> Vec<f64> {
    let mut cols: Vec<Vec<f64>> = columns.to_vec();
    let k = cols.len();
    for _sweep in 0..80 {
        let mut rotated = false;
        for i in 0..k {
            for j in i + 1..k {
                let (alpha, beta, gamma) = cols[i].iter().zip(&cols[j]).fold((0.0, 0.0, 0.0), |acc, (a, b)| {
                    (acc.0 + a * a, acc.1 + b * b, acc.2 + a * b)
                });
                if gamma == 0.0 || gamma.abs() <= 1e-15 * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let (left, right) = cols.split_at_mut(j);
                for (a, b) in left[i].iter_mut().zip(right[0].iter_mut()) {
                    let (x, y) = (*a, *b);
                    *a = c * x - s * y;
                    *b = s * x + c * y;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sv: Vec<f64> = cols.iter().map(|c| c.iter().map(|x| x * x).sum::<f64>().sqrt()).collect();
    sv.sort_by(|a, b| b.partial_cmp(a).expect("finite"));
    sv
}

/// Number of singular values above `rel · largest`.
pub fn numerical_rank(sv: &[f64], rel: f64) -> usize {
    let top = sv.iter().copied().fold(0.0, f64::max);
    if top == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel * top).count()
}

/// Determinant of a square real matrix given by columns (partial-pivot LU).
pub fn det_of_columns(columns: &[Vec<f64>]) -> f64 {
    let n = columns.len();
    assert!(columns.iter().all(|c| c.len() == n), "determinant needs a square matrix");
    // a[i][j] = columns[j][i]
    let mut a: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| columns[j][i]).collect()).collect();
    let mut det = 1.0;
    for k in 0..n {
        let piv = (k..n)
            .max_by(|&x, &y| a[x][k].abs().partial_cmp(&a[y][k].abs()).expect("finite"))
            .expect("non-empty");
        if a[piv][k] == 0.0 {
            return 0.0;
        }
        if piv != k {
            a.swap(piv, k);
            det = -det;
        }
        det *= a[k][k];
        for i in k + 1..n {
            let f = a[i][k] / a[k][k];
            for j in k..n {
                a[i][j] -= f * a[k][j];
            }
        }
    }
    det
}

/// Complex determinant of a square matrix.
pub fn det(m: &DenseMatrix) -> Cplx {
    assert!(m.is_square());
    let n = m.rows();
    let mut a = m.entries();
    let mut det = ONE;
    for k in 0..n {
        let piv = (k..n)
            .max_by(|&x, &y| a[x * n + k].abs().partial_cmp(&a[y * n + k].abs()).expect("finite"))
            .expect("non-empty");
        if a[piv * n + k].abs() == 0.0 {
            return ZERO;
        }
        if piv != k {
            for j in 0..n {
                a.swap(piv * n + j, k * n + j);
            }
            det = -det;
        }
        let d = a[k * n + k];
        det *= d;
        for i in k + 1..n {
            let f = a[i * n + k] / d;
            for j in k..n {
                let t = a[k * n + j];
                a[i * n + j] -= f * t;
            }
        }
    }
    det
}

/// Inverse by Gauss–Jordan elimination with partial pivoting.
pub fn inverse(m: &DenseMatrix) -> Result<DenseMatrix> {
    if !m.is_square() {
        return Err(Error::Shape("inverse of a non-square matrix".into()));
    }
    let n = m.rows();
    let mut a = m.entries();
    let mut inv = vec![ZERO; n * n];
    for i in 0..n {
        inv[i * n + i] = ONE;
    }
    let scale = m.frobenius();
    for k in 0..n {
        let piv = (k..n)
            .max_by(|&x, &y| a[x * n + k].abs().partial_cmp(&a[y * n + k].abs()).expect("finite"))
            .expect("non-empty");
        if a[piv * n + k].abs() <= 1e-21 * scale {
            return Err(Error::Shape("matrix is singular".into()));
        }
        if piv != k {
            for j in 0..n {
                a.swap(piv * n + j, k * n + j);
                inv.swap(piv * n + j, k * n + j);
            }
        }
        let d = a[k * n + k].recip();
        for j in 0..n {
            a[k * n + j] *= d;
            inv[k * n + j] *= d;
        }
        for i in 0..n {
            if i == k {
                continue;
            }
            let f = a[i * n + k];
            if f == ZERO {
                continue;
            }
            for j in 0..n {
                let (x, y) = (a[k * n + j], inv[k * n + j]);
                a[i * n + j] -= f * x;
                inv[i * n + j] -= f * y;
            }
        }
    }
    let out = DenseMatrix::from_complex(n, n, &inv)?;
    Ok(if m.is_real() { out.to_real_if(0.0) } else { out })
}

/// Matrix exponential by scaling and squaring with a truncated Taylor series.
pub fn expm(a: &DenseMatrix) -> DenseMatrix {
    assert!(a.is_square());
    let n = a.rows();
    let norm = a.frobenius();
    let mut squarings = 0;
    let mut scaled = norm;
    while scaled > 0.25 {
        scaled *= 0.5;
        squarings += 1;
    }
    let b = a.scale(0.5f64.powi(squarings));
    let mut term = DenseMatrix::identity(a.field(), n);
    let mut sum = term.clone();
    for k in 1..=20 {
        term = term.matmul(&b).scale(1.0 / k as f64);
        sum = sum.add(&term);
        if term.frobenius() <= 1e-18 * sum.frobenius() {
            break;
        }
    }
    for _ in 0..squarings {
        sum = sum.matmul(&sum);
    }
    if a.field() == Field::Real {
        sum.to_real_if(0.0)
    } else {
        sum
    }
}
