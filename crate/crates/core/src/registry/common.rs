//! Small pieces shared by several families.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::numeric::complex::{Cplx, I, ONE};
use crate::numeric::{DenseMatrix, Field};

use super::group::unit;

/// All permutations of `0..n` in lexicographic order (identity first).
pub(crate) fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    loop {
        out.push(p.clone());
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| p[i] < p[i + 1]) else {
            return out;
        };
        let j = (i + 1..n).rev().find(|&j| p[j] > p[i]).expect("successor exists");
        p.swap(i, j);
        p[i + 1..].reverse();
    }
}

/// Permutation matrices with a description of the induced slice action.
pub(crate) fn permutation_reps(n: usize, field: Field) -> Vec<(DenseMatrix, String)> {
    permutations(n)
        .into_iter()
        .map(|p| {
            let m = DenseMatrix::permutation(&p);
            let m = if field == Field::Complex { m.to_complex() } else { m };
            // w⁻¹·diag(y)·w has entry y[p[k]] at position k.
            let image: Vec<String> = p.iter().map(|&i| format!("y{}", i + 1)).collect();
            (m, format!("y -> ({})", image.join(", ")))
        })
        .collect()
}

/// Distance from the subgroup of diagonal matrices with unit-modulus entries.
pub(crate) fn torus_distance(m: &DenseMatrix) -> f64 {
    m.off_diagonal_norm() + m.diagonal().iter().map(|z| (z.abs() - 1.0).abs()).sum::<f64>()
}

/// Orthonormal basis of the real-symmetric (`complex = false`) or Hermitian
/// matrices: diagonal units first, then off-diagonal pairs.
pub(crate) fn self_adjoint_basis(n: usize, complex: bool) -> Vec<DenseMatrix> {
    let field = if complex { Field::Complex } else { Field::Real };
    let mut out: Vec<DenseMatrix> = (0..n).map(|j| unit(field, n, j, j, ONE)).collect();
    for j in 0..n {
        for k in j + 1..n {
            let mut s = DenseMatrix::zeros(field, n, n);
            s.set(j, k, Cplx::real(FRAC_1_SQRT_2));
            s.set(k, j, Cplx::real(FRAC_1_SQRT_2));
            out.push(s);
            if complex {
                let mut a = DenseMatrix::zeros(field, n, n);
                a.set(j, k, I.scale(FRAC_1_SQRT_2));
                a.set(k, j, I.scale(-FRAC_1_SQRT_2));
                out.push(a);
            }
        }
    }
    out
}

/// Determinant of a 2×2 matrix.
pub(crate) fn det2(m: &DenseMatrix) -> Cplx {
    m.at(0, 0) * m.at(1, 1) - m.at(0, 1) * m.at(1, 0)
}

/// An eigenvector of the 2×2 matrix `m` for the eigenvalue `lambda`: the
/// larger of the two candidate columns of the adjugate of `m − λI`.
pub(crate) fn eigvec2(m: &DenseMatrix, lambda: Cplx) -> [Cplx; 2] {
    let a = [m.at(0, 1), lambda - m.at(0, 0)];
    let b = [lambda - m.at(1, 1), m.at(1, 0)];
    let na = a[0].norm_sqr() + a[1].norm_sqr();
    let nb = b[0].norm_sqr() + b[1].norm_sqr();
    let v = if na >= nb { a } else { b };
    let s = 1.0 / (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
    [v[0].scale(s), v[1].scale(s)]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutations_are_complete_and_lexicographic() {
        let p = permutations(3);
        assert_eq!(p.len(), 6);
        assert_eq!(p[0], vec![0, 1, 2]);
        assert_eq!(p[5], vec![2, 1, 0]);
        assert_eq!(permutations(4).len(), 24);
        assert_eq!(permutations(1), vec![vec![0]]);
    }

    #[test]
    fn self_adjoint_bases_are_orthonormal() {
        for (n, complex, dim) in [(3, false, 6), (3, true, 9)] {
            let b = self_adjoint_basis(n, complex);
            assert_eq!(b.len(), dim);
            for (i, x) in b.iter().enumerate() {
                assert!(x.hermitian_residual() == 0.0);
                for (j, y) in b.iter().enumerate() {
                    let t = if i == j { 1.0 } else { 0.0 };
                    assert!((x.inner(y) - t).abs() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn eigvec2_solves_diagonal_case() {
        let m = DenseMatrix::diag_real(&[3.0, 1.0]);
        let v = eigvec2(&m, Cplx::real(3.0));
        assert!((v[0].abs() - 1.0).abs() < 1e-15 && v[1].abs() < 1e-15);
    }
}
