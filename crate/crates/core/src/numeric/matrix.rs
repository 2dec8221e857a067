//! Dense row-major matrices over the reals or the complex numbers.
//!
//! Complex entries are stored as interleaved `(re, im)` pairs, so a complex
//! `rows × cols` matrix owns `2·rows·cols` reals. Arithmetic between a real and
//! a complex matrix promotes to complex.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::complex::{Cplx, ONE, ZERO};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Real,
    Complex,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        let len = match field {
            Field::Real => rows * cols,
            Field::Complex => 2 * rows * cols,
        };
        Self { field, rows, cols, data: vec![0.0; len] }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, ONE);
        }
        m
    }

    /// Real matrix from row-major entries.
    pub fn from_real(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols || rows == 0 || cols == 0 {
            return Err(Error::Shape(format!(
                "real {rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(Self { field: Field::Real, rows, cols, data })
    }

    /// Complex matrix from row-major entries.
    pub fn from_complex(rows: usize, cols: usize, entries: &[Cplx]) -> Result<Self> {
        if entries.len() != rows * cols || rows == 0 || cols == 0 {
            return Err(Error::Shape(format!(
                "complex {rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        let data = entries.iter().flat_map(|z| [z.re, z.im]).collect();
        Ok(Self { field: Field::Complex, rows, cols, data })
    }

    /// Real matrix from nested rows; panics on ragged input (test and catalog helper).
    pub fn real_rows(rows: &[&[f64]]) -> Self {
        let r = rows.len();
        let c = rows[0].len();
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self::from_real(r, c, rows.iter().flat_map(|row| row.iter().copied()).collect())
            .expect("non-empty")
    }

    pub fn complex_rows(rows: &[&[Cplx]]) -> Self {
        let r = rows.len();
        let c = rows[0].len();
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        let flat: Vec<Cplx> = rows.iter().flat_map(|row| row.iter().copied()).collect();
        Self::from_complex(r, c, &flat).expect("non-empty")
    }

    pub fn diag_real(values: &[f64]) -> Self {
        let n = values.len();
        let mut m = Self::zeros(Field::Real, n, n);
        for (i, &v) in values.iter().enumerate() {
            m.data[i * n + i] = v;
        }
        m
    }

    pub fn diag_complex(values: &[Cplx]) -> Self {
        let n = values.len();
        let mut m = Self::zeros(Field::Complex, n, n);
        for (i, &v) in values.iter().enumerate() {
            m.set(i, i, v);
        }
        m
    }

    pub fn column_vector(values: &[f64]) -> Self {
        Self { field: Field::Real, rows: values.len(), cols: 1, data: values.to_vec() }
    }

    #[inline]
    pub fn field(&self) -> Field {
        self.field
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn is_real(&self) -> bool {
        self.field == Field::Real
    }

    /// Raw storage (interleaved pairs for complex matrices).
    pub fn raw(&self) -> &[f64] {
        &self.data
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> Cplx {
        let k = i * self.cols + j;
        match self.field {
            Field::Real => Cplx::real(self.data[k]),
            Field::Complex => Cplx::new(self.data[2 * k], self.data[2 * k + 1]),
        }
    }

    /// Real part of entry `(i, j)`.
    #[inline]
    pub fn re(&self, i: usize, j: usize) -> f64 {
        let k = i * self.cols + j;
        match self.field {
            Field::Real => self.data[k],
            Field::Complex => self.data[2 * k],
        }
    }

    /// Sets entry `(i, j)`. Writing a value with nonzero imaginary part into a
    /// real matrix promotes it to complex.
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, z: Cplx) {
        if self.field == Field::Real && z.im != 0.0 {
            *self = self.to_complex();
        }
        let k = i * self.cols + j;
        match self.field {
            Field::Real => self.data[k] = z.re,
            Field::Complex => {
                self.data[2 * k] = z.re;
                self.data[2 * k + 1] = z.im;
            }
        }
    }

    pub fn to_complex(&self) -> Self {
        match self.field {
            Field::Complex => self.clone(),
            Field::Real => Self {
                field: Field::Complex,
                rows: self.rows,
                cols: self.cols,
                data: self.data.iter().flat_map(|&x| [x, 0.0]).collect(),
            },
        }
    }

    /// Drops imaginary parts when they are all below `tol` in magnitude.
    pub fn to_real_if(&self, tol: f64) -> Self {
        match self.field {
            Field::Real => self.clone(),
            Field::Complex => {
                if self.data.chunks(2).all(|p| p[1].abs() <= tol) {
                    Self {
                        field: Field::Real,
                        rows: self.rows,
                        cols: self.cols,
                        data: self.data.chunks(2).map(|p| p[0]).collect(),
                    }
                } else {
                    self.clone()
                }
            }
        }
    }

    /// Row-major complex view of all entries.
    pub fn entries(&self) -> Vec<Cplx> {
        match self.field {
            Field::Real => self.data.iter().map(|&x| Cplx::real(x)).collect(),
            Field::Complex => self.data.chunks(2).map(|p| Cplx::new(p[0], p[1])).collect(),
        }
    }

    pub fn matmul(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.cols, other.rows, "matmul shape mismatch");
        let (n, k, m) = (self.rows, self.cols, other.cols);
        if self.is_real() && other.is_real() {
            let mut out = vec![0.0; n * m];
            for i in 0..n {
                for l in 0..k {
                    let a = self.data[i * k + l];
                    if a == 0.0 {
                        continue;
                    }
                    for j in 0..m {
                        out[i * m + j] += a * other.data[l * m + j];
                    }
                }
            }
            return DenseMatrix { field: Field::Real, rows: n, cols: m, data: out };
        }
        let a = self.entries();
        let b = other.entries();
        let mut out = vec![ZERO; n * m];
        for i in 0..n {
            for l in 0..k {
                let x = a[i * k + l];
                for j in 0..m {
                    out[i * m + j] += x * b[l * m + j];
                }
            }
        }
        DenseMatrix::from_complex(n, m, &out).expect("shape")
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> DenseMatrix {
        let mut out = DenseMatrix::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.at(i, j).conj());
            }
        }
        out
    }

    pub fn transpose(&self) -> DenseMatrix {
        let mut out = DenseMatrix::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.at(i, j));
            }
        }
        out
    }

    fn zip_with(&self, other: &DenseMatrix, f: impl Fn(f64, f64) -> f64) -> DenseMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        if self.field == other.field {
            let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect();
            return DenseMatrix { field: self.field, rows: self.rows, cols: self.cols, data };
        }
        let a = self.to_complex();
        let b = other.to_complex();
        let data = a.data.iter().zip(&b.data).map(|(&x, &y)| f(x, y)).collect();
        DenseMatrix { field: Field::Complex, rows: self.rows, cols: self.cols, data }
    }

    pub fn add(&self, other: &DenseMatrix) -> DenseMatrix {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &DenseMatrix) -> DenseMatrix {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, s: f64) -> DenseMatrix {
        DenseMatrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| x * s).collect(),
        }
    }

    pub fn scale_complex(&self, s: Cplx) -> DenseMatrix {
        if s.im == 0.0 {
            return self.scale(s.re);
        }
        let e: Vec<Cplx> = self.entries().into_iter().map(|z| z * s).collect();
        DenseMatrix::from_complex(self.rows, self.cols, &e).expect("shape")
    }

    /// Commutator `self·other − other·self`.
    pub fn commutator(&self, other: &DenseMatrix) -> DenseMatrix {
        self.matmul(other).sub(&other.matmul(self))
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// `Re tr(selfᴴ·other)`, the real Frobenius inner product.
    pub fn inner(&self, other: &DenseMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        if self.field == other.field {
            return self.data.iter().zip(&other.data).map(|(a, b)| a * b).sum();
        }
        self.to_complex().inner(&other.to_complex())
    }

    pub fn trace(&self) -> Cplx {
        let mut t = ZERO;
        for i in 0..self.rows.min(self.cols) {
            t += self.at(i, i);
        }
        t
    }

    pub fn diagonal(&self) -> Vec<Cplx> {
        (0..self.rows.min(self.cols)).map(|i| self.at(i, i)).collect()
    }

    /// Frobenius norm of the strictly off-diagonal part.
    pub fn off_diagonal_norm(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                if i != j {
                    s += self.at(i, j).norm_sqr();
                }
            }
        }
        s.sqrt()
    }

    /// Real-vector view: real entries as-is, complex entries as interleaved pairs.
    pub fn flatten(&self) -> Vec<f64> {
        self.data.clone()
    }

    /// `‖A − Aᴴ‖_F`.
    pub fn hermitian_residual(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        self.sub(&self.adjoint()).frobenius()
    }

    /// `‖AᴴA − I‖_F`.
    pub fn unitarity_residual(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        self.adjoint().matmul(self).sub(&DenseMatrix::identity(self.field, self.rows)).frobenius()
    }

    pub fn column(&self, j: usize) -> Vec<Cplx> {
        (0..self.rows).map(|i| self.at(i, j)).collect()
    }

    /// Reorders columns so that column `k` of the result is column `perm[k]` of `self`.
    pub fn permute_columns(&self, perm: &[usize]) -> DenseMatrix {
        let mut out = DenseMatrix::zeros(self.field, self.rows, self.cols);
        for (k, &src) in perm.iter().enumerate() {
            for i in 0..self.rows {
                out.set(i, k, self.at(i, src));
            }
        }
        out
    }

    /// Permutation matrix `P` with `P·e_j = e_{perm[j]}`.
    pub fn permutation(perm: &[usize]) -> DenseMatrix {
        let n = perm.len();
        let mut m = DenseMatrix::zeros(Field::Real, n, n);
        for (j, &i) in perm.iter().enumerate() {
            m.data[i * n + j] = 1.0;
        }
        m
    }

    pub fn max_abs_diff(&self, other: &DenseMatrix) -> f64 {
        self.sub(other).entries().iter().map(|z| z.abs()).fold(0.0, f64::max)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum JsonData {
    Real(Vec<f64>),
    Complex(Vec<[f64; 2]>),
}

#[derive(Serialize, Deserialize)]
struct JsonMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: JsonData,
}

impl Serialize for DenseMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let data = match self.field {
            Field::Real => JsonData::Real(self.data.clone()),
            Field::Complex => JsonData::Complex(self.data.chunks(2).map(|p| [p[0], p[1]]).collect()),
        };
        JsonMatrix { field: self.field, rows: self.rows, cols: self.cols, data }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for DenseMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = JsonMatrix::deserialize(d)?;
        let parsed = match (j.field, j.data) {
            (Field::Real, JsonData::Real(v)) => DenseMatrix::from_real(j.rows, j.cols, v),
            (Field::Complex, JsonData::Complex(v)) => {
                let e: Vec<Cplx> = v.iter().map(|p| Cplx::new(p[0], p[1])).collect();
                DenseMatrix::from_complex(j.rows, j.cols, &e)
            }
            // An empty array parses as the real variant; let the shape check report it.
            (Field::Complex, JsonData::Real(v)) if v.is_empty() => DenseMatrix::from_complex(j.rows, j.cols, &[]),
            (field, _) => {
                return Err(D::Error::custom(format!("data entries do not match field {field:?}")))
            }
        };
        parsed.map_err(D::Error::custom)
    }
}

impl DenseMatrix {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("matrix serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_encoding_real_and_complex() {
        let m = DenseMatrix::real_rows(&[&[1.0, 2.0], &[3.0, 4.5]]);
        assert_eq!(m.to_json(), r#"{"field":"real","rows":2,"cols":2,"data":[1.0,2.0,3.0,4.5]}"#);
        let c = DenseMatrix::complex_rows(&[&[Cplx::new(1.0, -1.0), Cplx::new(0.0, 2.0)]]);
        assert_eq!(c.to_json(), r#"{"field":"complex","rows":1,"cols":2,"data":[[1.0,-1.0],[0.0,2.0]]}"#);
        assert_eq!(DenseMatrix::from_json(&c.to_json()).unwrap(), c);
    }

    #[test]
    fn json_rejects_bad_length_and_mismatched_field() {
        assert!(DenseMatrix::from_json(r#"{"field":"real","rows":2,"cols":2,"data":[1,2,3]}"#).is_err());
        assert!(DenseMatrix::from_json(r#"{"field":"real","rows":1,"cols":1,"data":[[1,2]]}"#).is_err());
        assert!(DenseMatrix::from_json(r#"{"field":"complex","rows":1,"cols":1,"data":[]}"#).is_err());
    }

    #[test]
    fn storage_length_matches_field() {
        let r = DenseMatrix::zeros(Field::Real, 2, 3);
        assert_eq!(r.raw().len(), 6);
        assert_eq!(r.to_complex().raw().len(), 12);
    }

    #[test]
    fn set_promotes_real_to_complex() {
        let mut m = DenseMatrix::identity(Field::Real, 2);
        m.set(0, 1, Cplx::new(0.0, 1.0));
        assert_eq!(m.field(), Field::Complex);
        assert_eq!(m.at(0, 0), ONE);
    }

    #[test]
    fn permutation_matrix_moves_basis_vectors() {
        let p = DenseMatrix::permutation(&[2, 0, 1]);
        let e0 = DenseMatrix::column_vector(&[1.0, 0.0, 0.0]);
        assert_eq!(p.matmul(&e0).raw(), &[0.0, 0.0, 1.0]);
    }
}
