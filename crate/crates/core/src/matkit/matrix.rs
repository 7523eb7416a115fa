//! Dense row-major complex matrix.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

/// Dense `rows × cols` complex matrix stored row-major.
///
/// Values are immutable in the sense that every operation returns a new
/// matrix; the mutable accessors exist for builders inside this crate.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMatrix")]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

#[derive(Deserialize)]
struct RawMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl TryFrom<RawMatrix> for Matrix {
    type Error = Error;

    fn try_from(raw: RawMatrix) -> Result<Self> {
        Matrix::new(raw.rows, raw.cols, raw.data)
    }
}

impl Matrix {
    /// Builds a matrix from row-major entries, rejecting wrong lengths and
    /// non-finite values.
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries supplied for a {rows}×{cols} matrix",
                data.len()
            )));
        }
        if let Some(pos) = data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite {
                row: pos / cols.max(1),
                col: pos % cols.max(1),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub(crate) fn from_vec_unchecked(rows: usize, cols: usize, data: Vec<C64>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Real matrix from row slices. Panics on ragged input.
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self::from_fn(r, c, |i, j| C64::new(rows[i][j], 0.0))
    }

    /// Complex matrix from row vectors. Panics on ragged input.
    pub fn from_rows(rows: &[Vec<C64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self::from_fn(r, c, |i, j| rows[i][j])
    }

    /// Matrix whose columns are the given vectors (all of length `rows`).
    pub fn from_columns(rows: usize, columns: &[Vec<C64>]) -> Self {
        assert!(columns.iter().all(|c| c.len() == rows), "column length mismatch");
        Self::from_fn(rows, columns.len(), |i, j| columns[j][i])
    }

    pub fn diag(entries: &[C64]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, &z) in entries.iter().enumerate() {
            m[(i, i)] = z;
        }
        m
    }

    pub fn scalar(z: C64) -> Self {
        Self::from_vec_unchecked(1, 1, vec![z])
    }

    /// The `n × n` nilpotent upper shift.
    pub fn jordan(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 1..n {
            m[(i - 1, i)] = ONE;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0 || self.cols == 0
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub(crate) fn require_square(&self, what: &str) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::Dimension(format!(
                "{what} needs a square matrix, got {}×{}",
                self.rows, self.cols
            )))
        }
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn columns(&self) -> Vec<Vec<C64>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, z: C64) -> Self {
        Self::from_vec_unchecked(self.rows, self.cols, self.data.iter().map(|&x| x * z).collect())
    }

    pub fn scale_real(&self, s: f64) -> Self {
        Self::from_vec_unchecked(self.rows, self.cols, self.data.iter().map(|&x| x * s).collect())
    }

    /// `e^{iθ} A`.
    pub fn rotate(&self, theta: f64) -> Self {
        self.scale(C64::from_polar(1.0, theta))
    }

    /// `(A + A*) / 2`.
    pub fn hermitian_part(&self) -> Self {
        assert!(self.is_square());
        Self::from_fn(self.rows, self.cols, |i, j| (self[(i, j)] + self[(j, i)].conj()) * 0.5)
    }

    /// `Re(e^{iθ} A)`, assembled so the result is exactly Hermitian.
    pub fn rotated_real_part(&self, theta: f64) -> Self {
        let w = C64::from_polar(1.0, theta);
        let n = self.rows;
        let mut h = Self::zeros(n, n);
        for i in 0..n {
            h[(i, i)] = C64::new((w * self[(i, i)]).re, 0.0);
            for j in (i + 1)..n {
                let z = (w * self[(i, j)] + (w * self[(j, i)]).conj()) * 0.5;
                h[(i, j)] = z;
                h[(j, i)] = z.conj();
            }
        }
        h
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn hermitian_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut s = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                s += (self[(i, j)] - self[(j, i)].conj()).norm_sqr();
            }
        }
        s.sqrt()
    }

    /// Distance `‖A − B‖_F`; panics on shape mismatch.
    pub fn distance(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// `‖A*A − I‖_F`.
    pub fn isometry_defect(&self) -> f64 {
        self.gram().distance(&Self::identity(self.cols))
    }

    /// `A*A`.
    pub fn gram(&self) -> Self {
        let (m, n) = (self.rows, self.cols);
        let mut g = Self::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let mut s = ZERO;
                for k in 0..m {
                    s += self[(k, i)].conj() * self[(k, j)];
                }
                g[(i, j)] = s;
                g[(j, i)] = s.conj();
            }
        }
        g
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(
            self.cols, other.rows,
            "matmul shape mismatch: {}×{} · {}×{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let (m, k, n) = (self.rows, self.cols, other.cols);
        let mut out = vec![ZERO; m * n];
        for i in 0..m {
            let row = &mut out[i * n..(i + 1) * n];
            for p in 0..k {
                let a = self.data[i * k + p];
                if a == ZERO {
                    continue;
                }
                let brow = &other.data[p * n..(p + 1) * n];
                for (o, b) in row.iter_mut().zip(brow) {
                    *o += a * b;
                }
            }
        }
        Self::from_vec_unchecked(m, n, out)
    }

    /// `A^k` by repeated multiplication; `A^0 = I`.
    pub fn power(&self, k: usize) -> Self {
        assert!(self.is_square());
        let mut p = Self::identity(self.rows);
        for _ in 0..k {
            p = p.matmul(self);
        }
        p
    }

    /// `V* A V`.
    pub fn conjugate_by(&self, v: &Self) -> Self {
        v.adjoint().matmul(self).matmul(v)
    }

    /// Kronecker product: block `(i, j)` equals `a_ij · B`.
    pub fn kron(&self, other: &Self) -> Self {
        let (p, q) = (other.rows, other.cols);
        Self::from_fn(self.rows * p, self.cols * q, |i, j| {
            self[(i / p, j / q)] * other[(i % p, j % q)]
        })
    }

    /// Block-diagonal direct sum of square or rectangular blocks.
    pub fn direct_sum(blocks: &[&Self]) -> Self {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            out.set_block(r0, c0, b);
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    pub fn block(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> Self {
        assert!(r0 + nr <= self.rows && c0 + nc <= self.cols, "block out of range");
        Self::from_fn(nr, nc, |i, j| self[(r0 + i, c0 + j)])
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Self) {
        assert!(r0 + b.rows <= self.rows && c0 + b.cols <= self.cols, "block out of range");
        for i in 0..b.rows {
            for j in 0..b.cols {
                self[(r0 + i, c0 + j)] = b[(i, j)];
            }
        }
    }

    /// Columns selected by index, in the given order.
    pub fn select_columns(&self, idx: &[usize]) -> Self {
        Self::from_fn(self.rows, idx.len(), |i, j| self[(i, idx[j])])
    }

    /// Horizontal concatenation `[A | B]`.
    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        Self::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self[(i, j)]
            } else {
                other[(i, j - self.cols)]
            }
        })
    }

    /// Vertical concatenation `[A; B]`.
    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        Self::from_fn(self.rows + other.rows, self.cols, |i, j| {
            if i < self.rows {
                self[(i, j)]
            } else {
                other[(i - self.rows, j)]
            }
        })
    }

    /// Permutation matrix `P` with `P e_j = e_{perm[j]}`, so that
    /// `P* A P` reorders the basis as `perm`.
    pub fn permutation(perm: &[usize]) -> Self {
        let n = perm.len();
        let mut p = Self::zeros(n, n);
        for (j, &i) in perm.iter().enumerate() {
            p[(i, j)] = ONE;
        }
        p
    }

    pub fn mat_vec(&self, x: &[C64]) -> Vec<C64> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.data[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .zip(x)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = C64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        self.matmul(rhs)
    }
}

impl Add for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix::from_vec_unchecked(
            self.rows,
            self.cols,
            self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        )
    }
}

impl Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix::from_vec_unchecked(
            self.rows,
            self.cols,
            self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        )
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}×{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:>9.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

pub(crate) fn dot(x: &[C64], y: &[C64]) -> C64 {
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}

pub(crate) fn norm(x: &[C64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jordan_block_shape() {
        let j = Matrix::jordan(3);
        assert_eq!(j[(0, 1)], ONE);
        assert_eq!(j[(1, 2)], ONE);
        assert_eq!(j[(2, 0)], ZERO);
        assert_eq!(j.power(3), Matrix::zeros(3, 3));
        assert_ne!(j.power(2), Matrix::zeros(3, 3));
    }

    #[test]
    fn json_shape_and_validation() {
        let m = Matrix::from_rows(&[vec![C64::new(1.0, -2.0), ZERO]]);
        let v = serde_json::to_value(&m).unwrap();
        assert_eq!(v, serde_json::json!({"rows": 1, "cols": 2, "data": [[1.0, -2.0], [0.0, 0.0]]}));
        assert_eq!(serde_json::from_value::<Matrix>(v).unwrap(), m);
        let bad = serde_json::json!({"rows": 2, "cols": 2, "data": [[1.0, 0.0]]});
        assert!(serde_json::from_value::<Matrix>(bad).is_err());
    }

    #[test]
    fn new_rejects_bad_input() {
        assert!(Matrix::new(2, 2, vec![ONE; 3]).is_err());
        let err = Matrix::new(1, 2, vec![ONE, C64::new(f64::NAN, 0.0)]).unwrap_err();
        assert_eq!(err, Error::NonFinite { row: 0, col: 1 });
    }

    #[test]
    fn kron_with_scalar_one_is_identity_map() {
        let a = Matrix::from_real_rows(&[&[1.0, 2.0], &[3.0, 4.0]]);
        assert_eq!(a.kron(&Matrix::identity(1)), a);
        assert_eq!(Matrix::identity(1).kron(&a), a);
    }

    #[test]
    fn kron_block_layout() {
        let a = Matrix::from_real_rows(&[&[1.0, 2.0], &[3.0, 4.0]]);
        let b = Matrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let k = a.kron(&b);
        assert_eq!((k.rows(), k.cols()), (4, 4));
        assert_eq!(k.block(2, 0, 2, 2), b.scale_real(3.0));
        assert_eq!(k.block(0, 2, 2, 2), b.scale_real(2.0));
    }

    #[test]
    fn shift_tensor_shift_squares_to_zero() {
        let j2 = Matrix::jordan(2);
        let k = j2.kron(&j2);
        assert_ne!(k, Matrix::zeros(4, 4));
        assert_eq!(k.power(2), Matrix::zeros(4, 4));
    }

    #[test]
    fn rotated_real_part_is_exactly_hermitian() {
        let a = Matrix::from_fn(4, 4, |i, j| C64::new(i as f64 - 0.3 * j as f64, 0.7 * (i * j) as f64));
        let h = a.rotated_real_part(0.37);
        assert_eq!(h.hermitian_deviation(), 0.0);
        let reference = a.rotate(0.37).hermitian_part();
        assert!(h.distance(&reference) < 1e-14);
    }

    #[test]
    fn permutation_conjugation_reorders_basis() {
        let d = Matrix::diag(&[C64::new(1.0, 0.0), C64::new(2.0, 0.0), C64::new(3.0, 0.0)]);
        let p = Matrix::permutation(&[2, 0, 1]);
        let r = d.conjugate_by(&p);
        assert_eq!(r[(0, 0)].re, 3.0);
        assert_eq!(r[(1, 1)].re, 1.0);
        assert_eq!(r[(2, 2)].re, 2.0);
    }
}
