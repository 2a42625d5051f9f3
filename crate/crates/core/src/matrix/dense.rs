use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex;

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

/// Dense complex matrix.
///
/// All constructors reject NaN and infinite entries, so every value of this
/// type is finite. Storage is delegated to `nalgebra`; the public API speaks
/// row-major, which is also what the document format uses.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix(DMatrix<C64>);

impl ComplexMatrix {
    /// Builds a matrix from row-major entries.
    pub fn new(rows: usize, cols: usize, entries: Vec<C64>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::shape(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        ComplexMatrix::from_nalgebra(DMatrix::from_row_iterator(rows, cols, entries))
    }

    /// Wraps an existing `nalgebra` matrix, checking finiteness.
    pub fn from_nalgebra(inner: DMatrix<C64>) -> Result<Self> {
        // column-major storage
        let rows = inner.nrows().max(1);
        let bad = inner
            .iter()
            .enumerate()
            .filter(|(_, z)| !z.re.is_finite() || !z.im.is_finite())
            .map(|(k, _)| (k % rows, k / rows))
            .min();
        match bad {
            Some((row, col)) => Err(Error::NonFinite { row, col }),
            None => Ok(ComplexMatrix(inner)),
        }
    }

    /// Builds from real row-major entries.
    pub fn from_real(rows: usize, cols: usize, entries: &[f64]) -> Result<Self> {
        ComplexMatrix::new(rows, cols, entries.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        let m = DMatrix::from_fn(rows, cols, f);
        debug_assert!(m.iter().all(|z| z.re.is_finite() && z.im.is_finite()));
        ComplexMatrix(m)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix(DMatrix::zeros(rows, cols))
    }

    pub fn identity(n: usize) -> Self {
        ComplexMatrix(DMatrix::identity(n, n))
    }

    /// Matrix unit with a single one at `(i, j)`.
    pub fn unit(rows: usize, cols: usize, i: usize, j: usize) -> Self {
        let mut m = DMatrix::zeros(rows, cols);
        m[(i, j)] = ONE;
        ComplexMatrix(m)
    }

    pub fn diag_real(values: &[f64]) -> Self {
        let n = values.len();
        ComplexMatrix::from_fn(n, n, |i, j| if i == j { C64::new(values[i], 0.0) } else { ZERO })
    }

    pub fn diag(values: &[C64]) -> Self {
        let n = values.len();
        ComplexMatrix::from_fn(n, n, |i, j| if i == j { values[i] } else { ZERO })
    }

    /// Column vector.
    pub fn column(values: &[C64]) -> Self {
        ComplexMatrix(DMatrix::from_column_slice(values.len(), 1, values))
    }

    /// Block-diagonal sum of square or rectangular blocks.
    pub fn block_diag(blocks: &[&ComplexMatrix]) -> Self {
        let rows = blocks.iter().map(|b| b.rows()).sum();
        let cols = blocks.iter().map(|b| b.cols()).sum();
        let mut out = ComplexMatrix::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            out.set_block(r0, c0, b);
            r0 += b.rows();
            c0 += b.cols();
        }
        out
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn shape(&self) -> (usize, usize) {
        self.0.shape()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.0[(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, value: C64) {
        self.0[(i, j)] = value;
    }

    pub fn as_nalgebra(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn into_nalgebra(self) -> DMatrix<C64> {
        self.0
    }

    pub fn row_major(&self) -> Vec<C64> {
        let mut out = Vec::with_capacity(self.rows() * self.cols());
        for r in 0..self.rows() {
            for c in 0..self.cols() {
                out.push(self.0[(r, c)]);
            }
        }
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = &C64> {
        self.0.iter()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        ComplexMatrix(self.0.adjoint())
    }

    pub fn transpose(&self) -> Self {
        ComplexMatrix(self.0.transpose())
    }

    /// Entrywise complex conjugate.
    pub fn conjugate(&self) -> Self {
        ComplexMatrix(self.0.map(|z| z.conj()))
    }

    pub fn scale(&self, s: C64) -> Self {
        ComplexMatrix(&self.0 * s)
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    pub fn frobenius(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Trace pairing `trace(self† other)`.
    pub fn inner(&self, other: &ComplexMatrix) -> C64 {
        debug_assert_eq!(self.shape(), other.shape());
        self.0.iter().zip(other.0.iter()).map(|(a, b)| a.conj() * b).sum()
    }

    /// Frobenius distance.
    pub fn distance(&self, other: &ComplexMatrix) -> f64 {
        debug_assert_eq!(self.shape(), other.shape());
        self.0.iter().zip(other.0.iter()).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt()
    }

    /// In-place `self += s * other`.
    pub fn axpy(&mut self, s: C64, other: &ComplexMatrix) {
        debug_assert_eq!(self.shape(), other.shape());
        for (a, b) in self.0.iter_mut().zip(other.0.iter()) {
            *a += s * b;
        }
    }

    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::shape(format!("cannot invert a {}x{} matrix", self.rows(), self.cols())));
        }
        self.0.clone().try_inverse().map(ComplexMatrix).ok_or(Error::Singular)
    }

    /// Copy of the `nrows x ncols` block starting at `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, nrows: usize, ncols: usize) -> Self {
        ComplexMatrix(self.0.view((r0, c0), (nrows, ncols)).into_owned())
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, block: &ComplexMatrix) {
        self.0.view_mut((r0, c0), block.shape()).copy_from(&block.0);
    }

    /// Applies the matrix to a vector.
    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.cols(), "vector length does not match matrix columns");
        (0..self.rows()).map(|r| (0..self.cols()).map(|c| self.0[(r, c)] * v[c]).sum()).collect()
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.max_abs() <= tol
    }

    pub(crate) fn expect_shape(&self, rows: usize, cols: usize, what: &str) -> Result<()> {
        if self.shape() != (rows, cols) {
            return Err(Error::shape(format!(
                "{what}: expected {rows}x{cols}, got {}x{}",
                self.rows(),
                self.cols()
            )));
        }
        Ok(())
    }

    pub(crate) fn expect_square(&self, what: &str) -> Result<()> {
        if !self.is_square() {
            return Err(Error::shape(format!(
                "{what}: expected a square matrix, got {}x{}",
                self.rows(),
                self.cols()
            )));
        }
        Ok(())
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ComplexMatrix {}x{} [", self.rows(), self.cols())?;
        for r in 0..self.rows() {
            if r > 0 {
                write!(f, "; ")?;
            }
            for c in 0..self.cols() {
                let z = self.0[(r, c)];
                if c > 0 {
                    write!(f, ", ")?;
                }
                if z.im == 0.0 {
                    write!(f, "{}", z.re)?;
                } else {
                    write!(f, "{}{:+}i", z.re, z.im)?;
                }
            }
        }
        write!(f, "]")
    }
}

impl<'a> Mul<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols(), rhs.rows(), "matrix product shape mismatch");
        ComplexMatrix(&self.0 * &rhs.0)
    }
}

impl<'a> Add<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 + &rhs.0)
    }
}

impl<'a> Sub<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 - &rhs.0)
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        ComplexMatrix(-&self.0)
    }
}

impl Mul<C64> for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: C64) -> ComplexMatrix {
        self.scale(rhs)
    }
}

/// Inner product `a† b` of two vectors.
pub fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn vector_norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub(crate) fn check_vector_len(v: &[C64], n: usize) -> Result<()> {
    if v.len() != n {
        return Err(Error::shape(format!("vector: expected length {n}, got {}", v.len())));
    }
    if let Some(k) = v.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite { row: k, col: 0 });
    }
    Ok(())
}
