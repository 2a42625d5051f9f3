//! Spectral routines on dense complex matrices.
//!
//! Eigen- and singular-value decompositions are delegated to `nalgebra`;
//! what this module adds is the tolerance contract. Every Hermiticity or
//! positivity decision compares a residual against `tol * (1 + ‖M‖)`.

use nalgebra::DMatrix;

use super::dense::{ComplexMatrix, C64, ZERO};
use crate::error::{Error, Result};

/// Eigendecomposition `M = V diag(λ) V†` of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Unitary; column `k` belongs to `eigenvalues[k]`.
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEigen {
    /// `V diag(f(λ)) V†`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let v = &self.eigenvectors;
        let d = ComplexMatrix::diag_real(&self.eigenvalues.iter().map(|&l| f(l)).collect::<Vec<_>>());
        &(v * &d) * &v.adjoint()
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map(|l| l)
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    /// Column `k` of the eigenvector matrix.
    pub fn vector(&self, k: usize) -> Vec<C64> {
        (0..self.eigenvectors.rows()).map(|r| self.eigenvectors.get(r, k)).collect()
    }
}

/// Thin singular value decomposition `M = U diag(σ) V†`, σ descending.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: ComplexMatrix,
    pub singular_values: Vec<f64>,
    pub v_adjoint: ComplexMatrix,
}

fn check_finite(m: &ComplexMatrix) -> Result<()> {
    // ComplexMatrix is finite by construction; re-check in case of overflow in products.
    ComplexMatrix::from_nalgebra(m.as_nalgebra().clone()).map(|_| ())
}

fn to_faer(m: &ComplexMatrix) -> faer::Mat<C64> {
    faer::Mat::from_fn(m.rows(), m.cols(), |i, j| m.get(i, j))
}

/// Singular values in descending order.
pub fn singular_values(m: &ComplexMatrix) -> Vec<f64> {
    if m.rows() == 0 || m.cols() == 0 {
        return Vec::new();
    }
    to_faer(m).singular_values().expect("SVD converges for finite input")
}

// nalgebra's complex SVD occasionally returns factors that do not
// reconstruct rank-deficient input, so the factorization comes from faer.
pub fn svd(m: &ComplexMatrix) -> Svd {
    let k = m.rows().min(m.cols());
    if k == 0 {
        return Svd {
            u: ComplexMatrix::zeros(m.rows(), 0),
            singular_values: Vec::new(),
            v_adjoint: ComplexMatrix::zeros(0, m.cols()),
        };
    }
    let dec = to_faer(m).thin_svd().expect("SVD converges for finite input");
    let (u, s, v) = (dec.U(), dec.S().column_vector(), dec.V());
    Svd {
        u: ComplexMatrix::from_fn(m.rows(), k, |i, j| u[(i, j)]),
        singular_values: (0..k).map(|i| s[i].re).collect(),
        v_adjoint: ComplexMatrix::from_fn(k, m.cols(), |i, j| v[(j, i)].conj()),
    }
}

/// Operator norm: the largest singular value.
pub fn op_norm(m: &ComplexMatrix) -> Result<f64> {
    check_finite(m)?;
    Ok(singular_values(m).first().copied().unwrap_or(0.0))
}

/// Operator norm without the finiteness re-check, for internal hot loops.
pub(crate) fn norm(m: &ComplexMatrix) -> f64 {
    singular_values(m).first().copied().unwrap_or(0.0)
}

/// `‖M − M†‖`.
pub fn hermitian_residual(m: &ComplexMatrix) -> f64 {
    norm(&(m - &m.adjoint()))
}

/// Checks `‖M − M†‖ ≤ tol (1 + ‖M‖)`.
pub fn check_hermitian(m: &ComplexMatrix, tol: f64) -> Result<()> {
    m.expect_square("Hermitian check")?;
    let residual = hermitian_residual(m);
    let bound = tol * (1.0 + norm(m));
    if residual > bound {
        return Err(Error::NotHermitian { residual, bound });
    }
    Ok(())
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
pub fn herm_eig(m: &ComplexMatrix, tol: f64) -> Result<HermitianEigen> {
    check_finite(m)?;
    check_hermitian(m, tol)?;
    Ok(herm_eig_unchecked(m))
}

/// Eigendecomposition of the Hermitian part `(M + M†)/2`.
pub(crate) fn herm_eig_unchecked(m: &ComplexMatrix) -> HermitianEigen {
    let n = m.rows();
    if n == 0 {
        return HermitianEigen { eigenvalues: Vec::new(), eigenvectors: ComplexMatrix::zeros(0, 0) };
    }
    let sym = (m.as_nalgebra() + m.as_nalgebra().adjoint()) * C64::new(0.5, 0.0);
    let dec = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| dec.eigenvalues[a].total_cmp(&dec.eigenvalues[b]));
    let vecs = DMatrix::from_fn(n, n, |r, c| dec.eigenvectors[(r, order[c])]);
    HermitianEigen {
        eigenvalues: order.iter().map(|&i| dec.eigenvalues[i]).collect(),
        eigenvectors: ComplexMatrix::from_nalgebra(vecs).expect("finite"),
    }
}

/// Positive element test: Hermitian and spectrum in `[−tol(1+‖M‖), ∞)`.
pub fn is_positive(m: &ComplexMatrix, tol: f64) -> Result<bool> {
    m.expect_square("positivity check")?;
    check_finite(m)?;
    let scale = 1.0 + norm(m);
    if hermitian_residual(m) > tol * scale {
        return Ok(false);
    }
    Ok(herm_eig_unchecked(m).min() >= -tol * scale)
}

/// Eigenvalues of a general square matrix (complex Schur form).
pub fn eigenvalues(m: &ComplexMatrix) -> Result<Vec<C64>> {
    m.expect_square("eigenvalues")?;
    if m.rows() == 0 {
        return Ok(Vec::new());
    }
    m.as_nalgebra()
        .eigenvalues()
        .map(|v| v.iter().copied().collect())
        .ok_or_else(|| Error::invalid("Schur iteration did not converge"))
}

/// Square root and inverse square root of a Hermitian positive definite matrix.
#[derive(Debug, Clone)]
pub struct PositiveRoot {
    pub sqrt: ComplexMatrix,
    pub inv_sqrt: ComplexMatrix,
}

pub fn positive_root(m: &ComplexMatrix, tol: f64) -> Result<PositiveRoot> {
    let eig = herm_eig(m, tol)?;
    let bound = tol * (1.0 + eig.max().abs());
    if eig.min() <= bound {
        return Err(Error::invalid(format!(
            "matrix is not positive definite (smallest eigenvalue {:.3e})",
            eig.min()
        )));
    }
    Ok(PositiveRoot { sqrt: eig.map(f64::sqrt), inv_sqrt: eig.map(|l| 1.0 / l.sqrt()) })
}

/// Numerical rank: number of singular values above `tol (1 + σ_max)`.
pub fn rank(m: &ComplexMatrix, tol: f64) -> usize {
    let s = singular_values(m);
    let cut = tol * (1.0 + s.first().copied().unwrap_or(0.0));
    s.iter().filter(|&&x| x > cut).count()
}

/// Top right-singular vector of `m` (unit length).
pub fn top_right_singular_vector(m: &ComplexMatrix) -> Vec<C64> {
    let dec = svd(m);
    if dec.singular_values.is_empty() {
        let mut v = vec![ZERO; m.cols()];
        if let Some(first) = v.first_mut() {
            *first = C64::new(1.0, 0.0);
        }
        return v;
    }
    (0..m.cols()).map(|c| dec.v_adjoint.get(0, c).conj()).collect()
}
