//! Linear subspaces of matrices, orthonormal under `⟨M, N⟩ = trace(M† N)`.

use rand::Rng;

use super::dense::{ComplexMatrix, C64};
use super::random::complex_gaussian;
use super::spectral::svd;
use crate::error::{Error, Result};

/// A subspace of `rows x cols` matrices with a trace-orthonormal basis.
#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceBasis {
    rows: usize,
    cols: usize,
    basis: Vec<ComplexMatrix>,
}

impl SubspaceBasis {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SubspaceBasis { rows, cols, basis: Vec::new() }
    }

    /// All `rows x cols` matrices, spanned by matrix units in row-major order.
    pub fn full(rows: usize, cols: usize) -> Self {
        let basis = (0..rows)
            .flat_map(|i| (0..cols).map(move |j| ComplexMatrix::unit(rows, cols, i, j)))
            .collect();
        SubspaceBasis { rows, cols, basis }
    }

    /// Orthonormal basis of `span(vectors)`.
    ///
    /// The rank is decided by the singular values of the stacked vectors:
    /// directions with `σ ≤ tol (1 + σ_max)` are dropped.
    pub fn from_spanning(rows: usize, cols: usize, vectors: &[ComplexMatrix], tol: f64) -> Result<Self> {
        for (k, v) in vectors.iter().enumerate() {
            v.expect_shape(rows, cols, &format!("spanning element {k}"))?;
        }
        let n = rows * cols;
        if vectors.is_empty() || n == 0 {
            return Ok(SubspaceBasis::zero(rows, cols));
        }
        let stacked = ComplexMatrix::from_fn(n, vectors.len(), |r, c| vectors[c].get(r / cols, r % cols));
        let dec = svd(&stacked);
        let cut = tol * (1.0 + dec.singular_values.first().copied().unwrap_or(0.0));
        let basis = dec
            .singular_values
            .iter()
            .enumerate()
            .filter(|(_, &s)| s > cut)
            .map(|(k, _)| ComplexMatrix::from_fn(rows, cols, |i, j| dec.u.get(i * cols + j, k)))
            .collect();
        Ok(SubspaceBasis { rows, cols, basis })
    }

    /// Wraps a list already known to be trace-orthonormal.
    pub(crate) fn from_orthonormal(rows: usize, cols: usize, basis: Vec<ComplexMatrix>) -> Self {
        debug_assert!(basis.iter().all(|b| b.shape() == (rows, cols)));
        SubspaceBasis { rows, cols, basis }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn elements(&self) -> &[ComplexMatrix] {
        &self.basis
    }

    /// `⟨b_k, x⟩` for every basis element.
    pub fn coordinates(&self, x: &ComplexMatrix) -> Vec<C64> {
        self.basis.iter().map(|b| b.inner(x)).collect()
    }

    pub fn combine(&self, coords: &[C64]) -> ComplexMatrix {
        assert_eq!(coords.len(), self.dim(), "coordinate vector length");
        let mut out = ComplexMatrix::zeros(self.rows, self.cols);
        for (c, b) in coords.iter().zip(&self.basis) {
            out.axpy(*c, b);
        }
        out
    }

    /// Orthogonal projection onto the subspace.
    pub fn project(&self, x: &ComplexMatrix) -> ComplexMatrix {
        self.combine(&self.coordinates(x))
    }

    /// Frobenius distance from `x` to the subspace.
    pub fn distance(&self, x: &ComplexMatrix) -> f64 {
        x.distance(&self.project(x))
    }

    /// Membership up to `tol (1 + ‖x‖_F)`.
    pub fn contains(&self, x: &ComplexMatrix, tol: f64) -> bool {
        x.shape() == (self.rows, self.cols) && self.distance(x) <= tol * (1.0 + x.frobenius())
    }

    /// Largest deviation of the basis Gram matrix from the identity.
    pub fn orthonormality_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, a) in self.basis.iter().enumerate() {
            for (j, b) in self.basis.iter().enumerate() {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((a.inner(b) - C64::new(target, 0.0)).norm());
            }
        }
        worst
    }

    /// Random element with independent complex Gaussian coordinates.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> ComplexMatrix {
        let coords: Vec<C64> = (0..self.dim()).map(|_| complex_gaussian(rng)).collect();
        self.combine(&coords)
    }

    /// Basis of the image `{f(x)}` of a linear map.
    pub fn map(&self, rows: usize, cols: usize, tol: f64, f: impl Fn(&ComplexMatrix) -> ComplexMatrix) -> Result<Self> {
        let images: Vec<_> = self.basis.iter().map(f).collect();
        SubspaceBasis::from_spanning(rows, cols, &images, tol)
    }
}

/// Incremental Gram–Schmidt used while saturating.
///
/// A candidate is accepted when its distance to the current span exceeds
/// `tol (1 + ‖x‖_F)`. With an orthonormal basis that distance is the singular
/// value the candidate would add to the stacked basis.
#[derive(Debug, Clone)]
pub(crate) struct IncrementalBasis {
    rows: usize,
    cols: usize,
    tol: f64,
    basis: Vec<ComplexMatrix>,
}

impl IncrementalBasis {
    pub(crate) fn new(rows: usize, cols: usize, tol: f64) -> Self {
        IncrementalBasis { rows, cols, tol, basis: Vec::new() }
    }

    fn residual(&self, x: &ComplexMatrix) -> ComplexMatrix {
        let mut r = x.clone();
        // two passes of modified Gram–Schmidt
        for _ in 0..2 {
            for b in &self.basis {
                let c = b.inner(&r);
                r.axpy(-c, b);
            }
        }
        r
    }

    /// Adds `x` if it is independent; returns the new orthonormal element.
    pub(crate) fn push(&mut self, x: &ComplexMatrix) -> Option<ComplexMatrix> {
        debug_assert_eq!(x.shape(), (self.rows, self.cols));
        if self.basis.len() >= self.rows * self.cols {
            return None;
        }
        let scale = x.frobenius();
        let r = self.residual(x);
        let rn = r.frobenius();
        if rn <= self.tol * (1.0 + scale) {
            return None;
        }
        let e = r.scale_re(1.0 / rn);
        self.basis.push(e.clone());
        Some(e)
    }

    pub(crate) fn len(&self) -> usize {
        self.basis.len()
    }

    pub(crate) fn get(&self, k: usize) -> &ComplexMatrix {
        &self.basis[k]
    }

    pub(crate) fn finish(self) -> Result<SubspaceBasis> {
        SubspaceBasis::from_spanning(self.rows, self.cols, &self.basis, self.tol)
    }
}

/// Which operations the saturated subspace must be closed under.
pub struct ClosureRule<'a> {
    pub multiply: bool,
    pub unit: bool,
    pub involution: Option<&'a dyn Fn(&ComplexMatrix) -> ComplexMatrix>,
}

impl<'a> ClosureRule<'a> {
    /// Unital, product-closed and closed under `involution`.
    pub fn star_algebra(involution: &'a dyn Fn(&ComplexMatrix) -> ComplexMatrix) -> Self {
        ClosureRule { multiply: true, unit: true, involution: Some(involution) }
    }

    /// Unital and product-closed, no involution.
    pub fn unital_algebra() -> Self {
        ClosureRule { multiply: true, unit: true, involution: None }
    }
}

/// The conjugate-transpose involution, for use in a [`ClosureRule`].
pub fn hilbert_adjoint(x: &ComplexMatrix) -> ComplexMatrix {
    x.adjoint()
}

/// Smallest subspace containing `seed` that is closed under `rule`.
///
/// Every element of the generated algebra is a linear combination of words
/// in the generators (and their involutes), so it suffices to left-multiply
/// each new basis element by the generators until nothing new appears.
pub fn saturate_span(shape: (usize, usize), seed: &[ComplexMatrix], rule: &ClosureRule<'_>, tol: f64) -> Result<SubspaceBasis> {
    let (rows, cols) = shape;
    for (k, s) in seed.iter().enumerate() {
        s.expect_shape(rows, cols, &format!("seed element {k}"))?;
    }
    if (rule.multiply || rule.unit || rule.involution.is_some()) && rows != cols {
        return Err(Error::shape(format!(
            "closure under products, unit or involution needs square matrices, got {rows}x{cols}"
        )));
    }

    let mut generators: Vec<ComplexMatrix> = seed.to_vec();
    if let Some(inv) = rule.involution {
        for s in seed {
            let t = inv(s);
            t.expect_shape(rows, cols, "involution image")?;
            generators.push(t);
        }
    }

    let mut span = IncrementalBasis::new(rows, cols, tol);
    let mut queue: Vec<ComplexMatrix> = Vec::new();
    if rule.unit {
        queue.extend(span.push(&ComplexMatrix::identity(rows)));
    }
    for g in &generators {
        queue.extend(span.push(g));
    }

    loop {
        while let Some(w) = queue.pop() {
            if rule.multiply {
                for g in &generators {
                    queue.extend(span.push(&(g * &w)));
                }
            }
        }
        // involution closure of the finished span (words are closed already when
        // the involution reverses products, this catches everything else)
        if let Some(inv) = rule.involution {
            let images: Vec<_> = (0..span.len()).map(|k| inv(span.get(k))).collect();
            for t in images {
                queue.extend(span.push(&t));
            }
        }
        if queue.is_empty() {
            break;
        }
    }
    span.finish()
}

/// Basis of the kernel of a linear map given by its matrix in some coordinates,
/// returned as coordinate vectors. Decided by singular values.
#[cfg(test)]
pub(crate) fn kernel_vectors(m: &ComplexMatrix, tol: f64) -> Vec<Vec<C64>> {
    let n = m.cols();
    if n == 0 {
        return Vec::new();
    }
    // pad to square so the SVD returns a full right basis
    let padded = if m.rows() < n {
        let mut p = ComplexMatrix::zeros(n, n);
        p.set_block(0, 0, m);
        p
    } else {
        m.clone()
    };
    let dec = svd(&padded);
    let cut = tol * (1.0 + dec.singular_values.first().copied().unwrap_or(0.0));
    (0..n)
        .filter(|&k| dec.singular_values.get(k).copied().unwrap_or(0.0) <= cut)
        .map(|k| (0..n).map(|c| dec.v_adjoint.get(k, c).conj()).collect())
        .collect()
}
