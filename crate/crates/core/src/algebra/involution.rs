//! Involutions and symmetry automorphisms acting on families of hom-spaces.
//!
//! Both act on a matrix `x ∈ Hom(A, B)` (a `d_B × d_A` matrix) together with
//! its object indices, so the same types serve a one-object algebra
//! (`A = B = 0`) and a category.

use crate::error::{Error, Result};
use crate::krein::KreinSpaceSpec;
use crate::matrix::spectral::{herm_eig_unchecked, norm};
use crate::matrix::{hermitian_residual, ComplexMatrix, SubspaceBasis, C64};

/// Conjugate-linear, anti-multiplicative involution `x ↦ x*`,
/// sending `Hom(A, B)` to `Hom(B, A)`.
#[derive(Debug, Clone, PartialEq)]
pub enum Involution {
    /// Hilbert adjoint `x†`.
    Adjoint,
    /// Kreĭn adjoint `G_A⁻¹ x† G_B`, one Gram form per object.
    Krein(Vec<KreinSpaceSpec>),
    /// `x ↦ α(base(x))`.
    Twisted { base: Box<Involution>, alpha: Box<Symmetry> },
    /// Object `a` of this family is object `map[a]` of `inner`.
    Reindexed { map: Vec<usize>, inner: Box<Involution> },
    /// One-object block matrices over a family with object dims `dims`;
    /// block `(i, j)` lies in `Hom(j, i)`.
    Blockwise { dims: Vec<usize>, inner: Box<Involution> },
}

/// Automorphism `α` acting as the identity on objects.
#[derive(Debug, Clone, PartialEq)]
pub enum Symmetry {
    Identity,
    /// `α(x) = S_B x S_A⁻¹`; `inverse[a]` caches `S_a⁻¹`.
    Conjugation { by: Vec<ComplexMatrix>, inverse: Vec<ComplexMatrix> },
    /// Explicit linear maps, one per listed hom-space. Hom-spaces not listed
    /// are mapped identically.
    Linear(Vec<LinearPiece>),
    Reindexed { map: Vec<usize>, inner: Box<Symmetry> },
    Blockwise { dims: Vec<usize>, inner: Box<Symmetry> },
}

/// `α` on `Hom(src, dst)`: the basis element `basis[k]` goes to `images[k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearPiece {
    pub src: usize,
    pub dst: usize,
    pub basis: SubspaceBasis,
    pub images: Vec<ComplexMatrix>,
}

impl LinearPiece {
    /// Builds the map sending each `domain[k]` to `images[k]`. The domain
    /// elements must be linearly independent.
    pub fn new(src: usize, dst: usize, domain: &[ComplexMatrix], images: &[ComplexMatrix], tol: f64) -> Result<Self> {
        if domain.len() != images.len() {
            return Err(Error::invalid(format!(
                "linear symmetry: {} basis elements but {} images",
                domain.len(),
                images.len()
            )));
        }
        let Some(first) = domain.first() else {
            return Err(Error::invalid("linear symmetry: empty basis"));
        };
        let (rows, cols) = first.shape();
        for (k, (d, i)) in domain.iter().zip(images).enumerate() {
            d.expect_shape(rows, cols, &format!("basis element {k}"))?;
            i.expect_shape(rows, cols, &format!("image {k}"))?;
        }
        let basis = SubspaceBasis::from_spanning(rows, cols, domain, tol)?;
        if basis.dim() != domain.len() {
            return Err(Error::invalid("linear symmetry: basis elements are linearly dependent"));
        }
        // coordinates C[k][j] = ⟨q_k, d_j⟩, so q = d C⁻¹
        let m = domain.len();
        let c = ComplexMatrix::from_fn(m, m, |k, j| basis.elements()[k].inner(&domain[j]));
        let c_inv = c.inverse()?;
        let orth_images = (0..m)
            .map(|k| {
                let mut out = ComplexMatrix::zeros(rows, cols);
                for (j, img) in images.iter().enumerate() {
                    out.axpy(c_inv.get(j, k), img);
                }
                out
            })
            .collect();
        Ok(LinearPiece { src, dst, basis, images: orth_images })
    }

    fn apply(&self, x: &ComplexMatrix) -> ComplexMatrix {
        let coords = self.basis.coordinates(x);
        let mut out = ComplexMatrix::zeros(self.basis.rows(), self.basis.cols());
        for (c, img) in coords.iter().zip(&self.images) {
            out.axpy(*c, img);
        }
        out
    }
}

fn inner_dims(map: &[usize], dims: &[usize]) -> Vec<usize> {
    let n = map.iter().copied().max().map_or(0, |m| m + 1);
    let mut out = vec![0; n];
    for (a, &m) in map.iter().enumerate() {
        out[m] = dims[a];
    }
    out
}

fn offsets(dims: &[usize]) -> Vec<usize> {
    let mut acc = 0;
    dims.iter()
        .map(|d| {
            let o = acc;
            acc += d;
            o
        })
        .collect()
}

/// Applies `f(block, i, j)` to every block `(i, j)` of `x` and writes the
/// result at block `(j, i)` when `transpose`, else at `(i, j)`.
fn blockwise(
    x: &ComplexMatrix,
    dims: &[usize],
    transpose: bool,
    f: impl Fn(&ComplexMatrix, usize, usize) -> ComplexMatrix,
) -> ComplexMatrix {
    let off = offsets(dims);
    let mut out = ComplexMatrix::zeros(x.cols(), x.rows());
    for (i, &di) in dims.iter().enumerate() {
        for (j, &dj) in dims.iter().enumerate() {
            let block = x.block(off[i], off[j], di, dj);
            // block (i, j) is a map from object j to object i
            let y = f(&block, j, i);
            if transpose {
                out.set_block(off[j], off[i], &y);
            } else {
                out.set_block(off[i], off[j], &y);
            }
        }
    }
    out
}

impl Involution {
    /// `x*` for `x ∈ Hom(src, dst)`.
    pub fn apply(&self, x: &ComplexMatrix, src: usize, dst: usize) -> ComplexMatrix {
        match self {
            Involution::Adjoint => x.adjoint(),
            Involution::Krein(spaces) => {
                &(spaces[src].gram_inverse() * &x.adjoint()) * spaces[dst].gram()
            }
            Involution::Twisted { base, alpha } => alpha.apply(&base.apply(x, src, dst), dst, src),
            Involution::Reindexed { map, inner } => inner.apply(x, map[src], map[dst]),
            Involution::Blockwise { dims, inner } => blockwise(x, dims, true, |b, s, d| inner.apply(b, s, d)),
        }
    }

    /// `x ↦ α(x*)`. Twisting twice by the same symmetry gives back the
    /// original involution.
    pub fn twisted(&self, alpha: &Symmetry) -> Involution {
        if *alpha == Symmetry::Identity {
            return self.clone();
        }
        if let Involution::Twisted { base, alpha: a } = self {
            if **a == *alpha {
                return (**base).clone();
            }
        }
        Involution::Twisted { base: Box::new(self.clone()), alpha: Box::new(alpha.clone()) }
    }

    /// Forms `F_A` with `x* = F_A⁻¹ x† F_B`, when the involution has that shape.
    pub fn forms(&self, dims: &[usize]) -> Option<Vec<ComplexMatrix>> {
        match self {
            Involution::Adjoint => Some(dims.iter().map(|&d| ComplexMatrix::identity(d)).collect()),
            Involution::Krein(spaces) => {
                if spaces.len() < dims.len() || spaces.iter().zip(dims).any(|(s, &d)| s.dim() != d) {
                    return None;
                }
                Some(spaces[..dims.len()].iter().map(|s| s.gram().clone()).collect())
            }
            Involution::Twisted { base, alpha } => {
                // α(F_A⁻¹ x† F_B) = S_A F_A⁻¹ x† F_B S_B⁻¹, so F'_A = F_A S_A⁻¹
                let f = base.forms(dims)?;
                let s = alpha.conjugators(dims)?;
                Some(f.iter().zip(&s).map(|(f, (_, s_inv))| f * s_inv).collect())
            }
            Involution::Reindexed { map, inner } => {
                let f = inner.forms(&inner_dims(map, dims))?;
                Some(map.iter().map(|&m| f[m].clone()).collect())
            }
            Involution::Blockwise { dims: inner_d, inner } => {
                let f = inner.forms(inner_d)?;
                let refs: Vec<&ComplexMatrix> = f.iter().collect();
                Some(vec![ComplexMatrix::block_diag(&refs)])
            }
        }
    }

    /// Per-object Hilbert metric in which this involution becomes the
    /// Hilbert adjoint, when one exists; identity metric otherwise.
    pub fn metric(&self, dims: &[usize], tol: f64) -> Metric {
        let Some(forms) = self.forms(dims) else {
            return Metric::euclidean(dims);
        };
        let mut roots = Vec::with_capacity(forms.len());
        for f in &forms {
            let scale = norm(f);
            if hermitian_residual(f) > tol * (1.0 + scale) {
                return Metric::euclidean(dims);
            }
            let eig = herm_eig_unchecked(f);
            let bound = tol * (1.0 + scale);
            let sign = if eig.min() > bound {
                1.0
            } else if eig.max() < -bound {
                -1.0
            } else {
                return Metric::euclidean(dims);
            };
            roots.push((eig.map(|l| (sign * l).sqrt()), eig.map(|l| 1.0 / (sign * l).sqrt())));
        }
        Metric { roots: Some(roots), dims: dims.to_vec() }
    }
}

impl Symmetry {
    /// `α = Ad_S` for a family of invertible matrices.
    pub fn conjugation(by: Vec<ComplexMatrix>) -> Result<Self> {
        let mut inverse = Vec::with_capacity(by.len());
        for (k, s) in by.iter().enumerate() {
            s.expect_square(&format!("conjugating matrix {k}"))?;
            inverse.push(s.inverse()?);
        }
        Ok(Symmetry::Conjugation { by, inverse })
    }

    /// `α(x)` for `x ∈ Hom(src, dst)`.
    pub fn apply(&self, x: &ComplexMatrix, src: usize, dst: usize) -> ComplexMatrix {
        match self {
            Symmetry::Identity => x.clone(),
            Symmetry::Conjugation { by, inverse } => &(&by[dst] * x) * &inverse[src],
            Symmetry::Linear(pieces) => match pieces.iter().find(|p| p.src == src && p.dst == dst) {
                Some(p) => p.apply(x),
                None => x.clone(),
            },
            Symmetry::Reindexed { map, inner } => inner.apply(x, map[src], map[dst]),
            Symmetry::Blockwise { dims, inner } => blockwise(x, dims, false, |b, s, d| inner.apply(b, s, d)),
        }
    }

    /// `(S_A, S_A⁻¹)` per object when `α` is a conjugation.
    pub fn conjugators(&self, dims: &[usize]) -> Option<Vec<(ComplexMatrix, ComplexMatrix)>> {
        match self {
            Symmetry::Identity => {
                Some(dims.iter().map(|&d| (ComplexMatrix::identity(d), ComplexMatrix::identity(d))).collect())
            }
            Symmetry::Conjugation { by, inverse } => {
                if by.len() < dims.len() || by.iter().zip(dims).any(|(s, &d)| s.rows() != d) {
                    return None;
                }
                Some(by.iter().zip(inverse).take(dims.len()).map(|(s, i)| (s.clone(), i.clone())).collect())
            }
            Symmetry::Linear(_) => None,
            Symmetry::Reindexed { map, inner } => {
                let c = inner.conjugators(&inner_dims(map, dims))?;
                Some(map.iter().map(|&m| c[m].clone()).collect())
            }
            Symmetry::Blockwise { dims: inner_d, inner } => {
                let c = inner.conjugators(inner_d)?;
                let s: Vec<&ComplexMatrix> = c.iter().map(|p| &p.0).collect();
                let si: Vec<&ComplexMatrix> = c.iter().map(|p| &p.1).collect();
                Some(vec![(ComplexMatrix::block_diag(&s), ComplexMatrix::block_diag(&si))])
            }
        }
    }

    /// `Ad(±I)`: `+1` on objects with `signs[a] = true`, `−1` otherwise.
    pub fn grading(dims: &[usize], signs: &[bool]) -> Self {
        let by: Vec<_> = dims
            .iter()
            .zip(signs)
            .map(|(&d, &s)| ComplexMatrix::identity(d).scale_re(if s { 1.0 } else { -1.0 }))
            .collect();
        Symmetry::Conjugation { inverse: by.clone(), by }
    }
}

/// Per-object positive square roots `M_A` of the effective forms; the norm
/// of `x ∈ Hom(A, B)` is `‖M_B x M_A⁻¹‖`.
#[derive(Debug, Clone)]
pub struct Metric {
    roots: Option<Vec<(ComplexMatrix, ComplexMatrix)>>,
    dims: Vec<usize>,
}

impl Metric {
    pub fn euclidean(dims: &[usize]) -> Self {
        Metric { roots: None, dims: dims.to_vec() }
    }

    pub fn is_euclidean(&self) -> bool {
        self.roots.is_none()
    }

    /// `M_B x M_A⁻¹`.
    pub fn to_hilbert(&self, x: &ComplexMatrix, src: usize, dst: usize) -> ComplexMatrix {
        match &self.roots {
            None => x.clone(),
            Some(r) => &(&r[dst].0 * x) * &r[src].1,
        }
    }

    /// `M_B⁻¹ y M_A`, inverse of [`Metric::to_hilbert`].
    pub fn from_hilbert(&self, y: &ComplexMatrix, src: usize, dst: usize) -> ComplexMatrix {
        match &self.roots {
            None => y.clone(),
            Some(r) => &(&r[dst].1 * y) * &r[src].0,
        }
    }

    /// `M_A⁻¹ v`: turns a Hilbert-picture vector into an ambient one.
    pub fn vector_from_hilbert(&self, v: &[C64], object: usize) -> Vec<C64> {
        match &self.roots {
            None => v.to_vec(),
            Some(r) => r[object].1.apply(v),
        }
    }

    /// `M_A² ` (the positive form), identity when Euclidean.
    pub fn positive_form(&self, object: usize) -> ComplexMatrix {
        match &self.roots {
            None => ComplexMatrix::identity(self.dims[object]),
            Some(r) => &r[object].0 * &r[object].0,
        }
    }

    pub fn norm(&self, x: &ComplexMatrix, src: usize, dst: usize) -> f64 {
        norm(&self.to_hilbert(x, src, dst))
    }
}
