//! Unital *-closed algebras of square matrices.

use std::slice;

use crate::axioms::{self, HomFamily, CSTAR_NAMES, SYMMETRY_NAMES};
use crate::error::{Error, Result};
use crate::matrix::{saturate_span, ClosureRule, ComplexMatrix, SubspaceBasis};
use crate::report::{Report, Witness};
use crate::settings::Settings;

use super::involution::{Involution, Metric, Symmetry};

#[derive(Debug, Clone, PartialEq)]
pub struct MatrixStarAlgebra {
    dim: usize,
    dims: [usize; 1],
    basis: SubspaceBasis,
    involution: Involution,
}

impl MatrixStarAlgebra {
    /// Smallest unital algebra containing `generators` and closed under
    /// `involution`.
    pub fn from_generators(dim: usize, generators: &[ComplexMatrix], involution: Involution, tol: f64) -> Result<Self> {
        let inv = |x: &ComplexMatrix| involution.apply(x, 0, 0);
        let basis = saturate_span((dim, dim), generators, &ClosureRule::star_algebra(&inv), tol)?;
        Ok(MatrixStarAlgebra { dim, dims: [dim], basis, involution })
    }

    /// All `dim × dim` matrices.
    pub fn full(dim: usize, involution: Involution) -> Self {
        MatrixStarAlgebra { dim, dims: [dim], basis: SubspaceBasis::full(dim, dim), involution }
    }

    /// Wraps a given basis after checking the unit and both closures.
    pub fn from_basis(basis: SubspaceBasis, involution: Involution, tol: f64) -> Result<Self> {
        if basis.rows() != basis.cols() {
            return Err(Error::shape("algebra basis must consist of square matrices"));
        }
        let dim = basis.rows();
        let alg = MatrixStarAlgebra { dim, dims: [dim], basis, involution };
        let mut report = Report::new();
        axioms::structure(&mut report, alg.family(), &alg.involution, &Settings::default().with_tol(tol));
        if !report.passed() {
            return Err(Error::invalid(format!(
                "basis does not span a unital *-algebra ({})",
                report.failures().join(", ")
            )));
        }
        Ok(alg)
    }

    pub(crate) fn from_parts(basis: SubspaceBasis, involution: Involution) -> Self {
        let dim = basis.rows();
        MatrixStarAlgebra { dim, dims: [dim], basis, involution }
    }

    /// Side length of the ambient matrices.
    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    /// Dimension of the algebra as a vector space.
    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn basis(&self) -> &SubspaceBasis {
        &self.basis
    }

    pub fn involution(&self) -> &Involution {
        &self.involution
    }

    pub fn unit(&self) -> ComplexMatrix {
        ComplexMatrix::identity(self.dim)
    }

    pub fn star(&self, x: &ComplexMatrix) -> ComplexMatrix {
        self.involution.apply(x, 0, 0)
    }

    pub fn contains(&self, x: &ComplexMatrix, tol: f64) -> bool {
        self.basis.contains(x, tol)
    }

    /// Norm used for this algebra: the operator norm in the Hilbert metric
    /// of the involution if it has one, else the ambient operator norm.
    pub fn metric(&self, tol: f64) -> Metric {
        self.involution.metric(&self.dims, tol)
    }

    pub(crate) fn family(&self) -> HomFamily<'_> {
        HomFamily { dims: &self.dims, homs: slice::from_ref(&self.basis) }
    }
}

pub fn algebra_from_generators(
    ambient_dim: usize,
    generators: &[ComplexMatrix],
    involution: Involution,
    tol: f64,
) -> Result<MatrixStarAlgebra> {
    MatrixStarAlgebra::from_generators(ambient_dim, generators, involution, tol)
}

/// Checks that `α` is an involutive *-automorphism and that
/// `‖α(x*) x‖ = ‖x‖²` with `α(x*) x` positive, on the basis and on
/// `settings.samples` random elements. Norms come from the twisted
/// involution `x ↦ α(x*)`.
pub fn verify_krein_cstar(algebra: &MatrixStarAlgebra, alpha: &Symmetry, settings: &Settings) -> Report {
    let mut report = Report::new();
    let fam = algebra.family();
    axioms::symmetry(&mut report, fam, &algebra.involution, alpha, settings, &SYMMETRY_NAMES);
    let twisted = algebra.involution.twisted(alpha);
    let metric = twisted.metric(&algebra.dims, settings.tol);
    axioms::cstar(&mut report, fam, &twisted, &metric, settings, &CSTAR_NAMES);
    report
}

fn require_involutive(algebra: &MatrixStarAlgebra, alpha: &Symmetry, tol: f64) -> Result<()> {
    let settings = Settings::default().with_tol(tol);
    for (k, b) in algebra.basis.elements().iter().enumerate() {
        let a = alpha.apply(b, 0, 0);
        if algebra.basis.distance(&a) > settings.bound(a.frobenius()) {
            return Err(Error::invalid(format!("symmetry maps basis element {k} out of the algebra")));
        }
        if alpha.apply(&a, 0, 0).distance(b) > settings.bound(a.frobenius()) {
            return Err(Error::invalid(format!("symmetry is not involutive on basis element {k}")));
        }
    }
    Ok(())
}

/// `A₊ = {x : α(x) = x}` and `A₋ = {x : α(x) = −x}`, spanned by the
/// projections `(x ± α(x))/2` of the basis.
pub fn even_odd_split(algebra: &MatrixStarAlgebra, alpha: &Symmetry, tol: f64) -> Result<(SubspaceBasis, SubspaceBasis)> {
    require_involutive(algebra, alpha, tol)?;
    split_hom(&algebra.basis, alpha, 0, 0, tol)
}

pub(crate) fn split_hom(
    basis: &SubspaceBasis,
    alpha: &Symmetry,
    src: usize,
    dst: usize,
    tol: f64,
) -> Result<(SubspaceBasis, SubspaceBasis)> {
    let (mut even, mut odd) = (Vec::new(), Vec::new());
    for b in basis.elements() {
        let a = alpha.apply(b, src, dst);
        even.push((b + &a).scale_re(0.5));
        odd.push((b - &a).scale_re(0.5));
    }
    let (r, c) = (basis.rows(), basis.cols());
    Ok((SubspaceBasis::from_spanning(r, c, &even, tol)?, SubspaceBasis::from_spanning(r, c, &odd, tol)?))
}

/// Same span with involution `x ↦ α(x*)`. Twisting twice by the same `α`
/// restores the original involution.
pub fn twist_involution(algebra: &MatrixStarAlgebra, alpha: &Symmetry, tol: f64) -> Result<MatrixStarAlgebra> {
    require_involutive(algebra, alpha, tol)?;
    Ok(MatrixStarAlgebra::from_parts(algebra.basis.clone(), algebra.involution.twisted(alpha)))
}

/// The twisted C*-identity `‖α(x*) x‖ = ‖x‖²` for one element, with the
/// witness element returned when it fails. Exposed for diagnostics.
pub fn krein_cstar_residual(algebra: &MatrixStarAlgebra, alpha: &Symmetry, x: &ComplexMatrix, tol: f64) -> (f64, Option<Witness>) {
    let twisted = algebra.involution.twisted(alpha);
    let metric = twisted.metric(&algebra.dims, tol);
    let nx = metric.norm(x, 0, 0);
    let r = (metric.norm(&(&twisted.apply(x, 0, 0) * x), 0, 0) - nx * nx).abs();
    let w = (r > tol * (1.0 + nx * nx)).then(|| Witness::new("element", Some(x.clone()), "C*-identity fails"));
    (r, w)
}
