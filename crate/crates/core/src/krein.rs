//! Finite-dimensional Kreĭn spaces.
//!
//! A Kreĭn space here is `ℂⁿ` with the indefinite inner product
//! `⟨x, y⟩ = x† G y` for a Hermitian invertible Gram form `G`. Fundamental
//! decompositions are derived from `G`, never stored with it: a space admits
//! many fundamental symmetries and [`canonical_decomposition`] is only one
//! computed choice.

use crate::error::{Error, Result};
use crate::matrix::spectral::{herm_eig_unchecked, norm};
use crate::matrix::{check_vector_len, dot, herm_eig, random, ComplexMatrix, C64};
use crate::settings::{Settings, DEFAULT_TOL};

/// Hermitian invertible Gram form.
#[derive(Debug, Clone, PartialEq)]
pub struct KreinSpaceSpec {
    gram: ComplexMatrix,
    gram_inverse: ComplexMatrix,
}

impl KreinSpaceSpec {
    /// Validates `gram`: Hermitian within `tol (1 + ‖G‖)` and every eigenvalue
    /// at least `tol (1 + ‖G‖)` away from zero. Degenerate forms are rejected,
    /// not regularized.
    pub fn new(gram: ComplexMatrix, tol: f64) -> Result<Self> {
        gram.expect_square("Gram form")?;
        let eig = herm_eig(&gram, tol)?;
        let bound = tol * (1.0 + norm(&gram));
        if let Some(&closest) = eig.eigenvalues.iter().min_by(|a, b| a.abs().total_cmp(&b.abs())) {
            if closest.abs() < bound {
                return Err(Error::Degenerate { eigenvalue: closest, bound });
            }
        }
        let gram_inverse = gram.inverse()?;
        Ok(KreinSpaceSpec { gram, gram_inverse })
    }

    /// `ℂⁿ` with the positive definite form `I`.
    pub fn hilbert(dim: usize) -> Self {
        KreinSpaceSpec { gram: ComplexMatrix::identity(dim), gram_inverse: ComplexMatrix::identity(dim) }
    }

    /// `ℂ^{p,q}`: Gram form `diag(1,…,1,−1,…,−1)`.
    pub fn minkowski(plus: usize, minus: usize) -> Self {
        let signs: Vec<f64> = std::iter::repeat_n(1.0, plus).chain(std::iter::repeat_n(-1.0, minus)).collect();
        let g = ComplexMatrix::diag_real(&signs);
        KreinSpaceSpec { gram: g.clone(), gram_inverse: g }
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &ComplexMatrix {
        &self.gram
    }

    pub fn gram_inverse(&self) -> &ComplexMatrix {
        &self.gram_inverse
    }

    /// `⟨x, y⟩ = x† G y`, linear in the second argument.
    pub fn inner(&self, x: &[C64], y: &[C64]) -> C64 {
        dot(x, &self.gram.apply(y))
    }
}

/// `K = K₊ ⊕ K₋` together with its fundamental symmetry `J = P₊ − P₋`.
#[derive(Debug, Clone)]
pub struct FundamentalDecomposition {
    pub j: ComplexMatrix,
    pub p_plus: ComplexMatrix,
    pub p_minus: ComplexMatrix,
    /// `(dim K₊, dim K₋)`.
    pub signature: (usize, usize),
}

/// Residuals of the defining identities of a fundamental decomposition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecompositionResiduals {
    /// `‖J² − I‖`
    pub involution: f64,
    /// `‖GJ − (GJ)†‖`
    pub hermitian: f64,
    /// smallest eigenvalue of `GJ` (must be > 0)
    pub min_positive: f64,
    /// `‖P₊† G P₋‖`
    pub orthogonality: f64,
    /// `‖P₊ + P₋ − I‖ + ‖P₊² − P₊‖ + ‖P₋² − P₋‖ + ‖P₊P₋‖ + ‖J − (P₊ − P₋)‖`
    pub projections: f64,
}

impl FundamentalDecomposition {
    pub fn residuals(&self, space: &KreinSpaceSpec) -> DecompositionResiduals {
        let n = space.dim();
        let id = ComplexMatrix::identity(n);
        let (pp, pm) = (&self.p_plus, &self.p_minus);
        let gj = space.gram() * &self.j;
        let projections = norm(&(&(pp + pm) - &id))
            + norm(&(&(pp * pp) - pp))
            + norm(&(&(pm * pm) - pm))
            + norm(&(pp * pm))
            + norm(&(&self.j - &(pp - pm)));
        DecompositionResiduals {
            involution: norm(&(&(&self.j * &self.j) - &id)),
            hermitian: norm(&(&gj - &gj.adjoint())),
            min_positive: herm_eig_unchecked(&gj).min(),
            orthogonality: norm(&(&(&pp.adjoint() * space.gram()) * pm)),
            projections,
        }
    }
}

/// Spectral sign decomposition of the Gram form: `K₊` is spanned by the
/// eigenvectors with positive eigenvalues, `K₋` by the negative ones.
pub fn canonical_decomposition(space: &KreinSpaceSpec, tol: f64) -> Result<FundamentalDecomposition> {
    // re-validate: the caller may pass a tighter tolerance than construction used
    let g = space.gram();
    let eig = herm_eig(g, tol)?;
    let bound = tol * (1.0 + norm(g));
    let n = space.dim();
    let mut p_plus = ComplexMatrix::zeros(n, n);
    let mut p_minus = ComplexMatrix::zeros(n, n);
    let mut signature = (0, 0);
    for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
        if lambda.abs() < bound {
            return Err(Error::Degenerate { eigenvalue: lambda, bound });
        }
        let v = ComplexMatrix::column(&eig.vector(k));
        let proj = &v * &v.adjoint();
        if lambda > 0.0 {
            p_plus = &p_plus + &proj;
            signature.0 += 1;
        } else {
            p_minus = &p_minus + &proj;
            signature.1 += 1;
        }
    }
    let j = &p_plus - &p_minus;
    Ok(FundamentalDecomposition { j, p_plus, p_minus, signature })
}

/// Outcome of testing a candidate fundamental symmetry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetryCheck {
    /// `‖J² − I‖`
    pub involution: f64,
    /// `‖GJ − (GJ)†‖`
    pub hermitian: f64,
    /// smallest eigenvalue of `GJ`
    pub min_positive: f64,
    /// `‖G⁻¹J†G − J‖`
    pub self_adjoint: f64,
    pub passed: bool,
}

/// Detailed membership test for fundamental symmetries of `space`.
pub fn symmetry_check(space: &KreinSpaceSpec, j: &ComplexMatrix, tol: f64) -> Result<SymmetryCheck> {
    let n = space.dim();
    j.expect_shape(n, n, "candidate symmetry")?;
    let id = ComplexMatrix::identity(n);
    let gj = space.gram() * j;
    let involution = norm(&(&(j * j) - &id));
    let hermitian = norm(&(&gj - &gj.adjoint()));
    let min_positive = herm_eig_unchecked(&gj).min();
    let self_adjoint = norm(&(&(space.gram_inverse() * &(&j.adjoint() * space.gram())) - j));
    let jn = norm(j);
    let gjn = norm(&gj);
    let passed = involution <= tol * (1.0 + jn * jn)
        && hermitian <= tol * (1.0 + gjn)
        && min_positive > tol * (1.0 + gjn)
        && self_adjoint <= tol * (1.0 + jn);
    Ok(SymmetryCheck { involution, hermitian, min_positive, self_adjoint, passed })
}

/// True iff `J² = I`, `GJ` is Hermitian positive definite and `J` is
/// self-adjoint for the indefinite form, all within `tol`.
pub fn all_symmetry_check(space: &KreinSpaceSpec, j: &ComplexMatrix, tol: f64) -> Result<bool> {
    Ok(symmetry_check(space, j, tol)?.passed)
}

/// Kreĭn adjoint `T^# = G_dom⁻¹ T† G_cod` of `T: domain → codomain`.
pub fn krein_adjoint(t: &ComplexMatrix, domain: &KreinSpaceSpec, codomain: &KreinSpaceSpec) -> Result<ComplexMatrix> {
    t.expect_shape(codomain.dim(), domain.dim(), "operator")?;
    Ok(&(domain.gram_inverse() * &t.adjoint()) * codomain.gram())
}

/// Norm of `x` in the Hilbert space `|K|_J`: `sqrt(x† G J x)`.
pub fn j_norm(x: &[C64], decomp: &FundamentalDecomposition, space: &KreinSpaceSpec) -> Result<f64> {
    check_vector_len(x, space.dim())?;
    if !all_symmetry_check(space, &decomp.j, DEFAULT_TOL)? {
        return Err(Error::invalid("decomposition is not a fundamental decomposition of this space"));
    }
    let gj = space.gram() * &decomp.j;
    let q = dot(x, &gj.apply(x)).re;
    Ok(q.max(0.0).sqrt())
}

/// Certified comparison constants between two `J`-norms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormEquivalence {
    /// `c` in `c ‖x‖_{J2} ≤ ‖x‖_{J1}`
    pub lower: f64,
    /// `C` in `‖x‖_{J1} ≤ C ‖x‖_{J2}`
    pub upper: f64,
    pub samples: usize,
    /// sampled vectors that broke either bound beyond `tol`
    pub violations: usize,
}

/// Extreme generalized eigenvalues of the pair `(G J1, G J2)` give the
/// sharp constants; `settings.samples` random vectors confirm them.
pub fn norm_equivalence(
    space: &KreinSpaceSpec,
    j1: &ComplexMatrix,
    j2: &ComplexMatrix,
    settings: &Settings,
) -> Result<NormEquivalence> {
    let tol = settings.tol;
    for (name, j) in [("first", j1), ("second", j2)] {
        if !all_symmetry_check(space, j, tol)? {
            return Err(Error::invalid(format!("{name} candidate is not a fundamental symmetry")));
        }
    }
    let p1 = space.gram() * j1;
    let p2 = space.gram() * j2;
    let root2 = herm_eig_unchecked(&p2);
    let inv_sqrt = root2.map(|l| 1.0 / l.sqrt());
    let pencil = &(&inv_sqrt * &p1) * &inv_sqrt;
    let eig = herm_eig_unchecked(&pencil);
    let lower = eig.min().max(0.0).sqrt();
    let upper = eig.max().sqrt();

    let mut rng = settings.rng();
    let mut violations = 0;
    for _ in 0..settings.samples {
        let x = random::random_vector(space.dim(), &mut rng);
        let n1 = dot(&x, &p1.apply(&x)).re.max(0.0).sqrt();
        let n2 = dot(&x, &p2.apply(&x)).re.max(0.0).sqrt();
        if lower * n2 > n1 * (1.0 + tol) || n1 > upper * n2 * (1.0 + tol) {
            violations += 1;
        }
    }
    Ok(NormEquivalence { lower, upper, samples: settings.samples, violations })
}
