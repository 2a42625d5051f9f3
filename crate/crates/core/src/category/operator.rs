use crate::algebra::{Involution, MatrixStarAlgebra, Metric, Symmetry};
use crate::axioms::{self, CstarNames, HomFamily, SymmetryNames};
use crate::error::{Error, Result};
use crate::matrix::subspace::IncrementalBasis;
use crate::matrix::{ComplexMatrix, SubspaceBasis};
use crate::report::Report;
use crate::settings::Settings;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Object {
    pub label: String,
    pub dim: usize,
}

impl Object {
    pub fn new(label: impl Into<String>, dim: usize) -> Self {
        Object { label: label.into(), dim }
    }
}

/// Finite family of Hilbert dimensions with a hom-space of `d_B × d_A`
/// matrices for every ordered pair `(A, B)`.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorCategory {
    objects: Vec<Object>,
    dims: Vec<usize>,
    homs: Vec<SubspaceBasis>,
    involution: Involution,
}

fn check_objects(objects: &[Object]) -> Result<()> {
    if objects.is_empty() {
        return Err(Error::invalid("a category needs at least one object"));
    }
    if let Some(o) = objects.iter().find(|o| o.dim == 0) {
        return Err(Error::invalid(format!("object {:?} has dimension 0", o.label)));
    }
    Ok(())
}

impl OperatorCategory {
    /// Every hom-space is the full matrix space.
    pub fn full(objects: Vec<Object>, involution: Involution) -> Result<Self> {
        check_objects(&objects)?;
        let dims: Vec<usize> = objects.iter().map(|o| o.dim).collect();
        let homs = dims
            .iter()
            .flat_map(|&s| dims.iter().map(move |&d| SubspaceBasis::full(d, s)))
            .collect();
        Ok(OperatorCategory { objects, dims, homs, involution })
    }

    /// Smallest category containing the identities and the generators
    /// `(src, dst, x)`, closed under composition and the involution.
    pub fn from_generators(
        objects: Vec<Object>,
        generators: &[(usize, usize, ComplexMatrix)],
        involution: Involution,
        tol: f64,
    ) -> Result<Self> {
        check_objects(&objects)?;
        let dims: Vec<usize> = objects.iter().map(|o| o.dim).collect();
        let n = dims.len();
        let mut gens: Vec<(usize, usize, ComplexMatrix)> = Vec::new();
        for (k, (s, d, x)) in generators.iter().enumerate() {
            if *s >= n || *d >= n {
                return Err(Error::invalid(format!("generator {k} refers to a missing object")));
            }
            x.expect_shape(dims[*d], dims[*s], &format!("generator {k} in Hom({s},{d})"))?;
            gens.push((*s, *d, x.clone()));
            gens.push((*d, *s, involution.apply(x, *s, *d)));
        }
        for (a, &d) in dims.iter().enumerate() {
            gens.push((a, a, ComplexMatrix::identity(d)));
        }

        let mut spans: Vec<IncrementalBasis> = (0..n)
            .flat_map(|s| (0..n).map(move |d| (s, d)))
            .map(|(s, d)| IncrementalBasis::new(dims[d], dims[s], tol))
            .collect();
        let mut queue = Vec::new();
        for (s, d, g) in &gens {
            if let Some(e) = spans[s * n + d].push(g) {
                queue.push((*s, *d, e));
            }
        }
        // words in the generators span the category; left-multiplying by
        // generators reaches every word
        while let Some((s, d, w)) = queue.pop() {
            for (gs, gd, g) in &gens {
                if *gs == d {
                    if let Some(e) = spans[s * n + gd].push(&(g * &w)) {
                        queue.push((s, *gd, e));
                    }
                }
            }
        }
        let homs = spans.into_iter().map(|b| b.finish()).collect::<Result<Vec<_>>>()?;
        Ok(OperatorCategory { objects, dims, homs, involution })
    }

    /// Category with the given hom-spaces (indexed `src * n + dst`), checked
    /// for units and closure.
    pub fn from_homs(objects: Vec<Object>, homs: Vec<SubspaceBasis>, involution: Involution, tol: f64) -> Result<Self> {
        check_objects(&objects)?;
        let dims: Vec<usize> = objects.iter().map(|o| o.dim).collect();
        let n = dims.len();
        if homs.len() != n * n {
            return Err(Error::shape(format!("expected {} hom-spaces, got {}", n * n, homs.len())));
        }
        for s in 0..n {
            for d in 0..n {
                let h = &homs[s * n + d];
                if (h.rows(), h.cols()) != (dims[d], dims[s]) {
                    return Err(Error::shape(format!("Hom({s},{d}) must hold {}x{} matrices", dims[d], dims[s])));
                }
            }
        }
        let cat = OperatorCategory { objects, dims, homs, involution };
        let mut report = Report::new();
        axioms::structure(&mut report, cat.family(), &cat.involution, &Settings::default().with_tol(tol));
        if !report.passed() {
            return Err(Error::invalid(format!(
                "hom-spaces do not form a *-category ({})",
                report.failures().join(", ")
            )));
        }
        Ok(cat)
    }

    pub(crate) fn from_parts(objects: Vec<Object>, homs: Vec<SubspaceBasis>, involution: Involution) -> Self {
        let dims = objects.iter().map(|o| o.dim).collect();
        OperatorCategory { objects, dims, homs, involution }
    }

    /// One-object category of an algebra.
    pub fn from_algebra(algebra: &MatrixStarAlgebra) -> Self {
        let d = algebra.ambient_dim();
        OperatorCategory::from_parts(
            vec![Object::new("A", d)],
            vec![algebra.basis().clone()],
            algebra.involution().clone(),
        )
    }

    pub fn objects(&self) -> &[Object] {
        &self.objects
    }

    pub fn n_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// `Hom(src, dst)`, operators from `H_src` to `H_dst`.
    pub fn hom(&self, src: usize, dst: usize) -> &SubspaceBasis {
        &self.homs[src * self.n_objects() + dst]
    }

    pub fn homs(&self) -> &[SubspaceBasis] {
        &self.homs
    }

    pub fn involution(&self) -> &Involution {
        &self.involution
    }

    /// `x*` for `x ∈ Hom(src, dst)`.
    pub fn star(&self, x: &ComplexMatrix, src: usize, dst: usize) -> ComplexMatrix {
        self.involution.apply(x, src, dst)
    }

    pub fn metric(&self, tol: f64) -> Metric {
        self.involution.metric(&self.dims, tol)
    }

    /// The algebra `Hom(A, A)`.
    pub fn diagonal_algebra(&self, object: usize) -> MatrixStarAlgebra {
        MatrixStarAlgebra::from_parts(
            self.hom(object, object).clone(),
            Involution::Reindexed { map: vec![object], inner: Box::new(self.involution.clone()) },
        )
    }

    /// Total dimension of all hom-spaces.
    pub fn total_dim(&self) -> usize {
        self.homs.iter().map(SubspaceBasis::dim).sum()
    }

    pub(crate) fn with_involution(&self, involution: Involution) -> Self {
        OperatorCategory { involution, ..self.clone() }
    }

    pub(crate) fn family(&self) -> HomFamily<'_> {
        HomFamily { dims: &self.dims, homs: &self.homs }
    }
}

/// Structural closure plus `‖1_A‖ = 1`, submultiplicativity, the C*-identity
/// and positivity of `x*x`, on every basis element and on random samples.
pub fn verify_cstar_category(cat: &OperatorCategory, settings: &Settings) -> Report {
    let mut report = Report::new();
    axioms::structure(&mut report, cat.family(), &cat.involution, settings);
    let metric = cat.metric(settings.tol);
    axioms::cstar(&mut report, cat.family(), &cat.involution, &metric, settings, &axioms::CSTAR_NAMES);
    report
}

const KREIN_SYMMETRY: SymmetryNames = SymmetryNames {
    involutive: "axiom_1_involutive",
    preserves: "axiom_2_identity_on_objects",
    unital: "alpha_unital",
    multiplicative: "alpha_multiplicative",
    star: "alpha_star",
};

const KREIN_CSTAR: CstarNames =
    CstarNames { identity: "axiom_3_cstar_identity", positivity: "axiom_4_positivity" };

/// The four Kreĭn C*-category axioms: `α∘α = id`, `α` fixes objects (and so
/// preserves every hom-space), `‖α(x*)x‖ = ‖x‖²`, and `α(x*)x` positive for
/// the twisted involution; plus functoriality of `α`.
pub fn verify_krein_cstar_category(cat: &OperatorCategory, alpha: &Symmetry, settings: &Settings) -> Report {
    let mut report = Report::new();
    axioms::structure(&mut report, cat.family(), &cat.involution, settings);
    axioms::symmetry(&mut report, cat.family(), &cat.involution, alpha, settings, &KREIN_SYMMETRY);
    let twisted = cat.involution.twisted(alpha);
    let metric = twisted.metric(&cat.dims, settings.tol);
    axioms::cstar(&mut report, cat.family(), &twisted, &metric, settings, &KREIN_CSTAR);
    report
}

/// Same hom-spaces with involution `x ↦ α(x*)`.
///
/// Accepts a C*-category (the result is then a Kreĭn C*-category for `α`)
/// or a Kreĭn C*-category for `α` (the result is then a C*-category), so
/// twisting twice is the identity.
pub fn twist_category(cat: &OperatorCategory, alpha: &Symmetry, settings: &Settings) -> Result<OperatorCategory> {
    let mut sym = Report::new();
    axioms::symmetry(&mut sym, cat.family(), &cat.involution, alpha, settings, &axioms::SYMMETRY_NAMES);
    if !sym.passed() {
        return Err(Error::invalid(format!("not a valid symmetry ({})", sym.failures().join(", "))));
    }
    let cstar = verify_cstar_category(cat, settings);
    if !cstar.passed() && !verify_krein_cstar_category(cat, alpha, settings).passed() {
        return Err(Error::invalid(format!(
            "category is neither a C*-category nor a Krein C*-category for this symmetry ({})",
            cstar.failures().join(", ")
        )));
    }
    Ok(cat.with_involution(cat.involution.twisted(alpha)))
}
