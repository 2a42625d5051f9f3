//! Random instances shared by the integration tests.
//!
//! Categories are built in "type" coordinates: object `A` is
//! `⊕_τ ℂ^{m(A,τ)}` and `Hom(A, B)` holds every block-diagonal map
//! `⊕_τ Hom(ℂ^{m(A,τ)}, ℂ^{m(B,τ)})`. That is a C*-category for the
//! Euclidean adjoint. Conjugating by invertible `W_A` moves it to general
//! position; with a sign matrix `J0_A` the forms `W_A^{-†} J0_A W_A⁻¹` make a
//! Kreĭn C*-category for `α = Ad(W J0 W⁻¹)`.
#![allow(dead_code)]

use krein_core::algebra::{Involution, MatrixStarAlgebra, Symmetry};
use krein_core::category::{Object, OperatorCategory};
use krein_core::cli::document::{load, Document};
use krein_core::gns::CategoryState;
use krein_core::krein::KreinSpaceSpec;
use krein_core::matrix::random::{random_unit_vector, random_unitary, random_vector};
use krein_core::matrix::{ComplexMatrix, SubspaceBasis, C64};
use krein_core::Settings;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub const TOL: f64 = 1e-9;

pub fn rng(seed: u64) -> ChaCha8Rng {
    Settings::default().with_seed(seed).rng()
}

/// `U diag(σ) V` with singular values in `[0.5, 2]`.
pub fn invertible<R: Rng>(n: usize, rng: &mut R) -> ComplexMatrix {
    let u = random_unitary(n, rng);
    let v = random_unitary(n, rng);
    let s: Vec<f64> = (0..n).map(|_| rng.random_range(0.5..2.0)).collect();
    &(&u * &ComplexMatrix::diag_real(&s)) * &v
}

/// Sign vector of length `n` with at least one of each sign when `n ≥ 2`.
pub fn mixed_signs<R: Rng>(n: usize, rng: &mut R) -> Vec<f64> {
    loop {
        let s: Vec<f64> = (0..n).map(|_| if rng.random_bool(0.5) { 1.0 } else { -1.0 }).collect();
        if n < 2 || (s.contains(&1.0) && s.contains(&-1.0)) {
            return s;
        }
    }
}

/// A Kreĭn space `W^{-†} J0 W⁻¹` together with its natural symmetry `W J0 W⁻¹`.
pub struct RandomSpace {
    pub space: KreinSpaceSpec,
    pub j: ComplexMatrix,
    pub w: ComplexMatrix,
    pub signs: Vec<f64>,
}

pub fn krein_space<R: Rng>(n: usize, rng: &mut R) -> RandomSpace {
    let signs = mixed_signs(n, rng);
    let w = invertible(n, rng);
    let wi = w.inverse().unwrap();
    let j0 = ComplexMatrix::diag_real(&signs);
    let gram = &(&wi.adjoint() * &j0) * &wi;
    let gram = (&gram + &gram.adjoint()).scale_re(0.5);
    let j = &(&w * &j0) * &wi;
    RandomSpace { space: KreinSpaceSpec::new(gram, TOL).unwrap(), j, w, signs }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flavor {
    /// Unitary `W`, Hilbert adjoint.
    Hilbert,
    /// Positive definite forms `W^{-†} W⁻¹`.
    Weighted,
    /// Indefinite forms with `α = Ad(W J0 W⁻¹)`.
    Krein,
}

pub struct RandomCategory {
    pub cat: OperatorCategory,
    pub alpha: Symmetry,
    /// `Ad(W S W⁻¹)` for random sign matrices `S`: a *-automorphism of
    /// every flavor, equal to `alpha` for [`Flavor::Krein`].
    pub grading: Symmetry,
    /// `W_A`, mapping type coordinates to ambient coordinates.
    pub w: Vec<ComplexMatrix>,
    pub flavor: Flavor,
}

impl RandomCategory {
    /// Norm of `x ∈ Hom(A, B)` computed in type coordinates,
    /// `‖W_B⁻¹ x W_A‖`, where every flavor's metric is Euclidean.
    pub fn norm(&self, x: &ComplexMatrix, src: usize, dst: usize) -> f64 {
        let y = &(&self.w[dst].inverse().unwrap() * x) * &self.w[src];
        spectral_norm(&y)
    }
}

pub fn spectral_norm(x: &ComplexMatrix) -> f64 {
    x.as_nalgebra().clone().svd(false, false).singular_values.iter().copied().fold(0.0, f64::max)
}

/// Random category with `1..=max_objects` objects of dimension
/// `1..=max_dim`, block-diagonal over one or two types.
pub fn category<R: Rng>(flavor: Flavor, max_objects: usize, max_dim: usize, rng: &mut R) -> RandomCategory {
    let n = rng.random_range(1..=max_objects);
    let types = rng.random_range(1..=2usize);
    let mut mult = vec![vec![0usize; types]; n];
    for row in mult.iter_mut() {
        loop {
            for m in row.iter_mut() {
                *m = rng.random_range(0..=max_dim.min(3));
            }
            let d: usize = row.iter().sum();
            if (1..=max_dim).contains(&d) {
                break;
            }
        }
    }
    let dims: Vec<usize> = mult.iter().map(|r| r.iter().sum()).collect();
    let offset = |a: usize, t: usize| mult[a][..t].iter().sum::<usize>();

    let mut w = Vec::with_capacity(n);
    let mut w_inv = Vec::with_capacity(n);
    let mut signs = Vec::with_capacity(n);
    for &d in &dims {
        let m = match flavor {
            Flavor::Hilbert => random_unitary(d, rng),
            _ => invertible(d, rng),
        };
        w_inv.push(m.inverse().unwrap());
        w.push(m);
        signs.push(mixed_signs(d, rng));
    }

    let mut homs = Vec::with_capacity(n * n);
    for s in 0..n {
        for d in 0..n {
            let mut span = Vec::new();
            for (t, (&md, &ms)) in mult[d].iter().zip(&mult[s]).enumerate() {
                for i in 0..md {
                    for j in 0..ms {
                        let e = ComplexMatrix::unit(dims[d], dims[s], offset(d, t) + i, offset(s, t) + j);
                        span.push(&(&w[d] * &e) * &w_inv[s]);
                    }
                }
            }
            homs.push(SubspaceBasis::from_spanning(dims[d], dims[s], &span, TOL).unwrap());
        }
    }

    let involution = match flavor {
        Flavor::Hilbert => Involution::Adjoint,
        _ => Involution::Krein(
            (0..n)
                .map(|a| {
                    let j0 = if flavor == Flavor::Krein { signs[a].clone() } else { vec![1.0; dims[a]] };
                    let g = &(&w_inv[a].adjoint() * &ComplexMatrix::diag_real(&j0)) * &w_inv[a];
                    KreinSpaceSpec::new((&g + &g.adjoint()).scale_re(0.5), TOL).unwrap()
                })
                .collect(),
        ),
    };
    let grading =
        Symmetry::conjugation((0..n).map(|a| &(&w[a] * &ComplexMatrix::diag_real(&signs[a])) * &w_inv[a]).collect())
            .unwrap();
    let alpha = if flavor == Flavor::Krein { grading.clone() } else { Symmetry::Identity };
    let objects = dims.iter().enumerate().map(|(a, &d)| Object::new(format!("A{a}"), d)).collect();
    let cat = OperatorCategory::from_homs(objects, homs, involution, TOL).unwrap();
    RandomCategory { cat, alpha, grading, w, flavor }
}

/// One-object instance, as an algebra.
pub fn krein_algebra<R: Rng>(max_dim: usize, rng: &mut R) -> (MatrixStarAlgebra, Symmetry, RandomCategory) {
    let rc = category(Flavor::Krein, 1, max_dim, rng);
    (rc.cat.diagonal_algebra(0), rc.alpha.clone(), rc)
}

pub const STATE_KINDS: [&str; 3] = ["trace", "vector", "convex"];

/// Trace, vector, or a convex combination of two or three of those.
pub fn state<R: Rng>(cat: &OperatorCategory, rng: &mut R) -> CategoryState {
    let kind = rng.random_range(0..3);
    state_of_kind(cat, kind, rng)
}

/// `kind` indexes [`STATE_KINDS`].
pub fn state_of_kind<R: Rng>(cat: &OperatorCategory, kind: usize, rng: &mut R) -> CategoryState {
    match kind {
        0 => CategoryState::trace(cat),
        1 => vector_state(cat, rng),
        _ => {
            let k = rng.random_range(2..=3);
            let parts: Vec<CategoryState> = (0..k)
                .map(|_| if rng.random_bool(0.3) { CategoryState::trace(cat) } else { vector_state(cat, rng) })
                .collect();
            let weights: Vec<f64> = (0..k).map(|_| rng.random_range(0.1..1.0)).collect();
            let total: f64 = weights.iter().sum();
            let weights: Vec<f64> = weights.iter().map(|w| w / total).collect();
            CategoryState::convex(&parts, &weights, TOL).unwrap()
        }
    }
}

pub fn vector_state<R: Rng>(cat: &OperatorCategory, rng: &mut R) -> CategoryState {
    let vs: Vec<Vec<C64>> = cat.dims().iter().map(|&d| random_unit_vector(d, rng)).collect();
    CategoryState::vector(cat, &vs, TOL).unwrap()
}

/// Random element of `Hom(src, dst)`.
pub fn element<R: Rng>(cat: &OperatorCategory, src: usize, dst: usize, rng: &mut R) -> ComplexMatrix {
    let h = cat.hom(src, dst);
    let c = random_vector(h.dim(), rng);
    if h.is_empty() {
        ComplexMatrix::zeros(h.rows(), h.cols())
    } else {
        h.combine(&c)
    }
}

/// `G`-skew Cayley transform: a random `G`-unitary `S = (I − K)⁻¹ (I + K)`
/// with `K = ε G⁻¹ A`, `A` anti-Hermitian.
pub fn krein_unitary<R: Rng>(space: &KreinSpaceSpec, scale: f64, rng: &mut R) -> ComplexMatrix {
    let n = space.dim();
    let h = krein_core::matrix::random::random_hermitian(n, rng);
    let a = h.scale(C64::new(0.0, scale));
    let k = space.gram_inverse() * &a;
    let id = ComplexMatrix::identity(n);
    &(&id - &k).inverse().unwrap() * &(&id + &k)
}

pub fn fixtures_dir() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

pub fn fixture(name: &str) -> Document {
    load(&fixtures_dir().join(name)).unwrap().document
}

pub fn fixture_space(name: &str) -> (KreinSpaceSpec, Option<ComplexMatrix>) {
    match fixture(name) {
        Document::Space(p) => (p.space(TOL).unwrap(), p.symmetry.map(|m| m.to_matrix("symmetry").unwrap())),
        _ => panic!("{name} is not a space"),
    }
}

pub fn fixture_algebra(name: &str) -> (MatrixStarAlgebra, Symmetry) {
    match fixture(name) {
        Document::Algebra(p) => (p.algebra(TOL).unwrap(), p.symmetry(TOL).unwrap()),
        _ => panic!("{name} is not an algebra"),
    }
}

pub fn fixture_category(name: &str) -> (OperatorCategory, Symmetry) {
    match fixture(name) {
        Document::Category(p) => (p.category(TOL).unwrap(), p.symmetry(TOL).unwrap()),
        _ => panic!("{name} is not a category"),
    }
}

/// A state fixture together with the category it names.
pub fn fixture_state(name: &str) -> (OperatorCategory, CategoryState) {
    let path = fixtures_dir().join(name);
    let Document::State(p) = load(&path).unwrap().document else { panic!("{name} is not a state") };
    let Document::Category(c) = load(&p.category_path(&path).unwrap()).unwrap().document else {
        panic!("{name} names a non-category")
    };
    let cat = c.category(TOL).unwrap();
    let omega = p.state.state(&c, &cat, TOL, "payload.state").unwrap();
    (cat, omega)
}
