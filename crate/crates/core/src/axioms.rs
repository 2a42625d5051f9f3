//! Checks shared by algebras (one object) and categories.

use rand::Rng;

use crate::algebra::{Involution, Metric, Symmetry};
use crate::matrix::spectral::{eigenvalues, herm_eig_unchecked};
use crate::matrix::{ComplexMatrix, SubspaceBasis};
use crate::report::{Report, Witness};
use crate::settings::Settings;

/// Hom-spaces indexed `src * n + dst`; `Hom(A, B)` holds `d_B × d_A` matrices.
#[derive(Clone, Copy)]
pub(crate) struct HomFamily<'a> {
    pub dims: &'a [usize],
    pub homs: &'a [SubspaceBasis],
}

impl<'a> HomFamily<'a> {
    pub fn n(&self) -> usize {
        self.dims.len()
    }

    pub fn hom(&self, src: usize, dst: usize) -> &'a SubspaceBasis {
        &self.homs[src * self.n() + dst]
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.n();
        (0..n).flat_map(move |s| (0..n).map(move |d| (s, d)))
    }

    /// Every basis element with its location.
    pub fn basis_elements(&self) -> impl Iterator<Item = (usize, usize, usize, &'a ComplexMatrix)> + '_ {
        self.pairs()
            .flat_map(move |(s, d)| self.hom(s, d).elements().iter().enumerate().map(move |(k, b)| (s, d, k, b)))
    }

    /// `samples` random elements, cycling over the non-zero hom-spaces.
    pub fn samples<R: Rng + ?Sized>(&self, count: usize, rng: &mut R) -> Vec<(usize, usize, ComplexMatrix)> {
        let live: Vec<_> = self.pairs().filter(|&(s, d)| !self.hom(s, d).is_empty()).collect();
        if live.is_empty() {
            return Vec::new();
        }
        (0..count)
            .map(|i| {
                let (s, d) = live[i % live.len()];
                (s, d, self.hom(s, d).random_element(rng))
            })
            .collect()
    }

    /// Basis elements followed by random samples.
    pub fn test_elements(&self, settings: &Settings) -> Vec<(String, usize, usize, ComplexMatrix)> {
        let mut out: Vec<_> =
            self.basis_elements().map(|(s, d, k, b)| (hom_label(s, d, k), s, d, b.clone())).collect();
        let mut rng = settings.rng();
        out.extend(
            self.samples(settings.samples, &mut rng)
                .into_iter()
                .enumerate()
                .map(|(i, (s, d, x))| (format!("sample {i} in Hom({s},{d})"), s, d, x)),
        );
        out
    }
}

pub(crate) fn hom_label(src: usize, dst: usize, k: usize) -> String {
    format!("Hom({src},{dst})[{k}]")
}

fn rel_bound(settings: &Settings, scale: f64) -> f64 {
    settings.bound(scale)
}

/// Units, closure under composition and involution, and `x** = x`.
pub(crate) fn structure(report: &mut Report, fam: HomFamily<'_>, inv: &Involution, settings: &Settings) {
    let n = fam.n();
    for a in 0..n {
        let one = ComplexMatrix::identity(fam.dims[a]);
        let r = fam.hom(a, a).distance(&one);
        report.record("unit_in_hom", r, rel_bound(settings, 1.0), || {
            Witness::new(format!("object {a}"), Some(one.clone()), "identity not in Hom(A,A)")
        });
    }
    for (s, d, k, b) in fam.basis_elements() {
        let star = inv.apply(b, s, d);
        let r = fam.hom(d, s).distance(&star);
        report.record("involution_closed", r, rel_bound(settings, star.frobenius()), || {
            Witness::new(hom_label(s, d, k), Some(b.clone()), "involute leaves Hom(B,A)")
        });
        let back = inv.apply(&star, d, s);
        report.record("involutive", back.distance(b), rel_bound(settings, b.frobenius()), || {
            Witness::new(hom_label(s, d, k), Some(b.clone()), "x** != x")
        });
    }
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let target = fam.hom(a, c);
                for (i, y) in fam.hom(a, b).elements().iter().enumerate() {
                    for (j, x) in fam.hom(b, c).elements().iter().enumerate() {
                        let p = x * y;
                        let r = target.distance(&p);
                        report.record("composition_closed", r, rel_bound(settings, p.frobenius()), || {
                            Witness::new(
                                format!("{} o {}", hom_label(b, c, j), hom_label(a, b, i)),
                                Some(p.clone()),
                                "product leaves Hom(A,C)",
                            )
                        });
                    }
                }
            }
        }
    }
}

/// Names of the checks emitted by [`symmetry`], so callers can relabel them.
pub(crate) struct SymmetryNames {
    pub involutive: &'static str,
    pub preserves: &'static str,
    pub unital: &'static str,
    pub multiplicative: &'static str,
    pub star: &'static str,
}

pub(crate) const SYMMETRY_NAMES: SymmetryNames = SymmetryNames {
    involutive: "alpha_involutive",
    preserves: "alpha_preserves_homs",
    unital: "alpha_unital",
    multiplicative: "alpha_multiplicative",
    star: "alpha_star",
};

/// `α∘α = id`, `α(Hom(A,B)) ⊆ Hom(A,B)`, `α(1) = 1`, multiplicativity on
/// composable basis pairs and `α(x*) = α(x)*`.
pub(crate) fn symmetry(
    report: &mut Report,
    fam: HomFamily<'_>,
    inv: &Involution,
    alpha: &Symmetry,
    settings: &Settings,
    names: &SymmetryNames,
) {
    let n = fam.n();
    let mut images: Vec<Vec<ComplexMatrix>> = Vec::with_capacity(fam.homs.len());
    for (s, d) in fam.pairs() {
        images.push(fam.hom(s, d).elements().iter().map(|b| alpha.apply(b, s, d)).collect());
    }
    for (s, d, k, b) in fam.basis_elements() {
        let a = &images[s * n + d][k];
        let aa = alpha.apply(a, s, d);
        report.record(names.involutive, aa.distance(b), rel_bound(settings, a.frobenius()), || {
            Witness::new(hom_label(s, d, k), Some(b.clone()), "alpha(alpha(x)) != x")
        });
        report.record(names.preserves, fam.hom(s, d).distance(a), rel_bound(settings, a.frobenius()), || {
            Witness::new(hom_label(s, d, k), Some(b.clone()), "alpha(x) leaves its hom-space")
        });
        let lhs = alpha.apply(&inv.apply(b, s, d), d, s);
        let rhs = inv.apply(a, s, d);
        report.record(names.star, lhs.distance(&rhs), rel_bound(settings, lhs.frobenius().max(rhs.frobenius())), || {
            Witness::new(hom_label(s, d, k), Some(b.clone()), "alpha(x*) != alpha(x)*")
        });
    }
    for a in 0..n {
        let one = ComplexMatrix::identity(fam.dims[a]);
        let r = alpha.apply(&one, a, a).distance(&one);
        report.record(names.unital, r, rel_bound(settings, 1.0), || {
            Witness::new(format!("object {a}"), Some(one.clone()), "alpha(1) != 1")
        });
    }
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let ys = fam.hom(a, b).elements();
                let xs = fam.hom(b, c).elements();
                for (i, y) in ys.iter().enumerate() {
                    for (j, x) in xs.iter().enumerate() {
                        let lhs = alpha.apply(&(x * y), a, c);
                        let rhs = &images[b * n + c][j] * &images[a * n + b][i];
                        let scale = lhs.frobenius().max(rhs.frobenius());
                        report.record(names.multiplicative, lhs.distance(&rhs), rel_bound(settings, scale), || {
                            Witness::new(
                                format!("{} o {}", hom_label(b, c, j), hom_label(a, b, i)),
                                Some(x * y),
                                "alpha(xy) != alpha(x) alpha(y)",
                            )
                        });
                    }
                }
            }
        }
    }
}

/// Outcome of a positivity test on `z ∈ Hom(A,A)`.
pub(crate) struct Positivity {
    /// Violation: max of the Hermiticity defect and the negative part of the
    /// spectrum, both relative to `1 + ‖z‖`.
    pub residual: f64,
    pub min_eigenvalue: f64,
}

/// `z` is positive for `inv` when `z* = z` and its spectrum is `≥ 0`. With a
/// Hilbert metric the spectrum is read off the Hermitian matrix `M z M⁻¹`.
pub(crate) fn positivity(z: &ComplexMatrix, object: usize, inv: &Involution, metric: &Metric) -> Positivity {
    let scale = 1.0 + metric.norm(z, object, object);
    let defect = metric.norm(&(&inv.apply(z, object, object) - z), object, object);
    if metric.is_euclidean() {
        let ev = eigenvalues(z).unwrap_or_default();
        let min = ev.iter().map(|l| l.re).fold(f64::INFINITY, f64::min);
        let imag = ev.iter().map(|l| l.im.abs()).fold(0.0, f64::max);
        let min = if min.is_finite() { min } else { 0.0 };
        Positivity { residual: defect.max(imag).max(-min) / scale, min_eigenvalue: min }
    } else {
        let h = metric.to_hilbert(z, object, object);
        let min = herm_eig_unchecked(&h).min();
        Positivity { residual: defect.max(-min) / scale, min_eigenvalue: min }
    }
}

pub(crate) struct CstarNames {
    pub identity: &'static str,
    pub positivity: &'static str,
}

pub(crate) const CSTAR_NAMES: CstarNames = CstarNames { identity: "cstar_identity", positivity: "positivity" };

/// `‖1_A‖ = 1`, submultiplicativity, `‖x*x‖ = ‖x‖²` and positivity of `x*x`
/// on basis elements and samples, with norms taken in `metric`.
pub(crate) fn cstar(
    report: &mut Report,
    fam: HomFamily<'_>,
    inv: &Involution,
    metric: &Metric,
    settings: &Settings,
    names: &CstarNames,
) {
    for a in 0..fam.n() {
        let one = ComplexMatrix::identity(fam.dims[a]);
        let r = (metric.norm(&one, a, a) - 1.0).abs();
        report.record("unit_norm", r, settings.tol, || {
            Witness::new(format!("object {a}"), Some(one.clone()), "norm of the unit is not 1")
        });
    }

    for (label, s, d, x) in fam.test_elements(settings) {
        let nx = metric.norm(&x, s, d);
        let xsx = &inv.apply(&x, s, d) * &x;
        let r = (metric.norm(&xsx, s, s) - nx * nx).abs();
        report.record(names.identity, r, settings.bound(nx * nx), || {
            Witness::new(label.clone(), Some(x.clone()), format!("|x*x| differs from |x|^2 = {:.6e}", nx * nx))
        });
        let p = positivity(&xsx, s, inv, metric);
        report.record(names.positivity, p.residual, settings.tol, || {
            Witness::new(
                label.clone(),
                Some(x.clone()),
                format!("x*x is not positive (smallest eigenvalue {:.6e})", p.min_eigenvalue),
            )
        });
    }

    let mut rng = settings.rng();
    let n = fam.n();
    let triples: Vec<_> = (0..n)
        .flat_map(|a| (0..n).flat_map(move |b| (0..n).map(move |c| (a, b, c))))
        .filter(|&(a, b, c)| !fam.hom(a, b).is_empty() && !fam.hom(b, c).is_empty())
        .collect();
    if triples.is_empty() {
        return;
    }
    for i in 0..settings.samples {
        let (a, b, c) = triples[rng.random_range(0..triples.len())];
        let y = fam.hom(a, b).random_element(&mut rng);
        let x = fam.hom(b, c).random_element(&mut rng);
        let bound_val = metric.norm(&x, b, c) * metric.norm(&y, a, b);
        let r = (metric.norm(&(&x * &y), a, c) - bound_val).max(0.0);
        report.record("submultiplicative", r, settings.bound(bound_val), || {
            Witness::new(format!("sample {i}: Hom({b},{c}) o Hom({a},{b})"), Some(&x * &y), "|xy| > |x||y|")
        });
    }
}
