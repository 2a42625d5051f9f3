//! The GNS representation of a state.

use rand::Rng;

use crate::axioms::hom_label;
use crate::category::{Object, OperatorCategory, StarFunctor};
use crate::error::{Error, Result};
use crate::matrix::spectral::{herm_eig_unchecked, norm};
use crate::matrix::{dot, rank, vector_norm, ComplexMatrix, SubspaceBasis, C64};
use crate::report::{Report, Witness};
use crate::settings::Settings;

use super::state::{gram, row_space, verify_state, CategoryState};

/// A representation of an operator category on Hilbert spaces `H_A = ℂ^{dims[A]}`
/// together with unit vectors `ξ_A`.
///
/// For a single state, `ω(x) = ⟨ξ_B, π(x) ξ_A⟩` for every `x ∈ Hom(A, B)`.
#[derive(Debug, Clone)]
pub struct GnsRepresentation {
    pub dims: Vec<usize>,
    /// `pair_dims[C * n + B]` is the dimension of the image of `Hom(C, B)`
    /// in `H_B`.
    pub pair_dims: Vec<usize>,
    pub cyclic: Vec<Vec<C64>>,
    pub functor: StarFunctor,
    pub report: Report,
}

impl GnsRepresentation {
    pub fn apply(&self, x: &ComplexMatrix, src: usize, dst: usize) -> ComplexMatrix {
        self.functor.apply(x, src, dst)
    }

    /// `⟨ξ_B, π(x) ξ_A⟩`.
    pub fn matrix_coefficient(&self, x: &ComplexMatrix, src: usize, dst: usize) -> C64 {
        dot(&self.cyclic[dst], &self.apply(x, src, dst).apply(&self.cyclic[src]))
    }

    /// The concrete category spanned by the images, with the Hilbert adjoint.
    pub fn image_category(&self, source: &OperatorCategory, tol: f64) -> Result<OperatorCategory> {
        let n = source.n_objects();
        let objects =
            source.objects().iter().zip(&self.dims).map(|(o, &d)| Object::new(o.label.clone(), d)).collect();
        let mut homs = Vec::with_capacity(n * n);
        for s in 0..n {
            for d in 0..n {
                let mut span = self.functor.images(s, d).to_vec();
                if s == d {
                    span.push(ComplexMatrix::identity(self.dims[s]));
                }
                homs.push(SubspaceBasis::from_spanning(self.dims[d], self.dims[s], &span, tol)?);
            }
        }
        OperatorCategory::from_homs(objects, homs, crate::algebra::Involution::Adjoint, tol)
    }
}

/// Per-object quotient data: `R_B = Λ^{1/2} U†` maps row coordinates onto
/// `H_B`, and `lifts[j]` is the row-space element `R_B⁺ e_j`, one matrix per
/// source object `C`.
struct Quotient {
    r: ComplexMatrix,
    lifts: Vec<Vec<ComplexMatrix>>,
}

fn quotient(cat: &OperatorCategory, omega: &CategoryState, b: usize, tol: f64) -> Quotient {
    let n = cat.n_objects();
    let rows = row_space(cat, b);
    let g = gram(cat, omega, b);
    let eig = herm_eig_unchecked(&g);
    let cut = tol * (1.0 + eig.max().abs().max(eig.min().abs()));
    let keep: Vec<usize> = (0..eig.eigenvalues.len()).rev().filter(|&k| eig.eigenvalues[k] > cut).collect();
    let r = ComplexMatrix::from_fn(keep.len(), rows.len(), |i, j| {
        eig.eigenvectors.get(j, keep[i]).conj() * eig.eigenvalues[keep[i]].sqrt()
    });
    let lifts = keep
        .iter()
        .map(|&k| {
            let scale = 1.0 / eig.eigenvalues[k].sqrt();
            let mut parts: Vec<ComplexMatrix> =
                (0..n).map(|c| ComplexMatrix::zeros(cat.dims()[b], cat.dims()[c])).collect();
            for (row, &(c, l)) in rows.iter().enumerate() {
                parts[c].axpy(eig.eigenvectors.get(row, k) * scale, &cat.hom(c, b).elements()[l]);
            }
            parts
        })
        .collect();
    Quotient { r, lifts }
}

/// Coordinates in [`row_space`] of `b` of an element of `⊕_C Hom(C, b)`.
fn row_coordinates(cat: &OperatorCategory, b: usize, parts: &[ComplexMatrix]) -> Vec<C64> {
    (0..cat.n_objects()).flat_map(|c| cat.hom(c, b).coordinates(&parts[c])).collect()
}

/// GNS representation of `ω`: `H_B` is the row space `⊕_C Hom(C, B)` modulo
/// the null space of `⟨y, z⟩ = ω(y* ∘ z)`, `π(x)` is left multiplication and
/// `ξ_A` is the class of `1_A`.
pub fn gns(cat: &OperatorCategory, omega: &CategoryState, settings: &Settings) -> Result<GnsRepresentation> {
    let state_report = verify_state(cat, omega, settings)?;
    if !state_report.passed() {
        return Err(Error::invalid(format!("not a state ({})", state_report.failures().join(", "))));
    }
    let n = cat.n_objects();
    let quotients: Vec<Quotient> = (0..n).map(|b| quotient(cat, omega, b, settings.tol)).collect();
    let dims: Vec<usize> = quotients.iter().map(|q| q.r.rows()).collect();

    let mut pair_dims = Vec::with_capacity(n * n);
    for c in 0..n {
        for b in 0..n {
            let start: usize = (0..c).map(|c2| cat.hom(c2, b).dim()).sum();
            let len = cat.hom(c, b).dim();
            pair_dims.push(if len == 0 { 0 } else { rank(&quotients[b].r.block(0, start, dims[b], len), settings.tol) });
        }
    }

    let mut images = Vec::with_capacity(n * n);
    for s in 0..n {
        for d in 0..n {
            let imgs = cat
                .hom(s, d)
                .elements()
                .iter()
                .map(|x| {
                    let mut out = ComplexMatrix::zeros(dims[d], dims[s]);
                    for (j, lift) in quotients[s].lifts.iter().enumerate() {
                        let moved: Vec<ComplexMatrix> = lift.iter().map(|y| x * y).collect();
                        let col = quotients[d].r.apply(&row_coordinates(cat, d, &moved));
                        for (i, v) in col.into_iter().enumerate() {
                            out.set(i, j, v);
                        }
                    }
                    out
                })
                .collect();
            images.push(imgs);
        }
    }
    let functor = StarFunctor::new(cat, (0..n).collect(), dims.clone(), images)?;

    let cyclic: Vec<Vec<C64>> = (0..n)
        .map(|a| {
            let one = ComplexMatrix::identity(cat.dims()[a]);
            let parts: Vec<ComplexMatrix> = (0..n)
                .map(|c| if c == a { one.clone() } else { ComplexMatrix::zeros(cat.dims()[a], cat.dims()[c]) })
                .collect();
            quotients[a].r.apply(&row_coordinates(cat, a, &parts))
        })
        .collect();

    let mut rep = GnsRepresentation { dims, pair_dims, cyclic, functor, report: Report::new() };
    let mut report = Report::new();
    representation_checks(&mut report, cat, &rep.functor, settings);
    for (a, xi) in rep.cyclic.iter().enumerate() {
        report.record("cyclic_norm", (vector_norm(xi) - 1.0).abs(), settings.tol, || {
            Witness::new(format!("object {a}"), None, "|xi_A| != 1")
        });
    }
    for s in 0..n {
        for d in 0..n {
            for (k, b) in cat.hom(s, d).elements().iter().enumerate() {
                let lhs = rep.matrix_coefficient(b, s, d);
                let rhs = omega.values()[s * n + d][k];
                report.record("reconstruction", (lhs - rhs).norm(), settings.tol, || {
                    Witness::new(hom_label(s, d, k), Some(b.clone()), format!("<xi, pi(x) xi> = {lhs}, w(x) = {rhs}"))
                });
            }
        }
    }
    if !report.passed() {
        return Err(Error::Certificate { what: "GNS representation".into(), report: Box::new(report) });
    }
    rep.report = report;
    Ok(rep)
}

/// `π(xy) = π(x)π(y)` on composable basis pairs, `π(x*) = π(x)†` and
/// `π(1_A) = 1`.
pub(crate) fn representation_checks(report: &mut Report, cat: &OperatorCategory, pi: &StarFunctor, settings: &Settings) {
    let n = cat.n_objects();
    for s in 0..n {
        for d in 0..n {
            for (k, (b, img)) in cat.hom(s, d).elements().iter().zip(pi.images(s, d)).enumerate() {
                let lhs = pi.apply(&cat.star(b, s, d), d, s);
                let rhs = img.adjoint();
                report.record("involution", lhs.distance(&rhs), settings.bound(rhs.frobenius()), || {
                    Witness::new(hom_label(s, d, k), Some(b.clone()), "pi(x*) != pi(x)^dagger")
                });
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for (i, y) in cat.hom(a, b).elements().iter().enumerate() {
                    for (j, x) in cat.hom(b, c).elements().iter().enumerate() {
                        let lhs = pi.apply(&(x * y), a, c);
                        let rhs = &pi.images(b, c)[j] * &pi.images(a, b)[i];
                        report.record("multiplicative", lhs.distance(&rhs), settings.bound(rhs.frobenius()), || {
                            Witness::new(
                                format!("{} o {}", hom_label(b, c, j), hom_label(a, b, i)),
                                Some(x * y),
                                "pi(xy) != pi(x) pi(y)",
                            )
                        });
                    }
                }
            }
        }
    }
    for a in 0..n {
        let one = ComplexMatrix::identity(cat.dims()[a]);
        let img = pi.apply(&one, a, a);
        let r = img.distance(&ComplexMatrix::identity(img.rows()));
        report.record("unital", r, settings.bound(1.0), || Witness::new(format!("object {a}"), Some(one.clone()), "pi(1) != 1"));
    }
}

/// For random `x` and null vectors `m ∈ N^ω` (kernel of each hom-space
/// Gram matrix), `ω((x∘m)* ∘ (x∘m))` vanishes: `N^ω` is a left ideal.
pub fn null_ideal_check(cat: &OperatorCategory, omega: &CategoryState, settings: &Settings) -> Result<Report> {
    omega.matches(cat)?;
    let n = cat.n_objects();
    let mut report = Report::new();
    let mut rng = settings.rng();
    for b in 0..n {
        let g = gram(cat, omega, b);
        let mut start = 0;
        for c in 0..n {
            let h = cat.hom(c, b);
            let len = h.dim();
            if len == 0 {
                continue;
            }
            let eig = herm_eig_unchecked(&g.block(start, start, len, len));
            start += len;
            let cut = settings.tol * (1.0 + eig.max().abs());
            let null: Vec<ComplexMatrix> = (0..len)
                .filter(|&k| eig.eigenvalues[k] <= cut)
                .map(|k| h.combine(&eig.vector(k)))
                .collect();
            let targets: Vec<usize> = (0..n).filter(|&d| !cat.hom(b, d).is_empty()).collect();
            if null.is_empty() || targets.is_empty() {
                continue;
            }
            for i in 0..settings.samples {
                let m = &null[i % null.len()];
                let d = targets[rng.random_range(0..targets.len())];
                let x = cat.hom(b, d).random_element(&mut rng);
                let xm = &x * m;
                let v = omega.eval(cat, &(&cat.star(&xm, c, d) * &xm), c, c);
                let scale = norm(&x).powi(2);
                report.record("left_ideal", v.norm(), settings.bound(scale), || {
                    Witness::new(format!("Hom({c},{b}) null vector {}", i % null.len()), Some(m.clone()), format!("w((xm)*(xm)) = {v}"))
                });
            }
        }
    }
    Ok(report)
}
