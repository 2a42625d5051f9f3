//! Faithful α-covariant representations on Kreĭn spaces.

use crate::algebra::{verify_krein_cstar, MatrixStarAlgebra, Symmetry};
use crate::axioms::hom_label;
use crate::category::{double_cstar, link_cstar, verify_krein_cstar_category, OperatorCategory, StarFunctor};
use crate::error::{Error, Result};
use crate::krein::{all_symmetry_check, KreinSpaceSpec};
use crate::matrix::spectral::singular_values;
use crate::matrix::{rank, ComplexMatrix};
use crate::report::{Report, Witness};
use crate::settings::Settings;

use super::construction::GnsRepresentation;
use super::gelfand::gelfand_naimark;

/// `π` represents a Kreĭn C*-category on `K_A = H_{A+} ⊕ (−H_{A−})` with
/// fundamental symmetries `J_A = diag(1, −1)`.
#[derive(Debug, Clone)]
pub struct KreinRepresentation {
    pub spaces: Vec<KreinSpaceSpec>,
    pub symmetries: Vec<ComplexMatrix>,
    /// `dim H_{A+}`; the rest of `K_A` is `H_{A−}`.
    pub plus_dims: Vec<usize>,
    pub functor: StarFunctor,
    /// Isometric representation of the doubled C*-category.
    pub doubled: GnsRepresentation,
    pub report: Report,
}

impl KreinRepresentation {
    pub fn apply(&self, x: &ComplexMatrix, src: usize, dst: usize) -> ComplexMatrix {
        self.functor.apply(x, src, dst)
    }

    pub fn dims(&self) -> Vec<usize> {
        self.spaces.iter().map(KreinSpaceSpec::dim).collect()
    }
}

/// Represents a Kreĭn C*-algebra through its linking C*-category.
pub fn represent_krein_algebra(algebra: &MatrixStarAlgebra, alpha: &Symmetry, settings: &Settings) -> Result<KreinRepresentation> {
    let check = verify_krein_cstar(algebra, alpha, settings);
    if !check.passed() {
        return Err(Error::Certificate { what: "Krein C*-algebra check".into(), report: Box::new(check) });
    }
    let link = link_cstar(algebra, alpha, settings.tol)?;
    assemble(&OperatorCategory::from_algebra(algebra), alpha, &link, settings)
}

/// Represents a Kreĭn C*-category through its doubling.
pub fn represent_krein_category(cat: &OperatorCategory, alpha: &Symmetry, settings: &Settings) -> Result<KreinRepresentation> {
    let check = verify_krein_cstar_category(cat, alpha, settings);
    if !check.passed() {
        return Err(Error::Certificate { what: "Krein C*-category check".into(), report: Box::new(check) });
    }
    let doubled = double_cstar(cat, alpha, settings.tol)?;
    assemble(cat, alpha, &doubled, settings)
}

/// `doubled` has objects `A+ = 2a`, `A− = 2a+1`, with even parts between
/// equal signs and odd parts between opposite ones. For `x ∈ Hom(A, B)`,
/// `π(x)` is the block matrix with rows `B±`, columns `A±` and entries
/// `ρ(x₊)` on the diagonal and `ρ(x₋)` off it.
fn assemble(cat: &OperatorCategory, alpha: &Symmetry, doubled: &OperatorCategory, settings: &Settings) -> Result<KreinRepresentation> {
    let n = cat.n_objects();
    let tol = settings.tol;
    let rho = gelfand_naimark(doubled, settings)?;
    let has_odd = (0..n).any(|s| (0..n).any(|d| !doubled.hom(2 * s, 2 * d + 1).is_empty()));
    let plus_dims: Vec<usize> = (0..n).map(|a| rho.dims[2 * a]).collect();
    let minus_dims: Vec<usize> = (0..n).map(|a| if has_odd { rho.dims[2 * a + 1] } else { 0 }).collect();
    let spaces: Vec<KreinSpaceSpec> = (0..n).map(|a| KreinSpaceSpec::minkowski(plus_dims[a], minus_dims[a])).collect();
    let symmetries: Vec<ComplexMatrix> = spaces.iter().map(|k| k.gram().clone()).collect();

    let split = |x: &ComplexMatrix, s: usize, d: usize| {
        let a = alpha.apply(x, s, d);
        ((x + &a).scale_re(0.5), (x - &a).scale_re(0.5))
    };
    let pi = |x: &ComplexMatrix, s: usize, d: usize| {
        let (even, odd) = split(x, s, d);
        let (pa, ma, pb, mb) = (plus_dims[s], minus_dims[s], plus_dims[d], minus_dims[d]);
        let mut out = ComplexMatrix::zeros(pb + mb, pa + ma);
        out.set_block(0, 0, &rho.apply(&even, 2 * s, 2 * d));
        if has_odd {
            out.set_block(0, pa, &rho.apply(&odd, 2 * s + 1, 2 * d));
            out.set_block(pb, 0, &rho.apply(&odd, 2 * s, 2 * d + 1));
            out.set_block(pb, pa, &rho.apply(&even, 2 * s + 1, 2 * d + 1));
        }
        out
    };
    let dims: Vec<usize> = spaces.iter().map(KreinSpaceSpec::dim).collect();
    let functor = StarFunctor::from_fn(cat, (0..n).collect(), dims, |x, s, d| pi(x, s, d))?;

    let mut report = Report::new();
    let twisted = cat.involution().twisted(alpha);
    for s in 0..n {
        for d in 0..n {
            let images = functor.images(s, d);
            for (k, (b, img)) in cat.hom(s, d).elements().iter().zip(images).enumerate() {
                let label = || hom_label(s, d, k);
                let adj = img.adjoint();
                let r = functor.apply(&twisted.apply(b, s, d), d, s).distance(&adj);
                report.record("twisted_adjoint", r, settings.bound(adj.frobenius()), || {
                    Witness::new(label(), Some(b.clone()), "pi(alpha(x*)) != pi(x)^dagger")
                });
                let kadj = &(&symmetries[s] * &adj) * &symmetries[d];
                let r = functor.apply(&cat.star(b, s, d), d, s).distance(&kadj);
                report.record("krein_adjoint", r, settings.bound(kadj.frobenius()), || {
                    Witness::new(label(), Some(b.clone()), "pi(x*) != J pi(x)^dagger J")
                });
                let conj = &(&symmetries[d] * img) * &symmetries[s];
                let r = functor.apply(&alpha.apply(b, s, d), s, d).distance(&conj);
                report.record("covariance", r, settings.bound(conj.frobenius()), || {
                    Witness::new(label(), Some(b.clone()), "pi(alpha(x)) != J pi(x) J")
                });
                let (even, odd) = split(b, s, d);
                let (pe, po) = (pi(&even, s, d), pi(&odd, s, d));
                let (pa, pb) = (plus_dims[s], plus_dims[d]);
                let (ma, mb) = (minus_dims[s], minus_dims[d]);
                let off = pe.block(0, pa, pb, ma).frobenius().max(pe.block(pb, 0, mb, pa).frobenius());
                let diag = po.block(0, 0, pb, pa).frobenius().max(po.block(pb, pa, mb, ma).frobenius());
                let r = off.max(diag).max((&pe + &po).distance(img));
                report.record("block_form", r, settings.bound(img.frobenius()), || {
                    Witness::new(label(), Some(b.clone()), "pi(x) is not [[rho(x+), rho(x-)], [rho(x-), rho(x+)]]")
                });
            }
            let h = cat.hom(s, d);
            if h.is_empty() {
                continue;
            }
            let (rows, cols) = (images[0].rows() * images[0].cols(), images.len());
            let stacked = ComplexMatrix::from_fn(rows, cols, |i, j| images[j].get(i % images[j].rows(), i / images[j].rows()));
            let rk = rank(&stacked, tol);
            let smallest = singular_values(&stacked).get(cols - 1).copied().unwrap_or(0.0);
            report.flag("faithful", rk == cols, || {
                Witness::new(
                    format!("Hom({s},{d})"),
                    Some(h.elements()[0].clone()),
                    format!("rank {rk} < {cols} (smallest singular value {smallest:.3e})"),
                )
            });
        }
    }
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for (i, y) in cat.hom(a, b).elements().iter().enumerate() {
                    for (j, x) in cat.hom(b, c).elements().iter().enumerate() {
                        let lhs = functor.apply(&(x * y), a, c);
                        let rhs = &functor.images(b, c)[j] * &functor.images(a, b)[i];
                        report.record("multiplicative", lhs.distance(&rhs), settings.bound(rhs.frobenius()), || {
                            Witness::new(format!("{} o {}", hom_label(b, c, j), hom_label(a, b, i)), Some(x * y), "pi(xy) != pi(x) pi(y)")
                        });
                    }
                }
            }
        }
        let one = ComplexMatrix::identity(cat.dims()[a]);
        let img = functor.apply(&one, a, a);
        report.record("unital", img.distance(&ComplexMatrix::identity(img.rows())), settings.bound(1.0), || {
            Witness::new(format!("object {a}"), Some(one.clone()), "pi(1) != 1")
        });
        let ok = all_symmetry_check(&spaces[a], &symmetries[a], tol)?;
        report.flag("fundamental_symmetry", ok, || {
            Witness::new(format!("object {a}"), Some(symmetries[a].clone()), "J is not a fundamental symmetry of K")
        });
    }
    if !report.passed() {
        return Err(Error::Certificate { what: "Krein representation".into(), report: Box::new(report) });
    }
    Ok(KreinRepresentation { spaces, symmetries, plus_dims, functor, doubled: rho, report })
}
