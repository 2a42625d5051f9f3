//! Two-object linking categories, the category `[A₊, A₋]` of a Kreĭn
//! C*-algebra, and the doubling of a Kreĭn C*-category.

use crate::algebra::{
    even_odd_split, split_hom, twist_involution, verify_krein_cstar, Involution, MatrixStarAlgebra, Symmetry,
};
use crate::axioms::hom_label;
use crate::error::{Error, Result};
use crate::matrix::{rank, ComplexMatrix, SubspaceBasis};
use crate::report::{Report, Witness};
use crate::settings::Settings;

use super::operator::{verify_krein_cstar_category, Object, OperatorCategory};

fn offending(what: &str, a: &str, b: &str) -> Error {
    Error::invalid(format!("linking compatibility fails: {what} ({a}, {b})"))
}

/// Objects `{+, −}` with `Hom(±,±) = A₊` and `Hom(±,∓) = M`, composed by
/// ambient multiplication. `M` must be an `A₊`-bimodule closed under the
/// involution with `M·M ⊆ A₊`.
pub fn linking_category(algebra_plus: &MatrixStarAlgebra, module_odd: &SubspaceBasis, tol: f64) -> Result<OperatorCategory> {
    let d = algebra_plus.ambient_dim();
    if (module_odd.rows(), module_odd.cols()) != (d, d) {
        return Err(Error::shape(format!(
            "module must hold {d}x{d} matrices, got {}x{}",
            module_odd.rows(),
            module_odd.cols()
        )));
    }
    let settings = Settings::default().with_tol(tol);
    let a_plus = algebra_plus.basis();
    for (i, m) in module_odd.elements().iter().enumerate() {
        let mi = format!("m{i}");
        let ms = algebra_plus.star(m);
        if module_odd.distance(&ms) > settings.bound(ms.frobenius()) {
            return Err(offending("module not closed under the involution", &mi, &mi));
        }
        for (j, a) in a_plus.elements().iter().enumerate() {
            let aj = format!("a{j}");
            for (p, name) in [(a * m, "a m"), (m * a, "m a")] {
                if module_odd.distance(&p) > settings.bound(p.frobenius()) {
                    return Err(offending(&format!("{name} leaves the module"), &aj, &mi));
                }
            }
        }
        for (j, n) in module_odd.elements().iter().enumerate() {
            let p = m * n;
            if a_plus.distance(&p) > settings.bound(p.frobenius()) {
                return Err(offending("product of module elements leaves the even algebra", &mi, &format!("m{j}")));
            }
        }
    }
    let objects = vec![Object::new("+", d), Object::new("-", d)];
    let homs = vec![a_plus.clone(), module_odd.clone(), module_odd.clone(), a_plus.clone()];
    let involution = Involution::Reindexed { map: vec![0, 0], inner: Box::new(algebra_plus.involution().clone()) };
    Ok(OperatorCategory::from_parts(objects, homs, involution))
}

fn require(report: Report, what: &str) -> Result<()> {
    if report.passed() {
        Ok(())
    } else {
        Err(Error::Certificate { what: what.to_string(), report: Box::new(report) })
    }
}

/// `Ad(±I)` on a doubled family: `+1` on even-indexed objects.
fn grading(dims: &[usize]) -> Symmetry {
    let signs: Vec<bool> = (0..dims.len()).map(|a| a % 2 == 0).collect();
    Symmetry::grading(dims, &signs)
}

/// The Kreĭn C*-category `[A₊, A₋]` of `(A, α)` with its grading symmetry.
///
/// The underlying C*-category is the linking category of the twisted
/// algebra `A^α`; twisting it by the grading gives the returned category,
/// whose involution agrees with the original involution of `A`.
pub fn krein_link(algebra: &MatrixStarAlgebra, alpha: &Symmetry, settings: &Settings) -> Result<(OperatorCategory, Symmetry)> {
    require(verify_krein_cstar(algebra, alpha, settings), "Krein C*-algebra check")?;
    let link = link_cstar(algebra, alpha, settings.tol)?;
    let g = grading(link.dims());
    let cat = link.with_involution(link.involution().twisted(&g));
    Ok((cat, g))
}

/// The C*-category `[A₊, A₋]` before the grading twist.
pub(crate) fn link_cstar(algebra: &MatrixStarAlgebra, alpha: &Symmetry, tol: f64) -> Result<OperatorCategory> {
    let twisted = twist_involution(algebra, alpha, tol)?;
    let (even, odd) = even_odd_split(algebra, alpha, tol)?;
    let a_plus = MatrixStarAlgebra::from_parts(even, twisted.involution().clone());
    linking_category(&a_plus, &odd, tol)
}

/// Objects `A+ = 2a` and `A− = 2a+1`; `Hom(As, Bt)` is the even part of
/// `Hom(A, B)` when `s = t` and the odd part otherwise. Returned with the
/// grading symmetry, as for [`krein_link`].
pub fn doubling(cat: &OperatorCategory, alpha: &Symmetry, settings: &Settings) -> Result<(OperatorCategory, Symmetry)> {
    require(verify_krein_cstar_category(cat, alpha, settings), "Krein C*-category check")?;
    let doubled = double_cstar(cat, alpha, settings.tol)?;
    let g = grading(doubled.dims());
    let out = doubled.with_involution(doubled.involution().twisted(&g));
    Ok((out, g))
}

pub(crate) fn double_cstar(cat: &OperatorCategory, alpha: &Symmetry, tol: f64) -> Result<OperatorCategory> {
    let n = cat.n_objects();
    let mut parts = Vec::with_capacity(n * n);
    for s in 0..n {
        for d in 0..n {
            parts.push(split_hom(cat.hom(s, d), alpha, s, d, tol)?);
        }
    }
    let objects: Vec<Object> = cat
        .objects()
        .iter()
        .flat_map(|o| [Object::new(format!("{}+", o.label), o.dim), Object::new(format!("{}-", o.label), o.dim)])
        .collect();
    let m = 2 * n;
    let mut homs = Vec::with_capacity(m * m);
    for s in 0..m {
        for d in 0..m {
            let (even, odd) = &parts[(s / 2) * n + d / 2];
            homs.push(if s % 2 == d % 2 { even.clone() } else { odd.clone() });
        }
    }
    let involution = Involution::Reindexed {
        map: (0..m).map(|a| a / 2).collect(),
        inner: Box::new(cat.involution().twisted(alpha)),
    };
    Ok(OperatorCategory::from_parts(objects, homs, involution))
}

/// Weakened isomorphism between `[A₊, A₋]` and `A^α`:
/// `Ψ(x₊ + x₋) = x₊ + x₋` is a linear bijection `A₊ ⊕ A₋ → A` that is
/// multiplicative on composable basis pairs and sends the involution of the
/// linking C*-category to the twisted involution of `A`.
pub fn isoenv_check(algebra: &MatrixStarAlgebra, alpha: &Symmetry, settings: &Settings) -> Result<Report> {
    require(verify_krein_cstar(algebra, alpha, settings), "Krein C*-algebra check")?;
    let link = link_cstar(algebra, alpha, settings.tol)?;
    let twisted = twist_involution(algebra, alpha, settings.tol)?;
    let mut report = Report::new();

    // Ψ on A₊ ⊕ A₋ = Hom(+,+) ⊕ Hom(+,−)
    let images: Vec<&ComplexMatrix> =
        link.hom(0, 0).elements().iter().chain(link.hom(0, 1).elements()).collect();
    let d = algebra.ambient_dim();
    let stacked = ComplexMatrix::from_fn(d * d, images.len().max(1), |r, c| {
        images.get(c).map_or(crate::matrix::ZERO, |m| m.get(r / d, r % d))
    });
    let rk = if images.is_empty() { 0 } else { rank(&stacked, settings.tol) };
    let defect = (rk.abs_diff(algebra.dim()) + images.len().abs_diff(algebra.dim())) as f64;
    report.record("bijective", defect, 0.0, || {
        Witness::new("Psi", None, format!("rank {rk}, domain {}, algebra {}", images.len(), algebra.dim()))
    });
    for x in &images {
        let r = algebra.basis().distance(x);
        report.record("image_in_algebra", r, settings.bound(x.frobenius()), || {
            Witness::new("Psi", Some((*x).clone()), "image outside A")
        });
    }

    for a in 0..2 {
        for b in 0..2 {
            for c in 0..2 {
                let target = link.hom(a, c);
                for (i, y) in link.hom(a, b).elements().iter().enumerate() {
                    for (j, x) in link.hom(b, c).elements().iter().enumerate() {
                        let ambient = x * y;
                        let composed = target.project(&ambient);
                        let r = composed.distance(&ambient);
                        report.record("multiplicative", r, settings.bound(ambient.frobenius()), || {
                            Witness::new(
                                format!("{} o {}", hom_label(b, c, j), hom_label(a, b, i)),
                                Some(ambient.clone()),
                                "composition differs from the product in A",
                            )
                        });
                    }
                }
            }
        }
    }
    for s in 0..2 {
        for t in 0..2 {
            for (k, x) in link.hom(s, t).elements().iter().enumerate() {
                let lhs = link.star(x, s, t);
                let rhs = twisted.star(x);
                report.record("involution", lhs.distance(&rhs), settings.bound(rhs.frobenius()), || {
                    Witness::new(hom_label(s, t, k), Some(x.clone()), "involutions disagree")
                });
            }
        }
    }
    Ok(report)
}
