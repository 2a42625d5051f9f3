//! Isometric representations as direct sums of GNS representations.

use crate::axioms::hom_label;
use crate::category::{verify_cstar_category, OperatorCategory, StarFunctor};
use crate::error::{Error, Result};
use crate::matrix::random::random_unit_vector;
use crate::matrix::spectral::{norm, top_right_singular_vector};
use crate::matrix::{ComplexMatrix, C64, ONE, ZERO};
use crate::report::{Report, Witness};
use crate::settings::Settings;

use super::construction::{gns, representation_checks, GnsRepresentation};
use super::state::CategoryState;

fn basis_vector(n: usize, k: usize) -> Vec<C64> {
    let mut v = vec![ZERO; n];
    v[k] = ONE;
    v
}

/// Vector states `ω_ξ(x) = ⟨ξ_B, x ξ_A⟩` with `ξ_A = M_A⁻¹ v_A` for unit
/// Hilbert-picture vectors `v_A`:
///
/// * one coordinate state per `k < max d_A`, with `v_A = e_{k mod d_A}`;
/// * per object, `count_per_object` states whose `v_A` is the top
///   right-singular vector of a diagonal basis element (random once those
///   run out), other objects at `e_0`.
///
/// The coordinate states alone already give an isometric direct sum.
pub fn vector_states(cat: &OperatorCategory, count_per_object: usize, settings: &Settings) -> Vec<CategoryState> {
    let n = cat.n_objects();
    let dims = cat.dims();
    let metric = cat.metric(settings.tol);
    let make = |vs: Vec<Vec<C64>>| {
        let ambient: Vec<Vec<C64>> = vs.iter().enumerate().map(|(a, v)| metric.vector_from_hilbert(v, a)).collect();
        CategoryState::vector(cat, &ambient, settings.tol).expect("unit vectors")
    };
    let mut out = Vec::new();
    let width = dims.iter().copied().max().unwrap_or(0);
    for k in 0..width {
        out.push(make(dims.iter().map(|&d| basis_vector(d, k % d)).collect()));
    }
    let mut rng = settings.rng();
    for a in 0..n {
        let diag = cat.hom(a, a).elements();
        for i in 0..count_per_object {
            let v = match diag.get(i) {
                Some(b) => top_right_singular_vector(&metric.to_hilbert(b, a, a)),
                None => random_unit_vector(dims[a], &mut rng),
            };
            let mut vs: Vec<Vec<C64>> = dims.iter().map(|&d| basis_vector(d, 0)).collect();
            vs[a] = v;
            out.push(make(vs));
        }
    }
    out
}

/// Block-diagonal sum of representations, summands in the given order.
/// The cyclic vectors are `⊕ ξ_i / √N`, which reproduce the average state.
pub fn direct_sum(cat: &OperatorCategory, parts: &[GnsRepresentation]) -> Result<GnsRepresentation> {
    let n = cat.n_objects();
    if parts.is_empty() {
        return Err(Error::invalid("direct sum of no representations"));
    }
    let dims: Vec<usize> = (0..n).map(|a| parts.iter().map(|p| p.dims[a]).sum()).collect();
    let pair_dims: Vec<usize> = (0..n * n).map(|i| parts.iter().map(|p| p.pair_dims[i]).sum()).collect();
    let mut images = Vec::with_capacity(n * n);
    for s in 0..n {
        for d in 0..n {
            let imgs = (0..cat.hom(s, d).dim())
                .map(|k| {
                    let mut out = ComplexMatrix::zeros(dims[d], dims[s]);
                    let (mut r, mut c) = (0, 0);
                    for p in parts {
                        out.set_block(r, c, &p.functor.images(s, d)[k]);
                        r += p.dims[d];
                        c += p.dims[s];
                    }
                    out
                })
                .collect();
            images.push(imgs);
        }
    }
    let scale = 1.0 / (parts.len() as f64).sqrt();
    let cyclic =
        (0..n).map(|a| parts.iter().flat_map(|p| p.cyclic[a].iter().map(|z| z * scale)).collect()).collect();
    let functor = StarFunctor::new(cat, (0..n).collect(), dims.clone(), images)?;
    Ok(GnsRepresentation { dims, pair_dims, cyclic, functor, report: Report::new() })
}

/// Isometric representation of a C*-category: the direct sum of the GNS
/// representations of [`vector_states`] (one extra state per object).
/// Certifies `|‖π(x)‖ − ‖x‖| ≤ tol (1 + ‖x‖)` on every basis element and on
/// `settings.samples` random elements, the norm of `x` being the category
/// metric.
pub fn gelfand_naimark(cat: &OperatorCategory, settings: &Settings) -> Result<GnsRepresentation> {
    let check = verify_cstar_category(cat, settings);
    if !check.passed() {
        return Err(Error::Certificate { what: "C*-category check".into(), report: Box::new(check) });
    }
    let states = vector_states(cat, 1, settings);
    let parts = states.iter().map(|w| gns(cat, w, settings)).collect::<Result<Vec<_>>>()?;
    let mut rep = direct_sum(cat, &parts)?;
    let mut report = Report::new();
    representation_checks(&mut report, cat, &rep.functor, settings);
    let metric = cat.metric(settings.tol);
    let mut isometry = |label: String, x: &ComplexMatrix, s: usize, d: usize| {
        let nx = metric.norm(x, s, d);
        let np = norm(&rep.apply(x, s, d));
        report.record("isometry", (np - nx).abs(), settings.bound(nx), || {
            Witness::new(label, Some(x.clone()), format!("|pi(x)| = {np:.12e}, |x| = {nx:.12e}"))
        });
    };
    for (s, d, k, b) in cat.family().basis_elements() {
        isometry(hom_label(s, d, k), b, s, d);
    }
    let mut rng = settings.rng();
    for (i, (s, d, x)) in cat.family().samples(settings.samples, &mut rng).into_iter().enumerate() {
        isometry(format!("sample {i} in Hom({s},{d})"), &x, s, d);
    }
    if !report.passed() {
        return Err(Error::Certificate { what: "isometric representation".into(), report: Box::new(report) });
    }
    rep.report = report;
    Ok(rep)
}
