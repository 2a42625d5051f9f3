//! States on operator categories.

use crate::axioms::hom_label;
use crate::category::OperatorCategory;
use crate::error::{Error, Result};
use crate::matrix::spectral::herm_eig_unchecked;
use crate::matrix::{check_vector_len, dot, ComplexMatrix, C64, ZERO};
use crate::report::{Report, Witness};
use crate::settings::Settings;

/// A family of linear functionals, one per hom-space, stored as the values
/// `ω(b_k)` on the hom basis (`values[src * n + dst][k]`).
#[derive(Debug, Clone, PartialEq)]
pub struct CategoryState {
    values: Vec<Vec<C64>>,
}

impl CategoryState {
    pub fn from_values(cat: &OperatorCategory, values: Vec<Vec<C64>>) -> Result<Self> {
        let n = cat.n_objects();
        if values.len() != n * n {
            return Err(Error::shape(format!("state has {} coefficient vectors for {} hom-spaces", values.len(), n * n)));
        }
        for (idx, v) in values.iter().enumerate() {
            check_vector_len(v, cat.homs()[idx].dim())
                .map_err(|e| Error::shape(format!("Hom({},{}): {e}", idx / n, idx % n)))?;
        }
        Ok(CategoryState { values })
    }

    /// `ω(x) = trace(W† x)` with one density `W` per hom-space.
    pub fn from_densities(cat: &OperatorCategory, densities: &[ComplexMatrix]) -> Result<Self> {
        let n = cat.n_objects();
        if densities.len() != n * n {
            return Err(Error::shape(format!("expected {} densities, got {}", n * n, densities.len())));
        }
        let mut values = Vec::with_capacity(n * n);
        for (idx, w) in densities.iter().enumerate() {
            let h = &cat.homs()[idx];
            w.expect_shape(h.rows(), h.cols(), &format!("density for Hom({},{})", idx / n, idx % n))?;
            values.push(h.elements().iter().map(|b| w.inner(b)).collect());
        }
        Ok(CategoryState { values })
    }

    /// `ω(x) = ⟨ξ_B, x ξ_A⟩` for `x ∈ Hom(A, B)`, the inner product being
    /// the positive form of the category metric. Each `ξ_A` is rescaled to
    /// unit length.
    pub fn vector(cat: &OperatorCategory, vectors: &[Vec<C64>], tol: f64) -> Result<Self> {
        let n = cat.n_objects();
        if vectors.len() != n {
            return Err(Error::shape(format!("expected {n} vectors, got {}", vectors.len())));
        }
        let metric = cat.metric(tol);
        let forms: Vec<ComplexMatrix> = (0..n).map(|a| metric.positive_form(a)).collect();
        let mut unit = Vec::with_capacity(n);
        for (a, v) in vectors.iter().enumerate() {
            check_vector_len(v, cat.dims()[a]).map_err(|e| Error::shape(format!("vector for object {a}: {e}")))?;
            let len = dot(v, &forms[a].apply(v)).re.max(0.0).sqrt();
            if len <= tol {
                return Err(Error::invalid(format!("vector for object {a} is zero")));
            }
            unit.push(v.iter().map(|z| z / len).collect::<Vec<_>>());
        }
        let mut values = Vec::with_capacity(n * n);
        for s in 0..n {
            for d in 0..n {
                let left = forms[d].apply(&unit[d]);
                values.push(cat.hom(s, d).elements().iter().map(|b| dot(&left, &b.apply(&unit[s]))).collect());
            }
        }
        Ok(CategoryState { values })
    }

    /// `trace(x) / d_A` on `Hom(A, A)` and zero between distinct objects.
    pub fn trace(cat: &OperatorCategory) -> Self {
        let n = cat.n_objects();
        let mut values = Vec::with_capacity(n * n);
        for s in 0..n {
            for d in 0..n {
                let h = cat.hom(s, d);
                values.push(if s == d {
                    let scale = 1.0 / cat.dims()[s] as f64;
                    h.elements().iter().map(|b| b.trace() * scale).collect()
                } else {
                    vec![ZERO; h.dim()]
                });
            }
        }
        CategoryState { values }
    }

    /// `Σ w_i ω_i`; weights must be non-negative and sum to one.
    pub fn convex(states: &[CategoryState], weights: &[f64], tol: f64) -> Result<Self> {
        if states.is_empty() || states.len() != weights.len() {
            return Err(Error::shape("need one weight per state and at least one state"));
        }
        if weights.iter().any(|&w| !w.is_finite() || w < -tol) || (weights.iter().sum::<f64>() - 1.0).abs() > tol {
            return Err(Error::invalid("convex weights must be non-negative and sum to 1"));
        }
        let shape: Vec<usize> = states[0].values.iter().map(Vec::len).collect();
        if states.iter().any(|s| s.values.iter().map(Vec::len).ne(shape.iter().copied())) {
            return Err(Error::shape("states belong to different categories"));
        }
        let values = shape
            .iter()
            .enumerate()
            .map(|(idx, &len)| {
                (0..len).map(|k| states.iter().zip(weights).map(|(s, &w)| s.values[idx][k] * w).sum()).collect()
            })
            .collect();
        Ok(CategoryState { values })
    }

    pub fn values(&self) -> &[Vec<C64>] {
        &self.values
    }

    pub(crate) fn matches(&self, cat: &OperatorCategory) -> Result<()> {
        CategoryState::from_values(cat, self.values.clone()).map(|_| ())
    }

    /// The density `W` with `ω(x) = trace(W† x)` on `Hom(src, dst)`.
    pub fn density(&self, cat: &OperatorCategory, src: usize, dst: usize) -> ComplexMatrix {
        let h = cat.hom(src, dst);
        let mut w = ComplexMatrix::zeros(h.rows(), h.cols());
        for (v, b) in self.values[src * cat.n_objects() + dst].iter().zip(h.elements()) {
            w.axpy(v.conj(), b);
        }
        w
    }

    pub fn eval(&self, cat: &OperatorCategory, x: &ComplexMatrix, src: usize, dst: usize) -> C64 {
        let coords = cat.hom(src, dst).coordinates(x);
        coords.iter().zip(&self.values[src * cat.n_objects() + dst]).map(|(c, v)| c * v).sum()
    }
}

/// Rows of the GNS space at object `B`: every basis element of every
/// `Hom(C, B)`, as `(C, k)`.
pub(crate) fn row_space(cat: &OperatorCategory, b: usize) -> Vec<(usize, usize)> {
    (0..cat.n_objects()).flat_map(|c| (0..cat.hom(c, b).dim()).map(move |k| (c, k))).collect()
}

/// `G[(C,k),(C',l)] = ω(y_k* ∘ z_l)` over [`row_space`] for object `b`.
pub(crate) fn gram(cat: &OperatorCategory, omega: &CategoryState, b: usize) -> ComplexMatrix {
    let n = cat.n_objects();
    let rows = row_space(cat, b);
    // ω(Y z) = Σ_pj (Yᵀ W̄)_pj z_pj for the density W of Hom(C', C)
    let densities: Vec<ComplexMatrix> =
        (0..n * n).map(|idx| omega.density(cat, idx / n, idx % n).conjugate()).collect();
    let mut q = Vec::with_capacity(rows.len());
    for &(c, k) in &rows {
        let y_star = cat.star(&cat.hom(c, b).elements()[k], c, b);
        q.push((0..n).map(|c2| &y_star.transpose() * &densities[c2 * n + c]).collect::<Vec<_>>());
    }
    ComplexMatrix::from_fn(rows.len(), rows.len(), |i, j| {
        let (c2, l) = rows[j];
        q[i][c2].iter().zip(cat.hom(c2, b).elements()[l].iter()).map(|(a, z)| a * z).sum()
    })
}

/// Hermiticity, normalization and positivity of `ω`. Positivity is checked
/// on each hom-space Gram matrix and on the Gram matrix of the whole row
/// space `⊕_C Hom(C, B)` at every object `B`.
pub fn verify_state(cat: &OperatorCategory, omega: &CategoryState, settings: &Settings) -> Result<Report> {
    omega.matches(cat)?;
    let n = cat.n_objects();
    let mut report = Report::new();
    for s in 0..n {
        for d in 0..n {
            for (k, b) in cat.hom(s, d).elements().iter().enumerate() {
                let lhs = omega.eval(cat, &cat.star(b, s, d), d, s);
                let rhs = omega.values[s * n + d][k].conj();
                report.record("hermitian", (lhs - rhs).norm(), settings.bound(rhs.norm()), || {
                    Witness::new(hom_label(s, d, k), Some(b.clone()), format!("w(x*) = {lhs} but conj w(x) = {rhs}"))
                });
            }
        }
    }
    for a in 0..n {
        let one = ComplexMatrix::identity(cat.dims()[a]);
        let v = omega.eval(cat, &one, a, a);
        report.record("normalized", (v - 1.0).norm(), settings.tol, || {
            Witness::new(format!("object {a}"), Some(one.clone()), format!("w(1) = {v}"))
        });
    }
    for b in 0..n {
        let rows = row_space(cat, b);
        if rows.is_empty() {
            continue;
        }
        let g = gram(cat, omega, b);
        let mut start = 0;
        for c in 0..n {
            let len = cat.hom(c, b).dim();
            if len > 0 {
                let block = g.block(start, start, len, len);
                psd(&mut report, "positive", &block, settings, |v| {
                    (format!("Hom({c},{b})"), cat.hom(c, b).combine(v))
                });
            }
            start += len;
        }
        psd(&mut report, "positive_block", &g, settings, |v| {
            let (c, _) = rows[v.iter().enumerate().fold((0, 0.0), |acc, (i, z)| if z.norm() > acc.1 { (i, z.norm()) } else { acc }).0];
            let coords: Vec<C64> = rows.iter().zip(v).filter(|((cc, _), _)| *cc == c).map(|(_, z)| *z).collect();
            (format!("row space of object {b}, dominant part in Hom({c},{b})"), cat.hom(c, b).combine(&coords))
        });
    }
    Ok(report)
}

fn psd(
    report: &mut Report,
    name: &str,
    g: &ComplexMatrix,
    settings: &Settings,
    witness: impl FnOnce(&[C64]) -> (String, ComplexMatrix),
) {
    let herm = (g - &g.adjoint()).frobenius();
    let eig = herm_eig_unchecked(g);
    let scale = eig.max().abs().max(eig.min().abs());
    let residual = herm.max(-eig.min());
    report.record(name, residual, settings.bound(scale), || {
        let (location, x) = witness(&eig.vector(0));
        Witness::new(location, Some(x), format!("w(x*x) = {:.6e} < 0", eig.min()))
    });
}
