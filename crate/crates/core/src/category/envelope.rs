//! The matrix C*-envelope of a finite operator category and *-functors.

use crate::algebra::{Involution, MatrixStarAlgebra, Symmetry};
use crate::axioms::hom_label;
use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, SubspaceBasis};
use crate::report::{Report, Witness};
use crate::settings::Settings;

use super::operator::OperatorCategory;

/// Linear maps `Hom(A, B) → Hom(φA, φB)` given by the images of each source
/// hom basis element.
#[derive(Debug, Clone, PartialEq)]
pub struct StarFunctor {
    pub object_map: Vec<usize>,
    /// Hilbert dimension of each target object.
    pub target_dims: Vec<usize>,
    source: Vec<SubspaceBasis>,
    images: Vec<Vec<ComplexMatrix>>,
}

impl StarFunctor {
    /// `images[src * n + dst][k]` is the image of the `k`-th basis element
    /// of `Hom(src, dst)` in `source`.
    pub fn new(
        source: &OperatorCategory,
        object_map: Vec<usize>,
        target_dims: Vec<usize>,
        images: Vec<Vec<ComplexMatrix>>,
    ) -> Result<Self> {
        let n = source.n_objects();
        if object_map.len() != n {
            return Err(Error::shape(format!("object map has {} entries for {n} objects", object_map.len())));
        }
        if object_map.iter().any(|&t| t >= target_dims.len()) {
            return Err(Error::invalid("object map refers to a missing target object"));
        }
        if images.len() != n * n {
            return Err(Error::shape(format!("expected images for {} hom-spaces", n * n)));
        }
        for (idx, (h, im)) in source.homs().iter().zip(&images).enumerate() {
            let shape = (target_dims[object_map[idx % n]], target_dims[object_map[idx / n]]);
            if let Some(k) = im.iter().position(|x| x.shape() != shape) {
                return Err(Error::shape(format!(
                    "image {k} of Hom({},{}) must be {}x{}",
                    idx / n,
                    idx % n,
                    shape.0,
                    shape.1
                )));
            }
            if h.dim() != im.len() {
                return Err(Error::shape(format!(
                    "Hom({},{}) has {} basis elements but {} images",
                    idx / n,
                    idx % n,
                    h.dim(),
                    im.len()
                )));
            }
        }
        Ok(StarFunctor { object_map, target_dims, source: source.homs().to_vec(), images })
    }

    /// Images computed by `f(x, src, dst)` on every basis element.
    pub fn from_fn(
        source: &OperatorCategory,
        object_map: Vec<usize>,
        target_dims: Vec<usize>,
        f: impl Fn(&ComplexMatrix, usize, usize) -> ComplexMatrix,
    ) -> Result<Self> {
        let n = source.n_objects();
        let images = (0..n * n)
            .map(|idx| source.homs()[idx].elements().iter().map(|b| f(b, idx / n, idx % n)).collect())
            .collect();
        StarFunctor::new(source, object_map, target_dims, images)
    }

    pub fn identity(cat: &OperatorCategory) -> Self {
        StarFunctor::from_fn(cat, (0..cat.n_objects()).collect(), cat.dims().to_vec(), |x, _, _| x.clone())
            .expect("shapes match")
    }

    /// A symmetry viewed as an identity-on-objects functor.
    pub fn from_symmetry(cat: &OperatorCategory, alpha: &Symmetry) -> Self {
        StarFunctor::from_fn(cat, (0..cat.n_objects()).collect(), cat.dims().to_vec(), |x, s, d| alpha.apply(x, s, d))
            .expect("shapes match")
    }

    fn n(&self) -> usize {
        self.object_map.len()
    }

    /// `φ(x)` for `x ∈ Hom(src, dst)`.
    pub fn apply(&self, x: &ComplexMatrix, src: usize, dst: usize) -> ComplexMatrix {
        let idx = src * self.n() + dst;
        let coords = self.source[idx].coordinates(x);
        let rows = self.target_dims[self.object_map[dst]];
        let cols = self.target_dims[self.object_map[src]];
        let mut out = ComplexMatrix::zeros(rows, cols);
        for (c, img) in coords.iter().zip(&self.images[idx]) {
            out.axpy(*c, img);
        }
        out
    }

    pub fn images(&self, src: usize, dst: usize) -> &[ComplexMatrix] {
        &self.images[src * self.n() + dst]
    }
}

/// Images lie in the target hom-spaces; `φ` is multiplicative on composable
/// basis pairs, intertwines the involutions and, if `unital`, sends units to
/// units.
pub fn verify_functor(
    phi: &StarFunctor,
    source: &OperatorCategory,
    target: &OperatorCategory,
    unital: bool,
    settings: &Settings,
) -> Report {
    let mut report = Report::new();
    let n = source.n_objects();
    let m = &phi.object_map;
    if m.iter().any(|&t| t >= target.n_objects()) {
        report.flag("object_map", false, || Witness::new("object map", None, "refers to a missing target object"));
        return report;
    }
    for s in 0..n {
        for d in 0..n {
            for (k, (b, img)) in source.hom(s, d).elements().iter().zip(phi.images(s, d)).enumerate() {
                let th = target.hom(m[s], m[d]);
                let shape_ok = img.shape() == (th.rows(), th.cols());
                let r = if shape_ok { th.distance(img) } else { f64::INFINITY };
                report.record("images_in_target", r, settings.bound(img.frobenius()), || {
                    Witness::new(hom_label(s, d, k), Some(b.clone()), "image outside the target hom-space")
                });
                if !shape_ok {
                    return report;
                }
                let lhs = phi.apply(&source.star(b, s, d), d, s);
                let rhs = target.star(img, m[s], m[d]);
                report.record("involution", lhs.distance(&rhs), settings.bound(rhs.frobenius()), || {
                    Witness::new(hom_label(s, d, k), Some(b.clone()), "phi(x*) != phi(x)*")
                });
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for (i, y) in source.hom(a, b).elements().iter().enumerate() {
                    for (j, x) in source.hom(b, c).elements().iter().enumerate() {
                        let lhs = phi.apply(&(x * y), a, c);
                        let rhs = &phi.images(b, c)[j] * &phi.images(a, b)[i];
                        report.record("multiplicative", lhs.distance(&rhs), settings.bound(rhs.frobenius()), || {
                            Witness::new(
                                format!("{} o {}", hom_label(b, c, j), hom_label(a, b, i)),
                                Some(x * y),
                                "phi(xy) != phi(x) phi(y)",
                            )
                        });
                    }
                }
            }
        }
    }
    if unital {
        for a in 0..n {
            let one = ComplexMatrix::identity(source.dims()[a]);
            let img = phi.apply(&one, a, a);
            let r = img.distance(&ComplexMatrix::identity(img.rows()));
            report.record("unital", r, settings.bound(1.0), || {
                Witness::new(format!("object {a}"), Some(one.clone()), "phi(1) != 1")
            });
        }
    }
    report
}

fn offsets(dims: &[usize]) -> Vec<usize> {
    dims.iter()
        .scan(0, |acc, &d| {
            let o = *acc;
            *acc += d;
            Some(o)
        })
        .collect()
}

/// Embeds `x ∈ Hom(src, dst)` as block `(dst, src)` of a `Σd × Σd` matrix.
fn embed(x: &ComplexMatrix, src: usize, dst: usize, dims: &[usize]) -> ComplexMatrix {
    let off = offsets(dims);
    let n: usize = dims.iter().sum();
    let mut out = ComplexMatrix::zeros(n, n);
    out.set_block(off[dst], off[src], x);
    out
}

/// Block matrix algebra on `⊕ H_A` whose `(i, j)` block space is
/// `Hom(A_j, A_i)`, with the block embedding `ι` as a functor into it.
pub fn envelope(cat: &OperatorCategory) -> (MatrixStarAlgebra, StarFunctor) {
    let dims = cat.dims();
    let n = cat.n_objects();
    let total: usize = dims.iter().sum();
    let mut basis = Vec::with_capacity(cat.total_dim());
    for s in 0..n {
        for d in 0..n {
            basis.extend(cat.hom(s, d).elements().iter().map(|b| embed(b, s, d, dims)));
        }
    }
    let basis = SubspaceBasis::from_orthonormal(total, total, basis);
    let involution = Involution::Blockwise { dims: dims.to_vec(), inner: Box::new(cat.involution().clone()) };
    let algebra = MatrixStarAlgebra::from_parts(basis, involution);
    let iota = StarFunctor::from_fn(cat, vec![0; n], vec![total], |x, s, d| embed(x, s, d, dims)).expect("shapes match");
    (algebra, iota)
}

/// The homomorphism `E(φ)` between envelopes induced by a *-functor with
/// injective object map, as a functor of one-object categories, together
/// with its certificate: `E(φ)∘ι_C = ι_D∘φ` on every hom basis element,
/// multiplicativity and involution on envelope basis pairs, and unitality
/// when the object map is bijective.
pub fn envelope_functor(
    phi: &StarFunctor,
    source: &OperatorCategory,
    target: &OperatorCategory,
    settings: &Settings,
) -> Result<(StarFunctor, Report)> {
    let n = source.n_objects();
    let mut seen = vec![false; target.n_objects()];
    for &t in &phi.object_map {
        if t >= seen.len() || std::mem::replace(&mut seen[t], true) {
            return Err(Error::invalid("envelope functor needs an injective object map"));
        }
    }
    let bijective = seen.iter().all(|&s| s);
    let check = verify_functor(phi, source, target, false, settings);
    if !check.passed() {
        return Err(Error::invalid(format!("functor is not a *-functor ({})", check.failures().join(", "))));
    }

    let (env_c, iota_c) = envelope(source);
    let (env_d, iota_d) = envelope(target);
    let src_dims = source.dims();
    let off = offsets(src_dims);
    let m = &phi.object_map;
    let e_phi = |big: &ComplexMatrix| -> ComplexMatrix {
        let total: usize = target.dims().iter().sum();
        let mut out = ComplexMatrix::zeros(total, total);
        for s in 0..n {
            for d in 0..n {
                let block = big.block(off[d], off[s], src_dims[d], src_dims[s]);
                let img = phi.apply(&block, s, d);
                out = &out + &embed(&img, m[s], m[d], target.dims());
            }
        }
        out
    };
    let env_c_cat = OperatorCategory::from_algebra(&env_c);
    let env_d_cat = OperatorCategory::from_algebra(&env_d);
    let e = StarFunctor::from_fn(&env_c_cat, vec![0], vec![env_d.ambient_dim()], |x, _, _| e_phi(x))?;

    let mut report = Report::new();
    for s in 0..n {
        for d in 0..n {
            for (k, b) in source.hom(s, d).elements().iter().enumerate() {
                let lhs = e.apply(&iota_c.apply(b, s, d), 0, 0);
                let rhs = iota_d.apply(&phi.apply(b, s, d), m[s], m[d]);
                report.record("factorization", lhs.distance(&rhs), settings.bound(rhs.frobenius()), || {
                    Witness::new(hom_label(s, d, k), Some(b.clone()), "E(phi) iota != iota phi")
                });
            }
        }
    }

    // Envelope basis elements are embedded hom basis elements, in hom order.
    // Each image is checked to sit in its target block, which together with
    // injectivity of the object map makes non-composable products vanish on
    // both sides, so multiplicativity is only computed on composable pairs.
    let tgt_dims = target.dims();
    let tgt_off = offsets(tgt_dims);
    let mut hom = Report::new();
    let mut blocks: Vec<Vec<ComplexMatrix>> = Vec::with_capacity(n * n);
    let mut images = e.images(0, 0).iter();
    for s in 0..n {
        for d in 0..n {
            let mut row = Vec::new();
            for (k, b) in source.hom(s, d).elements().iter().enumerate() {
                let img = images.next().expect("one image per envelope basis element");
                let (r0, c0, rows, cols) = (tgt_off[m[d]], tgt_off[m[s]], tgt_dims[m[d]], tgt_dims[m[s]]);
                let blk = img.block(r0, c0, rows, cols);
                let mut rest = img.clone();
                rest.set_block(r0, c0, &ComplexMatrix::zeros(rows, cols));
                let bound = settings.bound(img.frobenius());
                let at = |note: &str| Witness::new(hom_label(s, d, k), Some(b.clone()), note);
                hom.record("images_in_target", env_d.basis().distance(img), bound, || at("image outside the target envelope"));
                hom.record("support", rest.frobenius(), bound, || at("image leaves its block"));
                let lhs = e.apply(&env_c_cat.star(&iota_c.apply(b, s, d), 0, 0), 0, 0);
                let rhs = env_d_cat.star(img, 0, 0);
                hom.record("involution", lhs.distance(&rhs), settings.bound(rhs.frobenius()), || at("E(x*) != E(x)*"));
                row.push(blk);
            }
            blocks.push(row);
        }
    }
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for (i, y) in source.hom(a, b).elements().iter().enumerate() {
                    for (j, x) in source.hom(b, c).elements().iter().enumerate() {
                        let lhs = e_phi(&embed(&(x * y), a, c, src_dims));
                        let prod = &blocks[b * n + c][j] * &blocks[a * n + b][i];
                        let rhs = embed(&prod, m[a], m[c], tgt_dims);
                        hom.record("multiplicative", lhs.distance(&rhs), settings.bound(rhs.frobenius()), || {
                            Witness::new(
                                format!("{} o {}", hom_label(b, c, j), hom_label(a, b, i)),
                                Some(x * y),
                                "E(xy) != E(x) E(y)",
                            )
                        });
                    }
                }
            }
        }
    }
    if bijective {
        let total: usize = src_dims.iter().sum();
        let img = e_phi(&ComplexMatrix::identity(total));
        let r = img.distance(&ComplexMatrix::identity(img.rows()));
        hom.record("unital", r, settings.bound(1.0), || Witness::new("envelope unit", None, "E(1) != 1"));
    }
    report.merge("homomorphism", hom);
    Ok((e, report))
}
