//! JSON input documents: `{"version": 1, "kind": ..., "payload": ...}`.

use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::algebra::{Involution, LinearPiece, MatrixStarAlgebra, Symmetry};
use crate::category::{Object, OperatorCategory};
use crate::gns::CategoryState;
use crate::krein::KreinSpaceSpec;
use crate::matrix::{ComplexMatrix, C64, ONE, ZERO};

pub const VERSION: u32 = 1;

/// Problems with an input document. The message starts with the path of the
/// offending field.
#[derive(Debug, Clone, PartialEq)]
pub struct DocumentError(pub String);

impl std::fmt::Display for DocumentError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for DocumentError {}

fn err(path: &str, msg: impl std::fmt::Display) -> DocumentError {
    DocumentError(format!("{path}: {msg}"))
}

/// Row-major matrix with explicit shape; entries are `[re, im]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixDoc {
    pub shape: [usize; 2],
    pub rows: Vec<Vec<[f64; 2]>>,
}

impl MatrixDoc {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        let rows = (0..m.rows()).map(|i| (0..m.cols()).map(|j| [m.get(i, j).re, m.get(i, j).im]).collect()).collect();
        MatrixDoc { shape: [m.rows(), m.cols()], rows }
    }

    pub fn to_matrix(&self, path: &str) -> Result<ComplexMatrix, DocumentError> {
        let [r, c] = self.shape;
        if self.rows.len() != r {
            return Err(err(&format!("{path}.rows"), format!("expected {r} rows, found {}", self.rows.len())));
        }
        let mut entries = Vec::with_capacity(r * c);
        for (i, row) in self.rows.iter().enumerate() {
            if row.len() != c {
                return Err(err(&format!("{path}.rows[{i}]"), format!("expected {c} entries, found {}", row.len())));
            }
            entries.extend(row.iter().map(|&[re, im]| C64::new(re, im)));
        }
        ComplexMatrix::new(r, c, entries).map_err(|e| err(path, e))
    }
}

pub fn vector_doc(v: &[C64]) -> Vec<[f64; 2]> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

fn vector_from_doc(v: &[[f64; 2]]) -> Vec<C64> {
    v.iter().map(|&[re, im]| C64::new(re, im)).collect()
}

fn matrices(docs: &[MatrixDoc], path: &str) -> Result<Vec<ComplexMatrix>, DocumentError> {
    docs.iter().enumerate().map(|(i, m)| m.to_matrix(&format!("{path}[{i}]"))).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpacePayload {
    pub gram: MatrixDoc,
    /// Candidate fundamental symmetry to test.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symmetry: Option<MatrixDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum InvolutionDoc {
    Adjoint,
    Krein { gram: MatrixDoc },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum AlgebraSymmetryDoc {
    Identity,
    /// `x ↦ S x S⁻¹`.
    Ad { matrix: MatrixDoc },
    /// The linear map sending `basis[k]` to `images[k]`.
    Linear { basis: Vec<MatrixDoc>, images: Vec<MatrixDoc> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraPayload {
    pub ambient_dim: usize,
    #[serde(default)]
    pub generators: Vec<MatrixDoc>,
    pub involution: InvolutionDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symmetry: Option<AlgebraSymmetryDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObjectDoc {
    pub label: String,
    pub dim: usize,
    /// Indefinite form making the object a Kreĭn space.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gram: Option<MatrixDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomDoc {
    pub src: String,
    pub dst: String,
    pub generators: Vec<MatrixDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PieceDoc {
    pub src: String,
    pub dst: String,
    pub basis: Vec<MatrixDoc>,
    pub images: Vec<MatrixDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum CategorySymmetryDoc {
    Identity,
    /// `x ↦ S_B x S_A⁻¹`, one matrix per object.
    Ad { matrices: Vec<MatrixDoc> },
    Linear { pieces: Vec<PieceDoc> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CategoryPayload {
    pub objects: Vec<ObjectDoc>,
    /// Every hom-space is all matrices of the right shape.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub full: bool,
    #[serde(default)]
    pub homs: Vec<HomDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symmetry: Option<CategorySymmetryDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObjectVector {
    pub object: String,
    pub vector: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomValues {
    pub src: String,
    pub dst: String,
    pub coefficients: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomDensity {
    pub src: String,
    pub dst: String,
    pub matrix: MatrixDoc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Component {
    pub weight: f64,
    pub state: StateSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum StateSpec {
    Trace,
    /// Objects not listed use the first standard basis vector.
    Vector { vectors: Vec<ObjectVector> },
    /// Values on the hom basis; unlisted hom-spaces are zero.
    Values { entries: Vec<HomValues> },
    /// `ω(x) = trace(W† x)`; unlisted hom-spaces are zero.
    Densities { entries: Vec<HomDensity> },
    Convex { components: Vec<Component> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StatePayload {
    /// Path of the category document, relative to this file.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub category: Option<String>,
    pub state: StateSpec,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Document {
    Space(SpacePayload),
    Algebra(AlgebraPayload),
    Category(CategoryPayload),
    State(StatePayload),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Envelope {
    version: u32,
    kind: String,
    payload: Value,
}

fn typed<T: DeserializeOwned>(value: Value, prefix: &str) -> Result<T, DocumentError> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let inner = e.path().to_string();
        let path = if inner == "." { prefix.to_string() } else { format!("{prefix}.{inner}") };
        err(&path, e.inner())
    })
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Space(_) => "space",
            Document::Algebra(_) => "algebra",
            Document::Category(_) => "category",
            Document::State(_) => "state",
        }
    }

    pub fn parse(text: &str) -> Result<Self, DocumentError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let env: Envelope = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            err(if path == "." || path == "?" { "document" } else { &path }, e.inner())
        })?;
        if env.version != VERSION {
            return Err(err("version", format!("unsupported version {} (expected {VERSION})", env.version)));
        }
        Ok(match env.kind.as_str() {
            "space" => Document::Space(typed(env.payload, "payload")?),
            "algebra" => Document::Algebra(typed(env.payload, "payload")?),
            "category" => Document::Category(typed(env.payload, "payload")?),
            "state" => Document::State(typed(env.payload, "payload")?),
            other => return Err(err("kind", format!("unknown kind `{other}`"))),
        })
    }

    pub fn to_value(&self) -> Value {
        let payload = match self {
            Document::Space(p) => serde_json::to_value(p),
            Document::Algebra(p) => serde_json::to_value(p),
            Document::Category(p) => serde_json::to_value(p),
            Document::State(p) => serde_json::to_value(p),
        }
        .expect("payloads serialize");
        serde_json::json!({ "version": VERSION, "kind": self.kind(), "payload": payload })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_value()).expect("values serialize")
    }
}

/// A document read from disk, with its raw bytes for digests.
pub struct Loaded {
    pub path: PathBuf,
    pub bytes: Vec<u8>,
    pub document: Document,
}

pub fn load(path: &Path) -> Result<Loaded, DocumentError> {
    let bytes = std::fs::read(path).map_err(|e| err(&path.display().to_string(), e))?;
    let text = String::from_utf8(bytes.clone()).map_err(|e| err(&path.display().to_string(), e))?;
    let document = Document::parse(&text).map_err(|e| DocumentError(format!("{}: {}", path.display(), e.0)))?;
    Ok(Loaded { path: path.to_path_buf(), bytes, document })
}

impl SpacePayload {
    pub fn space(&self, tol: f64) -> Result<KreinSpaceSpec, crate::Error> {
        let gram = self.gram.to_matrix("payload.gram").map_err(|e| crate::Error::invalid(e.0))?;
        KreinSpaceSpec::new(gram, tol)
    }
}

impl AlgebraPayload {
    pub fn involution(&self, tol: f64) -> Result<Involution, DocumentError> {
        Ok(match &self.involution {
            InvolutionDoc::Adjoint => Involution::Adjoint,
            InvolutionDoc::Krein { gram } => {
                let g = gram.to_matrix("payload.involution.gram")?;
                Involution::Krein(vec![KreinSpaceSpec::new(g, tol).map_err(|e| err("payload.involution.gram", e))?])
            }
        })
    }

    pub fn algebra(&self, tol: f64) -> Result<MatrixStarAlgebra, DocumentError> {
        let gens = matrices(&self.generators, "payload.generators")?;
        let n = self.ambient_dim;
        for (i, g) in gens.iter().enumerate() {
            if g.shape() != (n, n) {
                return Err(err(&format!("payload.generators[{i}]"), format!("expected a {n}x{n} matrix")));
            }
        }
        MatrixStarAlgebra::from_generators(n, &gens, self.involution(tol)?, tol).map_err(|e| err("payload", e))
    }

    /// The declared symmetry, identity when absent.
    pub fn symmetry(&self, tol: f64) -> Result<Symmetry, DocumentError> {
        let path = "payload.symmetry";
        match &self.symmetry {
            None | Some(AlgebraSymmetryDoc::Identity) => Ok(Symmetry::Identity),
            Some(AlgebraSymmetryDoc::Ad { matrix }) => {
                let s = matrix.to_matrix(&format!("{path}.matrix"))?;
                Symmetry::conjugation(vec![s]).map_err(|e| err(&format!("{path}.matrix"), e))
            }
            Some(AlgebraSymmetryDoc::Linear { basis, images }) => {
                let b = matrices(basis, &format!("{path}.basis"))?;
                let im = matrices(images, &format!("{path}.images"))?;
                let piece = LinearPiece::new(0, 0, &b, &im, tol).map_err(|e| err(path, e))?;
                Ok(Symmetry::Linear(vec![piece]))
            }
        }
    }
}

impl CategoryPayload {
    fn index(&self, label: &str, path: &str) -> Result<usize, DocumentError> {
        self.objects.iter().position(|o| o.label == label).ok_or_else(|| err(path, format!("unknown object `{label}`")))
    }

    pub fn category(&self, tol: f64) -> Result<OperatorCategory, DocumentError> {
        let objects: Vec<Object> = self.objects.iter().map(|o| Object::new(o.label.clone(), o.dim)).collect();
        let involution = if self.objects.iter().any(|o| o.gram.is_some()) {
            let mut spaces = Vec::with_capacity(self.objects.len());
            for (i, o) in self.objects.iter().enumerate() {
                let path = format!("payload.objects[{i}].gram");
                spaces.push(match &o.gram {
                    None => KreinSpaceSpec::hilbert(o.dim),
                    Some(g) => KreinSpaceSpec::new(g.to_matrix(&path)?, tol).map_err(|e| err(&path, e))?,
                });
            }
            Involution::Krein(spaces)
        } else {
            Involution::Adjoint
        };
        if self.full {
            return OperatorCategory::full(objects, involution).map_err(|e| err("payload", e));
        }
        let mut gens = Vec::new();
        for (h, hom) in self.homs.iter().enumerate() {
            let src = self.index(&hom.src, &format!("payload.homs[{h}].src"))?;
            let dst = self.index(&hom.dst, &format!("payload.homs[{h}].dst"))?;
            for (k, g) in hom.generators.iter().enumerate() {
                let path = format!("payload.homs[{h}].generators[{k}]");
                let m = g.to_matrix(&path)?;
                if m.shape() != (objects[dst].dim, objects[src].dim) {
                    return Err(err(&path, format!("expected a {}x{} matrix", objects[dst].dim, objects[src].dim)));
                }
                gens.push((src, dst, m));
            }
        }
        OperatorCategory::from_generators(objects, &gens, involution, tol).map_err(|e| err("payload", e))
    }

    pub fn symmetry(&self, tol: f64) -> Result<Symmetry, DocumentError> {
        let path = "payload.symmetry";
        match &self.symmetry {
            None | Some(CategorySymmetryDoc::Identity) => Ok(Symmetry::Identity),
            Some(CategorySymmetryDoc::Ad { matrices: ms }) => {
                let by = matrices(ms, &format!("{path}.matrices"))?;
                if by.len() != self.objects.len() {
                    return Err(err(&format!("{path}.matrices"), "need one matrix per object"));
                }
                Symmetry::conjugation(by).map_err(|e| err(&format!("{path}.matrices"), e))
            }
            Some(CategorySymmetryDoc::Linear { pieces }) => {
                let mut out = Vec::with_capacity(pieces.len());
                for (i, p) in pieces.iter().enumerate() {
                    let pp = format!("{path}.pieces[{i}]");
                    let src = self.index(&p.src, &format!("{pp}.src"))?;
                    let dst = self.index(&p.dst, &format!("{pp}.dst"))?;
                    let b = matrices(&p.basis, &format!("{pp}.basis"))?;
                    let im = matrices(&p.images, &format!("{pp}.images"))?;
                    out.push(LinearPiece::new(src, dst, &b, &im, tol).map_err(|e| err(&pp, e))?);
                }
                Ok(Symmetry::Linear(out))
            }
        }
    }
}

impl StatePayload {
    /// Category document named by this state, resolved against `base`.
    pub fn category_path(&self, base: &Path) -> Option<PathBuf> {
        self.category.as_ref().map(|c| base.parent().unwrap_or(Path::new(".")).join(c))
    }
}

impl StateSpec {
    pub fn state(
        &self,
        payload: &CategoryPayload,
        cat: &OperatorCategory,
        tol: f64,
        path: &str,
    ) -> Result<CategoryState, DocumentError> {
        let n = cat.n_objects();
        match self {
            StateSpec::Trace => Ok(CategoryState::trace(cat)),
            StateSpec::Vector { vectors } => {
                let mut vs: Vec<Vec<C64>> = cat
                    .dims()
                    .iter()
                    .map(|&d| (0..d).map(|k| if k == 0 { ONE } else { ZERO }).collect())
                    .collect();
                for (i, v) in vectors.iter().enumerate() {
                    vs[payload.index(&v.object, &format!("{path}.vectors[{i}].object"))?] = vector_from_doc(&v.vector);
                }
                CategoryState::vector(cat, &vs, tol).map_err(|e| err(&format!("{path}.vectors"), e))
            }
            StateSpec::Values { entries } => {
                let mut values: Vec<Vec<C64>> = cat.homs().iter().map(|h| vec![ZERO; h.dim()]).collect();
                for (i, e) in entries.iter().enumerate() {
                    let p = format!("{path}.entries[{i}]");
                    let s = payload.index(&e.src, &format!("{p}.src"))?;
                    let d = payload.index(&e.dst, &format!("{p}.dst"))?;
                    values[s * n + d] = vector_from_doc(&e.coefficients);
                }
                CategoryState::from_values(cat, values).map_err(|e| err(&format!("{path}.entries"), e))
            }
            StateSpec::Densities { entries } => {
                let mut ds: Vec<ComplexMatrix> =
                    cat.homs().iter().map(|h| ComplexMatrix::zeros(h.rows(), h.cols())).collect();
                for (i, e) in entries.iter().enumerate() {
                    let p = format!("{path}.entries[{i}]");
                    let s = payload.index(&e.src, &format!("{p}.src"))?;
                    let d = payload.index(&e.dst, &format!("{p}.dst"))?;
                    ds[s * n + d] = e.matrix.to_matrix(&format!("{p}.matrix"))?;
                }
                CategoryState::from_densities(cat, &ds).map_err(|e| err(&format!("{path}.entries"), e))
            }
            StateSpec::Convex { components } => {
                let states = components
                    .iter()
                    .enumerate()
                    .map(|(i, c)| c.state.state(payload, cat, tol, &format!("{path}.components[{i}].state")))
                    .collect::<Result<Vec<_>, _>>()?;
                let weights: Vec<f64> = components.iter().map(|c| c.weight).collect();
                CategoryState::convex(&states, &weights, 1e-12).map_err(|e| err(&format!("{path}.components"), e))
            }
        }
    }
}
