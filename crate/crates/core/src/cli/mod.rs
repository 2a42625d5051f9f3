//! The `kreinlab` command line: read documents, run one construction or
//! check, write a key-sorted JSON report.
//!
//! Exit status is 0 when every check passes, 1 when a check fails and 2 for
//! unreadable input or usage errors.

pub mod document;
mod output;

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::algebra::{even_odd_split, twist_involution, verify_krein_cstar, MatrixStarAlgebra, Symmetry};
use crate::category::{
    doubling, envelope, krein_link, verify_cstar_category, verify_functor, verify_krein_cstar_category,
    OperatorCategory,
};
use crate::error::Error;
use crate::gns::{gns, null_ideal_check, represent_krein_algebra, represent_krein_category, verify_state, KreinRepresentation};
use crate::krein::{canonical_decomposition, krein_adjoint, symmetry_check, KreinSpaceSpec};
use crate::matrix::random::random_vector;
use crate::matrix::spectral::norm;
use crate::report::{Report, Witness};
use crate::settings::{Settings, DEFAULT_SAMPLES, DEFAULT_SEED, DEFAULT_TOL};

use document::{load, vector_doc, CategoryPayload, Document, DocumentError, Loaded, MatrixDoc};
pub use output::inputs_digest;
use output::{emit, number, render, Outcome};

#[derive(Debug, Parser)]
#[command(name = "kreinlab", version, about = "Checks and constructions for Krein spaces, Krein C*-algebras and C*-categories")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Args)]
struct Common {
    /// Relative tolerance for every residual.
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Number of random samples per check.
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: usize,
    /// Seed for all random sampling.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Write the report here instead of standard output.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Record wall-clock duration in the report (breaks byte-identical reruns).
    #[arg(long)]
    timing: bool,
}

#[derive(Debug, Clone, Args)]
struct Input {
    #[arg(long)]
    input: PathBuf,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Validate a Gram form, report its signature and optionally test a symmetry.
    CheckSpace(Input),
    /// Canonical fundamental decomposition of a Kreĭn space.
    Decompose(Input),
    /// Kreĭn adjoint of an operator between two spaces.
    Adjoint {
        /// Domain space.
        #[arg(long)]
        input: PathBuf,
        /// Codomain space (defaults to the domain).
        #[arg(long)]
        codomain: Option<PathBuf>,
        /// Operator as a bare matrix object `{"shape": .., "rows": ..}`.
        #[arg(long)]
        operator: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Kreĭn C*-algebra axioms for the declared symmetry.
    CheckAlgebra(Input),
    /// Even and odd parts under the symmetry.
    Split(Input),
    /// The twisted involution `x ↦ α(x*)`.
    Twist(Input),
    /// The linking category `[A₊, A₋]` of a Kreĭn C*-algebra.
    Link(Input),
    /// Block matrix envelope of a category.
    Envelope(Input),
    /// C*-category axioms.
    CheckCategory(Input),
    /// Kreĭn C*-category axioms for the declared symmetry.
    CheckKreinCategory(Input),
    /// State axioms.
    CheckState {
        #[arg(long)]
        state: PathBuf,
        /// Overrides the category named inside the state document.
        #[arg(long)]
        category: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// GNS representation of a state.
    Gns {
        #[arg(long)]
        state: PathBuf,
        #[arg(long)]
        category: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Faithful covariant representation of a Kreĭn C*-algebra on a Kreĭn space.
    RepresentAlgebra(Input),
    /// Faithful covariant representation of a Kreĭn C*-category on Kreĭn spaces.
    RepresentCategory(Input),
    /// Doubling of a Kreĭn C*-category.
    Double(Input),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::CheckSpace(_) => "check-space",
            Command::Decompose(_) => "decompose",
            Command::Adjoint { .. } => "adjoint",
            Command::CheckAlgebra(_) => "check-algebra",
            Command::Split(_) => "split",
            Command::Twist(_) => "twist",
            Command::Link(_) => "link",
            Command::Envelope(_) => "envelope",
            Command::CheckCategory(_) => "check-category",
            Command::CheckKreinCategory(_) => "check-krein-category",
            Command::CheckState { .. } => "check-state",
            Command::Gns { .. } => "gns",
            Command::RepresentAlgebra(_) => "represent-algebra",
            Command::RepresentCategory(_) => "represent-category",
            Command::Double(_) => "double",
        }
    }

    fn common(&self) -> &Common {
        match self {
            Command::CheckSpace(i)
            | Command::Decompose(i)
            | Command::CheckAlgebra(i)
            | Command::Split(i)
            | Command::Twist(i)
            | Command::Link(i)
            | Command::Envelope(i)
            | Command::CheckCategory(i)
            | Command::CheckKreinCategory(i)
            | Command::RepresentAlgebra(i)
            | Command::RepresentCategory(i)
            | Command::Double(i) => &i.common,
            Command::Adjoint { common, .. } | Command::CheckState { common, .. } | Command::Gns { common, .. } => common,
        }
    }
}

/// Input problems, reported with exit status 2.
#[derive(Debug)]
struct InputError(String);

impl From<DocumentError> for InputError {
    fn from(e: DocumentError) -> Self {
        InputError(e.0)
    }
}

/// Library errors: certificates become failing reports, the rest are input
/// problems.
fn outcome_of(e: Error) -> Result<Outcome, InputError> {
    match e {
        Error::Certificate { what, report } => Ok(Outcome::new(*report).with("error", json!(what))),
        other => Err(InputError(other.to_string())),
    }
}

fn lib<T>(r: crate::Result<T>) -> Result<Result<T, Outcome>, InputError> {
    match r {
        Ok(v) => Ok(Ok(v)),
        Err(e) => outcome_of(e).map(Err),
    }
}

macro_rules! attempt {
    ($e:expr) => {
        match lib($e)? {
            Ok(v) => v,
            Err(outcome) => return Ok(outcome),
        }
    };
}

struct Inputs {
    loaded: Vec<Vec<u8>>,
}

impl Inputs {
    fn load(&mut self, path: &Path) -> Result<Loaded, InputError> {
        let l = load(path)?;
        self.loaded.push(l.bytes.clone());
        Ok(l)
    }

    fn space(&mut self, path: &Path, tol: f64) -> Result<(Option<MatrixDoc>, Result<KreinSpaceSpec, Error>), InputError> {
        match self.load(path)?.document {
            Document::Space(p) => Ok((p.symmetry.clone(), p.space(tol))),
            other => Err(InputError(format!("{}: kind: expected `space`, found `{}`", path.display(), other.kind()))),
        }
    }

    fn algebra(&mut self, path: &Path, tol: f64) -> Result<(MatrixStarAlgebra, Symmetry), InputError> {
        match self.load(path)?.document {
            Document::Algebra(p) => {
                let at = |e: DocumentError| InputError(format!("{}: {}", path.display(), e.0));
                Ok((p.algebra(tol).map_err(at)?, p.symmetry(tol).map_err(at)?))
            }
            other => Err(InputError(format!("{}: kind: expected `algebra`, found `{}`", path.display(), other.kind()))),
        }
    }

    fn category(&mut self, path: &Path, tol: f64) -> Result<(CategoryPayload, OperatorCategory, Symmetry), InputError> {
        match self.load(path)?.document {
            Document::Category(p) => {
                let at = |e: DocumentError| InputError(format!("{}: {}", path.display(), e.0));
                let cat = p.category(tol).map_err(at)?;
                let alpha = p.symmetry(tol).map_err(at)?;
                Ok((p, cat, alpha))
            }
            other => Err(InputError(format!("{}: kind: expected `category`, found `{}`", path.display(), other.kind()))),
        }
    }

    fn state(
        &mut self,
        state: &Path,
        category: Option<&Path>,
        tol: f64,
    ) -> Result<(OperatorCategory, crate::gns::CategoryState), InputError> {
        let payload = match self.load(state)?.document {
            Document::State(p) => p,
            other => {
                return Err(InputError(format!("{}: kind: expected `state`, found `{}`", state.display(), other.kind())))
            }
        };
        let cat_path = match category {
            Some(p) => p.to_path_buf(),
            None => payload
                .category_path(state)
                .ok_or_else(|| InputError(format!("{}: payload.category: missing (or pass --category)", state.display())))?,
        };
        let (cp, cat, _) = self.category(&cat_path, tol)?;
        let omega = payload
            .state
            .state(&cp, &cat, tol, "payload.state")
            .map_err(|e| InputError(format!("{}: {}", state.display(), e.0)))?;
        Ok((cat, omega))
    }
}

fn matrix(m: &crate::ComplexMatrix) -> Value {
    serde_json::to_value(MatrixDoc::from_matrix(m)).expect("matrix")
}

fn hom_dims(cat: &OperatorCategory) -> Value {
    let n = cat.n_objects();
    json!((0..n).map(|s| (0..n).map(|d| cat.hom(s, d).dim()).collect::<Vec<_>>()).collect::<Vec<_>>())
}

fn category_summary(cat: &OperatorCategory) -> Value {
    json!({
        "objects": cat.objects().iter().map(|o| json!({"label": o.label, "dim": o.dim})).collect::<Vec<_>>(),
        "hom_dims": hom_dims(cat),
    })
}

fn space_outcome(space: Result<KreinSpaceSpec, Error>, symmetry: Option<MatrixDoc>, s: &Settings, full: bool) -> Result<Outcome, InputError> {
    let space = match space {
        Ok(k) => k,
        Err(e @ (Error::NotHermitian { .. } | Error::Degenerate { .. })) => {
            let mut r = Report::new();
            let name = if matches!(e, Error::NotHermitian { .. }) { "hermitian" } else { "nondegenerate" };
            r.flag(name, false, || Witness::new("payload.gram", None, e.to_string()));
            return Ok(Outcome::new(r));
        }
        Err(e) => return Err(InputError(e.to_string())),
    };
    let dec = canonical_decomposition(&space, s.tol).map_err(|e| InputError(e.to_string()))?;
    let res = dec.residuals(&space);
    let mut r = Report::new();
    let gn = norm(space.gram());
    let w = |what: &str| Witness::new("canonical decomposition", Some(dec.j.clone()), what.to_string());
    r.record("j_squared", res.involution, s.tol, || w("J^2 != I"));
    r.record("gram_j_hermitian", res.hermitian, s.bound(gn), || w("GJ is not Hermitian"));
    r.record("gram_j_positive", (-res.min_positive).max(0.0), s.bound(gn), || w("GJ is not positive definite"));
    r.record("orthogonality", res.orthogonality, s.bound(gn), || w("K+ and K- are not G-orthogonal"));
    r.record("projections", res.projections, s.tol * 10.0, || w("P+ and P- are not complementary projections"));
    let mut out = Outcome::new(r).with("dim", json!(space.dim())).with("signature", json!([dec.signature.0, dec.signature.1]));
    if full {
        out = out
            .with("j", matrix(&dec.j))
            .with("p_plus", matrix(&dec.p_plus))
            .with("p_minus", matrix(&dec.p_minus))
            .with("min_gram_j_eigenvalue", number(res.min_positive));
    }
    if let Some(jd) = symmetry {
        let j = jd.to_matrix("payload.symmetry")?;
        let c = symmetry_check(&space, &j, s.tol).map_err(|e| InputError(format!("payload.symmetry: {e}")))?;
        out.report.flag("symmetry", c.passed, || {
            Witness::new("payload.symmetry", Some(j.clone()), "not a fundamental symmetry of the space")
        });
        out = out.with(
            "symmetry",
            json!({
                "involution": number(c.involution),
                "hermitian": number(c.hermitian),
                "min_positive": number(c.min_positive),
                "self_adjoint": number(c.self_adjoint),
            }),
        );
    }
    Ok(out)
}

fn krein_rep_outcome(rep: KreinRepresentation) -> Outcome {
    let minus: Vec<usize> = rep.spaces.iter().zip(&rep.plus_dims).map(|(k, p)| k.dim() - p).collect();
    Outcome::new(rep.report.clone())
        .with("dims", json!(rep.dims()))
        .with("plus_dims", json!(rep.plus_dims))
        .with("minus_dims", json!(minus))
        .with("doubled_dims", json!(rep.doubled.dims))
}

fn execute(command: &Command, s: &Settings, inputs: &mut Inputs) -> Result<Outcome, InputError> {
    let tol = s.tol;
    match command {
        Command::CheckSpace(i) | Command::Decompose(i) => {
            let (sym, space) = inputs.space(&i.input, tol)?;
            space_outcome(space, sym, s, matches!(command, Command::Decompose(_)))
        }
        Command::Adjoint { input, codomain, operator, .. } => {
            let dom = inputs.space(input, tol)?.1.map_err(|e| InputError(format!("{}: payload.gram: {e}", input.display())))?;
            let cod = match codomain {
                Some(p) => inputs.space(p, tol)?.1.map_err(|e| InputError(format!("{}: payload.gram: {e}", p.display())))?,
                None => dom.clone(),
            };
            let bytes = std::fs::read(operator).map_err(|e| InputError(format!("{}: {e}", operator.display())))?;
            inputs.loaded.push(bytes.clone());
            let de = &mut serde_json::Deserializer::from_slice(&bytes);
            let doc: MatrixDoc = serde_path_to_error::deserialize(de)
                .map_err(|e| InputError(format!("{}: {}: {}", operator.display(), e.path(), e.inner())))?;
            let t = doc.to_matrix("operator")?;
            let t_sharp = krein_adjoint(&t, &dom, &cod).map_err(|e| InputError(format!("operator: {e}")))?;
            let mut r = Report::new();
            let mut rng = s.rng();
            for i in 0..s.samples {
                let x = random_vector(dom.dim(), &mut rng);
                let y = random_vector(cod.dim(), &mut rng);
                let lhs = cod.inner(&t.apply(&x), &y);
                let rhs = dom.inner(&x, &t_sharp.apply(&y));
                let scale = norm(&t) * crate::matrix::vector_norm(&x) * crate::matrix::vector_norm(&y);
                r.record("defining_identity", (lhs - rhs).norm(), s.bound(scale * (norm(dom.gram()) + norm(cod.gram()))), || {
                    Witness::new(format!("sample {i}"), Some(t.clone()), "[Tx, y] != [x, T#y]")
                });
            }
            Ok(Outcome::new(r).with("adjoint", matrix(&t_sharp)))
        }
        Command::CheckAlgebra(i) => {
            let (alg, alpha) = inputs.algebra(&i.input, tol)?;
            Ok(Outcome::new(verify_krein_cstar(&alg, &alpha, s)).with("dim", json!(alg.dim())))
        }
        Command::Split(i) => {
            let (alg, alpha) = inputs.algebra(&i.input, tol)?;
            let (even, odd) = even_odd_split(&alg, &alpha, tol).map_err(|e| InputError(format!("payload.symmetry: {e}")))?;
            let mut r = Report::new();
            for (name, part, sign) in [("even_fixed", &even, 1.0), ("odd_negated", &odd, -1.0)] {
                for (k, b) in part.elements().iter().enumerate() {
                    let res = alpha.apply(b, 0, 0).distance(&b.scale_re(sign));
                    r.record(name, res, s.bound(1.0), || Witness::new(format!("basis element {k}"), Some(b.clone()), "wrong parity"));
                }
            }
            r.flag("dimensions", even.dim() + odd.dim() == alg.dim(), || {
                Witness::new("split", None, "even and odd parts do not span the algebra")
            });
            Ok(Outcome::new(r)
                .with("even_dim", json!(even.dim()))
                .with("odd_dim", json!(odd.dim()))
                .with("even_basis", json!(even.elements().iter().map(matrix).collect::<Vec<_>>()))
                .with("odd_basis", json!(odd.elements().iter().map(matrix).collect::<Vec<_>>())))
        }
        Command::Twist(i) => {
            let (alg, alpha) = inputs.algebra(&i.input, tol)?;
            let t = twist_involution(&alg, &alpha, tol).map_err(|e| InputError(format!("payload.symmetry: {e}")))?;
            let mut r = Report::new();
            r.merge("twisted", verify_krein_cstar(&t, &Symmetry::Identity, s));
            let tt = twist_involution(&t, &alpha, tol).map_err(|e| InputError(e.to_string()))?;
            for (k, b) in alg.basis().elements().iter().enumerate() {
                let res = tt.star(b).distance(&alg.star(b));
                r.record("double_twist", res, s.bound(1.0), || {
                    Witness::new(format!("basis element {k}"), Some(b.clone()), "twisting twice does not restore the involution")
                });
            }
            Ok(Outcome::new(r).with("dim", json!(t.dim())))
        }
        Command::Link(i) => {
            let (alg, alpha) = inputs.algebra(&i.input, tol)?;
            let (cat, g) = attempt!(krein_link(&alg, &alpha, s));
            Ok(Outcome::new(verify_krein_cstar_category(&cat, &g, s)).with("category", category_summary(&cat)))
        }
        Command::Envelope(i) => {
            let (_, cat, _) = inputs.category(&i.input, tol)?;
            let (env, iota) = envelope(&cat);
            let env_cat = OperatorCategory::from_algebra(&env);
            let mut r = Report::new();
            r.merge("iota", verify_functor(&iota, &cat, &env_cat, false, s));
            Ok(Outcome::new(r).with("dim", json!(env.dim())).with("ambient_dim", json!(env.ambient_dim())))
        }
        Command::CheckCategory(i) => {
            let (_, cat, _) = inputs.category(&i.input, tol)?;
            Ok(Outcome::new(verify_cstar_category(&cat, s)).with("category", category_summary(&cat)))
        }
        Command::CheckKreinCategory(i) => {
            let (_, cat, alpha) = inputs.category(&i.input, tol)?;
            Ok(Outcome::new(verify_krein_cstar_category(&cat, &alpha, s)).with("category", category_summary(&cat)))
        }
        Command::CheckState { state, category, .. } => {
            let (cat, omega) = inputs.state(state, category.as_deref(), tol)?;
            Ok(Outcome::new(verify_state(&cat, &omega, s).map_err(|e| InputError(e.to_string()))?))
        }
        Command::Gns { state, category, .. } => {
            let (cat, omega) = inputs.state(state, category.as_deref(), tol)?;
            let check = verify_state(&cat, &omega, s).map_err(|e| InputError(e.to_string()))?;
            if !check.passed() {
                let mut r = Report::new();
                r.merge("state", check);
                return Ok(Outcome::new(r).with("error", json!("not a state")));
            }
            let rep = attempt!(gns(&cat, &omega, s));
            let mut r = rep.report.clone();
            r.merge("null_ideal", null_ideal_check(&cat, &omega, s).map_err(|e| InputError(e.to_string()))?);
            Ok(Outcome::new(r)
                .with("dims", json!(rep.dims))
                .with("pair_dims", json!(rep.pair_dims))
                .with("cyclic", json!(rep.cyclic.iter().map(|v| vector_doc(v)).collect::<Vec<_>>())))
        }
        Command::RepresentAlgebra(i) => {
            let (alg, alpha) = inputs.algebra(&i.input, tol)?;
            Ok(krein_rep_outcome(attempt!(represent_krein_algebra(&alg, &alpha, s))))
        }
        Command::RepresentCategory(i) => {
            let (_, cat, alpha) = inputs.category(&i.input, tol)?;
            Ok(krein_rep_outcome(attempt!(represent_krein_category(&cat, &alpha, s))))
        }
        Command::Double(i) => {
            let (_, cat, alpha) = inputs.category(&i.input, tol)?;
            let (d, g) = attempt!(doubling(&cat, &alpha, s));
            Ok(Outcome::new(verify_krein_cstar_category(&d, &g, s)).with("category", category_summary(&d)))
        }
    }
}

/// Result of one command line invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct Invocation {
    /// 0 pass, 1 verified fail, 2 input or usage error.
    pub status: i32,
    /// The rendered report.
    pub report: Option<String>,
    /// Where the report was written, if `--report` was given.
    pub report_path: Option<PathBuf>,
    /// Diagnostic for status 2, or clap's help and version text.
    pub message: Option<String>,
}

impl Invocation {
    fn error(status: i32, message: String) -> Self {
        Invocation { status, report: None, report_path: None, message: Some(message) }
    }
}

/// Runs one command without touching standard output or standard error;
/// `argv[0]` is the program name.
pub fn invoke<I, T>(argv: I) -> Invocation
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return Invocation::error(code, e.render().to_string());
        }
    };
    let common = cli.command.common();
    if !(common.tol.is_finite() && common.tol > 0.0) {
        return Invocation::error(2, "error: --tol must be a positive number".into());
    }
    let settings = Settings::default().with_tol(common.tol).with_samples(common.samples).with_seed(common.seed);
    let start = Instant::now();
    let mut inputs = Inputs { loaded: Vec::new() };
    let outcome = match execute(&cli.command, &settings, &mut inputs) {
        Ok(o) => o,
        Err(InputError(msg)) => return Invocation::error(2, format!("error: {msg}")),
    };
    let duration = common.timing.then(|| start.elapsed().as_secs_f64() * 1e3);
    let text = render(cli.command.name(), &inputs_digest(&inputs.loaded), &settings, &outcome, duration);
    if let Some(path) = &common.report {
        if let Err(e) = std::fs::write(path, &text) {
            return Invocation::error(2, format!("error: cannot write report: {e}"));
        }
    }
    let status = if outcome.report.passed() { 0 } else { 1 };
    Invocation { status, report: Some(text), report_path: common.report.clone(), message: None }
}

/// Runs one command; `argv[0]` is the program name. The report goes to
/// standard output unless `--report` is given. Returns the exit status.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let inv = invoke(argv);
    if let Some(msg) = &inv.message {
        if inv.status == 0 {
            print!("{msg}");
        } else {
            eprintln!("{}", msg.trim_end());
        }
    }
    if let (Some(text), None) = (&inv.report, &inv.report_path) {
        if let Err(e) = emit(text) {
            eprintln!("error: cannot write report: {e}");
            return 2;
        }
    }
    inv.status
}
