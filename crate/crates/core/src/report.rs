//! Pass/fail records produced by every verification routine.

use crate::matrix::ComplexMatrix;

/// The element that broke a check, and where it was found.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    /// e.g. `"Hom(0,1)[2]"` or `"sample 17"`.
    pub location: String,
    pub element: Option<ComplexMatrix>,
    pub note: String,
}

impl Witness {
    pub fn new(location: impl Into<String>, element: Option<ComplexMatrix>, note: impl Into<String>) -> Self {
        Witness { location: location.into(), element, note: note.into() }
    }
}

/// One named check. `residual` and `bound` belong to the worst instance seen.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub residual: f64,
    pub bound: f64,
    /// Number of instances folded into this record.
    pub count: usize,
    /// First failing instance.
    pub witness: Option<Witness>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Names of the failing checks.
    pub fn failures(&self) -> Vec<String> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.name.clone()).collect()
    }

    /// Largest residual over all checks.
    pub fn max_residual(&self) -> f64 {
        self.checks.iter().map(|c| c.residual).fold(0.0, f64::max)
    }

    /// Folds one instance into the check called `name`. The instance passes
    /// when `residual <= bound`; `witness` is only evaluated on the first
    /// failure.
    pub fn record(&mut self, name: &str, residual: f64, bound: f64, witness: impl FnOnce() -> Witness) -> bool {
        let ok = residual <= bound;
        let idx = match self.checks.iter().position(|c| c.name == name) {
            Some(i) => i,
            None => {
                self.checks.push(Check {
                    name: name.to_string(),
                    passed: true,
                    residual: 0.0,
                    bound,
                    count: 0,
                    witness: None,
                });
                self.checks.len() - 1
            }
        };
        let c = &mut self.checks[idx];
        c.count += 1;
        // keep the instance closest to (or furthest past) its bound
        if excess(residual, bound) > excess(c.residual, c.bound) || c.count == 1 {
            c.residual = residual;
            c.bound = bound;
        }
        if !ok {
            if c.passed {
                c.witness = Some(witness());
            }
            c.passed = false;
        }
        ok
    }

    /// Boolean check with no meaningful residual.
    pub fn flag(&mut self, name: &str, ok: bool, witness: impl FnOnce() -> Witness) -> bool {
        self.record(name, if ok { 0.0 } else { 1.0 }, 0.0, witness)
    }

    pub fn merge(&mut self, prefix: &str, other: Report) {
        for c in other.checks {
            let name = if prefix.is_empty() { c.name } else { format!("{prefix}.{}", c.name) };
            match self.checks.iter_mut().find(|x| x.name == name) {
                Some(x) => {
                    if excess(c.residual, c.bound) > excess(x.residual, x.bound) {
                        x.residual = c.residual;
                        x.bound = c.bound;
                    }
                    x.count += c.count;
                    if x.passed && !c.passed {
                        x.witness = c.witness;
                    }
                    x.passed &= c.passed;
                }
                None => self.checks.push(Check { name, ..c }),
            }
        }
    }
}

fn excess(residual: f64, bound: f64) -> f64 {
    if bound > 0.0 {
        residual / bound
    } else if residual > 0.0 {
        f64::INFINITY
    } else {
        0.0
    }
}
