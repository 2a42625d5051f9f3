/// Relative tolerance used by every check unless the caller overrides it.
pub const DEFAULT_TOL: f64 = 1e-9;
pub const DEFAULT_SAMPLES: usize = 200;
pub const DEFAULT_SEED: u64 = 42;

/// Knobs shared by all verification routines.
///
/// Residuals are compared against `tol * (1 + scale)` where `scale` is the
/// norm of the quantity under test. `seed` drives every random sample so
/// that two runs with equal settings produce identical reports.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Settings {
    pub tol: f64,
    pub samples: usize,
    pub seed: u64,
}

impl Default for Settings {
    fn default() -> Self {
        Settings { tol: DEFAULT_TOL, samples: DEFAULT_SAMPLES, seed: DEFAULT_SEED }
    }
}

impl Settings {
    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_samples(mut self, samples: usize) -> Self {
        self.samples = samples;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// `tol * (1 + scale)`.
    pub fn bound(&self, scale: f64) -> f64 {
        self.tol * (1.0 + scale)
    }

    pub fn rng(&self) -> rand_chacha::ChaCha8Rng {
        use rand::SeedableRng;
        rand_chacha::ChaCha8Rng::seed_from_u64(self.seed)
    }
}
