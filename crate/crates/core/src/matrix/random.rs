//! Random sampling helpers. All randomness in the crate flows through a
//! caller-supplied RNG so results are reproducible from a seed.

use rand::Rng;
use rand_distr::StandardNormal;

use super::dense::{vector_norm, ComplexMatrix, C64};

/// Standard complex Gaussian (independent real and imaginary parts, each N(0, 1/2)).
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn random_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

pub fn random_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<C64> {
    (0..n).map(|_| complex_gaussian(rng)).collect()
}

/// Uniformly distributed unit vector.
pub fn random_unit_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<C64> {
    loop {
        let v = random_vector(n, rng);
        let norm = vector_norm(&v);
        if norm > 1e-8 {
            return v.into_iter().map(|z| z / norm).collect();
        }
    }
}

pub fn random_hermitian<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let a = random_matrix(n, n, rng);
    (&a + &a.adjoint()).scale_re(0.5)
}

/// Haar-ish unitary from the QR factor of a Gaussian matrix.
pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let a = random_matrix(n, n, rng);
    let q = a.into_nalgebra().qr().q();
    ComplexMatrix::from_nalgebra(q).expect("finite")
}
