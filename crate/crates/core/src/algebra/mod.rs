//! Concrete matrix *-algebras with an involutive symmetry automorphism.

mod involution;
mod star;

pub use involution::{Involution, LinearPiece, Metric, Symmetry};
pub(crate) use star::split_hom;
pub use star::{
    algebra_from_generators, even_odd_split, krein_cstar_residual, twist_involution, verify_krein_cstar,
    MatrixStarAlgebra,
};

/// The symmetry automorphism of an algebra; the same type acts on categories.
pub type SymmetryAutomorphism = Symmetry;
