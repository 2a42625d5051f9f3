//! Dense complex linear algebra: the substrate every other module builds on.

pub mod dense;
pub mod random;
pub mod spectral;
pub mod subspace;

pub(crate) use dense::check_vector_len;
pub use dense::{dot, vector_norm, ComplexMatrix, C64, ONE, ZERO};
pub use spectral::{
    eigenvalues, herm_eig, hermitian_residual, is_positive, op_norm, positive_root, rank, singular_values,
    svd, HermitianEigen, PositiveRoot, Svd,
};
pub use subspace::{hilbert_adjoint, saturate_span, ClosureRule, SubspaceBasis};
