//! Finite operator C*-categories and Kreĭn C*-categories.

mod envelope;
mod linking;
mod operator;

pub use envelope::{envelope, envelope_functor, verify_functor, StarFunctor};
pub(crate) use linking::{double_cstar, link_cstar};
pub use linking::{doubling, isoenv_check, krein_link, linking_category};
pub use operator::{
    twist_category, verify_cstar_category, verify_krein_cstar_category, Object, OperatorCategory,
};

/// Symmetry of a category; the same type as an algebra symmetry.
pub type CategorySymmetry = crate::algebra::Symmetry;
