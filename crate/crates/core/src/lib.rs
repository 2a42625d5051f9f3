//! Finite-dimensional Kreĭn spaces, Kreĭn C*-algebras and C*-categories.
//!
//! Every object is concrete: algebras are spans of square matrices, categories
//! are families of rectangular matrix spaces, and each construction comes with
//! a numerical certificate ([`Report`]) checked against a relative tolerance.

pub mod algebra;
mod axioms;
pub mod category;
pub mod cli;
pub mod error;
pub mod gns;
pub mod krein;
pub mod matrix;
pub mod report;
pub mod settings;

pub use error::{Error, Result};
pub use matrix::{ComplexMatrix, C64};
pub use report::{Check, Report, Witness};
pub use settings::Settings;
