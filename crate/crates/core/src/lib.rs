//! Exact computer algebra for flat Lie-algebroid superconnections.
//!
//! Smooth manifolds are replaced by finite-dimensional commutative algebras
//! over the rationals, vector bundles by modules over them and vector fields
//! by derivations. On top of that sit Lie–Rinehart algebroids, their
//! Chevalley–Eilenberg complexes, two-term superconnections `(∂, ∇ᶜ, ∇ˢ, Ω)`
//! on `C[1] ⊕ E`, gauge transformations, Chern–Simons classes and the
//! classification of regular instances.

#![allow(clippy::needless_range_loop)]

pub mod algebroid;
pub mod chern_simons;
pub mod classify;
pub mod error;
pub mod forms;
pub mod io;
pub mod linalg;
pub mod models;
pub mod report;
pub mod ring;
pub mod scalar;
pub mod superalg;
pub mod superconn;

pub use error::{Error, Result};
