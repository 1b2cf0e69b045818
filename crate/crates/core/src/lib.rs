//! Finite inverse semigroups, their crossed products, equivariant Hilbert
//! bimodules, and K0 bookkeeping for the associated finite-dimensional
//! C*-algebras.

// index-based loops mirror the (i, j, s)-indexed formulas throughout
#![allow(clippy::needless_range_loop)]

pub mod action;
pub mod corpus;
pub mod crossed;
pub mod cycle;
pub mod error;
pub mod formats;
pub mod functors;
pub mod gen;
pub mod groupoid;
pub mod hilbert;
pub mod linalg;
pub mod semigroup;
pub mod spectrum;
pub mod star_algebra;
pub mod tensor;

pub use action::SAlgebraAction;
pub use error::{Error, Result};
pub use semigroup::InverseSemigroup;
pub use spectrum::Character;
pub use star_algebra::{CStarBlockAlgebra, EnvelopeResult, K0Class, StarAlgebra, Tol};
