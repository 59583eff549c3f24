//! Equivalence testing for cyclic codes via affine maps on cyclotomic
//! cosets, partitioning of all cyclic codes of a given length into
//! equivalence classes, and an equivalence-aware search for cyclic and
//! 1-generator quasi-cyclic codes with good parameters.

pub mod codes;
pub mod cosets;
pub mod equivalence;
pub mod error;
pub mod field;
pub mod manifest;
pub mod partition;
pub mod poly;
pub mod search;
pub mod text;

pub use error::{Error, Result};
pub use field::{Field, FieldElement};
pub use poly::Poly;
