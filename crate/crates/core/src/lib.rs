//! Exact-arithmetic engine for indices of polynomial vector fields at an
//! isolated singularity: the Poincaré-Hopf index through the signature of a
//! bilinear form on the local algebra of the field, and the real/complex GSV
//! indices of fields tangent to a singular hypersurface through signature and
//! dimension formulas on local quotient algebras. A definition-based
//! topological-degree oracle validates the algebraic formulas.
//!
//! All arithmetic is exact over the rationals; there is no floating point in
//! any certified code path.

pub mod algebra;
pub mod error;
pub mod expr;
pub mod forms;
pub mod indices;
pub mod linalg;
pub mod oracle;
pub mod report;
pub mod sbasis;

pub use error::{Error, Result};
