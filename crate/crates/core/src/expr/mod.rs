//! Exact-rational sparse multivariate polynomials, expression parsing, and
//! the calculus-derived objects the index formulas consume (gradients,
//! Jacobian and Hessian determinants, cofactors of tangent fields).

mod calculus;
mod monomial;
mod parse;
mod poly;

pub use calculus::{cofactor, gradient, hessian_det, jacobian_det, poly_det};
pub use monomial::{cmp_degrevlex, cmp_grlex, cmp_negdegrevlex, Monomial};
pub use parse::parse_poly;
pub use poly::{rat, rat_frac, render_rat, Polynomial, Rat, VectorField};
