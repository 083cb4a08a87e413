//! Sparse multivariate polynomials and the flow maps built from them.

mod coeff;
mod map;
mod poly;

pub use coeff::{Coeff, REAL_REL_TOL};
pub use map::{FailureVector, FlowMap, JacobianMap, NEGATIVE_CLAMP};
pub use poly::{Exponents, Monomial, Polynomial, TruncateMode, DEFAULT_TERM_CAP};
