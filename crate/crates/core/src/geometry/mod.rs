//! Interval unions, real polynomials and elementary numerics shared by the
//! solver modules.

mod interval;
mod poly;
mod roots;

pub use interval::{IntervalUnion, Location};
pub use poly::{Basis, RealPolynomial, COEFF_ZERO_TOL};
pub use roots::{real_roots_in, ROOT_TOL};

pub(crate) use poly::cheb_basis_row;
pub(crate) use roots::bisect_fn;
