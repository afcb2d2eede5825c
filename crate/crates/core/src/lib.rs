//! Minimal residual polynomials on unions of real intervals.
//!
//! Given a finite union `S` of real intervals with `0 ∉ S`, this crate
//! computes the polynomial `R_n` of degree at most `n` with `R_n(0) = 1`
//! whose supremum norm `L_n(S)` on `S` is minimal, the estimated asymptotic
//! convergence factor `κ(S) = exp(-g(0; S^c))` defined through the Green's
//! function of the complement, and the lower bounds
//! `κ^n ≤ 2κ^n/(1 + κ^{2n}) ≤ L_n(S)` together with their equality
//! classification. Inverse polynomial images `P^{-1}([-1,1])` provide exact
//! reference solutions and an independent closed form for the Green's
//! function, used throughout the test suites as cross-checks.

pub mod bounds;
pub mod error;
pub mod geometry;
pub mod green;
pub mod invimage;
pub mod minres;
mod quad;

pub use error::{Error, Result};
pub use geometry::{real_roots_in, Basis, IntervalUnion, Location, RealPolynomial};

/// Default quadrature tolerance (absolute, per integral).
pub const DEFAULT_QUAD_TOL: f64 = 1e-12;
/// Default relative convergence tolerance of the exchange solver.
pub const DEFAULT_SOLVER_TOL: f64 = 1e-10;
/// Default iteration cap of the exchange solver.
pub const DEFAULT_MAX_ITER: usize = 100;
/// Default endpoint-match tolerance of the equality classifier.
pub const DEFAULT_EQUALITY_TOL: f64 = 1e-7;
