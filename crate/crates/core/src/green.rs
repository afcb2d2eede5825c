//! Green's function `g(x; S^c)` with pole at infinity for the complement of
//! an interval union, restricted to real arguments, and the convergence
//! factor `κ(S) = exp(-g(0; S^c))`.
//!
//! The derivative of `g` along the real axis outside `S` is
//! `q(t)/sqrt(|H(t)|)` with `H(t) = prod (t - a_i)` and `q` monic of degree
//! `ℓ-1`, pinned down by the vanishing of the integral of `q/sqrt|H|`
//! across every gap. Evaluation integrates this density from the nearest
//! point of `S`; the substitution `t = a ± s^2` removes the endpoint
//! singularity before quadrature.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::geometry::{real_roots_in, IntervalUnion, Location, RealPolynomial};
use crate::quad;

/// Monic polynomial of degree `ℓ-1` with one zero per gap; the density
/// numerator of the Green's function of `S^c`.
#[derive(Debug, Clone)]
pub struct GapPolynomial {
    set: IntervalUnion,
    q: RealPolynomial,
    gap_zeros: Vec<f64>,
    quad_tol: f64,
    achieved_residual: f64,
}

/// One evaluation of the Green's function.
#[derive(Debug, Clone, Copy)]
pub struct GreenEvaluation {
    pub x: f64,
    pub value: f64,
    pub location: Location,
    pub est_error: f64,
}

impl GapPolynomial {
    /// Solves the gap-integral conditions for the monic `q` of degree `ℓ-1`.
    ///
    /// The `ℓ-1` non-leading coefficients (Chebyshev basis of the hull, for
    /// conditioning) solve the linear system
    /// `∫_{gap j} q(t)/sqrt|H(t)| dt = 0`, `j = 1..ℓ-1`. For `ℓ = 1` there
    /// are no conditions and `q ≡ 1`.
    pub fn solve(set: &IntervalUnion, quad_tol: f64) -> Result<Self> {
        if !(quad_tol.is_finite() && quad_tol > 0.0) {
            return Err(Error::InvalidArgument(format!("quad_tol {quad_tol}")));
        }
        let ell = set.ell();
        if ell == 1 {
            return Ok(Self {
                set: set.clone(),
                q: RealPolynomial::constant(1.0),
                gap_zeros: Vec::new(),
                quad_tol,
                achieved_residual: 0.0,
            });
        }
        let (lo, hi) = set.hull();
        let m = ell - 1; // degree of q
        // leading Chebyshev coefficient that makes q monic in x:
        // T_m(u(x)) has leading coefficient 2^(m-1) (2/(hi-lo))^m.
        let lead = (hi - lo).powi(m as i32) / 2f64.powi(2 * m as i32 - 1);

        // moments M[j][k] = int_{gap j} T_k(u)/sqrt|H| dt
        let gaps: Vec<(f64, f64)> = set.gaps().collect();
        let mut moments = vec![vec![0.0; m + 1]; m];
        for (j, &(a, b)) in gaps.iter().enumerate() {
            for (k, slot) in moments[j].iter_mut().enumerate() {
                let basis = unit_cheb(lo, hi, k);
                *slot = gap_integral(set, &basis, a, b, quad_tol)?;
            }
        }

        let mat = DMatrix::from_fn(m, m, |j, k| moments[j][k]);
        let rhs = DVector::from_fn(m, |j, _| -lead * moments[j][m]);
        let solved = mat
            .clone()
            .lu()
            .solve(&rhs)
            .filter(|c| c.iter().all(|v| v.is_finite()))
            .ok_or_else(|| singular_error(&mat))?;

        let mut coeffs: Vec<f64> = solved.iter().copied().collect();
        coeffs.push(lead);
        let q = RealPolynomial::chebyshev(lo, hi, coeffs)?;

        // residual of the gap conditions with the solved q
        let mut achieved = 0f64;
        for &(a, b) in &gaps {
            achieved = achieved.max(gap_integral(set, &q, a, b, quad_tol)?.abs());
        }
        if achieved > (0.5 * quad_tol).max(1e-13 * (1.0 + q.coeff_norm())) {
            return Err(Error::QuadratureNonConvergence {
                requested: quad_tol,
                achieved,
            });
        }

        // exactly one zero of q inside each gap
        let mut gap_zeros = Vec::with_capacity(m);
        for &(a, b) in &gaps {
            let roots = real_roots_in(&q, a, b)?;
            if roots.len() != 1 {
                return Err(Error::SingularSystem { cond: f64::INFINITY });
            }
            gap_zeros.push(roots[0]);
        }

        Ok(Self { set: set.clone(), q, gap_zeros, quad_tol, achieved_residual: achieved })
    }

    pub fn q(&self) -> &RealPolynomial {
        &self.q
    }

    pub fn gap_zeros(&self) -> &[f64] {
        &self.gap_zeros
    }

    /// The `2ℓ` endpoints defining `H(t)`.
    pub fn h_endpoints(&self) -> &[f64] {
        self.set.endpoints()
    }

    pub fn quad_tol(&self) -> f64 {
        self.quad_tol
    }

    /// Worst gap-condition residual reached by the solve.
    pub fn achieved_residual(&self) -> f64 {
        self.achieved_residual
    }

    /// `g(x; S^c)` for real `x`, zero on the set itself.
    pub fn evaluate(&self, x: f64) -> Result<GreenEvaluation> {
        if !x.is_finite() {
            return Err(Error::NonFinite(format!("evaluation point {x}")));
        }
        let location = self.set.locate(x);
        let ep = self.set.endpoints();
        // half the budget for the path integral, the other half absorbs the
        // gap-condition residual, keeping est_error <= quad_tol
        let tol = 0.5 * self.quad_tol;
        let (value, est_error) = match location {
            Location::InSet(_) => (0.0, 0.0),
            Location::InGap(j) => {
                let (a, b) = (ep[2 * j + 1], ep[2 * j + 2]);
                // start at the nearer gap endpoint: shorter path
                let r = if x - a <= b - x {
                    from_endpoint(&self.set, &self.q, 2 * j + 1, 1.0, x - a, tol)?
                } else {
                    from_endpoint(&self.set, &self.q, 2 * j + 2, -1.0, b - x, tol)?
                };
                (r.value.abs(), r.est_error + self.achieved_residual)
            }
            Location::LeftOfHull => {
                let r = from_endpoint(&self.set, &self.q, 0, -1.0, ep[0] - x, tol)?;
                (r.value.abs(), r.est_error + self.achieved_residual)
            }
            Location::RightOfHull => {
                let last = ep.len() - 1;
                let r = from_endpoint(&self.set, &self.q, last, 1.0, x - ep[last], tol)?;
                (r.value.abs(), r.est_error + self.achieved_residual)
            }
        };
        Ok(GreenEvaluation { x, value, location, est_error })
    }
}

/// `g(x; S^c)` computed from a freshly solved gap polynomial.
///
/// Callers evaluating at many points should solve [`GapPolynomial`] once and
/// reuse it.
pub fn green_value(set: &IntervalUnion, x: f64, quad_tol: f64) -> Result<GreenEvaluation> {
    GapPolynomial::solve(set, quad_tol)?.evaluate(x)
}

/// Estimated asymptotic convergence factor `κ(S) = exp(-g(0; S^c))`.
pub fn kappa(set: &IntervalUnion, quad_tol: f64) -> Result<f64> {
    if set.contains(0.0) {
        return Err(Error::ZeroInSet);
    }
    Ok((-green_value(set, 0.0, quad_tol)?.value).exp())
}

/// Chebyshev basis element `T_k` on `[lo, hi]` as a polynomial.
fn unit_cheb(lo: f64, hi: f64, k: usize) -> RealPolynomial {
    let mut c = vec![0.0; k + 1];
    c[k] = 1.0;
    RealPolynomial::chebyshev(lo, hi, c).expect("valid basis element")
}

/// Signed `∫_e^{e + dir·d} p(t)/sqrt|H(t)| dt` where `e` is the endpoint with
/// index `e_idx` and the path contains no other endpoint.
///
/// With `t = e + dir·s^2` the singular factor `|t - e|` cancels against the
/// Jacobian, leaving the smooth integrand `2 p(t(s)) / sqrt(prod' |t - a_i|)`.
fn from_endpoint(
    set: &IntervalUnion,
    p: &RealPolynomial,
    e_idx: usize,
    dir: f64,
    d: f64,
    tol: f64,
) -> Result<quad::QuadResult> {
    debug_assert!(d >= 0.0);
    let ep = set.endpoints();
    let e = ep[e_idx];
    let f = |s: f64| {
        let ds = dir * s * s;
        let t = e + ds;
        let mut rest = 1.0f64;
        for (i, &a) in ep.iter().enumerate() {
            if i != e_idx {
                rest *= ((e - a) + ds).abs();
            }
        }
        2.0 * p.eval(t) / rest.sqrt()
    };
    let mut r = quad::integrate(f, 0.0, d.sqrt(), tol)?;
    r.value *= dir;
    Ok(r)
}

/// `∫_a^b p(t)/sqrt|H(t)| dt` across a whole gap `(a, b)`, split at the
/// midpoint with the substitution applied at each end.
fn gap_integral(
    set: &IntervalUnion,
    p: &RealPolynomial,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<f64> {
    let ep = set.endpoints();
    let a_idx = ep.iter().position(|&v| v == a).expect("gap endpoint");
    let b_idx = ep.iter().position(|&v| v == b).expect("gap endpoint");
    let m = 0.5 * (a + b);
    let left = from_endpoint(set, p, a_idx, 1.0, m - a, 0.5 * tol)?;
    let right = from_endpoint(set, p, b_idx, -1.0, b - m, 0.5 * tol)?;
    Ok(left.value - right.value)
}

fn singular_error(mat: &DMatrix<f64>) -> Error {
    let svd = mat.clone().svd(false, false);
    let max = svd.singular_values.max();
    let min = svd.singular_values.min();
    Error::SingularSystem { cond: if min > 0.0 { max / min } else { f64::INFINITY } }
}
