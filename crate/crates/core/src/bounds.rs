//! The lower bounds `κ^n` and `2κ^n/(1 + κ^{2n})` for the minimum deviation,
//! the equality classification (equality holds exactly when `S` is a
//! degree-`n` inverse image), and the refined Bernstein-Walsh bound
//! `|Q(x)|/||Q||_K <= cosh(n g(x; K^c))` for real arguments.

use crate::error::{Error, Result};
use crate::geometry::{IntervalUnion, RealPolynomial};
use crate::green::{green_value, kappa};
use crate::invimage::{check_admissible, inverse_image, Admissibility};
use crate::minres::{local_extrema, minres_exchange, MinResResult};
use crate::{DEFAULT_MAX_ITER, DEFAULT_SOLVER_TOL};

/// How a degree relates to the sharpened bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EqualityClass {
    Equality,
    Strict,
    Undetermined { tol: f64 },
}

impl EqualityClass {
    pub fn label(&self) -> &'static str {
        match self {
            Self::Equality => "equality",
            Self::Strict => "strict",
            Self::Undetermined { .. } => "undetermined",
        }
    }
}

/// One row of the per-degree comparison of `L_n` against its lower bounds.
#[derive(Debug, Clone)]
pub struct BoundReport {
    pub n: usize,
    pub l_n: f64,
    pub kappa: f64,
    /// `κ^n`.
    pub classic: f64,
    /// `2κ^n/(1 + κ^{2n})`.
    pub sharp: f64,
    /// `L_n / sharp >= 1`.
    pub ratio: f64,
    pub equality: EqualityClass,
    /// Whether `L_{n+1} = L_n` within tolerance (known for all but the last
    /// requested degree).
    pub ln_next_equal: Option<bool>,
    pub certified: bool,
}

/// Sharpened lower bound `2κ^n/(1 + κ^{2n})`, evaluated as
/// `2/(κ^{-n} + κ^n)` for symmetry; falls back to `2κ^n` once `κ^{-n}`
/// overflows (relative error below representable precision there).
pub fn lower_bound_sharp(kappa: f64, n: usize) -> Result<f64> {
    if !(kappa > 0.0 && kappa < 1.0) {
        return Err(Error::InvalidArgument(format!("kappa {kappa} outside (0,1)")));
    }
    if n == 0 {
        return Ok(1.0);
    }
    let pow = kappa.powi(n as i32);
    let inv = kappa.powi(-(n as i32));
    if inv.is_infinite() {
        return Ok(2.0 * pow);
    }
    Ok(2.0 / (inv + pow))
}

/// Classic lower bound `κ^n`.
pub fn lower_bound_classic(kappa: f64, n: usize) -> f64 {
    kappa.powi(n as i32)
}

/// Classifies whether the sharpened bound is attained at degree `n` by
/// reconstructing `P = R_n/L_n` from the solver and comparing its inverse
/// image against `S` endpoint-wise (scale-relative tolerance `tol`).
pub fn classify_equality(set: &IntervalUnion, n: usize, tol: f64) -> Result<EqualityClass> {
    let res = minres_exchange(set, n, DEFAULT_SOLVER_TOL, DEFAULT_MAX_ITER)?;
    classify_from_result(set, n, &res, tol)
}

/// Same as [`classify_equality`] for an already-computed solver result.
pub fn classify_from_result(
    set: &IntervalUnion,
    n: usize,
    res: &MinResResult,
    tol: f64,
) -> Result<EqualityClass> {
    if n == 0 {
        // L_0 = 1 and the bound is 1: the ratio is identically 1
        return Ok(EqualityClass::Equality);
    }
    if res.effective_degree < n {
        return Ok(EqualityClass::Strict);
    }
    let witness = res.polynomial.scaled(1.0 / res.deviation)?;
    let admissible = match check_admissible(&witness, 1e-8)? {
        Admissibility::Admissible(a) => a,
        Admissibility::Rejected(_) => return Ok(EqualityClass::Undetermined { tol }),
    };
    let image = match inverse_image(&admissible) {
        Ok(img) => img,
        Err(_) => return Ok(EqualityClass::Undetermined { tol }),
    };
    if image.ell() != set.ell() {
        return Ok(EqualityClass::Strict);
    }
    let scale = set
        .endpoints()
        .iter()
        .fold(1f64, |m, e| m.max(e.abs()));
    let mismatch = image
        .endpoints()
        .iter()
        .zip(set.endpoints())
        .fold(0f64, |m, (a, b)| m.max((a - b).abs()))
        / scale;
    Ok(if mismatch <= tol {
        EqualityClass::Equality
    } else if mismatch > 10.0 * tol {
        EqualityClass::Strict
    } else {
        EqualityClass::Undetermined { tol }
    })
}

/// Refined Bernstein-Walsh right-hand side `cosh(n g(x; K^c))`; equals 1 on
/// `K` itself.
pub fn bw_refined_bound(set: &IntervalUnion, x: f64, n: usize, quad_tol: f64) -> Result<f64> {
    if set.contains(x) {
        return Ok(1.0);
    }
    let g = green_value(set, x, quad_tol)?.value;
    Ok((n as f64 * g).cosh())
}

/// One Bernstein-Walsh comparison at a real point outside `K`.
#[derive(Debug, Clone, Copy)]
pub struct BwCheck {
    /// `|Q(x)| / ||Q||_K` with the norm from exact critical-point extrema.
    pub lhs: f64,
    /// `cosh(n g)`.
    pub rhs: f64,
    /// The classic bound `exp(n g)`.
    pub classic_rhs: f64,
    pub pass: bool,
    /// Whether the refinement is strictly below the classic bound here.
    pub refinement_strict: bool,
}

pub fn bw_check(
    set: &IntervalUnion,
    q: &RealPolynomial,
    x: f64,
    quad_tol: f64,
    tol: f64,
) -> Result<BwCheck> {
    if set.contains(x) {
        return Err(Error::InvalidArgument(format!("x = {x} lies in K")));
    }
    let norm = local_extrema(q, set)?
        .into_iter()
        .fold(0f64, |m, (_, v)| m.max(v));
    if norm <= 0.0 {
        return Err(Error::ZeroNorm);
    }
    let n = q.degree();
    let g = green_value(set, x, quad_tol)?.value;
    let rhs = (n as f64 * g).cosh();
    let classic_rhs = (n as f64 * g).exp();
    let lhs = q.eval(x).abs() / norm;
    Ok(BwCheck {
        lhs,
        rhs,
        classic_rhs,
        pass: lhs <= rhs + tol,
        refinement_strict: rhs < classic_rhs,
    })
}

/// Tabulates `L_n` against both bounds for `n = 0..=n_max` with one shared
/// `κ`, marking the `L_{n+1} = L_n` coincidences.
pub fn compare_report(
    set: &IntervalUnion,
    n_max: usize,
    quad_tol: f64,
    solver_tol: f64,
    max_iter: usize,
    equality_tol: f64,
) -> Result<Vec<BoundReport>> {
    let k = kappa(set, quad_tol)?;
    let mut solves = Vec::with_capacity(n_max + 2);
    for n in 0..=n_max + 1 {
        solves.push(minres_exchange(set, n, solver_tol, max_iter)?);
    }
    let mut rows = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let res = &solves[n];
        let sharp = lower_bound_sharp(k, n)?;
        let next = &solves[n + 1];
        let ln_next_equal =
            (next.deviation - res.deviation).abs() <= 1e-9 * res.deviation.max(1e-300);
        rows.push(BoundReport {
            n,
            l_n: res.deviation,
            kappa: k,
            classic: lower_bound_classic(k, n),
            sharp,
            ratio: res.deviation / sharp,
            equality: classify_from_result(set, n, res, equality_tol)?,
            ln_next_equal: Some(ln_next_equal),
            certified: res.certified,
        });
    }
    Ok(rows)
}
