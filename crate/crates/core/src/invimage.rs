//! Inverse polynomial images `A = P^{-1}([-1,1])`.
//!
//! A degree-`n` polynomial has a real inverse image exactly when its
//! coefficients are real, it has `n` simple real zeros and every critical
//! value is at least 1 in modulus; the image then consists of `ℓ` intervals
//! where `ℓ-1` counts the critical values strictly above 1. Such sets carry
//! exact minimal residual polynomials (`R = P/P(0)`, `L = 1/|P(0)|`) and a
//! closed-form Green's function, both used as cross-module oracles.

use crate::error::{Error, Result};
use crate::geometry::{real_roots_in, Basis, IntervalUnion, RealPolynomial};
use crate::minres::{MinResResult, ReferenceSet};

/// Critical values within this distance of 1 count as exactly 1
/// (touching intervals merge; the interval count is discontinuous there).
const KNIFE_TOL: f64 = 1e-10;

/// A polynomial verified to have a real inverse image.
#[derive(Debug, Clone)]
pub struct AdmissiblePolynomial {
    poly: RealPolynomial,
    critical_points: Vec<f64>,
    critical_values: Vec<f64>,
    ell: usize,
}

/// Why a polynomial fails the real-inverse-image criterion.
#[derive(Debug, Clone, PartialEq)]
pub enum Rejection {
    /// Fewer than `degree` simple real zeros were found (complex or
    /// multiple zeros), or fewer than `degree - 1` real critical points.
    MissingRealZeros { zeros_found: usize, critical_found: usize, degree: usize },
    /// Some critical value lies below 1 in modulus.
    CriticalValueBelowOne { at: f64, value: f64 },
}

#[derive(Debug, Clone)]
pub enum Admissibility {
    Admissible(AdmissiblePolynomial),
    Rejected(Rejection),
}

impl Admissibility {
    pub fn admissible(self) -> Option<AdmissiblePolynomial> {
        match self {
            Self::Admissible(a) => Some(a),
            Self::Rejected(_) => None,
        }
    }
}

impl AdmissiblePolynomial {
    pub fn poly(&self) -> &RealPolynomial {
        &self.poly
    }

    pub fn degree(&self) -> usize {
        self.poly.degree()
    }

    pub fn critical_points(&self) -> &[f64] {
        &self.critical_points
    }

    /// `|P(y)|` at each critical point.
    pub fn critical_values(&self) -> &[f64] {
        &self.critical_values
    }

    /// Number of intervals of the inverse image.
    pub fn ell(&self) -> usize {
        self.ell
    }
}

/// Window certain to contain every real root of `P`, `P ± 1` and `P'`.
///
/// Fujiwara bound on the monomial form (the constant term is widened by 1
/// to cover `P ∓ 1`; critical points are inside the root hull by
/// Gauss-Lucas). The Cauchy bound is far too wide for compositions, whose
/// root scan would then undersample the actual root region.
fn root_window(p: &RealPolynomial) -> (f64, f64) {
    let m = p.to_monomial();
    let n = m.degree();
    let lead = m.coeffs()[n].abs();
    let mut w = 0f64;
    for (k, &c) in m.coeffs().iter().enumerate().take(n) {
        let mag = if k == 0 { (c.abs() + 1.0) / 2.0 } else { c.abs() };
        w = w.max(2.0 * (mag / lead).powf(1.0 / (n - k) as f64));
    }
    if let Basis::Chebyshev { lo, hi } = p.basis() {
        w = w.max(lo.abs()).max(hi.abs());
    }
    (-w - 1.0, w + 1.0)
}

/// Monotone pieces of `P` inside the window: boundaries are the window ends
/// and the critical points.
fn monotone_pieces(critical_points: &[f64], lo: f64, hi: f64) -> Vec<(f64, f64)> {
    let mut pieces = Vec::with_capacity(critical_points.len() + 1);
    let mut left = lo;
    for &y in critical_points {
        pieces.push((left, y));
        left = y;
    }
    pieces.push((left, hi));
    pieces
}

/// Verifies the three conditions for `P^{-1}([-1,1])` to be real.
///
/// Critical points come from the generic root scan on `P'`; the zeros of
/// `P` are then counted by bisection on the monotone pieces in between,
/// which cannot miss close pairs the way a fixed-density scan can.
pub fn check_admissible(p: &RealPolynomial, tol: f64) -> Result<Admissibility> {
    let n = p.degree();
    if n == 0 {
        return Err(Error::InvalidArgument("degree must be at least 1".into()));
    }
    let (lo, hi) = root_window(p);
    let dp = p.derivative();
    let critical_points = if n >= 2 {
        real_roots_in(&dp, lo, hi)?
    } else {
        Vec::new()
    };

    let mut zeros_found = 0usize;
    let mut zero_at_critical = false;
    for (a, b) in monotone_pieces(&critical_points, lo, hi) {
        let (va, vb) = (p.eval(a), p.eval(b));
        if va == 0.0 || vb == 0.0 {
            // a zero sitting on a critical point is a multiple zero
            zero_at_critical = true;
        } else if va.signum() != vb.signum() {
            zeros_found += 1;
        }
    }
    if zero_at_critical || zeros_found != n || critical_points.len() + 1 != n {
        return Ok(Admissibility::Rejected(Rejection::MissingRealZeros {
            zeros_found,
            critical_found: critical_points.len(),
            degree: n,
        }));
    }
    let critical_values: Vec<f64> = critical_points.iter().map(|&y| p.eval(y).abs()).collect();
    for (&y, &v) in critical_points.iter().zip(&critical_values) {
        if v < 1.0 - tol {
            return Ok(Admissibility::Rejected(Rejection::CriticalValueBelowOne {
                at: y,
                value: v,
            }));
        }
    }
    let ell = 1 + critical_values.iter().filter(|&&v| v > 1.0 + KNIFE_TOL).count();
    Ok(Admissibility::Admissible(AdmissiblePolynomial {
        poly: p.clone(),
        critical_points,
        critical_values,
        ell,
    }))
}

/// Assembles the interval union `P^{-1}([-1,1])` from the real solutions of
/// `P = ±1`, pairing consecutive crossings whose midpoint satisfies
/// `|P| <= 1` (touching points are interior and merge automatically).
///
/// Each crossing is bracketed on a monotone piece of `P`, so arbitrarily
/// close crossing pairs around near-touching critical points are still
/// resolved.
pub fn inverse_image(p: &AdmissiblePolynomial) -> Result<IntervalUnion> {
    let (lo, hi) = root_window(&p.poly);
    let mut crossings = Vec::new();
    for (a, b) in monotone_pieces(&p.critical_points, lo, hi) {
        let (va, vb) = (p.poly.eval(a), p.poly.eval(b));
        for target in [-1.0, 1.0] {
            if (va - target) * (vb - target) < 0.0 {
                let root =
                    crate::geometry::bisect_fn(|x| p.poly.eval(x) - target, a, b, va - target)?;
                crossings.push(root);
            }
        }
    }
    crossings.sort_by(f64::total_cmp);

    let mut flat = Vec::new();
    for w in crossings.windows(2) {
        let mid = 0.5 * (w[0] + w[1]);
        if p.poly.eval(mid).abs() <= 1.0 + KNIFE_TOL {
            flat.push(w[0]);
            flat.push(w[1]);
        }
    }
    if flat.is_empty() {
        return Err(Error::PairingInconsistency("no interval of |P| <= 1 found".into()));
    }
    let image = IntervalUnion::from_endpoints(&flat)
        .map_err(|e| Error::PairingInconsistency(e.to_string()))?;
    if image.ell() != p.ell {
        return Err(Error::PairingInconsistency(format!(
            "assembled {} intervals, admissibility predicts {}",
            image.ell(),
            p.ell
        )));
    }
    for &e in image.endpoints() {
        if (p.poly.eval(e).abs() - 1.0).abs() > 1e-10 {
            return Err(Error::PairingInconsistency(format!(
                "|P({e})| = {} differs from 1",
                p.poly.eval(e).abs()
            )));
        }
    }
    Ok(image)
}

/// Exact minimal residual polynomial on the inverse image:
/// `R = P/P(0)`, `L = 1/|P(0)|`. The boolean flags `L_{n+1} = L_n`, which
/// holds when 0 lies in the convex hull of the image.
pub fn minres_from_invimage(p: &AdmissiblePolynomial) -> Result<(MinResResult, bool)> {
    let image = inverse_image(p)?;
    if image.contains(0.0) {
        return Err(Error::ZeroInSet);
    }
    let at0 = p.poly.eval(0.0);
    let r = p.poly.scaled(1.0 / at0)?;
    let n = p.poly.degree();

    let cands = crate::minres::extrema_signed(&r, &image)?;
    let deviation = cands.iter().fold(0f64, |m, &(_, v)| m.max(v.abs()));
    let points = crate::minres::select_reference(&cands, n + 1).ok_or_else(|| {
        Error::PairingInconsistency("exact solution lacks an alternation witness".into())
    })?;
    let reference = ReferenceSet::new(points)?;
    let certificate_residual = reference
        .points
        .iter()
        .fold(0f64, |m, &x| m.max((r.eval(x).abs() - deviation).abs()));

    let (hlo, hhi) = image.hull();
    let next_equal = hlo < 0.0 && hhi > 0.0;
    Ok((
        MinResResult {
            polynomial: r,
            deviation,
            reference,
            effective_degree: n,
            iterations: 0,
            certificate_residual,
            certified: true,
        },
        next_equal,
    ))
}

/// Closed-form Green's function of the inverse-image complement:
/// `g(x) = (1/n) log|P(x) + sqrt(P(x)^2 - 1)|` with the branch
/// `sign(sqrt(t^2-1)) = sign(t-1)`, which collapses to
/// `(1/n) log(|P(x)| + sqrt(P(x)^2 - 1))`; zero on the image.
pub fn green_closed_form(p: &AdmissiblePolynomial, x: f64) -> f64 {
    let v = p.poly.eval(x);
    if v.abs() <= 1.0 {
        return 0.0;
    }
    (v.abs() + (v * v - 1.0).sqrt()).ln() / p.poly.degree() as f64
}

/// `T_n` composed with the affine map `[lo, hi] -> [-1, 1]`: the canonical
/// generator whose inverse image is exactly `[lo, hi]`.
pub fn chebyshev_generator(n: usize, lo: f64, hi: f64) -> Result<AdmissiblePolynomial> {
    if n == 0 {
        return Err(Error::InvalidArgument("degree must be at least 1".into()));
    }
    let mut coeffs = vec![0.0; n + 1];
    coeffs[n] = 1.0;
    let p = RealPolynomial::chebyshev(lo, hi, coeffs)?;
    match check_admissible(&p, KNIFE_TOL)? {
        Admissibility::Admissible(a) => Ok(a),
        Admissibility::Rejected(r) => Err(Error::InvalidArgument(format!(
            "Chebyshev generator unexpectedly rejected: {r:?}"
        ))),
    }
}

/// Composition `outer ∘ inner` as a fresh polynomial, re-verified by
/// [`check_admissible`] (admissibility of compositions is checked, never
/// assumed).
pub fn compose_generator(
    outer: &AdmissiblePolynomial,
    inner: &AdmissiblePolynomial,
) -> Result<Admissibility> {
    let n = outer.poly.degree() * inner.poly.degree();
    let (lo, hi) = inverse_image(inner)?.hull();

    // sample at N+1 Chebyshev-Lobatto nodes and read off the coefficients
    let mid = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let values: Vec<f64> = (0..=n)
        .map(|j| {
            let u = (std::f64::consts::PI * j as f64 / n as f64).cos();
            outer.poly.eval(inner.poly.eval(mid + half * u))
        })
        .collect();
    let coeffs = lobatto_interp_coeffs(&values);
    let composed = RealPolynomial::chebyshev(lo, hi, coeffs)?;
    check_admissible(&composed, KNIFE_TOL)
}

/// Chebyshev coefficients of the degree-`N` interpolant through values at
/// the Lobatto nodes `u_j = cos(pi j / N)`.
fn lobatto_interp_coeffs(values: &[f64]) -> Vec<f64> {
    let n = values.len() - 1;
    let mut c = vec![0.0; n + 1];
    for (k, ck) in c.iter_mut().enumerate() {
        let mut acc = 0.5 * (values[0] + if k % 2 == 0 { values[n] } else { -values[n] });
        for (j, &v) in values.iter().enumerate().take(n).skip(1) {
            acc += v * (std::f64::consts::PI * (j * k) as f64 / n as f64).cos();
        }
        *ck = 2.0 * acc / n as f64;
    }
    c[0] *= 0.5;
    c[n] *= 0.5;
    c
}
