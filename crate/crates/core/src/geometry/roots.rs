use crate::error::{Error, Result};
use crate::geometry::poly::RealPolynomial;

/// Absolute abscissa tolerance for refined roots.
pub const ROOT_TOL: f64 = 1e-12;

const SAMPLES_PER_DEGREE: usize = 64;
const MAX_BISECT: usize = 120;

/// All real roots of `p` in `[lo, hi]`, ascending, clustered within
/// tolerance.
///
/// Brackets come from sign changes on a Chebyshev-density scan
/// (`64 * degree` samples), then bisection refines each bracket to
/// floating-point exhaustion. Roots of even multiplicity produce no sign
/// change and are not reported; the callers that need them (interval
/// touching points) recover them structurally.
pub fn real_roots_in(p: &RealPolynomial, lo: f64, hi: f64) -> Result<Vec<f64>> {
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::InvalidArgument(format!("root window [{lo},{hi}]")));
    }
    if p.degree() == 0 {
        return Ok(Vec::new());
    }
    let n_samples = SAMPLES_PER_DEGREE * p.degree();
    let mid = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let mut xs = Vec::with_capacity(n_samples + 1);
    for k in 0..=n_samples {
        let theta = std::f64::consts::PI * k as f64 / n_samples as f64;
        xs.push(mid - half * theta.cos());
    }
    xs[0] = lo;
    *xs.last_mut().unwrap() = hi;

    let fs: Vec<f64> = xs.iter().map(|&x| p.eval(x)).collect();
    if let Some(bad) = fs.iter().find(|v| !v.is_finite()) {
        return Err(Error::RootRefinement(format!("non-finite sample value {bad}")));
    }

    let mut roots = Vec::new();
    for k in 0..=n_samples {
        if fs[k] == 0.0 {
            roots.push(xs[k]);
        } else if k < n_samples && fs[k + 1] != 0.0 && fs[k].signum() != fs[k + 1].signum() {
            roots.push(bisect(p, xs[k], xs[k + 1], fs[k])?);
        }
    }
    roots.sort_by(f64::total_cmp);

    // cluster refinements that landed on the same root
    let mut out: Vec<f64> = Vec::with_capacity(roots.len());
    for r in roots {
        match out.last() {
            Some(&last) if r - last <= cluster_tol(r) => {}
            _ => out.push(r),
        }
    }
    Ok(out)
}

fn cluster_tol(x: f64) -> f64 {
    10.0 * ROOT_TOL * (1.0 + x.abs())
}

fn bisect(p: &RealPolynomial, a: f64, b: f64, fa: f64) -> Result<f64> {
    bisect_fn(|x| p.eval(x), a, b, fa)
}

/// Bisection on a bracketing interval, refined to floating-point
/// exhaustion.
pub(crate) fn bisect_fn(
    f: impl Fn(f64) -> f64,
    mut a: f64,
    mut b: f64,
    fa: f64,
) -> Result<f64> {
    let mut sign_a = fa.signum();
    for _ in 0..MAX_BISECT {
        let m = 0.5 * (a + b);
        // near 0 the float grid is so fine that exhaustion would take
        // thousands of halvings; 1e-3*ROOT_TOL is already far below spec
        if m == a || m == b || b - a < 1e-3 * ROOT_TOL {
            return Ok(m);
        }
        let fm = f(m);
        if !fm.is_finite() {
            return Err(Error::RootRefinement(format!("non-finite value at {m}")));
        }
        if fm == 0.0 {
            return Ok(m);
        }
        if fm.signum() == sign_a {
            a = m;
        } else {
            b = m;
        }
        sign_a = f(a).signum();
    }
    Err(Error::RootRefinement(format!(
        "bisection did not collapse bracket [{a},{b}]"
    )))
}
