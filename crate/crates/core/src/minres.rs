//! The constrained minimax problem: minimize `max_{x in S} |P(x)|` over
//! polynomials of degree at most `n` with `P(0) = 1`.
//!
//! The optimum is characterized by `n+1` points of `S` where `|R|` attains
//! its norm with signs that alternate, except across the gap containing 0
//! where the sign repeats. Writing `w(x) = sign(x) R(x)` turns that pattern
//! into plain strict alternation, so a single Remez-style exchange handles
//! both regimes (0 inside or outside the hull).

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::geometry::{cheb_basis_row, real_roots_in, IntervalUnion, RealPolynomial};

/// `n+1` reference points with the sign pattern of the alternation
/// criterion.
#[derive(Debug, Clone)]
pub struct ReferenceSet {
    pub points: Vec<f64>,
    /// `deltas[j] = 1` iff `points[j] < 0 < points[j+1]`.
    pub deltas: Vec<u8>,
    /// Signs `sigma[j+1] = (-1)^(deltas[j]+1) sigma[j]`.
    pub sigmas: Vec<i8>,
}

impl ReferenceSet {
    pub fn new(points: Vec<f64>) -> Result<Self> {
        let (deltas, sigmas) = sign_pattern(&points)?;
        Ok(Self { points, deltas, sigmas })
    }
}

/// Solver output: the minimal residual polynomial and its certificate data.
#[derive(Debug, Clone)]
pub struct MinResResult {
    /// `R_n` normalized to `R_n(0) = 1`, in the Chebyshev basis of the hull.
    pub polynomial: RealPolynomial,
    /// `L_n(S) = ||R_n||_S`.
    pub deviation: f64,
    pub reference: ReferenceSet,
    /// Actual degree of the optimum: `n` or `n-1`.
    pub effective_degree: usize,
    pub iterations: usize,
    /// `max_j | |R(x_j)| - L_n |` over the reference.
    pub certificate_residual: f64,
    /// True when the exchange met its tolerance within the iteration cap.
    pub certified: bool,
}

/// Lower/upper bracket of `L_n(S)` from the discrete grid oracle.
#[derive(Debug, Clone)]
pub struct GridBracket {
    /// Deviation of the discrete optimum: a true lower bound for `L_n(S)`.
    pub lower: f64,
    /// `||R_grid||_S`: a true upper bound for `L_n(S)`.
    pub upper: f64,
    pub polynomial: RealPolynomial,
}

/// Outcome of the a-posteriori alternation check.
#[derive(Debug, Clone)]
pub struct AlternationCertificate {
    pub pass: bool,
    pub witnesses: Vec<f64>,
    pub max_residual: f64,
}

/// Sign pattern of the alternation criterion for ordered points:
/// `delta_j = 1` iff `x_j < 0 < x_{j+1}`, signs repeat across that single
/// pair and alternate everywhere else. `sigma[0] = +1` by convention; the
/// solver flips the whole vector when the solved level comes out negative.
pub fn sign_pattern(points: &[f64]) -> Result<(Vec<u8>, Vec<i8>)> {
    if points.is_empty() {
        return Err(Error::InvalidArgument("empty reference".into()));
    }
    if points.contains(&0.0) {
        return Err(Error::InvalidArgument("reference point at 0".into()));
    }
    if points.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("reference not strictly increasing".into()));
    }
    let mut deltas = Vec::with_capacity(points.len().saturating_sub(1));
    let mut sigmas = vec![1i8; points.len()];
    for j in 0..points.len() - 1 {
        let d = u8::from(points[j] < 0.0 && points[j + 1] > 0.0);
        deltas.push(d);
        sigmas[j + 1] = if d == 1 { sigmas[j] } else { -sigmas[j] };
    }
    Ok((deltas, sigmas))
}

/// Solves the interpolatory linearization on one reference: the unique
/// `(R, lambda)` with `R(0) = 1`, `deg R <= points.len()-1` and
/// `R(x_j) = sigma_j lambda`.
pub fn solve_reference(
    set: &IntervalUnion,
    n: usize,
    reference: &ReferenceSet,
) -> Result<(RealPolynomial, f64)> {
    if reference.points.len() != n + 1 {
        return Err(Error::InvalidArgument(format!(
            "reference holds {} points, expected {}",
            reference.points.len(),
            n + 1
        )));
    }
    let (lo, hi) = set.hull();
    solve_patterned(lo, hi, &reference.points, &reference.sigmas)
}

fn solve_patterned(
    lo: f64,
    hi: f64,
    points: &[f64],
    sigmas: &[i8],
) -> Result<(RealPolynomial, f64)> {
    let deg = points.len() - 1;
    let dim = deg + 2; // deg+1 coefficients plus lambda
    let u = |x: f64| (2.0 * x - lo - hi) / (hi - lo);

    let mut mat = DMatrix::zeros(dim, dim);
    let mut rhs = DVector::zeros(dim);
    for (j, &x) in points.iter().enumerate() {
        let row = cheb_basis_row(deg, u(x));
        for (k, &v) in row.iter().enumerate() {
            mat[(j, k)] = v;
        }
        mat[(j, deg + 1)] = -f64::from(sigmas[j]);
    }
    let row0 = cheb_basis_row(deg, u(0.0));
    for (k, &v) in row0.iter().enumerate() {
        mat[(dim - 1, k)] = v;
    }
    rhs[dim - 1] = 1.0;

    // row equilibration: the constraint row blows up when 0 is far outside
    // the hull
    for j in 0..dim {
        let m = (0..dim).fold(0f64, |acc, k| acc.max(mat[(j, k)].abs()));
        if m > 0.0 {
            for k in 0..dim {
                mat[(j, k)] /= m;
            }
            rhs[j] /= m;
        }
    }

    let solved = mat
        .clone()
        .lu()
        .solve(&rhs)
        .filter(|c| c.iter().all(|v| v.is_finite()))
        .ok_or_else(|| singular_error(&mat))?;

    let coeffs: Vec<f64> = solved.iter().take(deg + 1).copied().collect();
    let lambda = solved[deg + 1];
    let poly = RealPolynomial::chebyshev(lo, hi, coeffs)?;
    let at0 = poly.eval(0.0);
    if at0.abs() < 1e-300 {
        return Err(singular_error(&mat));
    }
    // pin the constraint exactly
    Ok((poly.scaled(1.0 / at0)?, lambda / at0))
}

fn singular_error(mat: &DMatrix<f64>) -> Error {
    let svd = mat.clone().svd(false, false);
    let max = svd.singular_values.max();
    let min = svd.singular_values.min();
    Error::SingularSystem { cond: if min > 0.0 { max / min } else { f64::INFINITY } }
}

/// All candidate extremum locations of `|p|` on `S`: the interval endpoints
/// plus the interior critical points, ascending, with `|p|` values.
pub fn local_extrema(p: &RealPolynomial, set: &IntervalUnion) -> Result<Vec<(f64, f64)>> {
    Ok(extrema_signed(p, set)?
        .into_iter()
        .map(|(x, v)| (x, v.abs()))
        .collect())
}

pub(crate) fn extrema_signed(p: &RealPolynomial, set: &IntervalUnion) -> Result<Vec<(f64, f64)>> {
    let dp = p.derivative();
    let mut xs: Vec<f64> = Vec::new();
    for (a, b) in set.intervals() {
        xs.push(a);
        if dp.degree() >= 1 || dp.coeffs()[0] != 0.0 {
            xs.extend(real_roots_in(&dp, a, b)?);
        }
        xs.push(b);
    }
    xs.sort_by(f64::total_cmp);
    let mut out: Vec<(f64, f64)> = Vec::with_capacity(xs.len());
    for x in xs {
        match out.last() {
            Some(&(last, _)) if x - last <= 1e-11 * (1.0 + x.abs()) => {}
            _ => out.push((x, p.eval(x))),
        }
    }
    Ok(out)
}

/// Picks `target` points from the sorted candidates such that
/// `w = sign(x) value` strictly alternates, keeping the global maximum of
/// `|w|`. Returns `None` when fewer than `target` alternating runs exist.
pub(crate) fn select_reference(cands: &[(f64, f64)], target: usize) -> Option<Vec<f64>> {
    let mut runs: Vec<(f64, f64)> = Vec::new(); // (x, w), one entry per sign run
    for &(x, v) in cands {
        let w = v * x.signum();
        if w == 0.0 {
            continue;
        }
        match runs.last_mut() {
            Some(last) if last.1.signum() == w.signum() => {
                if w.abs() > last.1.abs() {
                    *last = (x, w);
                }
            }
            _ => runs.push((x, w)),
        }
    }
    if runs.len() < target {
        return None;
    }
    while runs.len() > target {
        let g = runs
            .iter()
            .enumerate()
            .max_by(|a, b| a.1 .1.abs().total_cmp(&b.1 .1.abs()))
            .map(|(i, _)| i)
            .unwrap();
        if (runs.len() - target) % 2 == 1 {
            // drop one end, never the global maximum
            let drop_first = if g == 0 {
                false
            } else if g == runs.len() - 1 {
                true
            } else {
                runs[0].1.abs() <= runs[runs.len() - 1].1.abs()
            };
            if drop_first {
                runs.remove(0);
            } else {
                runs.pop();
            }
        } else {
            // drop the weakest adjacent pair that spares the global maximum
            let mut best: Option<(usize, f64)> = None;
            for i in 0..runs.len() - 1 {
                if i == g || i + 1 == g {
                    continue;
                }
                let cost = runs[i].1.abs().max(runs[i + 1].1.abs());
                if best.is_none_or(|(_, c)| cost < c) {
                    best = Some((i, cost));
                }
            }
            match best {
                Some((i, _)) => {
                    runs.drain(i..=i + 1);
                }
                None => {
                    // global max sits between the only candidate pairs:
                    // drop both ends instead
                    runs.pop();
                    runs.remove(0);
                }
            }
        }
    }
    Some(runs.into_iter().map(|(x, _)| x).collect())
}

/// Classical single-point exchange: insert the global extremum into the
/// reference, replacing the neighbor whose `w`-sign matches.
fn single_exchange(points: &[f64], r: &RealPolynomial, x_star: f64) -> Vec<f64> {
    let w = |x: f64| r.eval(x) * x.signum();
    let w_star = w(x_star);
    let mut pts = points.to_vec();
    let i = pts.partition_point(|&p| p < x_star);
    if i == 0 {
        if w(pts[0]).signum() == w_star.signum() {
            pts[0] = x_star;
        } else {
            pts.insert(0, x_star);
            pts.pop();
        }
    } else if i == pts.len() {
        if w(pts[i - 1]).signum() == w_star.signum() {
            pts[i - 1] = x_star;
        } else {
            pts.push(x_star);
            pts.remove(0);
        }
    } else if w(pts[i - 1]).signum() == w_star.signum() {
        pts[i - 1] = x_star;
    } else {
        pts[i] = x_star;
    }
    pts
}

/// Chebyshev-distributed starting reference: each interval receives points
/// proportionally to its length (at least one each while supply lasts,
/// longest intervals first when `n+1 < ℓ`).
fn initial_reference(set: &IntervalUnion, n: usize) -> Vec<f64> {
    let intervals: Vec<(f64, f64)> = set.intervals().collect();
    let ell = intervals.len();
    let total: f64 = set.total_length();
    let want = n + 1;
    let mut alloc = vec![0usize; ell];

    if want >= ell {
        let mut assigned = 0;
        let mut fracs: Vec<(usize, f64)> = Vec::with_capacity(ell);
        for (i, &(a, b)) in intervals.iter().enumerate() {
            let quota = want as f64 * (b - a) / total;
            alloc[i] = (quota.floor() as usize).max(1);
            assigned += alloc[i];
            fracs.push((i, quota - quota.floor()));
        }
        fracs.sort_by(|p, q| q.1.total_cmp(&p.1));
        let mut k = 0;
        while assigned < want {
            alloc[fracs[k % ell].0] += 1;
            assigned += 1;
            k += 1;
        }
        while assigned > want {
            let i = (0..ell).max_by_key(|&i| alloc[i]).unwrap();
            alloc[i] -= 1;
            assigned -= 1;
        }
    } else {
        let mut order: Vec<usize> = (0..ell).collect();
        order.sort_by(|&i, &j| {
            let li = intervals[i].1 - intervals[i].0;
            let lj = intervals[j].1 - intervals[j].0;
            lj.total_cmp(&li)
        });
        for &i in order.iter().take(want) {
            alloc[i] = 1;
        }
    }

    let mut points = Vec::with_capacity(want);
    for (i, &(a, b)) in intervals.iter().enumerate() {
        let k = alloc[i];
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        if k == 1 {
            points.push(mid);
        } else {
            for j in 0..k {
                let theta = std::f64::consts::PI * j as f64 / (k - 1) as f64;
                points.push(mid - half * theta.cos());
            }
        }
    }
    points.sort_by(f64::total_cmp);
    points
}

/// Remez-type exchange for the minimal residual polynomial on `S`.
///
/// Converges when `(||R||_S - lambda)/lambda <= tol`; on hitting `max_iter`
/// the best iterate is returned with `certified = false`.
pub fn minres_exchange(
    set: &IntervalUnion,
    n: usize,
    tol: f64,
    max_iter: usize,
) -> Result<MinResResult> {
    if set.contains(0.0) {
        return Err(Error::ZeroInSet);
    }
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tol {tol}")));
    }
    if n == 0 {
        let reference = ReferenceSet::new(vec![set.endpoints()[0]])?;
        return Ok(MinResResult {
            polynomial: RealPolynomial::constant(1.0),
            deviation: 1.0,
            reference,
            effective_degree: 0,
            iterations: 0,
            certificate_residual: 0.0,
            certified: true,
        });
    }

    let (lo, hi) = set.hull();
    let mut points = initial_reference(set, n);
    let mut best: Option<(f64, MinResResult)> = None;

    for iter in 1..=max_iter {
        let (_, sigmas) = sign_pattern(&points)?;
        let solve = solve_patterned(lo, hi, &points, &sigmas);
        let (r, lambda_signed) = match solve {
            Ok(ok) => ok,
            Err(Error::SingularSystem { .. }) if points.len() > 1 => {
                // explicit lower-degree solve on one fewer point
                points.pop();
                let (_, sig) = sign_pattern(&points)?;
                solve_patterned(lo, hi, &points, &sig)?
            }
            Err(e) => return Err(e),
        };
        let lambda = lambda_signed.abs();

        let cands = extrema_signed(&r, set)?;
        let (x_star, v_star) = cands
            .iter()
            .copied()
            .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
            .expect("non-empty extrema");
        let norm = v_star.abs();

        let result = build_result(set, n, &r, norm, &points, iter, lambda, tol)?;
        if norm - lambda <= tol * lambda {
            return Ok(result);
        }
        if best.as_ref().is_none_or(|(l, _)| lambda > *l) {
            best = Some((lambda, result));
        }

        // multi-point exchange with the de la Vallee Poussin monotonicity
        // guard, single-point fallback otherwise
        let multi = select_reference(&cands, n + 1).filter(|pts| {
            pts.iter().all(|&x| r.eval(x).abs() >= lambda * (1.0 - 1e-12))
        });
        points = match multi {
            Some(pts) => pts,
            None => single_exchange(&points, &r, x_star),
        };
    }

    Ok(best.expect("at least one iterate").1)
}

#[allow(clippy::too_many_arguments)]
fn build_result(
    set: &IntervalUnion,
    n: usize,
    r: &RealPolynomial,
    norm: f64,
    points: &[f64],
    iterations: usize,
    lambda: f64,
    tol: f64,
) -> Result<MinResResult> {
    let (deltas, _) = sign_pattern(points)?;
    let sigmas: Vec<i8> = points
        .iter()
        .map(|&x| if r.eval(x) >= 0.0 { 1 } else { -1 })
        .collect();
    let certificate_residual = points
        .iter()
        .fold(0f64, |m, &x| m.max((r.eval(x).abs() - norm).abs()));
    let effective_degree = if n == 0 {
        0
    } else if r.degree() == n && r.coeffs()[n].abs() > 1e-9 * r.coeff_norm() {
        n
    } else {
        n - 1
    };
    let _ = set;
    Ok(MinResResult {
        polynomial: r.clone(),
        deviation: norm,
        reference: ReferenceSet { points: points.to_vec(), deltas, sigmas },
        effective_degree,
        iterations,
        certificate_residual,
        certified: norm - lambda <= tol * lambda,
    })
}

/// Independent bracket for `L_n(S)` from the exact discrete minimax on a
/// Chebyshev-density grid.
///
/// The discrete optimum is a true lower bound (the grid is a subset of `S`);
/// the continuous norm of the discrete optimizer is a true upper bound. With
/// `requested_gap = None` the grid is refined at most once (when the bracket
/// gap exceeds `1e-7 * upper`); passing a gap keeps doubling the density
/// until it is met or the refinement cap trips.
pub fn minres_grid_oracle(
    set: &IntervalUnion,
    n: usize,
    grid_per_interval: usize,
    requested_gap: Option<f64>,
) -> Result<GridBracket> {
    if set.contains(0.0) {
        return Err(Error::ZeroInSet);
    }
    if grid_per_interval < 4 * (n + 1) {
        return Err(Error::InvalidArgument(format!(
            "grid_per_interval {grid_per_interval} below 4(n+1) = {}",
            4 * (n + 1)
        )));
    }
    if n == 0 {
        return Ok(GridBracket {
            lower: 1.0,
            upper: 1.0,
            polynomial: RealPolynomial::constant(1.0),
        });
    }

    let max_doublings = if requested_gap.is_some() { 8 } else { 1 };
    let mut per_interval = grid_per_interval;
    let mut doublings = 0;
    loop {
        let grid = build_grid(set, per_interval);
        let (lower, polynomial) = discrete_exchange(set, n, &grid)?;
        let upper = local_extrema(&polynomial, set)?
            .into_iter()
            .fold(0f64, |m, (_, v)| m.max(v));
        let gap = upper - lower;
        let target = requested_gap.unwrap_or(1e-7 * upper);
        if gap <= target {
            return Ok(GridBracket { lower, upper, polynomial });
        }
        if doublings >= max_doublings {
            return match requested_gap {
                Some(req) => Err(Error::GridTooCoarse { gap, requested: req }),
                None => Ok(GridBracket { lower, upper, polynomial }),
            };
        }
        per_interval *= 2;
        doublings += 1;
    }
}

fn build_grid(set: &IntervalUnion, per_interval: usize) -> Vec<f64> {
    let mut grid = Vec::with_capacity(per_interval * set.ell());
    for (a, b) in set.intervals() {
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        for k in 0..per_interval {
            let theta = std::f64::consts::PI * k as f64 / (per_interval - 1) as f64;
            let x = mid - half * theta.cos();
            if x != 0.0 {
                grid.push(x);
            }
        }
    }
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    grid
}

fn discrete_exchange(
    set: &IntervalUnion,
    n: usize,
    grid: &[f64],
) -> Result<(f64, RealPolynomial)> {
    let (lo, hi) = set.hull();
    let mut points: Vec<f64> = (0..=n)
        .map(|k| grid[k * (grid.len() - 1) / n])
        .collect();
    points.dedup();
    let mut best: Option<(f64, RealPolynomial)> = None;

    for _ in 0..300 {
        let (_, sigmas) = sign_pattern(&points)?;
        let (r, lambda_signed) = solve_patterned(lo, hi, &points, &sigmas)?;
        let lambda = lambda_signed.abs();

        let cands: Vec<(f64, f64)> = grid.iter().map(|&x| (x, r.eval(x))).collect();
        let (x_star, v_star) = cands
            .iter()
            .copied()
            .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
            .unwrap();
        if best.as_ref().is_none_or(|(l, _)| lambda > *l) {
            best = Some((lambda, r.clone()));
        }
        if v_star.abs() <= lambda * (1.0 + 1e-12) {
            return Ok((lambda, r));
        }
        let multi = select_reference(&cands, n + 1).filter(|pts| {
            pts.iter().all(|&x| r.eval(x).abs() >= lambda * (1.0 - 1e-12))
        });
        points = match multi {
            Some(pts) => pts,
            None => single_exchange(&points, &r, x_star),
        };
    }
    // iteration cap: the bracket stays valid, just wider
    Ok(best.expect("at least one iterate"))
}

/// Confirms the alternation criterion a posteriori: `n+1` points of `S`
/// where `|R|` is within `tol * L` of `L` and the signs follow the pattern.
/// Passing certifies optimality by the sufficiency direction of the
/// criterion.
pub fn verify_alternation(
    res: &MinResResult,
    set: &IntervalUnion,
    tol: f64,
) -> AlternationCertificate {
    let l = res.deviation;
    let need = res.reference.points.len();
    let fail = AlternationCertificate { pass: false, witnesses: Vec::new(), max_residual: f64::NAN };
    if l <= 0.0 || l.is_nan() || (res.polynomial.eval(0.0) - 1.0).abs() > 1e-9 {
        return fail;
    }
    let Ok(cands) = extrema_signed(&res.polynomial, set) else {
        return fail;
    };
    let near: Vec<(f64, f64)> = cands
        .into_iter()
        .filter(|&(_, v)| (v.abs() - l).abs() <= tol * l)
        .collect();
    match select_reference(&near, need) {
        Some(witnesses) => {
            let max_residual = witnesses
                .iter()
                .fold(0f64, |m, &x| m.max((res.polynomial.eval(x).abs() - l).abs()));
            AlternationCertificate { pass: true, witnesses, max_residual }
        }
        None => fail,
    }
}
