//! Globally adaptive Gauss-Kronrod quadrature (7-15 pair).
//!
//! The Green's-function integrands carry inverse-square-root singularities
//! at interval endpoints; callers remove them with the substitution
//! `t = a ± s^2` before integrating, so the integrands seen here are smooth.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

// QUADPACK dqk15 nodes and weights.
const XGK: [f64; 8] = [
    0.991_455_371_120_813,
    0.949_107_912_342_759,
    0.864_864_423_359_769,
    0.741_531_185_599_394,
    0.586_087_235_467_691,
    0.405_845_151_377_397,
    0.207_784_955_007_898,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529,
    0.063_092_092_629_979,
    0.104_790_010_322_250,
    0.140_653_259_715_525,
    0.169_004_726_639_267,
    0.190_350_578_064_785,
    0.204_432_940_075_298,
    0.209_482_141_084_728,
];
const WG: [f64; 4] = [
    0.129_484_966_168_870,
    0.279_705_391_489_277,
    0.381_830_050_505_119,
    0.417_959_183_673_469,
];

const MAX_PANELS: usize = 4096;

#[derive(Debug, Clone, Copy)]
pub(crate) struct QuadResult {
    pub value: f64,
    pub est_error: f64,
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Result<Panel> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut resk = WGK[7] * fc;
    let mut resg = WG[3] * fc;
    for k in 0..7 {
        let x = h * XGK[k];
        let f1 = f(c - x);
        let f2 = f(c + x);
        let sum = f1 + f2;
        resk += WGK[k] * sum;
        if k % 2 == 1 {
            resg += WG[k / 2] * sum;
        }
    }
    let value = resk * h;
    if !value.is_finite() {
        return Err(Error::NonFinite("quadrature integrand".into()));
    }
    let err = ((resk - resg) * h).abs();
    Ok(Panel { a, b, value, err })
}

/// Integrates `f` over `[a, b]` to absolute tolerance `tol` by bisecting the
/// panel with the worst Kronrod error estimate.
pub(crate) fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<QuadResult> {
    if a == b {
        return Ok(QuadResult { value: 0.0, est_error: 0.0 });
    }
    let (a, b, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
    let mut heap = BinaryHeap::new();
    heap.push(gk15(&f, a, b)?);
    let mut total_err: f64 = heap.peek().unwrap().err;
    let mut total_val: f64 = heap.peek().unwrap().value;

    while total_err > tol && total_err > 1e-15 * total_val.abs() {
        if heap.len() >= MAX_PANELS {
            return Err(Error::QuadratureNonConvergence {
                requested: tol,
                achieved: total_err,
            });
        }
        let worst = heap.pop().unwrap();
        let m = 0.5 * (worst.a + worst.b);
        if m == worst.a || m == worst.b {
            return Err(Error::QuadratureNonConvergence {
                requested: tol,
                achieved: total_err,
            });
        }
        total_err -= worst.err;
        total_val -= worst.value;
        let left = gk15(&f, worst.a, m)?;
        let right = gk15(&f, m, worst.b)?;
        total_err += left.err + right.err;
        total_val += left.value + right.value;
        heap.push(left);
        heap.push(right);
    }
    Ok(QuadResult { value: sign * total_val, est_error: total_err })
}
