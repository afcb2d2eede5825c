use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite union of closed, non-degenerate real intervals
/// `[a_1,a_2] ∪ [a_3,a_4] ∪ …` with strictly increasing endpoints.
///
/// Construction merges touching or overlapping intervals, so the stored
/// endpoint list always describes disjoint intervals separated by open gaps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "IntervalUnionRepr", into = "IntervalUnionRepr")]
pub struct IntervalUnion {
    endpoints: Vec<f64>,
}

/// Where a point sits relative to an interval union.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Location {
    /// Inside (or on the boundary of) the `i`-th interval.
    InSet(usize),
    /// In the open gap between intervals `i` and `i+1`.
    InGap(usize),
    LeftOfHull,
    RightOfHull,
}

impl IntervalUnion {
    /// Builds the union from a flat endpoint list read as consecutive pairs.
    /// Pairs may come in any order; touching or overlapping intervals merge.
    pub fn from_endpoints(raw: &[f64]) -> Result<Self> {
        if raw.is_empty() || !raw.len().is_multiple_of(2) {
            return Err(Error::InvalidIntervals(format!(
                "need an even number of endpoints >= 2, got {}",
                raw.len()
            )));
        }
        if let Some(bad) = raw.iter().find(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!("endpoint {bad}")));
        }
        let mut pairs: Vec<(f64, f64)> = raw
            .chunks_exact(2)
            .map(|c| if c[0] <= c[1] { (c[0], c[1]) } else { (c[1], c[0]) })
            .collect();
        pairs.sort_by(|p, q| p.0.total_cmp(&q.0));

        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(pairs.len());
        for (lo, hi) in pairs {
            match merged.last_mut() {
                Some(last) if lo <= last.1 => last.1 = last.1.max(hi),
                _ => merged.push((lo, hi)),
            }
        }
        for &(lo, hi) in &merged {
            if lo == hi {
                return Err(Error::InvalidIntervals(format!(
                    "degenerate interval at {lo} after merging"
                )));
            }
        }
        let endpoints = merged.iter().flat_map(|&(lo, hi)| [lo, hi]).collect();
        Ok(Self { endpoints })
    }

    pub fn from_intervals(intervals: &[[f64; 2]]) -> Result<Self> {
        let flat: Vec<f64> = intervals.iter().flatten().copied().collect();
        Self::from_endpoints(&flat)
    }

    /// Number of intervals ℓ.
    pub fn ell(&self) -> usize {
        self.endpoints.len() / 2
    }

    /// Sorted endpoint list `a_1 < a_2 < … < a_{2ℓ}`.
    pub fn endpoints(&self) -> &[f64] {
        &self.endpoints
    }

    pub fn intervals(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.endpoints.chunks_exact(2).map(|c| (c[0], c[1]))
    }

    /// The open gaps `(a_{2j}, a_{2j+1})`, `j = 1..ℓ-1`.
    pub fn gaps(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.endpoints[1..self.endpoints.len() - 1]
            .chunks_exact(2)
            .map(|c| (c[0], c[1]))
    }

    /// Convex hull `[a_1, a_{2ℓ}]`.
    pub fn hull(&self) -> (f64, f64) {
        (self.endpoints[0], *self.endpoints.last().unwrap())
    }

    /// Membership in the closed union.
    pub fn contains(&self, x: f64) -> bool {
        matches!(self.locate(x), Location::InSet(_))
    }

    pub fn locate(&self, x: f64) -> Location {
        let (lo, hi) = self.hull();
        // NaN belongs to no interval
        if x.is_nan() || x < lo {
            return Location::LeftOfHull;
        }
        if x > hi {
            return Location::RightOfHull;
        }
        for (i, (a, b)) in self.intervals().enumerate() {
            if x < a {
                return Location::InGap(i - 1);
            }
            if x <= b {
                return Location::InSet(i);
            }
        }
        unreachable!("hull check covers all cases")
    }

    /// Total length of all intervals.
    pub fn total_length(&self) -> f64 {
        self.intervals().map(|(a, b)| b - a).sum()
    }
}

#[derive(Serialize, Deserialize)]
struct IntervalUnionRepr {
    intervals: Vec<[f64; 2]>,
}

impl TryFrom<IntervalUnionRepr> for IntervalUnion {
    type Error = Error;
    fn try_from(r: IntervalUnionRepr) -> Result<Self> {
        IntervalUnion::from_intervals(&r.intervals)
    }
}

impl From<IntervalUnion> for IntervalUnionRepr {
    fn from(u: IntervalUnion) -> Self {
        Self {
            intervals: u.intervals().map(|(a, b)| [a, b]).collect(),
        }
    }
}
