use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative threshold below which a leading coefficient counts as zero.
pub const COEFF_ZERO_TOL: f64 = 1e-12;

/// Coefficient basis of a [`RealPolynomial`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Basis {
    /// Powers of x.
    Monomial,
    /// Chebyshev polynomials `T_k(u)` of `u = (2x - lo - hi)/(hi - lo)`.
    Chebyshev { lo: f64, hi: f64 },
}

/// A real-coefficient polynomial with an explicit basis.
///
/// Trailing coefficients below `COEFF_ZERO_TOL` relative to the largest
/// coefficient are trimmed at construction, so `degree()` reports the
/// numerically supported degree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PolyRepr", into = "PolyRepr")]
pub struct RealPolynomial {
    basis: Basis,
    coeffs: Vec<f64>,
}

impl RealPolynomial {
    pub fn new(basis: Basis, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidPolynomial("empty coefficient list".into()));
        }
        if let Some(bad) = coeffs.iter().find(|c| !c.is_finite()) {
            return Err(Error::NonFinite(format!("coefficient {bad}")));
        }
        if let Basis::Chebyshev { lo, hi } = basis {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(Error::InvalidPolynomial(format!(
                    "Chebyshev reference interval [{lo},{hi}] must be finite with lo < hi"
                )));
            }
        }
        let scale = coeffs.iter().fold(0f64, |m, c| m.max(c.abs()));
        let mut coeffs = coeffs;
        while coeffs.len() > 1 && coeffs.last().unwrap().abs() <= COEFF_ZERO_TOL * scale {
            coeffs.pop();
        }
        Ok(Self { basis, coeffs })
    }

    pub fn monomial(coeffs: Vec<f64>) -> Result<Self> {
        Self::new(Basis::Monomial, coeffs)
    }

    pub fn chebyshev(lo: f64, hi: f64, coeffs: Vec<f64>) -> Result<Self> {
        Self::new(Basis::Chebyshev { lo, hi }, coeffs)
    }

    pub fn constant(c: f64) -> Self {
        Self { basis: Basis::Monomial, coeffs: vec![c] }
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading_coeff(&self) -> f64 {
        *self.coeffs.last().unwrap()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0.0)
    }

    /// Evaluates by Horner recursion (monomial) or Clenshaw recursion
    /// (Chebyshev); the Chebyshev recursion is valid outside the reference
    /// interval as well.
    pub fn eval(&self, x: f64) -> f64 {
        match self.basis {
            Basis::Monomial => {
                let mut acc = 0.0;
                for &c in self.coeffs.iter().rev() {
                    acc = acc * x + c;
                }
                acc
            }
            Basis::Chebyshev { lo, hi } => {
                let u = (2.0 * x - lo - hi) / (hi - lo);
                clenshaw(&self.coeffs, u)
            }
        }
    }

    /// Exact coefficient-wise derivative in the same basis.
    pub fn derivative(&self) -> Self {
        match self.basis {
            Basis::Monomial => {
                if self.coeffs.len() == 1 {
                    return Self::constant(0.0);
                }
                let coeffs = self
                    .coeffs
                    .iter()
                    .enumerate()
                    .skip(1)
                    .map(|(k, &c)| k as f64 * c)
                    .collect();
                Self { basis: Basis::Monomial, coeffs }
            }
            Basis::Chebyshev { lo, hi } => {
                let n = self.degree();
                if n == 0 {
                    return Self::constant(0.0);
                }
                let c = &self.coeffs;
                let mut d = vec![0.0; n + 2];
                for j in (0..n).rev() {
                    d[j] = d[j + 2] + 2.0 * (j as f64 + 1.0) * c[j + 1];
                }
                d[0] *= 0.5;
                d.truncate(n);
                let du_dx = 2.0 / (hi - lo);
                for v in &mut d {
                    *v *= du_dx;
                }
                Self { basis: Basis::Chebyshev { lo, hi }, coeffs: d }
            }
        }
    }

    /// Scales all coefficients by `factor` (the polynomial `factor * p`).
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.basis, self.coeffs.iter().map(|&c| factor * c).collect())
    }

    /// Largest absolute coefficient.
    pub fn coeff_norm(&self) -> f64 {
        self.coeffs.iter().fold(0f64, |m, c| m.max(c.abs()))
    }

    /// Conversion to the monomial basis.
    ///
    /// The basis change is badly conditioned (intermediates grow like
    /// `(1+sqrt 2)^n`), so coefficients accumulate in double-double
    /// precision and round once at the end.
    pub fn to_monomial(&self) -> Self {
        match self.basis {
            Basis::Monomial => self.clone(),
            Basis::Chebyshev { lo, hi } => {
                // u(x) = p*x + q
                let p = 2.0 / (hi - lo);
                let q = -(lo + hi) / (hi - lo);
                let n = self.degree();
                let mut acc = vec![Dd::ZERO; n + 1];
                let mut t_prev = vec![Dd::ZERO; n + 1]; // T_0(u(x)) in powers of x
                let mut t_cur = vec![Dd::ZERO; n + 1]; // T_1(u(x))
                t_prev[0] = Dd::from(1.0);
                acc[0] = acc[0].add_f64(self.coeffs[0]);
                if n >= 1 {
                    t_cur[0] = Dd::from(q);
                    t_cur[1] = Dd::from(p);
                    acc[0] = acc[0].add(t_cur[0].mul_f64(self.coeffs[1]));
                    acc[1] = acc[1].add(t_cur[1].mul_f64(self.coeffs[1]));
                }
                for k in 2..=n {
                    // T_k = 2(p x + q) T_{k-1} - T_{k-2}
                    let mut t_next = vec![Dd::ZERO; n + 1];
                    for j in 0..k {
                        let v = t_cur[j];
                        t_next[j + 1] = t_next[j + 1].add(v.mul_f64(2.0 * p));
                        t_next[j] = t_next[j].add(v.mul_f64(2.0 * q));
                    }
                    for j in 0..=k.saturating_sub(2) {
                        t_next[j] = t_next[j].add(t_prev[j].neg());
                    }
                    for j in 0..=k {
                        acc[j] = acc[j].add(t_next[j].mul_f64(self.coeffs[k]));
                    }
                    t_prev = t_cur;
                    t_cur = t_next;
                }
                let coeffs = acc.into_iter().map(Dd::to_f64).collect();
                Self::monomial(coeffs).expect("finite coefficients")
            }
        }
    }

    /// Conversion to the Chebyshev basis of `[lo, hi]`, compensated like
    /// [`Self::to_monomial`].
    pub fn to_chebyshev(&self, lo: f64, hi: f64) -> Result<Self> {
        let mono = self.to_monomial();
        let n = mono.degree();
        let alpha = (hi - lo) / 2.0;
        let beta = (hi + lo) / 2.0;
        // Horner over Chebyshev coefficient vectors: acc <- acc*x + a_k.
        let mut acc = vec![Dd::from(mono.coeffs[n])];
        for k in (0..n).rev() {
            // x * T_j = alpha (T_{j+1} + T_{|j-1|})/2 + beta T_j, with
            // x * T_0 = alpha T_1 + beta T_0
            let mut out = vec![Dd::ZERO; acc.len() + 1];
            for (j, &cj) in acc.iter().enumerate() {
                out[j] = out[j].add(cj.mul_f64(beta));
                if j == 0 {
                    out[1] = out[1].add(cj.mul_f64(alpha));
                } else {
                    out[j + 1] = out[j + 1].add(cj.mul_f64(0.5 * alpha));
                    out[j - 1] = out[j - 1].add(cj.mul_f64(0.5 * alpha));
                }
            }
            out[0] = out[0].add_f64(mono.coeffs[k]);
            acc = out;
        }
        Self::chebyshev(lo, hi, acc.into_iter().map(Dd::to_f64).collect())
    }
}

/// Unevaluated double-double value for compensated accumulation.
#[derive(Debug, Clone, Copy)]
struct Dd {
    hi: f64,
    lo: f64,
}

impl Dd {
    const ZERO: Self = Self { hi: 0.0, lo: 0.0 };

    fn from(v: f64) -> Self {
        Self { hi: v, lo: 0.0 }
    }

    fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    fn neg(self) -> Self {
        Self { hi: -self.hi, lo: -self.lo }
    }

    fn add(self, other: Self) -> Self {
        let (s, e) = two_sum(self.hi, other.hi);
        Self::renorm(s, e + self.lo + other.lo)
    }

    fn add_f64(self, v: f64) -> Self {
        let (s, e) = two_sum(self.hi, v);
        Self::renorm(s, e + self.lo)
    }

    fn mul_f64(self, v: f64) -> Self {
        let p = self.hi * v;
        let e = self.hi.mul_add(v, -p);
        Self::renorm(p, e + self.lo * v)
    }

    fn renorm(hi: f64, lo: f64) -> Self {
        let s = hi + lo;
        Self { hi: s, lo: lo - (s - hi) }
    }
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let v = s - a;
    (s, (a - (s - v)) + (b - v))
}

/// Clenshaw recursion for `sum c_k T_k(u)`.
pub(crate) fn clenshaw(coeffs: &[f64], u: f64) -> f64 {
    let mut b1 = 0.0;
    let mut b2 = 0.0;
    for &c in coeffs.iter().skip(1).rev() {
        let b = 2.0 * u * b1 - b2 + c;
        b2 = b1;
        b1 = b;
    }
    u * b1 - b2 + coeffs[0]
}

/// Values of the Chebyshev basis `T_0(u)..T_n(u)` at a single `u`.
pub(crate) fn cheb_basis_row(n: usize, u: f64) -> Vec<f64> {
    let mut row = Vec::with_capacity(n + 1);
    row.push(1.0);
    if n >= 1 {
        row.push(u);
    }
    for k in 2..=n {
        let v = 2.0 * u * row[k - 1] - row[k - 2];
        row.push(v);
    }
    row
}

#[derive(Serialize, Deserialize)]
struct PolyRepr {
    basis: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    interval: Option<[f64; 2]>,
    coeffs: Vec<f64>,
}

impl TryFrom<PolyRepr> for RealPolynomial {
    type Error = Error;
    fn try_from(r: PolyRepr) -> Result<Self> {
        match r.basis.as_str() {
            "monomial" => RealPolynomial::monomial(r.coeffs),
            "chebyshev" => {
                let [lo, hi] = r.interval.ok_or_else(|| {
                    Error::InvalidPolynomial("chebyshev basis requires \"interval\"".into())
                })?;
                RealPolynomial::chebyshev(lo, hi, r.coeffs)
            }
            other => Err(Error::InvalidPolynomial(format!("unknown basis {other:?}"))),
        }
    }
}

impl From<RealPolynomial> for PolyRepr {
    fn from(p: RealPolynomial) -> Self {
        match p.basis {
            Basis::Monomial => Self { basis: "monomial".into(), interval: None, coeffs: p.coeffs },
            Basis::Chebyshev { lo, hi } => Self {
                basis: "chebyshev".into(),
                interval: Some([lo, hi]),
                coeffs: p.coeffs,
            },
        }
    }
}
