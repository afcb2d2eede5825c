//! Deterministic output rendering: every real is written with 17
//! significant digits (round-trip safe for f64, byte-identical across
//! runs).

use std::fmt::Display;

pub fn fmt_f64(v: f64) -> String {
    assert!(v.is_finite(), "output fields must be finite, got {v}");
    format!("{v:.16e}")
}

/// Minimal JSON object builder; keys stay in insertion order.
pub struct Obj {
    parts: Vec<String>,
}

impl Obj {
    pub fn new() -> Self {
        Self { parts: Vec::new() }
    }

    pub fn num(mut self, key: &str, v: f64) -> Self {
        self.parts.push(format!("\"{key}\":{}", fmt_f64(v)));
        self
    }

    pub fn int(mut self, key: &str, v: impl Display) -> Self {
        self.parts.push(format!("\"{key}\":{v}"));
        self
    }

    pub fn bool(mut self, key: &str, v: bool) -> Self {
        self.parts.push(format!("\"{key}\":{v}"));
        self
    }

    pub fn str(mut self, key: &str, v: &str) -> Self {
        self.parts.push(format!("\"{key}\":\"{v}\""));
        self
    }

    pub fn raw(mut self, key: &str, v: String) -> Self {
        self.parts.push(format!("\"{key}\":{v}"));
        self
    }

    pub fn nums(self, key: &str, vs: &[f64]) -> Self {
        let body = vs.iter().map(|&v| fmt_f64(v)).collect::<Vec<_>>().join(",");
        self.raw(key, format!("[{body}]"))
    }

    pub fn ints(self, key: &str, vs: impl Iterator<Item = impl Display>) -> Self {
        let body = vs.map(|v| v.to_string()).collect::<Vec<_>>().join(",");
        self.raw(key, format!("[{body}]"))
    }

    pub fn build(self) -> String {
        format!("{{{}}}", self.parts.join(","))
    }
}

/// Array of interval pairs `[[a,b],...]`.
pub fn intervals_json(pairs: impl Iterator<Item = (f64, f64)>) -> String {
    let body = pairs
        .map(|(a, b)| format!("[{},{}]", fmt_f64(a), fmt_f64(b)))
        .collect::<Vec<_>>()
        .join(",");
    format!("[{body}]")
}
