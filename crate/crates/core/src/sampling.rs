//! Band-limited signals on the real line: sinc kernels and reconstruction
//! from integer samples, with band limit `[−π, π]` and unit sampling rate.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// `sin(πt)/(πt)`, with `sinc(0) = 1`.
pub fn sinc(t: f64) -> f64 {
    if t == 0.0 {
        1.0
    } else if t.fract() == 0.0 {
        0.0
    } else {
        let x = PI * t;
        x.sin() / x
    }
}

/// Samples `a_n` at consecutive integers `start, start + 1, …`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SampleRepr", into = "SampleRepr")]
pub struct SampleSet {
    start: i64,
    values: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct SampleRepr {
    start: i64,
    re: Vec<f64>,
    #[serde(default)]
    im: Vec<f64>,
}

impl TryFrom<SampleRepr> for SampleSet {
    type Error = Error;
    fn try_from(r: SampleRepr) -> Result<Self> {
        Ok(SampleSet::new(r.start, crate::zip_complex(&r.re, &r.im)?))
    }
}

impl From<SampleSet> for SampleRepr {
    fn from(s: SampleSet) -> Self {
        SampleRepr {
            start: s.start,
            re: s.values.iter().map(|v| v.re).collect(),
            im: s.values.iter().map(|v| v.im).collect(),
        }
    }
}

impl SampleSet {
    pub fn new(start: i64, values: Vec<Complex64>) -> Self {
        SampleSet { start, values }
    }

    /// Samples `f(n)` for `n ∈ [−m, m]`.
    pub fn symmetric(m: i64, f: impl Fn(i64) -> Complex64) -> Self {
        SampleSet { start: -m, values: (-m..=m).map(f).collect() }
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    /// Last sampled index, or `start − 1` when empty.
    pub fn end(&self) -> i64 {
        self.start + self.values.len() as i64 - 1
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn get(&self, n: i64) -> Complex64 {
        let i = n - self.start;
        if i < 0 || i as usize >= self.values.len() {
            ZERO
        } else {
            self.values[i as usize]
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.values.iter().enumerate().map(move |(i, v)| (self.start + i as i64, *v))
    }
}

/// `Σ_n a_n sinc(t − n)` over the stored window; exact at integers.
pub fn reconstruct(s: &SampleSet, t: f64) -> Complex64 {
    if t.fract() == 0.0 {
        return s.get(t as i64);
    }
    s.iter().map(|(n, a)| a * sinc(t - n as f64)).sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Reconstruction {
    pub value: Complex64,
    /// Bound on `|f(t) − value|` given the energy of the unsampled tail.
    pub tail_bound: f64,
}

/// [`reconstruct`] with the Cauchy–Schwarz bound
/// `sqrt(tail_energy · (1 − Σ_{n in window} sinc²(t − n)))`, using
/// `Σ_{n∈ℤ} sinc²(t − n) = 1`.
pub fn reconstruct_certified(s: &SampleSet, t: f64, tail_energy: f64) -> Reconstruction {
    let inside: f64 = s.iter().map(|(n, _)| sinc(t - n as f64).powi(2)).sum();
    let outside = (1.0 - inside).max(0.0);
    Reconstruction { value: reconstruct(s, t), tail_bound: (tail_energy.max(0.0) * outside).sqrt() }
}

/// `Σ |a_n|²`.
pub fn sample_energy(s: &SampleSet) -> f64 {
    s.values.iter().map(|v| v.norm_sqr()).sum()
}

/// `∫ sinc(t − n) sinc(t − m) dt` over `[−half_width, half_width]` by the
/// trapezoid rule with the given step.
pub fn orthonormality_check(n: i64, m: i64, half_width: f64, step: f64) -> Result<f64> {
    if step.is_nan() || step <= 0.0 || half_width.is_nan() || half_width <= 0.0 {
        return Err(Error::InvalidInput("step and window must be positive".into()));
    }
    let count = (2.0 * half_width / step).round() as i64;
    let h = 2.0 * half_width / count as f64;
    let f = |t: f64| sinc(t - n as f64) * sinc(t - m as f64);
    let inner: f64 = (1..count).map(|k| f(-half_width + k as f64 * h)).sum();
    Ok(h * (inner + 0.5 * (f(-half_width) + f(half_width))))
}
