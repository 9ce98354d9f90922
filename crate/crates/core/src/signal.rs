//! Finitely supported complex signals on the integers and the convolution
//! systems they define.
//!
//! A [`Signal`] stores its values densely over the support together with the
//! index of the first stored entry. Reads outside the stored range return 0.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SignalRepr", into = "SignalRepr")]
pub struct Signal {
    offset: i64,
    values: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct SignalRepr {
    offset: i64,
    re: Vec<f64>,
    #[serde(default)]
    im: Vec<f64>,
}

impl TryFrom<SignalRepr> for Signal {
    type Error = Error;

    fn try_from(r: SignalRepr) -> Result<Self> {
        let values = crate::zip_complex(&r.re, &r.im)?;
        Ok(Signal::new(r.offset, values))
    }
}

impl From<Signal> for SignalRepr {
    fn from(s: Signal) -> Self {
        SignalRepr {
            offset: s.offset,
            re: s.values.iter().map(|c| c.re).collect(),
            im: s.values.iter().map(|c| c.im).collect(),
        }
    }
}

impl Signal {
    /// Builds a signal whose entry at `offset + i` is `values[i]`; leading
    /// and trailing zeros are trimmed.
    pub fn new(offset: i64, values: Vec<Complex64>) -> Self {
        let first = values.iter().position(|v| *v != Complex64::new(0.0, 0.0));
        match first {
            None => Signal::zero(),
            Some(first) => {
                let last = values
                    .iter()
                    .rposition(|v| *v != Complex64::new(0.0, 0.0))
                    .unwrap();
                Signal {
                    offset: offset + first as i64,
                    values: values[first..=last].to_vec(),
                }
            }
        }
    }

    pub fn from_real(offset: i64, values: &[f64]) -> Self {
        Signal::new(offset, values.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn zero() -> Self {
        Signal { offset: 0, values: Vec::new() }
    }

    /// The unit impulse at `m`.
    pub fn delta(m: i64) -> Self {
        Signal { offset: m, values: vec![Complex64::new(1.0, 0.0)] }
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    /// First and last indices of the support, or `None` for the zero signal.
    pub fn support(&self) -> Option<(i64, i64)> {
        if self.values.is_empty() {
            None
        } else {
            Some((self.offset, self.offset + self.values.len() as i64 - 1))
        }
    }

    /// True when the signal vanishes at every negative index.
    pub fn is_causal(&self) -> bool {
        self.support().is_none_or(|(first, _)| first >= 0)
    }

    pub fn get(&self, n: i64) -> Complex64 {
        let i = n - self.offset;
        if i < 0 || i as usize >= self.values.len() {
            Complex64::new(0.0, 0.0)
        } else {
            self.values[i as usize]
        }
    }

    /// Iterates over `(index, value)` pairs of the stored range.
    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(move |(i, v)| (self.offset + i as i64, *v))
    }

    /// Coefficients at indices `0..len` as a dense vector.
    pub fn causal_coefficients(&self, len: usize) -> Vec<Complex64> {
        (0..len as i64).map(|n| self.get(n)).collect()
    }

    pub fn scale(&self, c: Complex64) -> Signal {
        Signal::new(self.offset, self.values.iter().map(|v| v * c).collect())
    }

    pub fn add(&self, other: &Signal) -> Signal {
        match (self.support(), other.support()) {
            (None, _) => other.clone(),
            (_, None) => self.clone(),
            (Some((a0, a1)), Some((b0, b1))) => {
                let lo = a0.min(b0);
                let hi = a1.max(b1);
                let values = (lo..=hi).map(|n| self.get(n) + other.get(n)).collect();
                Signal::new(lo, values)
            }
        }
    }

    /// Restriction to indices `n >= 0`.
    pub fn causal_part(&self) -> Signal {
        match self.support() {
            None => Signal::zero(),
            Some((_, last)) if last < 0 => Signal::zero(),
            Some((first, last)) => {
                let lo = first.max(0);
                Signal::new(lo, (lo..=last).map(|n| self.get(n)).collect())
            }
        }
    }

    /// Restriction to indices `n < 0`.
    pub fn anticausal_part(&self) -> Signal {
        match self.support() {
            None => Signal::zero(),
            Some((first, _)) if first >= 0 => Signal::zero(),
            Some((first, last)) => {
                let hi = last.min(-1);
                Signal::new(first, (first..=hi).map(|n| self.get(n)).collect())
            }
        }
    }
}

/// `(φ∗ψ)(m) = Σ_n φ(m−n) ψ(n)`.
pub fn convolve(phi: &Signal, psi: &Signal) -> Signal {
    if phi.is_zero() || psi.is_zero() {
        return Signal::zero();
    }
    let mut out = vec![Complex64::new(0.0, 0.0); phi.values.len() + psi.values.len() - 1];
    for (i, a) in phi.values.iter().enumerate() {
        for (j, b) in psi.values.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    Signal::new(phi.offset + psi.offset, out)
}

/// The shift `τ_m`: `(τ_m φ)(n) = φ(n − m)`.
pub fn shift(phi: &Signal, m: i64) -> Signal {
    Signal { offset: phi.offset + m, values: phi.values.clone() }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Norm {
    L1,
    L2,
    Inf,
}

pub fn lp_norm(phi: &Signal, p: Norm) -> f64 {
    let v = phi.values.iter();
    match p {
        Norm::L1 => v.map(|c| c.norm()).sum(),
        Norm::L2 => v.map(|c| c.norm_sqr()).sum::<f64>().sqrt(),
        Norm::Inf => v.map(|c| c.norm()).fold(0.0, f64::max),
    }
}

/// Operator gains of the convolution system `φ ↦ k∗φ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub l1_norm: f64,
    /// Exact ℓ∞ → ℓ∞ gain.
    pub linf_gain: f64,
    /// Upper bound on the ℓ² → ℓ² gain.
    pub l2_gain_upper: f64,
    /// The ℓ² bound is attained because every entry is a nonnegative real.
    pub l2_gain_exact_when_nonneg: bool,
}

pub fn stability_report(k: &Signal) -> StabilityReport {
    let l1 = lp_norm(k, Norm::L1);
    let nonneg = k.values.iter().all(|c| c.im == 0.0 && c.re >= 0.0);
    StabilityReport {
        l1_norm: l1,
        linf_gain: l1,
        l2_gain_upper: l1,
        l2_gain_exact_when_nonneg: nonneg,
    }
}

/// Bounded input `φ(n) = conj(k(−n))/|k(−n)|` with `‖φ‖_∞ = 1` and
/// `(k∗φ)(0) = ‖k‖₁`.
pub fn linf_extremal_witness(k: &Signal) -> Result<Signal> {
    let (first, last) = k.support().ok_or(Error::ZeroSystem)?;
    let values = (-last..=-first)
        .map(|n| {
            let c = k.get(-n);
            if c == Complex64::new(0.0, 0.0) {
                c
            } else {
                c.conj() / c.norm()
            }
        })
        .collect();
    Ok(Signal::new(-last, values))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn trims_zeros_on_construction() {
        let s = Signal::new(-2, vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(2.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(s.support(), Some((-1, 1)));
        assert_eq!(s.get(5), c(0.0, 0.0));
        assert!(Signal::new(3, vec![c(0.0, 0.0)]).is_zero());
    }

    #[test]
    fn convolution_examples() {
        let phi = Signal::from_real(0, &[1.0, 2.0, 3.0]);
        assert_eq!(convolve(&Signal::delta(0), &phi), phi);
        let k = Signal::from_real(0, &[1.0, 1.0]);
        assert_eq!(convolve(&phi, &k), Signal::from_real(0, &[1.0, 3.0, 5.0, 3.0]));
        assert_eq!(convolve(&shift(&Signal::delta(0), 1), &phi), shift(&phi, 1));
        assert!(convolve(&Signal::zero(), &phi).is_zero());
    }

    #[test]
    fn shift_examples() {
        assert_eq!(shift(&Signal::delta(0), 3), Signal::delta(3));
        let phi = Signal::from_real(-1, &[1.0, -4.0, 2.0]);
        assert_eq!(shift(&phi, 0), phi);
        assert_eq!(shift(&shift(&phi, 2), -2), phi);
    }

    #[test]
    fn norms() {
        for p in [Norm::L1, Norm::L2, Norm::Inf] {
            assert_eq!(lp_norm(&Signal::delta(0), p), 1.0);
        }
        assert!((lp_norm(&Signal::from_real(0, &[3.0, 4.0]), Norm::L2) - 5.0).abs() < 1e-15);
        assert_eq!(lp_norm(&Signal::from_real(0, &[1.0, -2.0, 3.0]), Norm::L1), 6.0);
    }

    #[test]
    fn stability_of_simple_systems() {
        let r = stability_report(&Signal::delta(0));
        assert_eq!((r.l1_norm, r.linf_gain, r.l2_gain_upper), (1.0, 1.0, 1.0));
        let r = stability_report(&Signal::from_real(0, &[1.0, 1.0]));
        assert_eq!(r.l1_norm, 2.0);
        assert!(r.l2_gain_exact_when_nonneg);
        let r = stability_report(&Signal::from_real(0, &[1.0, -1.0]));
        assert_eq!(r.l1_norm, 2.0);
        assert!(!r.l2_gain_exact_when_nonneg);
    }

    #[test]
    fn witness_attains_l1_norm() {
        let k = Signal::from_real(0, &[1.0, -1.0]);
        let w = linf_extremal_witness(&k).unwrap();
        assert_eq!(convolve(&k, &w).get(0), c(2.0, 0.0));
        assert_eq!(lp_norm(&w, Norm::Inf), 1.0);

        let w = linf_extremal_witness(&Signal::delta(0)).unwrap();
        assert_eq!(w, Signal::delta(0));

        let k = Signal::new(0, vec![c(0.0, 2.0)]);
        let w = linf_extremal_witness(&k).unwrap();
        assert_eq!(w.get(0), c(0.0, -1.0));
        assert_eq!(convolve(&k, &w).get(0), c(2.0, 0.0));
    }

    #[test]
    fn witness_rejects_zero_system() {
        assert_eq!(linf_extremal_witness(&Signal::zero()), Err(Error::ZeroSystem));
    }

    #[test]
    fn json_shape() {
        let s = Signal::new(-1, vec![c(1.0, 2.0), c(3.0, 0.0)]);
        let j = serde_json::to_string(&s).unwrap();
        assert_eq!(j, r#"{"offset":-1,"re":[1.0,3.0],"im":[2.0,0.0]}"#);
        let back: Signal = serde_json::from_str(&j).unwrap();
        assert_eq!(back, s);
        assert!(serde_json::from_str::<Signal>(r#"{"offset":0,"re":[1.0],"im":[1.0,2.0]}"#).is_err());
    }
}
