//! Complex polynomials and rational transfer functions.
//!
//! Coefficients are stored in ascending degree. Every [`RationalFunction`]
//! is kept in reduced form: common roots of numerator and denominator (paired
//! within a relative tolerance) are divided out on construction.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::signal::Signal;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// Roots closer than this (relative) are treated as one multiple root.
pub const CLUSTER_TOL: f64 = 1e-7;
/// Numerator/denominator roots closer than this (relative) cancel.
pub const CANCEL_TOL: f64 = 1e-9;
/// Half-width of the band around the unit circle treated as "on the circle".
pub const CIRCLE_TOL: f64 = 1e-9;
/// Trailing coefficients below this fraction of the largest are dropped.
const COEFF_NOISE: f64 = 1e-13;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PolyRepr", into = "PolyRepr")]
pub struct Polynomial {
    coeffs: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct PolyRepr {
    re: Vec<f64>,
    #[serde(default)]
    im: Vec<f64>,
}

impl TryFrom<PolyRepr> for Polynomial {
    type Error = Error;
    fn try_from(r: PolyRepr) -> Result<Self> {
        Ok(Polynomial::new(crate::zip_complex(&r.re, &r.im)?))
    }
}

impl From<Polynomial> for PolyRepr {
    fn from(p: Polynomial) -> Self {
        PolyRepr {
            re: p.coeffs.iter().map(|c| c.re).collect(),
            im: p.coeffs.iter().map(|c| c.im).collect(),
        }
    }
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.last() == Some(&ZERO) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Polynomial::new(coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: Complex64) -> Self {
        Polynomial::new(vec![c])
    }

    /// `z^k`.
    pub fn monomial(k: usize) -> Self {
        let mut c = vec![ZERO; k + 1];
        c[k] = ONE;
        Polynomial { coeffs: c }
    }

    /// `leading · Π (z − r)`.
    pub fn from_roots(roots: &[Complex64], leading: Complex64) -> Self {
        let mut p = Polynomial::constant(leading);
        for &r in roots {
            p = p.mul(&Polynomial::new(vec![-r, ONE]));
        }
        p
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or(ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Complex64 {
        self.coeffs.last().copied().unwrap_or(ZERO)
    }

    /// Order of the zero at the origin.
    pub fn valuation(&self) -> usize {
        self.coeffs.iter().position(|c| *c != ZERO).unwrap_or(0)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, c| acc * z + c)
    }

    pub fn derivative(&self) -> Polynomial {
        Polynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * k as f64)
                .collect(),
        )
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(other.coeffs.len());
        Polynomial::new((0..n).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.scale(-ONE))
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }

    pub fn scale(&self, c: Complex64) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn pow(&self, k: usize) -> Polynomial {
        (0..k).fold(Polynomial::constant(ONE), |acc, _| acc.mul(self))
    }

    /// Drops the factor `z^k`, i.e. the lowest `k` coefficients.
    pub fn shift_down(&self, k: usize) -> Polynomial {
        Polynomial::new(self.coeffs.iter().skip(k).copied().collect())
    }

    /// Drops trailing coefficients below `rel · max|c|`.
    pub fn trimmed(&self, rel: f64) -> Polynomial {
        let scale = self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let mut coeffs = self.coeffs.clone();
        while coeffs.last().is_some_and(|c| c.norm() <= rel * scale) {
            coeffs.pop();
        }
        Polynomial::new(coeffs)
    }

    /// Quotient of division by `(z − root)`, remainder discarded.
    ///
    /// Uses forward synthetic division for `|root| ≤ 1` and backward division
    /// otherwise, which keeps the deflation stable in both regimes.
    pub fn deflate(&self, root: Complex64) -> Polynomial {
        let n = match self.degree() {
            None | Some(0) => return Polynomial::zero(),
            Some(n) => n,
        };
        let c = &self.coeffs;
        let mut q = vec![ZERO; n];
        if root.norm() <= 1.0 {
            q[n - 1] = c[n];
            for k in (1..n).rev() {
                q[k - 1] = c[k] + root * q[k];
            }
        } else {
            q[0] = -c[0] / root;
            for k in 1..n {
                q[k] = (q[k - 1] - c[k]) / root;
            }
        }
        Polynomial::new(q)
    }

    /// All roots with multiplicity.
    ///
    /// Eigenvalues of the balanced companion matrix, polished by Newton steps
    /// on the original polynomial; roots within [`CLUSTER_TOL`] (relative) are
    /// replaced by their cluster mean. Exact zeros at the origin are split off
    /// first and returned as exact zeros.
    pub fn roots(&self) -> Result<Vec<Complex64>> {
        let deg = self.degree().ok_or(Error::ZeroPolynomial)?;
        if deg == 0 {
            return Ok(Vec::new());
        }
        let m = self.valuation();
        let p = self.shift_down(m);
        let mut roots = vec![ZERO; m];
        let n = p.degree().unwrap();
        match n {
            0 => {}
            1 => roots.push(-p.coeffs[0] / p.coeffs[1]),
            _ => {
                let mut found = companion_roots(&p);
                for r in found.iter_mut() {
                    *r = newton_polish(&p, *r);
                }
                cluster_roots(&mut found);
                roots.extend(found);
            }
        }
        Ok(roots)
    }
}

fn companion_roots(p: &Polynomial) -> Vec<Complex64> {
    let n = p.degree().unwrap();
    let lead = p.leading();
    let mut a = CMatrix::zeros(n, n);
    for i in 1..n {
        a[(i, i - 1)] = ONE;
    }
    for i in 0..n {
        a[(i, n - 1)] = -p.coeffs[i] / lead;
    }
    balance(&mut a);
    linalg::eigenvalues(&a).unwrap_or_else(|| {
        // Schur did not converge; fall back to Durand–Kerner iteration.
        durand_kerner(p)
    })
}

/// Diagonal similarity scaling (radix 2) equalizing row and column norms.
fn balance(a: &mut CMatrix) {
    let n = a.nrows();
    let mut done = false;
    while !done {
        done = true;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += a[(j, i)].norm();
                    r += a[(i, j)].norm();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            while c < r / 2.0 {
                c *= 2.0;
                r /= 2.0;
                f *= 2.0;
            }
            while c >= r * 2.0 {
                c /= 2.0;
                r *= 2.0;
                f /= 2.0;
            }
            if (c + r) / f < 0.95 * s {
                done = false;
                for j in 0..n {
                    a[(i, j)] /= f;
                    a[(j, i)] *= f;
                }
            }
        }
    }
}

fn durand_kerner(p: &Polynomial) -> Vec<Complex64> {
    let n = p.degree().unwrap();
    let monic = p.scale(1.0 / p.leading());
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..n).map(|k| seed.powi(k as i32)).collect();
    for _ in 0..2000 {
        let mut delta = 0.0f64;
        for i in 0..n {
            let denom: Complex64 = (0..n).filter(|&j| j != i).map(|j| z[i] - z[j]).product();
            let step = monic.eval(z[i]) / denom;
            z[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-15 {
            break;
        }
    }
    z
}

fn newton_polish(p: &Polynomial, mut r: Complex64) -> Complex64 {
    let dp = p.derivative();
    let mut val = p.eval(r).norm();
    for _ in 0..8 {
        let d = dp.eval(r);
        if d == ZERO {
            break;
        }
        let cand = r - p.eval(r) / d;
        let cv = p.eval(cand).norm();
        if cv.is_finite() && cv < val {
            r = cand;
            val = cv;
        } else {
            break;
        }
    }
    r
}

fn cluster_roots(roots: &mut [Complex64]) {
    let n = roots.len();
    let mut group = vec![usize::MAX; n];
    for i in 0..n {
        if group[i] != usize::MAX {
            continue;
        }
        group[i] = i;
        for j in i + 1..n {
            if group[j] == usize::MAX
                && (roots[i] - roots[j]).norm() <= CLUSTER_TOL * roots[i].norm().max(1.0)
            {
                group[j] = i;
            }
        }
    }
    for g in 0..n {
        let members: Vec<usize> = (0..n).filter(|&k| group[k] == g).collect();
        if members.len() > 1 {
            let mean = members.iter().map(|&k| roots[k]).sum::<Complex64>() / members.len() as f64;
            for k in members {
                roots[k] = mean;
            }
        }
    }
}

/// Ratio of two polynomials in reduced form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RationalRepr", into = "RationalRepr")]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

#[derive(Serialize, Deserialize)]
struct RationalRepr {
    num_re: Vec<f64>,
    #[serde(default)]
    num_im: Vec<f64>,
    den_re: Vec<f64>,
    #[serde(default)]
    den_im: Vec<f64>,
}

impl TryFrom<RationalRepr> for RationalFunction {
    type Error = Error;
    fn try_from(r: RationalRepr) -> Result<Self> {
        RationalFunction::new(
            Polynomial::new(crate::zip_complex(&r.num_re, &r.num_im)?),
            Polynomial::new(crate::zip_complex(&r.den_re, &r.den_im)?),
        )
    }
}

impl From<RationalFunction> for RationalRepr {
    fn from(f: RationalFunction) -> Self {
        let split = |p: &Polynomial| {
            (
                p.coeffs.iter().map(|c| c.re).collect(),
                p.coeffs.iter().map(|c| c.im).collect(),
            )
        };
        let (num_re, num_im) = split(&f.num);
        let (den_re, den_im) = split(&f.den);
        RationalRepr { num_re, num_im, den_re, den_im }
    }
}

/// Why a rational function is or is not causal-stable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StabilityClass {
    Stable,
    PoleInDisk,
    PoleOnCircle,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoleZeroReport {
    pub zeros: Vec<Complex64>,
    pub poles: Vec<Complex64>,
    pub causal_stable: bool,
    pub class: StabilityClass,
}

impl RationalFunction {
    /// Builds `num/den` and reduces it.
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(reduce(num, den))
    }

    pub fn from_polynomial(p: Polynomial) -> Self {
        RationalFunction { num: p, den: Polynomial::constant(ONE) }
    }

    pub fn constant(c: Complex64) -> Self {
        Self::from_polynomial(Polynomial::constant(c))
    }

    pub fn zero() -> Self {
        Self::from_polynomial(Polynomial::zero())
    }

    /// The identity function `z`.
    pub fn z() -> Self {
        Self::from_polynomial(Polynomial::monomial(1))
    }

    /// `(z − a)/(1 − āz)`-type helper: `num_roots`/`den_roots` with gain.
    pub fn from_roots(zeros: &[Complex64], poles: &[Complex64], gain: Complex64) -> Result<Self> {
        Self::new(Polynomial::from_roots(zeros, gain), Polynomial::from_roots(poles, ONE))
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.num.eval(z) / self.den.eval(z)
    }

    pub fn zeros(&self) -> Vec<Complex64> {
        self.num.roots().unwrap_or_default()
    }

    pub fn poles(&self) -> Vec<Complex64> {
        self.den.roots().unwrap_or_default()
    }

    pub fn add(&self, other: &RationalFunction) -> RationalFunction {
        if self.den == other.den {
            return reduce(self.num.add(&other.num), self.den.clone());
        }
        reduce(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }

    pub fn sub(&self, other: &RationalFunction) -> RationalFunction {
        self.add(&other.scale(-ONE))
    }

    pub fn mul(&self, other: &RationalFunction) -> RationalFunction {
        reduce(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn scale(&self, c: Complex64) -> RationalFunction {
        if c == ZERO {
            return RationalFunction::zero();
        }
        RationalFunction { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn recip(&self) -> Result<RationalFunction> {
        if self.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(reduce(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, other: &RationalFunction) -> Result<RationalFunction> {
        Ok(self.mul(&other.recip()?))
    }

    pub fn derivative(&self) -> RationalFunction {
        let n = self.num.derivative().mul(&self.den).sub(&self.num.mul(&self.den.derivative()));
        reduce(n, self.den.mul(&self.den))
    }

    /// `self((a z + b)/(c z + d))`.
    pub fn compose_mobius(&self, a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<RationalFunction> {
        if a * d - b * c == ZERO {
            return Err(Error::InvalidInput("degenerate Möbius map: ad − bc = 0".into()));
        }
        let top = Polynomial::new(vec![b, a]);
        let bottom = Polynomial::new(vec![d, c]);
        let deg = self.num.degree().unwrap_or(0).max(self.den.degree().unwrap_or(0));
        let lift = |p: &Polynomial| {
            p.coeffs.iter().enumerate().fold(Polynomial::zero(), |acc, (k, ck)| {
                acc.add(&top.pow(k).mul(&bottom.pow(deg - k)).scale(*ck))
            })
        };
        RationalFunction::new(lift(&self.num), lift(&self.den))
    }

    /// First `len` Taylor coefficients at the origin, by recursive division.
    pub fn impulse_response(&self, len: usize) -> Result<Signal> {
        let d0 = self.den.coeff(0);
        if d0 == ZERO {
            return Err(Error::NotCausalAtOrigin);
        }
        let mut out: Vec<Complex64> = Vec::with_capacity(len);
        for n in 0..len {
            let mut acc = self.num.coeff(n);
            for k in 1..=n.min(self.den.coeffs.len().saturating_sub(1)) {
                acc -= self.den.coeffs[k] * out[n - k];
            }
            out.push(acc / d0);
        }
        Ok(Signal::new(0, out))
    }

    /// Pole/zero report; causal-stable iff every pole lies outside the closed
    /// disk by more than [`CIRCLE_TOL`].
    pub fn classify(&self) -> PoleZeroReport {
        let poles = self.poles();
        let mut class = StabilityClass::Stable;
        for p in &poles {
            let r = p.norm();
            if r < 1.0 - CIRCLE_TOL {
                class = StabilityClass::PoleInDisk;
                break;
            }
            if r <= 1.0 + CIRCLE_TOL {
                class = StabilityClass::PoleOnCircle;
            }
        }
        PoleZeroReport {
            zeros: self.zeros(),
            poles,
            causal_stable: class == StabilityClass::Stable,
            class,
        }
    }
}

/// Roots of `p` with multiplicity; see [`Polynomial::roots`].
pub fn poly_roots(p: &Polynomial) -> Result<Vec<Complex64>> {
    p.roots()
}

pub fn classify(b: &RationalFunction) -> PoleZeroReport {
    b.classify()
}

fn reduce(num: Polynomial, den: Polynomial) -> RationalFunction {
    let mut num = num.trimmed(COEFF_NOISE);
    let mut den = den.trimmed(COEFF_NOISE);
    if num.is_zero() {
        return RationalFunction { num, den: Polynomial::constant(ONE) };
    }
    let v = num.valuation().min(den.valuation());
    num = num.shift_down(v);
    den = den.shift_down(v);
    if num.degree().unwrap() > 0 && den.degree().unwrap() > 0 {
        let num_roots = num.roots().unwrap_or_default();
        let den_roots = den.roots().unwrap_or_default();
        let mut used = vec![false; num_roots.len()];
        for rd in &den_roots {
            let best = num_roots
                .iter()
                .enumerate()
                .filter(|(i, _)| !used[*i])
                .map(|(i, rn)| (i, (rn - rd).norm()))
                .min_by(|a, b| a.1.total_cmp(&b.1));
            if let Some((i, dist)) = best {
                if dist <= CANCEL_TOL * rd.norm().max(1.0) {
                    used[i] = true;
                    num = num.deflate(num_roots[i]);
                    den = den.deflate(*rd);
                }
            }
        }
    }
    let lead = den.coeff(den.valuation());
    RationalFunction { num: num.scale(1.0 / lead), den: den.scale(1.0 / lead) }
}

/// Closed loop `P/(1 + PC)` of plant `P` under feedback `C`.
///
/// With `strict`, `C` must contain a delay (`C(0) = 0`).
pub fn feedback_closure(p: &RationalFunction, c: &RationalFunction, strict: bool) -> Result<RationalFunction> {
    if strict {
        let c0 = c.eval(ZERO);
        if c0.norm().is_nan() || c0.norm() > 1e-12 {
            return Err(Error::MissingDelay(c0.norm()));
        }
    }
    let num = p.num.mul(&c.den);
    let a = p.den.mul(&c.den);
    let b = p.num.mul(&c.num);
    let den = a.add(&b);
    let scale = a.coeff(0).norm() + b.coeff(0).norm();
    if den.coeff(0).norm() <= 1e-12 * scale.max(f64::MIN_POSITIVE) && scale > 0.0 {
        return Err(Error::AlgebraicLoop);
    }
    RationalFunction::new(num, den)
}

/// Compact decimal rendering of a real number.
pub(crate) fn fmt_real(x: f64) -> String {
    if x == x.round() && x.abs() < 1e15 {
        return format!("{}", x as i64);
    }
    let s = format!("{:.12}", x);
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

fn fmt_coeff(c: Complex64, tiny: f64) -> String {
    let re_small = c.re.abs() <= tiny;
    let im_small = c.im.abs() <= tiny;
    match (re_small, im_small) {
        (_, true) => fmt_real(c.re),
        (true, false) => format!("{}i", fmt_real(c.im)),
        (false, false) => {
            let sign = if c.im < 0.0 { "-" } else { "+" };
            format!("({} {} {}i)", fmt_real(c.re), sign, fmt_real(c.im.abs()))
        }
    }
}

fn fmt_poly(p: &Polynomial, unit: Complex64) -> String {
    let scale = p.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let tiny = 1e-12 * scale.max(1e-300);
    let mut terms = Vec::new();
    for (k, c) in p.coeffs.iter().enumerate() {
        let c = c / unit;
        if c.norm() <= tiny {
            continue;
        }
        let var = match k {
            0 => String::new(),
            1 => "z".to_string(),
            _ => format!("z^{k}"),
        };
        let coeff = fmt_coeff(c, tiny);
        let term = if k > 0 && coeff == "1" {
            var
        } else if k > 0 && coeff == "-1" {
            format!("-{var}")
        } else if k > 0 {
            format!("{coeff}{var}")
        } else {
            coeff
        };
        terms.push(term);
    }
    if terms.is_empty() {
        return "0".to_string();
    }
    let mut out = terms[0].clone();
    for t in &terms[1..] {
        if let Some(rest) = t.strip_prefix('-') {
            out.push_str(" - ");
            out.push_str(rest);
        } else {
            out.push_str(" + ");
            out.push_str(t);
        }
    }
    out
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&fmt_poly(self, ONE))
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let scale = self.den.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let den_is_const = self
            .den
            .coeffs
            .iter()
            .skip(1)
            .all(|c| c.norm() <= 1e-12 * scale);
        if den_is_const {
            write!(f, "{}", fmt_poly(&self.num, self.den.coeff(0)))
        } else {
            write!(f, "({}) / ({})", fmt_poly(&self.num, ONE), fmt_poly(&self.den, ONE))
        }
    }
}

impl std::ops::Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: Self) -> RationalFunction {
        RationalFunction::add(self, rhs)
    }
}

impl std::ops::Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: Self) -> RationalFunction {
        RationalFunction::sub(self, rhs)
    }
}

impl std::ops::Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: Self) -> RationalFunction {
        RationalFunction::mul(self, rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn r(re: f64) -> Complex64 {
        c(re, 0.0)
    }

    fn sorted(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        v
    }

    #[test]
    fn roots_of_simple_polynomials() {
        let rs = sorted(Polynomial::from_real(&[-1.0, 0.0, 1.0]).roots().unwrap());
        assert!((rs[0] - r(-1.0)).norm() < 1e-14 && (rs[1] - r(1.0)).norm() < 1e-14);

        let rs = Polynomial::from_real(&[0.25, -1.0, 1.0]).roots().unwrap();
        for x in rs {
            assert!((x - r(0.5)).norm() < 1e-7);
        }
        assert_eq!(Polynomial::zero().roots(), Err(Error::ZeroPolynomial));
        assert!(Polynomial::constant(r(3.0)).roots().unwrap().is_empty());
    }

    #[test]
    fn planted_roots_are_recovered() {
        let planted = [c(0.3, 0.1), c(-1.2, 0.5), c(2.0, -0.7), c(0.0, 0.9), c(-0.5, -0.5), c(1.5, 1.5)];
        let p = Polynomial::from_roots(&planted, ONE);
        let found = p.roots().unwrap();
        for x in planted {
            let d = found.iter().map(|y| (x - y).norm()).fold(f64::INFINITY, f64::min);
            assert!(d < 1e-8, "root {x} missed by {d}");
        }
    }

    #[test]
    fn deflation_both_regimes() {
        let p = Polynomial::from_roots(&[r(0.5), r(3.0), c(0.0, -2.0)], r(2.0));
        let q = p.deflate(r(3.0));
        let expect = Polynomial::from_roots(&[r(0.5), c(0.0, -2.0)], r(2.0));
        for k in 0..3 {
            assert!((q.coeff(k) - expect.coeff(k)).norm() < 1e-13);
        }
        let q = p.deflate(r(0.5));
        let expect = Polynomial::from_roots(&[r(3.0), c(0.0, -2.0)], r(2.0));
        for k in 0..3 {
            assert!((q.coeff(k) - expect.coeff(k)).norm() < 1e-13);
        }
    }

    #[test]
    fn classify_examples() {
        // z/(1 − 2z): pole at 1/2.
        let b = RationalFunction::new(Polynomial::monomial(1), Polynomial::from_real(&[1.0, -2.0])).unwrap();
        let rep = b.classify();
        assert!(!rep.causal_stable);
        assert_eq!(rep.class, StabilityClass::PoleInDisk);

        let b = RationalFunction::new(Polynomial::from_real(&[1.0]), Polynomial::from_real(&[1.0, -0.5])).unwrap();
        assert!(b.classify().causal_stable);

        let b = RationalFunction::new(Polynomial::from_real(&[1.0]), Polynomial::from_real(&[1.0, -1.0])).unwrap();
        let rep = b.classify();
        assert!(!rep.causal_stable);
        assert_eq!(rep.class, StabilityClass::PoleOnCircle);
    }

    #[test]
    fn classify_ignores_common_factors() {
        let num = Polynomial::from_real(&[1.0, 2.0]);
        let den = Polynomial::from_real(&[3.0, -1.0]);
        let common = Polynomial::from_roots(&[c(0.2, 0.4)], ONE);
        let a = RationalFunction::new(num.clone(), den.clone()).unwrap();
        let b = RationalFunction::new(num.mul(&common), den.mul(&common)).unwrap();
        assert_eq!(a.classify().causal_stable, b.classify().causal_stable);
        assert_eq!(b.poles().len(), 1);
    }

    #[test]
    fn impulse_responses() {
        let p = RationalFunction::from_polynomial(Polynomial::from_real(&[1.0, -2.0, 3.0]));
        let h = p.impulse_response(8).unwrap();
        assert_eq!(h, Signal::from_real(0, &[1.0, -2.0, 3.0]));

        let rr = 0.8;
        let g = RationalFunction::new(Polynomial::from_real(&[1.0]), Polynomial::from_real(&[1.0, -rr])).unwrap();
        let h = g.impulse_response(30).unwrap();
        for n in 0..30 {
            assert!((h.get(n) - r(rr.powi(n as i32))).norm() < 1e-13);
        }

        let echo = RationalFunction::new(Polynomial::monomial(1), Polynomial::from_real(&[1.0, 0.0, 1.0])).unwrap();
        let h = echo.impulse_response(12).unwrap();
        let expect = [0.0, 1.0, 0.0, -1.0];
        for n in 0..12 {
            assert!((h.get(n) - r(expect[n as usize % 4])).norm() < 1e-14);
        }

        let pole_at_zero = RationalFunction::new(Polynomial::from_real(&[1.0]), Polynomial::monomial(1)).unwrap();
        assert_eq!(pole_at_zero.impulse_response(4), Err(Error::NotCausalAtOrigin));
    }

    #[test]
    fn feedback_examples() {
        let p = RationalFunction::new(Polynomial::from_real(&[2.0, 1.0]), Polynomial::from_real(&[1.0, -0.3])).unwrap();
        let closed = feedback_closure(&p, &RationalFunction::zero(), false).unwrap();
        assert!((closed.eval(r(0.3)) - p.eval(r(0.3))).norm() < 1e-14);

        let z = RationalFunction::z();
        let closed = feedback_closure(&z, &z, true).unwrap();
        let w = c(0.2, 0.7);
        assert!((closed.eval(w) - w / (1.0 + w * w)).norm() < 1e-14);

        let one = RationalFunction::constant(ONE);
        let closed = feedback_closure(&one, &z, true).unwrap();
        assert!((closed.eval(w) - 1.0 / (1.0 + w)).norm() < 1e-14);

        let minus_one = RationalFunction::constant(-ONE);
        assert_eq!(feedback_closure(&one, &minus_one, false), Err(Error::AlgebraicLoop));
        assert!(matches!(feedback_closure(&one, &one, true), Err(Error::MissingDelay(_))));
    }

    #[test]
    fn arithmetic_identities() {
        let b = RationalFunction::new(Polynomial::from_real(&[-2.0, 1.0]), Polynomial::from_real(&[3.0, 1.0])).unwrap();
        let one = b.mul(&b.recip().unwrap());
        assert_eq!(one.num().degree(), Some(0));
        assert_eq!(one.den().degree(), Some(0));
        assert!((one.eval(c(0.3, 0.1)) - ONE).norm() < 1e-14);

        let s1 = RationalFunction::new(Polynomial::from_real(&[1.0]), Polynomial::from_real(&[1.0, -0.5])).unwrap();
        let s2 = RationalFunction::new(Polynomial::from_real(&[0.0, 1.0]), Polynomial::from_real(&[2.0, 0.0, 1.0])).unwrap();
        assert!(s1.classify().causal_stable && s2.classify().causal_stable);
        assert!((&s1 * &s2).classify().causal_stable);

        let w = c(-0.4, 0.25);
        assert!(((&s1 + &s2).eval(w) - (s1.eval(w) + s2.eval(w))).norm() < 1e-13);
        assert!(((&s1 - &s2).eval(w) - (s1.eval(w) - s2.eval(w))).norm() < 1e-13);
        let d = s1.derivative().eval(w);
        let fd = (s1.eval(w + 1e-6) - s1.eval(w - 1e-6)) / 2e-6;
        assert!((d - fd).norm() < 1e-8);
    }

    #[test]
    fn evaluation_at_inner_zero() {
        // (T − A F)(λ) = T(λ) when A(λ) = 0.
        let lambda = r(0.5);
        let a = RationalFunction::new(Polynomial::from_real(&[0.5, -1.0]), Polynomial::from_real(&[1.0, -0.5])).unwrap();
        let t = RationalFunction::new(Polynomial::from_real(&[1.0, 2.0]), Polynomial::from_real(&[4.0, 1.0])).unwrap();
        let f = RationalFunction::new(Polynomial::from_real(&[3.0, -1.0]), Polynomial::from_real(&[5.0])).unwrap();
        let h = t.sub(&a.mul(&f));
        assert!((h.eval(lambda) - t.eval(lambda)).norm() < 1e-14);
    }

    #[test]
    fn mobius_composition() {
        let b = RationalFunction::new(Polynomial::from_real(&[1.0, 2.0, -1.0]), Polynomial::from_real(&[3.0, 1.0])).unwrap();
        let (a_, b_, c_, d_) = (c(1.0, 0.5), r(-0.3), c(0.0, 0.2), r(1.0));
        let g = b.compose_mobius(a_, b_, c_, d_).unwrap();
        let w = c(0.1, -0.6);
        let direct = b.eval((a_ * w + b_) / (c_ * w + d_));
        assert!((g.eval(w) - direct).norm() < 1e-12);
        assert!(b.compose_mobius(ONE, ONE, ONE, ONE).is_err());
    }

    #[test]
    fn display_and_json() {
        let z = RationalFunction::z();
        assert_eq!(z.to_string(), "z");
        assert_eq!(RationalFunction::constant(ONE).to_string(), "1");
        let b = RationalFunction::new(Polynomial::from_real(&[1.0]), Polynomial::from_real(&[1.0, -0.5])).unwrap();
        assert_eq!(b.to_string(), "(1) / (1 - 0.5z)");
        let j = serde_json::to_string(&b).unwrap();
        assert_eq!(j, r#"{"num_re":[1.0],"num_im":[0.0],"den_re":[1.0,-0.5],"den_im":[0.0,0.0]}"#);
        let back: RationalFunction = serde_json::from_str(&j).unwrap();
        assert_eq!(back, b);
        assert!(serde_json::from_str::<RationalFunction>(r#"{"num_re":[1.0],"den_re":[]}"#).is_err());
    }
}
