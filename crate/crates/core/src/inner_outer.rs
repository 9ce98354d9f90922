//! Inner and outer functions.
//!
//! An [`InnerFunction`] is `λ z^m Π φ_{a_j}(z) Π exp(−μ_j ψ(e^{−iα_j} z))`
//! with Blaschke factors `φ_a(z) = (|a|/a)(a − z)/(1 − āz)` and the Cayley
//! map `ψ(w) = (1 + w)/(1 − w)`. Singular parts are finite atomic measures.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{Polynomial, RationalFunction, CIRCLE_TOL};
use crate::spectrum::{check_grid_size, BoundaryGrid};
use crate::ReIm;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// Log-modulus samples below this are clamped (boundary zeros).
pub const LOG_MODULUS_FLOOR: f64 = -27.631021115928547; // ln(1e-12)
/// Largest radius at which the Herglotz quadrature is trusted.
pub const OUTER_MAX_RADIUS: f64 = 1.0 - 1e-3;

/// Point mass `μ δ_α` of a singular measure on the circle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SingularAtom {
    pub alpha: f64,
    pub mu: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "InnerRepr", into = "InnerRepr")]
pub struct InnerFunction {
    lambda: Complex64,
    m: usize,
    zeros: Vec<Complex64>,
    atoms: Vec<SingularAtom>,
}

#[derive(Serialize, Deserialize)]
struct InnerRepr {
    lambda_re: f64,
    #[serde(default)]
    lambda_im: f64,
    #[serde(default)]
    m: usize,
    #[serde(default)]
    zeros: Vec<ReIm>,
    #[serde(default)]
    atoms: Vec<SingularAtom>,
}

impl TryFrom<InnerRepr> for InnerFunction {
    type Error = Error;
    fn try_from(r: InnerRepr) -> Result<Self> {
        InnerFunction::new(
            Complex64::new(r.lambda_re, r.lambda_im),
            r.m,
            r.zeros.into_iter().map(Complex64::from).collect(),
            r.atoms,
        )
    }
}

impl From<InnerFunction> for InnerRepr {
    fn from(f: InnerFunction) -> Self {
        InnerRepr {
            lambda_re: f.lambda.re,
            lambda_im: f.lambda.im,
            m: f.m,
            zeros: f.zeros.into_iter().map(ReIm::from).collect(),
            atoms: f.atoms,
        }
    }
}

impl InnerFunction {
    pub fn new(lambda: Complex64, m: usize, zeros: Vec<Complex64>, atoms: Vec<SingularAtom>) -> Result<Self> {
        if (lambda.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidInput(format!("|lambda| = {} is not 1", lambda.norm())));
        }
        for a in &zeros {
            if *a == ZERO {
                return Err(Error::BlaschkeAtOrigin);
            }
            if a.norm() >= 1.0 {
                return Err(Error::OutsideDisk { re: a.re, im: a.im });
            }
        }
        for atom in &atoms {
            if atom.mu.is_nan() || atom.mu <= 0.0 || !atom.alpha.is_finite() {
                return Err(Error::InvalidInput(format!("atom mass must be positive, got {}", atom.mu)));
            }
        }
        Ok(InnerFunction { lambda, m, zeros, atoms })
    }

    /// Finite Blaschke product `z^m Π φ_a`; zeros at the origin go into `m`.
    pub fn blaschke(zeros: &[Complex64]) -> Result<Self> {
        let m = zeros.iter().filter(|a| **a == ZERO).count();
        let rest = zeros.iter().copied().filter(|a| *a != ZERO).collect();
        Self::new(ONE, m, rest, Vec::new())
    }

    /// The singular inner function of a single atom.
    pub fn singular(alpha: f64, mu: f64) -> Result<Self> {
        Self::new(ONE, 0, Vec::new(), vec![SingularAtom { alpha, mu }])
    }

    pub fn lambda(&self) -> Complex64 {
        self.lambda
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn zeros(&self) -> &[Complex64] {
        &self.zeros
    }

    pub fn atoms(&self) -> &[SingularAtom] {
        &self.atoms
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        inner_eval(self, z)
    }

    /// Boundary samples; fails if a grid angle hits an atom.
    pub fn grid(&self, n: usize) -> Result<BoundaryGrid> {
        check_grid_size(n)?;
        let values = (0..n)
            .map(|j| self.eval(Complex64::from_polar(1.0, 2.0 * PI * j as f64 / n as f64)))
            .collect::<Result<Vec<_>>>()?;
        BoundaryGrid::new(values)
    }

    /// The Blaschke part as a rational function (atoms are dropped).
    pub fn blaschke_rational(&self) -> RationalFunction {
        let mut num = Polynomial::monomial(self.m).scale(self.lambda);
        let mut den = Polynomial::constant(ONE);
        for &a in &self.zeros {
            let s = a.norm() / a;
            num = num.mul(&Polynomial::new(vec![s * a, -s]));
            den = den.mul(&Polynomial::new(vec![ONE, -a.conj()]));
        }
        RationalFunction::new(num, den).expect("nonzero denominator")
    }
}

/// `φ_a(z) = (|a|/a)(a − z)/(1 − āz)`.
pub fn blaschke_factor(a: Complex64, z: Complex64) -> Result<Complex64> {
    if a == ZERO {
        return Err(Error::BlaschkeAtOrigin);
    }
    if a.norm() >= 1.0 {
        return Err(Error::OutsideDisk { re: a.re, im: a.im });
    }
    Ok(a.norm() / a * (a - z) / (1.0 - a.conj() * z))
}

/// Evaluates `Θ` on the closed disk away from atom points.
pub fn inner_eval(theta: &InnerFunction, z: Complex64) -> Result<Complex64> {
    if z.norm() > 1.0 + 1e-12 {
        return Err(Error::OutsideDisk { re: z.re, im: z.im });
    }
    let mut v = theta.lambda * z.powu(theta.m as u32);
    for &a in &theta.zeros {
        v *= blaschke_factor(a, z)?;
    }
    let mut exponent = ZERO;
    for atom in &theta.atoms {
        let w = Complex64::from_polar(1.0, -atom.alpha) * z;
        if (ONE - w).norm() < 1e-15 {
            return Err(Error::EssentialSingularity(atom.alpha));
        }
        exponent -= atom.mu * (ONE + w) / (ONE - w);
    }
    Ok(v * exponent.exp())
}

/// How the gaps `1 − |a_j|`, `j = 1, 2, …`, are generated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GapRule {
    /// Explicit finite list.
    List(Vec<f64>),
    /// `scale · ratio^j`.
    Geometric { scale: f64, ratio: f64 },
    /// `scale · j^{−exponent}`.
    Power { scale: f64, exponent: f64 },
}

impl GapRule {
    pub fn gap(&self, j: usize) -> f64 {
        match self {
            GapRule::List(g) => g.get(j - 1).copied().unwrap_or(0.0),
            GapRule::Geometric { scale, ratio } => scale * ratio.powi(j as i32),
            GapRule::Power { scale, exponent } => scale * (j as f64).powf(-exponent),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlaschkeDiagnostic {
    pub partial_sum: f64,
    pub terms: usize,
    pub convergent: bool,
    /// `convergent` follows from a closed form rather than a heuristic.
    pub exact: bool,
}

/// Partial sum of the first `count` gaps and the convergence verdict for
/// `Σ (1 − |a_j|)`.
pub fn blaschke_condition(rule: &GapRule, count: usize) -> BlaschkeDiagnostic {
    let terms = match rule {
        GapRule::List(g) => count.min(g.len()),
        _ => count,
    };
    let partial_sum = (1..=terms).map(|j| rule.gap(j)).sum();
    let convergent = match rule {
        GapRule::List(_) => true,
        GapRule::Geometric { ratio, .. } => ratio.abs() < 1.0,
        GapRule::Power { exponent, .. } => *exponent > 1.0,
    };
    BlaschkeDiagnostic { partial_sum, terms, convergent, exact: true }
}

/// Heuristic verdict for arbitrary gap sequences: the sum is called
/// convergent when the last doubling of terms adds under 1% of the total.
pub fn blaschke_condition_fn(gap: impl Fn(usize) -> f64, count: usize) -> BlaschkeDiagnostic {
    let count = count.max(2);
    let half: f64 = (1..=count / 2).map(&gap).sum();
    let partial_sum: f64 = half + (count / 2 + 1..=count).map(&gap).sum::<f64>();
    let convergent = partial_sum - half <= 1e-2 * partial_sum.abs().max(f64::MIN_POSITIVE);
    BlaschkeDiagnostic { partial_sum, terms: count, convergent, exact: false }
}

/// An outer function, rational or given by boundary log-modulus samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OuterFunction {
    Rational(RationalFunction),
    LogModulus(BoundaryGrid),
}

impl OuterFunction {
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        match self {
            OuterFunction::Rational(u) => Ok(u.eval(z)),
            OuterFunction::LogModulus(k) => outer_from_log_modulus(k, z),
        }
    }
}

fn clamp_log(k: f64) -> f64 {
    if k.is_nan() {
        LOG_MODULUS_FLOOR
    } else {
        k.max(LOG_MODULUS_FLOOR)
    }
}

/// `exp((1/2π)∫ (1 + e^{−it}z)/(1 − e^{−it}z) k(e^{it}) dt)` by the
/// trapezoid rule. Only the real part of the grid is used.
pub fn outer_from_log_modulus(k: &BoundaryGrid, z: Complex64) -> Result<Complex64> {
    if z.norm() > OUTER_MAX_RADIUS {
        return Err(Error::TooCloseToBoundary { max_radius: OUTER_MAX_RADIUS });
    }
    let n = k.len();
    let sum: Complex64 = k
        .values()
        .iter()
        .enumerate()
        .map(|(j, kj)| {
            let w = Complex64::from_polar(1.0, -2.0 * PI * j as f64 / n as f64) * z;
            (ONE + w) / (ONE - w) * clamp_log(kj.re)
        })
        .sum();
    Ok((sum / n as f64).exp())
}

/// Boundary values of `exp(p·(k + i k̃))`, where `k + i k̃` is the analytic
/// completion of the real grid `k` with real mean. For `p = 1` this is the
/// outer function with log-modulus `k`; for `p = 1/2` its square root.
pub fn outer_boundary_values(k: &BoundaryGrid, p: f64) -> BoundaryGrid {
    let n = k.len();
    let mut buf: Vec<Complex64> = k.values().iter().map(|v| Complex64::new(clamp_log(v.re), 0.0)).collect();
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(n).process(&mut buf);
    let scale = 1.0 / n as f64;
    for (j, c) in buf.iter_mut().enumerate() {
        let w = if j == 0 || j == n / 2 {
            1.0
        } else if j < n / 2 {
            2.0
        } else {
            0.0
        };
        *c *= w * scale;
    }
    planner.plan_fft_inverse(n).process(&mut buf);
    BoundaryGrid::new(buf.into_iter().map(|v| (v * p).exp()).collect()).expect("grid size already checked")
}

/// `b = Θ u` with `Θ` a finite Blaschke product and `u` rational outer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InnerOuter {
    pub inner: InnerFunction,
    pub outer: RationalFunction,
}

/// Inner/outer factorization of a causal-stable rational function.
pub fn factorize_rational(b: &RationalFunction) -> Result<InnerOuter> {
    factorize(b, false)
}

pub(crate) fn factorize(b: &RationalFunction, allow_boundary: bool) -> Result<InnerOuter> {
    if b.is_zero() {
        return Err(Error::IdenticallyZero);
    }
    if !b.classify().causal_stable {
        return Err(Error::NotCausalStable);
    }
    let m = b.num().valuation();
    let mut q = b.num().shift_down(m);
    let mut interior = Vec::new();
    for a in q.roots()? {
        let r = a.norm();
        if r < 1.0 - CIRCLE_TOL {
            interior.push(a);
        } else if r <= 1.0 + CIRCLE_TOL && !allow_boundary {
            return Err(Error::BoundaryZero);
        }
    }
    interior.sort_by(|x, y| x.norm().total_cmp(&y.norm()));
    for &a in &interior {
        q = q.deflate(a);
        // (z − a) = −(a/|a|) (1 − āz) φ_a(z)
        q = q.mul(&Polynomial::new(vec![-a / a.norm(), Complex64::new(a.norm(), 0.0)]));
    }
    let u_raw = RationalFunction::new(q, b.den().clone())?;
    let u0 = u_raw.eval(ZERO);
    let lambda = u0 / u0.norm();
    let outer = u_raw.scale(lambda.conj());
    let inner = InnerFunction::new(lambda, m, interior, Vec::new())?;
    Ok(InnerOuter { inner, outer })
}

/// Grid factors of `h = f·g` with `f = u^{1/2}`, `g = u^{1/2}Θ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeakFactorization {
    pub f: BoundaryGrid,
    pub g: BoundaryGrid,
    pub inner: InnerFunction,
    /// `max_j |f g − h|` on the grid.
    pub residual: f64,
    pub f_h2_norm: f64,
    pub g_h2_norm: f64,
    pub h_h1_norm: f64,
}

/// Factors `h = f g` with `‖f‖₂ ‖g‖₂ = ‖h‖₁`, on an `n`-point grid. Zeros of
/// `h` on the circle are kept in the outer part.
pub fn h1_weak_factor(h: &RationalFunction, n: usize) -> Result<WeakFactorization> {
    check_grid_size(n)?;
    let fact = factorize(h, true)?;
    let h_grid = BoundaryGrid::from_circle_fn(n, |z| h.eval(z))?;
    let log_mod = h_grid.map(|v| Complex64::new(v.norm().ln(), 0.0));
    let f = outer_boundary_values(&log_mod, 0.5);
    let theta = fact.inner.grid(n)?;
    let g = f.mul(&theta);
    let residual = f
        .mul(&g)
        .values()
        .iter()
        .zip(h_grid.values())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    Ok(WeakFactorization {
        f_h2_norm: f.lp_norm(2.0),
        g_h2_norm: g.lp_norm(2.0),
        h_h1_norm: h_grid.lp_norm(1.0),
        f,
        g,
        inner: fact.inner,
        residual,
    })
}
