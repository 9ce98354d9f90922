//! Hankel and Toeplitz operators on `H²`.
//!
//! A Hankel operator is given by its sequence `α(j)`, `j ≥ 0`, acting as
//! `(Γ_α a)(m) = Σ_n α(m+n) a(n)`. Built from a symbol `φ`,
//! `α(j) = conj(φ̂(−j−1))`, so only the antianalytic part of `φ` matters.
//!
//! Also here: best causal approximation of a noncausal symbol, the von
//! Neumann inequality for contraction matrices, and a kernel-testing
//! estimate of the Carleson constant of `(1−|z|²)|b′|² dx dy`.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CVector};
use crate::quadrature::disk_integral;
use crate::rational::{Polynomial, RationalFunction};
use crate::signal::Signal;
use crate::spectrum::{fourier_grid, poisson_from_coefficients, refine_sup, sup_norm_grid, BoundaryGrid, DEFAULT_SUP_TOL};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// Relative σ change under doubling that counts as converged.
pub const HANKEL_CONVERGENCE_TOL: f64 = 1e-8;
/// Top singular values closer than this make the AAK step ambiguous.
pub const DEGENERACY_TOL: f64 = 1e-10;

/// Laurent coefficients in wire form: `{"index": [..], "re": [..], "im": [..]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LaurentCoefficients {
    pub index: Vec<i64>,
    pub re: Vec<f64>,
    #[serde(default)]
    pub im: Vec<f64>,
}

impl LaurentCoefficients {
    pub fn to_signal(&self) -> Result<Signal> {
        let values = crate::zip_complex(&self.re, &self.im)?;
        if values.len() != self.index.len() {
            return Err(Error::InvalidInput(format!(
                "{} indices but {} coefficients",
                self.index.len(),
                values.len()
            )));
        }
        let (lo, hi) = match (self.index.iter().min(), self.index.iter().max()) {
            (Some(&lo), Some(&hi)) => (lo, hi),
            _ => return Ok(Signal::zero()),
        };
        if hi - lo > 1 << 24 {
            return Err(Error::InvalidInput("index range too wide".into()));
        }
        let mut dense = vec![ZERO; (hi - lo + 1) as usize];
        let mut seen = vec![false; dense.len()];
        for (&k, v) in self.index.iter().zip(values) {
            let i = (k - lo) as usize;
            if seen[i] {
                return Err(Error::InvalidInput(format!("duplicate index {k}")));
            }
            seen[i] = true;
            dense[i] = v;
        }
        Ok(Signal::new(lo, dense))
    }

    pub fn from_signal(s: &Signal) -> Self {
        let mut out = LaurentCoefficients { index: Vec::new(), re: Vec::new(), im: Vec::new() };
        for (k, v) in s.iter().filter(|(_, v)| *v != ZERO) {
            out.index.push(k);
            out.re.push(v.re);
            out.im.push(v.im);
        }
        out
    }
}

/// Source of the Hankel sequence `α`.
#[derive(Debug, Clone, PartialEq)]
pub enum AlphaSequence {
    /// Finitely many nonzero terms `α(0..len)`.
    Finite(Vec<Complex64>),
    /// `α(j) = 1/(j+1)`.
    Hilbert,
    /// `α(j) = r^j`.
    Geometric(Complex64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct HankelOperatorData {
    pub alpha: AlphaSequence,
    /// Truncation size `N`.
    pub size: usize,
}

impl HankelOperatorData {
    pub fn finite(alpha: Vec<Complex64>) -> Self {
        let size = alpha.len().max(1);
        HankelOperatorData { alpha: AlphaSequence::Finite(alpha), size }
    }

    pub fn hilbert(size: usize) -> Self {
        HankelOperatorData { alpha: AlphaSequence::Hilbert, size: size.max(1) }
    }

    pub fn geometric(r: Complex64, size: usize) -> Self {
        HankelOperatorData { alpha: AlphaSequence::Geometric(r), size: size.max(1) }
    }

    pub fn with_size(mut self, size: usize) -> Self {
        self.size = size.max(1);
        self
    }

    pub fn alpha(&self, j: usize) -> Complex64 {
        match &self.alpha {
            AlphaSequence::Finite(a) => a.get(j).copied().unwrap_or(ZERO),
            AlphaSequence::Hilbert => Complex64::new(1.0 / (j + 1) as f64, 0.0),
            AlphaSequence::Geometric(r) => r.powu(j as u32),
        }
    }

    /// Length of the nonzero part of `α`, if finite.
    pub fn support_len(&self) -> Option<usize> {
        match &self.alpha {
            AlphaSequence::Finite(a) => Some(a.iter().rposition(|v| *v != ZERO).map_or(0, |i| i + 1)),
            _ => None,
        }
    }

    /// The `n × n` matrix `[α(m+n)]`.
    pub fn matrix(&self, n: usize) -> CMatrix {
        let alpha: Vec<Complex64> = (0..2 * n).map(|j| self.alpha(j)).collect();
        CMatrix::from_fn(n, n, |i, j| alpha[i + j])
    }
}

/// `α(j) = conj(φ̂(−j−1))` from the negative-index coefficients of `φ`.
pub fn hankel_from_symbol(phi: &Signal) -> HankelOperatorData {
    let depth = phi.support().map_or(0, |(first, _)| (-first).max(0) as usize);
    HankelOperatorData::finite((0..depth).map(|j| phi.get(-(j as i64) - 1).conj()).collect())
}

/// As [`hankel_from_symbol`], reading coefficients off a boundary grid.
pub fn hankel_from_grid(g: &BoundaryGrid) -> HankelOperatorData {
    hankel_from_symbol(&g.coefficients())
}

/// Top Schmidt pair of a Hankel truncation: `Γ u = σ v`, `‖u‖ = ‖v‖ = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchmidtPair {
    pub sigma: f64,
    pub u: Vec<Complex64>,
    pub v: Vec<Complex64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HankelNorm {
    pub sigma: f64,
    /// Second singular value of the same truncation (0 if none).
    pub sigma2: f64,
    pub pair: SchmidtPair,
    /// Truncation size the pair belongs to.
    pub n: usize,
    pub converged: bool,
}

fn truncated_norm(data: &HankelOperatorData, n: usize) -> HankelNorm {
    if n == 0 {
        let e0 = vec![ONE];
        return HankelNorm {
            sigma: 0.0,
            sigma2: 0.0,
            pair: SchmidtPair { sigma: 0.0, u: e0.clone(), v: e0 },
            n: 1,
            converged: true,
        };
    }
    let top = linalg::top_singular(&data.matrix(n));
    let sigma = top.values[0];
    HankelNorm {
        sigma,
        sigma2: top.values.get(1).copied().unwrap_or(0.0),
        pair: SchmidtPair { sigma, u: top.right.iter().copied().collect(), v: top.left.iter().copied().collect() },
        n,
        converged: true,
    }
}

/// Top singular value of the Hankel truncation with its Schmidt pair.
///
/// Finitely supported `α` of length `L ≤ N` is solved exactly on the
/// `L × L` block. Otherwise `σ` is computed at `N` and `2N`, and `converged`
/// records whether the relative change was below [`HANKEL_CONVERGENCE_TOL`].
pub fn hankel_norm(data: &HankelOperatorData) -> HankelNorm {
    if let Some(len) = data.support_len() {
        if len <= data.size {
            return truncated_norm(data, len);
        }
    }
    let coarse = truncated_norm(data, data.size);
    let fine = truncated_norm(data, 2 * data.size);
    let converged = (fine.sigma - coarse.sigma).abs() < HANKEL_CONVERGENCE_TOL * fine.sigma.max(f64::MIN_POSITIVE);
    HankelNorm { converged, ..fine }
}

fn check_causal_within(f: &Signal, n: usize) -> Result<()> {
    if let Some((first, last)) = f.support() {
        if first < 0 {
            return Err(Error::NonCausal);
        }
        if last as usize >= n {
            return Err(Error::SupportOverflow(format!("support reaches {last}, truncation size is {n}")));
        }
    }
    Ok(())
}

/// `B(f, g) = Σ_{m,n} conj(α(m+n)) f̂(n) ĝ(m)`, which for `α` built from `φ`
/// is the pairing `(1/2π)∫ f g e^{it} φ dt`.
pub fn hankel_bilinear_form(data: &HankelOperatorData, f: &Signal, g: &Signal) -> Result<Complex64> {
    check_causal_within(f, data.size)?;
    check_causal_within(g, data.size)?;
    let mut acc = ZERO;
    for (n, fv) in f.iter() {
        for (m, gv) in g.iter() {
            acc += data.alpha((m + n) as usize).conj() * fv * gv;
        }
    }
    Ok(acc)
}

/// `(1/2π)∫ f g e^{it} φ dt` by the trapezoid rule on the grid of `φ`.
pub fn bilinear_form_quadrature(phi: &BoundaryGrid, f: &Signal, g: &Signal) -> Result<Complex64> {
    let n = phi.len();
    let fg = fourier_grid(&crate::signal::convolve(f, g), n)?;
    let sum: Complex64 = fg
        .values()
        .iter()
        .zip(phi.values())
        .enumerate()
        .map(|(j, (a, p))| a * p * Complex64::from_polar(1.0, phi.angle(j)))
        .sum();
    Ok(sum / n as f64)
}

/// `dist(φ, H^∞)` as the Hankel norm. The truncation is raised to the
/// depth of the antianalytic part, where it is exact.
pub fn nehari_distance(phi: &Signal, n: usize) -> HankelNorm {
    let data = hankel_from_symbol(phi);
    let size = n.max(data.size);
    hankel_norm(&data.with_size(size))
}

/// Best causal approximation `b` of `φ` in the sup norm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CausalApprox {
    /// Nonnegative Fourier coefficients of `b` on the grid.
    pub b: Signal,
    pub b_grid: BoundaryGrid,
    /// `max_j |φ − b|` on the grid.
    pub achieved: f64,
    pub sigma: f64,
    /// `max_j ||φ − b| − σ|`.
    pub modulus_deviation: f64,
    /// Largest negative-index coefficient of `b`, relative to `max(1, σ)`.
    pub negative_leak: f64,
}

/// Builds `b = φ − σ η/ξ` from the top Schmidt pair, where `ξ = Σ x_k z^k`
/// and `η = Σ y_m z^{−m−1}` are the symbols of the singular vectors of the
/// matrix `[φ̂(−m−n−1)]`. The error `φ − b` then has constant modulus `σ`.
pub fn best_causal_approx(phi: &Signal, n: usize) -> Result<CausalApprox> {
    let phi_grid = fourier_grid(phi, n)?;
    let data = hankel_from_symbol(phi);
    let depth = data.support_len().unwrap_or(0);
    if depth == 0 {
        return Ok(CausalApprox {
            b: phi.causal_part(),
            b_grid: phi_grid,
            achieved: 0.0,
            sigma: 0.0,
            modulus_deviation: 0.0,
            negative_leak: 0.0,
        });
    }
    let top = linalg::top_singular(&data.matrix(depth));
    let sigma = top.values[0];
    if let Some(&s2) = top.values.get(1) {
        if sigma - s2 < DEGENERACY_TOL {
            return Err(Error::NonuniqueApproximant);
        }
    }
    let x: Vec<Complex64> = top.right.iter().map(|v| v.conj()).collect();
    let y: Vec<Complex64> = top.left.iter().rev().map(|v| v.conj()).collect();
    let xi = fourier_grid(&Signal::new(0, x), n)?;
    let eta = fourier_grid(&Signal::new(-(depth as i64), y), n)?;
    let error: Vec<Complex64> = eta.values().iter().zip(xi.values()).map(|(e, x)| e / x * sigma).collect();
    let b_grid = BoundaryGrid::new(phi_grid.values().iter().zip(&error).map(|(p, e)| p - e).collect())?;
    let achieved = error.iter().map(|e| e.norm()).fold(0.0, f64::max);
    let modulus_deviation = error.iter().map(|e| (e.norm() - sigma).abs()).fold(0.0, f64::max);
    let coeffs = b_grid.coefficients();
    let negative_leak = coeffs.anticausal_part().iter().map(|(_, v)| v.norm()).fold(0.0, f64::max) / sigma.max(1.0);
    let b = coeffs.causal_part();
    Ok(CausalApprox { b, b_grid, achieved, sigma, modulus_deviation, negative_leak })
}

/// `T_ψ f = P₊(ψ f)`, computed on the grid of `ψ`.
pub fn toeplitz_apply(psi: &BoundaryGrid, f: &Signal) -> Result<Signal> {
    if !f.is_causal() {
        return Err(Error::NonCausal);
    }
    let n = psi.len();
    let half = (n / 2) as i64;
    let coeffs = psi.coefficients();
    let scale = coeffs.iter().map(|(_, v)| v.norm()).fold(0.0, f64::max);
    let significant = |v: &Complex64| v.norm() > 1e-12 * scale;
    let top = coeffs.iter().filter(|(_, v)| significant(v)).map(|(k, _)| k).max().unwrap_or(0);
    let deg = f.support().map_or(0, |(_, last)| last);
    if deg + top.max(0) >= half {
        return Err(Error::SupportOverflow(format!("product bandwidth exceeds grid of size {n}")));
    }
    let fg = fourier_grid(f, n)?.mul(psi);
    let out = fg.coefficients().causal_part();
    let out_scale = scale * f.values().iter().map(|v| v.norm()).sum::<f64>();
    Ok(Signal::new(
        out.offset(),
        out.values().iter().map(|v| if v.norm() <= 1e-14 * out_scale { ZERO } else { *v }).collect(),
    ))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ToeplitzBracket {
    /// `max |P[ψ](a)|` over the probes; a lower bound on `‖T_ψ‖`.
    pub lower: f64,
    /// Grid sup of `|ψ|`.
    pub upper: f64,
    pub argmax: Complex64,
}

/// Brackets `‖T_ψ‖` between Poisson values at probe points
/// `r e^{2πik/angles}` and the grid sup of `ψ`.
pub fn toeplitz_norm_lower(psi: &BoundaryGrid, radii: &[f64], angles: usize) -> Result<ToeplitzBracket> {
    let coeffs = psi.coefficients();
    let mut lower = 0.0;
    let mut argmax = ZERO;
    for &r in radii {
        if !(0.0..1.0).contains(&r) {
            return Err(Error::InvalidInput(format!("probe radius {r} outside [0, 1)")));
        }
        for k in 0..angles.max(1) {
            let a = Complex64::from_polar(r, 2.0 * std::f64::consts::PI * k as f64 / angles.max(1) as f64);
            let v = poisson_from_coefficients(&coeffs, psi.len(), a).norm();
            if v > lower {
                lower = v;
                argmax = a;
            }
        }
    }
    Ok(ToeplitzBracket { lower, upper: sup_norm_grid(psi), argmax })
}

/// A square complex matrix of operator norm at most `1 + 1e−12`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixRepr", into = "MatrixRepr")]
pub struct ContractionMatrix {
    matrix: CMatrix,
}

/// Row-major `{"re": [[..]], "im": [[..]]}`.
#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    re: Vec<Vec<f64>>,
    #[serde(default)]
    im: Vec<Vec<f64>>,
}

impl TryFrom<MatrixRepr> for ContractionMatrix {
    type Error = Error;
    fn try_from(r: MatrixRepr) -> Result<Self> {
        let n = r.re.len();
        if r.re.iter().any(|row| row.len() != n) || (!r.im.is_empty() && (r.im.len() != n || r.im.iter().any(|row| row.len() != n))) {
            return Err(Error::InvalidInput("matrix must be square".into()));
        }
        let m = CMatrix::from_fn(n, n, |i, j| Complex64::new(r.re[i][j], r.im.get(i).map_or(0.0, |row| row[j])));
        ContractionMatrix::new(m)
    }
}

impl From<ContractionMatrix> for MatrixRepr {
    fn from(c: ContractionMatrix) -> Self {
        let m = &c.matrix;
        let rows = |f: fn(&Complex64) -> f64| (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| f(&m[(i, j)])).collect()).collect();
        MatrixRepr { re: rows(|z| z.re), im: rows(|z| z.im) }
    }
}

impl ContractionMatrix {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::InvalidInput("matrix must be square".into()));
        }
        let norm = linalg::operator_norm(&matrix);
        if norm > 1.0 + 1e-12 {
            return Err(Error::NotContraction(norm));
        }
        Ok(ContractionMatrix { matrix })
    }

    /// The `n × n` truncated shift, ones on the subdiagonal.
    pub fn truncated_shift(n: usize) -> Self {
        ContractionMatrix { matrix: CMatrix::from_fn(n, n, |i, j| if i == j + 1 { ONE } else { ZERO }) }
    }

    /// A random matrix rescaled to unit operator norm.
    pub fn random(dim: usize, rng: &mut impl Rng) -> Self {
        let m = CMatrix::from_fn(dim, dim, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let norm = linalg::operator_norm(&m);
        let matrix = if norm > 0.0 { m.map(|v| v / norm) } else { m };
        ContractionMatrix::new(matrix).expect("rescaled matrix is a contraction")
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VonNeumannCheck {
    /// `‖p(T)‖`.
    pub lhs: f64,
    /// `sup_𝕋 |p|`.
    pub rhs: f64,
    pub holds: bool,
}

/// `p(T)` by Horner's rule.
pub fn poly_of_matrix(p: &Polynomial, t: &CMatrix) -> CMatrix {
    let n = t.nrows();
    let id = CMatrix::identity(n, n);
    p.coeffs().iter().rev().fold(CMatrix::zeros(n, n), |acc, c| &acc * t + &id * *c)
}

pub fn von_neumann_check(p: &Polynomial, t: &ContractionMatrix) -> Result<VonNeumannCheck> {
    let lhs = linalg::operator_norm(&poly_of_matrix(p, &t.matrix));
    let rhs = refine_sup(|s| p.eval(Complex64::from_polar(1.0, s)), DEFAULT_SUP_TOL)?.value;
    Ok(VonNeumannCheck { lhs, rhs, holds: lhs <= rhs + 1e-9 })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CarlesonEstimate {
    /// `max_a ∫|k_a|² dμ_b / ‖k_a‖²` over the probes.
    pub value: f64,
    pub argmax: Complex64,
    /// Quadrature level at which successive values agreed.
    pub level: usize,
}

const CARLESON_MAX_LEVEL: usize = 7;
const CARLESON_TOL: f64 = 1e-3;

/// Kernel-testing lower estimate of the Carleson constant of
/// `dμ_b = (1 − |z|²)|b′(z)|² dx dy`.
pub fn bmoa_carleson_estimate(b: &RationalFunction, probes: &[Complex64]) -> Result<CarlesonEstimate> {
    if !b.classify().causal_stable {
        return Err(Error::NotCausalStable);
    }
    if probes.is_empty() {
        return Err(Error::InvalidInput("no probe points".into()));
    }
    for a in probes {
        if a.norm() >= 1.0 {
            return Err(Error::OutsideDisk { re: a.re, im: a.im });
        }
    }
    let db = b.derivative();
    let evaluate = |level: usize| {
        probes
            .iter()
            .map(|&a| {
                let ka = 1.0 - a.norm_sqr();
                let v = disk_integral(
                    |z| ka / (ONE - a.conj() * z).norm_sqr() * (1.0 - z.norm_sqr()) * db.eval(z).norm_sqr(),
                    level,
                );
                (v, a)
            })
            .fold((0.0, ZERO), |best, cur| if cur.0 > best.0 { cur } else { best })
    };
    let mut prev = evaluate(0);
    for level in 1..=CARLESON_MAX_LEVEL {
        let cur = evaluate(level);
        if (cur.0 - prev.0).abs() <= CARLESON_TOL * cur.0.abs() || cur.0 == 0.0 && prev.0 == 0.0 {
            return Ok(CarlesonEstimate { value: cur.0, argmax: cur.1, level });
        }
        prev = cur;
    }
    Err(Error::Quadrature(format!(
        "Carleson estimate not stable after {CARLESON_MAX_LEVEL} refinements"
    )))
}

/// Vector helper for tests and callers: `Γ u` on the `n × n` truncation.
pub fn hankel_apply(data: &HankelOperatorData, u: &[Complex64]) -> Vec<Complex64> {
    let m = data.matrix(u.len());
    (m * CVector::from_column_slice(u)).iter().copied().collect()
}
