//! Frequency-side machinery: boundary grids, Fourier coefficients,
//! Z-transforms, Poisson integrals, the Szegő kernel and sup-norms on the
//! unit circle.
//!
//! Sign convention: the Fourier transform of a signal is
//! `φ̂(e^{it}) = Σ_n φ(n) e^{int}` with the normalized measure `dt/2π`, and
//! the Z-transform is `Σ_n φ(n) z^n`. The engineering convention with
//! `z^{-n}` is never used in this crate.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::signal::{convolve, Signal};

/// A point strictly inside the unit disk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Complex64", into = "Complex64")]
pub struct DiskPoint(Complex64);

impl DiskPoint {
    pub fn new(z: Complex64) -> Result<Self> {
        if z.norm() < 1.0 {
            Ok(DiskPoint(z))
        } else {
            Err(Error::OutsideDisk { re: z.re, im: z.im })
        }
    }

    pub fn from_polar(r: f64, theta: f64) -> Result<Self> {
        DiskPoint::new(Complex64::from_polar(r, theta))
    }

    pub fn value(self) -> Complex64 {
        self.0
    }
}

impl TryFrom<Complex64> for DiskPoint {
    type Error = Error;
    fn try_from(z: Complex64) -> Result<Self> {
        DiskPoint::new(z)
    }
}

impl From<DiskPoint> for Complex64 {
    fn from(p: DiskPoint) -> Self {
        p.0
    }
}

/// Samples of a function on the unit circle at `t_j = 2πj/N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GridRepr", into = "GridRepr")]
pub struct BoundaryGrid {
    values: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct GridRepr {
    n: usize,
    re: Vec<f64>,
    #[serde(default)]
    im: Vec<f64>,
}

impl TryFrom<GridRepr> for BoundaryGrid {
    type Error = Error;
    fn try_from(r: GridRepr) -> Result<Self> {
        if r.re.len() != r.n {
            return Err(Error::InvalidInput(format!(
                "grid declares n = {} but carries {} samples",
                r.n,
                r.re.len()
            )));
        }
        BoundaryGrid::new(crate::zip_complex(&r.re, &r.im)?)
    }
}

impl From<BoundaryGrid> for GridRepr {
    fn from(g: BoundaryGrid) -> Self {
        GridRepr {
            n: g.values.len(),
            re: g.values.iter().map(|c| c.re).collect(),
            im: g.values.iter().map(|c| c.im).collect(),
        }
    }
}

pub(crate) fn check_grid_size(n: usize) -> Result<()> {
    if n >= 8 && n.is_power_of_two() {
        Ok(())
    } else {
        Err(Error::InvalidGridSize(n))
    }
}

impl BoundaryGrid {
    pub fn new(values: Vec<Complex64>) -> Result<Self> {
        check_grid_size(values.len())?;
        Ok(BoundaryGrid { values })
    }

    /// Samples `f(t_j)`.
    pub fn from_fn(n: usize, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        check_grid_size(n)?;
        Ok(BoundaryGrid { values: (0..n).map(|j| f(grid_angle(j, n))).collect() })
    }

    /// Samples `f(e^{it_j})`.
    pub fn from_circle_fn(n: usize, f: impl Fn(Complex64) -> Complex64) -> Result<Self> {
        Self::from_fn(n, |t| f(Complex64::from_polar(1.0, t)))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn angle(&self, j: usize) -> f64 {
        grid_angle(j, self.values.len())
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> BoundaryGrid {
        BoundaryGrid { values: self.values.iter().map(|&v| f(v)).collect() }
    }

    /// Pointwise product; panics if sizes differ.
    pub fn mul(&self, other: &BoundaryGrid) -> BoundaryGrid {
        assert_eq!(self.len(), other.len(), "grid sizes differ");
        BoundaryGrid {
            values: self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect(),
        }
    }

    /// `(1/N) Σ_j g_j`, the trapezoid value of `∫ g dt/2π`.
    pub fn mean(&self) -> Complex64 {
        self.values.iter().sum::<Complex64>() / self.values.len() as f64
    }

    /// `(∫ |g|^p dt/2π)^{1/p}` by the trapezoid rule.
    pub fn lp_norm(&self, p: f64) -> f64 {
        let s: f64 = self.values.iter().map(|v| v.norm().powf(p)).sum();
        (s / self.values.len() as f64).powf(1.0 / p)
    }

    /// Discrete Fourier coefficients `c_n = (1/N) Σ_j g_j e^{-i n t_j}` for
    /// `n ∈ [−N/2, N/2)`, as a Laurent signal.
    pub fn coefficients(&self) -> Signal {
        let n = self.values.len();
        let mut buf = self.values.clone();
        FftPlanner::new().plan_fft_forward(n).process(&mut buf);
        let scale = 1.0 / n as f64;
        let half = n / 2;
        let mut out = Vec::with_capacity(n);
        out.extend(buf[half..].iter().map(|v| v * scale));
        out.extend(buf[..half].iter().map(|v| v * scale));
        Signal::new(-(half as i64), out)
    }
}

pub(crate) fn grid_angle(j: usize, n: usize) -> f64 {
    2.0 * PI * j as f64 / n as f64
}

/// Grid values `Σ_n φ(n) e^{i n t_j}`.
pub fn fourier_grid(phi: &Signal, n: usize) -> Result<BoundaryGrid> {
    check_grid_size(n)?;
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    if let Some((first, last)) = phi.support() {
        let half = (n / 2) as i64;
        if first < -half || last >= half {
            return Err(Error::SupportTooLarge { first, last, n });
        }
        for (k, v) in phi.iter() {
            buf[k.rem_euclid(n as i64) as usize] = v;
        }
    }
    FftPlanner::new().plan_fft_inverse(n).process(&mut buf);
    Ok(BoundaryGrid { values: buf })
}

/// `Σ_n φ(n) z^n` for a causal signal.
pub fn z_transform_eval(phi: &Signal, z: DiskPoint) -> Result<Complex64> {
    if !phi.is_causal() {
        return Err(Error::NonCausal);
    }
    Ok(eval_power_series(phi, z.value()))
}

/// Horner evaluation of a causal signal as a polynomial; no domain check.
pub(crate) fn eval_power_series(phi: &Signal, z: Complex64) -> Complex64 {
    let acc = phi
        .values()
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c);
    acc * z.powi(phi.offset() as i32)
}

/// Largest deviation between the grid of `φ∗ψ` and the product of grids.
pub fn convolution_theorem_check(phi: &Signal, psi: &Signal, n: usize) -> Result<f64> {
    let lhs = fourier_grid(&convolve(phi, psi), n)?;
    let rhs = fourier_grid(phi, n)?.mul(&fourier_grid(psi, n)?);
    Ok(lhs
        .values()
        .iter()
        .zip(rhs.values())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max))
}

pub fn sup_norm_grid(g: &BoundaryGrid) -> f64 {
    g.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
}

pub const DEFAULT_SUP_TOL: f64 = 1e-8;
const SUP_START: usize = 64;
const SUP_MAX: usize = 1 << 20;

/// Result of [`refine_sup`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupEstimate {
    pub value: f64,
    /// Final grid size.
    pub n: usize,
    /// Angle where the supremum was found.
    pub argmax: f64,
    /// Grid suprema for each size visited; nondecreasing.
    pub trace: Vec<(usize, f64)>,
}

/// Supremum of `|f(t)|` over the circle by grid doubling.
///
/// Doubling stops once `|sup_{2N} − sup_N| < tol·max(1, sup_N)`; the winning
/// cell is then searched by golden section. NaN samples (singular points) are
/// skipped.
pub fn refine_sup(f: impl Fn(f64) -> Complex64, tol: f64) -> Result<SupEstimate> {
    let modulus = |t: f64| {
        let v = f(t).norm();
        if v.is_nan() {
            f64::NEG_INFINITY
        } else {
            v
        }
    };
    let mut n = SUP_START;
    let mut best = f64::NEG_INFINITY;
    let mut argmax = 0.0;
    for j in 0..n {
        let t = grid_angle(j, n);
        let v = modulus(t);
        if v > best {
            best = v;
            argmax = t;
        }
    }
    let mut trace = vec![(n, best)];
    loop {
        if n >= SUP_MAX {
            return Err(Error::NotConverged { best, n });
        }
        let prev = best;
        n *= 2;
        for j in (1..n).step_by(2) {
            let t = grid_angle(j, n);
            let v = modulus(t);
            if v > best {
                best = v;
                argmax = t;
            }
        }
        trace.push((n, best));
        if (best - prev).abs() < tol * prev.abs().max(1.0) {
            break;
        }
    }
    let h = 2.0 * PI / n as f64;
    let (t_pol, v_pol) = golden_max(&modulus, argmax - h, argmax + h);
    let (value, argmax) = if v_pol > best { (v_pol, t_pol) } else { (best, argmax) };
    Ok(SupEstimate { value: value.max(0.0), n, argmax, trace })
}

fn golden_max(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..80 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    if fc > fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Poisson integral of the grid at `a`.
///
/// Evaluated as `Σ_{n≥0} c_n a^n + Σ_{n≥1} c_{−n} ā^n` from the discrete
/// Fourier coefficients, i.e. the exact Poisson integral of the grid's
/// trigonometric interpolant. Plain trapezoid quadrature of the kernel
/// aliases badly once `|a|^N` is not small.
pub fn poisson_value(g: &BoundaryGrid, a: DiskPoint) -> Complex64 {
    let coeffs = g.coefficients();
    poisson_from_coefficients(&coeffs, g.len(), a.value())
}

pub(crate) fn poisson_from_coefficients(coeffs: &Signal, n: usize, a: Complex64) -> Complex64 {
    let half = (n / 2) as i64;
    let nyq = coeffs.get(-half);
    let pos: Vec<Complex64> = (0..half).map(|k| coeffs.get(k)).collect();
    let neg: Vec<Complex64> = (0..half).map(|k| if k == 0 { Complex64::new(0.0, 0.0) } else { coeffs.get(-k) }).collect();
    let horner = |cs: &[Complex64], z: Complex64| cs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c);
    let mut v = horner(&pos, a) + horner(&neg, a.conj());
    if nyq != Complex64::new(0.0, 0.0) {
        v += nyq * 0.5 * (a.powi(half as i32) + a.conj().powi(half as i32));
    }
    v
}

/// The Szegő kernel `k_z(w) = 1/(1 − z̄w)`, reproducing for `H²`.
pub fn szego_kernel(z: DiskPoint, w: DiskPoint) -> Complex64 {
    1.0 / (1.0 - z.value().conj() * w.value())
}

/// First `len` Taylor coefficients of `k_z`: `z̄^n`.
pub fn szego_kernel_coefficients(z: DiskPoint, len: usize) -> Vec<Complex64> {
    let zc = z.value().conj();
    std::iter::successors(Some(Complex64::new(1.0, 0.0)), |p| Some(p * zc))
        .take(len)
        .collect()
}

/// `⟨f, g⟩_{H²} = Σ_n f_n conj(g_n)` on Taylor coefficients.
pub fn hardy_inner(f: &[Complex64], g: &[Complex64]) -> Complex64 {
    f.iter().zip(g).map(|(a, b)| a * b.conj()).sum()
}
