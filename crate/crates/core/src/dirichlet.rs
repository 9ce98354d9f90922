//! The Dirichlet space on the disk and its dyadic model on the binary tree.
//!
//! Tree vertices are binary strings of length at most `depth`, stored in heap
//! order: the root `o` (the empty string) is index 0 and the children of `i`
//! are `2i + 1` (append `0`) and `2i + 2` (append `1`). On the tree,
//! `If(β) = Σ_{o⪯α⪯β} f(α)`, `Δf(β) = f(β) − f(β⁻)` with `Δf(o) = 0`, and
//! `‖f‖² = |f(o)|² + ‖Δf‖²_{ℓ²}`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::quadrature::disk_integral;
use crate::ReIm;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// Deepest tree accepted by [`tree_carleson_constant`].
pub const MAX_CARLESON_DEPTH: usize = 12;
/// Deepest tree accepted by [`embed_tree_in_disk`].
pub const MAX_EMBED_DEPTH: usize = 16;
/// Supports up to this size use a dense eigensolver.
const DENSE_SUPPORT_LIMIT: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DyadicTree {
    pub depth: usize,
}

impl DyadicTree {
    pub fn new(depth: usize) -> Self {
        DyadicTree { depth }
    }

    pub fn vertex_count(self) -> usize {
        (1usize << (self.depth + 1)) - 1
    }

    pub fn parent(i: usize) -> Option<usize> {
        if i == 0 {
            None
        } else {
            Some((i - 1) / 2)
        }
    }

    /// Length `|α|` of the label of vertex `i`.
    pub fn level(i: usize) -> usize {
        (usize::BITS - 1 - (i + 1).leading_zeros()) as usize
    }

    pub fn label(mut i: usize) -> String {
        let mut bits = Vec::new();
        while i > 0 {
            bits.push(if (i - 1).is_multiple_of(2) { '0' } else { '1' });
            i = (i - 1) / 2;
        }
        bits.iter().rev().collect()
    }

    /// Heap index of a label; `""` and `"o"` both name the root.
    pub fn index_of(label: &str) -> Result<usize> {
        if label == "o" {
            return Ok(0);
        }
        label.chars().try_fold(0usize, |i, ch| match ch {
            '0' => Ok(2 * i + 1),
            '1' => Ok(2 * i + 2),
            _ => Err(Error::InvalidInput(format!("bad vertex label {label:?}"))),
        })
    }

    /// Level of the meet `α ∧ β` (longest common prefix).
    pub fn meet_level(mut a: usize, mut b: usize) -> usize {
        while a != b {
            if a > b {
                a = (a - 1) / 2;
            } else {
                b = (b - 1) / 2;
            }
        }
        Self::level(a)
    }

    /// `α ⪯ β`: `α` lies on the geodesic from the root to `β`.
    pub fn precedes(a: usize, mut b: usize) -> bool {
        while b > a {
            b = (b - 1) / 2;
        }
        a == b
    }
}

fn depth_for(max_index: Option<usize>) -> usize {
    max_index.map_or(0, DyadicTree::level)
}

/// Complex values on the vertices of a depth-`d` tree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BTreeMap<String, ReIm>", into = "BTreeMap<String, ReIm>")]
pub struct TreeFunction {
    depth: usize,
    values: Vec<Complex64>,
}

impl TryFrom<BTreeMap<String, ReIm>> for TreeFunction {
    type Error = Error;
    fn try_from(map: BTreeMap<String, ReIm>) -> Result<Self> {
        let entries = map
            .into_iter()
            .map(|(k, v)| Ok((DyadicTree::index_of(&k)?, Complex64::from(v))))
            .collect::<Result<Vec<_>>>()?;
        let depth = depth_for(entries.iter().map(|e| e.0).max());
        if depth > MAX_EMBED_DEPTH {
            return Err(Error::DepthTooLarge { depth, max: MAX_EMBED_DEPTH });
        }
        let mut f = TreeFunction::zero(depth);
        for (i, v) in entries {
            f.values[i] = v;
        }
        Ok(f)
    }
}

impl From<TreeFunction> for BTreeMap<String, ReIm> {
    fn from(f: TreeFunction) -> Self {
        f.values.iter().enumerate().map(|(i, v)| (DyadicTree::label(i), ReIm::from(*v))).collect()
    }
}

impl TreeFunction {
    pub fn zero(depth: usize) -> Self {
        TreeFunction { depth, values: vec![ZERO; DyadicTree::new(depth).vertex_count()] }
    }

    pub fn from_fn(depth: usize, f: impl FnMut(usize) -> Complex64) -> Self {
        TreeFunction { depth, values: (0..DyadicTree::new(depth).vertex_count()).map(f).collect() }
    }

    /// `χ_α`.
    pub fn indicator(depth: usize, alpha: usize) -> Self {
        Self::from_fn(depth, |i| if i == alpha { ONE } else { ZERO })
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn get(&self, i: usize) -> Complex64 {
        self.values[i]
    }
}

/// Nonnegative weights on the vertices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BTreeMap<String, f64>", into = "BTreeMap<String, f64>")]
pub struct TreeMeasure {
    depth: usize,
    weights: Vec<f64>,
}

impl TryFrom<BTreeMap<String, f64>> for TreeMeasure {
    type Error = Error;
    fn try_from(map: BTreeMap<String, f64>) -> Result<Self> {
        let entries = map
            .into_iter()
            .map(|(k, v)| Ok((DyadicTree::index_of(&k)?, v)))
            .collect::<Result<Vec<_>>>()?;
        let depth = depth_for(entries.iter().map(|e| e.0).max());
        if depth > MAX_EMBED_DEPTH {
            return Err(Error::DepthTooLarge { depth, max: MAX_EMBED_DEPTH });
        }
        let mut weights = vec![0.0; DyadicTree::new(depth).vertex_count()];
        for (i, w) in entries {
            weights[i] = w;
        }
        TreeMeasure::new(depth, weights)
    }
}

impl From<TreeMeasure> for BTreeMap<String, f64> {
    fn from(m: TreeMeasure) -> Self {
        m.weights
            .iter()
            .enumerate()
            .filter(|(_, w)| **w != 0.0)
            .map(|(i, w)| (DyadicTree::label(i), *w))
            .collect()
    }
}

impl TreeMeasure {
    pub fn new(depth: usize, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != DyadicTree::new(depth).vertex_count() {
            return Err(Error::InvalidInput(format!(
                "depth {depth} needs {} weights, got {}",
                DyadicTree::new(depth).vertex_count(),
                weights.len()
            )));
        }
        if let Some(w) = weights.iter().find(|w| w.is_nan() || **w < 0.0) {
            return Err(Error::InvalidInput(format!("negative or NaN weight {w}")));
        }
        Ok(TreeMeasure { depth, weights })
    }

    pub fn point_mass(depth: usize, alpha: usize, mass: f64) -> Result<Self> {
        let mut weights = vec![0.0; DyadicTree::new(depth).vertex_count()];
        if alpha >= weights.len() {
            return Err(Error::InvalidInput(format!("vertex {alpha} not in depth-{depth} tree")));
        }
        weights[alpha] = mass;
        Self::new(depth, weights)
    }

    /// The same measure viewed on a tree of depth `depth ≥ self.depth`.
    pub fn extended(&self, depth: usize) -> Result<Self> {
        if depth < self.depth {
            return Err(Error::InvalidInput(format!("cannot shrink depth {} to {depth}", self.depth)));
        }
        let mut weights = self.weights.clone();
        weights.resize(DyadicTree::new(depth).vertex_count(), 0.0);
        Self::new(depth, weights)
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

pub fn i_op(f: &TreeFunction) -> TreeFunction {
    let mut out = f.values.clone();
    for i in 1..out.len() {
        out[i] = out[i] + out[(i - 1) / 2];
    }
    TreeFunction { depth: f.depth, values: out }
}

pub fn delta_op(f: &TreeFunction) -> TreeFunction {
    let values = (0..f.values.len())
        .map(|i| if i == 0 { ZERO } else { f.values[i] - f.values[(i - 1) / 2] })
        .collect();
    TreeFunction { depth: f.depth, values }
}

/// `(I* g)(α) = Σ_{β ⪰ α} g(β)`, the adjoint of `I`.
fn i_adjoint(g: &[f64]) -> Vec<f64> {
    let mut out = g.to_vec();
    for i in (1..out.len()).rev() {
        out[(i - 1) / 2] += out[i];
    }
    out
}

fn i_real(g: &[f64]) -> Vec<f64> {
    let mut out = g.to_vec();
    for i in 1..out.len() {
        out[i] += out[(i - 1) / 2];
    }
    out
}

pub fn tree_inner(f: &TreeFunction, g: &TreeFunction) -> Result<Complex64> {
    if f.depth != g.depth {
        return Err(Error::InvalidInput("tree depths differ".into()));
    }
    let df = delta_op(f);
    let dg = delta_op(g);
    let sum: Complex64 = df.values.iter().zip(&dg.values).map(|(a, b)| a * b.conj()).sum();
    Ok(f.values[0] * g.values[0].conj() + sum)
}

pub fn tree_norm(f: &TreeFunction) -> f64 {
    let df = delta_op(f);
    (f.values[0].norm_sqr() + df.values.iter().map(|v| v.norm_sqr()).sum::<f64>()).sqrt()
}

/// `k_α = I(χ_{[o,α]})`, so `k_α(β) = 1 + |α ∧ β|`.
pub fn tree_kernel(depth: usize, alpha: usize) -> TreeFunction {
    let geodesic = TreeFunction::from_fn(depth, |i| if DyadicTree::precedes(i, alpha) { ONE } else { ZERO });
    i_op(&geodesic)
}

/// `sup_f Σ μ_β |f(β)|² / ‖f‖²`.
///
/// With `f = I g` the ratio is `‖M^{1/2} I g‖² / ‖g‖²`, so the constant is the
/// top eigenvalue of `[√μ_β (1 + |β ∧ γ|) √μ_γ]` over the support of `μ`.
/// Small supports are solved densely; larger ones by power iteration with the
/// tree operators `I` and `I*`.
pub fn tree_carleson_constant(mu: &TreeMeasure) -> Result<f64> {
    if mu.depth > MAX_CARLESON_DEPTH {
        return Err(Error::DepthTooLarge { depth: mu.depth, max: MAX_CARLESON_DEPTH });
    }
    let support: Vec<usize> = (0..mu.weights.len()).filter(|&i| mu.weights[i] > 0.0).collect();
    if support.is_empty() {
        return Ok(0.0);
    }
    if support.len() <= DENSE_SUPPORT_LIMIT {
        let s = support.len();
        let root: Vec<f64> = support.iter().map(|&i| mu.weights[i].sqrt()).collect();
        let m = DMatrix::from_fn(s, s, |a, b| {
            root[a] * root[b] * (1 + DyadicTree::meet_level(support[a], support[b])) as f64
        });
        return Ok(linalg::symmetric_max_eigenvalue(&m));
    }
    let root: Vec<f64> = mu.weights.iter().map(|w| w.sqrt()).collect();
    let apply = |x: &[f64]| -> Vec<f64> {
        let y: Vec<f64> = x.iter().zip(&root).map(|(a, r)| a * r).collect();
        let z = i_real(&i_adjoint(&y));
        z.iter().zip(&root).map(|(a, r)| a * r).collect()
    };
    let mut x = root.clone();
    let norm = |v: &[f64]| v.iter().map(|a| a * a).sum::<f64>().sqrt();
    let nx = norm(&x);
    x.iter_mut().for_each(|a| *a /= nx);
    let mut lambda = 0.0;
    for iter in 0..200_000 {
        let y = apply(&x);
        let rayleigh: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
        let ny = norm(&y);
        x = y.into_iter().map(|a| a / ny).collect();
        if iter > 0 && (rayleigh - lambda).abs() <= 1e-14 * rayleigh {
            return Ok(rayleigh);
        }
        lambda = rayleigh;
    }
    Err(Error::NotConverged { best: lambda, n: 200_000 })
}

/// `Σ μ_β |k_α(β)|² / ‖k_α‖²`, a lower bound for the Carleson constant.
pub fn kernel_test(mu: &TreeMeasure, alpha: usize) -> f64 {
    let norm_sq = (1 + DyadicTree::level(alpha)) as f64;
    let sum: f64 = mu
        .weights
        .iter()
        .enumerate()
        .filter(|(_, w)| **w > 0.0)
        .map(|(b, w)| w * ((1 + DyadicTree::meet_level(alpha, b)) as f64).powi(2))
        .sum();
    sum / norm_sq
}

/// Largest [`kernel_test`] over all vertices, with the maximizing vertex.
pub fn kernel_test_lower_bound(mu: &TreeMeasure) -> (f64, usize) {
    (0..mu.weights.len())
        .map(|a| (kernel_test(mu, a), a))
        .fold((0.0, 0), |best, cur| if cur.0 > best.0 { cur } else { best })
}

/// `k_z(w) = log(1/(1 − z̄w))/(z̄w)`, by its power series when `|z̄w| < 1/2`.
pub fn dirichlet_kernel(z: Complex64, w: Complex64) -> Result<Complex64> {
    let x = z.conj() * w;
    if x.norm() >= 1.0 {
        return Err(Error::OutsideDisk { re: x.re, im: x.im });
    }
    if x.norm() < 0.5 {
        let mut sum = ZERO;
        let mut power = ONE;
        for n in 0..200 {
            let term = power / (n + 1) as f64;
            sum += term;
            if term.norm() < 1e-18 {
                break;
            }
            power *= x;
        }
        Ok(sum)
    } else {
        Ok(-(ONE - x).ln() / x)
    }
}

/// First `len` Taylor coefficients of `k_z`: `z̄^n/(n+1)`.
pub fn dirichlet_kernel_coefficients(z: Complex64, len: usize) -> Vec<Complex64> {
    let zc = z.conj();
    (0..len).map(|n| zc.powu(n as u32) / (n + 1) as f64).collect()
}

/// `Σ (n+1)^α a_n conj(b_n)`.
pub fn dirichlet_inner(a: &[Complex64], b: &[Complex64], alpha: f64) -> Complex64 {
    a.iter().zip(b).enumerate().map(|(n, (x, y))| x * y.conj() * ((n + 1) as f64).powf(alpha)).sum()
}

/// `(Σ (n+1)^α |a_n|²)^{1/2}`; `α = 0` is the Hardy norm, `α = 1` Dirichlet.
pub fn dirichlet_norm(a: &[Complex64], alpha: f64) -> f64 {
    dirichlet_inner(a, a, alpha).re.sqrt()
}

const AREA_TOL: f64 = 1e-12;
const AREA_MAX_LEVEL: usize = 8;

/// `(|f(0)|² + (1/π)∫_𝔻 |f′|²(1 − |z|²)^{1−α} dx dy)^{1/2}` by polar quadrature.
///
/// Equals `(|a_0|² + Σ n |a_n|²)^{1/2}` for `α = 1` and
/// `(|a_0|² + Σ n/(n+1) |a_n|²)^{1/2}` for `α = 0`.
pub fn derivative_area_norm(a: &[Complex64], alpha: f64) -> Result<f64> {
    let a0 = a.first().map_or(0.0, |v| v.norm_sqr());
    if a.len() <= 1 {
        return Ok(a0.sqrt());
    }
    let deriv: Vec<Complex64> = a.iter().enumerate().skip(1).map(|(n, c)| c * n as f64).collect();
    let fprime = |z: Complex64| deriv.iter().rev().fold(ZERO, |acc, c| acc * z + c);
    let area = |level| {
        disk_integral(|z| fprime(z).norm_sqr() * (1.0 - z.norm_sqr()).powf(1.0 - alpha), level) / PI
    };
    let mut prev = area(0);
    for level in 1..=AREA_MAX_LEVEL {
        let cur = area(level);
        if (cur - prev).abs() <= AREA_TOL * cur.abs().max(1e-300) {
            return Ok((a0 + cur).sqrt());
        }
        prev = cur;
    }
    Err(Error::Quadrature("area integral did not converge".into()))
}

/// Vertex `i` at level `n` sits at radius `1 − 2^{−n}`, angle
/// `2π(k + 1/2)/2^n` with `k` its position within the level.
pub fn embed_tree_in_disk(depth: usize) -> Result<Vec<Complex64>> {
    if depth > MAX_EMBED_DEPTH {
        return Err(Error::DepthTooLarge { depth, max: MAX_EMBED_DEPTH });
    }
    Ok((0..DyadicTree::new(depth).vertex_count())
        .map(|i| {
            let n = DyadicTree::level(i);
            let k = i + 1 - (1 << n);
            let r = 1.0 - 0.5f64.powi(n as i32);
            Complex64::from_polar(r, 2.0 * PI * (k as f64 + 0.5) / (1u64 << n) as f64)
        })
        .collect())
}

/// Values of `Σ a_n z^n` at the embedded vertices.
pub fn restrict(a: &[Complex64], depth: usize) -> Result<TreeFunction> {
    let points = embed_tree_in_disk(depth)?;
    let eval = |z: Complex64| a.iter().rev().fold(ZERO, |acc, c| acc * z + c);
    Ok(TreeFunction { depth, values: points.into_iter().map(eval).collect() })
}
