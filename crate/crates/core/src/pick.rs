//! Nevanlinna–Pick interpolation: find `H ∈ H^∞` with `H(λ_j) = μ_j` and
//! `‖H‖_∞ ≤ R`.
//!
//! Feasibility is positivity of the Pick matrix. Interpolants come from the
//! one-point Schur reduction, which yields a rational `H` of degree at most
//! the number of nodes.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::rational::{Polynomial, RationalFunction};
use crate::ReIm;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

pub const DEFAULT_FEASIBILITY_TOL: f64 = 1e-10;
/// Minimum distance between nodes.
pub const NODE_SEPARATION: f64 = 1e-9;
/// Normalized targets this close to the circle take the unique-solution branch.
const BOUNDARY_BAND: f64 = 1e-9;
/// Remaining targets must agree this closely in the unique-solution branch.
const DEGENERATE_MATCH: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PickRepr", into = "PickRepr")]
pub struct PickProblem {
    nodes: Vec<Complex64>,
    targets: Vec<Complex64>,
    radius: f64,
}

#[derive(Serialize, Deserialize)]
struct PickRepr {
    nodes: Vec<ReIm>,
    targets: Vec<ReIm>,
    /// Omitted means "use the minimal radius".
    #[serde(default, skip_serializing_if = "Option::is_none")]
    radius: Option<f64>,
}

impl TryFrom<PickRepr> for PickProblem {
    type Error = Error;
    fn try_from(r: PickRepr) -> Result<Self> {
        let nodes: Vec<Complex64> = r.nodes.into_iter().map(Complex64::from).collect();
        let targets: Vec<Complex64> = r.targets.into_iter().map(Complex64::from).collect();
        let radius = match r.radius {
            Some(radius) => radius,
            None => minimal_radius(&nodes, &targets, DEFAULT_FEASIBILITY_TOL)?,
        };
        PickProblem::new(nodes, targets, radius)
    }
}

impl From<PickProblem> for PickRepr {
    fn from(p: PickProblem) -> Self {
        PickRepr {
            nodes: p.nodes.into_iter().map(ReIm::from).collect(),
            targets: p.targets.into_iter().map(ReIm::from).collect(),
            radius: Some(p.radius),
        }
    }
}

fn validate(nodes: &[Complex64], targets: &[Complex64]) -> Result<()> {
    if nodes.len() != targets.len() {
        return Err(Error::InvalidInput(format!(
            "{} nodes but {} targets",
            nodes.len(),
            targets.len()
        )));
    }
    for (i, a) in nodes.iter().enumerate() {
        if a.norm() >= 1.0 {
            return Err(Error::OutsideDisk { re: a.re, im: a.im });
        }
        if nodes[..i].iter().any(|b| (a - b).norm() < NODE_SEPARATION) {
            return Err(Error::CoincidentNodes);
        }
    }
    Ok(())
}

impl PickProblem {
    pub fn new(nodes: Vec<Complex64>, targets: Vec<Complex64>, radius: f64) -> Result<Self> {
        validate(&nodes, &targets)?;
        if radius < 0.0 || !radius.is_finite() {
            return Err(Error::InvalidInput(format!("radius must be nonnegative, got {radius}")));
        }
        Ok(PickProblem { nodes, targets, radius })
    }

    pub fn nodes(&self) -> &[Complex64] {
        &self.nodes
    }

    pub fn targets(&self) -> &[Complex64] {
        &self.targets
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn with_radius(&self, radius: f64) -> Result<Self> {
        Self::new(self.nodes.clone(), self.targets.clone(), radius)
    }
}

/// Entry `(i, j)` is `(1 − μ_i conj(μ_j)/R²)/(1 − λ_i conj(λ_j))`.
pub fn pick_matrix(p: &PickProblem) -> CMatrix {
    let r2 = p.radius * p.radius;
    let n = p.nodes.len();
    CMatrix::from_fn(n, n, |i, j| {
        (ONE - p.targets[i] * p.targets[j].conj() / r2) / (ONE - p.nodes[i] * p.nodes[j].conj())
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Feasibility {
    pub feasible: bool,
    pub min_eig: f64,
}

fn min_eigenvalue(p: &PickProblem) -> f64 {
    if p.nodes.is_empty() {
        return 0.0;
    }
    if p.radius == 0.0 {
        return if p.targets.iter().all(|m| *m == ZERO) { 0.0 } else { f64::NEG_INFINITY };
    }
    linalg::hermitian_eigenvalues(&pick_matrix(p))[0]
}

/// Feasible when the smallest Pick eigenvalue is at least `−tol·scale`,
/// `scale` being the largest diagonal entry (at least 1).
pub fn is_feasible(p: &PickProblem, tol: f64) -> Feasibility {
    let min_eig = min_eigenvalue(p);
    let scale = if p.radius > 0.0 {
        let m = pick_matrix(p);
        (0..m.nrows()).map(|i| m[(i, i)].re.abs()).fold(1.0, f64::max)
    } else {
        1.0
    };
    Feasibility { feasible: min_eig >= -tol * scale, min_eig }
}

/// Smallest `R` for which the Pick matrix is positive semidefinite, to
/// within a bracket of width `tol·max(1, R)`. The feasible end is returned.
pub fn minimal_radius(nodes: &[Complex64], targets: &[Complex64], tol: f64) -> Result<f64> {
    validate(nodes, targets)?;
    let lo_bound = targets.iter().map(|m| m.norm()).fold(0.0, f64::max);
    if lo_bound == 0.0 {
        return Ok(0.0);
    }
    let eig_at = |r: f64| -> Result<f64> {
        Ok(min_eigenvalue(&PickProblem::new(nodes.to_vec(), targets.to_vec(), r)?))
    };
    if eig_at(lo_bound)? >= 0.0 {
        return Ok(lo_bound);
    }
    let mut lo = lo_bound;
    let mut hi = 2.0 * lo_bound;
    let mut doublings = 0;
    while eig_at(hi)? < 0.0 {
        lo = hi;
        hi *= 2.0;
        doublings += 1;
        if doublings > 200 {
            return Err(Error::NotConverged { best: hi, n: doublings });
        }
    }
    while hi - lo > tol * hi.max(1.0) {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if eig_at(mid)? >= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// `(z − a)/(1 − āz)`.
fn automorphism(a: Complex64) -> RationalFunction {
    RationalFunction::new(Polynomial::new(vec![-a, ONE]), Polynomial::new(vec![ONE, -a.conj()])).expect("nonzero denominator")
}

/// Interpolant of `w_j` at `nodes[j]` with sup norm at most 1.
fn schur_interpolate(nodes: &[Complex64], w: &[Complex64]) -> Result<RationalFunction> {
    let Some((&w1, rest)) = w.split_first() else {
        return Ok(RationalFunction::zero());
    };
    let m1 = w1.norm();
    if m1 > 1.0 + BOUNDARY_BAND {
        return Err(Error::Infeasible);
    }
    if rest.is_empty() {
        return Ok(RationalFunction::constant(w1));
    }
    if m1 >= 1.0 - BOUNDARY_BAND {
        if rest.iter().all(|wj| (wj - w1).norm() <= DEGENERATE_MATCH) {
            return Ok(RationalFunction::constant(w1 / m1));
        }
        return Err(Error::DegenerateBranch);
    }
    let l1 = nodes[0];
    let reduced: Vec<Complex64> = nodes[1..]
        .iter()
        .zip(rest)
        .map(|(&lj, &wj)| {
            let mobius = (wj - w1) / (ONE - w1.conj() * wj);
            let blaschke = (lj - l1) / (ONE - l1.conj() * lj);
            mobius / blaschke
        })
        .collect();
    let g = schur_interpolate(&nodes[1..], &reduced)?;
    let bg = automorphism(l1).mul(&g);
    let num = bg.add(&RationalFunction::constant(w1));
    let den = bg.scale(w1.conj()).add(&RationalFunction::constant(ONE));
    num.div(&den)
}

/// Rational `H` with `H(λ_j) = μ_j` and `‖H‖_∞ ≤ R`.
///
/// Singular (boundary) data yields the unique solution, `R` times a finite
/// Blaschke product.
pub fn solve_pick(p: &PickProblem) -> Result<RationalFunction> {
    if p.nodes.is_empty() {
        return Ok(RationalFunction::zero());
    }
    if p.radius == 0.0 {
        return if p.targets.iter().all(|m| *m == ZERO) {
            Ok(RationalFunction::zero())
        } else {
            Err(Error::Infeasible)
        };
    }
    if !is_feasible(p, DEFAULT_FEASIBILITY_TOL).feasible {
        return Err(Error::Infeasible);
    }
    let w: Vec<Complex64> = p.targets.iter().map(|m| m / p.radius).collect();
    Ok(schur_interpolate(&p.nodes, &w)?.scale(Complex64::new(p.radius, 0.0)))
}
