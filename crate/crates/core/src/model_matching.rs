//! `min ‖T − U C V‖_∞` over stable compensators `C`.
//!
//! With `UV = A_i A_o` (inner times outer) and `F = A_o C`, the problem is
//! `min ‖T − A_i F‖_∞`. Any `H = T − A_i F` satisfies `H(λ_j) = T(λ_j)` at the
//! zeros `λ_j` of `A_i`, and conversely, so the optimum is the minimal Pick
//! radius for that data. `F = (T − H)/A_i` and `C = F/A_o` are recovered by
//! exact root cancellation.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::inner_outer::{factorize, InnerFunction};
use crate::pick::{minimal_radius, solve_pick, PickProblem};
use crate::rational::{Polynomial, RationalFunction, CIRCLE_TOL, CLUSTER_TOL};
use crate::spectrum::{refine_sup, BoundaryGrid, DEFAULT_SUP_TOL};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Relative margin above `R*` at which the Pick problem is solved.
pub const RADIUS_SLACK: f64 = 1e-7;
/// Bisection tolerance for `R*`.
const RADIUS_TOL: f64 = 1e-10;
/// Relative residual of `T − H` at an inner zero above which division fails.
const CANCELLATION_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchProblem {
    pub t: RationalFunction,
    pub u: RationalFunction,
    pub v: RationalFunction,
}

/// Interpolation data extracted from `UV`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PickReduction {
    pub nodes: Vec<Complex64>,
    pub targets: Vec<Complex64>,
    pub inner: InnerFunction,
    pub outer: RationalFunction,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchSolution {
    pub c: RationalFunction,
    pub h: RationalFunction,
    pub f: RationalFunction,
    /// `sup_𝕋 |T − U C V|`.
    pub achieved: f64,
    /// Minimal Pick radius, the optimal value.
    pub r_star: f64,
    pub lambdas: Vec<Complex64>,
    pub mus: Vec<Complex64>,
}

pub fn reduce_to_pick(p: &MatchProblem) -> Result<PickReduction> {
    for g in [&p.t, &p.u, &p.v] {
        if !g.is_zero() && !g.classify().causal_stable {
            return Err(Error::NotCausalStable);
        }
    }
    let uv = p.u.mul(&p.v);
    let io = factorize(&uv, true)?;
    if io.outer.zeros().iter().any(|z| z.norm() <= 1.0 + CIRCLE_TOL) {
        return Err(Error::OuterNotInvertible);
    }
    let inner = io.inner;
    if inner.m() > 1 {
        return Err(Error::NonSimpleInnerZeros);
    }
    let mut nodes = vec![ZERO; inner.m()];
    nodes.extend_from_slice(inner.zeros());
    for (i, a) in nodes.iter().enumerate() {
        if nodes[..i].iter().any(|b| (a - b).norm() <= CLUSTER_TOL * a.norm().max(1.0)) {
            return Err(Error::NonSimpleInnerZeros);
        }
    }
    let targets = nodes.iter().map(|&l| p.t.eval(l)).collect();
    Ok(PickReduction { nodes, targets, inner, outer: io.outer })
}

/// `G / A_i` for `G` vanishing at every zero of `A_i`.
fn divide_by_inner(g: &RationalFunction, inner: &InnerFunction) -> Result<RationalFunction> {
    let mut num = g.num().clone();
    let scale: f64 = num.coeffs().iter().map(|c| c.norm()).sum::<f64>().max(f64::MIN_POSITIVE);
    let check = |p: &Polynomial, at: Complex64| -> Result<()> {
        let residual = p.eval(at).norm() / scale;
        if residual > CANCELLATION_TOL {
            return Err(Error::InnerDivisionFailed(residual));
        }
        Ok(())
    };
    for _ in 0..inner.m() {
        if num.is_zero() {
            break;
        }
        check(&num, ZERO)?;
        num = num.shift_down(1);
    }
    for &a in inner.zeros() {
        if num.is_zero() {
            break;
        }
        check(&num, a)?;
        // (z − a) = −(a/|a|)(1 − āz) φ_a(z)
        num = num.deflate(a).mul(&Polynomial::new(vec![-a / a.norm(), Complex64::new(a.norm(), 0.0)]));
    }
    RationalFunction::new(num.scale(inner.lambda().conj()), g.den().clone())
}

fn boundary_sup(f: &RationalFunction) -> Result<f64> {
    Ok(refine_sup(|t| f.eval(Complex64::from_polar(1.0, t)), DEFAULT_SUP_TOL)?.value)
}

/// `T − U C V`.
pub fn closed_loop_error(p: &MatchProblem, c: &RationalFunction) -> RationalFunction {
    p.t.sub(&p.u.mul(c).mul(&p.v))
}

pub fn model_match(p: &MatchProblem) -> Result<MatchSolution> {
    let red = reduce_to_pick(p)?;
    let r_star = if red.nodes.is_empty() {
        0.0
    } else {
        minimal_radius(&red.nodes, &red.targets, RADIUS_TOL)?
    };
    let h = if r_star == 0.0 {
        RationalFunction::zero()
    } else {
        solve_pick(&PickProblem::new(red.nodes.clone(), red.targets.clone(), r_star * (1.0 + RADIUS_SLACK))?)?
    };
    let f = divide_by_inner(&p.t.sub(&h), &red.inner)?;
    let c = f.div(&red.outer)?;
    let achieved = boundary_sup(&closed_loop_error(p, &c))?;
    Ok(MatchSolution { c, h, f, achieved, r_star, lambdas: red.nodes, mus: red.targets })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchVerification {
    /// `max_j |T − U C V|` on the grid.
    pub grid_norm: f64,
    pub achieved: f64,
    /// `|grid_norm − achieved| ≤ 1e−4 · max(1, achieved)`.
    pub agrees: bool,
    pub c_causal_stable: bool,
}

pub fn verify_match(p: &MatchProblem, sol: &MatchSolution, n: usize) -> Result<MatchVerification> {
    let err = closed_loop_error(p, &sol.c);
    let grid = BoundaryGrid::from_circle_fn(n, |z| err.eval(z))?;
    let grid_norm = crate::spectrum::sup_norm_grid(&grid);
    Ok(MatchVerification {
        grid_norm,
        achieved: sol.achieved,
        agrees: (grid_norm - sol.achieved).abs() <= 1e-4 * sol.achieved.max(1.0),
        c_causal_stable: sol.c.is_zero() || sol.c.classify().causal_stable,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn poly(coeffs: &[f64]) -> RationalFunction {
        RationalFunction::from_polynomial(Polynomial::from_real(coeffs))
    }

    fn ratio(num: &[f64], den: &[f64]) -> RationalFunction {
        RationalFunction::new(Polynomial::from_real(num), Polynomial::from_real(den)).unwrap()
    }

    #[test]
    fn reduction_examples() {
        let p = MatchProblem { t: ratio(&[1.0, 2.0], &[3.0, 1.0]), u: RationalFunction::z(), v: poly(&[1.0]) };
        let red = reduce_to_pick(&p).unwrap();
        assert_eq!(red.nodes, vec![ZERO]);
        assert!((red.targets[0] - p.t.eval(ZERO)).norm() < 1e-15);

        // U = φ_{1/2} · 1/(1 − z/4)
        let u = ratio(&[0.5, -1.0], &[1.0, -0.5]).mul(&ratio(&[1.0], &[1.0, -0.25]));
        let p = MatchProblem { t: ratio(&[1.0], &[2.0, 1.0]), u, v: poly(&[1.0]) };
        let red = reduce_to_pick(&p).unwrap();
        assert_eq!(red.nodes.len(), 1);
        assert!((red.nodes[0] - c(0.5, 0.0)).norm() < 1e-12);
        assert!((red.targets[0] - p.t.eval(c(0.5, 0.0))).norm() < 1e-12);

        let p = MatchProblem { t: RationalFunction::z(), u: ratio(&[2.0, 1.0], &[1.0]), v: poly(&[1.0]) };
        assert!(reduce_to_pick(&p).unwrap().nodes.is_empty());

        let p = MatchProblem { t: RationalFunction::z(), u: poly(&[0.0, 0.0, 1.0]), v: poly(&[1.0]) };
        assert_eq!(reduce_to_pick(&p), Err(Error::NonSimpleInnerZeros));
        let p = MatchProblem { t: RationalFunction::z(), u: poly(&[1.0, 1.0]), v: poly(&[1.0]) };
        assert_eq!(reduce_to_pick(&p), Err(Error::OuterNotInvertible));
    }

    #[test]
    fn match_examples() {
        let p = MatchProblem { t: RationalFunction::zero(), u: RationalFunction::z(), v: poly(&[1.0]) };
        let sol = model_match(&p).unwrap();
        assert!(sol.c.is_zero() && sol.achieved == 0.0);

        let p = MatchProblem { t: poly(&[0.7]), u: RationalFunction::z(), v: poly(&[1.0]) };
        let sol = model_match(&p).unwrap();
        assert!((sol.r_star - 0.7).abs() < 1e-12);
        assert!(sol.c.eval(c(0.3, 0.1)).norm() < 1e-9);
        assert!((sol.achieved - 0.7).abs() < 1e-6);

        let p = MatchProblem { t: poly(&[0.0, 0.5]), u: RationalFunction::z(), v: poly(&[1.0]) };
        let sol = model_match(&p).unwrap();
        assert_eq!(sol.r_star, 0.0);
        assert!((sol.c.eval(c(-0.2, 0.4)) - c(0.5, 0.0)).norm() < 1e-14);
        assert!(sol.achieved < 1e-14);

        let p = MatchProblem { t: RationalFunction::z(), u: ratio(&[2.0, 1.0], &[1.0]), v: poly(&[1.0]) };
        let sol = model_match(&p).unwrap();
        assert!(sol.achieved < 1e-12);
    }

    #[test]
    fn two_node_instance_and_verification() {
        let u = ratio(&[0.5, -1.0], &[1.0, 0.2]);
        let v = ratio(&[0.0, 1.0], &[2.0, -1.0]);
        let p = MatchProblem { t: ratio(&[1.0, -0.3], &[1.0, 0.5]), u, v };
        let sol = model_match(&p).unwrap();
        assert_eq!(sol.lambdas.len(), 2);
        for (l, m) in sol.lambdas.iter().zip(&sol.mus) {
            assert!((sol.h.eval(*l) - m).norm() < 1e-7);
        }
        assert!((sol.achieved - sol.r_star).abs() <= 1e-4 * sol.r_star.max(1.0));
        let ver = verify_match(&p, &sol, 4096).unwrap();
        assert!(ver.agrees && ver.c_causal_stable);

        let bumped = MatchSolution { c: sol.c.add(&RationalFunction::constant(c(0.01, 0.0))), ..sol.clone() };
        let worse = verify_match(&p, &bumped, 4096).unwrap();
        assert!(worse.grid_norm > ver.grid_norm);
    }
}
