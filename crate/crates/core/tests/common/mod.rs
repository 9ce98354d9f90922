//! Independent reference computations used to check the library.
#![allow(dead_code)]

use std::f64::consts::PI;

use hardy::rational::{Polynomial, RationalFunction};
use hardy::signal::Signal;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rustfft::FftPlanner;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn random_complex(rng: &mut impl Rng) -> Complex64 {
    c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

/// Uniform point in the disk of the given radius.
pub fn random_in_disk(rng: &mut impl Rng, radius: f64) -> Complex64 {
    let r = radius * rng.gen::<f64>().sqrt();
    Complex64::from_polar(r, rng.gen_range(0.0..2.0 * PI))
}

/// Point with modulus in `[lo, hi]`.
pub fn random_in_annulus(rng: &mut impl Rng, lo: f64, hi: f64) -> Complex64 {
    Complex64::from_polar(rng.gen_range(lo..hi), rng.gen_range(0.0..2.0 * PI))
}

/// Random signal of length at most `max_len` supported in `[lo, hi]`.
pub fn random_signal(rng: &mut impl Rng, max_len: usize, lo: i64, hi: i64) -> Signal {
    let len = rng.gen_range(1..=max_len.min((hi - lo + 1) as usize));
    let values = (0..len).map(|_| random_complex(rng)).collect();
    Signal::new(rng.gen_range(lo..=hi - len as i64 + 1), values)
}

/// Rational function with the given zeros and poles, unit leading coefficients.
pub fn rational_from_roots(zeros: &[Complex64], poles: &[Complex64], gain: Complex64) -> RationalFunction {
    RationalFunction::new(Polynomial::from_roots(zeros, gain), Polynomial::from_roots(poles, c(1.0, 0.0))).unwrap()
}

pub fn circle_point(n: usize, j: usize) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * j as f64 / n as f64)
}

/// `Σ_n φ(n) e^{int}` at `t_j = 2πj/N`, summed directly.
pub fn naive_dft(phi: &Signal, n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|j| {
            let t = 2.0 * PI * j as f64 / n as f64;
            phi.iter().map(|(k, v)| v * Complex64::from_polar(1.0, k as f64 * t)).sum()
        })
        .collect()
}

/// `(φ∗ψ)(m) = Σ_n φ(m − n) ψ(n)` evaluated index by index.
pub fn double_sum_convolution(phi: &Signal, psi: &Signal) -> Signal {
    let (Some((a0, a1)), Some((b0, b1))) = (phi.support(), psi.support()) else {
        return Signal::zero();
    };
    let values = (a0 + b0..=a1 + b1).map(|m| (b0..=b1).map(|n| phi.get(m - n) * psi.get(n)).sum()).collect();
    Signal::new(a0 + b0, values)
}

/// Top singular value by power iteration on `A* A`.
pub fn power_iteration_norm(a: &DMatrix<Complex64>) -> f64 {
    let mut x = DVector::from_fn(a.ncols(), |i, _| c(1.0 + i as f64 * 0.37, 0.5 - i as f64 * 0.11));
    x /= c(x.norm(), 0.0);
    let mut sigma = 0.0;
    for _ in 0..20_000 {
        let y = a.adjoint() * (a * &x);
        let lambda = y.norm();
        if lambda == 0.0 {
            return 0.0;
        }
        x = y / c(lambda, 0.0);
        let next = lambda.sqrt();
        if (next - sigma).abs() <= 1e-15 * next {
            return next;
        }
        sigma = next;
    }
    sigma
}

/// `min_q max_j |φ(t_j) − q(e^{it_j})|` over polynomials `q` of the given
/// degree, by Lawson's iteratively reweighted least squares. The normal
/// equations are Toeplitz in the weight moments, which come from one FFT.
pub fn lawson_minimax(phi: &[Complex64], degree: usize, iterations: usize) -> f64 {
    let n = phi.len();
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(n);
    let inverse = planner.plan_fft_inverse(n);
    let mut weights = vec![1.0 / n as f64; n];
    let mut best = f64::INFINITY;
    for _ in 0..iterations {
        // m[k] = Σ_j w_j e^{−ikt_j}, r[k] = Σ_j w_j φ_j e^{−ikt_j}
        let mut moments: Vec<Complex64> = weights.iter().map(|w| c(*w, 0.0)).collect();
        let mut rhs: Vec<Complex64> = weights.iter().zip(phi).map(|(w, p)| p * *w).collect();
        fft.process(&mut moments);
        fft.process(&mut rhs);
        let moment = |k: i64| moments[k.rem_euclid(n as i64) as usize];
        let gram = DMatrix::from_fn(degree + 1, degree + 1, |k, l| moment(k as i64 - l as i64));
        let b = DVector::from_fn(degree + 1, |k, _| rhs[k]);
        let Some(chol) = gram.cholesky() else { break };
        let coeffs = chol.solve(&b);
        let mut q = vec![ZERO; n];
        q[..=degree].copy_from_slice(coeffs.as_slice());
        inverse.process(&mut q);
        let moduli: Vec<f64> = phi.iter().zip(&q).map(|(p, q)| (p - q).norm()).collect();
        best = best.min(moduli.iter().copied().fold(0.0, f64::max));
        let total: f64 = weights.iter().zip(&moduli).map(|(w, r)| w * r).sum();
        if total == 0.0 {
            break;
        }
        for (w, r) in weights.iter_mut().zip(&moduli) {
            *w *= r / total;
        }
    }
    best
}

/// `sup_𝕋 |f|` sampled on a fine grid, a lower bound on the true sup.
pub fn dense_sup(f: impl Fn(Complex64) -> Complex64, n: usize) -> f64 {
    (0..n).map(|j| f(circle_point(n, j)).norm()).fold(0.0, f64::max)
}

/// `Σ_{n≥0} |c_n|²` of a causal-stable rational function from its impulse response.
pub fn h2_norm_from_coefficients(b: &RationalFunction, len: usize) -> f64 {
    b.impulse_response(len).unwrap().values().iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

/// The `n × n` matrix `1/(i + j + 1)`.
pub fn hilbert_matrix(n: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(n, n, |i, j| c(1.0 / (i + j + 1) as f64, 0.0))
}
