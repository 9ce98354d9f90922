mod common;

use common::{c, circle_point, random_complex, random_in_annulus, random_in_disk, rational_from_roots, rng};
use hardy::inner_outer::{
    blaschke_condition, blaschke_factor, factorize_rational, outer_boundary_values, outer_from_log_modulus,
    GapRule, InnerFunction,
};
use hardy::spectrum::BoundaryGrid;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::Rng;

fn disk_point() -> impl Strategy<Value = Complex64> {
    (0.01f64..0.97, 0.0f64..std::f64::consts::TAU).prop_map(|(r, t)| Complex64::from_polar(r, t))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn blaschke_factor_is_a_disk_automorphism(a in disk_point(), z in disk_point(), t in 0.0f64..std::f64::consts::TAU) {
        prop_assert!(blaschke_factor(a, a).unwrap().norm() < 1e-14);
        prop_assert!(blaschke_factor(a, z).unwrap().norm() < 1.0);
        prop_assert!((blaschke_factor(a, Complex64::from_polar(1.0, t)).unwrap().norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn products_vanish_at_their_zeros(zeros in prop::collection::vec(disk_point(), 1..6)) {
        let theta = InnerFunction::blaschke(&zeros).unwrap();
        for z in &zeros {
            prop_assert!(theta.eval(*z).unwrap().norm() < 1e-12);
        }
        let rational = theta.blaschke_rational();
        let x = c(0.1, -0.2);
        prop_assert!((rational.eval(x) - theta.eval(x).unwrap()).norm() < 1e-10);
    }
}

#[test]
fn factorization_splits_zeros_by_the_circle() {
    let mut rng = rng(31);
    for _ in 0..30 {
        let inside: Vec<Complex64> = (0..rng.gen_range(0..4)).map(|_| random_in_disk(&mut rng, 0.9)).collect();
        let outside: Vec<Complex64> = (0..rng.gen_range(0..4)).map(|_| random_in_annulus(&mut rng, 1.1, 3.0)).collect();
        let poles: Vec<Complex64> = (0..rng.gen_range(0..3)).map(|_| random_in_annulus(&mut rng, 1.2, 3.0)).collect();
        let zeros: Vec<Complex64> = inside.iter().chain(&outside).copied().collect();
        if zeros.is_empty() {
            continue;
        }
        let b = rational_from_roots(&zeros, &poles, random_complex(&mut rng));
        let io = factorize_rational(&b).unwrap();
        assert_eq!(io.inner.zeros().len() + io.inner.m(), inside.len());
        assert!(io.outer.zeros().iter().all(|z| z.norm() > 1.0));
        // The outer factor is positive at the origin.
        let u0 = io.outer.eval(Complex64::new(0.0, 0.0));
        assert!(u0.im.abs() < 1e-10 * u0.norm() && u0.re > 0.0);
    }
}

#[test]
fn outer_from_log_modulus_matches_rational_outer() {
    // u(z) = 2 − z is outer with log|u| on the circle as its log-modulus.
    let n = 1024;
    let k = BoundaryGrid::from_circle_fn(n, |z| c((c(2.0, 0.0) - z).norm().ln(), 0.0)).unwrap();
    for z in [c(0.0, 0.0), c(0.3, 0.4), c(-0.6, 0.1)] {
        let u = outer_from_log_modulus(&k, z).unwrap();
        assert!((u - (c(2.0, 0.0) - z)).norm() < 1e-10);
    }
    let boundary = outer_boundary_values(&k, 1.0);
    for j in (0..n).step_by(37) {
        assert!((boundary.values()[j] - (c(2.0, 0.0) - circle_point(n, j))).norm() < 1e-10);
    }
    let root = outer_boundary_values(&k, 0.5);
    let squared = root.mul(&root);
    for (a, b) in squared.values().iter().zip(boundary.values()) {
        assert!((a - b).norm() < 1e-10);
    }
}

#[test]
fn blaschke_condition_verdicts() {
    assert!(blaschke_condition(&GapRule::Geometric { scale: 0.5, ratio: 0.5 }, 100).convergent);
    assert!(!blaschke_condition(&GapRule::Power { scale: 1.0, exponent: 1.0 }, 100).convergent);
    assert!(blaschke_condition(&GapRule::Power { scale: 1.0, exponent: 2.0 }, 100).convergent);
}
