//! Area quadrature on the unit disk.

use std::f64::consts::PI;
use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;
use num_complex::Complex64;

const PANEL_ORDER: usize = 10;

/// Polar product rule for `∫_𝔻 f dx dy`: Gauss–Legendre panels in `r`,
/// graded geometrically toward the circle, and the trapezoid rule in `θ`.
/// Both resolutions grow with `level`.
pub(crate) fn disk_integral(f: impl Fn(Complex64) -> f64, level: usize) -> f64 {
    let panels = 6 + 2 * level;
    let angles = 32usize << level;
    let rule = GaussLegendre::new(NonZeroUsize::new(PANEL_ORDER).unwrap());
    let mut edges = vec![0.0];
    edges.extend((1..panels).map(|k| 1.0 - 0.5f64.powi(k as i32)));
    edges.push(1.0);
    let dtheta = 2.0 * PI / angles as f64;
    let rotations: Vec<Complex64> = (0..angles).map(|j| Complex64::from_polar(1.0, j as f64 * dtheta)).collect();
    let mut total = 0.0;
    for w in edges.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let half = 0.5 * (hi - lo);
        for &(x, wt) in rule.as_node_weight_pairs() {
            let r = lo + half * (x + 1.0);
            let ring: f64 = rotations.iter().map(|e| f(e * r)).sum();
            total += half * wt * r * ring * dtheta;
        }
    }
    total
}
