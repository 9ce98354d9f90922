//! Numerical toolkit for Hardy-space system theory of discrete-time,
//! single-input single-output LTI systems.
//!
//! Modules, roughly bottom-up:
//!
//! - [`signal`]: finitely supported signals, convolution, shifts, stability gains.
//! - [`spectrum`]: boundary grids, Fourier/Z-transforms, Poisson integrals,
//!   the Szegő kernel and sup-norms on the circle.
//! - [`rational`]: complex polynomials and rational transfer functions.
//! - [`inner_outer`]: Blaschke products, singular inner functions, outer
//!   functions and inner/outer factorization.
//! - [`operators`]: Hankel and Toeplitz operators, Nehari distance and best
//!   causal approximation, von Neumann's inequality, Carleson estimates.
//! - [`pick`]: Nevanlinna–Pick feasibility and interpolation.
//! - [`model_matching`]: the `min ‖T − UCV‖_∞` pipeline built on [`pick`].
//! - [`sampling`]: sinc kernels and Shannon reconstruction.
//! - [`dirichlet`]: Dirichlet-space norms and kernels, and the dyadic tree model.
//!
//! Scalars are `f64`/[`num_complex::Complex64`] throughout; all operations
//! are pure functions on immutable values.

pub mod dirichlet;
pub mod error;
pub mod inner_outer;
pub mod linalg;
pub mod model_matching;
pub mod operators;
pub mod pick;
mod quadrature;
pub mod rational;
pub mod sampling;
pub mod signal;
pub mod spectrum;

pub use error::{Error, Result};
pub use num_complex::Complex64;

use serde::{Deserialize, Serialize};

/// `{"re": …, "im": …}` wire form of a complex number.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub(crate) struct ReIm {
    re: f64,
    #[serde(default)]
    im: f64,
}

impl From<Complex64> for ReIm {
    fn from(z: Complex64) -> Self {
        ReIm { re: z.re, im: z.im }
    }
}

impl From<ReIm> for Complex64 {
    fn from(z: ReIm) -> Self {
        Complex64::new(z.re, z.im)
    }
}

/// Pairs real and imaginary parts; an empty `im` means purely real.
pub(crate) fn zip_complex(re: &[f64], im: &[f64]) -> Result<Vec<Complex64>> {
    if im.is_empty() {
        return Ok(re.iter().map(|&r| Complex64::new(r, 0.0)).collect());
    }
    if re.len() != im.len() {
        return Err(Error::InvalidInput(format!(
            "re has {} entries but im has {}",
            re.len(),
            im.len()
        )));
    }
    Ok(re.iter().zip(im).map(|(&r, &i)| Complex64::new(r, i)).collect())
}
