//! Dense complex linear algebra used by the operator and interpolation code.
//! Thin wrappers over `nalgebra`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Singular values (descending) with the top left/right singular vectors.
#[derive(Debug, Clone)]
pub struct TopSingular {
    pub values: Vec<f64>,
    /// `M · right = values[0] · left`.
    pub left: CVector,
    pub right: CVector,
}

pub fn top_singular(m: &CMatrix) -> TopSingular {
    let svd = m.clone().svd(true, true);
    let u = svd.u.expect("requested U");
    let v_t = svd.v_t.expect("requested V^*");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let top = order[0];
    TopSingular {
        values: order.iter().map(|&i| svd.singular_values[i]).collect(),
        left: u.column(top).into_owned(),
        right: v_t.row(top).adjoint(),
    }
}

/// Largest singular value.
pub fn operator_norm(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone()
        .singular_values()
        .iter()
        .copied()
        .fold(0.0, f64::max)
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let mut ev: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Eigenvalues of a general complex square matrix via the Schur form.
pub fn eigenvalues(m: &CMatrix) -> Option<Vec<Complex64>> {
    nalgebra::linalg::Schur::try_new(m.clone(), f64::EPSILON, 10_000)
        .and_then(|s| s.eigenvalues())
        .map(|v| v.iter().copied().collect())
}

/// Largest eigenvalue of a real symmetric matrix.
pub fn symmetric_max_eigenvalue(m: &DMatrix<f64>) -> f64 {
    m.clone()
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max)
}
