//! Small dense linear algebra on top of `nalgebra`: determinants, condition
//! numbers, generalized eigenvalues of a pencil and null vectors.

use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};

use crate::{Error, Result};

pub fn determinant(m: &DMatrix<f64>) -> f64 {
    m.clone().lu().determinant()
}

/// Ratio of largest to smallest singular value (`inf` when singular).
pub fn condition_number(m: &DMatrix<f64>) -> f64 {
    let sv = m.clone().svd(false, false).singular_values;
    let max = sv.max();
    let min = sv.min();
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Eigenvalues `lambda` of `(a1 - lambda a0) r = 0` as `(re, im)` pairs,
/// sorted by real part.
pub fn generalized_eigenvalues(a1: &DMatrix<f64>, a0: &DMatrix<f64>) -> Result<Vec<(f64, f64)>> {
    let b = a0
        .clone()
        .lu()
        .solve(a1)
        .ok_or(Error::Singular("A0 is not invertible"))?;
    // The QR iteration can stall on exactly structured matrices (zero
    // entries, symmetric spectra); a diagonal shift breaks the symmetry
    // without changing the eigenvectors.
    let scale = b.amax().max(1.0);
    let mut eig: Vec<(f64, f64)> = Vec::new();
    for shift in [0.0, 0.5 * scale, -0.37 * scale, 1.3 * scale] {
        let shifted = &b + DMatrix::identity(b.nrows(), b.ncols()) * shift;
        if let Some(schur) = nalgebra::linalg::Schur::try_new(shifted, f64::EPSILON, 10_000) {
            eig = schur
                .complex_eigenvalues()
                .iter()
                .map(|z| (z.re - shift, z.im))
                .collect();
            break;
        }
    }
    if eig.is_empty() {
        return Err(Error::internal("Schur iteration did not converge"));
    }
    eig.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    Ok(eig)
}

/// Singular values in ascending order with the matching right singular vectors.
pub fn right_singular_pairs(m: &DMatrix<f64>) -> Vec<(f64, DVector<f64>)> {
    let svd = m.clone().svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let mut pairs: Vec<(f64, DVector<f64>)> = svd
        .singular_values
        .iter()
        .enumerate()
        .map(|(i, &s)| (s, v_t.row(i).transpose()))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs
}

/// Unit vectors spanning the numerical null space of dimension `k`.
pub fn null_vectors(m: &DMatrix<f64>, k: usize) -> Vec<DVector<f64>> {
    right_singular_pairs(m)
        .into_iter()
        .take(k)
        .map(|(_, v)| v)
        .collect()
}

/// Absolute value of the cosine between two vectors (1 when collinear).
pub fn collinearity(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na = crate::math::norm2(a);
    let nb = crate::math::norm2(b);
    crate::math::abs(dot) / (na * nb)
}
