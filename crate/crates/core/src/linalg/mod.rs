//! Dense complex linear algebra: matrices, Hermitian eigendecomposition by
//! cyclic Jacobi rotations, spectral functional calculus, the matrix
//! exponential and multiset comparison of spectra.

mod expm;
mod hermitian;
mod matrix;

pub use expm::matrix_exp;
pub use hermitian::{eig_hermitian, spectrum_product, HermitianOperator, SpectralData, SpectrumProduct};
pub use matrix::{axpy, inner, norm, vec_add, vec_conj, vec_scale, vec_sub, ComplexMatrix};

/// First pair that failed a multiset comparison.
#[derive(Debug, Clone, PartialEq)]
pub enum MultisetMismatch {
    Length { left: usize, right: usize },
    Value { left: f64, right: f64 },
}

/// Sorts both lists, pairs them in order and accepts when every pair differs
/// by at most `pair_tol · max(1, |value|)`.
pub fn multiset_match(left: &[f64], right: &[f64], pair_tol: f64) -> Result<(), MultisetMismatch> {
    if left.len() != right.len() {
        return Err(MultisetMismatch::Length { left: left.len(), right: right.len() });
    }
    let mut a = left.to_vec();
    let mut b = right.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    for (x, y) in a.iter().zip(&b) {
        if (x - y).abs() > pair_tol * x.abs().max(y.abs()).max(1.0) {
            return Err(MultisetMismatch::Value { left: *x, right: *y });
        }
    }
    Ok(())
}
