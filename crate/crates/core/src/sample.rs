//! Seeded random instances for verification sweeps, tests and benchmarks.

use num_complex::Complex64;
use rand::Rng;

use crate::linalg::{matrix_exp, ComplexMatrix, HermitianOperator};

fn unit<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.gen_range(-1.0..=1.0)
}

pub fn complex<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(unit(rng), unit(rng))
}

/// Random complex vector rescaled to the given Euclidean norm.
pub fn vector<R: Rng + ?Sized>(rng: &mut R, n: usize, norm: f64) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..n).map(|_| complex(rng)).collect();
    let current = crate::linalg::norm(&v);
    if current == 0.0 {
        return v;
    }
    v.into_iter().map(|z| z * (norm / current)).collect()
}

/// Random complex vector with norm drawn uniformly from `[0, max_norm]`.
pub fn vector_in_ball<R: Rng + ?Sized>(rng: &mut R, n: usize, max_norm: f64) -> Vec<Complex64> {
    let r = rng.gen_range(0.0..=max_norm);
    vector(rng, n, r)
}

pub fn real_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<Complex64> {
    (0..n).map(|_| Complex64::new(unit(rng), 0.0)).collect()
}

/// Random Hermitian matrix with entries of magnitude at most `scale`.
pub fn hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize, scale: f64) -> HermitianOperator {
    let mut m = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = Complex64::new(scale * unit(rng), 0.0);
        for j in i + 1..n {
            let z = complex(rng) * (scale / std::f64::consts::SQRT_2);
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    HermitianOperator::from_spectral_unchecked(m)
}

/// Haar-like random unitary as `exp(iH)` for a random Hermitian `H`.
pub fn unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    let h = hermitian(rng, n, std::f64::consts::PI);
    let u = matrix_exp(&h.matrix().scale(Complex64::new(0.0, 1.0))).expect("square");
    reorthonormalize(&u)
}

/// Random positive operator with eigenvalues drawn from `[min, min + spread]`.
pub fn positive<R: Rng + ?Sized>(rng: &mut R, n: usize, min: f64, spread: f64) -> HermitianOperator {
    let eig: Vec<f64> = (0..n).map(|_| min + spread * rng.gen_range(0.0..=1.0)).collect();
    with_spectrum(rng, &eig)
}

/// Random unitary conjugate of `diag(eigenvalues)`.
pub fn with_spectrum<R: Rng + ?Sized>(rng: &mut R, eigenvalues: &[f64]) -> HermitianOperator {
    let u = unitary(rng, eigenvalues.len());
    let d = ComplexMatrix::from_real_diag(eigenvalues);
    HermitianOperator::from_spectral_unchecked(u.matmul(&d).matmul(&u.adjoint()))
}

/// Random square matrix with Frobenius norm `norm`.
pub fn matrix_with_norm<R: Rng + ?Sized>(rng: &mut R, n: usize, norm: f64) -> ComplexMatrix {
    let m = ComplexMatrix::from_fn(n, n, |_, _| complex(rng));
    let f = m.norm_fro();
    m.scale_real(norm / f)
}

/// Gram–Schmidt on the columns, to clean up round-off in nearly unitary matrices.
pub fn reorthonormalize(u: &ComplexMatrix) -> ComplexMatrix {
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(u.cols());
    for j in 0..u.cols() {
        let mut v = u.column(j);
        for q in &cols {
            let p = crate::linalg::inner(q, &v);
            for (vi, qi) in v.iter_mut().zip(q) {
                *vi -= p * qi;
            }
        }
        let n = crate::linalg::norm(&v);
        cols.push(v.into_iter().map(|z| z / n).collect());
    }
    ComplexMatrix::from_columns(&cols)
}
