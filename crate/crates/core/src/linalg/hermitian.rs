use std::sync::OnceLock;

use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use crate::{Error, Result, ToleranceConfig};

const SWEEP_BUDGET: usize = 100;
const OFF_DIAGONAL_TOL: f64 = 1e-14;

/// Eigenvalues in ascending order with the unitary whose columns are the eigenvectors.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralData {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl SpectralData {
    /// `U · diag(f(λ)) · U*`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let u = &self.eigenvectors;
        let n = u.rows();
        let weights: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        ComplexMatrix::from_fn(n, n, |i, j| {
            (0..weights.len())
                .map(|k| u[(i, k)] * u[(j, k)].conj() * weights[k])
                .sum()
        })
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.reconstruct_with(|l| l)
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }
}

/// Self-adjoint operator on a finite-dimensional space, with lazily cached spectral data.
#[derive(Debug, Clone)]
pub struct HermitianOperator {
    matrix: ComplexMatrix,
    spectral: OnceLock<SpectralData>,
}

impl PartialEq for HermitianOperator {
    fn eq(&self, other: &Self) -> bool {
        self.matrix == other.matrix
    }
}

impl HermitianOperator {
    /// Validates `‖M − M*‖_max ≤ hermitian_tol · ‖M‖_max` and stores the symmetrised matrix.
    pub fn new(matrix: ComplexMatrix, tol: &ToleranceConfig) -> Result<Self> {
        matrix.require_square()?;
        if !matrix.is_finite() {
            return Err(Error::NotHermitian { deviation: f64::NAN });
        }
        let deviation = (&matrix - &matrix.adjoint()).norm_max();
        if deviation > tol.hermitian_tol * matrix.norm_max() {
            return Err(Error::NotHermitian { deviation });
        }
        let sym = (&matrix + &matrix.adjoint()).scale_real(0.5);
        Ok(Self { matrix: sym, spectral: OnceLock::new() })
    }

    pub fn from_real_diag(diag: &[f64]) -> Self {
        Self::from_spectral_unchecked(ComplexMatrix::from_real_diag(diag))
    }

    pub fn identity(n: usize) -> Self {
        Self::from_spectral_unchecked(ComplexMatrix::identity(n))
    }

    /// Wraps a matrix that is Hermitian by construction, symmetrising away round-off.
    pub(crate) fn from_spectral_unchecked(matrix: ComplexMatrix) -> Self {
        let sym = (&matrix + &matrix.adjoint()).scale_real(0.5);
        Self { matrix: sym, spectral: OnceLock::new() }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// Cached eigendecomposition.
    pub fn spectral(&self) -> Result<&SpectralData> {
        if let Some(s) = self.spectral.get() {
            return Ok(s);
        }
        let data = jacobi(&self.matrix)?;
        Ok(self.spectral.get_or_init(|| data))
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        Ok(self.spectral()?.eigenvalues.clone())
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(self.spectral()?.min())
    }

    /// `⟨f, H f⟩`, real for Hermitian `H`.
    pub fn quadratic_form(&self, f: &[Complex64]) -> f64 {
        super::inner(f, &self.matrix.mul_vec(f)).re
    }

    /// Functional calculus `f(H) = U·diag(f(λ))·U*`; every eigenvalue must pass `domain_guard`.
    pub fn apply_spectral_function(
        &self,
        f: impl Fn(f64) -> f64,
        domain_guard: impl Fn(f64) -> bool,
    ) -> Result<HermitianOperator> {
        let spec = self.spectral()?;
        if let Some(&bad) = spec.eigenvalues.iter().find(|&&l| !domain_guard(l)) {
            return Err(Error::DomainViolation { eigenvalue: bad });
        }
        let values: Vec<f64> = spec.eigenvalues.iter().map(|&l| f(l)).collect();
        let data = SpectralData {
            eigenvalues: values.clone(),
            eigenvectors: spec.eigenvectors.clone(),
        };
        let matrix = data.reconstruct();
        let op = Self::from_spectral_unchecked(matrix);
        // f may reorder the eigenvalues, so only cache when it preserved the order.
        if values.windows(2).all(|w| w[0] <= w[1]) {
            let _ = op.spectral.set(data);
        }
        Ok(op)
    }

    /// Square root, with eigenvalues down to `-tol` clamped to zero.
    pub fn sqrt(&self) -> Result<HermitianOperator> {
        let floor = -1e-10 * self.matrix.norm_max().max(1.0);
        self.apply_spectral_function(|l| l.max(0.0).sqrt(), |l| l >= floor)
    }

    pub fn inverse(&self) -> Result<HermitianOperator> {
        self.apply_spectral_function(|l| 1.0 / l, |l| l != 0.0 && l.is_finite())
    }

    pub fn inverse_sqrt(&self) -> Result<HermitianOperator> {
        self.apply_spectral_function(|l| 1.0 / l.sqrt(), |l| l > 0.0)
    }

    pub fn kron(&self, other: &HermitianOperator) -> HermitianOperator {
        Self::from_spectral_unchecked(self.matrix.kron(&other.matrix))
    }
}

/// Eigendecomposition of a Hermitian operator.
pub fn eig_hermitian(h: &HermitianOperator) -> Result<SpectralData> {
    h.spectral().cloned()
}

/// Cyclic Jacobi rotations on a Hermitian matrix.
///
/// Each rotation is `J = E·R·E*` where `E` rephases `a_pq` to a real number and
/// `R` is the classical real Jacobi rotation; the sweep stops once the
/// off-diagonal Frobenius mass drops below `1e-14 · ‖H‖_F`.
pub(crate) fn jacobi(h: &ComplexMatrix) -> Result<SpectralData> {
    let n = h.require_square()?;
    let mut a = h.clone();
    let mut v = ComplexMatrix::identity(n);
    let scale = h.norm_fro();
    let target = OFF_DIAGONAL_TOL * scale;

    let off_mass = |a: &ComplexMatrix| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[(i, j)].norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let mut converged = n <= 1 || off_mass(&a) <= target;
    let mut sweeps = 0;
    while !converged {
        if sweeps == SWEEP_BUDGET {
            return Err(Error::NoConvergence { sweeps });
        }
        sweeps += 1;
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag <= f64::MIN_POSITIVE * 1e3 {
                    continue;
                }
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let phase = apq / mag;
                let theta = (aqq - app) / (2.0 * mag);
                let t = if theta.is_finite() {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                } else {
                    0.0
                };
                if t == 0.0 {
                    // rotation angle underflows: a_pq is negligible against the diagonal gap
                    a[(p, q)] = Complex64::new(0.0, 0.0);
                    a[(q, p)] = Complex64::new(0.0, 0.0);
                    continue;
                }
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let jpq = phase * s;
                let jqp = -phase.conj() * s;
                // A ← A J
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * c + akq * jqp;
                    a[(k, q)] = akp * jpq + akq * c;
                }
                // A ← J* A
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = apk * c + aqk * jqp.conj();
                    a[(q, k)] = apk * jpq.conj() + aqk * c;
                }
                a[(p, q)] = Complex64::new(0.0, 0.0);
                a[(q, p)] = Complex64::new(0.0, 0.0);
                a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * c + vkq * jqp;
                    v[(k, q)] = vkp * jpq + vkq * c;
                }
            }
        }
        converged = off_mass(&a) <= target;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let eigenvalues = order.iter().map(|&i| a[(i, i)].re).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(SpectralData { eigenvalues, eigenvectors })
}

/// Spectrum of `X ⊗ Y` computed two ways: directly from the Kronecker product,
/// and as the multiset of pairwise products `λμ`.
#[derive(Debug, Clone)]
pub struct SpectrumProduct {
    pub kronecker: SpectralData,
    pub pairwise: Vec<f64>,
}

impl SpectrumProduct {
    pub fn matches(&self, pair_tol: f64) -> bool {
        super::multiset_match(&self.kronecker.eigenvalues, &self.pairwise, pair_tol).is_ok()
    }
}

pub fn spectrum_product(x: &HermitianOperator, y: &HermitianOperator) -> Result<SpectrumProduct> {
    let ex = x.eigenvalues()?;
    let ey = y.eigenvalues()?;
    let mut pairwise: Vec<f64> = ex.iter().flat_map(|a| ey.iter().map(move |b| a * b)).collect();
    pairwise.sort_by(f64::total_cmp);
    let kronecker = jacobi(x.kron(y).matrix())?;
    Ok(SpectrumProduct { kronecker, pairwise })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    #[test]
    fn identity_and_diagonal_spectra() {
        let id = HermitianOperator::identity(3);
        assert_eq!(id.eigenvalues().unwrap(), vec![1.0, 1.0, 1.0]);
        let d = HermitianOperator::from_real_diag(&[2.0, -1.0, 5.0]);
        assert_eq!(d.eigenvalues().unwrap(), vec![-1.0, 2.0, 5.0]);
    }

    #[test]
    fn two_by_two_matches_characteristic_quadratic() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let h = sample::hermitian(&mut rng, 2, 3.0);
            let m = h.matrix();
            // closed form: (a+d)/2 ± sqrt(((a−d)/2)² + |b|²)
            let (a, d, b) = (m[(0, 0)].re, m[(1, 1)].re, m[(0, 1)]);
            let mid = 0.5 * (a + d);
            let rad = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
            let ev = h.eigenvalues().unwrap();
            assert!((ev[0] - (mid - rad)).abs() < 1e-12);
            assert!((ev[1] - (mid + rad)).abs() < 1e-12);
        }
    }

    #[test]
    fn reconstruction_and_orthonormality() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in [1, 3, 7, 20] {
            let h = sample::hermitian(&mut rng, n, 2.0);
            let s = h.spectral().unwrap();
            let recon = (&s.reconstruct() - h.matrix()).norm_fro();
            assert!(recon <= 1e-9 * h.matrix().norm_fro().max(1.0));
            assert!(s.eigenvectors.unitarity_defect() < 1e-10);
            assert!(s.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = ComplexMatrix::from_real_fn(2, 2, |i, j| (i * 2 + j) as f64);
        assert!(matches!(HermitianOperator::new(m, &tol()), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn spectral_functions() {
        let d = HermitianOperator::from_real_diag(&[4.0, 9.0]);
        let s = d.sqrt().unwrap();
        assert!((&(s.matrix().clone()) - &ComplexMatrix::from_real_diag(&[2.0, 3.0])).norm_max() < 1e-15);
        let inv = HermitianOperator::from_real_diag(&[2.0]).inverse().unwrap();
        assert!((inv.matrix()[(0, 0)].re - 0.5).abs() < 1e-15);
        let neg = HermitianOperator::from_real_diag(&[-1.0, 2.0]);
        assert_eq!(
            neg.apply_spectral_function(f64::sqrt, |l| l >= 0.0).unwrap_err(),
            Error::DomainViolation { eigenvalue: -1.0 }
        );
    }

    #[test]
    fn sqrt_squares_back_and_identity_function_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in [2, 4, 6] {
            let h = sample::positive(&mut rng, n, 0.0, 3.0);
            let r = h.sqrt().unwrap();
            let back = r.matrix().matmul(r.matrix());
            assert!((&back - h.matrix()).norm_max() < 1e-9);
            let same = h.apply_spectral_function(|l| l, |_| true).unwrap();
            assert!((&(same.matrix().clone()) - h.matrix()).norm_max() < 1e-10);
        }
    }

    #[test]
    fn spectrum_product_examples() {
        let p = spectrum_product(
            &HermitianOperator::from_real_diag(&[1.0, 2.0]),
            &HermitianOperator::from_real_diag(&[3.0]),
        )
        .unwrap();
        assert_eq!(p.pairwise, vec![3.0, 6.0]);
        assert!(p.matches(1e-8));

        let p = spectrum_product(
            &HermitianOperator::from_real_diag(&[2.0, 3.0]),
            &HermitianOperator::from_real_diag(&[5.0, 7.0]),
        )
        .unwrap();
        assert_eq!(p.pairwise, vec![10.0, 14.0, 15.0, 21.0]);
        assert!(p.matches(1e-8));
        let id = HermitianOperator::identity(2);
        let p = spectrum_product(&id, &id).unwrap();
        assert_eq!(p.pairwise, vec![1.0; 4]);
        assert!(p.matches(1e-8));
    }

    #[test]
    fn eigenvalues_stable_under_unitary_conjugation() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let h = sample::hermitian(&mut rng, 5, 1.0);
        let u = sample::unitary(&mut rng, 5);
        let conj = HermitianOperator::new(u.matmul(h.matrix()).matmul(&u.adjoint()), &tol()).unwrap();
        assert!(super::super::multiset_match(&h.eigenvalues().unwrap(), &conj.eigenvalues().unwrap(), 1e-8).is_ok());
    }
}
