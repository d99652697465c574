//! Doubled GNS representation of quasi-free CCR states.
//!
//! For a symbol `A ≥ 1` put `T = (A − 1)/2`. The representation acts on
//! `Γ_s(K) ⊗ Γ_s(K)` by `W_A(f) = W₀(√(1+T) f) ⊗ W₀(j√T f)`, with `j` the
//! entrywise conjugation, and the commutant is generated by
//! `W_A′(f) = W₀(√T f) ⊗ W₀(j√(1+T) f)`. Everything here acts on single
//! exponential vectors `s · ε(a) ⊗ ε(b)` in closed form, so no Fock-space
//! truncation enters the modular checks.

mod toeplitz;

pub use toeplitz::{
    block_toeplitz, canonical_unit_criterion, is_block_product, shift_matrix, toeplitz_defect,
    toeplitz_isometric_extension, CanonicalUnitReport, IsometricExtension, Window,
};

use num_complex::Complex64;

use crate::linalg::{inner, norm, vec_add, vec_conj, vec_scale, vec_sub, ComplexMatrix, HermitianOperator};
use crate::{Error, Result, ToleranceConfig};

/// `A = A₀ ⊕ A₁` with `A₀ = 1` on the kernel part and `A₁ − 1` injective.
#[derive(Debug, Clone)]
pub struct SymbolDecomposition {
    pub a: HermitianOperator,
    pub t: HermitianOperator,
    pub sqrt_1pt: HermitianOperator,
    pub sqrt_t: HermitianOperator,
    inv_sqrt_1pt: ComplexMatrix,
    // inverse of √T on the retained part, zero on the kernel part
    pinv_sqrt_t: ComplexMatrix,
    kernel_projector: ComplexMatrix,
    retained_basis: Vec<Vec<Complex64>>,
    kernel_basis: Vec<Vec<Complex64>>,
}

/// Splits off the eigenspace where `A` is within `split_tol` of 1.
pub fn symbol_split(a: &HermitianOperator, tol: &ToleranceConfig) -> Result<SymbolDecomposition> {
    let spec = a.spectral()?;
    if let Some(&min) = spec.eigenvalues.first() {
        if min < 1.0 - 1e-10 {
            return Err(Error::SymbolNotAdmissible(format!("A ≥ 1 fails: min eigenvalue {min}")));
        }
    }
    let in_kernel = |alpha: f64| alpha - 1.0 <= tol.split_tol;
    let t_of = |alpha: f64| if in_kernel(alpha) { 0.0 } else { (alpha - 1.0) / 2.0 };
    let sqrt_t = HermitianOperator::from_spectral_unchecked(spec.reconstruct_with(|x| t_of(x).sqrt()));
    let t = HermitianOperator::from_spectral_unchecked(spec.reconstruct_with(t_of));
    let sqrt_1pt = HermitianOperator::from_spectral_unchecked(spec.reconstruct_with(|x| (1.0 + t_of(x)).sqrt()));
    let inv_sqrt_1pt = spec.reconstruct_with(|x| (1.0 + t_of(x)).sqrt().recip());
    let pinv_sqrt_t = spec.reconstruct_with(|x| if in_kernel(x) { 0.0 } else { t_of(x).sqrt().recip() });
    let kernel_projector = spec.reconstruct_with(|x| if in_kernel(x) { 1.0 } else { 0.0 });

    let n = a.dim();
    let (kernel, retained): (Vec<usize>, Vec<usize>) = (0..n).partition(|&i| in_kernel(spec.eigenvalues[i]));
    let kernel_basis: Vec<Vec<Complex64>> = kernel.iter().map(|&i| spec.eigenvectors.column(i)).collect();
    let retained_basis: Vec<Vec<Complex64>> = if kernel.is_empty() {
        // keep the caller's basis so block structure survives
        (0..n).map(|i| ComplexMatrix::identity(n).column(i)).collect()
    } else {
        retained.iter().map(|&i| spec.eigenvectors.column(i)).collect()
    };

    Ok(SymbolDecomposition {
        a: a.clone(),
        t,
        sqrt_1pt,
        sqrt_t,
        inv_sqrt_1pt,
        pinv_sqrt_t,
        kernel_projector,
        retained_basis,
        kernel_basis,
    })
}

impl SymbolDecomposition {
    pub fn dim(&self) -> usize {
        self.a.dim()
    }

    pub fn kernel_basis(&self) -> &[Vec<Complex64>] {
        &self.kernel_basis
    }

    pub fn retained_basis(&self) -> &[Vec<Complex64>] {
        &self.retained_basis
    }

    /// `T` compressed to the retained part, in the retained basis.
    pub fn retained_t(&self) -> HermitianOperator {
        let q = ComplexMatrix::from_columns(&self.retained_basis);
        let m = q.adjoint().matmul(self.t.matrix()).matmul(&q);
        let sym = (&m + &m.adjoint()).scale_real(0.5);
        HermitianOperator::from_spectral_unchecked(sym)
    }

    pub fn inverse_sqrt_1pt(&self) -> &ComplexMatrix {
        &self.inv_sqrt_1pt
    }

    /// `√T⁻¹` on the retained part; `None` when the kernel part is non-trivial.
    pub fn inverse_sqrt_t(&self) -> Option<&ComplexMatrix> {
        self.kernel_basis.is_empty().then_some(&self.pinv_sqrt_t)
    }

    fn require_retained(&self, f: &[Complex64]) -> Result<()> {
        if f.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: f.len() });
        }
        let leak = norm(&self.kernel_projector.mul_vec(f));
        if leak > 1e-9 * norm(f).max(1.0) {
            return Err(Error::SupportViolation(format!("component {leak:.3e} in the kernel part")));
        }
        Ok(())
    }

    /// Legs `(√(1+T) f, j√T f)` of `W_A(f)`.
    pub fn weyl_legs(&self, f: &[Complex64]) -> (Vec<Complex64>, Vec<Complex64>) {
        (self.sqrt_1pt.matrix().mul_vec(f), vec_conj(&self.sqrt_t.matrix().mul_vec(f)))
    }

    /// Legs `(√T f, j√(1+T) f)` of `W_A′(f)`.
    pub fn commutant_legs(&self, f: &[Complex64]) -> (Vec<Complex64>, Vec<Complex64>) {
        (self.sqrt_t.matrix().mul_vec(f), vec_conj(&self.sqrt_1pt.matrix().mul_vec(f)))
    }

    /// Leg maps of `Δ^{1/2}`: `√T √(1+T)⁻¹` on the left and `j √(1+T) √T⁻¹ j` on the right.
    pub fn modular_legs(&self) -> (ComplexMatrix, ComplexMatrix) {
        let left = self.sqrt_t.matrix().matmul(&self.inv_sqrt_1pt);
        let right = self.sqrt_1pt.matrix().matmul(&self.pinv_sqrt_t).conj();
        (left, right)
    }
}

/// `scalar · ε(left) ⊗ ε(right)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpVectorSymbolic {
    pub scalar: Complex64,
    pub left: Vec<Complex64>,
    pub right: Vec<Complex64>,
}

impl ExpVectorSymbolic {
    pub fn vacuum(n: usize) -> Self {
        let zero = vec![Complex64::new(0.0, 0.0); n];
        Self { scalar: Complex64::new(1.0, 0.0), left: zero.clone(), right: zero }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.left.len() == other.left.len() && self.right.len() == other.right.len() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: self.left.len(), found: other.left.len() })
        }
    }

    fn leg_inner(&self, other: &Self) -> Complex64 {
        inner(&self.left, &other.left) + inner(&self.right, &other.right)
    }

    fn leg_norm_sqr(&self) -> f64 {
        norm(&self.left).powi(2) + norm(&self.right).powi(2)
    }

    /// `conj(s)s′ e^{⟨a,a′⟩ + ⟨b,b′⟩}`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        self.check(other)?;
        Ok(self.scalar.conj() * other.scalar * self.leg_inner(other).exp())
    }

    pub fn norm(&self) -> f64 {
        self.scalar.norm() * (0.5 * self.leg_norm_sqr()).exp()
    }

    /// `‖x − y‖`, evaluated without the cancellation in `‖x‖² + ‖y‖² − 2 Re⟨x,y⟩`.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        self.check(other)?;
        if self.scalar == Complex64::new(0.0, 0.0) {
            return Ok(other.norm());
        }
        if other.scalar == Complex64::new(0.0, 0.0) {
            return Ok(self.norm());
        }
        let p = 2.0 * self.scalar.norm().ln() + self.leg_norm_sqr();
        let q = 2.0 * other.scalar.norm().ln() + other.leg_norm_sqr();
        let delta = norm(&vec_sub(&self.left, &other.left)).powi(2) + norm(&vec_sub(&self.right, &other.right)).powi(2);
        let phi = self.leg_inner(other).im + other.scalar.arg() - self.scalar.arg();
        let h = 0.5 * delta;
        let radial = ((0.5 * q).exp() * (0.5 * (p - q)).exp_m1()).powi(2);
        let angular = 2.0 * (0.5 * (p + q)).exp() * (-(-h).exp_m1() + (-h).exp() * 2.0 * (0.5 * phi).sin().powi(2));
        Ok((radial + angular).max(0.0).sqrt())
    }

    /// `W₀(u) ⊗ W₀(v)` via `W₀(u)ε(a) = e^{−½‖u‖² − ⟨u,a⟩} ε(u + a)`.
    pub fn apply_weyl(&self, u: &[Complex64], v: &[Complex64]) -> Self {
        let exponent = -0.5 * (norm(u).powi(2) + norm(v).powi(2)) - inner(u, &self.left) - inner(v, &self.right);
        Self { scalar: self.scalar * exponent.exp(), left: vec_add(u, &self.left), right: vec_add(v, &self.right) }
    }

    /// `Γ(L ⊕ R)` for linear leg maps.
    pub fn apply_linear(&self, l: &ComplexMatrix, r: &ComplexMatrix) -> Self {
        Self { scalar: self.scalar, left: l.mul_vec(&self.left), right: r.mul_vec(&self.right) }
    }

    /// `Γ(θ)` for an anti-unitary `θ` on the concatenated legs; the scalar is conjugated.
    pub fn apply_antiunitary(&self, theta: &AntiUnitary) -> Result<Self> {
        let n = self.left.len();
        let joined: Vec<Complex64> = self.left.iter().chain(&self.right).copied().collect();
        if theta.dim() != joined.len() {
            return Err(Error::DimensionMismatch { expected: joined.len(), found: theta.dim() });
        }
        let image = theta.apply(&joined);
        Ok(Self { scalar: self.scalar.conj(), left: image[..n].to_vec(), right: image[n..].to_vec() })
    }
}

/// `v ↦ U·conj(v)` in the fixed basis.
#[derive(Debug, Clone, PartialEq)]
pub struct AntiUnitary {
    unitary: ComplexMatrix,
}

impl AntiUnitary {
    pub fn new(unitary: ComplexMatrix) -> Result<Self> {
        unitary.require_square()?;
        let deviation = unitary.unitarity_defect();
        if deviation > 1e-10 {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(Self { unitary })
    }

    /// The conjugation `j`.
    pub fn conjugation(n: usize) -> Self {
        Self { unitary: ComplexMatrix::identity(n) }
    }

    /// `(a, b) ↦ (−jb, −ja)` on `K ⊕ K`; its second quantisation is the modular conjugation.
    pub fn flip(n: usize) -> Self {
        let mut u = ComplexMatrix::zeros(2 * n, 2 * n);
        for i in 0..n {
            u[(i, n + i)] = Complex64::new(-1.0, 0.0);
            u[(n + i, i)] = Complex64::new(-1.0, 0.0);
        }
        Self { unitary: u }
    }

    pub fn dim(&self) -> usize {
        self.unitary.rows()
    }

    pub fn unitary(&self) -> &ComplexMatrix {
        &self.unitary
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        self.unitary.mul_vec(&vec_conj(v))
    }

    /// `θ₁θ₂`, which is linear: `U₁ conj(U₂)`.
    pub fn compose(&self, other: &Self) -> ComplexMatrix {
        self.unitary.matmul(&other.unitary.conj())
    }
}

/// `W_A(f)Ω = e^{−½‖√(1+T)f‖² − ½‖√T f‖²} ε(√(1+T)f) ⊗ ε(j√T f)`.
pub fn gns_weyl_vector(dec: &SymbolDecomposition, f: &[Complex64]) -> Result<ExpVectorSymbolic> {
    dec.require_retained(f)?;
    let (u, v) = dec.weyl_legs(f);
    Ok(ExpVectorSymbolic::vacuum(dec.dim()).apply_weyl(&u, &v))
}

/// `W_A′(f)Ω = e^{−½‖√T f‖² − ½‖√(1+T)f‖²} ε(√T f) ⊗ ε(j√(1+T) f)`.
pub fn commutant_weyl_vector(dec: &SymbolDecomposition, f: &[Complex64]) -> Result<ExpVectorSymbolic> {
    dec.require_retained(f)?;
    let (u, v) = dec.commutant_legs(f);
    Ok(ExpVectorSymbolic::vacuum(dec.dim()).apply_weyl(&u, &v))
}

/// `‖W_A(f)W_A′(g)Ω − W_A′(g)W_A(f)Ω‖`.
pub fn commutation_residual(dec: &SymbolDecomposition, f: &[Complex64], g: &[Complex64]) -> Result<f64> {
    dec.require_retained(f)?;
    dec.require_retained(g)?;
    let (fu, fv) = dec.weyl_legs(f);
    let (gu, gv) = dec.commutant_legs(g);
    let omega = ExpVectorSymbolic::vacuum(dec.dim());
    let one = omega.apply_weyl(&gu, &gv).apply_weyl(&fu, &fv);
    let two = omega.apply_weyl(&fu, &fv).apply_weyl(&gu, &gv);
    one.distance(&two)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModularReport {
    pub lhs: ExpVectorSymbolic,
    pub rhs: ExpVectorSymbolic,
    pub residual: f64,
}

/// Compares `J Δ^{1/2} W_A(f)Ω` with `W_A(−f)Ω`.
pub fn modular_check(dec: &SymbolDecomposition, f: &[Complex64]) -> Result<ModularReport> {
    let x = gns_weyl_vector(dec, f)?;
    let (l, r) = dec.modular_legs();
    let lhs = x.apply_linear(&l, &r).apply_antiunitary(&AntiUnitary::flip(dec.dim()))?;
    let rhs = gns_weyl_vector(dec, &vec_scale(Complex64::new(-1.0, 0.0), f))?;
    let residual = lhs.distance(&rhs)?;
    Ok(ModularReport { lhs, rhs, residual })
}

/// Hilbert–Schmidt norm of `√A₁ − √A₂`.
pub fn araki_yamagami_distance(a1: &HermitianOperator, a2: &HermitianOperator) -> Result<f64> {
    if a1.dim() != a2.dim() {
        return Err(Error::DimensionMismatch { expected: a1.dim(), found: a2.dim() });
    }
    let s1 = a1.sqrt()?;
    let s2 = a2.sqrt()?;
    Ok((s1.matrix() - s2.matrix()).norm_fro())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ccr::{quasifree_eval, Lattice, QuasiFreeSymbol, ReducedWeyl, TestFunction};
    use crate::sample;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    #[test]
    fn splitting_examples() {
        let id = symbol_split(&HermitianOperator::identity(3), &tol()).unwrap();
        assert_eq!(id.kernel_basis().len(), 3);
        assert!(id.retained_basis().is_empty());

        let d = symbol_split(&HermitianOperator::from_real_diag(&[1.0, 3.0]), &tol()).unwrap();
        assert_eq!(d.kernel_basis().len(), 1);
        assert!((d.kernel_basis()[0][0].norm() - 1.0).abs() < 1e-14);
        let rt = d.retained_t();
        assert_eq!(rt.dim(), 1);
        assert!((rt.matrix()[(0, 0)] - c(1.0)).norm() < 1e-14);

        let r = HermitianOperator::from_real_diag(&[3.0, 5.0]);
        let a = HermitianOperator::identity(3).kron(&r);
        let p = symbol_split(&a, &tol()).unwrap();
        let expect = ComplexMatrix::identity(3).kron(&ComplexMatrix::from_real_diag(&[1.0, 2.0]));
        assert!((p.retained_t().matrix() - &expect).norm_max() < 1e-14);

        assert!(matches!(
            symbol_split(&HermitianOperator::from_real_diag(&[0.5]), &tol()),
            Err(Error::SymbolNotAdmissible(_))
        ));
    }

    #[test]
    fn square_roots_square_back() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let a = sample::positive(&mut rng, 5, 1.2, 3.0);
        let d = symbol_split(&a, &tol()).unwrap();
        let t = d.t.matrix();
        assert!((&d.sqrt_t.matrix().matmul(d.sqrt_t.matrix()) - t).norm_max() < 1e-9);
        let one_pt = &ComplexMatrix::identity(5) + t;
        assert!((&d.sqrt_1pt.matrix().matmul(d.sqrt_1pt.matrix()) - &one_pt).norm_max() < 1e-9);
    }

    #[test]
    fn gns_vectors_reproduce_the_state() {
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        for _ in 0..20 {
            let n = rng.gen_range(1..=6);
            let a = sample::positive(&mut rng, n, 1.05, 3.0);
            let dec = symbol_split(&a, &tol()).unwrap();
            let f = sample::vector_in_ball(&mut rng, n, 2.0);
            let x = gns_weyl_vector(&dec, &f).unwrap();
            let omega = ExpVectorSymbolic::vacuum(n);
            let lat = Lattice::new(1, n);
            let sym = QuasiFreeSymbol::new(lat, a).unwrap();
            let phi = quasifree_eval(&sym, &ReducedWeyl::generator(TestFunction::new(lat, f.clone()).unwrap())).unwrap();
            assert!((omega.inner(&x).unwrap() - phi).norm() < 1e-10);
            assert!((x.norm() - 1.0).abs() < 1e-10);
            assert!((commutant_weyl_vector(&dec, &f).unwrap().norm() - 1.0).abs() < 1e-10);
        }
        let dec = symbol_split(&HermitianOperator::from_real_diag(&[2.0, 3.0]), &tol()).unwrap();
        assert_eq!(gns_weyl_vector(&dec, &[c(0.0); 2]).unwrap(), ExpVectorSymbolic::vacuum(2));
        assert_eq!(commutant_weyl_vector(&dec, &[c(0.0); 2]).unwrap(), ExpVectorSymbolic::vacuum(2));
    }

    #[test]
    fn kernel_components_are_rejected() {
        let dec = symbol_split(&HermitianOperator::from_real_diag(&[1.0, 3.0]), &tol()).unwrap();
        assert!(matches!(gns_weyl_vector(&dec, &[c(1.0), c(0.0)]), Err(Error::SupportViolation(_))));
        assert!(gns_weyl_vector(&dec, &[c(0.0), c(1.0)]).is_ok());
    }

    #[test]
    fn algebra_and_commutant_commute() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        for _ in 0..20 {
            let a = sample::positive(&mut rng, 4, 1.1, 2.0);
            let dec = symbol_split(&a, &tol()).unwrap();
            let f = sample::vector_in_ball(&mut rng, 4, 1.5);
            let g = sample::vector_in_ball(&mut rng, 4, 1.5);
            assert!(commutation_residual(&dec, &f, &g).unwrap() < 1e-10);
        }
    }

    #[test]
    fn weyl_operators_fail_to_commute_within_the_algebra() {
        // control: two elements of M_A pick up the Weyl phase
        let dec = symbol_split(&HermitianOperator::from_real_diag(&[3.0]), &tol()).unwrap();
        let (fu, fv) = dec.weyl_legs(&[c(1.0)]);
        let (gu, gv) = dec.weyl_legs(&[Complex64::new(0.0, 1.0)]);
        let omega = ExpVectorSymbolic::vacuum(1);
        let one = omega.apply_weyl(&gu, &gv).apply_weyl(&fu, &fv);
        let two = omega.apply_weyl(&fu, &fv).apply_weyl(&gu, &gv);
        assert!(one.distance(&two).unwrap() > 0.1);
    }

    #[test]
    fn stable_distance_matches_naive_expansion() {
        let mut rng = ChaCha8Rng::seed_from_u64(34);
        for _ in 0..50 {
            let x = ExpVectorSymbolic {
                scalar: sample::complex(&mut rng),
                left: sample::vector_in_ball(&mut rng, 2, 1.0),
                right: sample::vector_in_ball(&mut rng, 2, 1.0),
            };
            let y = ExpVectorSymbolic {
                scalar: sample::complex(&mut rng),
                left: sample::vector_in_ball(&mut rng, 2, 1.0),
                right: sample::vector_in_ball(&mut rng, 2, 1.0),
            };
            let naive = (x.inner(&x).unwrap() + y.inner(&y).unwrap() - x.inner(&y).unwrap() - y.inner(&x).unwrap()).re;
            assert!((x.distance(&y).unwrap() - naive.max(0.0).sqrt()).abs() < 1e-10);
            assert_eq!(x.distance(&x).unwrap(), 0.0);
        }
    }

    #[test]
    fn modular_identity_on_random_symbols() {
        let mut rng = ChaCha8Rng::seed_from_u64(35);
        for _ in 0..50 {
            let n = rng.gen_range(1..=6);
            let a = sample::positive(&mut rng, n, 1.01, 4.0);
            let dec = symbol_split(&a, &tol()).unwrap();
            let f = sample::vector_in_ball(&mut rng, n, 2.0);
            assert!(modular_check(&dec, &f).unwrap().residual <= 1e-10);
        }
        let dec = symbol_split(&HermitianOperator::from_real_diag(&[2.0]), &tol()).unwrap();
        assert_eq!(modular_check(&dec, &[c(0.0)]).unwrap().residual, 0.0);
    }

    #[test]
    fn modular_identity_for_a_single_mode_by_hand() {
        // A = 3: T = 1, so (√2 f, j f) ↦ (f, j√2 f) ↦ (−√2 f, −j f)
        let dec = symbol_split(&HermitianOperator::from_real_diag(&[3.0]), &tol()).unwrap();
        let f = [c(1.0)];
        let x = gns_weyl_vector(&dec, &f).unwrap();
        assert!((x.left[0] - c(2f64.sqrt())).norm() < 1e-15 && (x.right[0] - c(1.0)).norm() < 1e-15);
        let (l, r) = dec.modular_legs();
        let mid = x.apply_linear(&l, &r);
        assert!((mid.left[0] - c(1.0)).norm() < 1e-15 && (mid.right[0] - c(2f64.sqrt())).norm() < 1e-15);
        let rep = modular_check(&dec, &f).unwrap();
        assert!((rep.lhs.left[0] - c(-(2f64.sqrt()))).norm() < 1e-15);
        assert!((rep.lhs.right[0] - c(-1.0)).norm() < 1e-15);
        assert!((rep.lhs.scalar - c((-1.5f64).exp())).norm() < 1e-15);
        assert!(rep.residual < 1e-15);
    }

    #[test]
    fn gns_vectors_are_independent() {
        let mut rng = ChaCha8Rng::seed_from_u64(36);
        let a = sample::positive(&mut rng, 3, 1.1, 2.0);
        let dec = symbol_split(&a, &tol()).unwrap();
        let vs: Vec<ExpVectorSymbolic> = (0..5)
            .map(|k| gns_weyl_vector(&dec, &sample::vector(&mut rng, 3, 0.5 + 0.3 * k as f64)).unwrap())
            .collect();
        let g = ComplexMatrix::from_fn(5, 5, |i, j| vs[i].inner(&vs[j]).unwrap());
        assert!(g.determinant().unwrap().norm() >= 1e-12);
    }

    #[test]
    fn araki_yamagami_examples() {
        let a = HermitianOperator::from_real_diag(&[4.0]);
        let b = HermitianOperator::from_real_diag(&[9.0]);
        assert_eq!(araki_yamagami_distance(&a, &a).unwrap(), 0.0);
        assert!((araki_yamagami_distance(&a, &b).unwrap() - 1.0).abs() < 1e-14);
        assert!(araki_yamagami_distance(&a, &HermitianOperator::identity(2)).is_err());

        let mut rng = ChaCha8Rng::seed_from_u64(37);
        let a1 = HermitianOperator::from_real_diag(&[2.0, 2.0, 5.0]);
        let a2 = HermitianOperator::from_real_diag(&[3.0, 3.0, 1.5]);
        let u = sample::unitary(&mut rng, 3);
        let conj = |x: &HermitianOperator, u: &ComplexMatrix| {
            HermitianOperator::new(u.matmul(x.matrix()).matmul(&u.adjoint()), &tol()).unwrap()
        };
        let base = araki_yamagami_distance(&a1, &a2).unwrap();
        let moved = araki_yamagami_distance(&a1, &conj(&a2, &u)).unwrap();
        assert!((base - moved).abs() > 1e-3);
        // a unitary acting inside the common eigenspaces commutes with both
        let mut w = ComplexMatrix::identity(3);
        let block = sample::unitary(&mut rng, 2);
        w.set_block(0, 0, &block);
        let both = araki_yamagami_distance(&conj(&a1, &w), &conj(&a2, &w)).unwrap();
        assert!((base - both).abs() < 1e-12);
    }

    #[test]
    fn anti_unitaries() {
        let j = AntiUnitary::conjugation(2);
        let v = [Complex64::new(1.0, 2.0), Complex64::new(0.0, -1.0)];
        assert_eq!(j.apply(&v), vec_conj(&v));
        assert!(j.compose(&j).distance_to_identity() < 1e-15);
        let flip = AntiUnitary::flip(2);
        assert!(flip.compose(&flip).distance_to_identity() < 1e-15);
        assert!(AntiUnitary::new(ComplexMatrix::from_real_diag(&[2.0])).is_err());
    }
}
