//! Block-Toeplitz operators on the lattice half-line and their shift extensions.
//!
//! On a finite lattice a Toeplitz `X` satisfies `T_t* X T_t = P X P` with `P`
//! the projection onto the first `M − t` cells, so `Y_t = √X T_t √X⁻¹` is
//! isometric only up to the mass `X^{−1/2} f` carries into the last `t` cells.
//! Cell 0 is the genuine boundary of the half-line while the right edge is an
//! artifact of truncation, so every statement is made on the window
//! `[0, M − margin)`, which is recorded in the report.

use num_complex::Complex64;
use serde::Serialize;

use super::symbol_split;
use crate::ccr::Lattice;
use crate::linalg::{ComplexMatrix, HermitianOperator};
use crate::{Error, Result, ToleranceConfig};

/// Half-open cell range `[start, end)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Window {
    pub start: usize,
    pub end: usize,
}

impl Window {
    fn truncated(lattice: Lattice, margin: usize) -> Result<Self> {
        if margin >= lattice.cells {
            return Err(Error::LatticeOverflow { needed: margin + 1, cells: lattice.cells });
        }
        Ok(Self { start: 0, end: lattice.cells - margin })
    }

    fn indices(&self, lattice: Lattice) -> Vec<usize> {
        let n = lattice.multiplicity;
        (self.start * n..self.end * n).collect()
    }
}

/// Block right shift `T_t`; mass pushed past the last cell is dropped.
pub fn shift_matrix(lattice: Lattice, t: usize) -> ComplexMatrix {
    let n = lattice.multiplicity;
    let mut m = ComplexMatrix::zeros(lattice.dim(), lattice.dim());
    for cell in 0..lattice.cells.saturating_sub(t) {
        for k in 0..n {
            m[((cell + t) * n + k, cell * n + k)] = Complex64::new(1.0, 0.0);
        }
    }
    m
}

/// `X_{ij} = C_{i−j}` for `i ≥ j` and `C_{j−i}*` otherwise, from `blocks = [C₀, C₁, …]`.
pub fn block_toeplitz(lattice: Lattice, blocks: &[ComplexMatrix]) -> Result<HermitianOperator> {
    let n = lattice.multiplicity;
    if let Some(b) = blocks.iter().find(|b| b.rows() != n || b.cols() != n) {
        return Err(Error::DimensionMismatch { expected: n, found: b.rows() });
    }
    let mut x = ComplexMatrix::zeros(lattice.dim(), lattice.dim());
    for i in 0..lattice.cells {
        for j in 0..lattice.cells {
            let lag = i.abs_diff(j);
            if let Some(b) = blocks.get(lag) {
                let block = if i >= j { b.clone() } else { b.adjoint() };
                x.set_block(i * n, j * n, &block);
            }
        }
    }
    HermitianOperator::new(x, &ToleranceConfig::default())
}

fn check_lattice(x: &HermitianOperator, lattice: Lattice) -> Result<()> {
    if x.dim() == lattice.dim() {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected: lattice.dim(), found: x.dim() })
    }
}

/// Largest `|X_{(i+1)(j+1)} − X_{ij}|` over blocks, relative to `‖X‖_max`.
pub fn toeplitz_defect(x: &HermitianOperator, lattice: Lattice) -> Result<f64> {
    check_lattice(x, lattice)?;
    let n = lattice.multiplicity;
    let m = x.matrix();
    let mut worst: f64 = 0.0;
    for r in 0..lattice.dim().saturating_sub(n) {
        for c in 0..lattice.dim().saturating_sub(n) {
            worst = worst.max((m[(r + n, c + n)] - m[(r, c)]).norm());
        }
    }
    Ok(worst / m.norm_max().max(f64::MIN_POSITIVE))
}

/// Whether `X = I_M ⊗ R`: off-diagonal blocks vanish and diagonal blocks agree.
pub fn is_block_product(x: &HermitianOperator, lattice: Lattice, tol: f64) -> Result<bool> {
    check_lattice(x, lattice)?;
    let n = lattice.multiplicity;
    let m = x.matrix();
    let scale = tol * m.norm_max().max(1.0);
    for r in 0..lattice.dim() {
        for c in 0..lattice.dim() {
            let (ci, cj) = (r / n, c / n);
            let expected = if ci == cj { m[(r % n, c % n)] } else { Complex64::new(0.0, 0.0) };
            if (m[(r, c)] - expected).norm() > scale {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn require_toeplitz(x: &HermitianOperator, lattice: Lattice, tol: &ToleranceConfig) -> Result<()> {
    let deviation = toeplitz_defect(x, lattice)?;
    if deviation > tol.toeplitz_tol {
        return Err(Error::NotToeplitz { deviation });
    }
    Ok(())
}

fn columns(m: &ComplexMatrix, idx: &[usize]) -> ComplexMatrix {
    ComplexMatrix::from_fn(m.rows(), idx.len(), |r, c| m[(r, idx[c])])
}

/// Eigenvalues of `(M + M*)/2`.
fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    let sym = (m + &m.adjoint()).scale_real(0.5);
    HermitianOperator::from_spectral_unchecked(sym).eigenvalues()
}

/// `max |‖Yf‖/‖f‖ − 1|` over `f` in the span of the given coordinates.
fn isometry_deviation(y: &ComplexMatrix, idx: &[usize]) -> Result<f64> {
    if idx.is_empty() {
        return Ok(0.0);
    }
    let yw = columns(y, idx);
    let gram = &yw.adjoint().matmul(&yw) - &ComplexMatrix::identity(idx.len());
    let ev = hermitian_eigenvalues(&gram)?;
    Ok(ev.iter().map(|l| ((1.0 + l).max(0.0).sqrt() - 1.0).abs()).fold(0.0, f64::max))
}

/// Operator norm of `M` restricted to the given coordinates.
fn restricted_norm(m: &ComplexMatrix, idx: &[usize]) -> Result<f64> {
    if idx.is_empty() {
        return Ok(0.0);
    }
    let mw = columns(m, idx);
    let ev = hermitian_eigenvalues(&mw.adjoint().matmul(&mw))?;
    Ok(ev.last().copied().unwrap_or(0.0).max(0.0).sqrt())
}

#[derive(Debug, Clone)]
pub struct IsometricExtension {
    pub y: ComplexMatrix,
    pub window: Window,
    /// `max |‖Y_t f‖/‖f‖ − 1|` over `f` supported in the window.
    pub isometry_deviation: f64,
    /// The same quantity over `f` supported in the last `t` cells.
    pub boundary_deviation: f64,
    /// `max_s ‖(Y_s Y_t − Y_{s+t})f‖/‖f‖` over window vectors, `1 ≤ s ≤ t`.
    pub semigroup_deviation: f64,
}

/// `Y_t = √X T_t √X⁻¹` for a positive definite block-Toeplitz `X`.
pub fn toeplitz_isometric_extension(
    x: &HermitianOperator,
    lattice: Lattice,
    t: usize,
    margin: usize,
    tol: &ToleranceConfig,
) -> Result<IsometricExtension> {
    check_lattice(x, lattice)?;
    let min = x.min_eigenvalue()?;
    if min <= 1e-12 * x.matrix().norm_max() {
        return Err(Error::NotPositiveDefinite { min_eigenvalue: min });
    }
    require_toeplitz(x, lattice, tol)?;
    if t > lattice.cells {
        return Err(Error::LatticeOverflow { needed: t, cells: lattice.cells });
    }
    let window = Window::truncated(lattice, margin)?;
    let root = x.sqrt()?.into_matrix();
    let inv_root = x.inverse_sqrt()?.into_matrix();
    let ext = |s: usize| root.matmul(&shift_matrix(lattice, s)).matmul(&inv_root);
    let y = ext(t);

    let idx = window.indices(lattice);
    let isometry = isometry_deviation(&y, &idx)?;
    let n = lattice.multiplicity;
    let tail: Vec<usize> = ((lattice.cells - t) * n..lattice.dim()).collect();
    let boundary = isometry_deviation(&y, &tail)?;
    let mut semigroup: f64 = 0.0;
    for s in 1..=t.min(lattice.cells - t) {
        let diff = &ext(s).matmul(&y) - &ext(s + t);
        semigroup = semigroup.max(restricted_norm(&diff, &idx)?);
    }
    Ok(IsometricExtension {
        y,
        window,
        isometry_deviation: isometry,
        boundary_deviation: boundary,
        semigroup_deviation: semigroup,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct CanonicalUnitReport {
    pub product_form: bool,
    pub residual: f64,
    pub window: Window,
    /// Direct detection of `A = I ⊗ R` from the block structure.
    pub block_product_form: bool,
}

impl CanonicalUnitReport {
    pub fn consistent(&self) -> bool {
        self.product_form == self.block_product_form
    }
}

/// Distance between `√(1+T) T_t √(1+T)⁻¹` and `√T T_t √T⁻¹` on window vectors.
///
/// The two extensions agree exactly when `A = I ⊗ R`.
pub fn canonical_unit_criterion(
    a: &HermitianOperator,
    lattice: Lattice,
    t: usize,
    margin: usize,
    tol: &ToleranceConfig,
) -> Result<CanonicalUnitReport> {
    check_lattice(a, lattice)?;
    require_toeplitz(a, lattice, tol)?;
    let dec = symbol_split(a, tol)?;
    let inv_sqrt_t = dec
        .inverse_sqrt_t()
        .ok_or_else(|| Error::SymbolNotAdmissible("A − 1 must be injective".into()))?;
    let window = Window::truncated(lattice, margin)?;
    let shift = shift_matrix(lattice, t);
    let y_one = dec.sqrt_1pt.matrix().matmul(&shift).matmul(dec.inverse_sqrt_1pt());
    let y_t = dec.sqrt_t.matrix().matmul(&shift).matmul(inv_sqrt_t);
    let residual = restricted_norm(&(&y_one - &y_t), &window.indices(lattice))?;
    Ok(CanonicalUnitReport {
        product_form: residual <= tol.criterion_tol,
        residual,
        window,
        block_product_form: is_block_product(a, lattice, tol.toeplitz_tol)?,
    })
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

    fn scalar(x: f64) -> ComplexMatrix {
        ComplexMatrix::from_real_diag(&[x])
    }

    #[test]
    fn identity_extension_is_the_shift() {
        let lat = Lattice::new(10, 2);
        let ext = toeplitz_isometric_extension(&HermitianOperator::identity(20), lat, 3, 3, &tol()).unwrap();
        assert!((&ext.y - &shift_matrix(lat, 3)).norm_max() < 1e-14);
        assert!(ext.isometry_deviation < 1e-14);
        assert!((ext.boundary_deviation - 1.0).abs() < 1e-14);
    }

    #[test]
    fn product_symbols_commute_with_the_shift() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let r = sample::positive(&mut rng, 2, 0.5, 2.0);
        let lat = Lattice::new(12, 2);
        let x = HermitianOperator::identity(12).kron(&r);
        let ext = toeplitz_isometric_extension(&x, lat, 2, 2, &tol()).unwrap();
        assert!((&ext.y - &shift_matrix(lat, 2)).norm_max() < 1e-10);
        assert!(ext.isometry_deviation <= 1e-10);
        assert!(ext.semigroup_deviation <= 1e-10);
    }

    #[test]
    fn tridiagonal_symbol_window_contract() {
        // symbol 2 + cos θ
        let lat = Lattice::new(40, 1);
        let x = block_toeplitz(lat, &[scalar(2.0), scalar(0.5)]).unwrap();
        let ext = toeplitz_isometric_extension(&x, lat, 2, 10, &tol()).unwrap();
        assert!(ext.isometry_deviation <= 1e-8, "{}", ext.isometry_deviation);
        assert!(ext.boundary_deviation >= 1e-2);
        assert!(ext.semigroup_deviation <= 1e-10);
        assert_eq!(ext.window, Window { start: 0, end: 30 });
    }

    #[test]
    fn rejections() {
        let lat = Lattice::new(4, 1);
        let mut m = ComplexMatrix::identity(4);
        m[(0, 0)] = Complex64::new(2.0, 0.0);
        let bumped = HermitianOperator::new(m, &tol()).unwrap();
        assert!(matches!(toeplitz_isometric_extension(&bumped, lat, 1, 1, &tol()), Err(Error::NotToeplitz { .. })));
        let singular = block_toeplitz(lat, &[scalar(1.0), scalar(1.0), scalar(1.0), scalar(1.0)]).unwrap();
        assert!(matches!(
            toeplitz_isometric_extension(&singular, lat, 1, 1, &tol()),
            Err(Error::NotPositiveDefinite { .. })
        ));
    }

    #[test]
    fn canonical_unit_criterion_separates_product_symbols() {
        let lat = Lattice::new(16, 2);
        let a = HermitianOperator::identity(16).kron(&HermitianOperator::from_real_diag(&[3.0, 5.0]));
        let rep = canonical_unit_criterion(&a, lat, 2, 4, &tol()).unwrap();
        assert!(rep.product_form && rep.residual <= 1e-9 && rep.consistent());

        let zero = canonical_unit_criterion(&a, lat, 0, 4, &tol()).unwrap();
        assert!(zero.residual < 1e-12);

        let lat = Lattice::new(24, 1);
        let conv = block_toeplitz(lat, &[scalar(2.5), scalar(0.5)]).unwrap();
        let rep = canonical_unit_criterion(&conv, lat, 1, 6, &tol()).unwrap();
        assert!(!rep.product_form && rep.residual >= 1e-3 && rep.consistent(), "{}", rep.residual);
    }
}
