//! Exact calculus for the CCR algebra over a lattice test-function space.
//!
//! The half-line `L²(ℝ₊; k)` is modelled by `M` unit cells, each carrying an
//! `n`-dimensional one-cell space; a test function is a step function stored
//! cell-major. Weyl generators `w_f` multiply as
//! `w_u w_v = e^{−i Im⟨u,v⟩} w_{u+v}`, so every word reduces to a phase times a
//! single generator and all identities below hold without truncation.

use std::ops::{Add, Neg};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::linalg::{inner, norm, ComplexMatrix, HermitianOperator};
use crate::{Error, Result, ToleranceConfig};

/// Cell count `M` and one-cell multiplicity `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Lattice {
    pub cells: usize,
    pub multiplicity: usize,
}

impl Lattice {
    pub fn new(cells: usize, multiplicity: usize) -> Self {
        Self { cells, multiplicity }
    }

    pub fn dim(&self) -> usize {
        self.cells * self.multiplicity
    }
}

/// Step function on `[0, M)` with values in the one-cell space.
#[derive(Debug, Clone, PartialEq)]
pub struct TestFunction {
    lattice: Lattice,
    coefficients: Vec<Complex64>,
}

impl TestFunction {
    pub fn new(lattice: Lattice, coefficients: Vec<Complex64>) -> Result<Self> {
        if coefficients.len() != lattice.dim() {
            return Err(Error::DimensionMismatch { expected: lattice.dim(), found: coefficients.len() });
        }
        if coefficients.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidSpec("test function coefficients must be finite".into()));
        }
        Ok(Self { lattice, coefficients })
    }

    pub fn zero(lattice: Lattice) -> Self {
        Self { lattice, coefficients: vec![Complex64::new(0.0, 0.0); lattice.dim()] }
    }

    /// `ξ` placed in a single cell.
    pub fn block(lattice: Lattice, cell: usize, xi: &[Complex64]) -> Result<Self> {
        Self::indicator(lattice, cell, 1, xi)
    }

    /// `1_{(start, start+len)} ⊗ ξ`.
    pub fn indicator(lattice: Lattice, start: usize, len: usize, xi: &[Complex64]) -> Result<Self> {
        if xi.len() != lattice.multiplicity {
            return Err(Error::DimensionMismatch { expected: lattice.multiplicity, found: xi.len() });
        }
        if start + len > lattice.cells {
            return Err(Error::LatticeOverflow { needed: start + len, cells: lattice.cells });
        }
        let mut f = Self::zero(lattice);
        for cell in start..start + len {
            f.cell_mut(cell).copy_from_slice(xi);
        }
        Ok(f)
    }

    pub fn lattice(&self) -> Lattice {
        self.lattice
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn cell(&self, i: usize) -> &[Complex64] {
        let n = self.lattice.multiplicity;
        &self.coefficients[i * n..(i + 1) * n]
    }

    fn cell_mut(&mut self, i: usize) -> &mut [Complex64] {
        let n = self.lattice.multiplicity;
        &mut self.coefficients[i * n..(i + 1) * n]
    }

    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        self.same_lattice(other)?;
        Ok(inner(&self.coefficients, &other.coefficients))
    }

    pub fn norm(&self) -> f64 {
        norm(&self.coefficients)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self { lattice: self.lattice, coefficients: self.coefficients.iter().map(|z| z * s).collect() }
    }

    /// Index one past the last cell with non-zero mass (0 for the zero function).
    pub fn support_end(&self) -> usize {
        (0..self.lattice.cells)
            .rev()
            .find(|&c| self.cell(c).iter().any(|z| *z != Complex64::new(0.0, 0.0)))
            .map_or(0, |c| c + 1)
    }

    /// First cell with non-zero mass (`M` for the zero function).
    pub fn support_start(&self) -> usize {
        (0..self.lattice.cells)
            .find(|&c| self.cell(c).iter().any(|z| *z != Complex64::new(0.0, 0.0)))
            .unwrap_or(self.lattice.cells)
    }

    pub fn is_real(&self) -> bool {
        self.coefficients.iter().all(|z| z.im == 0.0)
    }

    fn same_lattice(&self, other: &Self) -> Result<()> {
        if self.lattice == other.lattice {
            Ok(())
        } else {
            Err(Error::LatticeMismatch)
        }
    }

    fn try_add(&self, other: &Self) -> Result<Self> {
        self.same_lattice(other)?;
        Ok(Self {
            lattice: self.lattice,
            coefficients: self.coefficients.iter().zip(&other.coefficients).map(|(a, b)| a + b).collect(),
        })
    }
}

impl Add for &TestFunction {
    type Output = TestFunction;

    /// Panics on lattice mismatch; use [`weyl_product`] for the fallible form.
    fn add(self, rhs: &TestFunction) -> TestFunction {
        self.try_add(rhs).expect("test functions on different lattices")
    }
}

impl Neg for &TestFunction {
    type Output = TestFunction;
    fn neg(self) -> TestFunction {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

/// `phase · w_f`, the normal form of a Weyl word.
///
/// The phase is unimodular for products of generators; a word with a
/// non-unimodular scalar carries that scalar here as well.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedWeyl {
    pub phase: Complex64,
    pub vector: TestFunction,
}

impl ReducedWeyl {
    pub fn generator(f: TestFunction) -> Self {
        Self { phase: Complex64::new(1.0, 0.0), vector: f }
    }

    pub fn identity(lattice: Lattice) -> Self {
        Self::generator(TestFunction::zero(lattice))
    }

    /// `(θ w_f)(θ' w_g) = θθ' e^{−i Im⟨f,g⟩} w_{f+g}`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        let im = self.vector.inner(&other.vector)?.im;
        Ok(Self {
            phase: self.phase * other.phase * Complex64::from_polar(1.0, -im),
            vector: self.vector.try_add(&other.vector)?,
        })
    }

    /// `(θ w_f)* = θ̄ w_{−f}`.
    pub fn adjoint(&self) -> Self {
        Self { phase: self.phase.conj(), vector: -&self.vector }
    }

    /// Phase difference plus vector distance; zero iff the normal forms coincide.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        self.vector.same_lattice(&other.vector)?;
        let dv = norm(&crate::linalg::vec_sub(self.vector.coefficients(), other.vector.coefficients()));
        Ok((self.phase - other.phase).norm() + dv)
    }
}

/// Finite product `scalar · w_{f₁} ⋯ w_{f_k}`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeylWord {
    lattice: Lattice,
    pub scalar: Complex64,
    letters: Vec<TestFunction>,
}

impl WeylWord {
    pub fn new(lattice: Lattice, scalar: Complex64, letters: Vec<TestFunction>) -> Result<Self> {
        if letters.iter().any(|f| f.lattice != lattice) {
            return Err(Error::LatticeMismatch);
        }
        Ok(Self { lattice, scalar, letters })
    }

    pub fn letters(&self) -> &[TestFunction] {
        &self.letters
    }

    pub fn lattice(&self) -> Lattice {
        self.lattice
    }
}

/// `w_u w_v` in normal form.
pub fn weyl_product(u: &TestFunction, v: &TestFunction) -> Result<ReducedWeyl> {
    ReducedWeyl::generator(u.clone()).mul(&ReducedWeyl::generator(v.clone()))
}

/// Left fold of the Weyl relation over the word; the empty word is `(scalar, 0)`.
pub fn reduce_word(word: &WeylWord) -> Result<ReducedWeyl> {
    let start = ReducedWeyl { phase: word.scalar, vector: TestFunction::zero(word.lattice) };
    word.letters
        .iter()
        .try_fold(start, |acc, f| acc.mul(&ReducedWeyl::generator(f.clone())))
}

/// Symbol `A ≥ 1` of a quasi-free CCR state on a lattice.
#[derive(Debug, Clone)]
pub struct QuasiFreeSymbol {
    lattice: Lattice,
    a: HermitianOperator,
}

impl QuasiFreeSymbol {
    /// Requires `min σ(A) ≥ 1 − 1e−10`.
    pub fn new(lattice: Lattice, a: HermitianOperator) -> Result<Self> {
        if a.dim() != lattice.dim() {
            return Err(Error::DimensionMismatch { expected: lattice.dim(), found: a.dim() });
        }
        let min = a.min_eigenvalue()?;
        if min < 1.0 - 1e-10 {
            return Err(Error::SymbolNotAdmissible(format!("A ≥ 1 fails: min eigenvalue {min}")));
        }
        Ok(Self { lattice, a })
    }

    /// `I_M ⊗ R` for a one-cell operator `R`.
    pub fn product(cells: usize, r: &HermitianOperator) -> Result<Self> {
        let lattice = Lattice::new(cells, r.dim());
        let a = HermitianOperator::identity(cells).kron(r);
        Self::new(lattice, a)
    }

    pub fn lattice(&self) -> Lattice {
        self.lattice
    }

    pub fn operator(&self) -> &HermitianOperator {
        &self.a
    }
}

/// `φ_A(θ w_f) = θ · e^{−½⟨f, Af⟩}`.
pub fn quasifree_eval(symbol: &QuasiFreeSymbol, x: &ReducedWeyl) -> Result<Complex64> {
    if x.vector.lattice != symbol.lattice {
        return Err(Error::LatticeMismatch);
    }
    let q = symbol.a.quadratic_form(x.vector.coefficients());
    Ok(x.phase * (-0.5 * q).exp())
}

/// Gram matrix `G_ij = φ_A(w_{f_i}* w_{f_j})`, positive semidefinite for any state.
pub fn gram_matrix(symbol: &QuasiFreeSymbol, functions: &[TestFunction]) -> Result<HermitianOperator> {
    let k = functions.len();
    let mut g = ComplexMatrix::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            let word = weyl_product(&-&functions[i], &functions[j])?;
            g[(i, j)] = quasifree_eval(symbol, &word)?;
        }
    }
    HermitianOperator::new(g, &ToleranceConfig::default())
}

/// Result of a lattice shift: mass pushed past the last cell is dropped and flagged.
#[derive(Debug, Clone, PartialEq)]
pub struct Shifted {
    pub function: TestFunction,
    pub overflowed: bool,
}

/// Right shift by `steps` cells, `(T_t f)(s) = f(s − t)` on the lattice.
pub fn flow_shift(f: &TestFunction, steps: usize) -> Shifted {
    let lat = f.lattice;
    let mut out = TestFunction::zero(lat);
    let mut overflowed = false;
    for cell in 0..lat.cells {
        let target = cell + steps;
        let block = f.cell(cell);
        if target < lat.cells {
            out.cell_mut(target).copy_from_slice(block);
        } else if block.iter().any(|z| *z != Complex64::new(0.0, 0.0)) {
            overflowed = true;
        }
    }
    Shifted { function: out, overflowed }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CocycleReport {
    pub holds: bool,
    pub phase_residual: f64,
    pub vector_residual: f64,
    pub residual: f64,
}

impl CocycleReport {
    fn compare(lhs: &ReducedWeyl, rhs: &ReducedWeyl) -> Self {
        let phase_residual = (lhs.phase - rhs.phase).norm();
        let vector_residual =
            norm(&crate::linalg::vec_sub(lhs.vector.coefficients(), rhs.vector.coefficients()));
        let residual = phase_residual + vector_residual;
        Self { holds: residual <= 1e-12, phase_residual, vector_residual, residual }
    }
}

fn gauge_unit(lattice: Lattice, lambda: f64, xi: &[Complex64], t: usize) -> Result<ReducedWeyl> {
    Ok(ReducedWeyl {
        phase: Complex64::from_polar(1.0, lambda * t as f64),
        vector: TestFunction::indicator(lattice, 0, t, xi)?,
    })
}

/// Checks `U_s α_s(U_t) = U_{s+t}` for the gauge cocycle `U_t = e^{iλt} w(1_{(0,t)} ⊗ ξ)`.
pub fn gauge_cocycle_check(
    lattice: Lattice,
    lambda: f64,
    xi: &[Complex64],
    s: usize,
    t: usize,
) -> Result<CocycleReport> {
    if s + t > lattice.cells {
        return Err(Error::LatticeOverflow { needed: s + t, cells: lattice.cells });
    }
    let us = gauge_unit(lattice, lambda, xi, s)?;
    let ut = gauge_unit(lattice, lambda, xi, t)?;
    let shifted = ReducedWeyl { phase: ut.phase, vector: flow_shift(&ut.vector, s).function };
    let lhs = us.mul(&shifted)?;
    let rhs = gauge_unit(lattice, lambda, xi, s + t)?;
    Ok(CocycleReport::compare(&lhs, &rhs))
}

/// Negative control for [`gauge_cocycle_check`]: the second factor is not shifted,
/// so the supports overlap and the identity must fail.
pub fn gauge_cocycle_unshifted_control(
    lattice: Lattice,
    lambda: f64,
    xi: &[Complex64],
    s: usize,
    t: usize,
) -> Result<CocycleReport> {
    if s + t > lattice.cells {
        return Err(Error::LatticeOverflow { needed: s + t, cells: lattice.cells });
    }
    let lhs = gauge_unit(lattice, lambda, xi, s)?.mul(&gauge_unit(lattice, lambda, xi, t)?)?;
    let rhs = gauge_unit(lattice, lambda, xi, s + t)?;
    Ok(CocycleReport::compare(&lhs, &rhs))
}

#[derive(Debug, Clone, PartialEq)]
pub struct InvarianceReport {
    pub shifted: Complex64,
    pub original: Complex64,
    pub residual: f64,
    pub invariant: bool,
}

/// Compares `φ_A(w_{T_t f})` with `φ_A(w_f)`; equal for every interior `f` iff `A` is block-Toeplitz.
pub fn state_invariance_check(symbol: &QuasiFreeSymbol, f: &TestFunction, t: usize) -> Result<InvarianceReport> {
    let cells = symbol.lattice.cells;
    if f.support_end() + t > cells {
        return Err(Error::SupportViolation(format!(
            "support ends at cell {} but must lie in [0, {})",
            f.support_end(),
            cells.saturating_sub(t)
        )));
    }
    let shifted = quasifree_eval(symbol, &ReducedWeyl::generator(flow_shift(f, t).function))?;
    let original = quasifree_eval(symbol, &ReducedWeyl::generator(f.clone()))?;
    let residual = (shifted - original).norm();
    Ok(InvarianceReport { shifted, original, residual, invariant: residual <= 1e-10 })
}
