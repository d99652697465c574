//! Antisymmetric Fock space over `d ≤ 12` modes, built by Jordan–Wigner.
//!
//! Basis vectors are subsets `S ⊆ {0,…,d−1}` encoded as bitmasks, in
//! increasing integer order; `aᵢ*|S⟩ = (−1)^{#{j<i : j∈S}} |S ∪ {i}⟩`.

use num_complex::Complex64;

use crate::boson::Ladder;
use crate::ccr::{flow_shift, TestFunction};
use crate::linalg::{inner, ComplexMatrix, HermitianOperator};
use crate::{Error, Result};

pub const MAX_MODES: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FermionFockSpace {
    modes: usize,
}

impl FermionFockSpace {
    pub fn new(modes: usize) -> Result<Self> {
        if modes > MAX_MODES {
            return Err(Error::TooManyModes { modes, limit: MAX_MODES });
        }
        Ok(Self { modes })
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn dim(&self) -> usize {
        1 << self.modes
    }

    fn check(&self, f: &[Complex64]) -> Result<()> {
        if f.len() == self.modes {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: self.modes, found: f.len() })
        }
    }

    fn check_square(&self, x: &ComplexMatrix) -> Result<()> {
        if x.rows() == self.dim() && x.cols() == self.dim() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: self.dim(), found: x.rows() })
        }
    }

    /// `a*(f) = Σ fᵢ aᵢ*`, or `a(f) = a*(f)*`, which is antilinear in `f`.
    pub fn ladder(&self, f: &[Complex64], kind: Ladder) -> Result<ComplexMatrix> {
        self.check(f)?;
        let mut m = ComplexMatrix::zeros(self.dim(), self.dim());
        for s in 0..self.dim() {
            for (i, fi) in f.iter().enumerate() {
                if s & (1 << i) != 0 || *fi == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let sign = if (s & ((1 << i) - 1)).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
                m[(s | (1 << i), s)] += fi * sign;
            }
        }
        Ok(match kind {
            Ladder::Create => m,
            Ladder::Annihilate => m.adjoint(),
        })
    }

    /// `u(f) = (a(f) + a*(f))/√2` for real `f`.
    pub fn clifford_generator(&self, f: &[Complex64]) -> Result<ComplexMatrix> {
        if f.iter().any(|z| z.im != 0.0) {
            return Err(Error::NotReal);
        }
        let create = self.ladder(f, Ladder::Create)?;
        Ok((&create + &create.adjoint()).scale_real(std::f64::consts::FRAC_1_SQRT_2))
    }

    /// `u(f₁)⋯u(f_k)`; the empty word is the identity.
    pub fn clifford_word(&self, fs: &[Vec<Complex64>]) -> Result<ComplexMatrix> {
        fs.iter().try_fold(ComplexMatrix::identity(self.dim()), |acc, f| Ok(acc.matmul(&self.clifford_generator(f)?)))
    }

    /// `a(xₙ)⋯a(x₁) a*(y₁)⋯a*(y_m)`.
    pub fn car_word(&self, xs: &[Vec<Complex64>], ys: &[Vec<Complex64>]) -> Result<ComplexMatrix> {
        let mut w = ComplexMatrix::identity(self.dim());
        for x in xs.iter().rev() {
            w = w.matmul(&self.ladder(x, Ladder::Annihilate)?);
        }
        for y in ys {
            w = w.matmul(&self.ladder(y, Ladder::Create)?);
        }
        Ok(w)
    }

    /// `Γ(−1) = diag((−1)^{|S|})`.
    pub fn parity(&self) -> ComplexMatrix {
        let d: Vec<f64> = (0..self.dim()).map(|s: usize| if s.count_ones().is_multiple_of(2) { 1.0 } else { -1.0 }).collect();
        ComplexMatrix::from_real_diag(&d)
    }

    /// `(X_even, X_odd)` with `X_even ± X_odd` equal to `X` and `Γ(−1)XΓ(−1)`.
    pub fn parity_grade(&self, x: &ComplexMatrix) -> Result<(ComplexMatrix, ComplexMatrix)> {
        self.check_square(x)?;
        // conjugating by the diagonal parity flips the sign of entries joining opposite parities
        let mut even = x.clone();
        let mut odd = x.clone();
        for r in 0..self.dim() {
            for c in 0..self.dim() {
                if (r.count_ones() + c.count_ones()) % 2 == 0 {
                    odd[(r, c)] = Complex64::new(0.0, 0.0);
                } else {
                    even[(r, c)] = Complex64::new(0.0, 0.0);
                }
            }
        }
        Ok((even, odd))
    }

    /// `⟨Ω, XΩ⟩`.
    pub fn vacuum_expectation(&self, x: &ComplexMatrix) -> Result<Complex64> {
        self.check_square(x)?;
        Ok(x[(0, 0)])
    }

    pub fn normalized_trace(&self, x: &ComplexMatrix) -> Result<Complex64> {
        self.check_square(x)?;
        Ok(x.trace() / self.dim() as f64)
    }
}

/// Positive contraction `0 ≤ A ≤ 1` on the modes.
#[derive(Debug, Clone)]
pub struct CARSymbol {
    a: HermitianOperator,
}

impl CARSymbol {
    pub fn new(a: HermitianOperator) -> Result<Self> {
        let ev = a.eigenvalues()?;
        if let Some(&bad) = ev.iter().find(|&&e| !(-1e-10..=1.0 + 1e-10).contains(&e)) {
            return Err(Error::SymbolNotAdmissible(format!("eigenvalue {bad} outside [0, 1]")));
        }
        Ok(Self { a })
    }

    pub fn operator(&self) -> &HermitianOperator {
        &self.a
    }

    pub fn modes(&self) -> usize {
        self.a.dim()
    }
}

/// `ω_A(a(xₙ)⋯a(x₁) a*(y₁)⋯a*(y_m)) = δ_{nm} det⟨xᵢ, A yⱼ⟩`.
pub fn quasifree_car_eval(symbol: &CARSymbol, xs: &[Vec<Complex64>], ys: &[Vec<Complex64>]) -> Result<Complex64> {
    let d = symbol.modes();
    if let Some(bad) = xs.iter().chain(ys).find(|v| v.len() != d) {
        return Err(Error::DimensionMismatch { expected: d, found: bad.len() });
    }
    if xs.len() != ys.len() {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let ay: Vec<Vec<Complex64>> = ys.iter().map(|y| symbol.a.matrix().mul_vec(y)).collect();
    let g = ComplexMatrix::from_fn(xs.len(), xs.len(), |i, j| inner(&xs[i], &ay[j]));
    g.determinant()
}

/// Density matrix of the gauge-invariant product state with `P(nᵢ = 1) = 1 − νᵢ`.
fn product_state(nu: &[f64]) -> Vec<f64> {
    (0..1usize << nu.len())
        .map(|s| nu.iter().enumerate().map(|(i, v)| if s & (1 << i) != 0 { 1.0 - v } else { *v }).product())
        .collect()
}

/// `tr(ρ_A · word)` for diagonal `A`.
pub fn quasifree_car_oracle(symbol: &CARSymbol, word: &ComplexMatrix) -> Result<Complex64> {
    let m = symbol.a.matrix();
    let d = m.rows();
    let off = (0..d).flat_map(|i| (0..d).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| m[(i, j)].norm());
    if off.fold(0.0, f64::max) > 1e-12 {
        return Err(Error::NotDiagonal);
    }
    let rho = product_state(&m.diagonal().iter().map(|z| z.re).collect::<Vec<_>>());
    if word.rows() != rho.len() || word.cols() != rho.len() {
        return Err(Error::DimensionMismatch { expected: rho.len(), found: word.rows() });
    }
    Ok(rho.iter().enumerate().map(|(s, p)| word[(s, s)] * p).sum())
}

/// Oracle for arbitrary `A = V diag(ν) V*`: with `ξ ↦ V*ξ` the word becomes one
/// in the eigenmodes, where the state is the diagonal product state.
pub fn quasifree_car_oracle_general(
    symbol: &CARSymbol,
    xs: &[Vec<Complex64>],
    ys: &[Vec<Complex64>],
) -> Result<Complex64> {
    let spec = symbol.a.spectral()?;
    let vstar = spec.eigenvectors.adjoint();
    let rotate = |v: &Vec<Complex64>| {
        if v.len() == symbol.modes() {
            Ok(vstar.mul_vec(v))
        } else {
            Err(Error::DimensionMismatch { expected: symbol.modes(), found: v.len() })
        }
    };
    let rx = xs.iter().map(rotate).collect::<Result<Vec<_>>>()?;
    let ry = ys.iter().map(rotate).collect::<Result<Vec<_>>>()?;
    let space = FermionFockSpace::new(symbol.modes())?;
    let diag = CARSymbol { a: HermitianOperator::from_real_diag(&spec.eigenvalues) };
    quasifree_car_oracle(&diag, &space.car_word(&rx, &ry)?)
}

/// Shifts every argument of a Clifford word by `t` lattice cells.
pub fn clifford_flow_step(generators: &[TestFunction], t: usize) -> Result<Vec<TestFunction>> {
    generators
        .iter()
        .map(|f| {
            if !f.is_real() {
                return Err(Error::NotReal);
            }
            let cells = f.lattice().cells;
            if f.support_end() + t > cells {
                return Err(Error::SupportViolation(format!(
                    "support ends at cell {} but must lie in [0, {})",
                    f.support_end(),
                    cells.saturating_sub(t)
                )));
            }
            Ok(flow_shift(f, t).function)
        })
        .collect()
}
