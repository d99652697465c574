//! Symmetric Fock space truncated at total particle number `N`.
//!
//! Basis vectors are occupation tuples `(n₁,…,n_d)` with `Σnᵢ ≤ N`, listed by
//! total particle number and lexicographically inside each level. Creation
//! leaks across the cutoff, so approximate identities are checked on the
//! sub-cutoff sector returned by [`BosonFockSpace::sector`].

use std::collections::HashMap;

use num_complex::Complex64;

use crate::linalg::{inner, matrix_exp, norm, vec_conj, ComplexMatrix};
use crate::{Error, Result};

/// Largest basis the space will enumerate.
pub const MAX_BASIS: usize = 6000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ladder {
    Create,
    Annihilate,
}

#[derive(Debug, Clone)]
pub struct BosonFockSpace {
    modes: usize,
    cutoff: usize,
    basis: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
    // raise[j][i]: basis index of n + eᵢ when it stays below the cutoff
    raise: Vec<Vec<Option<usize>>>,
}

fn binomial(n: usize, k: usize) -> usize {
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

fn occupations(modes: usize, total: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if prefix.len() + 1 == modes {
        prefix.push(total);
        out.push(prefix.clone());
        prefix.pop();
        return;
    }
    for first in (0..=total).rev() {
        prefix.push(first);
        occupations(modes, total - first, prefix, out);
        prefix.pop();
    }
}

impl BosonFockSpace {
    pub fn new(modes: usize, cutoff: usize) -> Result<Self> {
        if modes == 0 {
            return Err(Error::DimensionMismatch { expected: 1, found: 0 });
        }
        let size = binomial(cutoff + modes, modes);
        if size > MAX_BASIS {
            return Err(Error::TooManyModes { modes, limit: MAX_BASIS });
        }
        let mut basis = Vec::with_capacity(size);
        for total in 0..=cutoff as u32 {
            occupations(modes, total, &mut Vec::with_capacity(modes), &mut basis);
        }
        let index: HashMap<Vec<u32>, usize> = basis.iter().cloned().enumerate().map(|(i, n)| (n, i)).collect();
        let raise = basis
            .iter()
            .map(|n| {
                (0..modes)
                    .map(|i| {
                        let mut m = n.clone();
                        m[i] += 1;
                        index.get(&m).copied()
                    })
                    .collect()
            })
            .collect();
        Ok(Self { modes, cutoff, basis, index, raise })
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<u32>] {
        &self.basis
    }

    pub fn index_of(&self, occupation: &[u32]) -> Option<usize> {
        self.index.get(occupation).copied()
    }

    /// Basis indices with total particle number at most `max_total`.
    pub fn sector(&self, max_total: usize) -> Vec<usize> {
        let end = self.basis.iter().position(|n| n.iter().sum::<u32>() as usize > max_total).unwrap_or(self.dim());
        (0..end).collect()
    }

    /// Level `N − ⌈‖u‖² + ‖v‖²⌉ − 2` on which comparisons involving `u` and `v` are honest.
    pub fn sub_cutoff_level(&self, norm_u: f64, norm_v: f64) -> usize {
        let spill = (norm_u * norm_u + norm_v * norm_v).ceil() as usize + 2;
        self.cutoff.saturating_sub(spill)
    }

    /// Remainder `e^{ab} (ab)^{N+1}/(N+1)!` of the series `Σ⟨u,v⟩ᵏ/k!` with `a = ‖u‖`, `b = ‖v‖`.
    pub fn tail_bound(&self, norm_u: f64, norm_v: f64) -> f64 {
        let x = norm_u * norm_v;
        let log_term = (self.cutoff as f64 + 1.0) * x.ln() - ln_factorial(self.cutoff + 1) + x;
        if x == 0.0 {
            0.0
        } else {
            log_term.exp()
        }
    }

    pub fn vacuum(&self) -> FockVector {
        let mut c = vec![Complex64::new(0.0, 0.0); self.dim()];
        c[0] = Complex64::new(1.0, 0.0);
        FockVector { modes: self.modes, cutoff: self.cutoff, coefficients: c }
    }

    fn check_modes(&self, u: &[Complex64]) -> Result<()> {
        if u.len() == self.modes {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: self.modes, found: u.len() })
        }
    }

    fn check_vector(&self, v: &FockVector) -> Result<()> {
        if v.modes == self.modes && v.cutoff == self.cutoff {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: self.dim(), found: v.coefficients.len() })
        }
    }

    /// Truncated exponential vector with coefficients `Π uᵢ^{nᵢ} / √(Π nᵢ!)`.
    pub fn exp_vector(&self, u: &[Complex64]) -> Result<FockVector> {
        self.check_modes(u)?;
        let mut c = vec![Complex64::new(0.0, 0.0); self.dim()];
        c[0] = Complex64::new(1.0, 0.0);
        for k in 1..self.dim() {
            let (j, i) = self.first_raise(k);
            c[k] = c[j] * u[i] / (self.basis[k][i] as f64).sqrt();
        }
        Ok(FockVector { modes: self.modes, cutoff: self.cutoff, coefficients: c })
    }

    /// Canonical predecessor of basis vector `k`: lower its first occupied mode.
    fn first_raise(&self, k: usize) -> (usize, usize) {
        let n = &self.basis[k];
        let i = n.iter().position(|&x| x > 0).expect("non-vacuum");
        let mut m = n.clone();
        m[i] -= 1;
        (self.index[&m], i)
    }

    /// `a*(u)ψ` without assembling a matrix; the component above the cutoff is dropped.
    pub fn apply_create(&self, u: &[Complex64], psi: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.dim()];
        for (j, &c) in psi.iter().enumerate() {
            if c == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (i, &ui) in u.iter().enumerate() {
                if let Some(k) = self.raise[j][i] {
                    out[k] += ui * c * ((self.basis[j][i] + 1) as f64).sqrt();
                }
            }
        }
        out
    }

    /// `a*(u) = Σ uᵢ aᵢ*` or `a(u) = Σ ūᵢ aᵢ = a*(u)*` on the truncated basis.
    pub fn ladder(&self, u: &[Complex64], kind: Ladder) -> Result<ComplexMatrix> {
        self.check_modes(u)?;
        let mut m = ComplexMatrix::zeros(self.dim(), self.dim());
        for j in 0..self.dim() {
            for (i, &ui) in u.iter().enumerate() {
                if let Some(k) = self.raise[j][i] {
                    m[(k, j)] += ui * ((self.basis[j][i] + 1) as f64).sqrt();
                }
            }
        }
        Ok(match kind {
            Ladder::Create => m,
            Ladder::Annihilate => m.adjoint(),
        })
    }

    /// `exp(a*(u) − a(u))`, refused when the truncation bound exceeds `tolerance`.
    pub fn weyl_matrix(&self, u: &[Complex64], tolerance: f64) -> Result<WeylMatrix> {
        let create = self.ladder(u, Ladder::Create)?;
        let bound = self.tail_bound(norm(u), norm(u));
        if bound > tolerance {
            return Err(Error::TruncationBudgetExceeded { bound, tolerance });
        }
        let generator = &create - &create.adjoint();
        Ok(WeylMatrix { matrix: matrix_exp(&generator)?, truncation_bound: bound })
    }

    /// `Γ(U) = ⊕ U^{⊗n}` for a unitary on the modes; with `antilinear` the
    /// operator is `Γ(U)∘conj`, the second quantisation of `U∘conj`.
    pub fn second_quantize(&self, u: &ComplexMatrix, antilinear: bool) -> Result<SecondQuantized> {
        if u.rows() != self.modes || u.cols() != self.modes {
            return Err(Error::DimensionMismatch { expected: self.modes, found: u.rows() });
        }
        let deviation = u.unitarity_defect();
        if deviation > 1e-10 {
            return Err(Error::NotUnitary { deviation });
        }
        let dim = self.dim();
        let images: Vec<Vec<Complex64>> = (0..self.modes).map(|i| u.column(i)).collect();
        let mut columns: Vec<Vec<Complex64>> = Vec::with_capacity(dim);
        let mut vac = vec![Complex64::new(0.0, 0.0); dim];
        vac[0] = Complex64::new(1.0, 0.0);
        columns.push(vac);
        // Γ(U)|n⟩ = a*(Ueᵢ) Γ(U)|n − eᵢ⟩ / √nᵢ
        for k in 1..dim {
            let (j, i) = self.first_raise(k);
            let n = self.basis[k][i] as f64;
            let col = self.apply_create(&images[i], &columns[j]);
            columns.push(col.into_iter().map(|z| z / n.sqrt()).collect());
        }
        Ok(SecondQuantized { matrix: ComplexMatrix::from_columns(&columns), antilinear })
    }

    /// Restriction of a matrix to the rows and columns in `sector`.
    pub fn restrict(&self, m: &ComplexMatrix, sector: &[usize]) -> ComplexMatrix {
        ComplexMatrix::from_fn(sector.len(), sector.len(), |a, b| m[(sector[a], sector[b])])
    }
}

fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// Coefficients over the occupation basis of a [`BosonFockSpace`].
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    modes: usize,
    cutoff: usize,
    coefficients: Vec<Complex64>,
}

impl FockVector {
    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn inner(&self, other: &Self) -> Complex64 {
        inner(&self.coefficients, &other.coefficients)
    }

    pub fn norm(&self) -> f64 {
        norm(&self.coefficients)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self { coefficients: self.coefficients.iter().map(|z| z * s).collect(), ..self.clone() }
    }

    pub fn map_matrix(&self, m: &ComplexMatrix) -> Self {
        Self { coefficients: m.mul_vec(&self.coefficients), ..self.clone() }
    }

    /// Euclidean distance over the given basis indices.
    pub fn distance_on(&self, other: &Self, sector: &[usize]) -> f64 {
        sector
            .iter()
            .map(|&i| (self.coefficients[i] - other.coefficients[i]).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

#[derive(Debug, Clone)]
pub struct WeylMatrix {
    pub matrix: ComplexMatrix,
    pub truncation_bound: f64,
}

/// Matrix of `Γ(U)` together with the antilinearity flag.
#[derive(Debug, Clone)]
pub struct SecondQuantized {
    pub matrix: ComplexMatrix,
    pub antilinear: bool,
}

impl SecondQuantized {
    pub fn apply(&self, space: &BosonFockSpace, v: &FockVector) -> Result<FockVector> {
        space.check_vector(v)?;
        let input = if self.antilinear { vec_conj(&v.coefficients) } else { v.coefficients.clone() };
        Ok(FockVector { coefficients: self.matrix.mul_vec(&input), ..v.clone() })
    }
}
