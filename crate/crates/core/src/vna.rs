//! Finite-dimensional *-algebras: commutants, lattice operations, centers,
//! relative commutants and the tensor distributivity identity.
//!
//! Matrices are identified with vectors through the row-major layout, under
//! which the Hilbert–Schmidt inner product `tr(A*B)` is the Euclidean one.

use num_complex::Complex64;
use serde::Serialize;

use crate::linalg::{inner, ComplexMatrix, HermitianOperator};
use crate::{Error, Result};

/// Relative eigenvalue floor for null spaces of the commutator Gram operator.
const NULL_TOL: f64 = 1e-10;
/// Residual below which a candidate is considered already in a span.
const SPAN_TOL: f64 = 1e-8;
/// Span-equality and membership tolerance.
pub const EQUALITY_TOL: f64 = 1e-9;

/// Unital *-subalgebra of `M_d`, stored as a Hilbert–Schmidt orthonormal basis.
#[derive(Debug, Clone)]
pub struct MatrixAlgebra {
    ambient_dim: usize,
    basis: Vec<ComplexMatrix>,
    contains_identity: bool,
}

/// Incremental Gram–Schmidt over matrices.
struct Span {
    d: usize,
    basis: Vec<ComplexMatrix>,
}

impl Span {
    fn new(d: usize) -> Self {
        Self { d, basis: Vec::new() }
    }

    fn residual_of(&self, x: &ComplexMatrix) -> ComplexMatrix {
        let mut r = x.clone();
        for _ in 0..2 {
            for b in &self.basis {
                let c = inner(b.as_slice(), r.as_slice());
                r = &r - &b.scale(c);
            }
        }
        r
    }

    fn push(&mut self, x: &ComplexMatrix) -> bool {
        let scale = x.norm_fro();
        if scale == 0.0 || self.basis.len() == self.d * self.d {
            return false;
        }
        let r = self.residual_of(x);
        let n = r.norm_fro();
        if n <= SPAN_TOL * scale.max(1.0) {
            return false;
        }
        self.basis.push(r.scale_real(1.0 / n));
        true
    }
}

impl MatrixAlgebra {
    fn from_orthonormal(d: usize, basis: Vec<ComplexMatrix>) -> Self {
        let mut alg = Self { ambient_dim: d, basis, contains_identity: false };
        alg.contains_identity = alg.residual(&ComplexMatrix::identity(d)) <= EQUALITY_TOL;
        alg
    }

    pub fn scalars(d: usize) -> Self {
        Self::from_orthonormal(d, vec![ComplexMatrix::identity(d).scale_real(1.0 / (d as f64).sqrt())])
    }

    pub fn full(d: usize) -> Self {
        Self::from_orthonormal(d, (0..d * d).map(|k| unit(d, k / d, k % d)).collect())
    }

    pub fn diagonal(d: usize) -> Self {
        Self::from_orthonormal(d, (0..d).map(|k| unit(d, k, k)).collect())
    }

    /// The unital *-algebra generated by `gens`, i.e. its bicommutant.
    pub fn generated(gens: &[ComplexMatrix], d: usize) -> Result<Self> {
        bicommutant(gens, d)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[ComplexMatrix] {
        &self.basis
    }

    pub fn contains_identity(&self) -> bool {
        self.contains_identity
    }

    /// Orthogonal projection onto the span.
    pub fn project(&self, x: &ComplexMatrix) -> ComplexMatrix {
        let mut p = ComplexMatrix::zeros(self.ambient_dim, self.ambient_dim);
        for b in &self.basis {
            p = &p + &b.scale(inner(b.as_slice(), x.as_slice()));
        }
        p
    }

    /// `‖x − P x‖_HS`.
    pub fn residual(&self, x: &ComplexMatrix) -> f64 {
        (x - &self.project(x)).norm_fro()
    }

    pub fn contains(&self, x: &ComplexMatrix) -> bool {
        self.residual(x) <= EQUALITY_TOL * x.norm_fro().max(1.0)
    }

    /// Largest distance from the span of adjoints and pairwise products of basis elements.
    pub fn closure_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for a in &self.basis {
            worst = worst.max(self.residual(&a.adjoint()));
            for b in &self.basis {
                worst = worst.max(self.residual(&a.matmul(b)));
            }
        }
        worst
    }

    /// `‖⟨bᵢ, bⱼ⟩ − δᵢⱼ‖_max`.
    pub fn orthonormality_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, a) in self.basis.iter().enumerate() {
            for (j, b) in self.basis.iter().enumerate() {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((inner(a.as_slice(), b.as_slice()) - target).norm());
            }
        }
        worst
    }

    /// `self ⊗ other` acting on the Kronecker product space.
    pub fn tensor(&self, other: &Self) -> Self {
        let basis = self.basis.iter().flat_map(|a| other.basis.iter().map(move |b| a.kron(b))).collect();
        Self::from_orthonormal(self.ambient_dim * other.ambient_dim, basis)
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.ambient_dim == other.ambient_dim && self.basis.iter().all(|b| other.residual(b) <= EQUALITY_TOL)
    }
}

fn unit(d: usize, i: usize, j: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(d, d);
    m[(i, j)] = Complex64::new(1.0, 0.0);
    m
}

fn require_ambient(gens: &[ComplexMatrix], d: usize) -> Result<()> {
    for g in gens {
        if g.rows() != d || g.cols() != d {
            return Err(Error::DimensionMismatch { expected: d, found: g.rows().max(g.cols()) });
        }
    }
    Ok(())
}

fn require_same(m: &MatrixAlgebra, n: &MatrixAlgebra) -> Result<()> {
    if m.ambient_dim != n.ambient_dim {
        return Err(Error::DimensionMismatch { expected: m.ambient_dim, found: n.ambient_dim });
    }
    Ok(())
}

/// Mutual projection residual: the larger of `max ‖b − P_N b‖` over `b ∈ M` and vice versa.
pub fn span_distance(m: &MatrixAlgebra, n: &MatrixAlgebra) -> Result<f64> {
    require_same(m, n)?;
    let one = m.basis.iter().map(|b| n.residual(b));
    let two = n.basis.iter().map(|b| m.residual(b));
    Ok(one.chain(two).fold(0.0, f64::max))
}

pub fn span_equal(m: &MatrixAlgebra, n: &MatrixAlgebra) -> Result<bool> {
    Ok(span_distance(m, n)? <= EQUALITY_TOL)
}

/// All `X` with `[g, X] = 0` for every generator and its adjoint.
///
/// Solved as the null space of `Σ L_g* L_g` with `L_g = g ⊗ 1 − 1 ⊗ gᵀ`.
pub fn commutant(gens: &[ComplexMatrix], d: usize) -> Result<MatrixAlgebra> {
    require_ambient(gens, d)?;
    let id = ComplexMatrix::identity(d);
    let mut gram = ComplexMatrix::zeros(d * d, d * d);
    let mut scale: f64 = 1.0;
    for g in gens.iter().flat_map(|g| [g.clone(), g.adjoint()]) {
        let gs = g.adjoint();
        let gbar = g.conj();
        gram = &gram + &gs.matmul(&g).kron(&id);
        gram = &gram + &id.kron(&gbar.matmul(&g.transpose()));
        gram = &gram - &gs.kron(&g.transpose());
        gram = &gram - &g.kron(&gbar);
        scale = scale.max(g.norm_fro().powi(2));
    }
    let h = HermitianOperator::from_spectral_unchecked((&gram + &gram.adjoint()).scale_real(0.5));
    let spec = h.spectral()?;
    let basis = spec
        .eigenvalues
        .iter()
        .enumerate()
        .take_while(|(_, &l)| l <= NULL_TOL * scale)
        .map(|(k, _)| ComplexMatrix::from_vec(d, d, spec.eigenvectors.column(k)))
        .collect::<Result<Vec<_>>>()?;
    Ok(MatrixAlgebra::from_orthonormal(d, basis))
}

pub fn commutant_of(m: &MatrixAlgebra) -> MatrixAlgebra {
    commutant(&m.basis, m.ambient_dim).expect("basis elements share the ambient dimension")
}

pub fn bicommutant(gens: &[ComplexMatrix], d: usize) -> Result<MatrixAlgebra> {
    let first = commutant(gens, d)?;
    commutant(&first.basis, d)
}

/// Span of all words in `gens ∪ gens* ∪ {1}`, grown one letter at a time
/// until the dimension stops changing or `2d²` rounds have passed.
pub fn word_closure(gens: &[ComplexMatrix], d: usize) -> Result<MatrixAlgebra> {
    require_ambient(gens, d)?;
    let letters: Vec<ComplexMatrix> = gens.iter().flat_map(|g| [g.clone(), g.adjoint()]).collect();
    let mut span = Span::new(d);
    span.push(&ComplexMatrix::identity(d));
    for g in &letters {
        span.push(g);
    }
    for _ in 0..2 * d * d {
        let current = span.basis.clone();
        let mut grew = false;
        for w in &current {
            for g in &letters {
                grew |= span.push(&g.matmul(w));
            }
        }
        if !grew {
            break;
        }
    }
    Ok(MatrixAlgebra::from_orthonormal(d, span.basis))
}

/// `M ∨ N`, the bicommutant of the union of the bases.
pub fn join(m: &MatrixAlgebra, n: &MatrixAlgebra) -> Result<MatrixAlgebra> {
    require_same(m, n)?;
    let gens: Vec<ComplexMatrix> = m.basis.iter().chain(&n.basis).cloned().collect();
    bicommutant(&gens, m.ambient_dim)
}

/// `M ∩ N` as the null space of `⟨mᵢ, (1 − P_N) mⱼ⟩` in the coordinates of `M`.
pub fn meet(m: &MatrixAlgebra, n: &MatrixAlgebra) -> Result<MatrixAlgebra> {
    require_same(m, n)?;
    let k = m.dim();
    let overlaps: Vec<Vec<Complex64>> =
        m.basis.iter().map(|a| n.basis.iter().map(|b| inner(b.as_slice(), a.as_slice())).collect()).collect();
    let h = ComplexMatrix::from_fn(k, k, |i, j| {
        let proj: Complex64 = overlaps[i].iter().zip(&overlaps[j]).map(|(x, y)| x.conj() * y).sum();
        let delta = if i == j { 1.0 } else { 0.0 };
        Complex64::new(delta, 0.0) - proj
    });
    let h = HermitianOperator::from_spectral_unchecked((&h + &h.adjoint()).scale_real(0.5));
    let spec = h.spectral()?;
    let d = m.ambient_dim;
    let basis = spec
        .eigenvalues
        .iter()
        .enumerate()
        .take_while(|(_, &l)| l <= NULL_TOL)
        .map(|(c, _)| {
            m.basis.iter().enumerate().fold(ComplexMatrix::zeros(d, d), |acc, (i, b)| &acc + &b.scale(spec.eigenvectors[(i, c)]))
        })
        .collect();
    Ok(MatrixAlgebra::from_orthonormal(d, basis))
}

#[derive(Debug, Clone)]
pub struct CenterReport {
    pub center: MatrixAlgebra,
    pub is_factor: bool,
}

pub fn center_and_factor(m: &MatrixAlgebra) -> CenterReport {
    let center = meet(m, &commutant_of(m)).expect("an algebra and its commutant share the ambient dimension");
    let is_factor = center.dim() == 1;
    CenterReport { center, is_factor }
}

/// `N′ ∩ M` for generators of `N` lying in `M`.
pub fn relative_commutant(n_gens: &[ComplexMatrix], m: &MatrixAlgebra) -> Result<MatrixAlgebra> {
    require_ambient(n_gens, m.ambient_dim)?;
    let worst = n_gens.iter().map(|g| m.residual(g) / g.norm_fro().max(1.0)).fold(0.0, f64::max);
    if worst > EQUALITY_TOL {
        return Err(Error::NotSubalgebra { residual: worst });
    }
    meet(&commutant(n_gens, m.ambient_dim)?, m)
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct DistributivityReport {
    /// Span distance between `(M₁⊗N₁) ∨ (M₂⊗N₂)` and `(M₁∨M₂) ⊗ (N₁∨N₂)`.
    pub join_residual: f64,
    /// Span distance between `(M₁⊗N₁)′ ∩ (M₂⊗N₂)′` and `(M₁′∩M₂′) ⊗ (N₁′∩N₂′)`.
    pub meet_residual: f64,
    pub holds: bool,
}

pub fn distributivity_check(
    m1: &MatrixAlgebra,
    m2: &MatrixAlgebra,
    n1: &MatrixAlgebra,
    n2: &MatrixAlgebra,
) -> Result<DistributivityReport> {
    require_same(m1, m2)?;
    require_same(n1, n2)?;
    let (a, b) = (m1.tensor(n1), m2.tensor(n2));
    let join_residual = span_distance(&join(&a, &b)?, &join(m1, m2)?.tensor(&join(n1, n2)?))?;
    let lhs = meet(&commutant_of(&a), &commutant_of(&b))?;
    let rhs = meet(&commutant_of(m1), &commutant_of(m2))?.tensor(&meet(&commutant_of(n1), &commutant_of(n2))?);
    let meet_residual = span_distance(&lhs, &rhs)?;
    Ok(DistributivityReport { join_residual, meet_residual, holds: join_residual.max(meet_residual) <= EQUALITY_TOL })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn hadamard_diagonal() -> MatrixAlgebra {
        let s = 1.0 / 2f64.sqrt();
        let h = ComplexMatrix::from_real_fn(2, 2, |i, j| if i == 1 && j == 1 { -s } else { s });
        MatrixAlgebra::generated(&[h.matmul(&ComplexMatrix::from_real_diag(&[1.0, -1.0])).matmul(&h)], 2).unwrap()
    }

    #[test]
    fn commutant_examples() {
        let full = MatrixAlgebra::full(3);
        assert_eq!(commutant(full.basis(), 3).unwrap().dim(), 1);
        let diag = MatrixAlgebra::diagonal(3);
        assert!(span_equal(&commutant_of(&diag), &diag).unwrap());
        assert_eq!(commutant(&[ComplexMatrix::identity(3)], 3).unwrap().dim(), 9);
        assert!(commutant(&[ComplexMatrix::identity(2)], 3).is_err());
    }

    #[test]
    fn basic_algebras_are_closed_and_orthonormal() {
        for alg in [MatrixAlgebra::scalars(3), MatrixAlgebra::full(3), MatrixAlgebra::diagonal(3), hadamard_diagonal()] {
            assert!(alg.closure_defect() <= 1e-9);
            assert!(alg.orthonormality_defect() <= 1e-10);
            assert!(alg.contains_identity());
        }
    }

    #[test]
    fn bicommutant_matches_word_closure() {
        let mut rng = ChaCha8Rng::seed_from_u64(81);
        for _ in 0..50 {
            let d = rng.gen_range(2..=6);
            let k = rng.gen_range(1..=2);
            // sparse block-structured generators so nontrivial algebras appear
            let split = rng.gen_range(1..d);
            let gens: Vec<ComplexMatrix> = (0..k)
                .map(|_| {
                    let a = sample::matrix_with_norm(&mut rng, split, 1.0);
                    let b = sample::matrix_with_norm(&mut rng, d - split, 1.0);
                    if rng.gen_bool(0.5) { a.direct_sum(&b) } else { sample::matrix_with_norm(&mut rng, d, 1.0) }
                })
                .collect();
            let bi = bicommutant(&gens, d).unwrap();
            let words = word_closure(&gens, d).unwrap();
            assert!(span_distance(&bi, &words).unwrap() <= 1e-9, "d={d}: {} vs {}", bi.dim(), words.dim());
            for g in &gens {
                assert!(bi.contains(g));
            }
            assert!(bi.closure_defect() <= 1e-9);
        }
    }

    #[test]
    fn single_hermitian_generates_its_polynomials() {
        let mut rng = ChaCha8Rng::seed_from_u64(82);
        for distinct in 1..=4 {
            let values: Vec<f64> = (0..5).map(|i| (i % distinct) as f64 * 1.3 - 0.7).collect();
            let h = sample::with_spectrum(&mut rng, &values);
            assert_eq!(bicommutant(&[h.into_matrix()], 5).unwrap().dim(), distinct);
        }
    }

    #[test]
    fn lattice_examples() {
        let diag = MatrixAlgebra::diagonal(3);
        assert!(span_equal(&join(&diag, &MatrixAlgebra::scalars(3)).unwrap(), &diag).unwrap());
        assert!(span_equal(&meet(&diag, &diag).unwrap(), &diag).unwrap());
        let joined = join(&MatrixAlgebra::diagonal(2), &hadamard_diagonal()).unwrap();
        assert_eq!(joined.dim(), 4);
        let gens: Vec<ComplexMatrix> = MatrixAlgebra::diagonal(2).basis().iter().chain(hadamard_diagonal().basis()).cloned().collect();
        assert!(span_equal(&joined, &word_closure(&gens, 2).unwrap()).unwrap());
        assert_eq!(meet(&MatrixAlgebra::diagonal(2), &hadamard_diagonal()).unwrap().dim(), 1);
        assert!(join(&diag, &MatrixAlgebra::scalars(2)).is_err());
    }

    #[test]
    fn centers() {
        assert!(center_and_factor(&MatrixAlgebra::full(3)).is_factor);
        let rep = center_and_factor(&MatrixAlgebra::diagonal(3));
        assert!(!rep.is_factor && rep.center.dim() == 3);
        let m2 = MatrixAlgebra::full(2).tensor(&MatrixAlgebra::scalars(2));
        let rep = center_and_factor(&m2);
        assert!(rep.is_factor);
        assert!(span_equal(&rep.center, &MatrixAlgebra::scalars(4)).unwrap());
    }

    #[test]
    fn relative_commutants() {
        let diag = MatrixAlgebra::diagonal(3);
        let rel = relative_commutant(diag.basis(), &diag).unwrap();
        assert!(span_equal(&rel, &center_and_factor(&diag).center).unwrap());
        let rel = relative_commutant(&[ComplexMatrix::identity(3)], &diag).unwrap();
        assert!(span_equal(&rel, &diag).unwrap());

        let small = MatrixAlgebra::full(2).tensor(&MatrixAlgebra::scalars(2));
        let rel = relative_commutant(small.basis(), &MatrixAlgebra::full(4)).unwrap();
        let expected = MatrixAlgebra::scalars(2).tensor(&MatrixAlgebra::full(2));
        assert!(span_equal(&rel, &expected).unwrap());

        let off = unit(3, 0, 1);
        assert!(matches!(relative_commutant(&[off], &diag), Err(Error::NotSubalgebra { .. })));
    }

    #[test]
    fn commutant_reverses_order_and_triple_collapses() {
        let small = MatrixAlgebra::diagonal(3);
        let big = MatrixAlgebra::generated(&[MatrixAlgebra::diagonal(3).basis()[0].clone(), unit(3, 1, 2)], 3).unwrap();
        assert!(small.is_subset_of(&big));
        assert!(commutant_of(&big).is_subset_of(&commutant_of(&small)));
        let once = commutant_of(&big);
        let thrice = commutant_of(&commutant_of(&once));
        assert!(span_equal(&once, &thrice).unwrap());
    }

    #[test]
    fn distributivity_trivial_cases() {
        let s2 = MatrixAlgebra::scalars(2);
        let rep = distributivity_check(&s2, &s2, &s2, &s2).unwrap();
        assert!(rep.holds);
        let d2 = MatrixAlgebra::diagonal(2);
        let rep = distributivity_check(&d2, &d2, &s2, &s2).unwrap();
        assert!(rep.holds, "{rep:?}");
        assert!(distributivity_check(&d2, &MatrixAlgebra::scalars(3), &s2, &s2).is_err());
    }
}
