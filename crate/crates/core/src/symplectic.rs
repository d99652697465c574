//! Real-linear operators on `k ≅ k_ℝ ⊕ k_ℝ` and symplectic automorphisms.
//!
//! A vector `f` is represented by `(Re f, Im f)`. Multiplication by `i` is
//! `J = [[0, −1], [1, 0]]` and `Im⟨f, g⟩ = fᵀ Ω g` with `Ω = [[0, 1], [−1, 0]]`.
//! An operator is symplectic when `ZᵀΩZ = Ω`; the unitaries are exactly the
//! symplectic operators that commute with `J`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::linalg::{multiset_match, ComplexMatrix, HermitianOperator, MultisetMismatch};
use crate::par::{self, Execution};
use crate::{sample, Error, Result, ToleranceConfig};

/// Real-linear map `f ↦ Cf + D·conj(f)`, stored as its `2n × 2n` real form.
#[derive(Debug, Clone, PartialEq)]
pub struct RealLinearOperator {
    real_form: ComplexMatrix,
}

impl RealLinearOperator {
    pub fn from_real_form(m: ComplexMatrix) -> Result<Self> {
        let n2 = m.require_square()?;
        if n2 % 2 != 0 {
            return Err(Error::DimensionMismatch { expected: n2 + 1, found: n2 });
        }
        if m.max_imag() != 0.0 {
            return Err(Error::NotReal);
        }
        Ok(Self { real_form: m })
    }

    /// Real form `[[Re C, −Im C], [Im C, Re C]]` of a complex-linear map.
    pub fn from_linear(c: &ComplexMatrix) -> Self {
        Self::from_pair(c, &ComplexMatrix::zeros(c.rows(), c.cols()))
    }

    /// `f ↦ Cf + D·conj(f)`; the antilinear part has real form `[[Re D, Im D], [Im D, −Re D]]`.
    pub fn from_pair(c: &ComplexMatrix, d: &ComplexMatrix) -> Self {
        let n = c.rows();
        let m = ComplexMatrix::from_real_fn(2 * n, 2 * n, |r, s| {
            let (i, j) = (r % n, s % n);
            let (cz, dz) = (c[(i, j)], d[(i, j)]);
            match (r < n, s < n) {
                (true, true) => cz.re + dz.re,
                (true, false) => -cz.im + dz.im,
                (false, true) => cz.im + dz.im,
                (false, false) => cz.re - dz.re,
            }
        });
        Self { real_form: m }
    }

    /// Inverse of [`from_pair`](Self::from_pair): the parts commuting and anticommuting with `J`.
    pub fn to_pair(&self) -> (ComplexMatrix, ComplexMatrix) {
        let n = self.dim();
        let z = &self.real_form;
        let j = multiplication_by_i(n);
        let jzj = j.matmul(z).matmul(&j);
        let lin = (z - &jzj).scale_real(0.5);
        let anti = (z + &jzj).scale_real(0.5);
        let c = ComplexMatrix::from_fn(n, n, |a, b| Complex64::new(lin[(a, b)].re, lin[(n + a, b)].re));
        let d = ComplexMatrix::from_fn(n, n, |a, b| Complex64::new(anti[(a, b)].re, anti[(n + a, b)].re));
        (c, d)
    }

    pub fn dim(&self) -> usize {
        self.real_form.rows() / 2
    }

    pub fn real_form(&self) -> &ComplexMatrix {
        &self.real_form
    }

    pub fn apply(&self, f: &[Complex64]) -> Vec<Complex64> {
        let n = self.dim();
        let x: Vec<Complex64> = f.iter().map(|z| Complex64::new(z.re, 0.0)).chain(f.iter().map(|z| Complex64::new(z.im, 0.0))).collect();
        let y = self.real_form.mul_vec(&x);
        (0..n).map(|i| Complex64::new(y[i].re, y[n + i].re)).collect()
    }

    pub fn compose(&self, other: &Self) -> Self {
        Self { real_form: self.real_form.matmul(&other.real_form) }
    }

    pub fn inverse(&self) -> Result<Self> {
        Ok(Self { real_form: self.real_form.inverse()? })
    }

    /// Adjoint for the real inner product `Re⟨·,·⟩`.
    pub fn transpose(&self) -> Self {
        Self { real_form: self.real_form.transpose() }
    }

    /// Complex-linear maps are the ones commuting with `J`.
    pub fn linearity_defect(&self) -> f64 {
        let j = multiplication_by_i(self.dim());
        (&self.real_form.matmul(&j) - &j.matmul(&self.real_form)).norm_max()
    }
}

/// `J = [[0, −1], [1, 0]]`.
pub fn multiplication_by_i(n: usize) -> ComplexMatrix {
    ComplexMatrix::from_real_fn(2 * n, 2 * n, |r, s| match (r < n, s < n) {
        (false, true) if r - n == s => 1.0,
        (true, false) if s - n == r => -1.0,
        _ => 0.0,
    })
}

/// `Ω = [[0, 1], [−1, 0]]`, the real form of `Im⟨·,·⟩`.
pub fn symplectic_form(n: usize) -> ComplexMatrix {
    multiplication_by_i(n).scale_real(-1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SymplecticReport {
    pub symplectic: bool,
    pub residual: f64,
}

/// `‖ZᵀΩZ − Ω‖_max`; symplectic iff at most `1e−9` and `Z` invertible.
pub fn is_symplectic(z: &RealLinearOperator) -> SymplecticReport {
    let omega = symplectic_form(z.dim());
    let m = &z.real_form;
    let residual = (&m.transpose().matmul(&omega).matmul(m) - &omega).norm_max();
    let invertible = m.determinant().map(|d| d.norm() > 1e-12).unwrap_or(false);
    SymplecticReport { symplectic: residual <= 1e-9 && invertible, residual }
}

/// `Z = U₁ · diag(Z₁, Z₁⁻¹) · U₂` with `U₁, U₂` unitary and `Z₁ ≥ 1` diagonal.
#[derive(Debug, Clone)]
pub struct SymplecticDecomposition {
    pub u1: ComplexMatrix,
    pub u2: ComplexMatrix,
    /// Diagonal of `Z₁` in the real basis fixed by `U₁, U₂`, each entry `≥ 1`.
    pub z1: Vec<f64>,
}

impl SymplecticDecomposition {
    pub fn middle(&self) -> ComplexMatrix {
        let d: Vec<f64> = self.z1.iter().copied().chain(self.z1.iter().map(|x| x.recip())).collect();
        ComplexMatrix::from_real_diag(&d)
    }

    pub fn reassemble(&self) -> RealLinearOperator {
        assemble(&self.u1, &self.z1, &self.u2)
    }
}

/// `U₁ · diag(Z₁, Z₁⁻¹) · U₂` in real form.
pub fn assemble(u1: &ComplexMatrix, z1: &[f64], u2: &ComplexMatrix) -> RealLinearOperator {
    let d: Vec<f64> = z1.iter().copied().chain(z1.iter().map(|x| x.recip())).collect();
    let m = RealLinearOperator::from_linear(u1)
        .real_form
        .matmul(&ComplexMatrix::from_real_diag(&d))
        .matmul(&RealLinearOperator::from_linear(u2).real_form);
    RealLinearOperator { real_form: m }
}

fn real_symmetric(m: &ComplexMatrix) -> HermitianOperator {
    HermitianOperator::from_spectral_unchecked((m + &m.transpose()).scale_real(0.5))
}

fn dot(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x.re * y.re).sum()
}

/// Polar decomposition `Z = O·P` followed by a symplectic diagonalisation of `P`.
pub fn decompose_symplectic(z: &RealLinearOperator, tol: &ToleranceConfig) -> Result<SymplecticDecomposition> {
    let report = is_symplectic(z);
    if !report.symplectic {
        return Err(Error::NotSymplectic { residual: report.residual });
    }
    let n = z.dim();
    let zr = &z.real_form;
    let gram = real_symmetric(&zr.transpose().matmul(zr));
    let p = gram.sqrt()?;
    let o = zr.matmul(&p.inverse()?.into_matrix());
    let spec = p.spectral()?;
    let ev = &spec.eigenvalues;
    for i in 0..n {
        let prod = ev[i] * ev[2 * n - 1 - i];
        if (prod - 1.0).abs() > tol.pair_tol.max(1e-8) {
            return Err(Error::NotSymplectic { residual: (prod - 1.0).abs() });
        }
    }

    // P maps E_λ to E_{1/λ} through J; take the λ > 1 eigenvectors and a
    // Lagrangian half of E_1.
    let j = multiplication_by_i(n);
    let gap = 1e-7;
    let mut chosen: Vec<Vec<Complex64>> = (0..2 * n).filter(|&i| ev[i] > 1.0 + gap).map(|i| spec.eigenvectors.column(i)).collect();
    let unit_space: Vec<Vec<Complex64>> =
        (0..2 * n).filter(|&i| (ev[i] - 1.0).abs() <= gap).map(|i| spec.eigenvectors.column(i)).collect();
    for cand in unit_space {
        if chosen.len() == n {
            break;
        }
        let mut v = cand;
        for _ in 0..2 {
            for w in chosen.iter().flat_map(|c| [c.clone(), j.mul_vec(c)]) {
                let proj = dot(&w, &v);
                for (vi, wi) in v.iter_mut().zip(&w) {
                    *vi -= wi * proj;
                }
            }
        }
        let norm = dot(&v, &v).sqrt();
        if norm > 1e-6 {
            chosen.push(v.into_iter().map(|x| x / norm).collect());
        }
    }
    if chosen.len() != n {
        return Err(Error::NotSymplectic { residual: report.residual });
    }
    let jv: Vec<Vec<Complex64>> = chosen.iter().map(|v| j.mul_vec(v)).collect();
    let columns: Vec<Vec<Complex64>> = chosen.iter().chain(&jv).cloned().collect();
    let k = ComplexMatrix::from_columns(&columns);
    let z1: Vec<f64> = chosen.iter().map(|v| dot(v, &p.matrix().mul_vec(v))).collect();

    let to_complex = |m: &ComplexMatrix| ComplexMatrix::from_fn(n, n, |a, b| Complex64::new(m[(a, b)].re, m[(n + a, b)].re));
    Ok(SymplecticDecomposition { u1: to_complex(&o.matmul(&k)), u2: to_complex(&k.transpose()), z1 })
}

#[derive(Debug, Clone, Serialize)]
pub struct XyzReport {
    /// `‖ZᵀR₂Z − R₁‖ / ‖R₁‖` in real form.
    pub relation_residual: f64,
    /// `‖D²M₂D² − M₂‖` with `M₂ = U₁ᵀR₂U₁` and `D = diag(Z₁, Z₁⁻¹)`.
    pub x_residual: f64,
    /// `‖D²M₁D² − M₁‖` with `M₁ = U₂R₁U₂ᵀ`.
    pub y_residual: f64,
    /// `max |Z₁ − 1|`.
    pub z1_deviation: f64,
}

/// Checks the identities `Z₁²XZ₁² = X` and `Z₁²YZ₁² = Y` forced by `R₁ = Z*R₂Z`.
///
/// They are evaluated in the real form `D²MD² = M`, which holds for complex
/// `R` and reduces to the blockwise statement when `M = diag(X, X)`.
pub fn xyz_check(
    r1: &HermitianOperator,
    r2: &HermitianOperator,
    z: &RealLinearOperator,
    tol: &ToleranceConfig,
) -> Result<XyzReport> {
    let n = z.dim();
    if r1.dim() != n || r2.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: r1.dim().max(r2.dim()) });
    }
    let dec = decompose_symplectic(z, tol)?;
    let r1r = RealLinearOperator::from_linear(r1.matrix()).real_form;
    let r2r = RealLinearOperator::from_linear(r2.matrix()).real_form;
    let zr = &z.real_form;
    let relation_residual = (&zr.transpose().matmul(&r2r).matmul(zr) - &r1r).norm_fro() / r1r.norm_fro();
    if relation_residual > 1e-7 {
        return Err(Error::RelationViolated { residual: relation_residual });
    }
    let u1 = RealLinearOperator::from_linear(&dec.u1).real_form;
    let u2 = RealLinearOperator::from_linear(&dec.u2).real_form;
    let m2 = u1.transpose().matmul(&r2r).matmul(&u1);
    let m1 = u2.matmul(&r1r).matmul(&u2.transpose());
    let mid = dec.middle();
    let d2 = mid.matmul(&mid);
    let res = |m: &ComplexMatrix| (&d2.matmul(m).matmul(&d2) - m).norm_fro() / m.norm_fro();
    Ok(XyzReport {
        relation_residual,
        x_residual: res(&m2),
        y_residual: res(&m1),
        z1_deviation: dec.z1.iter().map(|x| (x - 1.0).abs()).fold(0.0, f64::max),
    })
}

/// Outcome of one descent run of [`brb_probe`].
#[derive(Debug, Clone, Serialize)]
pub struct BrbTrial {
    pub residual: f64,
    pub distance_to_identity: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone)]
pub struct BrbReport {
    pub min_residual: f64,
    pub best_b: ComplexMatrix,
    pub distance_to_identity: f64,
    pub trials: Vec<BrbTrial>,
}

impl BrbReport {
    /// Every run that reached `BRB = R` (residual `≤ 1e−9`) landed within `1e−6` of `B = 1`.
    pub fn contract_holds(&self) -> bool {
        self.trials.iter().all(|t| t.residual > 1e-9 || t.distance_to_identity <= 1e-6)
    }
}

pub const BRB_MAX_ITERATIONS: usize = 5000;
const BRB_GRADIENT_TOL: f64 = 1e-10;

struct BrbState {
    s_eigen: Vec<f64>,
    v: ComplexMatrix,
    b: ComplexMatrix,
    e: ComplexMatrix,
    value: f64,
}

fn brb_state(s: &ComplexMatrix, r: &ComplexMatrix) -> Result<BrbState> {
    let spec = HermitianOperator::from_spectral_unchecked((s + &s.adjoint()).scale_real(0.5)).spectral()?.clone();
    let b = spec.reconstruct_with(f64::exp);
    let e = &b.matmul(r).matmul(&b) - r;
    let value = e.norm_fro().powi(2);
    Ok(BrbState { s_eigen: spec.eigenvalues, v: spec.eigenvectors, b, e, value })
}

/// Real orthonormal basis of the Hermitian `n × n` matrices.
fn hermitian_basis(n: usize) -> Vec<ComplexMatrix> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        out.push(ComplexMatrix::from_fn(n, n, |a, b| Complex64::new(if a == i && b == i { 1.0 } else { 0.0 }, 0.0)));
        for j in i + 1..n {
            out.push(ComplexMatrix::from_fn(n, n, |a, b| {
                Complex64::new(if (a, b) == (i, j) || (a, b) == (j, i) { h } else { 0.0 }, 0.0)
            }));
            out.push(ComplexMatrix::from_fn(n, n, |a, b| match (a, b) {
                _ if (a, b) == (i, j) => Complex64::new(0.0, h),
                _ if (a, b) == (j, i) => Complex64::new(0.0, -h),
                _ => Complex64::new(0.0, 0.0),
            }));
        }
    }
    out
}

fn coordinates(m: &ComplexMatrix, basis: &[ComplexMatrix]) -> Vec<f64> {
    basis.iter().map(|h| crate::linalg::inner(h.as_slice(), m.as_slice()).re).collect()
}

/// `D exp(S)[H]` through the Daleckii–Krein divided differences of `exp`.
fn exp_derivative(st: &BrbState, h: &ComplexMatrix) -> ComplexMatrix {
    let ht = st.v.adjoint().matmul(h).matmul(&st.v);
    let s = &st.s_eigen;
    let weighted = ComplexMatrix::from_fn(s.len(), s.len(), |i, j| {
        let gamma = if (s[i] - s[j]).abs() < 1e-12 {
            (0.5 * (s[i] + s[j])).exp()
        } else {
            (s[i].exp() - s[j].exp()) / (s[i] - s[j])
        };
        ht[(i, j)] * gamma
    });
    st.v.matmul(&weighted).matmul(&st.v.adjoint())
}

/// Jacobian of `S ↦ BRB − R` in the basis of [`hermitian_basis`].
fn brb_jacobian(st: &BrbState, r: &ComplexMatrix, basis: &[ComplexMatrix]) -> Vec<Vec<f64>> {
    basis
        .iter()
        .map(|h| {
            let db = exp_derivative(st, h);
            let de = &db.matmul(r).matmul(&st.b) + &st.b.matmul(r).matmul(&db);
            coordinates(&de, basis)
        })
        .collect()
}

/// Damped Gauss–Newton descent on `‖BRB − R‖²_F`, stopped when the gradient vanishes.
fn brb_descent(r: &ComplexMatrix, start: ComplexMatrix) -> Result<(BrbTrial, ComplexMatrix)> {
    let n = r.rows();
    let basis = hermitian_basis(n);
    let m = basis.len();
    let mut s = start;
    let mut st = brb_state(&s, r)?;
    let mut damping = 1e-3;
    let mut iterations = 0;
    while iterations < BRB_MAX_ITERATIONS {
        let cols = brb_jacobian(&st, r, &basis);
        let e = coordinates(&st.e, &basis);
        // gradient of ‖E‖² is 2Jᵀe
        let grad: Vec<f64> = cols.iter().map(|c| 2.0 * c.iter().zip(&e).map(|(x, y)| x * y).sum::<f64>()).collect();
        if grad.iter().map(|g| g * g).sum::<f64>().sqrt() <= BRB_GRADIENT_TOL {
            break;
        }
        iterations += 1;
        let normal = ComplexMatrix::from_real_fn(m, m, |i, j| cols[i].iter().zip(&cols[j]).map(|(x, y)| x * y).sum());
        let rhs = ComplexMatrix::from_real_fn(m, 1, |i, _| -0.5 * grad[i]);
        let mut accepted = false;
        while damping < 1e12 {
            let damped = &normal + &ComplexMatrix::identity(m).scale_real(damping * (1.0 + normal.norm_max()));
            let step = damped.solve(&rhs)?;
            let delta = basis.iter().enumerate().fold(ComplexMatrix::zeros(n, n), |acc, (k, h)| &acc + &h.scale_real(step[(k, 0)].re));
            let trial = &s + &delta;
            let next = brb_state(&trial, r)?;
            if next.value < st.value {
                s = trial;
                st = next;
                damping = (damping / 3.0).max(1e-15);
                accepted = true;
                break;
            }
            damping *= 4.0;
        }
        if !accepted {
            break;
        }
    }
    let residual = st.e.norm_fro();
    let distance = st.b.distance_to_identity();
    Ok((BrbTrial { residual, distance_to_identity: distance, iterations }, st.b))
}

/// Multi-start minimisation of `‖BRB − R‖_F` over `B = exp(S) > 0`.
///
/// Trials are seeded from `seed` one by one, so the report does not depend
/// on the execution strategy.
pub fn brb_probe(r: &HermitianOperator, trials: usize, seed: u64, exec: Execution) -> Result<BrbReport> {
    let min = r.min_eigenvalue()?;
    if min < 1.0 - 1e-10 {
        return Err(Error::SymbolNotAdmissible(format!("R ≥ 1 fails: min eigenvalue {min}")));
    }
    let n = r.dim();
    let rm = r.matrix();
    let outcomes = par::map_range(exec, trials, |k| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(k as u64));
        let scale = rng.gen_range(0.2..1.5);
        let start = sample::hermitian(&mut rng, n, scale).into_matrix();
        brb_descent(rm, start)
    });
    let outcomes = outcomes.into_iter().collect::<Result<Vec<_>>>()?;
    let (best, best_b) = outcomes
        .iter()
        .min_by(|a, b| a.0.residual.total_cmp(&b.0.residual))
        .map(|(t, b)| (t.clone(), b.clone()))
        .ok_or(Error::EmptySpectrum)?;
    Ok(BrbReport {
        min_residual: best.residual,
        best_b,
        distance_to_identity: best.distance_to_identity,
        trials: outcomes.into_iter().map(|(t, _)| t).collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquivalenceVerdict {
    pub equivalent: bool,
    pub reason: String,
}

/// Whether `R₁ = Z R₂ Z*` for a symplectic `Z`; by the decomposition and the
/// `BRB = R ⟹ B = 1` argument this is unitary equivalence, i.e. equal spectra.
pub fn symplectic_equivalence(
    r1: &HermitianOperator,
    r2: &HermitianOperator,
    tol: &ToleranceConfig,
) -> Result<EquivalenceVerdict> {
    if r1.dim() != r2.dim() {
        return Err(Error::DimensionMismatch { expected: r1.dim(), found: r2.dim() });
    }
    let e1 = r1.eigenvalues()?;
    let e2 = r2.eigenvalues()?;
    for &m in e1.first().iter().chain(e2.first().iter()) {
        if *m <= 1.0 + 1e-10 {
            return Err(Error::SymbolNotAdmissible(format!("R − 1 is not injective: min eigenvalue {m}")));
        }
    }
    let verdict = |equivalent: bool, reason: String| Ok(EquivalenceVerdict { equivalent, reason });
    match multiset_match(&e1, &e2, tol.pair_tol) {
        Ok(()) => verdict(true, "spectra agree".into()),
        Err(MultisetMismatch::Value { left, right }) => verdict(false, format!("unmatched eigenvalue: {left} vs {right}")),
        Err(MultisetMismatch::Length { left, right }) => verdict(false, format!("dimension {left} vs {right}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample;

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn planted(rng: &mut ChaCha8Rng, n: usize) -> (RealLinearOperator, Vec<f64>) {
        let z1: Vec<f64> = (0..n).map(|_| rng.gen_range(1.0..3.0)).collect();
        let u = sample::unitary(rng, n);
        let v = sample::unitary(rng, n);
        (assemble(&u, &z1, &v), z1)
    }

    #[test]
    fn real_form_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        let c = ComplexMatrix::from_fn(3, 3, |_, _| sample::complex(&mut rng));
        let d = ComplexMatrix::from_fn(3, 3, |_, _| sample::complex(&mut rng));
        let z = RealLinearOperator::from_pair(&c, &d);
        let (c2, d2) = z.to_pair();
        assert!((&c - &c2).norm_max() < 1e-14 && (&d - &d2).norm_max() < 1e-14);
        let f = sample::vector(&mut rng, 3, 1.0);
        let direct: Vec<Complex64> = c.mul_vec(&f).iter().zip(d.mul_vec(&crate::linalg::vec_conj(&f))).map(|(a, b)| a + b).collect();
        for (a, b) in z.apply(&f).iter().zip(&direct) {
            assert!((a - b).norm() < 1e-14);
        }
    }

    #[test]
    fn form_matches_imaginary_part_of_inner_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(62);
        let f = sample::vector(&mut rng, 2, 1.0);
        let g = sample::vector(&mut rng, 2, 1.0);
        let real = |v: &[Complex64]| -> Vec<Complex64> {
            v.iter().map(|z| Complex64::new(z.re, 0.0)).chain(v.iter().map(|z| Complex64::new(z.im, 0.0))).collect()
        };
        let omega = symplectic_form(2);
        let form = crate::linalg::inner(&real(&f), &omega.mul_vec(&real(&g))).re;
        assert!((form - crate::linalg::inner(&f, &g).im).abs() < 1e-15);
    }

    #[test]
    fn symplectic_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(63);
        let u = RealLinearOperator::from_linear(&sample::unitary(&mut rng, 3));
        assert!(is_symplectic(&u).symplectic);
        let squeeze = RealLinearOperator::from_real_form(ComplexMatrix::from_real_diag(&[4.0, 0.25])).unwrap();
        assert!(is_symplectic(&squeeze).symplectic);
        let two = RealLinearOperator::from_linear(&ComplexMatrix::identity(2).scale_real(2.0));
        let rep = is_symplectic(&two);
        assert!(!rep.symplectic && (rep.residual - 3.0).abs() < 1e-14);
    }

    #[test]
    fn accepted_operators_form_a_group() {
        let mut rng = ChaCha8Rng::seed_from_u64(64);
        for _ in 0..10 {
            let (a, _) = planted(&mut rng, 3);
            let (b, _) = planted(&mut rng, 3);
            assert!(is_symplectic(&a.compose(&b)).symplectic);
            assert!(is_symplectic(&a.inverse().unwrap()).symplectic);
        }
    }

    #[test]
    fn decomposition_of_unitaries_and_squeezes() {
        let mut rng = ChaCha8Rng::seed_from_u64(65);
        let u = sample::unitary(&mut rng, 2);
        let dec = decompose_symplectic(&RealLinearOperator::from_linear(&u), &tol()).unwrap();
        assert!(dec.z1.iter().all(|x| (x - 1.0).abs() < 1e-8));
        assert!((&dec.u1.matmul(&dec.u2) - &u).norm_max() < 1e-8);

        let squeeze = RealLinearOperator::from_real_form(ComplexMatrix::from_real_diag(&[2.0, 0.5])).unwrap();
        let dec = decompose_symplectic(&squeeze, &tol()).unwrap();
        assert!((dec.z1[0] - 2.0).abs() < 1e-12);
        assert!((dec.reassemble().real_form() - squeeze.real_form()).norm_max() < 1e-8);
        let inverse = RealLinearOperator::from_real_form(ComplexMatrix::from_real_diag(&[0.5, 2.0])).unwrap();
        assert!((decompose_symplectic(&inverse, &tol()).unwrap().z1[0] - 2.0).abs() < 1e-12);

        let two = RealLinearOperator::from_linear(&ComplexMatrix::identity(2).scale_real(2.0));
        assert!(matches!(decompose_symplectic(&two, &tol()), Err(Error::NotSymplectic { .. })));
    }

    #[test]
    fn planted_decompositions_reassemble() {
        let mut rng = ChaCha8Rng::seed_from_u64(66);
        for _ in 0..100 {
            let n = rng.gen_range(1..=4);
            let (z, mut planted_z1) = planted(&mut rng, n);
            let dec = decompose_symplectic(&z, &tol()).unwrap();
            assert!((dec.reassemble().real_form() - z.real_form()).norm_max() <= 1e-8);
            assert!(dec.u1.unitarity_defect() < 1e-9 && dec.u2.unitarity_defect() < 1e-9);
            let mut got = dec.z1.clone();
            got.sort_by(f64::total_cmp);
            planted_z1.sort_by(f64::total_cmp);
            assert!(multiset_match(&got, &planted_z1, 1e-8).is_ok(), "{got:?} vs {planted_z1:?}");
        }
    }

    #[test]
    fn degenerate_unit_block_still_decomposes() {
        let mut rng = ChaCha8Rng::seed_from_u64(67);
        let u = sample::unitary(&mut rng, 3);
        let v = sample::unitary(&mut rng, 3);
        let z = assemble(&u, &[1.0, 2.0, 1.0], &v);
        let dec = decompose_symplectic(&z, &tol()).unwrap();
        assert!((dec.reassemble().real_form() - z.real_form()).norm_max() <= 1e-8);
    }

    #[test]
    fn xyz_identities() {
        let mut rng = ChaCha8Rng::seed_from_u64(68);
        let r2 = sample::positive(&mut rng, 3, 1.0, 3.0);
        let u = sample::unitary(&mut rng, 3);
        let r1 = HermitianOperator::new(u.adjoint().matmul(r2.matrix()).matmul(&u), &tol()).unwrap();
        let rep = xyz_check(&r1, &r2, &RealLinearOperator::from_linear(&u), &tol()).unwrap();
        assert!(rep.x_residual <= 1e-8 && rep.y_residual <= 1e-8 && rep.z1_deviation < 1e-8);

        // a genuine squeeze cannot relate two complex symbols R ≥ 1
        let (z, _) = planted(&mut rng, 3);
        let zr = z.real_form();
        let pulled = zr.transpose().matmul(&RealLinearOperator::from_linear(r2.matrix()).real_form).matmul(zr);
        let (c, _) = RealLinearOperator::from_real_form(pulled).unwrap().to_pair();
        let r1 = HermitianOperator::new((&c + &c.adjoint()).scale_real(0.5), &tol()).unwrap();
        assert!(matches!(xyz_check(&r1, &r2, &z, &tol()), Err(Error::RelationViolated { .. })));
    }

    #[test]
    fn brb_probe_finds_only_the_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(69);
        let id = brb_probe(&HermitianOperator::identity(2), 3, 0, Execution::default()).unwrap();
        assert!(id.min_residual <= 1e-9 && id.distance_to_identity <= 1e-6);
        for _ in 0..5 {
            let r = sample::positive(&mut rng, 3, 1.0, 3.0);
            let rep = brb_probe(&r, 3, 7, Execution::default()).unwrap();
            assert!(rep.contract_holds());
            assert!(rep.min_residual <= 1e-9, "{}", rep.min_residual);
        }
    }

    #[test]
    fn brb_probe_is_reproducible_across_strategies() {
        let mut rng = ChaCha8Rng::seed_from_u64(70);
        let r = sample::positive(&mut rng, 3, 1.0, 2.0);
        let a = brb_probe(&r, 4, 11, Execution::Sequential).unwrap();
        let b = brb_probe(&r, 4, 11, Execution::default()).unwrap();
        assert_eq!(a.min_residual, b.min_residual);
        assert_eq!(a.best_b, b.best_b);
    }

    #[test]
    fn equivalence_examples() {
        let d = |v: &[f64]| HermitianOperator::from_real_diag(v);
        assert!(symplectic_equivalence(&d(&[3.0, 5.0]), &d(&[3.0, 5.0]), &tol()).unwrap().equivalent);
        assert!(symplectic_equivalence(&d(&[3.0, 5.0]), &d(&[5.0, 3.0]), &tol()).unwrap().equivalent);
        let v = symplectic_equivalence(&d(&[3.0, 5.0]), &d(&[3.0, 7.0]), &tol()).unwrap();
        assert!(!v.equivalent && v.reason.contains('5') && v.reason.contains('7'));
        assert!(symplectic_equivalence(&d(&[3.0]), &d(&[3.0, 3.0]), &tol()).is_err());
    }
}
