use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::par::{self, Execution};
use crate::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Matrices at least this large multiply row-parallel under [`Execution::Parallel`].
const PAR_MATMUL_MIN: usize = 48;

/// Dense complex matrix in row-major order.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = ONE;
        }
        m
    }

    /// Builds a matrix from row-major entries.
    ///
    /// Fails when the entry count does not match or an entry is not finite.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch { expected: rows * cols, found: data.len() });
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidSpec("matrix entries must be finite".into()));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_real_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        Self::from_fn(rows, cols, |i, j| Complex64::new(f(i, j), 0.0))
    }

    pub fn from_diag(diag: &[Complex64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, d) in diag.iter().enumerate() {
            m.data[i * n + i] = *d;
        }
        m
    }

    pub fn from_real_diag(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, d) in diag.iter().enumerate() {
            m.data[i * n + i] = Complex64::new(*d, 0.0);
        }
        m
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[Vec<Complex64>]) -> Self {
        let cols = columns.len();
        let rows = columns.first().map_or(0, Vec::len);
        Self::from_fn(rows, cols, |i, j| columns[j][i])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<Complex64> {
        self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self.data[i * self.cols + j]).collect()
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        (0..self.rows.min(self.cols)).map(|i| self.data[i * self.cols + i]).collect()
    }

    pub fn require_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare { rows: self.rows, cols: self.cols })
        }
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z.conj()).collect() }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z * s).collect() }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| f(*z)).collect() }
    }

    pub fn trace(&self) -> Complex64 {
        self.diagonal().into_iter().sum()
    }

    pub fn norm_fro(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn norm_max(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Maximum absolute column sum.
    pub fn norm_one(&self) -> f64 {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self[(i, j)].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Largest absolute imaginary part over all entries.
    pub fn max_imag(&self) -> f64 {
        self.data.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }

    /// Matrix product using the default execution strategy.
    pub fn matmul(&self, other: &Self) -> Self {
        self.matmul_with(other, Execution::default())
    }

    /// Matrix product; large products split rows across threads under `exec`.
    pub fn matmul_with(&self, other: &Self, exec: Execution) -> Self {
        assert_eq!(self.cols, other.rows, "matmul: inner dimensions differ");
        let (n, k, m) = (self.rows, self.cols, other.cols);
        let mut out = vec![ZERO; n * m];
        let exec = if n.max(m) >= PAR_MATMUL_MIN { exec } else { Execution::Sequential };
        par::fill_rows(exec, &mut out, m, |i, row| {
            let a = &self.data[i * k..(i + 1) * k];
            for (l, a_il) in a.iter().enumerate() {
                if *a_il == ZERO {
                    continue;
                }
                let b = &other.data[l * m..(l + 1) * m];
                for (o, b_lj) in row.iter_mut().zip(b) {
                    *o += a_il * b_lj;
                }
            }
        });
        Self { rows: n, cols: m, data: out }
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len(), "mul_vec: dimension mismatch");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        let (r1, c1, r2, c2) = (self.rows, self.cols, other.rows, other.cols);
        Self::from_fn(r1 * r2, c1 * c2, |i, j| self[(i / r2, j / c2)] * other[(i % r2, j % c2)])
    }

    /// `A ⊕ B` as a block-diagonal matrix.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)];
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out[(self.rows + i, self.cols + j)] = other[(i, j)];
            }
        }
        out
    }

    pub fn submatrix(&self, row0: usize, col0: usize, rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |i, j| self[(row0 + i, col0 + j)])
    }

    pub fn set_block(&mut self, row0: usize, col0: usize, block: &Self) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self[(row0 + i, col0 + j)] = block[(i, j)];
            }
        }
    }

    /// `[A, B] = AB − BA`.
    pub fn commutator(&self, other: &Self) -> Self {
        &self.matmul(other) - &other.matmul(self)
    }

    /// `{A, B} = AB + BA`.
    pub fn anticommutator(&self, other: &Self) -> Self {
        &self.matmul(other) + &other.matmul(self)
    }

    /// Frobenius distance to the identity.
    pub fn distance_to_identity(&self) -> f64 {
        let n = self.rows;
        (&(self.clone()) - &Self::identity(n)).norm_fro()
    }

    /// `‖U*U − 1‖_max`, which vanishes exactly for unitaries.
    pub fn unitarity_defect(&self) -> f64 {
        let n = self.cols;
        (&self.adjoint().matmul(self) - &Self::identity(n)).norm_max()
    }

    /// LU factorisation with partial pivoting: returns the combined factors,
    /// the row permutation and its sign.
    fn lu(&self) -> Result<(Self, Vec<usize>, f64)> {
        let n = self.require_square()?;
        let mut a = self.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;
        for k in 0..n {
            let (p, pivot) = (k..n)
                .map(|i| (i, a[(i, k)].norm()))
                .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if pivot == 0.0 {
                return Err(Error::Singular);
            }
            if p != k {
                for j in 0..n {
                    a.data.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
                sign = -sign;
            }
            let akk = a[(k, k)];
            for i in k + 1..n {
                let factor = a[(i, k)] / akk;
                a[(i, k)] = factor;
                if factor == ZERO {
                    continue;
                }
                for j in k + 1..n {
                    let akj = a[(k, j)];
                    a[(i, j)] -= factor * akj;
                }
            }
        }
        Ok((a, perm, sign))
    }

    pub fn determinant(&self) -> Result<Complex64> {
        match self.lu() {
            Ok((lu, _, sign)) => Ok(lu.diagonal().into_iter().product::<Complex64>() * sign),
            Err(Error::Singular) => Ok(ZERO),
            Err(e) => Err(e),
        }
    }

    /// Solves `self · X = rhs` for a square, non-singular `self`.
    pub fn solve(&self, rhs: &Self) -> Result<Self> {
        let n = self.require_square()?;
        if rhs.rows != n {
            return Err(Error::DimensionMismatch { expected: n, found: rhs.rows });
        }
        let (lu, perm, _) = self.lu()?;
        let m = rhs.cols;
        let mut x = Self::from_fn(n, m, |i, j| rhs[(perm[i], j)]);
        for j in 0..m {
            for i in 0..n {
                let mut s = x[(i, j)];
                for k in 0..i {
                    s -= lu[(i, k)] * x[(k, j)];
                }
                x[(i, j)] = s;
            }
            for i in (0..n).rev() {
                let mut s = x[(i, j)];
                for k in i + 1..n {
                    s -= lu[(i, k)] * x[(k, j)];
                }
                x[(i, j)] = s / lu[(i, i)];
            }
        }
        Ok(x)
    }

    pub fn inverse(&self) -> Result<Self> {
        let n = self.require_square()?;
        self.solve(&Self::identity(n))
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "add: shape mismatch");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "sub: shape mismatch");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        self.scale_real(-1.0)
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs)
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self
                .row(i)
                .iter()
                .map(|z| format!("{:+.4e}{:+.4e}i", z.re, z.im))
                .collect();
            writeln!(f, "  {}", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// `⟨u, v⟩`, antilinear in the first argument.
pub fn inner(u: &[Complex64], v: &[Complex64]) -> Complex64 {
    assert_eq!(u.len(), v.len(), "inner: length mismatch");
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

pub fn norm(u: &[Complex64]) -> f64 {
    u.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn axpy(a: Complex64, x: &[Complex64], y: &[Complex64]) -> Vec<Complex64> {
    x.iter().zip(y).map(|(xi, yi)| a * xi + yi).collect()
}

pub fn vec_sub(x: &[Complex64], y: &[Complex64]) -> Vec<Complex64> {
    x.iter().zip(y).map(|(a, b)| a - b).collect()
}

pub fn vec_add(x: &[Complex64], y: &[Complex64]) -> Vec<Complex64> {
    x.iter().zip(y).map(|(a, b)| a + b).collect()
}

pub fn vec_scale(s: Complex64, x: &[Complex64]) -> Vec<Complex64> {
    x.iter().map(|a| s * a).collect()
}

pub fn vec_conj(x: &[Complex64]) -> Vec<Complex64> {
    x.iter().map(|a| a.conj()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn determinant_and_inverse_of_small_matrix() {
        let m = ComplexMatrix::from_vec(2, 2, vec![c(1.0, 1.0), c(2.0, 0.0), c(0.0, -1.0), c(3.0, 0.0)])
            .unwrap();
        let det = m.determinant().unwrap();
        // (1+i)·3 − 2·(−i) = 3 + 5i
        assert!((det - c(3.0, 5.0)).norm() < 1e-14);
        let inv = m.inverse().unwrap();
        assert!(m.matmul(&inv).distance_to_identity() < 1e-14);
    }

    #[test]
    fn singular_matrix_has_zero_determinant() {
        let m = ComplexMatrix::from_real_fn(3, 3, |i, j| (i + j) as f64);
        assert!(m.determinant().unwrap().norm() < 1e-12);
    }

    #[test]
    fn kron_matches_block_layout() {
        let a = ComplexMatrix::from_real_diag(&[1.0, 2.0]);
        let b = ComplexMatrix::from_real_fn(2, 2, |i, j| (2 * i + j) as f64);
        let k = a.kron(&b);
        assert_eq!(k[(3, 2)], c(4.0, 0.0));
        assert_eq!(k[(1, 2)], c(0.0, 0.0));
    }

    #[test]
    fn parallel_and_sequential_products_agree() {
        let a = ComplexMatrix::from_fn(64, 64, |i, j| c((i * j % 7) as f64, (i + j) as f64 * 0.01));
        let b = a.adjoint();
        let seq = a.matmul_with(&b, Execution::Sequential);
        let par = a.matmul_with(&b, Execution::Parallel);
        assert_eq!(seq, par);
    }

    #[test]
    fn rejects_non_finite_entries() {
        assert!(ComplexMatrix::from_vec(1, 1, vec![c(f64::NAN, 0.0)]).is_err());
        assert!(ComplexMatrix::from_vec(1, 2, vec![c(1.0, 0.0)]).is_err());
    }
}
