use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use crate::Result;

// Degree-13 Padé coefficients and the matching 1-norm threshold (Higham 2005).
const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];
const THETA13: f64 = 5.371920351148152;

/// Matrix exponential by scaling and squaring with a degree-13 Padé approximant.
pub fn matrix_exp(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = m.require_square()?;
    if n == 0 {
        return Ok(ComplexMatrix::zeros(0, 0));
    }
    let norm = m.norm_one();
    let squarings = if norm > THETA13 { (norm / THETA13).log2().ceil() as u32 } else { 0 };
    let a = m.scale_real(0.5f64.powi(squarings as i32));

    let b = |k: usize| Complex64::new(PADE13[k], 0.0);
    let id = ComplexMatrix::identity(n);
    let a2 = a.matmul(&a);
    let a4 = a2.matmul(&a2);
    let a6 = a4.matmul(&a2);

    let lin = |c6: usize, c4: usize, c2: usize, c0: Option<usize>| {
        let mut t = &(&a6.scale(b(c6)) + &a4.scale(b(c4))) + &a2.scale(b(c2));
        if let Some(c0) = c0 {
            t = &t + &id.scale(b(c0));
        }
        t
    };

    let u_inner = &a6.matmul(&lin(13, 11, 9, None)) + &lin(7, 5, 3, Some(1));
    let u = a.matmul(&u_inner);
    let v = &a6.matmul(&lin(12, 10, 8, None)) + &lin(6, 4, 2, Some(0));

    let mut r = (&v - &u).solve(&(&v + &u))?;
    for _ in 0..squarings {
        r = r.matmul(&r);
    }
    Ok(r)
}
