//! Independent oracles shared by the integration tests. Everything here goes
//! through nalgebra so that no result is checked against the code that
//! produced it.

#![allow(dead_code)]

use borel_core::{ComplexMatrix, C64};
use nalgebra::DMatrix;

pub fn to_na(m: &ComplexMatrix) -> DMatrix<C64> {
    let n = m.dim();
    DMatrix::from_fn(n, n, |i, j| m[(i, j)])
}

/// Eigenvalues from nalgebra's complex Schur decomposition, computed for
/// `A − μI` with `μ = tr A / n` and shifted back. The iteration is retried on
/// a unitarily similar matrix if it stalls.
pub fn oracle_eigenvalues(m: &ComplexMatrix) -> Vec<C64> {
    let a = to_na(m);
    let n = a.nrows();
    if n == 0 {
        return Vec::new();
    }
    // Schur stalls on (numerically) scalar matrices: with one repeated
    // eigenvalue the shifts make no progress against rounding noise. Removing
    // the mean leaves a small generic matrix instead.
    let mu = a.trace() / C64::new(n as f64, 0.0);
    let centred = &a - DMatrix::<C64>::identity(n, n) * mu;
    // nalgebra normalises by the matrix norm and stalls on the zero matrix.
    if centred.norm() == 0.0 {
        return vec![mu; n];
    }
    for attempt in 0..8u64 {
        let b = if attempt == 0 {
            centred.clone()
        } else {
            let q = oracle_unitary(n, attempt);
            &q * &centred * q.adjoint()
        };
        if let Some(schur) = nalgebra::linalg::Schur::try_new(b, f64::EPSILON, 10_000) {
            if let Some(v) = schur.eigenvalues() {
                return v.iter().map(|x| x + mu).collect();
            }
        }
    }
    panic!("Schur iteration did not converge on {a}");
}

/// Deterministic unitary from the QR factorisation of a pseudo-random matrix.
fn oracle_unitary(n: usize, seed: u64) -> DMatrix<C64> {
    let mut state = seed.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
    };
    let g = DMatrix::from_fn(n, n, |_, _| C64::new(next(), next()));
    g.qr().q()
}

/// Spectral norm from nalgebra's SVD.
pub fn oracle_op_norm(m: &ComplexMatrix) -> f64 {
    to_na(m).singular_values().iter().copied().fold(0.0, f64::max)
}

/// Hausdorff distance between two finite point sets in ℂ.
pub fn hausdorff(a: &[C64], b: &[C64]) -> f64 {
    fn one_way(a: &[C64], b: &[C64]) -> f64 {
        a.iter()
            .map(|x| b.iter().map(|y| (x - y).norm()).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    }
    if a.is_empty() && b.is_empty() {
        return 0.0;
    }
    one_way(a, b).max(one_way(b, a))
}

/// `‖A*A − AA*‖_F` computed with nalgebra.
pub fn oracle_normal_defect(m: &ComplexMatrix) -> f64 {
    let a = to_na(m);
    let h = a.adjoint();
    (&h * &a - &a * &h).norm()
}

pub fn frob_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    (a - b).frobenius_norm()
}

/// Log-uniform radius in `[lo, hi]`.
pub fn log_uniform<R: rand::Rng>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    (rng.gen_range(lo.ln()..=hi.ln())).exp()
}

/// Bitwise equality of complex values, treating equal NaN payloads as equal.
pub fn same_bits(a: C64, b: C64) -> bool {
    a.re.to_bits() == b.re.to_bits() && a.im.to_bits() == b.im.to_bits() || (a == b)
}
