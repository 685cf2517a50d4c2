//! Continuous calculus of a Hermitian matrix by Chebyshev interpolation.
//!
//! `f` is interpolated at first-kind Chebyshev nodes on an interval
//! `[a, b]` enclosing the spectrum, and the interpolant is evaluated on the
//! matrix with the Clenshaw recurrence. Since `‖p(A)‖ ≤ sup_{[a,b]} |p|`,
//! the matrix error is bounded by the scalar sup-norm error.

use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)] // inherent when std is linked
use num_traits::Float;

use crate::error::{Error, Result};
use crate::funcexpr::FuncExpr;
use crate::matnum::{hermitian_eigendecompose, ComplexMatrix, C64, DEFAULT_TOL};

/// Equispaced points of the sup-norm grid.
pub const GRID_POINTS: usize = 1000;

#[derive(Debug, Clone, PartialEq)]
pub struct ChebResult {
    pub matrix: ComplexMatrix,
    /// Chebyshev coefficients `c_0, …, c_k` (with `c_0` halved).
    pub coeffs: Vec<C64>,
    pub interval: (f64, f64),
    pub degree: usize,
    /// `max |p − f|` over the grid and the eigenvalues of `A`.
    pub grid_error: f64,
}

/// Chebyshev coefficients of the degree-`k` interpolant of `f` on `[a, b]`.
pub fn cheb_coefficients(f: &FuncExpr, a: f64, b: f64, k: usize) -> Vec<C64> {
    let m = k + 1;
    let values: Vec<C64> = (0..m)
        .map(|j| {
            let x = (PI * (j as f64 + 0.5) / m as f64).cos();
            f.eval1(C64::new(0.5 * (b - a) * x + 0.5 * (b + a), 0.0))
        })
        .collect();
    (0..m)
        .map(|r| {
            let s: C64 = values
                .iter()
                .enumerate()
                .map(|(j, v)| v * (PI * r as f64 * (j as f64 + 0.5) / m as f64).cos())
                .sum();
            let c = s * (2.0 / m as f64);
            if r == 0 {
                c * 0.5
            } else {
                c
            }
        })
        .collect()
}

/// `Σ c_r T_r(x̂)` at a real point, `x̂` the image of `x` in `[-1, 1]`.
pub fn cheb_eval(coeffs: &[C64], a: f64, b: f64, x: f64) -> C64 {
    let xh = (2.0 * x - (a + b)) / (b - a);
    let mut b1 = C64::new(0.0, 0.0);
    let mut b2 = C64::new(0.0, 0.0);
    for &c in coeffs.iter().skip(1).rev() {
        let b0 = c + b1 * (2.0 * xh) - b2;
        b2 = b1;
        b1 = b0;
    }
    coeffs.first().copied().unwrap_or_default() + b1 * xh - b2
}

/// Clenshaw recurrence on a matrix already mapped to `[-1, 1]`.
fn clenshaw_matrix(coeffs: &[C64], ah: &ComplexMatrix) -> ComplexMatrix {
    let n = ah.dim();
    let two_ah = ah.scale_real(2.0);
    let mut b1 = ComplexMatrix::zeros(n);
    let mut b2 = ComplexMatrix::zeros(n);
    for &c in coeffs.iter().skip(1).rev() {
        let b0 = &(&(&two_ah * &b1) - &b2) + &ComplexMatrix::scalar(n, c);
        b2 = b1;
        b1 = b0;
    }
    let c0 = coeffs.first().copied().unwrap_or_default();
    &(&ComplexMatrix::scalar(n, c0) + &(ah * &b1)) - &b2
}

/// `p_k(A)` for the Chebyshev interpolant `p_k` of `f` on
/// `[λ_min − δ, λ_max + δ]`, `δ = 1e-6·max(1, |λ|_max)`. With a `target`,
/// a grid error above it is [`Error::DegreeTooSmall`].
pub fn cheb_apply(a: &ComplexMatrix, f: &FuncExpr, k: usize, target: Option<f64>) -> Result<ChebResult> {
    if f.arity() != 1 {
        return Err(Error::Arity {
            expected: 1,
            found: f.arity(),
        });
    }
    let eig = hermitian_eigendecompose(a, DEFAULT_TOL)?;
    let values: Vec<f64> = eig.eigenvalues.iter().map(|l| l.re).collect();
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let delta = 1e-6 * hi.abs().max(lo.abs()).max(1.0);
    let (lo, hi) = (lo - delta, hi + delta);

    let coeffs = cheb_coefficients(f, lo, hi, k);
    let n = a.dim();
    let h = a.hermitian_part();
    let ah = (&h.scale_real(2.0) - &ComplexMatrix::identity(n).scale_real(lo + hi)).scale_real(1.0 / (hi - lo));
    let matrix = clenshaw_matrix(&coeffs, &ah);

    let grid = (0..GRID_POINTS).map(|i| lo + (hi - lo) * i as f64 / (GRID_POINTS - 1) as f64);
    let grid_error = grid
        .chain(values.iter().copied())
        .map(|x| (cheb_eval(&coeffs, lo, hi, x) - f.eval1(C64::new(x, 0.0))).norm())
        .fold(0.0, f64::max);
    if let Some(target) = target {
        if grid_error > target {
            return Err(Error::DegreeTooSmall {
                error: grid_error,
                target,
            });
        }
    }
    Ok(ChebResult {
        matrix,
        coeffs,
        interval: (lo, hi),
        degree: k,
        grid_error,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use crate::calculus::BorelCalculus;
    use crate::funcexpr::parse_expr;

    #[test]
    fn exp_of_zero() {
        let r = cheb_apply(&ComplexMatrix::zeros(1), &FuncExpr::z().exp(), 8, None).unwrap();
        assert!((r.matrix[(0, 0)] - 1.0).norm() < 1e-14);
    }

    #[test]
    fn exp_of_diagonal() {
        let a = ComplexMatrix::real_diag(&[-1.0, 1.0]);
        let r = cheb_apply(&a, &FuncExpr::z().exp(), 20, None).unwrap();
        let e = 1f64.exp();
        let want = ComplexMatrix::real_diag(&[1.0 / e, e]);
        assert!((&r.matrix - &want).frobenius_norm() < 1e-10);
    }

    #[test]
    fn square_is_reproduced() {
        let a = ComplexMatrix::from_real_rows(&[vec![2.0, 1.0, 0.0], vec![1.0, -1.0, 0.5], vec![0.0, 0.5, 0.3]]).unwrap();
        let sq = parse_expr("z^2", 1).unwrap();
        for k in [2, 3, 7] {
            let r = cheb_apply(&a, &sq, k, None).unwrap();
            assert!((&r.matrix - &(&a * &a)).frobenius_norm() < 1e-12, "k = {k}");
        }
    }

    #[test]
    fn contractive_bound() {
        let a = ComplexMatrix::from_real_rows(&[vec![0.2, 0.3], vec![0.3, -0.6]]).unwrap();
        let f = parse_expr("abs(z)", 1).unwrap();
        let phi = BorelCalculus::from_normal(&a).unwrap();
        let exact = phi.apply(&f).unwrap();
        for k in [8, 16, 32] {
            let r = cheb_apply(&a, &f, k, None).unwrap();
            let err = (&r.matrix - &exact).op_norm().unwrap();
            assert!(err <= r.grid_error + 1e-8);
        }
    }

    #[test]
    fn degree_too_small() {
        let a = ComplexMatrix::real_diag(&[-1.0, 1.0]);
        let f = parse_expr("abs(z)", 1).unwrap();
        assert!(matches!(cheb_apply(&a, &f, 4, Some(1e-6)), Err(Error::DegreeTooSmall { .. })));
        let rot = ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![-1.0, 0.0]]).unwrap();
        assert!(matches!(cheb_apply(&rot, &f, 4, None), Err(Error::NotHermitian { .. })));
    }
}
