//! Dense complex matrix kernel.
//!
//! [`ComplexMatrix`] is the carrier for every finite-dimensional operator in
//! the crate. Storage is row-major. The eigensolvers in [`eigen`] are cyclic
//! Jacobi sweeps; normal matrices are handled by diagonalizing their real and
//! imaginary Hermitian parts simultaneously.

mod eigen;

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

#[allow(unused_imports)] // inherent when std is linked
use num_traits::Float;
use crate::error::{Error, Result};

pub use eigen::{
    hermitian_eigendecompose, joint_diagonalize, normal_eigendecompose, EigResult, JointDiag,
    MAX_SWEEPS,
};

/// Complex double.
pub type C64 = num_complex::Complex<f64>;

/// Default relative tolerance for structural checks (Hermitian, normal,
/// commuting).
pub const DEFAULT_TOL: f64 = 1e-9;

/// Relative reconstruction tolerance for eigendecompositions.
pub const RECON_TOL: f64 = 1e-8;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

/// Dense square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::scalar(dim, ONE)
    }

    pub fn scalar(dim: usize, c: C64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = c;
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    /// Builds a matrix from rows; every row must have the same length as the
    /// number of rows and every entry must be finite.
    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::Invalid("matrix must have at least one row"));
        }
        let mut data = Vec::with_capacity(dim * dim);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: row.len(),
                });
            }
            for (j, &z) in row.iter().enumerate() {
                if !z.re.is_finite() || !z.im.is_finite() {
                    return Err(Error::NonFinite { row: i, col: j });
                }
                data.push(z);
            }
        }
        Ok(Self { dim, data })
    }

    /// Real matrix from rows of doubles.
    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let rows: Vec<Vec<C64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| C64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn diag(values: &[C64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    pub fn real_diag(values: &[f64]) -> Self {
        let v: Vec<C64> = values.iter().map(|&x| C64::new(x, 0.0)).collect();
        Self::diag(&v)
    }

    /// `|v⟩⟨w|`.
    pub fn outer(v: &[C64], w: &[C64]) -> Self {
        debug_assert_eq!(v.len(), w.len());
        Self::from_fn(v.len(), |i, j| v[i] * w[j].conj())
    }

    /// Matrix with the given columns.
    pub fn from_columns(cols: &[Vec<C64>]) -> Result<Self> {
        let dim = cols.len();
        if cols.iter().any(|c| c.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: cols.iter().map(Vec::len).find(|&l| l != dim).unwrap_or(0),
            });
        }
        Ok(Self::from_fn(dim, |i, j| cols[j][i]))
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.dim).map(|i| self[(i, j)]).collect()
    }

    pub fn rows(&self) -> Vec<Vec<C64>> {
        (0..self.dim).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn diagonal(&self) -> Vec<C64> {
        (0..self.dim).map(|i| self[(i, i)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)])
    }

    pub fn scale(&self, c: C64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&z| z * c).collect(),
        }
    }

    pub fn scale_real(&self, c: f64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&z| z * c).collect(),
        }
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// True when every imaginary part is exactly zero.
    pub fn is_real(&self) -> bool {
        self.data.iter().all(|z| z.im == 0.0)
    }

    pub fn mul_vec(&self, x: &[C64]) -> Vec<C64> {
        debug_assert_eq!(x.len(), self.dim);
        (0..self.dim)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `AB − BA`.
    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    /// `‖A − A*‖_F`.
    pub fn hermitian_defect(&self) -> f64 {
        (self - &self.adjoint()).frobenius_norm()
    }

    /// `‖A*A − AA*‖_F`.
    pub fn normal_defect(&self) -> f64 {
        let adj = self.adjoint();
        (&adj * self - self * &adj).frobenius_norm()
    }

    /// `(A + A*)/2`.
    pub fn hermitian_part(&self) -> Self {
        (self + &self.adjoint()).scale_real(0.5)
    }

    /// `(A − A*)/(2i)`, so that `A = H₁ + i·H₂`.
    pub fn skew_part(&self) -> Self {
        (self - &self.adjoint()).scale(C64::new(0.0, -0.5))
    }

    /// Largest singular value, via the Hermitian eigendecomposition of `A*A`.
    pub fn op_norm(&self) -> Result<f64> {
        let gram = (&self.adjoint() * self).hermitian_part();
        let eig = hermitian_eigendecompose(&gram, DEFAULT_TOL)?;
        Ok(eig
            .eigenvalues
            .first()
            .map(|l| l.re.max(0.0).sqrt())
            .unwrap_or(0.0))
    }

    /// Inverse by Gauss–Jordan elimination with partial pivoting.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.dim;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        let scale = self.frobenius_norm().max(f64::MIN_POSITIVE);
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&x, &y| {
                    a[(x, col)]
                        .norm()
                        .partial_cmp(&a[(y, col)].norm())
                        .unwrap_or(core::cmp::Ordering::Equal)
                })
                .unwrap_or(col);
            if a[(pivot, col)].norm() <= 1e-14 * scale {
                return Err(Error::NotInvertible);
            }
            if pivot != col {
                a.swap_rows(pivot, col);
                inv.swap_rows(pivot, col);
            }
            let p = a[(col, col)].inv();
            for j in 0..n {
                a[(col, j)] *= p;
                inv[(col, j)] *= p;
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let factor = a[(r, col)];
                if factor == ZERO {
                    continue;
                }
                for j in 0..n {
                    let (ac, ic) = (a[(col, j)], inv[(col, j)]);
                    a[(r, j)] -= factor * ac;
                    inv[(r, j)] -= factor * ic;
                }
            }
        }
        Ok(inv)
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        for k in 0..self.dim {
            self.data.swap(i * self.dim + k, j * self.dim + k);
        }
    }

    /// Restores an approximate orthogonal projection: symmetrize, then one
    /// Newton step `P ← 3P² − 2P³`.
    pub fn clean_projection(&self) -> Self {
        let p = self.hermitian_part();
        let p2 = &p * &p;
        let p3 = &p2 * &p;
        (&p2.scale_real(3.0) - &p3.scale_real(2.0)).hermitian_part()
    }

    /// `max(‖P² − P‖_F, ‖P* − P‖_F)`.
    pub fn projection_defect(&self) -> f64 {
        let idem = (&(self * self) - self).frobenius_norm();
        idem.max(self.hermitian_defect())
    }
}

/// True when `‖AB − BA‖_F ≤ tol·max(1, ‖A‖_F‖B‖_F)`.
pub fn commute_within(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) -> bool {
    a.commutator(b).frobenius_norm() <= tol * commutator_scale(a, b)
}

pub(crate) fn commutator_scale(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    (a.frobenius_norm() * b.frobenius_norm()).max(1.0)
}

pub(crate) fn check_normal(a: &ComplexMatrix, tol: f64) -> Result<()> {
    let residual = a.normal_defect();
    let norm = a.frobenius_norm();
    if residual <= tol * (norm * norm).max(1.0) {
        Ok(())
    } else {
        Err(Error::NotNormal { residual })
    }
}

/// Horner evaluation of `Σ coeffs[j]·A^j`.
pub fn matrix_poly_eval(coeffs: &[C64], a: &ComplexMatrix) -> ComplexMatrix {
    let n = a.dim();
    let mut acc = ComplexMatrix::zeros(n);
    for &c in coeffs.iter().rev() {
        acc = &(&acc * a) + &ComplexMatrix::scalar(n, c);
    }
    acc
}

/// Hermitian inner product `⟨x, y⟩ = Σ x_i·conj(y_i)`.
pub fn inner(x: &[C64], y: &[C64]) -> C64 {
    x.iter().zip(y).map(|(a, b)| a * b.conj()).sum()
}

pub fn vec_norm(x: &[C64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.dim + j]
    }
}

impl<'a> Add<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in add");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> Sub<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in sub");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Sub for ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: ComplexMatrix) -> ComplexMatrix {
        &self - &rhs
    }
}

impl Add for ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: ComplexMatrix) -> ComplexMatrix {
        &self + &rhs
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        self.scale_real(-1.0)
    }
}

impl<'a> Mul<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in mul");
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                let rrow = &rhs.data[k * n..(k + 1) * n];
                let orow = &mut out.data[i * n..(i + 1) * n];
                for (o, b) in orow.iter_mut().zip(rrow) {
                    *o += a * b;
                }
            }
        }
        out
    }
}

impl Mul for ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: ComplexMatrix) -> ComplexMatrix {
        &self * &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn poly_constant_gives_scalar_identity() {
        let a = ComplexMatrix::from_real_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        assert_eq!(matrix_poly_eval(&[c(5.0, 0.0)], &a), ComplexMatrix::scalar(2, c(5.0, 0.0)));
    }

    #[test]
    fn poly_identity_gives_matrix() {
        let a = ComplexMatrix::from_rows(&[vec![c(1.0, 1.0), c(2.0, 0.0)], vec![c(0.0, 3.0), c(4.0, -1.0)]])
            .unwrap();
        assert_eq!(matrix_poly_eval(&[ZERO, ONE], &a), a);
    }

    #[test]
    fn one_plus_z_squared_annihilates_rotation() {
        let a = ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![-1.0, 0.0]]).unwrap();
        let p = matrix_poly_eval(&[ONE, ZERO, ONE], &a);
        assert_eq!(p.frobenius_norm(), 0.0);
    }

    #[test]
    fn rejects_ragged_and_nonfinite_rows() {
        assert!(matches!(
            ComplexMatrix::from_real_rows(&[vec![1.0, 2.0], vec![3.0]]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            ComplexMatrix::from_real_rows(&[vec![f64::NAN]]),
            Err(Error::NonFinite { row: 0, col: 0 })
        ));
    }

    #[test]
    fn inverse_round_trip() {
        let a = ComplexMatrix::from_rows(&[
            vec![c(2.0, 1.0), c(0.5, 0.0), c(0.0, -1.0)],
            vec![c(0.0, 0.0), c(1.0, 0.0), c(3.0, 0.0)],
            vec![c(1.0, 0.0), c(0.0, 2.0), c(1.0, 1.0)],
        ])
        .unwrap();
        let inv = a.inverse().unwrap();
        let resid = (&(&a * &inv) - &ComplexMatrix::identity(3)).frobenius_norm();
        assert!(resid < 1e-13, "{resid}");
        let singular = ComplexMatrix::from_real_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]).unwrap();
        assert_eq!(singular.inverse(), Err(Error::NotInvertible));
    }

    #[test]
    fn op_norm_of_diagonal() {
        let a = ComplexMatrix::diag(&[c(1.0, 0.0), c(0.0, -3.0)]);
        assert!((a.op_norm().unwrap() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn hermitian_and_skew_parts_reassemble() {
        let a = ComplexMatrix::from_rows(&[vec![c(1.0, 2.0), c(3.0, -1.0)], vec![c(0.5, 0.5), c(-2.0, 0.0)]])
            .unwrap();
        let h1 = a.hermitian_part();
        let h2 = a.skew_part();
        assert!(h1.hermitian_defect() < 1e-15);
        assert!(h2.hermitian_defect() < 1e-15);
        let back = &h1 + &h2.scale(c(0.0, 1.0));
        assert!((&back - &a).frobenius_norm() < 1e-15);
    }
}
