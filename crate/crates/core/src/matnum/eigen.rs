//! Cyclic Jacobi eigensolvers.
//!
//! One kernel serves all three entry points: a family of Hermitian matrices
//! is driven to simultaneous diagonal form by complex plane rotations, each
//! chosen to minimize the combined off-diagonal mass `Σ_k offdiag(H_k)²` on
//! its `(p, q)` plane. For a single Hermitian matrix this reduces to the
//! classical complex Jacobi rotation.

use alloc::vec::Vec;
use core::cmp::Ordering;

#[allow(unused_imports)] // inherent when std is linked
use num_traits::Float;
use super::{check_normal, commutator_scale, ComplexMatrix, C64};
use crate::error::{Error, Result};

/// Sweep budget; exceeding it is reported as [`Error::NoConvergence`].
pub const MAX_SWEEPS: usize = 40;

// Rotations are skipped once the (p, q) off-diagonal mass or the rotation
// itself is below these, relative to unit-normalized inputs.
const OFF_EPS: f64 = 1e-15;
const ANGLE_EPS: f64 = 1e-14;

/// Eigenvalues together with a unitary matrix whose columns are eigenvectors.
#[derive(Debug, Clone, PartialEq)]
pub struct EigResult {
    pub eigenvalues: Vec<C64>,
    pub basis: ComplexMatrix,
}

impl EigResult {
    /// `basis · diag(eigenvalues) · basis*`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        reassemble(&self.basis, &self.eigenvalues)
    }

    /// `‖basis*·basis − I‖_F`.
    pub fn unitarity_defect(&self) -> f64 {
        let n = self.basis.dim();
        (&(&self.basis.adjoint() * &self.basis) - &ComplexMatrix::identity(n)).frobenius_norm()
    }
}

/// A shared unitary basis and, per basis vector, the tuple of diagonal
/// entries of every input in that basis.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDiag {
    pub basis: ComplexMatrix,
    /// `values[k][j]` is the `k`-th diagonal entry of input `j`.
    pub values: Vec<Vec<C64>>,
}

impl JointDiag {
    /// Reconstruction of input `j` from the shared basis.
    pub fn reconstruct(&self, j: usize) -> ComplexMatrix {
        let diag: Vec<C64> = self.values.iter().map(|t| t[j]).collect();
        reassemble(&self.basis, &diag)
    }
}

fn reassemble(basis: &ComplexMatrix, diag: &[C64]) -> ComplexMatrix {
    let n = basis.dim();
    ComplexMatrix::from_fn(n, |i, j| {
        (0..n)
            .map(|k| basis[(i, k)] * diag[k] * basis[(j, k)].conj())
            .sum()
    })
}

/// Eigendecomposition of a Hermitian matrix. Eigenvalues are real (imaginary
/// parts exactly zero) and sorted descending.
pub fn hermitian_eigendecompose(a: &ComplexMatrix, tol: f64) -> Result<EigResult> {
    let residual = a.hermitian_defect();
    if residual > tol * a.frobenius_norm().max(1.0) {
        return Err(Error::NotHermitian { residual });
    }
    let h = a.hermitian_part();
    let mut family = normalized(core::slice::from_ref(&h));
    let v = jacobi_joint(a.dim(), &mut family)?;
    let diag = rayleigh_diagonal(&v, &h);
    let values: Vec<C64> = diag.iter().map(|z| C64::new(z.re, 0.0)).collect();
    Ok(sorted(values, v))
}

/// Eigendecomposition of a normal matrix through the simultaneous
/// diagonalization of its Hermitian parts `(A + A*)/2` and `(A − A*)/(2i)`.
/// Eigenvalues are sorted descending by real part, then imaginary part.
pub fn normal_eigendecompose(a: &ComplexMatrix, tol: f64) -> Result<EigResult> {
    check_normal(a, tol)?;
    let mut family = hermitian_family(core::slice::from_ref(a));
    let v = jacobi_joint(a.dim(), &mut family)?;
    let values = rayleigh_diagonal(&v, a);
    Ok(sorted(values, v))
}

/// One unitary basis diagonalizing a commuting family of normal matrices.
///
/// The basis columns keep the order the rotations leave them in; an input
/// that is already jointly diagonal yields the identity basis.
pub fn joint_diagonalize(mats: &[ComplexMatrix], tol: f64) -> Result<JointDiag> {
    let Some(first) = mats.first() else {
        return Err(Error::Invalid("joint_diagonalize needs at least one matrix"));
    };
    let n = first.dim();
    for m in mats {
        if m.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: m.dim(),
            });
        }
    }
    for m in mats {
        check_normal(m, tol)?;
    }
    for j in 0..mats.len() {
        for k in j + 1..mats.len() {
            let residual = mats[j].commutator(&mats[k]).frobenius_norm();
            if residual > tol * commutator_scale(&mats[j], &mats[k]) {
                return Err(Error::NotCommuting {
                    first: j,
                    second: k,
                    residual,
                });
            }
        }
    }
    let mut family = hermitian_family(mats);
    let mut v = jacobi_joint(n, &mut family)?;
    normalize_phases(&mut v);
    let diags: Vec<Vec<C64>> = mats.iter().map(|m| rayleigh_diagonal(&v, m)).collect();
    let values = (0..n)
        .map(|k| diags.iter().map(|d| d[k]).collect())
        .collect();
    Ok(JointDiag { basis: v, values })
}

/// Hermitian parts of each input, each input first scaled to unit Frobenius
/// norm. Inputs far below the largest one are not blown up to unit size so
/// that rounding noise cannot steer the rotations.
fn hermitian_family(mats: &[ComplexMatrix]) -> Vec<ComplexMatrix> {
    let big = mats.iter().map(ComplexMatrix::frobenius_norm).fold(0.0, f64::max);
    let mut out = Vec::with_capacity(2 * mats.len());
    for m in mats {
        let norm = m.frobenius_norm().max(1e-6 * big);
        if norm == 0.0 {
            continue;
        }
        let s = m.scale_real(1.0 / norm);
        let h1 = s.hermitian_part();
        let h2 = s.skew_part();
        if h1.frobenius_norm() > 0.0 {
            out.push(h1);
        }
        if h2.frobenius_norm() > 0.0 {
            out.push(h2);
        }
    }
    out
}

fn normalized(mats: &[ComplexMatrix]) -> Vec<ComplexMatrix> {
    mats.iter()
        .filter(|m| m.frobenius_norm() > 0.0)
        .map(|m| m.scale_real(1.0 / m.frobenius_norm()))
        .collect()
}

/// Diagonal of `V* A V`.
fn rayleigh_diagonal(v: &ComplexMatrix, a: &ComplexMatrix) -> Vec<C64> {
    let n = v.dim();
    (0..n)
        .map(|k| {
            let col = v.column(k);
            let av = a.mul_vec(&col);
            col.iter().zip(&av).map(|(x, y)| x.conj() * y).sum()
        })
        .collect()
}

fn sorted(values: Vec<C64>, v: ComplexMatrix) -> EigResult {
    let n = values.len();
    // Real parts are compared on a grid so that rounding noise in a
    // conjugate pair does not decide the order.
    let grid = 1e-10 * values.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let key = |z: C64| (z.re / grid).round();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        let (a, b) = (values[i], values[j]);
        key(b)
            .partial_cmp(&key(a))
            .unwrap_or(Ordering::Equal)
            .then(b.im.partial_cmp(&a.im).unwrap_or(Ordering::Equal))
    });
    let mut basis = ComplexMatrix::from_fn(n, |i, k| v[(i, order[k])]);
    normalize_phases(&mut basis);
    EigResult {
        eigenvalues: order.iter().map(|&i| values[i]).collect(),
        basis,
    }
}

/// Rotates each column so that its first largest-modulus entry is real and
/// positive.
fn normalize_phases(v: &mut ComplexMatrix) {
    let n = v.dim();
    for k in 0..n {
        let max = (0..n).map(|i| v[(i, k)].norm()).fold(0.0, f64::max);
        if max == 0.0 {
            continue;
        }
        let Some(lead) = (0..n).find(|&i| v[(i, k)].norm() >= max * (1.0 - 1e-9)) else {
            continue;
        };
        let z = v[(lead, k)];
        let phase = z.conj() / z.norm();
        for i in 0..n {
            v[(i, k)] *= phase;
        }
    }
}

/// Drives every matrix of `family` (all Hermitian, same dimension) towards
/// diagonal form in place; returns the accumulated unitary `V` with
/// `family_k ← V* family_k V`.
fn jacobi_joint(n: usize, family: &mut [ComplexMatrix]) -> Result<ComplexMatrix> {
    let mut v = ComplexMatrix::identity(n);
    if n <= 1 || family.is_empty() {
        return Ok(v);
    }
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n - 1 {
            for q in p + 1..n {
                let off: f64 = family.iter().map(|m| m[(p, q)].norm_sqr()).sum();
                if off.sqrt() <= OFF_EPS {
                    continue;
                }
                let Some((c, s)) = joint_rotation(family, p, q) else {
                    continue;
                };
                if s.norm() <= ANGLE_EPS {
                    continue;
                }
                rotated = true;
                for m in family.iter_mut() {
                    rotate(m, p, q, c, s, true);
                }
                rotate(&mut v, p, q, c, s, false);
            }
        }
        if !rotated {
            return Ok(v);
        }
    }
    Err(Error::NoConvergence { sweeps: MAX_SWEEPS })
}

/// Optimal plane rotation `G = [[c, −s̄], [s, c]]` for the `(p, q)` plane.
///
/// Each Hermitian `M` contributes `h = (m_pp − m_qq, 2 Re m_pq, 2 Im m_pq)`;
/// the rotation is read off the dominant eigenvector `(x, y, z)` of
/// `Σ h hᵀ`, taken with `x ≥ 0` so that the rotation is the smallest one.
fn joint_rotation(family: &[ComplexMatrix], p: usize, q: usize) -> Option<(f64, C64)> {
    let mut g = [[0.0f64; 3]; 3];
    for m in family {
        let b = m[(p, q)];
        let h = [(m[(p, p)] - m[(q, q)]).re, 2.0 * b.re, 2.0 * b.im];
        for (r, hr) in h.iter().enumerate() {
            for (c, hc) in h.iter().enumerate() {
                g[r][c] += hr * hc;
            }
        }
    }
    let mut e = symmetric3_top_eigenvector(g)?;
    if e[0] < 0.0 {
        e = [-e[0], -e[1], -e[2]];
    }
    let c = ((1.0 + e[0]) * 0.5).sqrt();
    if c == 0.0 {
        return None;
    }
    let s = C64::new(e[1], -e[2]) / (2.0 * c);
    Some((c, s))
}

/// Applies `M ← G* M G`, or only `M ← M G` without `similarity`.
fn rotate(m: &mut ComplexMatrix, p: usize, q: usize, c: f64, s: C64, similarity: bool) {
    let n = m.dim();
    let sc = s.conj();
    for r in 0..n {
        let (mp, mq) = (m[(r, p)], m[(r, q)]);
        m[(r, p)] = mp * c + mq * s;
        m[(r, q)] = mq * c - mp * sc;
    }
    if similarity {
        for r in 0..n {
            let (mp, mq) = (m[(p, r)], m[(q, r)]);
            m[(p, r)] = mp * c + mq * sc;
            m[(q, r)] = mq * c - mp * s;
        }
    }
}

/// Unit eigenvector of the largest eigenvalue of a real symmetric 3×3 matrix,
/// by cyclic Jacobi.
fn symmetric3_top_eigenvector(mut a: [[f64; 3]; 3]) -> Option<[f64; 3]> {
    let mut v = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    let scale = (0..3)
        .flat_map(|i| (0..3).map(move |j| (i, j)))
        .map(|(i, j)| a[i][j].abs())
        .fold(0.0, f64::max);
    if scale == 0.0 || !scale.is_finite() {
        return None;
    }
    for _ in 0..60 {
        let off = a[0][1].abs() + a[0][2].abs() + a[1][2].abs();
        if off <= 1e-300 || off <= f64::EPSILON * 1e-3 * scale {
            break;
        }
        for (p, q) in [(0usize, 1usize), (0, 2), (1, 2)] {
            if a[p][q] == 0.0 {
                continue;
            }
            let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
            let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
            let t = if theta == 0.0 { 1.0 } else { t };
            let c = 1.0 / (t * t + 1.0).sqrt();
            let s = t * c;
            for row in a.iter_mut() {
                let (akp, akq) = (row[p], row[q]);
                row[p] = c * akp - s * akq;
                row[q] = s * akp + c * akq;
            }
            let (rp, rq) = (a[p], a[q]);
            for k in 0..3 {
                a[p][k] = c * rp[k] - s * rq[k];
                a[q][k] = s * rp[k] + c * rq[k];
            }
            for row in v.iter_mut() {
                let (vp, vq) = (row[p], row[q]);
                row[p] = c * vp - s * vq;
                row[q] = s * vp + c * vq;
            }
        }
    }
    let top = (0..3)
        .max_by(|&i, &j| a[i][i].partial_cmp(&a[j][j]).unwrap_or(Ordering::Equal))
        .unwrap_or(0);
    let e = [v[0][top], v[1][top], v[2][top]];
    let norm = (e[0] * e[0] + e[1] * e[1] + e[2] * e[2]).sqrt();
    (norm > 0.0).then(|| [e[0] / norm, e[1] / norm, e[2] / norm])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matnum::{DEFAULT_TOL, ONE, RECON_TOL, ZERO};
    use alloc::vec;
    use core::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn real(rows: &[&[f64]]) -> ComplexMatrix {
        let rows: Vec<Vec<f64>> = rows.iter().map(|r| r.to_vec()).collect();
        ComplexMatrix::from_real_rows(&rows).unwrap()
    }

    fn col_close(v: &[C64], w: &[C64], tol: f64) -> bool {
        v.iter().zip(w).all(|(a, b)| (a - b).norm() <= tol)
    }

    #[test]
    fn identity_keeps_identity_basis() {
        let r = hermitian_eigendecompose(&ComplexMatrix::identity(2), DEFAULT_TOL).unwrap();
        assert_eq!(r.eigenvalues, vec![ONE, ONE]);
        assert_eq!(r.basis, ComplexMatrix::identity(2));
    }

    #[test]
    fn diagonal_is_already_solved() {
        let r = hermitian_eigendecompose(&ComplexMatrix::real_diag(&[3.0, 1.0]), DEFAULT_TOL).unwrap();
        assert_eq!(r.eigenvalues, vec![c(3.0, 0.0), c(1.0, 0.0)]);
        assert_eq!(r.basis, ComplexMatrix::identity(2));
    }

    #[test]
    fn two_by_two_symmetric() {
        let r = hermitian_eigendecompose(&real(&[&[2.0, 1.0], &[1.0, 2.0]]), DEFAULT_TOL).unwrap();
        assert!((r.eigenvalues[0].re - 3.0).abs() < 1e-14);
        assert!((r.eigenvalues[1].re - 1.0).abs() < 1e-14);
        assert_eq!(r.eigenvalues[0].im, 0.0);
        let h = FRAC_1_SQRT_2;
        assert!(col_close(&r.basis.column(0), &[c(h, 0.0), c(h, 0.0)], 1e-14));
        assert!(col_close(&r.basis.column(1), &[c(h, 0.0), c(-h, 0.0)], 1e-14));
    }

    #[test]
    fn rejects_non_hermitian() {
        let a = real(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(matches!(
            hermitian_eigendecompose(&a, DEFAULT_TOL),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn normal_diagonal() {
        let r = normal_eigendecompose(&ComplexMatrix::diag(&[c(0.0, 1.0), c(2.0, 0.0)]), DEFAULT_TOL)
            .unwrap();
        // descending by real part puts 2 first
        assert_eq!(r.eigenvalues, vec![c(2.0, 0.0), c(0.0, 1.0)]);
        assert!(col_close(&r.basis.column(0), &[ZERO, ONE], 0.0));
        assert!(col_close(&r.basis.column(1), &[ONE, ZERO], 0.0));
    }

    #[test]
    fn normal_rotation_has_plus_minus_i() {
        let a = real(&[&[0.0, 1.0], &[-1.0, 0.0]]);
        let r = normal_eigendecompose(&a, DEFAULT_TOL).unwrap();
        assert!((r.eigenvalues[0] - c(0.0, 1.0)).norm() < 1e-14);
        assert!((r.eigenvalues[1] - c(0.0, -1.0)).norm() < 1e-14);
        assert!((&r.reconstruct() - &a).frobenius_norm() < 1e-14);
    }

    #[test]
    fn zero_matrix_keeps_its_dimension() {
        let z = ComplexMatrix::zeros(3);
        let h = hermitian_eigendecompose(&z, DEFAULT_TOL).unwrap();
        assert_eq!(h.eigenvalues.len(), 3);
        assert_eq!(h.basis, ComplexMatrix::identity(3));
        assert_eq!(normal_eigendecompose(&z, DEFAULT_TOL).unwrap().eigenvalues.len(), 3);
        let j = joint_diagonalize(&[z.clone(), z], DEFAULT_TOL).unwrap();
        assert_eq!(j.values.len(), 3);
    }

    #[test]
    fn nilpotent_is_not_normal() {
        let a = real(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(matches!(
            normal_eigendecompose(&a, DEFAULT_TOL),
            Err(Error::NotNormal { .. })
        ));
    }

    #[test]
    fn joint_of_diagonals_is_identity() {
        let j = joint_diagonalize(
            &[ComplexMatrix::real_diag(&[1.0, 2.0]), ComplexMatrix::real_diag(&[3.0, 4.0])],
            DEFAULT_TOL,
        )
        .unwrap();
        assert_eq!(j.basis, ComplexMatrix::identity(2));
        assert_eq!(
            j.values,
            vec![vec![c(1.0, 0.0), c(3.0, 0.0)], vec![c(2.0, 0.0), c(4.0, 0.0)]]
        );
    }

    #[test]
    fn joint_shared_eigenvectors() {
        let a = real(&[&[2.0, 1.0], &[1.0, 2.0]]);
        let b = real(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let j = joint_diagonalize(&[a.clone(), b.clone()], DEFAULT_TOL).unwrap();
        let h = FRAC_1_SQRT_2;
        for k in 0..2 {
            let col = j.basis.column(k);
            let t = &j.values[k];
            if (t[0].re - 3.0).abs() < 1e-12 {
                assert!((t[1] - ONE).norm() < 1e-12);
                assert!(col_close(&col, &[c(h, 0.0), c(h, 0.0)], 1e-12));
            } else {
                assert!((t[0] - ONE).norm() < 1e-12);
                assert!((t[1] + ONE).norm() < 1e-12);
                assert!(col_close(&col, &[c(h, 0.0), c(-h, 0.0)], 1e-12));
            }
        }
        assert!((&j.reconstruct(0) - &a).frobenius_norm() < RECON_TOL);
        assert!((&j.reconstruct(1) - &b).frobenius_norm() < RECON_TOL);
    }

    #[test]
    fn joint_rejects_noncommuting_pair() {
        let err = joint_diagonalize(
            &[ComplexMatrix::real_diag(&[1.0, 2.0]), real(&[&[0.0, 1.0], &[1.0, 0.0]])],
            DEFAULT_TOL,
        )
        .unwrap_err();
        assert!(matches!(err, Error::NotCommuting { first: 0, second: 1, .. }));
    }

    #[test]
    fn complex_hermitian_three_by_three() {
        let a = ComplexMatrix::from_rows(&[
            vec![c(2.0, 0.0), c(1.0, -1.0), c(0.0, 0.5)],
            vec![c(1.0, 1.0), c(-1.0, 0.0), c(0.25, 0.0)],
            vec![c(0.0, -0.5), c(0.25, 0.0), c(0.5, 0.0)],
        ])
        .unwrap();
        let r = hermitian_eigendecompose(&a, DEFAULT_TOL).unwrap();
        assert!(r.unitarity_defect() < 3e-12);
        assert!((&r.reconstruct() - &a).frobenius_norm() < 1e-10);
        assert!(r.eigenvalues.windows(2).all(|w| w[0].re >= w[1].re));
        // trace is preserved
        let tr: f64 = r.eigenvalues.iter().map(|z| z.re).sum();
        assert!((tr - 1.5).abs() < 1e-13);
    }
}
