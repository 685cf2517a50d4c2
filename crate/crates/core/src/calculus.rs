//! Borel calculi backed by finite projection-valued measures.
//!
//! `Φ(f) = Σ_i f(λ_i)·P_i` over the atoms `(λ_i, P_i)` of a [`Pvm`]. The
//! axioms (MFC1)–(MFC5) are checked by [`verify_mfc_axioms`], which works
//! with any [`FunctionalCalculus`] so that deliberately broken maps can be
//! audited too.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)] // inherent when std is linked
use num_traits::Float;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::funcexpr::FuncExpr;
use crate::matnum::{hermitian_eigendecompose, joint_diagonalize, ComplexMatrix, C64, DEFAULT_TOL};
use crate::pvm::{
    default_cluster_delta, pvm_from_eigenbasis, pvm_from_normal, pvm_pushforward, verify_pvm_axioms, Atom, Pvm,
};
use crate::sample::{random_func_expr, Region};

/// Tolerance on the axiom residuals, relative to the sup-norm scale of the
/// functions involved.
pub const MFC_TOL: f64 = 1e-9;

/// Agreement tolerance of [`calculi_agree`].
pub const AGREE_TOL: f64 = 1e-8;

/// Number of random functions in the agreement audit.
pub const AUDIT_SIZE: usize = 50;

/// Seed of the agreement audit.
pub const AUDIT_SEED: u64 = 0x5eed_ca1c;

/// A map `f ↦ Φ(f)` from Borel functions on `ℂ^d` to operators on `ℂ^dim`.
pub trait FunctionalCalculus {
    fn dim(&self) -> usize;
    fn arity(&self) -> usize;
    fn apply(&self, f: &FuncExpr) -> Result<ComplexMatrix>;
    /// Points carrying the calculus; sup norms and convergence are measured
    /// there.
    fn spectral_points(&self) -> Vec<Vec<C64>>;
}

#[derive(Debug, Clone, PartialEq)]
pub struct BorelCalculus {
    pvm: Pvm,
}

impl BorelCalculus {
    /// Wraps a PVM after checking its axioms.
    pub fn from_pvm(pvm: Pvm) -> Result<Self> {
        let report = verify_pvm_axioms(&pvm);
        if !report.passed() {
            return Err(Error::NotProjection {
                residual: report.max_residual(),
            });
        }
        Ok(Self { pvm })
    }

    /// The calculus of a normal matrix, with default eigenvalue clustering.
    pub fn from_normal(a: &ComplexMatrix) -> Result<Self> {
        Self::from_pvm(pvm_from_normal(a, None)?)
    }

    pub fn pvm(&self) -> &Pvm {
        &self.pvm
    }

    pub fn into_pvm(self) -> Pvm {
        self.pvm
    }

    pub fn atoms(&self) -> &[Atom] {
        self.pvm.atoms()
    }

    /// `Σ f(λ_i)·P_i`.
    pub fn apply(&self, f: &FuncExpr) -> Result<ComplexMatrix> {
        self.check_arity(f)?;
        let mut acc = ComplexMatrix::zeros(self.pvm.dim());
        for a in self.atoms() {
            acc = &acc + &a.proj.scale(f.eval(&a.point));
        }
        Ok(acc)
    }

    /// `max_i |f(λ_i)|`.
    pub fn sup_on_atoms(&self, f: &FuncExpr) -> Result<f64> {
        self.check_arity(f)?;
        Ok(self
            .atoms()
            .iter()
            .map(|a| f.eval(&a.point).norm())
            .fold(0.0, f64::max))
    }

    fn check_arity(&self, f: &FuncExpr) -> Result<()> {
        if f.arity() == self.pvm.d() {
            Ok(())
        } else {
            Err(Error::Arity {
                expected: self.pvm.d(),
                found: f.arity(),
            })
        }
    }
}

impl FunctionalCalculus for BorelCalculus {
    fn dim(&self) -> usize {
        self.pvm.dim()
    }

    fn arity(&self) -> usize {
        self.pvm.d()
    }

    fn apply(&self, f: &FuncExpr) -> Result<ComplexMatrix> {
        BorelCalculus::apply(self, f)
    }

    fn spectral_points(&self) -> Vec<Vec<C64>> {
        self.atoms().iter().map(|a| a.point.clone()).collect()
    }
}

/// `Φ(f)`.
pub fn apply_fn(phi: &BorelCalculus, f: &FuncExpr) -> Result<ComplexMatrix> {
    phi.apply(f)
}

/// A finite bp-convergent sequence: `terms[n] → limit` pointwise with
/// `|terms[n]| ≤ bound`.
#[derive(Debug, Clone, PartialEq)]
pub struct BpSequence {
    pub terms: Vec<FuncExpr>,
    pub limit: FuncExpr,
    pub bound: f64,
}

impl BpSequence {
    /// `clamp(f, r_n)` for the given radii, converging to `f` once `r_n`
    /// exceeds `sup |f|`.
    pub fn clamps(f: &FuncExpr, radii: &[f64]) -> Result<Self> {
        let terms = radii.iter().map(|&r| f.clamp(r)).collect::<Result<Vec<_>>>()?;
        let bound = radii.iter().copied().fold(0.0, f64::max);
        Ok(Self {
            terms,
            limit: f.clone(),
            bound,
        })
    }
}

/// Measured residuals of (MFC1)–(MFC5). Each residual is divided by the
/// sup-norm scale of the functions involved, floored at 1.
#[derive(Debug, Clone, PartialEq)]
pub struct MfcReport {
    /// `‖Φ(1) − I‖_F`.
    pub mfc1: f64,
    /// Additivity `Φ(f) + Φ(g) = Φ(f + g)` and homogeneity `cΦ(f) = Φ(cf)`.
    pub mfc2: f64,
    /// Multiplicativity `Φ(f)Φ(g) = Φ(fg)`.
    pub mfc3: f64,
    /// Adjoint law `Φ(f)* = Φ(conj f)`.
    pub mfc4_adjoint: f64,
    /// Excess of `‖Φ(f)‖₂` over `sup |f|` on the spectral points.
    pub mfc4_norm: f64,
    /// `‖Φ(f_n) − Φ(f)‖_F` at the last index of each sequence.
    pub mfc5: f64,
    /// Some supplied sequence exceeds its declared bound at a spectral
    /// point, or does not reach its limit there.
    pub mfc5_precondition_failed: bool,
    pub functions: usize,
    pub sequences: usize,
    pub tol: f64,
}

impl MfcReport {
    /// (MFC5) is certified only for the supplied sequences.
    pub const MFC5_SCOPE: &'static str = "MFC5 certified on the supplied sequences only";

    pub fn mfc1_ok(&self) -> bool {
        self.mfc1 <= self.tol
    }

    pub fn mfc2_ok(&self) -> bool {
        self.mfc2 <= self.tol
    }

    pub fn mfc3_ok(&self) -> bool {
        self.mfc3 <= self.tol
    }

    pub fn mfc4_ok(&self) -> bool {
        self.mfc4_adjoint <= self.tol && self.mfc4_norm <= self.tol
    }

    pub fn mfc5_ok(&self) -> bool {
        self.mfc5 <= self.tol && !self.mfc5_precondition_failed
    }

    pub fn passed(&self) -> bool {
        self.mfc1_ok() && self.mfc2_ok() && self.mfc3_ok() && self.mfc4_ok() && self.mfc5_ok()
    }

    pub fn max_residual(&self) -> f64 {
        self.mfc1
            .max(self.mfc2)
            .max(self.mfc3)
            .max(self.mfc4_adjoint)
            .max(self.mfc4_norm)
            .max(self.mfc5)
    }
}

fn sup_at(points: &[Vec<C64>], f: &FuncExpr) -> f64 {
    points.iter().map(|p| f.eval(p).norm()).fold(0.0, f64::max)
}

/// Runs the axiom suite on `phi` over all pairs drawn from `fs` and the
/// sequences in `seqs`.
pub fn verify_mfc_axioms<C: FunctionalCalculus + ?Sized>(
    phi: &C,
    fs: &[FuncExpr],
    seqs: &[BpSequence],
) -> Result<MfcReport> {
    let n = phi.dim();
    let d = phi.arity();
    let points = phi.spectral_points();
    let one = FuncExpr::real(d, 1.0);
    let mfc1 = (&phi.apply(&one)? - &ComplexMatrix::identity(n)).frobenius_norm();

    let images = fs.iter().map(|f| phi.apply(f)).collect::<Result<Vec<_>>>()?;
    let sups: Vec<f64> = fs.iter().map(|f| sup_at(&points, f)).collect();
    let homogeneity = C64::new(2.0, -1.0);

    let mut mfc2: f64 = 0.0;
    let mut mfc3: f64 = 0.0;
    let mut mfc4_adjoint: f64 = 0.0;
    let mut mfc4_norm: f64 = 0.0;
    for (i, f) in fs.iter().enumerate() {
        let fi = &images[i];
        let scale = sups[i].max(1.0);
        let scaled = phi.apply(&f.scalar(homogeneity))?;
        mfc2 = mfc2.max((&fi.scale(homogeneity) - &scaled).frobenius_norm() / (homogeneity.norm() * scale));
        let conj = phi.apply(&f.conj())?;
        mfc4_adjoint = mfc4_adjoint.max((&fi.adjoint() - &conj).frobenius_norm() / scale);
        mfc4_norm = mfc4_norm.max((fi.op_norm()? - sups[i]).max(0.0) / scale);
        for (j, g) in fs.iter().enumerate().skip(i) {
            let gj = &images[j];
            let sum = phi.apply(&f.add(g)?)?;
            mfc2 = mfc2.max((&(fi + gj) - &sum).frobenius_norm() / (sups[i] + sups[j]).max(1.0));
            let prod = phi.apply(&f.mul(g)?)?;
            let pscale = (sups[i] * sups[j]).max(1.0);
            mfc3 = mfc3.max((&(fi * gj) - &prod).frobenius_norm() / pscale);
            let rprod = phi.apply(&g.mul(f)?)?;
            mfc3 = mfc3.max((&(gj * fi) - &rprod).frobenius_norm() / pscale);
        }
    }

    let mut mfc5: f64 = 0.0;
    let mut precondition_failed = false;
    for s in seqs {
        let Some(last) = s.terms.last() else {
            continue;
        };
        let scale = s.bound.max(1.0);
        for t in &s.terms {
            if sup_at(&points, t) > s.bound * (1.0 + 1e-12) {
                precondition_failed = true;
            }
        }
        let gap = points
            .iter()
            .map(|p| (last.eval(p) - s.limit.eval(p)).norm())
            .fold(0.0, f64::max);
        if gap > MFC_TOL * scale {
            precondition_failed = true;
        }
        let lim = phi.apply(&s.limit)?;
        let at_last = phi.apply(last)?;
        mfc5 = mfc5.max((&at_last - &lim).frobenius_norm() / scale);
    }

    Ok(MfcReport {
        mfc1,
        mfc2,
        mfc3,
        mfc4_adjoint,
        mfc4_norm,
        mfc5,
        mfc5_precondition_failed: precondition_failed,
        functions: fs.len(),
        sequences: seqs.len(),
        tol: MFC_TOL,
    })
}

/// Orthonormal basis of the range of a projection, as columns.
pub fn range_basis(p: &ComplexMatrix) -> Result<Vec<Vec<C64>>> {
    let residual = p.projection_defect();
    if residual > MFC_TOL * p.frobenius_norm().max(1.0) {
        return Err(Error::NotProjection { residual });
    }
    let eig = hermitian_eigendecompose(p, DEFAULT_TOL)?;
    Ok(eig
        .eigenvalues
        .iter()
        .enumerate()
        .filter(|(_, l)| l.re > 0.5)
        .map(|(k, _)| eig.basis.column(k))
        .collect())
}

/// The calculus `Φ_K` on `K = ran(P)`, expressed in an orthonormal basis of
/// `K`. `P` must commute with every atom projection.
pub fn restrict_to_subspace(phi: &BorelCalculus, p: &ComplexMatrix) -> Result<BorelCalculus> {
    if p.dim() != phi.pvm().dim() {
        return Err(Error::DimensionMismatch {
            expected: phi.pvm().dim(),
            found: p.dim(),
        });
    }
    let basis = range_basis(p)?;
    for (i, a) in phi.atoms().iter().enumerate() {
        let residual = p.commutator(&a.proj).frobenius_norm();
        if residual > MFC_TOL {
            return Err(Error::NotInvariant { atom: i, residual });
        }
    }
    let r = basis.len();
    if r == 0 {
        return Err(Error::Invalid("restriction to the zero subspace"));
    }
    let mut atoms = Vec::new();
    for a in phi.atoms() {
        let compressed = ComplexMatrix::from_fn(r, |i, j| {
            let pv = a.proj.mul_vec(&basis[j]);
            basis[i].iter().zip(&pv).map(|(u, w)| u.conj() * w).sum()
        });
        if compressed.frobenius_norm() < 0.5 {
            continue;
        }
        atoms.push(Atom {
            point: a.point.clone(),
            proj: compressed.clean_projection(),
        });
    }
    BorelCalculus::from_pvm(Pvm::from_atoms(phi.pvm().d(), r, atoms)?)
}

/// `Φ^φ(f) = Φ(f ∘ φ)`.
pub fn pushforward_calculus(phi: &BorelCalculus, map: &[FuncExpr]) -> Result<BorelCalculus> {
    Ok(BorelCalculus {
        pvm: pvm_pushforward(phi.pvm(), map)?,
    })
}

/// `(T*Φ)(g) = Φ(Tg)` for the substitution homomorphism `Tg = g ∘ ψ`.
/// At finite scale this is the push-forward of `Φ` along `ψ`.
pub fn pullback_calculus(phi: &BorelCalculus, psi: &[FuncExpr]) -> Result<BorelCalculus> {
    pushforward_calculus(phi, psi)
}

/// Joint calculus of commuting normal matrices: `Φ(z_j) = A_j`.
///
/// Basis vectors are grouped by their whole eigenvalue tuple, coordinate
/// `j` with radius `1e-8·max(1, ‖A_j‖_F)`.
pub fn joint_calculus(mats: &[ComplexMatrix]) -> Result<BorelCalculus> {
    let jd = joint_diagonalize(mats, DEFAULT_TOL)?;
    let deltas: Vec<f64> = mats.iter().map(default_cluster_delta).collect();
    BorelCalculus::from_pvm(pvm_from_eigenbasis(&jd.basis, &jd.values, &deltas)?)
}

/// Calculus of a real symmetric matrix; atom points are real and
/// projections real symmetric.
pub fn selfadjoint_real_calculus(a: &ComplexMatrix) -> Result<BorelCalculus> {
    let imag: f64 = a.as_slice().iter().map(|z| z.im * z.im).sum::<f64>().sqrt();
    let asym = (a - &a.transpose()).frobenius_norm();
    let residual = imag + asym;
    if residual > DEFAULT_TOL * a.frobenius_norm().max(1.0) {
        return Err(Error::NotSelfAdjoint { residual });
    }
    let real = ComplexMatrix::from_fn(a.dim(), |i, j| C64::new(0.5 * (a[(i, j)].re + a[(j, i)].re), 0.0));
    let eig = hermitian_eigendecompose(&real, DEFAULT_TOL)?;
    let points: Vec<Vec<C64>> = eig.eigenvalues.iter().map(|&l| vec![l]).collect();
    let pvm = pvm_from_eigenbasis(&eig.basis, &points, &[default_cluster_delta(&real)])?;
    let n = real.dim();
    let atoms = pvm
        .into_atoms()
        .into_iter()
        .map(|at| Atom {
            point: at.point.iter().map(|z| C64::new(z.re, 0.0)).collect(),
            proj: ComplexMatrix::from_fn(n, |i, j| C64::new(0.5 * (at.proj[(i, j)].re + at.proj[(j, i)].re), 0.0)),
        })
        .collect();
    BorelCalculus::from_pvm(Pvm::from_atoms(1, n, atoms)?)
}

/// Outcome of [`calculi_agree`].
#[derive(Debug, Clone, PartialEq)]
pub struct AgreementReport {
    pub agree: bool,
    /// Largest relative discrepancy on the generating functions.
    pub generator_residual: f64,
    /// Largest relative discrepancy over the random audit, when it ran.
    pub audit_residual: Option<f64>,
    pub audit_size: usize,
    pub seed: u64,
    pub tol: f64,
}

fn relative_gap(phi: &BorelCalculus, psi: &BorelCalculus, f: &FuncExpr) -> Result<f64> {
    let a = phi.apply(f)?;
    let b = psi.apply(f)?;
    Ok((&a - &b).frobenius_norm() / a.frobenius_norm().max(b.frobenius_norm()).max(1.0))
}

/// Compares `Φ` and `Ψ` on the generators `on`; if they agree there, a
/// randomized audit over [`AUDIT_SIZE`] functions drawn with [`AUDIT_SEED`]
/// must agree too.
pub fn calculi_agree(phi: &BorelCalculus, psi: &BorelCalculus, on: &[FuncExpr]) -> Result<AgreementReport> {
    calculi_agree_seeded(phi, psi, on, AUDIT_SEED)
}

pub fn calculi_agree_seeded(
    phi: &BorelCalculus,
    psi: &BorelCalculus,
    on: &[FuncExpr],
    seed: u64,
) -> Result<AgreementReport> {
    if phi.pvm().dim() != psi.pvm().dim() {
        return Err(Error::DimensionMismatch {
            expected: phi.pvm().dim(),
            found: psi.pvm().dim(),
        });
    }
    let d = phi.pvm().d();
    if psi.pvm().d() != d {
        return Err(Error::Arity {
            expected: d,
            found: psi.pvm().d(),
        });
    }
    let mut generator_residual: f64 = 0.0;
    for f in on {
        generator_residual = generator_residual.max(relative_gap(phi, psi, f)?);
    }
    let mut report = AgreementReport {
        agree: generator_residual <= AGREE_TOL,
        generator_residual,
        audit_residual: None,
        audit_size: 0,
        seed,
        tol: AGREE_TOL,
    };
    if !report.agree {
        return Ok(report);
    }
    let regions: Vec<Region> = (0..d)
        .map(|j| {
            let coords: Vec<C64> = phi.atoms().iter().chain(psi.atoms()).map(|a| a.point[j]).collect();
            Region::around(&coords)
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut audit: f64 = 0.0;
    for _ in 0..AUDIT_SIZE {
        let f = random_func_expr(&mut rng, d, 4, &regions);
        audit = audit.max(relative_gap(phi, psi, &f)?);
    }
    report.audit_residual = Some(audit);
    report.audit_size = AUDIT_SIZE;
    report.agree = audit <= AGREE_TOL;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcexpr::parse_expr;
    use crate::matnum::matrix_poly_eval;

    fn rows(r: &[&[f64]]) -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&r.iter().map(|x| x.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn close(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) -> bool {
        (a - b).frobenius_norm() <= tol
    }

    #[test]
    fn apply_examples() {
        let phi = BorelCalculus::from_normal(&ComplexMatrix::real_diag(&[1.0, 2.0, 3.0])).unwrap();
        assert!(close(&phi.apply(&FuncExpr::real(1, 1.0)).unwrap(), &ComplexMatrix::identity(3), 1e-15));
        let a = ComplexMatrix::real_diag(&[1.0, 2.0, 3.0]);
        assert!(close(&phi.apply(&parse_expr("z^2", 1).unwrap()).unwrap(), &(&a * &a), 1e-12));
        let ind = parse_expr("ind(singleton(1))", 1).unwrap();
        assert!(close(&phi.apply(&ind).unwrap(), &ComplexMatrix::real_diag(&[1.0, 0.0, 0.0]), 1e-15));
        assert!(matches!(phi.apply(&FuncExpr::real(2, 1.0)), Err(Error::Arity { .. })));
    }

    struct Shifted<'a> {
        inner: &'a BorelCalculus,
        eps: f64,
    }

    impl FunctionalCalculus for Shifted<'_> {
        fn dim(&self) -> usize {
            self.inner.pvm().dim()
        }
        fn arity(&self) -> usize {
            1
        }
        fn apply(&self, f: &FuncExpr) -> Result<ComplexMatrix> {
            Ok(&self.inner.apply(f)? + &ComplexMatrix::identity(self.dim()).scale_real(self.eps))
        }
        fn spectral_points(&self) -> Vec<Vec<C64>> {
            self.inner.spectral_points()
        }
    }

    fn basic_functions() -> Vec<FuncExpr> {
        ["z", "z^2", "conj(z)"].iter().map(|s| parse_expr(s, 1).unwrap()).collect()
    }

    #[test]
    fn axioms_hold_and_mutant_fails() {
        let a = rows(&[&[2.0, 1.0], &[1.0, 2.0]]);
        let phi = BorelCalculus::from_normal(&a).unwrap();
        let seqs = [BpSequence::clamps(&FuncExpr::z(), &[0.5, 1.0, 2.0, 4.0]).unwrap()];
        let r = verify_mfc_axioms(&phi, &basic_functions(), &seqs).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.mfc5, 0.0);

        let mutant = Shifted { inner: &phi, eps: 1e-3 };
        let r = verify_mfc_axioms(&mutant, &basic_functions(), &[]).unwrap();
        assert!(r.mfc1 <= 1e-3 * 2f64.sqrt() + 1e-15);
        assert!(!r.mfc3_ok());
        assert!(r.mfc3 > 1e-4, "{}", r.mfc3);
    }

    #[test]
    fn bp_sequence_precondition_is_checked() {
        let phi = BorelCalculus::from_normal(&ComplexMatrix::real_diag(&[1.0, 5.0])).unwrap();
        // stops before reaching the limit at the atom 5
        let seq = BpSequence::clamps(&FuncExpr::z(), &[1.0, 2.0]).unwrap();
        let r = verify_mfc_axioms(&phi, &[], &[seq]).unwrap();
        assert!(r.mfc5_precondition_failed && !r.passed());
    }

    #[test]
    fn restriction() {
        let phi = BorelCalculus::from_normal(&ComplexMatrix::real_diag(&[1.0, 1.0, 2.0])).unwrap();
        let same = restrict_to_subspace(&phi, &ComplexMatrix::identity(3)).unwrap();
        assert!(calculi_agree(&phi, &same, &[FuncExpr::z()]).unwrap().agree);

        let k = restrict_to_subspace(&phi, &ComplexMatrix::real_diag(&[1.0, 1.0, 0.0])).unwrap();
        assert_eq!(k.atoms().len(), 1);
        assert_eq!(k.atoms()[0].point, [C64::new(1.0, 0.0)]);
        assert!(close(&k.atoms()[0].proj, &ComplexMatrix::identity(2), 1e-12));

        let phi = BorelCalculus::from_normal(&ComplexMatrix::real_diag(&[1.0, 2.0])).unwrap();
        let p = rows(&[&[0.5, 0.5], &[0.5, 0.5]]);
        assert!(matches!(restrict_to_subspace(&phi, &p), Err(Error::NotInvariant { .. })));
    }

    #[test]
    fn pushforward_composition() {
        let phi = BorelCalculus::from_normal(&ComplexMatrix::real_diag(&[-1.0, 1.0])).unwrap();
        let sq = parse_expr("z^2", 1).unwrap();
        let sqrt = parse_expr("sqrt(z)", 1).unwrap();
        let pushed = pushforward_calculus(&phi, core::slice::from_ref(&sq)).unwrap();
        let lhs = pushed.apply(&sqrt).unwrap();
        let rhs = phi.apply(&sqrt.after(&[sq]).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
        assert!(close(&lhs, &ComplexMatrix::identity(2), 1e-15));

        let phi = BorelCalculus::from_normal(&ComplexMatrix::real_diag(&[1.0, 2.0])).unwrap();
        let pushed = pushforward_calculus(&phi, &[FuncExpr::z(), parse_expr("z^2", 1).unwrap()]).unwrap();
        let mut pts: Vec<(f64, f64)> = pushed.atoms().iter().map(|a| (a.point[0].re, a.point[1].re)).collect();
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        assert_eq!(pts, [(1.0, 1.0), (2.0, 4.0)]);
    }

    #[test]
    fn pullback_examples() {
        let phi = BorelCalculus::from_normal(&ComplexMatrix::real_diag(&[1.0, 2.0, 3.0])).unwrap();
        let same = pullback_calculus(&phi, &[FuncExpr::z()]).unwrap();
        assert_eq!(same, phi);
        // collapse 1 and 2 onto one label
        let collapse = parse_expr("ind(closedball(1.5, 0.6))", 1).unwrap();
        let merged = pullback_calculus(&phi, &[collapse]).unwrap();
        assert_eq!(merged.atoms().len(), 2);
        let shift = parse_expr("z + 10", 1).unwrap();
        let moved = pullback_calculus(&phi, &[shift]).unwrap();
        for (a, b) in moved.atoms().iter().zip(phi.atoms()) {
            assert_eq!(a.proj, b.proj);
            assert_eq!(a.point[0], b.point[0] + 10.0);
        }
    }

    #[test]
    fn joint_examples() {
        let a = ComplexMatrix::real_diag(&[1.0, 2.0]);
        let b = ComplexMatrix::real_diag(&[3.0, 4.0]);
        let phi = joint_calculus(&[a.clone(), b.clone()]).unwrap();
        let z1 = FuncExpr::coord(2, 1).unwrap();
        let z2 = FuncExpr::coord(2, 2).unwrap();
        assert!(close(&phi.apply(&z1).unwrap(), &a, 1e-12));
        assert!(close(&phi.apply(&z2).unwrap(), &b, 1e-12));

        let a = rows(&[&[2.0, 1.0], &[1.0, 2.0]]);
        let b = rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let phi = joint_calculus(&[a.clone(), b.clone()]).unwrap();
        let prod = phi.apply(&z1.mul(&z2).unwrap()).unwrap();
        assert!(close(&prod, &rows(&[&[1.0, 2.0], &[2.0, 1.0]]), 1e-12));

        let a = ComplexMatrix::real_diag(&[1.0, 2.0]);
        assert!(matches!(joint_calculus(&[a, b]), Err(Error::NotCommuting { .. })));
    }

    #[test]
    fn real_selfadjoint() {
        let phi = selfadjoint_real_calculus(&ComplexMatrix::real_diag(&[1.0, 2.0])).unwrap();
        assert!(phi.atoms().iter().all(|a| a.point[0].im == 0.0));
        let phi = selfadjoint_real_calculus(&rows(&[&[2.0, 1.0], &[1.0, 2.0]])).unwrap();
        for a in phi.atoms() {
            assert!(a.proj.is_real());
            let s = if a.point[0].re > 2.0 { 1.0 } else { -1.0 };
            assert!(close(&a.proj, &rows(&[&[0.5, 0.5 * s], &[0.5 * s, 0.5]]), 1e-12));
        }
        assert!(matches!(
            selfadjoint_real_calculus(&rows(&[&[0.0, 1.0], &[-1.0, 0.0]])),
            Err(Error::NotSelfAdjoint { .. })
        ));
    }

    #[test]
    fn agreement() {
        let phi = BorelCalculus::from_normal(&ComplexMatrix::real_diag(&[1.0, 2.0])).unwrap();
        let r = calculi_agree(&phi, &phi, &[FuncExpr::z()]).unwrap();
        assert!(r.agree && r.audit_size == AUDIT_SIZE);

        // diag(2,1) conjugated by the swap is diag(1,2) again
        let swap = rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let b = &(&swap * &ComplexMatrix::real_diag(&[2.0, 1.0])) * &swap;
        let psi = BorelCalculus::from_normal(&b).unwrap();
        assert!(calculi_agree(&phi, &psi, &[FuncExpr::z()]).unwrap().agree);

        let other = BorelCalculus::from_normal(&ComplexMatrix::real_diag(&[1.0, 3.0])).unwrap();
        let r = calculi_agree(&phi, &other, &[FuncExpr::z()]).unwrap();
        assert!(!r.agree && r.audit_residual.is_none());

        let big = BorelCalculus::from_normal(&ComplexMatrix::identity(3)).unwrap();
        assert!(matches!(
            calculi_agree(&phi, &big, &[FuncExpr::z()]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn polynomial_identity() {
        let a = rows(&[&[0.0, 1.0], &[-1.0, 0.0]]);
        let phi = BorelCalculus::from_normal(&a).unwrap();
        let p = [C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(1.0, 0.0)];
        let f = parse_expr("1 + z^2", 1).unwrap();
        let lhs = phi.apply(&f).unwrap();
        let rhs = matrix_poly_eval(&p, &phi.apply(&FuncExpr::z()).unwrap());
        assert!(close(&lhs, &rhs, 1e-12));
        assert!(lhs.frobenius_norm() < 1e-12);
    }
}
