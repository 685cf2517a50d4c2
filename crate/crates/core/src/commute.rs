//! Commutation: Fuglede's theorem, intertwining sets, the bounded transform
//! `(T_A, S_A, Z_A)` and strong commutativity.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)] // inherent when std is linked
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::calculus::BorelCalculus;
use crate::error::{Error, Result};
use crate::funcexpr::{BorelSetExpr, FuncExpr};
use crate::matnum::{
    check_normal, commutator_scale, hermitian_eigendecompose, joint_diagonalize, ComplexMatrix, C64, DEFAULT_TOL,
};
use crate::pvm::{pvm_from_eigenbasis, pvm_from_normal, pvm_pushforward};
use crate::sample::{complex_gaussian, random_borel_set, random_func_expr, Region};

/// Threshold of the strong-commutativity battery, relative to `‖X‖‖Y‖`.
pub const BATTERY_TOL: f64 = 1e-7;

/// Functions sampled for relation (ii) of the battery.
pub const BATTERY_FUNCTIONS: usize = 20;

pub const BATTERY_SEED: u64 = 0xb0a7_7e57;

/// Tolerance of the transform lemma checks, relative to `max(1, ‖A‖_F)`.
pub const LEMMA_TOL: f64 = 1e-8;

/// Smallest admissible `t`-coordinate in [`reconstruct_from_transform`].
pub const MIN_T: f64 = 1e-12;

fn same_dim(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<()> {
    if a.dim() == b.dim() {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        })
    }
}

/// `‖AB − BA‖_F ≤ tol·max(1, ‖A‖_F‖B‖_F)`.
pub fn commutes(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) -> Result<bool> {
    same_dim(a, b)?;
    Ok(a.commutator(b).frobenius_norm() <= tol * commutator_scale(a, b))
}

/// `‖TA* − A*T‖_F` without checking the hypotheses.
pub fn fuglede_residual(a: &ComplexMatrix, t: &ComplexMatrix) -> f64 {
    let s = a.adjoint();
    (&(t * &s) - &(&s * t)).frobenius_norm()
}

/// Fuglede: for normal `A` and `TA = AT`, returns `‖TA* − A*T‖_F`.
pub fn fuglede_verify(a: &ComplexMatrix, t: &ComplexMatrix) -> Result<f64> {
    same_dim(a, t)?;
    check_normal(a, DEFAULT_TOL)?;
    let residual = t.commutator(a).frobenius_norm();
    if residual > DEFAULT_TOL * commutator_scale(a, t) {
        return Err(Error::NotCommuting {
            first: 0,
            second: 1,
            residual,
        });
    }
    Ok(fuglede_residual(a, t))
}

/// A random element of the commutant of a normal `A`: `Σ_c P_c G P_c` over
/// the spectral projections `P_c` of `A` with `G` complex Gaussian.
pub fn sample_commutant<R: Rng + ?Sized>(a: &ComplexMatrix, rng: &mut R) -> Result<ComplexMatrix> {
    let e = pvm_from_normal(a, None)?;
    let n = a.dim();
    let g = ComplexMatrix::from_fn(n, |_, _| complex_gaussian(rng));
    let mut t = ComplexMatrix::zeros(n);
    for at in e.atoms() {
        t = &t + &(&(&at.proj * &g) * &at.proj);
    }
    Ok(t)
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntertwiningReport {
    /// `‖TΦ(f) − Ψ(f)T‖_F` for each probed function.
    pub residuals: Vec<f64>,
    /// Indices of the probed functions that intertwine.
    pub members: Vec<usize>,
    /// Number of derived functions re-probed by the closure audit.
    pub closure_checked: usize,
    pub closure_failures: usize,
    pub closure_residual: f64,
    pub tol: f64,
    pub seed: u64,
}

impl IntertwiningReport {
    pub fn closed(&self) -> bool {
        self.closure_failures == 0
    }
}

struct Prober<'a> {
    phi: &'a BorelCalculus,
    psi: &'a BorelCalculus,
    t: &'a ComplexMatrix,
    tol: f64,
}

impl Prober<'_> {
    // residual relative to ‖T‖·max sup|f|
    fn residual(&self, f: &FuncExpr) -> Result<(f64, bool)> {
        let lhs = self.t * &self.phi.apply(f)?;
        let rhs = &self.psi.apply(f)? * self.t;
        let r = (&lhs - &rhs).frobenius_norm();
        let sup = self.phi.sup_on_atoms(f)?.max(self.psi.sup_on_atoms(f)?);
        let scale = (self.t.frobenius_norm() * sup).max(1.0);
        Ok((r, r <= self.tol * scale))
    }

    fn real_valued(&self, f: &FuncExpr) -> bool {
        self.phi
            .atoms()
            .iter()
            .chain(self.psi.atoms())
            .all(|a| f.eval(&a.point).im == 0.0)
    }
}

/// Probes which `f ∈ fs` satisfy `TΦ(f) = Ψ(f)T`, then checks that the
/// members are closed under sums, products, conjugation, modulus, pointwise
/// max/min of real-valued members and indicators of preimages.
pub fn intertwining_set_probe(
    phi: &BorelCalculus,
    psi: &BorelCalculus,
    t: &ComplexMatrix,
    fs: &[FuncExpr],
) -> Result<IntertwiningReport> {
    let n = phi.pvm().dim();
    for m in [psi.pvm().dim(), t.dim()] {
        if m != n {
            return Err(Error::DimensionMismatch { expected: n, found: m });
        }
    }
    let d = phi.pvm().d();
    if psi.pvm().d() != d {
        return Err(Error::Arity {
            expected: d,
            found: psi.pvm().d(),
        });
    }
    let probe = Prober {
        phi,
        psi,
        t,
        tol: DEFAULT_TOL,
    };
    let mut residuals = Vec::with_capacity(fs.len());
    let mut members = Vec::new();
    for (i, f) in fs.iter().enumerate() {
        let (r, ok) = probe.residual(f)?;
        residuals.push(r);
        if ok {
            members.push(i);
        }
    }

    let mut derived: Vec<FuncExpr> = Vec::new();
    for (k, &i) in members.iter().enumerate() {
        let f = &fs[i];
        derived.push(f.conj());
        derived.push(f.abs());
        for &j in &members[k..] {
            let g = &fs[j];
            derived.push(f.add(g)?);
            derived.push(f.mul(g)?);
            if probe.real_valued(f) && probe.real_valued(g) {
                derived.push(f.max_real(g)?);
                derived.push(f.min_real(g)?);
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(BATTERY_SEED);
    for &i in &members {
        let f = &fs[i];
        let values: Vec<C64> = phi.atoms().iter().map(|a| f.eval(&a.point)).collect();
        let region = [Region::around(&values)];
        for _ in 0..3 {
            let b = random_borel_set(&mut rng, 1, 2, &region);
            derived.push(FuncExpr::indicator(&BorelSetExpr::preimage(f, &b)?));
        }
    }
    let mut closure_failures = 0;
    let mut closure_residual: f64 = 0.0;
    for g in &derived {
        let (r, ok) = probe.residual(g)?;
        closure_residual = closure_residual.max(r);
        if !ok {
            closure_failures += 1;
        }
    }
    Ok(IntertwiningReport {
        residuals,
        members,
        closure_checked: derived.len(),
        closure_failures,
        closure_residual,
        tol: DEFAULT_TOL,
        seed: BATTERY_SEED,
    })
}

/// `T_A = (I + A*A)^{-1}`, `S_A = A·T_A` and `Z_A = A·T_A^{1/2}` of a normal
/// matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct TransformTriple {
    pub t: ComplexMatrix,
    pub s: ComplexMatrix,
    pub z: ComplexMatrix,
    pub source: ComplexMatrix,
}

/// Residuals of the transform lemma, each relative to `max(1, ‖A‖_F)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LemmaReport {
    /// `T_A A = A T_A`.
    pub t_commutes_with_a: f64,
    /// `S_A` normal.
    pub s_normal: f64,
    /// `S_A* = S_{A*}`.
    pub s_adjoint: f64,
    /// `A = T_A^{-1} S_A`.
    pub a_from_ts: f64,
    /// `T_A S_A = S_A T_A`.
    pub ts_commute: f64,
    /// `‖T_A‖₂`, at most 1.
    pub t_norm: f64,
    /// Smallest eigenvalue of `T_A`, positive.
    pub t_min: f64,
    /// `‖Z_A‖₂`, below `1 + 1e-12`.
    pub z_norm: f64,
    pub tol: f64,
}

impl LemmaReport {
    pub fn passed(&self) -> bool {
        let tol = self.tol;
        self.t_commutes_with_a <= tol
            && self.s_normal <= tol
            && self.s_adjoint <= tol
            && self.a_from_ts <= tol
            && self.ts_commute <= tol
            && self.t_norm <= 1.0 + tol
            && self.t_min > 0.0
            && self.z_norm < 1.0 + 1e-12
    }
}

// (I + X*X)^{-1}
fn t_of(x: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = x.dim();
    let m = &ComplexMatrix::identity(n) + &(&x.adjoint() * x);
    Ok(m.inverse()?.hermitian_part())
}

/// `g(H)` for Hermitian `H` through its own spectral calculus, grouping
/// only exactly equal eigenvalues.
fn hermitian_function(h: &ComplexMatrix, g: &FuncExpr) -> Result<ComplexMatrix> {
    let eig = hermitian_eigendecompose(h, DEFAULT_TOL)?;
    let points: Vec<Vec<C64>> = eig.eigenvalues.iter().map(|&l| vec![l]).collect();
    let pvm = pvm_from_eigenbasis(&eig.basis, &points, &[0.0])?;
    BorelCalculus::from_pvm(pvm)?.apply(g)
}

pub fn bounded_transform(a: &ComplexMatrix) -> Result<TransformTriple> {
    check_normal(a, DEFAULT_TOL)?;
    let t = t_of(a)?;
    let root = hermitian_function(&t, &FuncExpr::z().sqrt())?;
    Ok(TransformTriple {
        s: a * &t,
        z: a * &root,
        t,
        source: a.clone(),
    })
}

impl TransformTriple {
    pub fn lemma_report(&self) -> Result<LemmaReport> {
        let a = &self.source;
        let n = a.dim();
        let scale = a.frobenius_norm().max(1.0);
        let t_inv = &ComplexMatrix::identity(n) + &(&a.adjoint() * a);
        let s_star = &a.adjoint() * &t_of(&a.adjoint())?;
        let t_eig = hermitian_eigendecompose(&self.t, DEFAULT_TOL)?;
        Ok(LemmaReport {
            t_commutes_with_a: self.t.commutator(a).frobenius_norm() / scale,
            s_normal: self.s.normal_defect() / scale,
            s_adjoint: (&self.s.adjoint() - &s_star).frobenius_norm() / scale,
            a_from_ts: (a - &(&t_inv * &self.s)).frobenius_norm() / scale,
            ts_commute: self.t.commutator(&self.s).frobenius_norm() / scale,
            t_norm: t_eig.eigenvalues.first().map_or(0.0, |l| l.re),
            t_min: t_eig.eigenvalues.last().map_or(0.0, |l| l.re),
            z_norm: self.z.op_norm()?,
            tol: LEMMA_TOL,
        })
    }

    /// `‖A − Z(I − Z*Z)^{-1/2}‖_F / max(1, ‖A‖_F)`.
    pub fn z_round_trip(&self) -> Result<f64> {
        let n = self.z.dim();
        let m = (&ComplexMatrix::identity(n) - &(&self.z.adjoint() * &self.z)).hermitian_part();
        let inv_root = hermitian_function(&m, &FuncExpr::z().sqrt().inv())?;
        let back = &self.z * &inv_root;
        Ok((&back - &self.source).frobenius_norm() / self.source.frobenius_norm().max(1.0))
    }
}

/// Names of the six battery relations, in report order.
pub const BATTERY_RELATIONS: [&str; 6] = [
    "AB = BA",
    "B f(A) = f(A) B",
    "B Z_A = Z_A B",
    "B commutes with T_A and S_A",
    "T_A, S_A, T_B, S_B commute",
    "Z_A Z_B = Z_B Z_A",
];

#[derive(Debug, Clone, PartialEq)]
pub struct BatteryReport {
    pub holds: [bool; 6],
    /// Relative residuals `‖XY − YX‖_F / (‖X‖_F‖Y‖_F)`, maximized over the
    /// pairs each relation involves.
    pub residuals: [f64; 6],
    pub functions: usize,
    pub seed: u64,
    pub tol: f64,
}

impl BatteryReport {
    /// All six relations agree.
    pub fn coherent(&self) -> bool {
        self.holds.iter().all(|&h| h == self.holds[0])
    }
}

fn relative_commutator(x: &ComplexMatrix, y: &ComplexMatrix) -> f64 {
    let r = x.commutator(y).frobenius_norm();
    let scale = x.frobenius_norm() * y.frobenius_norm();
    if r == 0.0 {
        0.0
    } else if scale == 0.0 {
        f64::INFINITY
    } else {
        r / scale
    }
}

/// Evaluates the six equivalent forms of strong commutativity for normal
/// `A` and `B`. A relation holds iff its residual is at most
/// [`BATTERY_TOL`].
pub fn strong_commute_battery(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<BatteryReport> {
    strong_commute_battery_seeded(a, b, BATTERY_SEED)
}

/// [`strong_commute_battery`] with the sampled functions drawn from `seed`.
pub fn strong_commute_battery_seeded(a: &ComplexMatrix, b: &ComplexMatrix, seed: u64) -> Result<BatteryReport> {
    same_dim(a, b)?;
    let ta = bounded_transform(a)?;
    let tb = bounded_transform(b)?;
    let phi = BorelCalculus::from_normal(a)?;

    let mut residuals = [0.0; 6];
    residuals[0] = relative_commutator(a, b);

    let values: Vec<C64> = phi.atoms().iter().map(|x| x.point[0]).collect();
    let region = [Region::around(&values)];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut fs = vec![FuncExpr::z()];
    while fs.len() < BATTERY_FUNCTIONS {
        fs.push(random_func_expr(&mut rng, 1, 3, &region));
    }
    for f in &fs {
        let fa = phi.apply(f)?;
        residuals[1] = residuals[1].max(relative_commutator(b, &fa));
    }
    residuals[2] = relative_commutator(b, &ta.z);
    residuals[3] = relative_commutator(b, &ta.t).max(relative_commutator(b, &ta.s));
    let four = [&ta.t, &ta.s, &tb.t, &tb.s];
    for i in 0..4 {
        for j in i + 1..4 {
            residuals[4] = residuals[4].max(relative_commutator(four[i], four[j]));
        }
    }
    residuals[5] = relative_commutator(&ta.z, &tb.z);
    let holds = residuals.map(|r| r <= BATTERY_TOL);
    Ok(BatteryReport {
        holds,
        residuals,
        functions: fs.len(),
        seed,
        tol: BATTERY_TOL,
    })
}

/// Rebuilds the joint calculus of `A_1, …, A_d` from their transforms: the
/// joint calculus `Ψ` of `(T_1, …, T_d, S_1, …, S_d)` pushed forward along
/// `(s_j / t_j)_j`.
pub fn reconstruct_from_transform(ts: &[TransformTriple]) -> Result<BorelCalculus> {
    let d = ts.len();
    if d == 0 {
        return Err(Error::Invalid("no transforms supplied"));
    }
    let mats: Vec<ComplexMatrix> = ts
        .iter()
        .map(|x| x.t.clone())
        .chain(ts.iter().map(|x| x.s.clone()))
        .collect();
    let jd = joint_diagonalize(&mats, DEFAULT_TOL)?;
    let deltas: Vec<f64> = mats.iter().map(|m| 1e-8 * m.frobenius_norm().max(1.0)).collect();
    let psi = BorelCalculus::from_pvm(pvm_from_eigenbasis(&jd.basis, &jd.values, &deltas)?)?;
    for (i, a) in psi.atoms().iter().enumerate() {
        for t in &a.point[..d] {
            if !(t.re > MIN_T && t.re <= 1.0 + DEFAULT_TOL) {
                return Err(Error::BadAtom { atom: i, t: t.re });
            }
        }
    }
    let map = (1..=d)
        .map(|j| {
            let t = FuncExpr::coord(2 * d, j)?;
            let s = FuncExpr::coord(2 * d, d + j)?;
            s.mul(&t.inv())
        })
        .collect::<Result<Vec<_>>>()?;
    BorelCalculus::from_pvm(pvm_pushforward(psi.pvm(), &map)?)
}
