//! Finite projection-valued measures on `ℂ^d`.
//!
//! A [`Pvm`] is a list of atoms `(point, projection)`; the measure of a set
//! is the sum of the projections whose points lie in it.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)] // inherent when std is linked
use num_traits::Float;

use crate::error::{Error, Result};
use crate::funcexpr::{BorelSetExpr, FuncExpr};
use crate::matnum::{normal_eigendecompose, ComplexMatrix, C64, DEFAULT_TOL};

/// Tolerance on the PVM axioms.
pub const AXIOM_TOL: f64 = 1e-9;

/// A product of projections with Frobenius norm below this is treated as
/// zero (a nonzero projection has Frobenius norm at least 1).
const ZERO_PROJ: f64 = 0.5;

#[derive(Debug, Clone, PartialEq)]
pub struct Atom {
    pub point: Vec<C64>,
    pub proj: ComplexMatrix,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Pvm {
    d: usize,
    dim: usize,
    atoms: Vec<Atom>,
}

impl Pvm {
    /// Builds a PVM from explicit atoms. Only shapes are checked here; use
    /// [`verify_pvm_axioms`] for the axioms themselves.
    pub fn from_atoms(d: usize, dim: usize, atoms: Vec<Atom>) -> Result<Self> {
        if d == 0 || dim == 0 {
            return Err(Error::Invalid("PVM arity and dimension must be positive"));
        }
        for a in &atoms {
            if a.point.len() != d {
                return Err(Error::Arity {
                    expected: d,
                    found: a.point.len(),
                });
            }
            if a.proj.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: a.proj.dim(),
                });
            }
            if a.point.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
                return Err(Error::Invalid("non-finite atom point"));
            }
        }
        Ok(Self { d, dim, atoms })
    }

    /// The PVM with one atom `(point, I)`.
    pub fn trivial(dim: usize, point: &[C64]) -> Result<Self> {
        Self::from_atoms(
            point.len(),
            dim,
            vec![Atom {
                point: point.to_vec(),
                proj: ComplexMatrix::identity(dim),
            }],
        )
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn into_atoms(self) -> Vec<Atom> {
        self.atoms
    }

    /// `Σ point_j · P` over atoms: the operator `Φ(z_j)`.
    pub fn coordinate_operator(&self, j: usize) -> ComplexMatrix {
        let mut acc = ComplexMatrix::zeros(self.dim);
        for a in &self.atoms {
            acc = &acc + &a.proj.scale(a.point[j]);
        }
        acc
    }

    /// `Σ P` over all atoms.
    pub fn total(&self) -> ComplexMatrix {
        let mut acc = ComplexMatrix::zeros(self.dim);
        for a in &self.atoms {
            acc = &acc + &a.proj;
        }
        acc
    }

    fn check_arity(&self, found: usize) -> Result<()> {
        if found == self.d {
            Ok(())
        } else {
            Err(Error::Arity {
                expected: self.d,
                found,
            })
        }
    }
}

/// Default clustering radius `1e-8·max(1, ‖A‖_F)`.
pub fn default_cluster_delta(a: &ComplexMatrix) -> f64 {
    1e-8 * a.frobenius_norm().max(1.0)
}

/// Spectral PVM of a normal matrix: eigenvalues within `cluster_delta`
/// (default [`default_cluster_delta`]) of each other form one atom whose
/// point is the cluster mean.
pub fn pvm_from_normal(a: &ComplexMatrix, cluster_delta: Option<f64>) -> Result<Pvm> {
    let eig = normal_eigendecompose(a, DEFAULT_TOL)?;
    let delta = cluster_delta.unwrap_or_else(|| default_cluster_delta(a));
    let points: Vec<Vec<C64>> = eig.eigenvalues.iter().map(|&l| vec![l]).collect();
    pvm_from_eigenbasis(&eig.basis, &points, &[delta])
}

/// Clusters the columns of a unitary `basis` by their value tuples
/// `points[k]` and sums `|v⟩⟨v|` within each cluster.
///
/// Two tuples are linked when every coordinate `j` differs by at most
/// `deltas[j]`; clusters are the connected components (single linkage).
/// A component spreading more than `3·deltas[j]` along some coordinate is a
/// [`Error::ClusterAmbiguity`]. Components whose mean tuples coincide
/// exactly share one atom.
pub fn pvm_from_eigenbasis(basis: &ComplexMatrix, points: &[Vec<C64>], deltas: &[f64]) -> Result<Pvm> {
    let n = basis.dim();
    let d = deltas.len();
    if points.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            found: points.len(),
        });
    }
    if let Some(p) = points.iter().find(|p| p.len() != d) {
        return Err(Error::Arity {
            expected: d,
            found: p.len(),
        });
    }
    let labels = single_linkage(points, deltas);
    let count = labels.iter().copied().max().map_or(0, |m| m + 1);
    let mut atoms = Vec::with_capacity(count);
    for c in 0..count {
        let members: Vec<usize> = (0..n).filter(|&k| labels[k] == c).collect();
        for j in 0..d {
            let mut diameter: f64 = 0.0;
            for &a in &members {
                for &b in &members {
                    diameter = diameter.max((points[a][j] - points[b][j]).norm());
                }
            }
            if diameter > 3.0 * deltas[j] {
                return Err(Error::ClusterAmbiguity {
                    diameter,
                    delta: deltas[j],
                });
            }
        }
        let m = members.len() as f64;
        let point: Vec<C64> = (0..d)
            .map(|j| members.iter().map(|&k| points[k][j]).sum::<C64>() / m)
            .collect();
        let mut proj = ComplexMatrix::zeros(n);
        for &k in &members {
            let v = basis.column(k);
            proj = &proj + &ComplexMatrix::outer(&v, &v);
        }
        // Means of distinct clusters can round to the same point.
        match atoms.iter_mut().find(|a: &&mut Atom| a.point == point) {
            Some(a) => a.proj = &a.proj + &proj,
            None => atoms.push(Atom { point, proj }),
        }
    }
    for a in &mut atoms {
        a.proj = a.proj.clean_projection();
    }
    Pvm::from_atoms(d.max(1), n, atoms)
}

// Connected components of the "every coordinate within delta" graph,
// numbered by first member.
fn single_linkage(points: &[Vec<C64>], deltas: &[f64]) -> Vec<usize> {
    let n = points.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for a in 0..n {
        for b in a + 1..n {
            let close = points[a]
                .iter()
                .zip(&points[b])
                .zip(deltas)
                .all(|((x, y), &dl)| (x - y).norm() <= dl);
            if close {
                let ra = find(&mut parent, a);
                let rb = find(&mut parent, b);
                if ra != rb {
                    parent[ra.max(rb)] = ra.min(rb);
                }
            }
        }
    }
    let mut labels = vec![usize::MAX; n];
    let mut next = 0;
    let mut root_label: Vec<usize> = vec![usize::MAX; n];
    for (k, label) in labels.iter_mut().enumerate() {
        let r = find(&mut parent, k);
        if root_label[r] == usize::MAX {
            root_label[r] = next;
            next += 1;
        }
        *label = root_label[r];
    }
    labels
}

/// Measured residuals of the PVM axioms.
#[derive(Debug, Clone, PartialEq)]
pub struct PvmReport {
    /// Largest `‖P² − P‖_F` over atoms.
    pub idempotent: f64,
    /// Largest `‖P* − P‖_F` over atoms.
    pub selfadjoint: f64,
    /// Largest `‖P_i P_j‖_F`, `i ≠ j`.
    pub orthogonality: f64,
    /// `‖Σ P − I‖_F`.
    pub resolution: f64,
    /// Largest `‖E(⊔B_n) − Σ E(B_n)‖_F` over the tested partitions.
    pub additivity: f64,
    /// Atom points pairwise distinct.
    pub distinct_points: bool,
    /// Smallest `‖P‖_F` over atoms (zero projections are not allowed).
    pub min_proj_norm: f64,
    pub tol: f64,
}

impl PvmReport {
    /// PVM1: every `E(B)` is an orthogonal projection. For a finite PVM this
    /// is atomwise projection plus mutual orthogonality.
    pub fn pvm1(&self) -> bool {
        self.idempotent <= self.tol && self.selfadjoint <= self.tol && self.orthogonality <= self.tol
    }

    /// PVM2: `E(X) = I`.
    pub fn pvm2(&self) -> bool {
        self.resolution <= self.tol
    }

    /// PVM3 in its finite form.
    pub fn pvm3(&self) -> bool {
        self.additivity <= self.tol
    }

    pub fn passed(&self) -> bool {
        self.pvm1() && self.pvm2() && self.pvm3() && self.distinct_points && self.min_proj_norm >= ZERO_PROJ
    }

    /// Largest measured residual.
    pub fn max_residual(&self) -> f64 {
        self.idempotent
            .max(self.selfadjoint)
            .max(self.orthogonality)
            .max(self.resolution)
            .max(self.additivity)
    }
}

/// Checks (PVM1)–(PVM3). Additivity is tested on the partition of the atom
/// points into singletons and on its two-block coarsening, each against the
/// measure of the union of the blocks.
pub fn verify_pvm_axioms(e: &Pvm) -> PvmReport {
    let atoms = e.atoms();
    let mut idempotent: f64 = 0.0;
    let mut selfadjoint: f64 = 0.0;
    let mut orthogonality: f64 = 0.0;
    let mut min_proj_norm = f64::INFINITY;
    for (i, a) in atoms.iter().enumerate() {
        idempotent = idempotent.max((&(&a.proj * &a.proj) - &a.proj).frobenius_norm());
        selfadjoint = selfadjoint.max(a.proj.hermitian_defect());
        min_proj_norm = min_proj_norm.min(a.proj.frobenius_norm());
        for b in &atoms[i + 1..] {
            orthogonality = orthogonality.max((&a.proj * &b.proj).frobenius_norm());
        }
    }
    let resolution = (&e.total() - &ComplexMatrix::identity(e.dim())).frobenius_norm();

    let distinct_points = atoms
        .iter()
        .enumerate()
        .all(|(i, a)| atoms[i + 1..].iter().all(|b| a.point != b.point));

    let singletons: Vec<BorelSetExpr> = atoms
        .iter()
        .filter_map(|a| BorelSetExpr::singleton(&a.point).ok())
        .collect();
    let mut additivity: f64 = 0.0;
    let half = singletons.len() / 2;
    let blocks: [Vec<BorelSetExpr>; 2] = [
        singletons.clone(),
        [&singletons[..half], &singletons[half..]]
            .iter()
            .filter_map(|part| BorelSetExpr::union(part).ok())
            .collect(),
    ];
    for partition in &blocks {
        let Ok(union) = BorelSetExpr::union(partition) else {
            continue;
        };
        let Ok(whole) = measure_of(e, &union) else {
            continue;
        };
        let mut sum = ComplexMatrix::zeros(e.dim());
        for b in partition {
            if let Ok(m) = measure_of(e, b) {
                sum = &sum + &m;
            }
        }
        additivity = additivity.max((&whole - &sum).frobenius_norm());
    }

    PvmReport {
        idempotent,
        selfadjoint,
        orthogonality,
        resolution,
        additivity,
        distinct_points,
        min_proj_norm: if atoms.is_empty() { 0.0 } else { min_proj_norm },
        tol: AXIOM_TOL,
    }
}

/// `E(B)`: sum of projections of atoms whose point lies in `B`.
pub fn measure_of(e: &Pvm, b: &BorelSetExpr) -> Result<ComplexMatrix> {
    e.check_arity(b.arity())?;
    let mut acc = ComplexMatrix::zeros(e.dim());
    for a in e.atoms() {
        if b.contains(&a.point) {
            acc = &acc + &a.proj;
        }
    }
    Ok(acc)
}

/// `B` is `E`-null iff no atom point lies in it.
pub fn is_null_set(e: &Pvm, b: &BorelSetExpr) -> Result<bool> {
    e.check_arity(b.arity())?;
    Ok(e.atoms().iter().all(|a| !b.contains(&a.point)))
}

/// The support of a finite PVM: its atom points.
pub fn support_of(e: &Pvm) -> Vec<Vec<C64>> {
    e.atoms().iter().map(|a| a.point.clone()).collect()
}

/// Image measure `E ∘ φ⁻¹` for `φ = (φ_1, …, φ_m)`. Atoms with identical
/// images are merged by summing their projections.
pub fn pvm_pushforward(e: &Pvm, phi: &[FuncExpr]) -> Result<Pvm> {
    if phi.is_empty() {
        return Err(Error::Invalid("push-forward needs at least one component"));
    }
    for f in phi {
        e.check_arity(f.arity())?;
    }
    let mut atoms: Vec<Atom> = Vec::new();
    for a in e.atoms() {
        let image: Vec<C64> = phi.iter().map(|f| f.eval(&a.point)).collect();
        match atoms.iter_mut().find(|b| b.point == image) {
            Some(b) => b.proj = &b.proj + &a.proj,
            None => atoms.push(Atom {
                point: image,
                proj: a.proj.clone(),
            }),
        }
    }
    Pvm::from_atoms(phi.len(), e.dim(), atoms)
}

/// Product of PVMs whose projections commute: atoms at concatenated points,
/// projections the products of the factors' projections. Vanishing products
/// are dropped.
pub fn pvm_product(es: &[Pvm]) -> Result<Pvm> {
    let Some(first) = es.first() else {
        return Err(Error::Invalid("product of an empty family"));
    };
    let dim = first.dim();
    for e in es {
        if e.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: e.dim(),
            });
        }
    }
    for i in 0..es.len() {
        for j in i + 1..es.len() {
            for a in es[i].atoms() {
                for b in es[j].atoms() {
                    let residual = a.proj.commutator(&b.proj).frobenius_norm();
                    if residual > AXIOM_TOL * (a.proj.frobenius_norm() * b.proj.frobenius_norm()).max(1.0) {
                        return Err(Error::NotCommuting {
                            first: i,
                            second: j,
                            residual,
                        });
                    }
                }
            }
        }
    }
    let mut atoms: Vec<Atom> = first.atoms().to_vec();
    for e in &es[1..] {
        let mut next = Vec::new();
        for a in &atoms {
            for b in e.atoms() {
                let prod = &a.proj * &b.proj;
                if prod.frobenius_norm() < ZERO_PROJ {
                    continue;
                }
                let mut point = a.point.clone();
                point.extend_from_slice(&b.point);
                next.push(Atom {
                    point,
                    proj: prod.clean_projection(),
                });
            }
        }
        atoms = next;
    }
    let d = es.iter().map(Pvm::d).sum();
    Pvm::from_atoms(d, dim, atoms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcexpr::parse_expr;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn find<'a>(e: &'a Pvm, point: &[C64]) -> &'a ComplexMatrix {
        &e.atoms().iter().find(|a| a.point == point).expect("atom present").proj
    }

    fn close(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) -> bool {
        (a - b).frobenius_norm() <= tol
    }

    #[test]
    fn diagonal_with_repeat() {
        let e = pvm_from_normal(&ComplexMatrix::real_diag(&[1.0, 1.0, 2.0]), None).unwrap();
        assert_eq!(e.atoms().len(), 2);
        assert!(close(find(&e, &[c(1.0)]), &ComplexMatrix::real_diag(&[1.0, 1.0, 0.0]), 1e-12));
        assert!(close(find(&e, &[c(2.0)]), &ComplexMatrix::real_diag(&[0.0, 0.0, 1.0]), 1e-12));
        assert!(verify_pvm_axioms(&e).passed());
    }

    #[test]
    fn near_degenerate_pair_merges() {
        let a = ComplexMatrix::real_diag(&[1.0, 1.0 + 1e-14]);
        let e = pvm_from_normal(&a, Some(1e-12)).unwrap();
        assert_eq!(e.atoms().len(), 1);
        let mean = (1.0 + (1.0 + 1e-14)) / 2.0;
        assert!((e.atoms()[0].point[0].re - mean).abs() < 1e-15);
        assert!(close(&e.atoms()[0].proj, &ComplexMatrix::identity(2), 1e-12));
    }

    #[test]
    fn clusters_with_equal_means_share_an_atom() {
        // With delta 0, {a, a, a} and {b} are separate clusters, but the
        // rounded mean of the first equals b.
        let a = 0.46915570937630025;
        let b = 0.4691557093763003;
        assert_eq!((a + a + a) / 3.0, b);
        let points = [a, a, b, a].map(|x| vec![c(x)]);
        let e = pvm_from_eigenbasis(&ComplexMatrix::identity(4), &points, &[0.0]).unwrap();
        assert_eq!(e.atoms().len(), 1);
        assert_eq!(e.atoms()[0].point, [c(b)]);
        assert!(close(&e.atoms()[0].proj, &ComplexMatrix::identity(4), 1e-15));
        assert!(verify_pvm_axioms(&e).passed());
    }

    #[test]
    fn chained_cluster_is_ambiguous() {
        let a = ComplexMatrix::real_diag(&[0.0, 0.9, 1.8, 2.7, 3.6]);
        assert!(matches!(
            pvm_from_normal(&a, Some(1.0)),
            Err(Error::ClusterAmbiguity { .. })
        ));
    }

    #[test]
    fn symmetric_two_by_two() {
        let a = ComplexMatrix::from_real_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let e = pvm_from_normal(&a, None).unwrap();
        assert_eq!(e.atoms().len(), 2);
        let plus = ComplexMatrix::from_real_rows(&[vec![0.5, 0.5], vec![0.5, 0.5]]).unwrap();
        let minus = ComplexMatrix::from_real_rows(&[vec![0.5, -0.5], vec![-0.5, 0.5]]).unwrap();
        let p3 = &e.atoms().iter().find(|x| (x.point[0] - 3.0).norm() < 1e-12).unwrap().proj;
        let p1 = &e.atoms().iter().find(|x| (x.point[0] - 1.0).norm() < 1e-12).unwrap().proj;
        assert!(close(p3, &plus, 1e-12));
        assert!(close(p1, &minus, 1e-12));
        assert!(close(&e.coordinate_operator(0), &a, 1e-12));
    }

    #[test]
    fn half_identity_atoms_fail_pvm1() {
        let half = ComplexMatrix::identity(2).scale_real(0.5);
        let e = Pvm::from_atoms(
            1,
            2,
            vec![
                Atom { point: vec![c(1.0)], proj: half.clone() },
                Atom { point: vec![c(2.0)], proj: half },
            ],
        )
        .unwrap();
        let r = verify_pvm_axioms(&e);
        assert!(!r.pvm1());
        // ‖P² − P‖ = ¼‖I₂‖_F
        assert!((r.idempotent - 0.25 * 2f64.sqrt()).abs() < 1e-15);
        assert!(r.pvm2());
    }

    #[test]
    fn missing_projection_fails_pvm2() {
        let e = Pvm::from_atoms(
            1,
            2,
            vec![Atom {
                point: vec![c(1.0)],
                proj: ComplexMatrix::real_diag(&[1.0, 0.0]),
            }],
        )
        .unwrap();
        let r = verify_pvm_axioms(&e);
        assert!(r.pvm1() && !r.pvm2());
    }

    #[test]
    fn measures_and_null_sets() {
        let e = pvm_from_normal(&ComplexMatrix::real_diag(&[1.0, 2.0]), None).unwrap();
        let full = BorelSetExpr::full(1);
        assert!(close(&measure_of(&e, &full).unwrap(), &ComplexMatrix::identity(2), 1e-15));
        let s1 = BorelSetExpr::singleton(&[c(1.0)]).unwrap();
        assert!(close(&measure_of(&e, &s1).unwrap(), &ComplexMatrix::real_diag(&[1.0, 0.0]), 1e-15));
        let far = BorelSetExpr::closed_ball(&[c(5.0)], 0.1).unwrap();
        assert_eq!(measure_of(&e, &far).unwrap().frobenius_norm(), 0.0);
        assert!(is_null_set(&e, &BorelSetExpr::empty(1)).unwrap());
        assert!(!is_null_set(&e, &s1).unwrap());
        let s2 = BorelSetExpr::singleton(&[c(2.0)]).unwrap();
        let rest = BorelSetExpr::union(&[s1, s2]).unwrap().complement();
        assert!(is_null_set(&e, &rest).unwrap());
        assert!(matches!(measure_of(&e, &BorelSetExpr::full(2)), Err(Error::Arity { .. })));
    }

    #[test]
    fn supports() {
        let e = pvm_from_normal(&ComplexMatrix::real_diag(&[1.0, 2.0, 2.0]), None).unwrap();
        let mut s: Vec<f64> = support_of(&e).iter().map(|p| p[0].re).collect();
        s.sort_by(f64::total_cmp);
        assert_eq!(s, [1.0, 2.0]);
        let rot = ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![-1.0, 0.0]]).unwrap();
        let s = support_of(&pvm_from_normal(&rot, None).unwrap());
        assert_eq!(s.len(), 2);
        assert!(s.iter().any(|p| (p[0] - C64::i()).norm() < 1e-12));
        assert!(s.iter().any(|p| (p[0] + C64::i()).norm() < 1e-12));
        let s = support_of(&pvm_from_normal(&ComplexMatrix::identity(3), None).unwrap());
        assert_eq!(s, [vec![c(1.0)]]);
    }

    #[test]
    fn pushforwards() {
        let e = pvm_from_normal(&ComplexMatrix::real_diag(&[-1.0, 1.0]), None).unwrap();
        let id = pvm_pushforward(&e, &[FuncExpr::z()]).unwrap();
        assert_eq!(id, e);
        let sq = pvm_pushforward(&e, &[parse_expr("z^2", 1).unwrap()]).unwrap();
        assert_eq!(sq.atoms().len(), 1);
        assert_eq!(sq.atoms()[0].point, [c(1.0)]);
        assert!(close(&sq.atoms()[0].proj, &ComplexMatrix::identity(2), 1e-15));

        let e = pvm_from_normal(&ComplexMatrix::real_diag(&[1.0, 4.0]), None).unwrap();
        let r = pvm_pushforward(&e, &[parse_expr("sqrt(z1)", 1).unwrap()]).unwrap();
        assert!(close(find(&r, &[c(1.0)]), &ComplexMatrix::real_diag(&[1.0, 0.0]), 1e-12));
        assert!(close(find(&r, &[c(2.0)]), &ComplexMatrix::real_diag(&[0.0, 1.0]), 1e-12));
    }

    #[test]
    fn products() {
        let a = pvm_from_normal(&ComplexMatrix::real_diag(&[1.0, 2.0]), None).unwrap();
        let b = pvm_from_normal(&ComplexMatrix::real_diag(&[3.0, 4.0]), None).unwrap();
        let p = pvm_product(&[a.clone(), b]).unwrap();
        assert_eq!(p.d(), 2);
        assert_eq!(p.atoms().len(), 2);
        assert!(close(find(&p, &[c(1.0), c(3.0)]), &ComplexMatrix::real_diag(&[1.0, 0.0]), 1e-12));
        assert!(close(find(&p, &[c(2.0), c(4.0)]), &ComplexMatrix::real_diag(&[0.0, 1.0]), 1e-12));

        let t = Pvm::trivial(2, &[C64::new(0.0, 7.0)]).unwrap();
        let p = pvm_product(&[a.clone(), t]).unwrap();
        assert!(close(find(&p, &[c(1.0), C64::new(0.0, 7.0)]), &ComplexMatrix::real_diag(&[1.0, 0.0]), 1e-12));

        let p = pvm_product(&[a.clone(), a.clone()]).unwrap();
        assert_eq!(p.atoms().len(), 2);
        assert!(close(find(&p, &[c(2.0), c(2.0)]), &ComplexMatrix::real_diag(&[0.0, 1.0]), 1e-12));

        let swap = ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let s = pvm_from_normal(&swap, None).unwrap();
        assert!(matches!(pvm_product(&[a, s]), Err(Error::NotCommuting { .. })));
    }
}
