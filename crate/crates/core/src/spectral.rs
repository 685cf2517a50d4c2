//! Spectra of `Φ(f)` and the multiplication-operator representation.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)] // inherent when std is linked
use num_traits::Float;

use crate::calculus::BorelCalculus;
use crate::error::{Error, Result};
use crate::funcexpr::FuncExpr;
use crate::matnum::{inner, vec_norm, ComplexMatrix, C64};
use crate::multmodel::DiscreteMeasureSpace;

/// Atoms carrying less mass than this in a cyclic block are left out of
/// the block's measure.
pub const MIN_WEIGHT: f64 = 1e-14;

// A candidate cyclic vector is used only if this much of it lies outside
// the blocks built so far.
const FRESH_NORM: f64 = 1e-8;

/// `essran_Φ(f)`: for a finite PVM, the set of values `f(λ_i)`. Values are
/// deduplicated by exact equality, in atom order.
pub fn essential_range(phi: &BorelCalculus, f: &FuncExpr) -> Result<Vec<C64>> {
    Ok(grouped_values(phi, f)?.into_iter().map(|(v, _)| v).collect())
}

fn grouped_values(phi: &BorelCalculus, f: &FuncExpr) -> Result<Vec<(C64, Vec<usize>)>> {
    if f.arity() != phi.pvm().d() {
        return Err(Error::Arity {
            expected: phi.pvm().d(),
            found: f.arity(),
        });
    }
    let mut out: Vec<(C64, Vec<usize>)> = Vec::new();
    for (i, a) in phi.atoms().iter().enumerate() {
        let v = f.eval(&a.point);
        match out.iter_mut().find(|(w, _)| *w == v) {
            Some((_, idx)) => idx.push(i),
            None => out.push((v, vec![i])),
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralReport {
    pub spectrum: Vec<C64>,
    /// Equal to the spectrum in finite dimension.
    pub point_spectrum: Vec<C64>,
    /// Approximate point spectrum; equal to the spectrum.
    pub approximate_point_spectrum: Vec<C64>,
    /// `(μ, Φ(𝟙_{f = μ}))` for every spectral value `μ`.
    pub eigenprojections: Vec<(C64, ComplexMatrix)>,
    /// Values are grouped by exact equality.
    pub essran_tol: f64,
}

/// Spectrum, point spectrum and eigenprojections of `Φ(f)`.
pub fn spectral_report(phi: &BorelCalculus, f: &FuncExpr) -> Result<SpectralReport> {
    let groups = grouped_values(phi, f)?;
    let n = phi.pvm().dim();
    let mut eigenprojections = Vec::with_capacity(groups.len());
    for (v, idx) in &groups {
        let mut p = ComplexMatrix::zeros(n);
        for &i in idx {
            p = &p + &phi.atoms()[i].proj;
        }
        eigenprojections.push((*v, p));
    }
    let spectrum: Vec<C64> = groups.iter().map(|(v, _)| *v).collect();
    Ok(SpectralReport {
        point_spectrum: spectrum.clone(),
        approximate_point_spectrum: spectrum.clone(),
        spectrum,
        eigenprojections,
        essran_tol: 0.0,
    })
}

/// `‖Φ(f)‖ = max_i |f(λ_i)|`.
pub fn operator_norm_via_calculus(phi: &BorelCalculus, f: &FuncExpr) -> Result<f64> {
    phi.sup_on_atoms(f)
}

/// One cyclic subspace `span{P_i x}`.
#[derive(Debug, Clone, PartialEq)]
pub struct CyclicBlock {
    /// Unit cyclic vector generating the block.
    pub vector: Vec<C64>,
    /// Atoms with positive mass `μ_x({λ_i}) = ‖P_i x‖²`.
    pub atoms: Vec<usize>,
    pub weights: Vec<f64>,
}

impl CyclicBlock {
    pub fn dim(&self) -> usize {
        self.atoms.len()
    }
}

/// `Φ(f) = U*·M_{Tf}·U` with `M_{Tf}` diagonal.
///
/// Row `r` of `U` is the unit vector `P_i x / ‖P_i x‖` of one (block, atom)
/// pair, that is, `U` maps into the orthonormal basis `𝟙_{λ_i}/√μ_x({λ_i})`
/// of `⊕_x L²(μ_x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CyclicDecomposition {
    pub blocks: Vec<CyclicBlock>,
    pub unitary: ComplexMatrix,
    /// Atom point attached to each row of `U`.
    pub labels: Vec<Vec<C64>>,
    /// Weight attached to each row of `U`.
    pub weights: Vec<f64>,
}

impl CyclicDecomposition {
    pub fn cyclic_vectors(&self) -> Vec<Vec<C64>> {
        self.blocks.iter().map(|b| b.vector.clone()).collect()
    }

    /// Diagonal of `M_{Tf}`: `f` at each row label.
    pub fn multiplier(&self, f: &FuncExpr) -> Vec<C64> {
        self.labels.iter().map(|p| f.eval(p)).collect()
    }

    /// `‖U·Φ(f)·U* − diag(Tf)‖_F`.
    pub fn residual(&self, phi: &BorelCalculus, f: &FuncExpr) -> Result<f64> {
        let m = phi.apply(f)?;
        let conj = &(&self.unitary * &m) * &self.unitary.adjoint();
        Ok((&conj - &ComplexMatrix::diag(&self.multiplier(f))).frobenius_norm())
    }

    /// The weighted discrete space `⊕_x L²(μ_x)` (scalar calculi only).
    pub fn measure_space(&self) -> Result<DiscreteMeasureSpace> {
        let labels = self
            .labels
            .iter()
            .map(|p| match p.as_slice() {
                [z] => Ok(*z),
                _ => Err(Error::Arity {
                    expected: 1,
                    found: p.len(),
                }),
            })
            .collect::<Result<Vec<_>>>()?;
        DiscreteMeasureSpace::new(self.weights.clone(), labels)
    }
}

/// Greedy cyclic decomposition using standard basis vectors as candidates.
pub fn multiplication_representation(phi: &BorelCalculus) -> CyclicDecomposition {
    let n = phi.pvm().dim();
    let candidates: Vec<Vec<C64>> = (0..n)
        .map(|k| (0..n).map(|i| C64::new(if i == k { 1.0 } else { 0.0 }, 0.0)).collect())
        .collect();
    multiplication_representation_from(phi, &candidates)
}

/// Greedy cyclic decomposition trying `candidates` first, then the standard
/// basis vectors.
pub fn multiplication_representation_from(phi: &BorelCalculus, candidates: &[Vec<C64>]) -> CyclicDecomposition {
    let n = phi.pvm().dim();
    let standard = (0..n).map(|k| (0..n).map(|i| C64::new(if i == k { 1.0 } else { 0.0 }, 0.0)).collect());
    let mut rows: Vec<Vec<C64>> = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    let mut blocks = Vec::new();
    for cand in candidates.iter().cloned().chain(standard) {
        if rows.len() >= n {
            break;
        }
        if cand.len() != n {
            continue;
        }
        let Some(x) = orthogonalize(cand, &rows) else {
            continue;
        };
        let mut block = CyclicBlock {
            vector: x.clone(),
            atoms: Vec::new(),
            weights: Vec::new(),
        };
        for (i, a) in phi.atoms().iter().enumerate() {
            let px = a.proj.mul_vec(&x);
            let w = vec_norm(&px).powi(2);
            if w < MIN_WEIGHT {
                continue;
            }
            let Some(u) = orthogonalize(px, &rows) else {
                continue;
            };
            rows.push(u);
            labels.push(a.point.clone());
            weights.push(w);
            block.atoms.push(i);
            block.weights.push(w);
        }
        if !block.atoms.is_empty() {
            blocks.push(block);
        }
    }
    let unitary = ComplexMatrix::from_fn(n, |r, c| rows.get(r).map_or(C64::new(0.0, 0.0), |u| u[c].conj()));
    CyclicDecomposition {
        blocks,
        unitary,
        labels,
        weights,
    }
}

// Gram–Schmidt (twice) against `basis`; `None` when too little remains.
fn orthogonalize(mut v: Vec<C64>, basis: &[Vec<C64>]) -> Option<Vec<C64>> {
    let start = vec_norm(&v);
    if start == 0.0 {
        return None;
    }
    for _ in 0..2 {
        for q in basis {
            let c = inner(&v, q);
            for (vi, qi) in v.iter_mut().zip(q) {
                *vi -= c * qi;
            }
        }
    }
    let norm = vec_norm(&v);
    if norm < FRESH_NORM * start.max(1.0) {
        return None;
    }
    Some(v.into_iter().map(|z| z / norm).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcexpr::parse_expr;

    fn calc(d: &[f64]) -> BorelCalculus {
        BorelCalculus::from_normal(&ComplexMatrix::real_diag(d)).unwrap()
    }

    fn sorted_re(v: &[C64]) -> Vec<f64> {
        let mut r: Vec<f64> = v.iter().map(|z| z.re).collect();
        r.sort_by(f64::total_cmp);
        r
    }

    #[test]
    fn essential_ranges() {
        assert_eq!(sorted_re(&essential_range(&calc(&[1.0, 2.0, 2.0]), &FuncExpr::z()).unwrap()), [1.0, 2.0]);
        let ind = parse_expr("ind(singleton(2))", 1).unwrap();
        assert_eq!(sorted_re(&essential_range(&calc(&[1.0, 2.0, 3.0]), &ind).unwrap()), [0.0, 1.0]);
        let rot = ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![-1.0, 0.0]]).unwrap();
        let r = essential_range(&BorelCalculus::from_normal(&rot).unwrap(), &FuncExpr::z()).unwrap();
        assert_eq!(r.len(), 2);
        assert!(r.iter().any(|z| (z - C64::i()).norm() < 1e-12));
        assert!(r.iter().any(|z| (z + C64::i()).norm() < 1e-12));
    }

    #[test]
    fn reports() {
        let sq = parse_expr("z^2", 1).unwrap();
        let r = spectral_report(&calc(&[1.0, 2.0]), &sq).unwrap();
        assert_eq!(sorted_re(&r.spectrum), [1.0, 4.0]);
        let p4 = &r.eigenprojections.iter().find(|(v, _)| v.re == 4.0).unwrap().1;
        assert!((p4 - &ComplexMatrix::real_diag(&[0.0, 1.0])).frobenius_norm() < 1e-12);

        let r = spectral_report(&calc(&[-1.0, 1.0]), &sq).unwrap();
        assert_eq!(r.spectrum, [C64::new(1.0, 0.0)]);
        assert!((&r.eigenprojections[0].1 - &ComplexMatrix::identity(2)).frobenius_norm() < 1e-12);

        let c = FuncExpr::constant(1, C64::new(2.0, 3.0));
        let r = spectral_report(&calc(&[1.0, 5.0, 7.0]), &c).unwrap();
        assert_eq!(r.spectrum, [C64::new(2.0, 3.0)]);
        assert_eq!(r.point_spectrum, r.spectrum);
    }

    #[test]
    fn norms() {
        assert_eq!(operator_norm_via_calculus(&calc(&[1.0, -2.0]), &FuncExpr::z()).unwrap(), 2.0);
        assert_eq!(operator_norm_via_calculus(&calc(&[1.0, -2.0]), &FuncExpr::real(1, 0.0)).unwrap(), 0.0);
        let a = ComplexMatrix::from_real_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let phi = BorelCalculus::from_normal(&a).unwrap();
        let n = operator_norm_via_calculus(&phi, &FuncExpr::z()).unwrap();
        assert!((n - 3.0).abs() < 1e-12);
        assert!((n - phi.apply(&FuncExpr::z()).unwrap().op_norm().unwrap()).abs() < 1e-8);
    }

    #[test]
    fn cyclic_examples() {
        let phi = calc(&[1.0, 2.0]);
        let s = 0.5f64.sqrt();
        let x = vec![C64::new(s, 0.0), C64::new(s, 0.0)];
        let rep = multiplication_representation_from(&phi, &[x]);
        assert_eq!(rep.blocks.len(), 1);
        for w in &rep.blocks[0].weights {
            assert!((w - 0.5).abs() < 1e-15);
        }

        let rep = multiplication_representation(&calc(&[1.0, 1.0]));
        assert_eq!(rep.blocks.len(), 2);
        assert!(rep.blocks.iter().all(|b| b.dim() == 1));

        let t = (1.0f64 / 3.0).sqrt();
        let x = vec![C64::new(t, 0.0); 3];
        let phi = calc(&[1.0, 2.0, 3.0]);
        let rep = multiplication_representation_from(&phi, &[x]);
        assert_eq!(rep.blocks.len(), 1);
        assert_eq!(rep.blocks[0].dim(), 3);
        for w in &rep.blocks[0].weights {
            assert!((w - 1.0 / 3.0).abs() < 1e-15);
        }
        for f in ["z", "z^2 + 1i", "ind(singleton(2))"] {
            assert!(rep.residual(&phi, &parse_expr(f, 1).unwrap()).unwrap() < 1e-12);
        }
    }
}
