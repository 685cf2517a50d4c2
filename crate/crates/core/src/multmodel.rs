//! Multiplication operators on a truncated weighted `ℓ²` space.
//!
//! A [`DiscreteMeasureSpace`] is `N` atoms with weights `w_k ≥ 0` and
//! complex labels; a multiplier `a` acts by `(M_a x)_k = a(label_k)·x_k`.
//! Unbounded multipliers show up as norms that keep growing with `N`.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)] // inherent when std is linked
use num_traits::Float;

use crate::error::{Error, Result};
use crate::funcexpr::{BorelSetExpr, FuncExpr};
use crate::matnum::{ComplexMatrix, C64};
use crate::pvm::{Atom, Pvm};

/// Tolerance of the regularizer-independence check.
pub const EXTENSION_TOL: f64 = 1e-10;

/// Tolerance of the transform identities at the labels.
pub const TRANSFORM_TOL: f64 = 1e-12;

/// Coefficients of a vector in `ℓ²` of a discrete space.
pub type SeqVector = Vec<C64>;

#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteMeasureSpace {
    weights: Vec<f64>,
    labels: Vec<C64>,
}

impl DiscreteMeasureSpace {
    pub fn new(weights: Vec<f64>, labels: Vec<C64>) -> Result<Self> {
        if weights.len() != labels.len() {
            return Err(Error::LengthMismatch {
                expected: labels.len(),
                found: weights.len(),
            });
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::Invalid("weights must be finite and nonnegative"));
        }
        if labels.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::Invalid("labels must be finite"));
        }
        if !weights.iter().any(|w| *w > 0.0) {
            return Err(Error::Invalid("at least one weight must be positive"));
        }
        Ok(Self { weights, labels })
    }

    /// Labels `0, 1, …, n−1` with unit weights.
    pub fn integers(n: usize) -> Result<Self> {
        Self::new(vec![1.0; n], (0..n).map(|k| C64::new(k as f64, 0.0)).collect())
    }

    /// Truncation level `N`.
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn labels(&self) -> &[C64] {
        &self.labels
    }

    fn positive(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(|&k| self.weights[k] > 0.0)
    }

    /// Weighted norm `(Σ w_k |x_k|²)^{1/2}`.
    pub fn norm(&self, x: &[C64]) -> f64 {
        x.iter()
            .zip(&self.weights)
            .map(|(z, w)| w * z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

fn require_unary(f: &FuncExpr) -> Result<()> {
    if f.arity() == 1 {
        Ok(())
    } else {
        Err(Error::Arity {
            expected: 1,
            found: f.arity(),
        })
    }
}

/// `M_a` on a discrete space.
#[derive(Debug, Clone, PartialEq)]
pub struct MultOp {
    pub space: DiscreteMeasureSpace,
    pub multiplier: FuncExpr,
}

impl MultOp {
    pub fn new(space: DiscreteMeasureSpace, multiplier: FuncExpr) -> Result<Self> {
        require_unary(&multiplier)?;
        Ok(Self { space, multiplier })
    }

    /// `a(label_k)` for every atom.
    pub fn symbol(&self) -> Vec<C64> {
        self.space.labels.iter().map(|&l| self.multiplier.eval1(l)).collect()
    }
}

/// `(M_a x)_k = a(label_k)·x_k`.
pub fn mult_apply(m: &MultOp, x: &[C64]) -> Result<SeqVector> {
    if x.len() != m.space.len() {
        return Err(Error::LengthMismatch {
            expected: m.space.len(),
            found: x.len(),
        });
    }
    Ok(m.symbol().iter().zip(x).map(|(a, v)| a * v).collect())
}

/// `‖M_a‖` on each truncation `N ∈ ns`: the largest `|a|` over positive
/// weight atoms among the first `N`. Levels beyond the space are capped.
pub fn mult_norm_growth(space: &DiscreteMeasureSpace, multiplier: &FuncExpr, ns: &[usize]) -> Result<Vec<f64>> {
    require_unary(multiplier)?;
    Ok(ns
        .iter()
        .map(|&n| {
            space
                .positive()
                .take_while(|&k| k < n)
                .map(|k| multiplier.eval1(space.labels[k]).norm())
                .fold(0.0, f64::max)
        })
        .collect())
}

/// `(μ-null, Φ-null)` for `B`: no positive-weight atom in `B`, and
/// `M_{𝟙_B} = 0` on `L²(μ)`.
pub fn null_set_equivalence(space: &DiscreteMeasureSpace, b: &BorelSetExpr) -> Result<(bool, bool)> {
    if b.arity() != 1 {
        return Err(Error::Arity {
            expected: 1,
            found: b.arity(),
        });
    }
    let mu_null = (0..space.len())
        .filter(|&k| b.contains(&[space.labels[k]]))
        .all(|k| space.weights[k] == 0.0);
    // ‖M_{𝟙_B}𝟙‖² = Σ_k w_k·𝟙_B(λ_k), zero iff every positive-weight
    // basis vector is killed.
    let m = MultOp::new(space.clone(), FuncExpr::indicator(b))?;
    let ones = vec![C64::new(1.0, 0.0); space.len()];
    let phi_null = space.norm(&mult_apply(&m, &ones)?) == 0.0;
    Ok((mu_null, phi_null))
}

/// The regularizer `1/(1 + |f|)`.
pub fn default_regularizer(f: &FuncExpr) -> FuncExpr {
    f.abs().add(&FuncExpr::real(f.arity(), 1.0)).expect("same arity").inv()
}

/// The alternative regularizer `1/(1 + |f|²)`.
pub fn square_regularizer(f: &FuncExpr) -> FuncExpr {
    f.abs_sq().add(&FuncExpr::real(f.arity(), 1.0)).expect("same arity").inv()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExtensionReport {
    /// Truncation level.
    pub n: usize,
    /// Largest `|y_k − f_k x_k| / max(1, |f_k x_k|)` where `Φ(e)y = Φ(ef)x`.
    pub discrepancy: f64,
    /// Largest relative difference between the solutions for `e` and for
    /// `1/(1 + |f|²)`.
    pub regularizer_gap: f64,
    pub samples: usize,
    pub tol: f64,
}

impl ExtensionReport {
    pub fn passed(&self) -> bool {
        self.discrepancy <= self.tol && self.regularizer_gap <= self.tol
    }
}

fn solve_regularized(
    space: &DiscreteMeasureSpace,
    f: &FuncExpr,
    e: &FuncExpr,
    x: &[C64],
) -> Result<SeqVector> {
    let ef = e.mul(f)?;
    let mut y = vec![C64::new(0.0, 0.0); space.len()];
    for k in space.positive() {
        let l = space.labels[k];
        let ek = e.eval1(l);
        if ek == C64::new(0.0, 0.0) {
            return Err(Error::RegularizerVanishes { index: k });
        }
        y[k] = ef.eval1(l) * x[k] / ek;
    }
    Ok(y)
}

/// Recovers `Φ(f)x` as the solution of `Φ(e)y = Φ(ef)x` and compares it
/// with the direct product `f·x`, for `e` (default `1/(1+|f|)`) and for
/// `1/(1+|f|²)`.
pub fn algebraic_extension_check(
    space: &DiscreteMeasureSpace,
    f: &FuncExpr,
    e: Option<&FuncExpr>,
    samples: &[SeqVector],
) -> Result<ExtensionReport> {
    require_unary(f)?;
    let e = e.cloned().unwrap_or_else(|| default_regularizer(f));
    require_unary(&e)?;
    let e2 = square_regularizer(f);
    let mut discrepancy: f64 = 0.0;
    let mut gap: f64 = 0.0;
    for x in samples {
        if x.len() != space.len() {
            return Err(Error::LengthMismatch {
                expected: space.len(),
                found: x.len(),
            });
        }
        let y = solve_regularized(space, f, &e, x)?;
        let y2 = solve_regularized(space, f, &e2, x)?;
        for k in space.positive() {
            let direct = f.eval1(space.labels[k]) * x[k];
            discrepancy = discrepancy.max((y[k] - direct).norm() / direct.norm().max(1.0));
            gap = gap.max((y[k] - y2[k]).norm() / y[k].norm().max(1.0));
        }
    }
    Ok(ExtensionReport {
        n: space.len(),
        discrepancy,
        regularizer_gap: gap,
        samples: samples.len(),
        tol: EXTENSION_TOL,
    })
}

/// Is `λ` in the essential range of `f`, judged at this truncation: some
/// positive-weight atom has `|f(label) − λ| ≤ ε`. A `true` is conclusive for
/// any larger truncation; a `false` only for this one.
pub fn essran_membership(space: &DiscreteMeasureSpace, f: &FuncExpr, lambda: C64, eps: f64) -> Result<bool> {
    require_unary(f)?;
    Ok(space
        .positive()
        .any(|k| (f.eval1(space.labels[k]) - lambda).norm() <= eps))
}

/// The bounded functions `t = 1/(1+|f|²)`, `s = f/(1+|f|²)` and the bounded
/// transform `ζ = f/√(1+|f|²)` of `f`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransformFunctions {
    pub t: FuncExpr,
    pub s: FuncExpr,
    pub zeta: FuncExpr,
}

pub fn transform_functions(f: &FuncExpr) -> Result<TransformFunctions> {
    require_unary(f)?;
    let one = FuncExpr::real(1, 1.0);
    let denom = f.abs_sq().add(&one)?;
    let t = denom.inv();
    let s = f.mul(&t)?;
    let zeta = f.mul(&denom.sqrt().inv())?;
    Ok(TransformFunctions { t, s, zeta })
}

/// Largest violations of `s/t = f` (relative to `max(1, |f|)`) and of
/// `ζ/√(1 − |ζ|²) = f` (relative to `max(1, |f|²)`, the conditioning of
/// recovering `f` from `ζ`) at the labels.
pub fn transform_identity_residuals(space: &DiscreteMeasureSpace, f: &FuncExpr) -> Result<(f64, f64)> {
    let tf = transform_functions(f)?;
    let mut st: f64 = 0.0;
    let mut zz: f64 = 0.0;
    for &l in &space.labels {
        let fv = f.eval1(l);
        let ratio = tf.s.eval1(l) / tf.t.eval1(l);
        st = st.max((ratio - fv).norm() / fv.norm().max(1.0));
        let z = tf.zeta.eval1(l);
        let back = z / (1.0 - z.norm_sqr()).sqrt();
        zz = zz.max((back - fv).norm() / fv.norm_sqr().max(1.0));
    }
    Ok((st, zz))
}

/// Approximate identity `e_n = n/(n + |f|)`: bounded by 1, `e_n·f` bounded
/// by `n`, and `e_n → 1` pointwise.
pub fn approximate_identity(f: &FuncExpr, n: f64) -> FuncExpr {
    f.abs()
        .add(&FuncExpr::real(f.arity(), n))
        .expect("same arity")
        .inv()
        .scalar(C64::new(n, 0.0))
}

/// The multiplication calculus as a PVM on the positive-weight atoms:
/// equal labels share one atom, projections are coordinate projections.
pub fn to_pvm(space: &DiscreteMeasureSpace) -> Result<Pvm> {
    let live: Vec<usize> = space.positive().collect();
    let m = live.len();
    let mut atoms: Vec<Atom> = Vec::new();
    for (r, &k) in live.iter().enumerate() {
        let l = space.labels[k];
        let idx = match atoms.iter().position(|a| a.point[0] == l) {
            Some(i) => i,
            None => {
                atoms.push(Atom {
                    point: vec![l],
                    proj: ComplexMatrix::zeros(m),
                });
                atoms.len() - 1
            }
        };
        atoms[idx].proj[(r, r)] = C64::new(1.0, 0.0);
    }
    Pvm::from_atoms(1, m, atoms)
}
