//! Borel functions `ℂ^d → ℂ` and Borel sets `B ⊆ ℂ^d` as evaluable trees.
//!
//! These are the arguments of `Φ(f)` and `E(B)`. Every node is total: `inv`
//! sends `0 ↦ 0`, `sqrt` takes the principal branch, and indicator values
//! are exactly `0.0` or `1.0`. The text grammar is documented in
//! `GRAMMAR.md` at the repository root; [`parse_expr`] and [`parse_set`]
//! read it and the `Display` impls write it back.

mod parse;
mod print;

use alloc::boxed::Box;
use alloc::vec::Vec;

#[allow(unused_imports)] // inherent when std is linked
use num_traits::Float;

use crate::error::{Error, Result};
use crate::matnum::C64;

pub use parse::{parse_expr, parse_set, ParseError};

/// Node of a function tree. Coordinates are 1-based (`z1`, `z2`, …).
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(C64),
    Coord(usize),
    Add(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Conj(Box<Expr>),
    Abs(Box<Expr>),
    Re(Box<Expr>),
    Im(Box<Expr>),
    /// Pointwise `1/x` with `0 ↦ 0`.
    Inv(Box<Expr>),
    /// Principal square root, argument in `(−π, π]`.
    Sqrt(Box<Expr>),
    Exp(Box<Expr>),
    /// `z ↦ z` if `|z| ≤ r`, else `r·z/|z|`.
    Clamp(f64, Box<Expr>),
    Indicator(Box<SetNode>),
    /// `outer(inner₁(p), …, inner_m(p))`; `outer` has arity `m`.
    Compose {
        outer: Box<FuncExpr>,
        inners: Vec<Expr>,
    },
}

/// Axis of a half-plane condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Re,
    Im,
}

/// Node of a set tree.
#[derive(Debug, Clone, PartialEq)]
pub enum SetNode {
    Empty,
    Full,
    /// Euclidean ball in `ℂ^d`.
    Ball {
        center: Vec<C64>,
        radius: f64,
        closed: bool,
    },
    /// `{ p : axis(p_coord) ≤ threshold }`, or `<` when `strict`.
    HalfPlane {
        coord: usize,
        axis: Axis,
        threshold: f64,
        strict: bool,
    },
    /// Exact equality of every coordinate.
    Singleton(Vec<C64>),
    Complement(Box<SetNode>),
    Union(Vec<SetNode>),
    Intersection(Vec<SetNode>),
    /// `{ p : f(p) ∈ set }` with `set` of arity 1.
    Preimage {
        f: Box<Expr>,
        set: Box<BorelSetExpr>,
    },
}

/// A Borel function of fixed arity.
#[derive(Debug, Clone, PartialEq)]
pub struct FuncExpr {
    arity: usize,
    root: Expr,
}

/// A Borel set of fixed arity.
#[derive(Debug, Clone, PartialEq)]
pub struct BorelSetExpr {
    arity: usize,
    root: SetNode,
}

fn check_expr(e: &Expr, arity: usize) -> Result<()> {
    match e {
        Expr::Const(c) => {
            if c.re.is_finite() && c.im.is_finite() {
                Ok(())
            } else {
                Err(Error::Invalid("non-finite constant"))
            }
        }
        Expr::Coord(j) => {
            if *j >= 1 && *j <= arity {
                Ok(())
            } else {
                Err(Error::CoordinateOutOfRange { index: *j, arity })
            }
        }
        Expr::Add(a, b) | Expr::Mul(a, b) => {
            check_expr(a, arity)?;
            check_expr(b, arity)
        }
        Expr::Neg(a)
        | Expr::Conj(a)
        | Expr::Abs(a)
        | Expr::Re(a)
        | Expr::Im(a)
        | Expr::Inv(a)
        | Expr::Sqrt(a)
        | Expr::Exp(a) => check_expr(a, arity),
        Expr::Clamp(r, a) => {
            if !(r.is_finite() && *r >= 0.0) {
                return Err(Error::Invalid("clamp radius must be finite and nonnegative"));
            }
            check_expr(a, arity)
        }
        Expr::Indicator(s) => check_set(s, arity),
        Expr::Compose { outer, inners } => {
            if outer.arity != inners.len() {
                return Err(Error::Arity {
                    expected: outer.arity,
                    found: inners.len(),
                });
            }
            inners.iter().try_for_each(|g| check_expr(g, arity))
        }
    }
}

fn check_point(p: &[C64], arity: usize) -> Result<()> {
    if p.len() != arity {
        return Err(Error::Arity {
            expected: arity,
            found: p.len(),
        });
    }
    if p.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::Invalid("non-finite point"))
    }
}

fn check_set(s: &SetNode, arity: usize) -> Result<()> {
    match s {
        SetNode::Empty | SetNode::Full => Ok(()),
        SetNode::Ball { center, radius, .. } => {
            if !(radius.is_finite() && *radius >= 0.0) {
                return Err(Error::Invalid("ball radius must be finite and nonnegative"));
            }
            check_point(center, arity)
        }
        SetNode::HalfPlane {
            coord, threshold, ..
        } => {
            if *coord == 0 || *coord > arity {
                return Err(Error::CoordinateOutOfRange {
                    index: *coord,
                    arity,
                });
            }
            if threshold.is_finite() {
                Ok(())
            } else {
                Err(Error::Invalid("non-finite threshold"))
            }
        }
        SetNode::Singleton(p) => check_point(p, arity),
        SetNode::Complement(a) => check_set(a, arity),
        SetNode::Union(v) | SetNode::Intersection(v) => v.iter().try_for_each(|a| check_set(a, arity)),
        SetNode::Preimage { f, set } => {
            if set.arity != 1 {
                return Err(Error::Arity {
                    expected: 1,
                    found: set.arity,
                });
            }
            check_expr(f, arity)
        }
    }
}

/// Principal square root with the branch cut on the negative real axis
/// approached from above: `sqrt(−4) = 2i` regardless of the sign of zero.
pub fn principal_sqrt(z: C64) -> C64 {
    if z.im == 0.0 {
        if z.re >= 0.0 {
            C64::new(z.re.sqrt(), 0.0)
        } else {
            C64::new(0.0, (-z.re).sqrt())
        }
    } else {
        z.sqrt()
    }
}

/// `1/z` with `0 ↦ 0`.
pub fn safe_inv(z: C64) -> C64 {
    if z.re == 0.0 && z.im == 0.0 {
        C64::new(0.0, 0.0)
    } else {
        C64::new(1.0, 0.0) / z
    }
}

fn eval_node(e: &Expr, p: &[C64]) -> C64 {
    match e {
        Expr::Const(c) => *c,
        Expr::Coord(j) => p[*j - 1],
        Expr::Add(a, b) => eval_node(a, p) + eval_node(b, p),
        Expr::Mul(a, b) => eval_node(a, p) * eval_node(b, p),
        Expr::Neg(a) => -eval_node(a, p),
        Expr::Conj(a) => eval_node(a, p).conj(),
        Expr::Abs(a) => C64::new(eval_node(a, p).norm(), 0.0),
        Expr::Re(a) => C64::new(eval_node(a, p).re, 0.0),
        Expr::Im(a) => C64::new(eval_node(a, p).im, 0.0),
        Expr::Inv(a) => safe_inv(eval_node(a, p)),
        Expr::Sqrt(a) => principal_sqrt(eval_node(a, p)),
        Expr::Exp(a) => eval_node(a, p).exp(),
        Expr::Clamp(r, a) => {
            let z = eval_node(a, p);
            let m = z.norm();
            if m <= *r {
                z
            } else {
                z * (*r / m)
            }
        }
        Expr::Indicator(s) => {
            if member_node(s, p) {
                C64::new(1.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        }
        Expr::Compose { outer, inners } => {
            let q: Vec<C64> = inners.iter().map(|g| eval_node(g, p)).collect();
            eval_node(&outer.root, &q)
        }
    }
}

fn member_node(s: &SetNode, p: &[C64]) -> bool {
    match s {
        SetNode::Empty => false,
        SetNode::Full => true,
        SetNode::Ball {
            center,
            radius,
            closed,
        } => {
            let d2: f64 = p.iter().zip(center).map(|(a, b)| (a - b).norm_sqr()).sum();
            let d = d2.sqrt();
            if *closed {
                d <= *radius
            } else {
                d < *radius
            }
        }
        SetNode::HalfPlane {
            coord,
            axis,
            threshold,
            strict,
        } => {
            let z = p[*coord - 1];
            let v = match axis {
                Axis::Re => z.re,
                Axis::Im => z.im,
            };
            if *strict {
                v < *threshold
            } else {
                v <= *threshold
            }
        }
        SetNode::Singleton(q) => p.iter().zip(q).all(|(a, b)| a == b),
        SetNode::Complement(a) => !member_node(a, p),
        SetNode::Union(v) => v.iter().any(|a| member_node(a, p)),
        SetNode::Intersection(v) => v.iter().all(|a| member_node(a, p)),
        SetNode::Preimage { f, set } => {
            let w = eval_node(f, p);
            member_node(&set.root, &[w])
        }
    }
}

fn expect_same_arity(a: usize, b: usize) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::Arity {
            expected: a,
            found: b,
        })
    }
}

impl FuncExpr {
    /// Validates coordinate ranges and nested arities.
    pub fn new(arity: usize, root: Expr) -> Result<Self> {
        if arity == 0 {
            return Err(Error::Invalid("arity must be positive"));
        }
        check_expr(&root, arity)?;
        Ok(Self { arity, root })
    }

    pub fn constant(arity: usize, c: C64) -> Self {
        Self {
            arity: arity.max(1),
            root: Expr::Const(c),
        }
    }

    pub fn real(arity: usize, x: f64) -> Self {
        Self::constant(arity, C64::new(x, 0.0))
    }

    /// The coordinate projection `z_j` (1-based).
    pub fn coord(arity: usize, j: usize) -> Result<Self> {
        Self::new(arity, Expr::Coord(j))
    }

    /// `z₁` of arity 1.
    pub fn z() -> Self {
        Self {
            arity: 1,
            root: Expr::Coord(1),
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn root(&self) -> &Expr {
        &self.root
    }

    /// Value at `p`.
    ///
    /// # Panics
    /// If `p` is shorter than the arity.
    pub fn eval(&self, p: &[C64]) -> C64 {
        assert!(
            p.len() >= self.arity,
            "point of length {} for arity {}",
            p.len(),
            self.arity
        );
        eval_node(&self.root, p)
    }

    /// Value at a single complex number (arity 1).
    pub fn eval1(&self, z: C64) -> C64 {
        self.eval(&[z])
    }

    fn unary(&self, f: impl FnOnce(Box<Expr>) -> Expr) -> Self {
        Self {
            arity: self.arity,
            root: f(Box::new(self.root.clone())),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        expect_same_arity(self.arity, other.arity)?;
        Ok(Self {
            arity: self.arity,
            root: Expr::Add(Box::new(self.root.clone()), Box::new(other.root.clone())),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        expect_same_arity(self.arity, other.arity)?;
        Ok(Self {
            arity: self.arity,
            root: Expr::Mul(Box::new(self.root.clone()), Box::new(other.root.clone())),
        })
    }

    /// `c·f`.
    pub fn scalar(&self, c: C64) -> Self {
        self.unary(|e| Expr::Mul(Box::new(Expr::Const(c)), e))
    }

    pub fn neg(&self) -> Self {
        self.unary(Expr::Neg)
    }

    pub fn conj(&self) -> Self {
        self.unary(Expr::Conj)
    }

    pub fn abs(&self) -> Self {
        self.unary(Expr::Abs)
    }

    pub fn re(&self) -> Self {
        self.unary(Expr::Re)
    }

    pub fn im(&self) -> Self {
        self.unary(Expr::Im)
    }

    pub fn inv(&self) -> Self {
        self.unary(Expr::Inv)
    }

    pub fn sqrt(&self) -> Self {
        self.unary(Expr::Sqrt)
    }

    pub fn exp(&self) -> Self {
        self.unary(Expr::Exp)
    }

    pub fn clamp(&self, r: f64) -> Result<Self> {
        Self::new(self.arity, Expr::Clamp(r, Box::new(self.root.clone())))
    }

    /// `f^n` as a product chain; `n = 0` gives the constant 1 and negative
    /// powers go through `inv`.
    pub fn powi(&self, n: i32) -> Self {
        if n == 0 {
            return Self::real(self.arity, 1.0);
        }
        let mut acc = self.root.clone();
        for _ in 1..n.unsigned_abs() {
            acc = Expr::Mul(Box::new(acc), Box::new(self.root.clone()));
        }
        let root = if n < 0 { Expr::Inv(Box::new(acc)) } else { acc };
        Self {
            arity: self.arity,
            root,
        }
    }

    /// `|f|²` written as `conj(f)·f`.
    pub fn abs_sq(&self) -> Self {
        Self {
            arity: self.arity,
            root: Expr::Mul(Box::new(Expr::Conj(Box::new(self.root.clone()))), Box::new(self.root.clone())),
        }
    }

    /// `𝟙_B`.
    pub fn indicator(set: &BorelSetExpr) -> Self {
        Self {
            arity: set.arity,
            root: Expr::Indicator(Box::new(set.root.clone())),
        }
    }

    /// `outer ∘ (inner₁, …, inner_m)`.
    pub fn compose(outer: &Self, inners: &[Self]) -> Result<Self> {
        if outer.arity != inners.len() {
            return Err(Error::Arity {
                expected: outer.arity,
                found: inners.len(),
            });
        }
        let arity = inners.first().map_or(1, |g| g.arity);
        for g in inners {
            expect_same_arity(arity, g.arity)?;
        }
        Ok(Self {
            arity,
            root: Expr::Compose {
                outer: Box::new(outer.clone()),
                inners: inners.iter().map(|g| g.root.clone()).collect(),
            },
        })
    }

    /// `self ∘ φ` for a tuple `φ` of functions of common arity.
    pub fn after(&self, phi: &[Self]) -> Result<Self> {
        Self::compose(self, phi)
    }

    /// `(f ∨ g)` for real-valued `f, g`: `(f + g + |f − g|)/2`.
    pub fn max_real(&self, other: &Self) -> Result<Self> {
        let s = self.add(other)?;
        let d = self.sub(other)?.abs();
        Ok(s.add(&d)?.scalar(C64::new(0.5, 0.0)))
    }

    /// `(f ∧ g)` for real-valued `f, g`: `(f + g − |f − g|)/2`.
    pub fn min_real(&self, other: &Self) -> Result<Self> {
        let s = self.add(other)?;
        let d = self.sub(other)?.abs();
        Ok(s.sub(&d)?.scalar(C64::new(0.5, 0.0)))
    }
}

impl BorelSetExpr {
    pub fn new(arity: usize, root: SetNode) -> Result<Self> {
        if arity == 0 {
            return Err(Error::Invalid("arity must be positive"));
        }
        check_set(&root, arity)?;
        Ok(Self { arity, root })
    }

    pub fn empty(arity: usize) -> Self {
        Self {
            arity: arity.max(1),
            root: SetNode::Empty,
        }
    }

    pub fn full(arity: usize) -> Self {
        Self {
            arity: arity.max(1),
            root: SetNode::Full,
        }
    }

    pub fn singleton(point: &[C64]) -> Result<Self> {
        Self::new(point.len(), SetNode::Singleton(point.to_vec()))
    }

    pub fn ball(center: &[C64], radius: f64, closed: bool) -> Result<Self> {
        Self::new(
            center.len(),
            SetNode::Ball {
                center: center.to_vec(),
                radius,
                closed,
            },
        )
    }

    pub fn closed_ball(center: &[C64], radius: f64) -> Result<Self> {
        Self::ball(center, radius, true)
    }

    pub fn half_plane(arity: usize, coord: usize, axis: Axis, threshold: f64, strict: bool) -> Result<Self> {
        Self::new(
            arity,
            SetNode::HalfPlane {
                coord,
                axis,
                threshold,
                strict,
            },
        )
    }

    /// `{ p : f(p) ∈ set }`.
    pub fn preimage(f: &FuncExpr, set: &BorelSetExpr) -> Result<Self> {
        Self::new(
            f.arity,
            SetNode::Preimage {
                f: Box::new(f.root.clone()),
                set: Box::new(set.clone()),
            },
        )
    }

    pub fn complement(&self) -> Self {
        Self {
            arity: self.arity,
            root: SetNode::Complement(Box::new(self.root.clone())),
        }
    }

    pub fn union(sets: &[Self]) -> Result<Self> {
        Self::combine(sets, SetNode::Union)
    }

    pub fn intersection(sets: &[Self]) -> Result<Self> {
        Self::combine(sets, SetNode::Intersection)
    }

    fn combine(sets: &[Self], f: fn(Vec<SetNode>) -> SetNode) -> Result<Self> {
        let Some(first) = sets.first() else {
            return Err(Error::Invalid("empty set list"));
        };
        for s in sets {
            expect_same_arity(first.arity, s.arity)?;
        }
        Ok(Self {
            arity: first.arity,
            root: f(sets.iter().map(|s| s.root.clone()).collect()),
        })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn root(&self) -> &SetNode {
        &self.root
    }

    /// Membership of `p`.
    ///
    /// # Panics
    /// If `p` is shorter than the arity.
    pub fn contains(&self, p: &[C64]) -> bool {
        assert!(p.len() >= self.arity, "point of length {} for arity {}", p.len(), self.arity);
        member_node(&self.root, p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn constant_one_everywhere() {
        let one = FuncExpr::real(1, 1.0);
        for z in [c(0.0, 0.0), c(-3.0, 2.0), c(1e6, -1e-6)] {
            assert_eq!(one.eval1(z), c(1.0, 0.0));
        }
    }

    #[test]
    fn indicator_of_closed_unit_ball() {
        let b = BorelSetExpr::closed_ball(&[c(0.0, 0.0)], 1.0).unwrap();
        let f = FuncExpr::indicator(&b);
        assert_eq!(f.eval1(c(0.5, 0.0)), c(1.0, 0.0));
        assert_eq!(f.eval1(c(2.0, 0.0)), c(0.0, 0.0));
        assert_eq!(f.eval1(c(1.0, 0.0)), c(1.0, 0.0));
        let open = FuncExpr::indicator(&BorelSetExpr::ball(&[c(0.0, 0.0)], 1.0, false).unwrap());
        assert_eq!(open.eval1(c(1.0, 0.0)), c(0.0, 0.0));
    }

    #[test]
    fn inverse_sends_zero_to_zero() {
        let f = FuncExpr::z().inv();
        assert_eq!(f.eval1(c(0.0, 0.0)), c(0.0, 0.0));
        assert_eq!(f.eval1(c(0.0, -0.0)), c(0.0, 0.0));
        assert_eq!(f.eval1(c(2.0, 0.0)), c(0.5, 0.0));
    }

    #[test]
    fn full_and_singleton_membership() {
        assert!(BorelSetExpr::full(1).contains(&[c(123.0, -4.0)]));
        let s = BorelSetExpr::singleton(&[c(2.0, 0.0)]).unwrap();
        assert!(s.contains(&[c(2.0, 0.0)]));
        assert!(!s.contains(&[c(2.0 + 1e-9, 0.0)]));
    }

    #[test]
    fn preimage_of_ball_under_square() {
        let sq = FuncExpr::z().powi(2);
        let ball = BorelSetExpr::closed_ball(&[c(1.0, 0.0)], 0.1).unwrap();
        let pre = BorelSetExpr::preimage(&sq, &ball).unwrap();
        assert!(pre.contains(&[c(-1.0, 0.0)]));
        assert!(!pre.contains(&[c(0.0, 1.0)]));
    }

    #[test]
    fn additive_identity_on_samples() {
        let f = FuncExpr::z().powi(3).exp().add(&FuncExpr::z().conj()).unwrap();
        let g = f.add(&FuncExpr::real(1, 0.0)).unwrap();
        for k in 0..100 {
            let t = k as f64 * 0.137 - 6.0;
            let z = c(t.cos() * 1.3, t.sin() * 0.7);
            assert_eq!(f.eval1(z), g.eval1(z));
        }
    }

    #[test]
    fn product_with_inverse() {
        let f = FuncExpr::z().mul(&FuncExpr::z().inv()).unwrap();
        assert_eq!(f.eval1(c(3.0, 0.0)), c(1.0, 0.0));
        assert_eq!(f.eval1(c(0.0, 0.0)), c(0.0, 0.0));
    }

    #[test]
    fn compose_abs_square_matches_conj_product() {
        let abs_sq = FuncExpr::z().abs().powi(2);
        let composed = FuncExpr::compose(&abs_sq, &[FuncExpr::z()]).unwrap();
        let direct = FuncExpr::z().conj().mul(&FuncExpr::z()).unwrap();
        for z in [c(1.0, 2.0), c(-0.5, 0.25), c(3.0, -4.0)] {
            assert!((composed.eval1(z) - direct.eval1(z)).norm() < 1e-12);
        }
    }

    #[test]
    fn arity_is_enforced() {
        assert!(matches!(
            FuncExpr::coord(2, 3),
            Err(Error::CoordinateOutOfRange { index: 3, arity: 2 })
        ));
        let z1 = FuncExpr::coord(2, 1).unwrap();
        assert!(matches!(z1.add(&FuncExpr::z()), Err(Error::Arity { .. })));
        assert!(FuncExpr::compose(&FuncExpr::z(), &[FuncExpr::z(), FuncExpr::z()]).is_err());
    }

    #[test]
    fn sqrt_uses_principal_branch() {
        let f = FuncExpr::z().sqrt();
        assert_eq!(f.eval1(c(-4.0, 0.0)), c(0.0, 2.0));
        assert_eq!(f.eval1(c(-4.0, -0.0)), c(0.0, 2.0));
        assert_eq!(f.eval1(c(9.0, 0.0)), c(3.0, 0.0));
    }

    #[test]
    fn clamp_caps_modulus() {
        let f = FuncExpr::z().clamp(2.0).unwrap();
        assert_eq!(f.eval1(c(1.0, 1.0)), c(1.0, 1.0));
        let w = f.eval1(c(3.0, 4.0));
        assert!((w - c(1.2, 1.6)).norm() < 1e-15);
    }

    #[test]
    fn half_planes_and_boolean_ops() {
        let left = BorelSetExpr::half_plane(2, 2, Axis::Im, 0.0, false).unwrap();
        let disk = BorelSetExpr::closed_ball(&[c(0.0, 0.0), c(0.0, 0.0)], 1.0).unwrap();
        let both = BorelSetExpr::intersection(&[left.clone(), disk.clone()]).unwrap();
        assert!(both.contains(&[c(0.1, 0.0), c(0.0, -0.5)]));
        assert!(!both.contains(&[c(0.1, 0.0), c(0.0, 0.5)]));
        let either = BorelSetExpr::union(&[left, disk]).unwrap();
        assert!(either.contains(&[c(5.0, 0.0), c(0.0, -5.0)]));
        assert!(!either.complement().contains(&[c(5.0, 0.0), c(0.0, -5.0)]));
        assert!(!BorelSetExpr::empty(2).contains(&[c(0.0, 0.0), c(0.0, 0.0)]));
    }

    #[test]
    fn lattice_operations_on_real_functions() {
        let f = FuncExpr::z().re();
        let g = FuncExpr::real(1, 0.5);
        let hi = f.max_real(&g).unwrap();
        let lo = f.min_real(&g).unwrap();
        assert_eq!(hi.eval1(c(2.0, 9.0)), c(2.0, 0.0));
        assert_eq!(lo.eval1(c(2.0, 9.0)), c(0.5, 0.0));
        assert_eq!(hi.eval1(c(-1.0, 0.0)), c(0.5, 0.0));
    }
}
