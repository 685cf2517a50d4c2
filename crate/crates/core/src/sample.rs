//! Random operators, functions and sets.
//!
//! Used by the randomized audits (calculus agreement, commutation battery,
//! multiplication representation) and by the test suites. Every generator
//! takes the RNG explicitly; no global state.

use alloc::boxed::Box;
use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)] // inherent when std is linked
use num_traits::Float;
use rand::Rng;

use crate::funcexpr::{Axis, BorelSetExpr, Expr, FuncExpr, SetNode};
use crate::matnum::{inner, vec_norm, ComplexMatrix, C64};

/// Standard normal deviate (Box–Muller).
pub fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let u1: f64 = 1.0 - rng.gen::<f64>();
    let u2: f64 = rng.gen::<f64>();
    (-2.0 * u1.ln()).sqrt() * (2.0 * PI * u2).cos()
}

/// Complex normal deviate with independent real and imaginary parts.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(gaussian(rng), gaussian(rng))
}

/// Uniform point in the closed disk of the given radius.
pub fn point_in_disk<R: Rng + ?Sized>(rng: &mut R, radius: f64) -> C64 {
    let r = radius * rng.gen::<f64>().sqrt();
    let t = 2.0 * PI * rng.gen::<f64>();
    C64::from_polar(r, t)
}

pub fn random_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<C64> {
    (0..n).map(|_| complex_gaussian(rng)).collect()
}

pub fn random_unit_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<C64> {
    let v = random_vector(rng, n);
    let norm = vec_norm(&v);
    v.into_iter().map(|z| z / norm).collect()
}

/// Haar-like random unitary by modified Gram–Schmidt on Gaussian columns.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(n);
    while cols.len() < n {
        let mut v = random_vector(rng, n);
        for q in &cols {
            let proj = inner(&v, q);
            for (vi, qi) in v.iter_mut().zip(q) {
                *vi -= proj * qi;
            }
        }
        let norm = vec_norm(&v);
        if norm < 1e-8 {
            continue;
        }
        cols.push(v.into_iter().map(|z| z / norm).collect());
    }
    ComplexMatrix::from_fn(n, |i, j| cols[j][i])
}

/// Random real orthogonal matrix.
pub fn random_orthogonal<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    let mut cols: Vec<Vec<f64>> = Vec::with_capacity(n);
    while cols.len() < n {
        let mut v: Vec<f64> = (0..n).map(|_| gaussian(rng)).collect();
        for q in &cols {
            let proj: f64 = v.iter().zip(q).map(|(a, b)| a * b).sum();
            for (vi, qi) in v.iter_mut().zip(q) {
                *vi -= proj * qi;
            }
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm < 1e-8 {
            continue;
        }
        cols.push(v.into_iter().map(|x| x / norm).collect());
    }
    ComplexMatrix::from_fn(n, |i, j| C64::new(cols[j][i], 0.0))
}

/// `U·diag(values)·U*`.
pub fn with_spectrum(u: &ComplexMatrix, values: &[C64]) -> ComplexMatrix {
    let n = u.dim();
    ComplexMatrix::from_fn(n, |i, j| {
        (0..n).map(|k| u[(i, k)] * values[k] * u[(j, k)].conj()).sum()
    })
}

/// Random normal matrix with eigenvalues uniform in the disk of radius
/// `radius`.
pub fn random_normal<R: Rng + ?Sized>(rng: &mut R, n: usize, radius: f64) -> ComplexMatrix {
    let u = random_unitary(rng, n);
    let values: Vec<C64> = (0..n).map(|_| point_in_disk(rng, radius)).collect();
    with_spectrum(&u, &values)
}

/// Random normal matrix whose spectrum has repeated eigenvalues: `distinct`
/// values spread over `n` slots.
pub fn random_degenerate_normal<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    distinct: usize,
    radius: f64,
) -> ComplexMatrix {
    let u = random_unitary(rng, n);
    let pool: Vec<C64> = (0..distinct.max(1)).map(|_| point_in_disk(rng, radius)).collect();
    let values: Vec<C64> = (0..n).map(|k| pool[k % pool.len()]).collect();
    with_spectrum(&u, &values)
}

/// Random Hermitian matrix with eigenvalues uniform in `[-radius, radius]`.
pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize, radius: f64) -> ComplexMatrix {
    let u = random_unitary(rng, n);
    let values: Vec<C64> = (0..n)
        .map(|_| C64::new(rng.gen_range(-radius..=radius), 0.0))
        .collect();
    with_spectrum(&u, &values).hermitian_part()
}

/// Random real symmetric matrix with eigenvalues in `[-radius, radius]`.
pub fn random_real_symmetric<R: Rng + ?Sized>(rng: &mut R, n: usize, radius: f64) -> ComplexMatrix {
    let q = random_orthogonal(rng, n);
    let values: Vec<C64> = (0..n)
        .map(|_| C64::new(rng.gen_range(-radius..=radius), 0.0))
        .collect();
    let a = with_spectrum(&q, &values);
    ComplexMatrix::from_fn(n, |i, j| C64::new(0.5 * (a[(i, j)].re + a[(j, i)].re), 0.0))
}

/// `d` commuting normal matrices sharing one random eigenbasis. Each
/// matrix repeats some eigenvalues with probability ½ so that joint
/// eigenspaces are exercised.
pub fn random_commuting_tuple<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    d: usize,
    radius: f64,
) -> Vec<ComplexMatrix> {
    let u = random_unitary(rng, n);
    (0..d)
        .map(|_| {
            let distinct = if rng.gen_bool(0.5) { n } else { rng.gen_range(1..=n) };
            let pool: Vec<C64> = (0..distinct).map(|_| point_in_disk(rng, radius)).collect();
            let values: Vec<C64> = (0..n).map(|k| pool[k % pool.len()]).collect();
            with_spectrum(&u, &values)
        })
        .collect()
}

/// Region from which random constants and set parameters are drawn.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Region {
    pub center: C64,
    pub radius: f64,
}

impl Region {
    pub fn new(center: C64, radius: f64) -> Self {
        Self {
            center,
            radius: radius.max(1e-3),
        }
    }

    /// Smallest disk around the centroid containing all given points, with
    /// some margin.
    pub fn around(points: &[C64]) -> Self {
        if points.is_empty() {
            return Self::new(C64::new(0.0, 0.0), 1.0);
        }
        let center = points.iter().sum::<C64>() / points.len() as f64;
        let radius = points.iter().map(|p| (p - center).norm()).fold(0.0, f64::max);
        Self::new(center, 1.25 * radius + 0.5)
    }

    fn point<R: Rng + ?Sized>(&self, rng: &mut R) -> C64 {
        self.center + point_in_disk(rng, self.radius)
    }
}

fn small_constant<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    match rng.gen_range(0..4) {
        0 => C64::new(rng.gen_range(-2.0..2.0), 0.0),
        1 => C64::new(0.0, rng.gen_range(-2.0..2.0)),
        2 => C64::new(f64::from(rng.gen_range(-3i32..=3)), 0.0),
        _ => C64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)),
    }
}

fn random_node<R: Rng + ?Sized>(rng: &mut R, arity: usize, depth: usize, region: &[Region]) -> Expr {
    if depth == 0 || rng.gen_bool(0.2) {
        return if rng.gen_bool(0.75) {
            Expr::Coord(rng.gen_range(1..=arity))
        } else {
            Expr::Const(small_constant(rng))
        };
    }
    let sub = |rng: &mut R| Box::new(random_node(rng, arity, depth - 1, region));
    match rng.gen_range(0..15) {
        0 | 1 => Expr::Add(sub(rng), sub(rng)),
        2 | 3 => Expr::Mul(sub(rng), sub(rng)),
        4 => Expr::Neg(sub(rng)),
        5 => Expr::Conj(sub(rng)),
        6 => Expr::Abs(sub(rng)),
        7 => {
            if rng.gen_bool(0.5) {
                Expr::Re(sub(rng))
            } else {
                Expr::Im(sub(rng))
            }
        }
        8 => Expr::Inv(Box::new(Expr::Add(
            Box::new(Expr::Const(C64::new(1.0, 0.0))),
            Box::new(Expr::Abs(sub(rng))),
        ))),
        9 => Expr::Sqrt(sub(rng)),
        // exp of a clamped argument stays finite
        10 => Expr::Exp(Box::new(Expr::Clamp(3.0, sub(rng)))),
        11 => Expr::Clamp(rng.gen_range(0.5..4.0), sub(rng)),
        12 => Expr::Indicator(Box::new(random_set_node(rng, arity, depth.min(2), region))),
        13 => {
            let m = rng.gen_range(1..=2);
            let outer = FuncExpr::new(m, random_node(rng, m, depth - 1, &[Region::new(C64::new(0.0, 0.0), 2.0)]))
                .expect("sampled outer function is well-formed");
            let inners = (0..m).map(|_| random_node(rng, arity, depth - 1, region)).collect();
            Expr::Compose {
                outer: Box::new(outer),
                inners,
            }
        }
        _ => Expr::Mul(Box::new(Expr::Const(small_constant(rng))), sub(rng)),
    }
}

fn random_set_node<R: Rng + ?Sized>(rng: &mut R, arity: usize, depth: usize, region: &[Region]) -> SetNode {
    let reg = |j: usize| region.get(j).or(region.first()).copied().unwrap_or(Region::new(C64::new(0.0, 0.0), 1.0));
    let leaf = |rng: &mut R| -> SetNode {
        match rng.gen_range(0..4) {
            0 | 1 => {
                let center: Vec<C64> = (0..arity).map(|j| reg(j).point(rng)).collect();
                let radius = reg(0).radius * rng.gen_range(0.1..1.0);
                SetNode::Ball {
                    center,
                    radius,
                    closed: rng.gen_bool(0.5),
                }
            }
            2 => {
                let coord = rng.gen_range(1..=arity);
                let r = reg(coord - 1);
                let axis = if rng.gen_bool(0.5) { Axis::Re } else { Axis::Im };
                let base = match axis {
                    Axis::Re => r.center.re,
                    Axis::Im => r.center.im,
                };
                SetNode::HalfPlane {
                    coord,
                    axis,
                    threshold: base + rng.gen_range(-r.radius..r.radius),
                    strict: rng.gen_bool(0.5),
                }
            }
            _ => SetNode::Singleton((0..arity).map(|j| reg(j).point(rng)).collect()),
        }
    };
    if depth == 0 || rng.gen_bool(0.5) {
        return leaf(rng);
    }
    match rng.gen_range(0..5) {
        0 => SetNode::Complement(Box::new(random_set_node(rng, arity, depth - 1, region))),
        1 => SetNode::Union(
            (0..rng.gen_range(1..=3))
                .map(|_| random_set_node(rng, arity, depth - 1, region))
                .collect(),
        ),
        2 => SetNode::Intersection(
            (0..rng.gen_range(1..=3))
                .map(|_| random_set_node(rng, arity, depth - 1, region))
                .collect(),
        ),
        3 => {
            let f = random_node(rng, arity, 1, region);
            let inner = BorelSetExpr::new(1, random_set_node(rng, 1, 0, &[Region::new(C64::new(0.0, 0.0), 2.0)]))
                .expect("sampled set is well-formed");
            SetNode::Preimage {
                f: Box::new(f),
                set: Box::new(inner),
            }
        }
        _ => leaf(rng),
    }
}

/// Random Borel function of the given arity. `region[j]` guides constants
/// and set parameters for coordinate `j`.
pub fn random_func_expr<R: Rng + ?Sized>(rng: &mut R, arity: usize, depth: usize, region: &[Region]) -> FuncExpr {
    FuncExpr::new(arity, random_node(rng, arity, depth, region)).expect("sampled function is well-formed")
}

/// Random Borel set of the given arity.
pub fn random_borel_set<R: Rng + ?Sized>(rng: &mut R, arity: usize, depth: usize, region: &[Region]) -> BorelSetExpr {
    BorelSetExpr::new(arity, random_set_node(rng, arity, depth, region)).expect("sampled set is well-formed")
}
