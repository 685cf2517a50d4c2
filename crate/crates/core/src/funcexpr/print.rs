//! Text form of function and set trees.
//!
//! Binary operations are always parenthesized, so printing followed by
//! parsing reproduces a parsed tree exactly. Numbers are written in their
//! shortest round-trip form.

use core::fmt::{self, Display, Formatter, Write};

use super::{Axis, BorelSetExpr, Expr, FuncExpr, SetNode};
use crate::matnum::C64;

pub(super) struct Num(pub f64);

impl Display for Num {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        let a = self.0.abs();
        if a == 0.0 || (1e-5..1e16).contains(&a) {
            write!(f, "{}", self.0)
        } else {
            write!(f, "{:e}", self.0)
        }
    }
}

fn is_pos_zero(x: f64) -> bool {
    x == 0.0 && !x.is_sign_negative()
}

/// A complex constant: a real literal, an imaginary literal, or
/// `(re + imi)`.
pub(super) struct Literal(pub C64);

impl Display for Literal {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        let c = self.0;
        if is_pos_zero(c.im) {
            write!(f, "{}", Num(c.re))
        } else if is_pos_zero(c.re) {
            write!(f, "{}i", Num(c.im))
        } else {
            write!(f, "({} + {}i)", Num(c.re), Num(c.im))
        }
    }
}

struct Point<'a>(&'a [C64]);

impl Display for Point<'_> {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        if let [z] = self.0 {
            return write!(f, "{}", Literal(*z));
        }
        f.write_char('[')?;
        for (k, z) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}", Literal(*z))?;
        }
        f.write_char(']')
    }
}

impl Display for Expr {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => write!(f, "{}", Literal(*c)),
            Expr::Coord(j) => write!(f, "z{j}"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
            Expr::Neg(a) => write!(f, "-({a})"),
            Expr::Conj(a) => write!(f, "conj({a})"),
            Expr::Abs(a) => write!(f, "abs({a})"),
            Expr::Re(a) => write!(f, "re({a})"),
            Expr::Im(a) => write!(f, "im({a})"),
            Expr::Inv(a) => write!(f, "inv({a})"),
            Expr::Sqrt(a) => write!(f, "sqrt({a})"),
            Expr::Exp(a) => write!(f, "exp({a})"),
            Expr::Clamp(r, a) => write!(f, "clamp({a}, {})", Num(*r)),
            Expr::Indicator(s) => write!(f, "ind({s})"),
            Expr::Compose { outer, inners } => {
                write!(f, "compose({}; ", outer.root)?;
                for (k, g) in inners.iter().enumerate() {
                    if k > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{g}")?;
                }
                f.write_char(')')
            }
        }
    }
}

impl Display for SetNode {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            SetNode::Empty => f.write_str("empty"),
            SetNode::Full => f.write_str("full"),
            SetNode::Ball {
                center,
                radius,
                closed,
            } => {
                let name = if *closed { "closedball" } else { "ball" };
                write!(f, "{name}({}, {})", Point(center), Num(*radius))
            }
            SetNode::HalfPlane {
                coord,
                axis,
                threshold,
                strict,
            } => {
                let ax = match axis {
                    Axis::Re => "re",
                    Axis::Im => "im",
                };
                let op = if *strict { "<" } else { "<=" };
                write!(f, "{ax}(z{coord}) {op} {}", Num(*threshold))
            }
            SetNode::Singleton(p) => write!(f, "singleton({})", Point(p)),
            SetNode::Complement(a) => write!(f, "compl({a})"),
            SetNode::Union(v) | SetNode::Intersection(v) => {
                let name = if matches!(self, SetNode::Union(_)) {
                    "union"
                } else {
                    "inter"
                };
                write!(f, "{name}(")?;
                for (k, s) in v.iter().enumerate() {
                    if k > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{s}")?;
                }
                f.write_char(')')
            }
            SetNode::Preimage { f: g, set } => write!(f, "preimage({g}; {})", set.root),
        }
    }
}

impl Display for FuncExpr {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        self.root.fmt(f)
    }
}

impl Display for BorelSetExpr {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        self.root.fmt(f)
    }
}
