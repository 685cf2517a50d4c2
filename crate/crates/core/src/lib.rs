#![no_std]
#![forbid(unsafe_code)]

//! Borel functional calculus for finite-dimensional normal operators.
//!
//! The crate realizes a measurable functional calculus `f ↦ Φ(f)` through a
//! finite projection-valued measure, together with the spectral theory,
//! commutativity machinery and a discrete multiplication-operator model that
//! carries the unbounded-operator content at truncation scale.
//!
//! Everything here is `no_std` + `alloc`; IO and the command line live in the
//! companion `borel-cli` crate.

extern crate alloc;

pub mod calculus;
pub mod chebyshev;
pub mod commute;
mod error;
pub mod funcexpr;
pub mod matnum;
pub mod multmodel;
pub mod pvm;
pub mod sample;
pub mod spectral;

pub use error::{Error, Result};
pub use funcexpr::{BorelSetExpr, FuncExpr};
pub use matnum::{ComplexMatrix, C64};
pub use pvm::Pvm;
pub use calculus::BorelCalculus;
