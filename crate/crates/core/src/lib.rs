//! Simultaneous assignment problems.
//!
//! A simultaneous assignment is an integral edge vector that is a capacitated
//! `b_H`-matching in each of several subgraphs at once and also respects
//! degree-sum bounds on a laminar family of node sets. This crate provides the
//! data model, exact solvers, exact rational LP relaxations, combinatorial
//! solvers for the network-matrix cases, cover-based approximation, and the
//! 3-dimensional matching reductions used to build hard instances.

pub mod approx;
pub mod cli;
pub mod covers;
pub mod exact;
pub mod io;
pub mod lp;
pub mod model;
pub mod netmatrix;
pub mod reductions;

use num_bigint::BigInt;
use num_rational::BigRational;

pub use model::*;

/// Exact rational numbers used by every LP routine.
pub type Rational = BigRational;

pub fn rational(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn integer(p: i64) -> Rational {
    Rational::from_integer(BigInt::from(p))
}

/// `p/q` in lowest terms, or just `p` for integers.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
