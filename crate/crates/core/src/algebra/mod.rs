//! Exact arithmetic: rationals, polynomials in `U` over F₂, and F₂ linear algebra.

pub mod f2;
pub mod poly;
pub mod rational;

pub use f2::{solve_f2, span_rank, subspace_not_contained, BitVector, EchelonBasis, F2Matrix};
pub use poly::F2UPoly;
pub use rational::{rat, Rational};
