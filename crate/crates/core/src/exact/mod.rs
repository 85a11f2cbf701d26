//! Exact numbers: big rationals and the tag domain `Q[sqrt2]`.

mod rational;
mod tag;

pub use rational::Rational;
pub use tag::AlgebraicTag;
