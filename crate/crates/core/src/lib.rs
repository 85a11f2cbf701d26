//! Exact Riemann integration of paths valued in normed spaces.
//!
//! The centrepiece is a path `F: [0, 1] -> l^inf` that sends the rational
//! `r_k` (the `k`-th rational in a fixed enumeration) to the unit sequence
//! `e_k` and every irrational point to zero. `F` is Riemann-integrable with
//! integral zero, yet its norm `t -> |F(t)|` is the Dirichlet function, which
//! is not. Everything here is computed exactly:
//!
//! * [`exact`] provides big rationals and the tag domain `Q[sqrt2]`, where
//!   "is this point rational?" is decidable.
//! * [`partition`] builds (tagged) partitions with the half-open convention.
//! * [`normed`] holds finitely supported sequences under the sup-norm.
//! * [`enumeration`] ranks and unranks the rationals of `[0, 1]`.
//! * [`riemann`] evaluates `F`, its Riemann sums, and the ε-δ certificate.
//! * [`darboux`] exhibits the non-integrability of `|F|`.
//! * [`experiment`] drives the `nr` command-line tool.
//!
//! ```
//! use normed_riemann::enumeration::RationalEnumeration;
//! use normed_riemann::partition::{Partition, TagStrategy, TaggedPartition};
//! use normed_riemann::riemann::CounterexamplePath;
//! use normed_riemann::Rational;
//!
//! let enumeration = RationalEnumeration::new();
//! let f = CounterexamplePath::new(&enumeration);
//! let p = Partition::uniform(&Rational::zero(), &Rational::one(), 8)?;
//! let tp = TaggedPartition::with_strategy(p, TagStrategy::LowIndexRational, 0);
//! let report = f.riemann_sum(&tp)?;
//! assert_eq!(report.sum_norm, Rational::new(1, 8));
//! assert!(report.bound_holds());
//! # Ok::<(), normed_riemann::Error>(())
//! ```

#![allow(clippy::result_large_err)]

pub mod darboux;
pub mod enumeration;
pub mod error;
pub mod exact;
pub mod experiment;
pub mod normed;
pub mod partition;
pub mod riemann;

pub use error::{Error, Result};
pub use exact::{AlgebraicTag, Rational};
