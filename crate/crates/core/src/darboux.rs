//! Upper and lower Darboux sums for bounded real functions on `[0, 1]`.
//!
//! Suprema and infima come from the function's oracle rather than from
//! sampling: finitely many samples of the Dirichlet function can never show
//! both of its values on an interval reliably.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::exact::{AlgebraicTag, Rational};
use crate::partition::{Closure, Interval, Partition};

/// A bounded real function with exact pointwise values and exact suprema and
/// infima over nondegenerate intervals.
pub trait BoundedFnOracle {
    fn eval(&self, t: &AlgebraicTag) -> Result<Rational>;
    fn sup_on(&self, interval: &Interval) -> Rational;
    fn inf_on(&self, interval: &Interval) -> Rational;
    fn description(&self) -> &str;
}

/// `χ_Q` restricted to `[0, 1]`: 1 at rational points, 0 elsewhere.
///
/// Every nondegenerate interval `[l, u)` contains the rational `(l + u)/2`
/// and the irrational `l + (u - l)·√2/2`, so the supremum is 1 and the
/// infimum 0 on all of them.
#[derive(Clone, Copy, Debug, Default)]
pub struct DirichletOracle;

impl BoundedFnOracle for DirichletOracle {
    fn eval(&self, t: &AlgebraicTag) -> Result<Rational> {
        Ok(if t.is_rational() {
            Rational::one()
        } else {
            Rational::zero()
        })
    }

    fn sup_on(&self, _interval: &Interval) -> Rational {
        Rational::one()
    }

    fn inf_on(&self, _interval: &Interval) -> Rational {
        Rational::zero()
    }

    fn description(&self) -> &str {
        "dirichlet"
    }
}

/// `f(t) = t`. Monotone, so the supremum over `[l, u)` is `u` and the
/// infimum is `l`. Exact evaluation only at rational points.
#[derive(Clone, Copy, Debug, Default)]
pub struct IdentityOracle;

impl BoundedFnOracle for IdentityOracle {
    fn eval(&self, t: &AlgebraicTag) -> Result<Rational> {
        t.as_rational().cloned().ok_or_else(|| Error::InexactEvaluation {
            oracle: self.description().into(),
            tag: t.clone(),
        })
    }

    fn sup_on(&self, interval: &Interval) -> Rational {
        interval.upper().clone()
    }

    fn inf_on(&self, interval: &Interval) -> Rational {
        interval.lower().clone()
    }

    fn description(&self) -> &str {
        "identity"
    }
}

pub fn dirichlet_oracle() -> DirichletOracle {
    DirichletOracle
}

pub fn identity_oracle() -> IdentityOracle {
    IdentityOracle
}

pub fn upper_sum<F: BoundedFnOracle + ?Sized>(f: &F, p: &Partition) -> Rational {
    p.intervals().map(|i| f.sup_on(&i) * i.volume()).sum()
}

pub fn lower_sum<F: BoundedFnOracle + ?Sized>(f: &F, p: &Partition) -> Rational {
    p.intervals().map(|i| f.inf_on(&i) * i.volume()).sum()
}

/// Upper minus lower sum.
pub fn darboux_gap<F: BoundedFnOracle + ?Sized>(f: &F, p: &Partition) -> Rational {
    upper_sum(f, p) - lower_sum(f, p)
}

/// Smallest `sup - inf` over the neighbourhoods `[x - r, x + r) ∩ [0, 1]`.
///
/// An upper estimate of the oscillation of `f` at `x`. For an irrational `x`
/// the neighbourhood is widened to rational endpoints (by at most `r/512`),
/// which can only increase `sup - inf`.
pub fn oscillation_at<F: BoundedFnOracle + ?Sized>(f: &F, x: &AlgebraicTag, radii: &[Rational]) -> Result<Rational> {
    if radii.is_empty() || radii.iter().any(|r| !r.is_positive()) {
        return Err(Error::InvalidRadii);
    }
    let (zero, one) = (Rational::zero(), Rational::one());
    if x.cmp_rational(&zero).is_lt() || x.cmp_rational(&one).is_gt() {
        return Err(Error::OutsideUnitInterval(x.clone()));
    }
    let mut best: Option<Rational> = None;
    for r in radii {
        let (lo, hi) = match x.as_rational() {
            Some(c) => (c - r, c + r),
            None => {
                let (centre, slack) = enclosing_centre(x, r);
                (&centre - r - &slack, &centre + r + &slack)
            }
        };
        let closure = if hi > one {
            Closure::Closed
        } else {
            Closure::HalfOpen
        };
        let neighbourhood = Interval::new(lo.max(zero.clone()), hi.min(one.clone()), closure)?;
        let spread = f.sup_on(&neighbourhood) - f.inf_on(&neighbourhood);
        best = Some(match best {
            Some(b) => b.min(spread),
            None => spread,
        });
    }
    Ok(best.expect("radii is nonempty"))
}

/// A rational `c` and a slack `s <= r/1024` with `|x - c| < s`.
fn enclosing_centre(x: &AlgebraicTag, r: &Rational) -> (Rational, Rational) {
    let target = r / Rational::from(1024);
    let mut precision = 1u32;
    loop {
        let slack = Rational::from_big(BigInt::from(1), BigInt::from(10u32).pow(precision)).expect("nonzero");
        if slack <= target {
            return (x.value_approx(precision), slack);
        }
        precision += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn unit(n: u64) -> Partition {
        Partition::uniform(&q(0, 1), &q(1, 1), n).unwrap()
    }

    fn half_open(l: Rational, u: Rational) -> Interval {
        Interval::new(l, u, Closure::HalfOpen).unwrap()
    }

    #[test]
    fn dirichlet_examples() {
        let d = dirichlet_oracle();
        assert_eq!(d.eval(&AlgebraicTag::rational(q(1, 7))).unwrap(), q(1, 1));
        assert_eq!(d.eval(&"1/2*sqrt2".parse().unwrap()).unwrap(), q(0, 1));
        let i = half_open(q(1, 3), q(1, 2));
        assert_eq!(d.sup_on(&i), q(1, 1));
        assert_eq!(d.inf_on(&i), q(0, 1));
    }

    #[test]
    fn identity_examples() {
        let id = identity_oracle();
        assert_eq!(id.sup_on(&half_open(q(0, 1), q(1, 2))), q(1, 2));
        assert_eq!(id.inf_on(&Interval::new(q(1, 4), q(1, 1), Closure::Closed).unwrap()), q(1, 4));
        assert_eq!(upper_sum(&id, &unit(4)), q(5, 8));
        assert_eq!(lower_sum(&id, &unit(4)), q(3, 8));
        assert_eq!(upper_sum(&id, &unit(1)), q(1, 1));
        assert!(id.eval(&"1/2*sqrt2".parse().unwrap()).is_err());
    }

    #[test]
    fn identity_series() {
        // sum of k/n^2 over k = 1..n and k = 0..n-1
        let id = identity_oracle();
        for n in 1..=40i64 {
            let p = unit(n as u64);
            assert_eq!(upper_sum(&id, &p), q(n + 1, 2 * n));
            assert_eq!(lower_sum(&id, &p), q(n - 1, 2 * n));
            assert_eq!(darboux_gap(&id, &p), q(1, n));
        }
    }

    #[test]
    fn dirichlet_gap_is_one() {
        let d = dirichlet_oracle();
        for seed in 0..20 {
            let p = Partition::random(&q(0, 1), &q(1, 1), 1 + seed % 9, seed).unwrap();
            assert_eq!(upper_sum(&d, &p), q(1, 1));
            assert_eq!(lower_sum(&d, &p), q(0, 1));
            assert_eq!(darboux_gap(&d, &p), q(1, 1));
        }
    }

    #[test]
    fn oscillation_examples() {
        let d = dirichlet_oracle();
        let radii = [q(1, 10), q(1, 100)];
        assert_eq!(oscillation_at(&d, &AlgebraicTag::rational(q(1, 2)), &radii).unwrap(), q(1, 1));
        assert_eq!(oscillation_at(&d, &"1/2*sqrt2".parse().unwrap(), &radii).unwrap(), q(1, 1));
        let id = identity_oracle();
        assert_eq!(oscillation_at(&id, &AlgebraicTag::rational(q(1, 2)), &[q(1, 10)]).unwrap(), q(2, 10));
        // clipped at the ends of [0, 1]
        assert_eq!(oscillation_at(&id, &AlgebraicTag::rational(q(0, 1)), &[q(1, 10)]).unwrap(), q(1, 10));
        assert_eq!(oscillation_at(&id, &AlgebraicTag::rational(q(1, 1)), &[q(1, 4)]).unwrap(), q(1, 4));
    }

    #[test]
    fn oscillation_at_irrational_is_a_tight_upper_estimate() {
        let id = identity_oracle();
        let x: AlgebraicTag = "1/2*sqrt2".parse().unwrap();
        let r = q(1, 10);
        let est = oscillation_at(&id, &x, std::slice::from_ref(&r)).unwrap();
        assert!(est >= q(2, 10));
        assert!(est <= q(2, 10) + q(2, 10) / q(512, 1));
    }

    #[test]
    fn oscillation_rejects_bad_input() {
        let d = dirichlet_oracle();
        let half = AlgebraicTag::rational(q(1, 2));
        assert_eq!(oscillation_at(&d, &half, &[]), Err(Error::InvalidRadii));
        assert_eq!(oscillation_at(&d, &half, &[q(0, 1)]), Err(Error::InvalidRadii));
        assert!(oscillation_at(&d, &AlgebraicTag::rational(q(2, 1)), &[q(1, 2)]).is_err());
    }

    fn random_partition() -> impl Strategy<Value = Partition> {
        (1u64..30, any::<u64>()).prop_map(|(n, s)| Partition::random(&q(0, 1), &q(1, 1), n, s).unwrap())
    }

    proptest! {
        #[test]
        fn lower_never_exceeds_upper(p in random_partition()) {
            prop_assert!(lower_sum(&IdentityOracle, &p) <= upper_sum(&IdentityOracle, &p));
            prop_assert!(lower_sum(&DirichletOracle, &p) <= upper_sum(&DirichletOracle, &p));
        }

        #[test]
        fn refinement_is_monotone(p in random_partition(), r in random_partition()) {
            let c = p.common_refinement(&r).unwrap();
            let id = IdentityOracle;
            prop_assert!(upper_sum(&id, &c) <= upper_sum(&id, &p));
            prop_assert!(lower_sum(&id, &c) >= lower_sum(&id, &p));
            prop_assert!(darboux_gap(&id, &c) <= darboux_gap(&id, &p));
        }

        #[test]
        fn oracles_are_sound(n in 1u64..20, seed in any::<u64>(), j in 0usize..20, pick in 0u8..3) {
            let p = Partition::random(&q(0, 1), &q(1, 1), n, seed).unwrap();
            let i = p.interval(j % p.len());
            let (l, u) = (i.lower().clone(), i.upper().clone());
            let t = match pick {
                0 => AlgebraicTag::rational(l.clone()),
                1 => AlgebraicTag::rational((&l + &u) / q(2, 1)),
                _ => AlgebraicTag::new(l.clone(), (&u - &l) / q(2, 1)),
            };
            prop_assert!(i.contains(&t));
            let oracles: [&dyn BoundedFnOracle; 2] = [&DirichletOracle, &IdentityOracle];
            for f in oracles {
                if let Ok(v) = f.eval(&t) {
                    prop_assert!(f.inf_on(&i) <= v && v <= f.sup_on(&i));
                }
            }
        }
    }
}
