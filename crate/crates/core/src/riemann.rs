//! Riemann sums of normed-space-valued paths, and the path `F`.
//!
//! `F(r_k) = e_k` (the unit sequence at the enumeration index of `r_k`) and
//! `F(t) = 0` at irrational `t`. For a tagged partition, distinct rational
//! tags have distinct indices, so the Riemann sum puts each rational-tagged
//! piece's volume on its own coordinate and
//!
//! ```text
//! |sum_j F(t_j) vol(I_j)|_inf = max { vol(I_j) : t_j rational }  (0 if none)
//!                             <= diam(P).
//! ```
//!
//! Hence every Riemann sum over a partition of diameter below `ε` has norm
//! below `ε`, and `F` integrates to the zero sequence with `δ = ε`.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::enumeration::RationalEnumeration;
use crate::error::{Error, Result};
use crate::exact::{AlgebraicTag, Rational};
use crate::normed::{FinSuppVector, NormedVector};
use crate::partition::{Partition, TagStrategy, TaggedPartition};

/// A path from an interval into a normed space.
pub trait Path {
    type Value: NormedVector;

    fn eval(&self, t: &AlgebraicTag) -> Result<Self::Value>;
}

/// `sum_j f(t_j)·vol(I_j)`.
pub fn riemann_sum<P: Path>(path: &P, tp: &TaggedPartition) -> Result<P::Value> {
    let mut acc = P::Value::zero();
    for (tag, vol) in tp.pieces() {
        acc.add_scaled_assign(&vol, &path.eval(tag)?);
    }
    Ok(acc)
}

/// `f(t) = t`, real-valued. Only rational points can be evaluated exactly.
#[derive(Clone, Copy, Debug, Default)]
pub struct IdentityPath;

impl Path for IdentityPath {
    type Value = Rational;

    fn eval(&self, t: &AlgebraicTag) -> Result<Rational> {
        t.as_rational().cloned().ok_or_else(|| Error::InexactEvaluation {
            oracle: "identity".into(),
            tag: t.clone(),
        })
    }
}

fn check_unit(t: &AlgebraicTag) -> Result<()> {
    if t.cmp_rational(&Rational::zero()).is_lt() || t.cmp_rational(&Rational::one()).is_gt() {
        return Err(Error::OutsideUnitInterval(t.clone()));
    }
    Ok(())
}

fn check_unit_partition(p: &Partition) -> Result<()> {
    if !p.start().is_zero() || p.end() != &Rational::one() {
        return Err(Error::MismatchedBase(
            Rational::zero(),
            Rational::one(),
            p.start().clone(),
            p.end().clone(),
        ));
    }
    Ok(())
}

/// The path `F: [0, 1] -> l^inf`.
#[derive(Clone, Copy, Debug)]
pub struct CounterexamplePath<'a> {
    enumeration: &'a RationalEnumeration,
}

impl Path for CounterexamplePath<'_> {
    type Value = FinSuppVector;

    fn eval(&self, t: &AlgebraicTag) -> Result<FinSuppVector> {
        self.eval_f(t)
    }
}

/// Everything computed for one Riemann sum of `F`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RiemannSumReport {
    pub tagged_partition: TaggedPartition,
    pub sum: FinSuppVector,
    pub sum_norm: Rational,
    pub closed_form_norm: Rational,
    pub diameter: Rational,
}

impl RiemannSumReport {
    /// `sum_norm <= diameter`.
    pub fn bound_holds(&self) -> bool {
        self.sum_norm <= self.diameter
    }
}

/// Largest volume among pieces with a rational tag, 0 when there is none.
pub fn closed_form_sum_norm(tp: &TaggedPartition) -> Rational {
    tp.pieces()
        .filter(|(tag, _)| tag.is_rational())
        .map(|(_, vol)| vol)
        .max()
        .unwrap_or_else(Rational::zero)
}

impl<'a> CounterexamplePath<'a> {
    pub fn new(enumeration: &'a RationalEnumeration) -> Self {
        Self { enumeration }
    }

    pub fn enumeration(&self) -> &'a RationalEnumeration {
        self.enumeration
    }

    /// `e_k` when `t = r_k`, the zero sequence when `t` is irrational.
    pub fn eval_f(&self, t: &AlgebraicTag) -> Result<FinSuppVector> {
        check_unit(t)?;
        match t.as_rational() {
            Some(r) => {
                let k = self.enumeration.index_from_rational(r)?;
                Ok(FinSuppVector::indicator(k.get()))
            }
            None => Ok(FinSuppVector::zero()),
        }
    }

    /// `|F(t)|_inf`, the Dirichlet function.
    pub fn norm_path(&self, t: &AlgebraicTag) -> Result<Rational> {
        check_unit(t)?;
        Ok(if t.is_rational() {
            Rational::one()
        } else {
            Rational::zero()
        })
    }

    /// Direct sparse Riemann sum, checked against the closed form.
    pub fn riemann_sum(&self, tp: &TaggedPartition) -> Result<RiemannSumReport> {
        check_unit_partition(tp.partition())?;
        let mut sum = FinSuppVector::zero();
        for (tag, vol) in tp.pieces() {
            sum.add_scaled(&vol, &self.eval_f(tag)?);
        }
        let sum_norm = sum.sup_norm();
        let closed_form_norm = closed_form_sum_norm(tp);
        if sum_norm != closed_form_norm {
            return Err(Error::OracleMismatch {
                direct: sum_norm,
                closed_form: closed_form_norm,
            });
        }
        Ok(RiemannSumReport {
            tagged_partition: tp.clone(),
            sum,
            sum_norm,
            closed_form_norm,
            diameter: tp.diameter(),
        })
    }

    /// Checks `|S(F, P) - 0| < ε` for every member of `spec` with `δ = ε`.
    ///
    /// Members are evaluated in parallel; the certificate does not depend on
    /// scheduling.
    pub fn certify_epsilon_delta(&self, epsilon: &Rational, spec: &FamilySpec, seed: u64) -> Result<Certificate> {
        if !epsilon.is_positive() {
            return Err(Error::NonPositiveEpsilon(epsilon.clone()));
        }
        let delta = epsilon.clone();
        let outcomes: Vec<Result<(Rational, Rational)>> = (0..spec.count)
            .into_par_iter()
            .map(|i| {
                let tp = spec.member(i, &delta, seed)?;
                let diameter = tp.diameter();
                if diameter >= delta {
                    return Err(Error::MeshTooCoarse {
                        index: i,
                        diameter,
                        delta: delta.clone(),
                    });
                }
                let report = self.riemann_sum(&tp)?;
                Ok((report.sum_norm, diameter))
            })
            .collect();
        let mut cert = Certificate {
            epsilon: epsilon.clone(),
            delta,
            families: spec.families.iter().map(|f| f.to_string()).collect(),
            checked: 0,
            max_sum_norm: Rational::zero(),
            max_diameter: Rational::zero(),
            all_passed: true,
        };
        for outcome in outcomes {
            let (norm, diameter) = outcome?;
            cert.checked += 1;
            cert.all_passed &= &norm < epsilon;
            cert.max_sum_norm = cert.max_sum_norm.max(norm);
            cert.max_diameter = cert.max_diameter.max(diameter);
        }
        Ok(cert)
    }
}

/// Families of tagged partitions of `[0, 1]` with diameter below a given `δ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PartitionFamily {
    /// Uniform partitions with `m..=2m` pieces, `m = floor(1/δ) + 1`;
    /// mixed tags.
    Uniform,
    /// Random grid walks with mesh below `δ`; mixed tags.
    Random,
    /// Uniform and random members alternately, tagged with the rational of
    /// smallest enumeration index in each piece.
    Adversarial,
}

impl PartitionFamily {
    pub const ALL: [PartitionFamily; 3] = [
        PartitionFamily::Uniform,
        PartitionFamily::Random,
        PartitionFamily::Adversarial,
    ];

    fn partition(self, delta: &Rational, index: usize, rng_seed: u64) -> Result<Partition> {
        let (zero, one) = (Rational::zero(), Rational::one());
        let uniform = || {
            let m: num_bigint::BigInt = delta.recip().expect("positive delta").floor() + 1;
            let m: u64 = m.try_into().map_err(|_| Error::NonPositiveEpsilon(delta.clone()))?;
            Partition::uniform(&zero, &one, m + rng_seed % (m + 1))
        };
        match self {
            PartitionFamily::Uniform => uniform(),
            PartitionFamily::Random => Partition::random_with_mesh(&zero, &one, delta, rng_seed),
            PartitionFamily::Adversarial if index.is_multiple_of(2) => uniform(),
            PartitionFamily::Adversarial => Partition::random_with_mesh(&zero, &one, delta, rng_seed),
        }
    }

    fn strategy(self) -> TagStrategy {
        match self {
            PartitionFamily::Uniform | PartitionFamily::Random => TagStrategy::MixedRandom,
            PartitionFamily::Adversarial => TagStrategy::LowIndexRational,
        }
    }
}

impl fmt::Display for PartitionFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PartitionFamily::Uniform => "uniform",
            PartitionFamily::Random => "random",
            PartitionFamily::Adversarial => "adversarial",
        })
    }
}

impl FromStr for PartitionFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "uniform" => Ok(PartitionFamily::Uniform),
            "random" => Ok(PartitionFamily::Random),
            "adversarial" => Ok(PartitionFamily::Adversarial),
            other => Err(Error::Parse {
                what: "partition family",
                input: other.to_string(),
            }),
        }
    }
}

/// `count` members drawn round-robin from `families`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilySpec {
    pub families: Vec<PartitionFamily>,
    pub count: usize,
}

impl FamilySpec {
    pub fn new(families: Vec<PartitionFamily>, count: usize) -> Self {
        Self { families, count }
    }

    /// The `i`-th tagged partition, a pure function of `(i, delta, seed)`.
    pub fn member(&self, i: usize, delta: &Rational, seed: u64) -> Result<TaggedPartition> {
        let family = self.families[i % self.families.len()];
        let round = i / self.families.len();
        let member_seed = mix_seed(seed, i as u64);
        let partition = family.partition(delta, round, member_seed)?;
        Ok(TaggedPartition::with_strategy(partition, family.strategy(), member_seed))
    }
}

/// SplitMix64 finalizer over `(seed, i)`, so neighbouring members get
/// unrelated generator seeds.
fn mix_seed(seed: u64, i: u64) -> u64 {
    let mut z = seed ^ i.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(0x632b_e59b_d9b4_e019);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

mod fraction_str {
    use serde::Serializer;

    use crate::exact::Rational;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_fraction_string())
    }
}

/// Outcome of an ε-δ sweep. Rationals serialize as `p/q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    #[serde(with = "fraction_str")]
    pub epsilon: Rational,
    #[serde(with = "fraction_str")]
    pub delta: Rational,
    pub families: Vec<String>,
    pub checked: usize,
    #[serde(with = "fraction_str")]
    pub max_sum_norm: Rational,
    #[serde(with = "fraction_str")]
    pub max_diameter: Rational,
    pub all_passed: bool,
}
