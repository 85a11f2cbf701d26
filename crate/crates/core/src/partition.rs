//! Partitions and tagged partitions of a compact interval `[a, b]`.
//!
//! A partition with breakpoints `x_0 < x_1 < ... < x_n` consists of the
//! half-open pieces `[x_{j-1}, x_j)` for `j < n` and the closed last piece
//! `[x_{n-1}, x_n]`, so the pieces are disjoint and cover `[a, b]`.
//! Breakpoints are always rational; tags may lie in `Q[sqrt2]`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::enumeration::simplest_between;
use crate::error::{Error, Result};
use crate::exact::{AlgebraicTag, Rational};

/// Denominators of random breakpoints are drawn from `n..=max(n, 2^20)`.
pub const RANDOM_DENOMINATOR_MAX: u64 = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Closure {
    /// `[lower, upper)`
    HalfOpen,
    /// `[lower, upper]`
    Closed,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Interval {
    lower: Rational,
    upper: Rational,
    closure: Closure,
}

impl Interval {
    pub fn new(lower: Rational, upper: Rational, closure: Closure) -> Result<Self> {
        if lower >= upper {
            return Err(Error::EmptyInterval { lower, upper });
        }
        Ok(Self {
            lower,
            upper,
            closure,
        })
    }

    pub fn lower(&self) -> &Rational {
        &self.lower
    }

    pub fn upper(&self) -> &Rational {
        &self.upper
    }

    pub fn closure(&self) -> Closure {
        self.closure
    }

    pub fn volume(&self) -> Rational {
        &self.upper - &self.lower
    }

    pub fn contains(&self, t: &AlgebraicTag) -> bool {
        if t.cmp_rational(&self.lower) == Ordering::Less {
            return false;
        }
        matches!(
            (t.cmp_rational(&self.upper), self.closure),
            (Ordering::Less, _) | (Ordering::Equal, Closure::Closed)
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawPartition", into = "RawPartition")]
pub struct Partition {
    breakpoints: Vec<Rational>,
}

#[derive(Serialize, Deserialize)]
struct RawPartition {
    breakpoints: Vec<Rational>,
}

impl TryFrom<RawPartition> for Partition {
    type Error = Error;

    fn try_from(raw: RawPartition) -> Result<Self> {
        Partition::new(raw.breakpoints)
    }
}

impl From<Partition> for RawPartition {
    fn from(p: Partition) -> Self {
        Self {
            breakpoints: p.breakpoints,
        }
    }
}

impl Partition {
    pub fn new(breakpoints: Vec<Rational>) -> Result<Self> {
        if breakpoints.len() < 2 {
            return Err(Error::TooFewBreakpoints(breakpoints.len()));
        }
        if let Some(i) = (1..breakpoints.len()).find(|&i| breakpoints[i] <= breakpoints[i - 1]) {
            return Err(Error::NotStrictlyIncreasing {
                index: i,
                value: breakpoints[i].clone(),
            });
        }
        Ok(Self { breakpoints })
    }

    /// Breakpoints `a + k(b - a)/n`, `k = 0..=n`.
    pub fn uniform(a: &Rational, b: &Rational, n: u64) -> Result<Self> {
        check_base(a, b, n)?;
        let width = b - a;
        let n_big = Rational::from_integer(n);
        let breakpoints = (0..=n)
            .map(|k| a + &width * Rational::from_integer(k) / &n_big)
            .collect();
        Ok(Self { breakpoints })
    }

    /// `n` pieces with random breakpoints, determined by `seed`.
    ///
    /// All breakpoints share one random denominator `D` (relative to `[a, b]`),
    /// so midpoints of pieces keep denominators of order `D`.
    pub fn random(a: &Rational, b: &Rational, n: u64, seed: u64) -> Result<Self> {
        check_base(a, b, n)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let den = rng.random_range(n.max(2)..=n.max(RANDOM_DENOMINATOR_MAX));
        let mut ks: Vec<u64> = index::sample(&mut rng, (den - 1) as usize, (n - 1) as usize)
            .into_iter()
            .map(|i| i as u64 + 1)
            .collect();
        ks.sort_unstable();
        Ok(Self::from_grid(a, b, den, ks))
    }

    /// A random partition whose diameter is strictly below `max_diameter`.
    ///
    /// Walks a grid of random resolution in random steps, each step short
    /// enough to stay under the bound.
    pub fn random_with_mesh(a: &Rational, b: &Rational, max_diameter: &Rational, seed: u64) -> Result<Self> {
        check_base(a, b, 1)?;
        if !max_diameter.is_positive() {
            return Err(Error::NonPositiveEpsilon(max_diameter.clone()));
        }
        let ratio = max_diameter / (b - a);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inv: BigInt = ratio.recip().expect("positive").floor() + 1;
        let inv = inv.to_u64().expect("mesh too fine for a u64 grid");
        let den = rng.random_range(2 * inv..=8 * inv);
        // steps s with s/den < ratio
        let scaled = &ratio * Rational::from_integer(den);
        let ceil: BigInt = -(-&scaled).floor();
        let max_step = (ceil - BigInt::from(1)).to_u64().expect("step fits u64").max(1);
        let mut ks = Vec::new();
        let mut k = 0u64;
        loop {
            k += rng.random_range(1..=max_step);
            if k >= den {
                break;
            }
            ks.push(k);
        }
        Ok(Self::from_grid(a, b, den, ks))
    }

    fn from_grid(a: &Rational, b: &Rational, den: u64, interior: Vec<u64>) -> Self {
        let width = b - a;
        let den = Rational::from_integer(den);
        let mut breakpoints = Vec::with_capacity(interior.len() + 2);
        breakpoints.push(a.clone());
        breakpoints.extend(
            interior
                .into_iter()
                .map(|k| a + &width * Rational::from_integer(k) / &den),
        );
        breakpoints.push(b.clone());
        Self { breakpoints }
    }

    pub fn breakpoints(&self) -> &[Rational] {
        &self.breakpoints
    }

    pub fn start(&self) -> &Rational {
        &self.breakpoints[0]
    }

    pub fn end(&self) -> &Rational {
        self.breakpoints.last().expect("at least two breakpoints")
    }

    /// Number of pieces.
    pub fn len(&self) -> usize {
        self.breakpoints.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn interval(&self, j: usize) -> Interval {
        let closure = if j + 1 == self.len() {
            Closure::Closed
        } else {
            Closure::HalfOpen
        };
        Interval {
            lower: self.breakpoints[j].clone(),
            upper: self.breakpoints[j + 1].clone(),
            closure,
        }
    }

    pub fn intervals(&self) -> impl Iterator<Item = Interval> + '_ {
        (0..self.len()).map(|j| self.interval(j))
    }

    pub fn volumes(&self) -> impl Iterator<Item = Rational> + '_ {
        self.breakpoints.windows(2).map(|w| &w[1] - &w[0])
    }

    /// Largest piece length.
    pub fn diameter(&self) -> Rational {
        self.volumes().max().expect("at least one piece")
    }

    /// Partition whose breakpoints are the union of both.
    pub fn common_refinement(&self, other: &Partition) -> Result<Partition> {
        if self.start() != other.start() || self.end() != other.end() {
            return Err(Error::MismatchedBase(
                self.start().clone(),
                self.end().clone(),
                other.start().clone(),
                other.end().clone(),
            ));
        }
        let (xs, ys) = (&self.breakpoints, &other.breakpoints);
        let mut merged = Vec::with_capacity(xs.len() + ys.len());
        let (mut i, mut j) = (0, 0);
        while i < xs.len() || j < ys.len() {
            let next = match (xs.get(i), ys.get(j)) {
                (Some(x), Some(y)) => match x.cmp(y) {
                    Ordering::Less => {
                        i += 1;
                        x
                    }
                    Ordering::Greater => {
                        j += 1;
                        y
                    }
                    Ordering::Equal => {
                        i += 1;
                        j += 1;
                        x
                    }
                },
                (Some(x), None) => {
                    i += 1;
                    x
                }
                (None, Some(y)) => {
                    j += 1;
                    y
                }
                (None, None) => unreachable!(),
            };
            merged.push(next.clone());
        }
        Ok(Partition { breakpoints: merged })
    }

    /// True when every breakpoint of `coarser` is a breakpoint of `self`.
    pub fn refines(&self, coarser: &Partition) -> bool {
        self.start() == coarser.start()
            && self.end() == coarser.end()
            && coarser
                .breakpoints
                .iter()
                .all(|x| self.breakpoints.binary_search(x).is_ok())
    }
}

fn check_base(a: &Rational, b: &Rational, n: u64) -> Result<()> {
    if a >= b {
        return Err(Error::EmptyInterval {
            lower: a.clone(),
            upper: b.clone(),
        });
    }
    if n == 0 {
        return Err(Error::ZeroSubintervals);
    }
    Ok(())
}

/// How `tag_with_strategy` picks one point in each piece.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TagStrategy {
    /// Midpoint of each piece (rational).
    AllRationalMidpoint,
    /// `x_{j-1} + vol·√2/2` (irrational, interior).
    AllIrrational,
    /// Per-piece coin flip between the two above.
    MixedRandom,
    /// The interior rational with the smallest enumeration index.
    LowIndexRational,
}

impl TagStrategy {
    pub const ALL: [TagStrategy; 4] = [
        TagStrategy::AllRationalMidpoint,
        TagStrategy::AllIrrational,
        TagStrategy::MixedRandom,
        TagStrategy::LowIndexRational,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TagStrategy::AllRationalMidpoint => "rational_midpoint",
            TagStrategy::AllIrrational => "irrational",
            TagStrategy::MixedRandom => "mixed_random",
            TagStrategy::LowIndexRational => "low_index_rational",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawTagged", into = "RawTagged")]
pub struct TaggedPartition {
    partition: Partition,
    tags: Vec<AlgebraicTag>,
}

#[derive(Serialize, Deserialize)]
struct RawTagged {
    breakpoints: Vec<Rational>,
    tags: Vec<AlgebraicTag>,
}

impl TryFrom<RawTagged> for TaggedPartition {
    type Error = Error;

    fn try_from(raw: RawTagged) -> Result<Self> {
        TaggedPartition::new(Partition::new(raw.breakpoints)?, raw.tags)
    }
}

impl From<TaggedPartition> for RawTagged {
    fn from(tp: TaggedPartition) -> Self {
        Self {
            breakpoints: tp.partition.breakpoints,
            tags: tp.tags,
        }
    }
}

impl TaggedPartition {
    pub fn new(partition: Partition, tags: Vec<AlgebraicTag>) -> Result<Self> {
        if tags.len() != partition.len() {
            return Err(Error::TagCount {
                expected: partition.len(),
                got: tags.len(),
            });
        }
        for (j, tag) in tags.iter().enumerate() {
            if !partition.interval(j).contains(tag) {
                return Err(Error::TagOutsideInterval {
                    index: j,
                    tag: tag.clone(),
                });
            }
        }
        Ok(Self { partition, tags })
    }

    /// Left endpoint of every piece.
    pub fn left_endpoints(partition: Partition) -> Self {
        let tags = partition.breakpoints[..partition.len()]
            .iter()
            .cloned()
            .map(AlgebraicTag::rational)
            .collect();
        Self { partition, tags }
    }

    pub fn with_strategy(partition: Partition, strategy: TagStrategy, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let two = Rational::from(2);
        let tags = partition
            .breakpoints
            .windows(2)
            .map(|w| {
                let (lo, hi) = (&w[0], &w[1]);
                let midpoint = || AlgebraicTag::rational((lo + hi) / &two);
                // lo + vol·(√2/2) lies strictly inside since √2/2 < 1
                let irrational = || AlgebraicTag::new(lo.clone(), (hi - lo) / &two);
                match strategy {
                    TagStrategy::AllRationalMidpoint => midpoint(),
                    TagStrategy::AllIrrational => irrational(),
                    TagStrategy::MixedRandom => {
                        if rng.random_bool(0.5) {
                            midpoint()
                        } else {
                            irrational()
                        }
                    }
                    TagStrategy::LowIndexRational => AlgebraicTag::rational(simplest_between(lo, hi)),
                }
            })
            .collect();
        Self { partition, tags }
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn tags(&self) -> &[AlgebraicTag] {
        &self.tags
    }

    pub fn diameter(&self) -> Rational {
        self.partition.diameter()
    }

    /// `(tag, vol)` for each piece.
    pub fn pieces(&self) -> impl Iterator<Item = (&AlgebraicTag, Rational)> {
        self.tags.iter().zip(self.partition.volumes())
    }
}

/// Free-function form of [`TaggedPartition::with_strategy`].
pub fn tag_with_strategy(partition: &Partition, strategy: TagStrategy, seed: u64) -> TaggedPartition {
    TaggedPartition::with_strategy(partition.clone(), strategy, seed)
}
