//! A fixed bijection between the naturals and the rationals of `[0, 1]`.
//!
//! The order is `0, 1`, then for each denominator `q = 2, 3, ...` the reduced
//! fractions `p/q` with ascending `p`:
//!
//! ```text
//! k   : 0  1  2    3    4    5    6    7    8  ...
//! r_k : 0  1  1/2  1/3  2/3  1/4  3/4  1/5  2/5 ...
//! ```
//!
//! Ranking a fraction `p/q` needs the totient prefix sum
//! `Phi(q - 1) = phi(1) + ... + phi(q - 1)`, since the block of denominator
//! `q` starts right after all blocks with smaller denominators. Prefix sums
//! come from a sieve that grows on demand up to [`SIEVE_CAP`]; beyond that
//! they are computed with the Dirichlet-hyperbola recursion
//! `Phi(n) = n(n+1)/2 - sum_{d>=2} Phi(n / d)` and memoized.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, RwLock};

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::exact::{AlgebraicTag, Rational};

/// Largest denominator the sieve will be grown to.
pub const SIEVE_CAP: u64 = 1 << 22;

const INITIAL_SIEVE: u64 = 1 << 12;

/// Position of a rational in the enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EnumIndex(pub u128);

impl EnumIndex {
    pub fn get(self) -> u128 {
        self.0
    }
}

impl From<u128> for EnumIndex {
    fn from(k: u128) -> Self {
        Self(k)
    }
}

impl fmt::Display for EnumIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

struct Sieve {
    limit: u64,
    /// smallest prime factor, 0 for n < 2
    spf: Vec<u32>,
    /// prefix[n] = phi(1) + ... + phi(n)
    prefix: Vec<u64>,
}

impl Sieve {
    fn build(limit: u64) -> Self {
        let n = limit as usize;
        let mut spf = vec![0u32; n + 1];
        let mut phi = vec![0u32; n + 1];
        let mut primes: Vec<u32> = Vec::new();
        if n >= 1 {
            phi[1] = 1;
        }
        for i in 2..=n {
            if spf[i] == 0 {
                spf[i] = i as u32;
                phi[i] = i as u32 - 1;
                primes.push(i as u32);
            }
            for &p in &primes {
                let m = i * p as usize;
                if p > spf[i] || m > n {
                    break;
                }
                spf[m] = p;
                phi[m] = if p == spf[i] { phi[i] * p } else { phi[i] * (p - 1) };
            }
        }
        let mut prefix = vec![0u64; n + 1];
        for i in 1..=n {
            prefix[i] = prefix[i - 1] + phi[i] as u64;
        }
        Self { limit, spf, prefix }
    }
}

/// Ranking and unranking for the canonical enumeration of `Q ∩ [0, 1]`.
///
/// Queries take `&self`; the sieve is a grow-only cache behind a lock so one
/// instance can be shared between threads.
pub struct RationalEnumeration {
    sieve: RwLock<Sieve>,
    large: Mutex<HashMap<u64, u128>>,
}

impl Default for RationalEnumeration {
    fn default() -> Self {
        Self::new()
    }
}

impl fmt::Debug for RationalEnumeration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let limit = self.sieve.read().map(|s| s.limit).unwrap_or(0);
        f.debug_struct("RationalEnumeration")
            .field("sieve_limit", &limit)
            .finish()
    }
}

impl RationalEnumeration {
    pub fn new() -> Self {
        Self::with_sieve(INITIAL_SIEVE)
    }

    /// Pre-sizes the sieve so queries up to `limit` never take the write lock.
    pub fn with_sieve(limit: u64) -> Self {
        Self {
            sieve: RwLock::new(Sieve::build(limit.clamp(2, SIEVE_CAP))),
            large: Mutex::new(HashMap::new()),
        }
    }

    pub fn sieve_limit(&self) -> u64 {
        self.sieve.read().expect("sieve lock poisoned").limit
    }

    fn ensure_sieve(&self, n: u64) {
        if n <= self.sieve_limit() {
            return;
        }
        let mut sieve = self.sieve.write().expect("sieve lock poisoned");
        if n > sieve.limit {
            let target = n.next_power_of_two().clamp(sieve.limit * 2, SIEVE_CAP);
            *sieve = Sieve::build(target);
        }
    }

    /// `phi(1) + ... + phi(n)`.
    pub fn totient_sum(&self, n: u64) -> u128 {
        if n <= SIEVE_CAP {
            self.ensure_sieve(n);
            return self.sieve.read().expect("sieve lock poisoned").prefix[n as usize] as u128;
        }
        if let Some(&v) = self.large.lock().expect("memo lock poisoned").get(&n) {
            return v;
        }
        let mut total = (n as u128) * (n as u128 + 1) / 2;
        let mut d = 2u64;
        while d <= n {
            let v = n / d;
            let d_end = n / v;
            total -= (d_end - d + 1) as u128 * self.totient_sum(v);
            d = match d_end.checked_add(1) {
                Some(next) => next,
                None => break,
            };
        }
        self.large.lock().expect("memo lock poisoned").insert(n, total);
        total
    }

    fn distinct_prime_factors(&self, mut n: u64) -> Vec<u64> {
        let mut out = Vec::new();
        if n <= SIEVE_CAP {
            self.ensure_sieve(n);
            let sieve = self.sieve.read().expect("sieve lock poisoned");
            while n > 1 {
                let p = sieve.spf[n as usize] as u64;
                out.push(p);
                while n.is_multiple_of(p) {
                    n /= p;
                }
            }
            return out;
        }
        let mut p = 2u64;
        while p.saturating_mul(p) <= n {
            if n.is_multiple_of(p) {
                out.push(p);
                while n.is_multiple_of(p) {
                    n /= p;
                }
            }
            p += if p == 2 { 1 } else { 2 };
        }
        if n > 1 {
            out.push(n);
        }
        out
    }

    /// Number of `i` in `1..=m` with `gcd(i, q) = 1`, by inclusion-exclusion
    /// over the distinct primes of `q`.
    fn coprime_count(primes: &[u64], m: u64) -> u64 {
        let mut total: i128 = 0;
        for mask in 0u32..(1 << primes.len()) {
            let mut d: u128 = 1;
            for (i, &p) in primes.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    d *= p as u128;
                }
            }
            let term = (m as u128 / d) as i128;
            if mask.count_ones() % 2 == 0 {
                total += term;
            } else {
                total -= term;
            }
        }
        total as u64
    }

    /// Rank of `q` in the enumeration.
    pub fn index_from_rational(&self, q: &Rational) -> Result<EnumIndex> {
        if q.is_negative() || *q > Rational::one() {
            return Err(Error::OutsideUnitInterval(AlgebraicTag::rational(q.clone())));
        }
        if q.is_zero() {
            return Ok(EnumIndex(0));
        }
        if q.is_integer() {
            return Ok(EnumIndex(1));
        }
        let too_large = || Error::DenominatorTooLarge(q.denom().to_string());
        let den = q.denom().to_u64().ok_or_else(too_large)?;
        let num = q.numer().to_u64().ok_or_else(too_large)?;
        let primes = self.distinct_prime_factors(den);
        let rank = Self::coprime_count(&primes, num - 1) as u128;
        Ok(EnumIndex(1 + self.totient_sum(den - 1) + rank))
    }

    /// The rational at position `k`.
    pub fn rational_from_index(&self, k: EnumIndex) -> Rational {
        let k = k.0;
        if k < 2 {
            return Rational::from_integer(k as i64);
        }
        // the block of denominator q covers indices 1 + Phi(q-1) ..= Phi(q)
        let den = self.first_denominator_reaching(k);
        let offset = (k - 1 - self.totient_sum(den - 1)) as u64;
        let primes = self.distinct_prime_factors(den);
        // smallest p with coprime_count(p) = offset + 1
        let (mut lo, mut hi) = (1u64, den - 1);
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if Self::coprime_count(&primes, mid) > offset {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        Rational::from_big(BigInt::from(lo), BigInt::from(den)).expect("positive denominator")
    }

    /// Smallest `q` with `Phi(q) >= k`.
    fn first_denominator_reaching(&self, k: u128) -> u64 {
        loop {
            let limit = self.sieve_limit();
            {
                let sieve = self.sieve.read().expect("sieve lock poisoned");
                if sieve.prefix[limit as usize] as u128 >= k {
                    return sieve.prefix.partition_point(|&s| (s as u128) < k) as u64;
                }
            }
            if limit >= SIEVE_CAP {
                break;
            }
            self.ensure_sieve(limit + 1);
        }
        let (mut lo, mut hi) = (SIEVE_CAP, SIEVE_CAP * 2);
        while self.totient_sum(hi) < k {
            lo = hi;
            hi = hi.checked_mul(2).expect("index beyond the u64 denominator range");
        }
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if self.totient_sum(mid) >= k {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        lo
    }
}

/// The rational of least denominator in the open interval `(lower, upper)`.
///
/// That fraction is unique, and among fractions of that denominator it has
/// the least numerator; for intervals inside `[0, 1]` it is therefore the
/// member of the interval with the smallest enumeration index. Found by
/// Stern–Brocot descent, taking whole runs of the descent at once.
///
/// Panics unless `lower < upper`.
pub fn simplest_between(lower: &Rational, upper: &Rational) -> Rational {
    assert!(lower < upper, "empty interval ({lower}, {upper})");
    let zero = Rational::zero();
    if lower.is_negative() && upper.is_positive() {
        zero
    } else if !upper.is_positive() {
        -simplest_nonnegative(&-upper, &-lower)
    } else {
        simplest_nonnegative(lower, upper)
    }
}

fn simplest_nonnegative(lower: &Rational, upper: &Rational) -> Rational {
    let whole = Rational::from_integer(lower.floor());
    let next = &whole + Rational::one();
    if &next < upper {
        return next;
    }
    let low_frac = lower - &whole;
    let high_frac = upper - &whole;
    let high_recip = high_frac.recip().expect("upper exceeds lower >= whole");
    let tail = if low_frac.is_zero() {
        // simplest in (1/high_frac, infinity) is the next integer
        Rational::from_integer(high_recip.floor()) + Rational::one()
    } else {
        let low_recip = low_frac.recip().expect("nonzero");
        simplest_nonnegative(&high_recip, &low_recip)
    };
    whole + tail.recip().expect("tail is positive")
}
