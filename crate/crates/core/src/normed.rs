//! Normed spaces with exact rational norms.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::exact::Rational;

/// An element of a real normed space whose norm is always rational.
///
/// Implementors must satisfy `norm(zero) = 0`, `norm(s·v) = |s|·norm(v)` for
/// rational `s`, and the triangle inequality.
pub trait NormedVector: Clone {
    fn zero() -> Self;
    fn add(&self, other: &Self) -> Self;
    fn scale(&self, s: &Rational) -> Self;
    fn norm(&self) -> Rational;

    /// `self += s·other`.
    fn add_scaled_assign(&mut self, s: &Rational, other: &Self) {
        *self = self.add(&other.scale(s));
    }
}

/// The rationals under the absolute value.
impl NormedVector for Rational {
    fn zero() -> Self {
        Rational::zero()
    }

    fn add(&self, other: &Self) -> Self {
        self + other
    }

    fn scale(&self, s: &Rational) -> Self {
        self * s
    }

    fn norm(&self) -> Rational {
        self.abs()
    }
}

/// A finitely supported rational sequence `(α_n)` under the sup-norm.
///
/// Zero entries are never stored, so two vectors are equal exactly when their
/// maps are equal and the empty map is the zero sequence.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawEntries", into = "RawEntries")]
pub struct FinSuppVector {
    entries: BTreeMap<u128, Rational>,
}

#[derive(Serialize, Deserialize)]
struct RawEntries {
    entries: BTreeMap<String, Rational>,
}

impl TryFrom<RawEntries> for FinSuppVector {
    type Error = String;

    fn try_from(raw: RawEntries) -> Result<Self, Self::Error> {
        let mut entries = BTreeMap::new();
        for (k, v) in raw.entries {
            let k: u128 = k.parse().map_err(|_| format!("bad index {k:?}"))?;
            if !v.is_zero() {
                entries.insert(k, v);
            }
        }
        Ok(Self { entries })
    }
}

impl From<FinSuppVector> for RawEntries {
    fn from(v: FinSuppVector) -> Self {
        Self {
            entries: v.entries.into_iter().map(|(k, x)| (k.to_string(), x)).collect(),
        }
    }
}

impl FinSuppVector {
    pub fn new() -> Self {
        Self::default()
    }

    /// The sequence that is 1 at `k` and 0 elsewhere.
    pub fn indicator(k: u128) -> Self {
        Self::from_entries([(k, Rational::one())])
    }

    pub fn from_entries<I: IntoIterator<Item = (u128, Rational)>>(entries: I) -> Self {
        let mut v = Self::new();
        for (k, x) in entries {
            v.add_at(k, &x);
        }
        v
    }

    /// Adds `x` to coordinate `k` in place.
    pub fn add_at(&mut self, k: u128, x: &Rational) {
        if x.is_zero() {
            return;
        }
        let slot = self.entries.entry(k).or_insert_with(Rational::zero);
        *slot += x;
        if slot.is_zero() {
            self.entries.remove(&k);
        }
    }

    /// `self += s·other`, the accumulation step of a Riemann sum.
    pub fn add_scaled(&mut self, s: &Rational, other: &FinSuppVector) {
        if s.is_zero() {
            return;
        }
        for (&k, x) in &other.entries {
            self.add_at(k, &(x * s));
        }
    }

    pub fn get(&self, k: u128) -> Rational {
        self.entries.get(&k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn support_len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (u128, &Rational)> {
        self.entries.iter().map(|(&k, x)| (k, x))
    }

    pub fn sup_norm(&self) -> Rational {
        self.entries
            .values()
            .map(Rational::abs)
            .max()
            .unwrap_or_else(Rational::zero)
    }
}

impl NormedVector for FinSuppVector {
    fn zero() -> Self {
        Self::new()
    }

    fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&k, x) in &other.entries {
            out.add_at(k, x);
        }
        out
    }

    fn scale(&self, s: &Rational) -> Self {
        if s.is_zero() {
            return Self::new();
        }
        Self {
            entries: self.entries.iter().map(|(&k, x)| (k, x * s)).collect(),
        }
    }

    fn norm(&self) -> Rational {
        self.sup_norm()
    }

    fn add_scaled_assign(&mut self, s: &Rational, other: &Self) {
        self.add_scaled(s, other);
    }
}
