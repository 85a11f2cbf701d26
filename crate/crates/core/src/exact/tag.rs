use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::Rational;
use crate::error::Error;

/// A real number `a + b·√2` with rational `a` and `b`.
///
/// Because √2 is irrational the pair `(a, b)` is determined by the value, so
/// structural equality is value equality and the number is rational exactly
/// when `b = 0`. Ordering is decided with a constant number of big-integer
/// operations; no approximation is involved.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct AlgebraicTag {
    a: Rational,
    b: Rational,
}

impl AlgebraicTag {
    pub fn new(a: Rational, b: Rational) -> Self {
        Self { a, b }
    }

    pub fn rational(a: Rational) -> Self {
        Self {
            a,
            b: Rational::zero(),
        }
    }

    /// Rational part `a`.
    pub fn rational_part(&self) -> &Rational {
        &self.a
    }

    /// Coefficient `b` of √2.
    pub fn sqrt2_coeff(&self) -> &Rational {
        &self.b
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// The value as a rational, when it is one.
    pub fn as_rational(&self) -> Option<&Rational> {
        self.is_rational().then_some(&self.a)
    }

    pub fn cmp_rational(&self, r: &Rational) -> Ordering {
        sign_of(&(&self.a - r), &self.b)
    }

    /// A rational within `10^-precision` of the value.
    ///
    /// Rational tags come back unchanged. Only meant for rendering.
    pub fn value_approx(&self, precision: u32) -> Rational {
        if self.is_rational() {
            return self.a.clone();
        }
        // floor(sqrt(2 b^2) * 10^p) = isqrt(floor(2 b^2 10^2p)), so the
        // truncation error is below one unit in the last place
        let scale = BigInt::from(10u32).pow(precision);
        let two_b_sq = &self.b * &self.b * Rational::from(2);
        let radicand = (two_b_sq.numer() * &scale * &scale) / two_b_sq.denom();
        let root = Rational::from_big(radicand.sqrt(), scale).expect("nonzero scale");
        if self.b.is_negative() {
            &self.a - root
        } else {
            &self.a + root
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.value_approx(20).to_f64()
    }
}

/// Sign of `p + q·√2`.
fn sign_of(p: &Rational, q: &Rational) -> Ordering {
    let zero = Rational::zero();
    let sp = p.cmp(&zero);
    let sq = q.cmp(&zero);
    if sq == Ordering::Equal {
        return sp;
    }
    if sp == Ordering::Equal || sp == sq {
        return sq;
    }
    // opposite signs: the larger magnitude wins; p^2 = 2q^2 is impossible
    let p_sq = p * p;
    let two_q_sq = q * q * Rational::from(2);
    if p_sq > two_q_sq {
        sp
    } else {
        sq
    }
}

impl Ord for AlgebraicTag {
    fn cmp(&self, other: &Self) -> Ordering {
        sign_of(&(&self.a - &other.a), &(&self.b - &other.b))
    }
}

impl PartialOrd for AlgebraicTag {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<Rational> for AlgebraicTag {
    fn from(a: Rational) -> Self {
        Self::rational(a)
    }
}

impl fmt::Display for AlgebraicTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => write!(f, "{}", self.a),
            (true, false) => write!(f, "{}*sqrt2", self.b),
            (false, false) if self.b.is_negative() => {
                write!(f, "{} - {}*sqrt2", self.a, self.b.abs())
            }
            (false, false) => write!(f, "{} + {}*sqrt2", self.a, self.b),
        }
    }
}

impl fmt::Debug for AlgebraicTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for AlgebraicTag {
    type Err = Error;

    /// Accepts `a`, `b*sqrt2` and `a + b*sqrt2` (or `a - b*sqrt2`).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || Error::Parse {
            what: "algebraic tag",
            input: s.to_string(),
        };
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let Some(body) = compact.strip_suffix("sqrt2") else {
            return Ok(Self::rational(compact.parse().map_err(|_| err())?));
        };
        let body = body.strip_suffix('*').unwrap_or(body);
        let bytes = body.as_bytes();
        let split = (1..bytes.len())
            .rev()
            .find(|&i| matches!(bytes[i], b'+' | b'-') && !matches!(bytes[i - 1], b'+' | b'-' | b'/'));
        let (a_str, b_str) = match split {
            Some(i) => (&body[..i], &body[i..]),
            None => ("", body),
        };
        let a = if a_str.is_empty() {
            Rational::zero()
        } else {
            a_str.parse().map_err(|_| err())?
        };
        let b_str = b_str.strip_prefix('+').unwrap_or(b_str);
        let b = match b_str {
            "" => Rational::one(),
            "-" => -Rational::one(),
            other => other.parse().map_err(|_| err())?,
        };
        Ok(Self::new(a, b))
    }
}

impl Serialize for AlgebraicTag {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for AlgebraicTag {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn tag(s: &str) -> AlgebraicTag {
        s.parse().unwrap()
    }

    /// Bisection on x^2 = 2 over rationals; independent of `value_approx`.
    fn sqrt2_bracket(steps: u32) -> (Rational, Rational) {
        let (mut lo, mut hi) = (Rational::one(), Rational::from(2));
        let two = Rational::from(2);
        for _ in 0..steps {
            let mid = (&lo + &hi) / &two;
            if &mid * &mid < two {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        (lo, hi)
    }

    #[test]
    fn rationality() {
        assert!(AlgebraicTag::new(q(1, 3), q(0, 1)).is_rational());
        assert!(!AlgebraicTag::new(q(0, 1), q(1, 2)).is_rational());
        assert!(!AlgebraicTag::new(q(1, 2), q(1, 4)).is_rational());
    }

    #[test]
    fn comparison_examples() {
        let half = AlgebraicTag::rational(q(1, 2));
        let half_sqrt2 = AlgebraicTag::new(q(0, 1), q(1, 2));
        // p^2 = 1/4 against 2q^2 = 1/2
        assert_eq!(half.cmp(&half_sqrt2), Ordering::Less);
        // p^2 = 1 against 2q^2 = 1/2
        assert_eq!(AlgebraicTag::rational(q(1, 1)).cmp(&half_sqrt2), Ordering::Greater);
        assert_eq!(half_sqrt2.cmp(&half_sqrt2.clone()), Ordering::Equal);
    }

    #[test]
    fn approx_sqrt2_matches_bisection() {
        let (lo, hi) = sqrt2_bracket(40);
        let approx = AlgebraicTag::new(q(0, 1), q(1, 1)).value_approx(3);
        let tol = q(1, 1000);
        assert!(approx > &lo - &tol && approx < &hi + &tol);
    }

    #[test]
    fn approx_rational_is_exact() {
        assert_eq!(AlgebraicTag::rational(q(1, 3)).value_approx(5), q(1, 3));
    }

    #[test]
    fn approx_mixed_tag() {
        // 1/2 + sqrt2/4, bracketed via the bisection oracle
        let (lo, hi) = sqrt2_bracket(40);
        let quarter = q(1, 4);
        let (lo, hi) = (q(1, 2) + &lo * &quarter, q(1, 2) + &hi * &quarter);
        let approx = tag("1/2 + 1/4*sqrt2").value_approx(2);
        let tol = q(1, 100);
        assert!(approx > &lo - &tol && approx < &hi + &tol);
        // truncation is toward zero for the irrational part
        assert_eq!(tag("-1*sqrt2").value_approx(6), q(-1414213, 1000000));
    }

    #[test]
    fn render_grammar() {
        assert_eq!(tag("1/8").to_string(), "1/8");
        assert_eq!(tag("1/4 + 1/8*sqrt2").to_string(), "1/4 + 1/8*sqrt2");
        assert_eq!(tag("0 + 1/2*sqrt2").to_string(), "1/2*sqrt2");
        assert_eq!(tag("1/2-1/4*sqrt2").to_string(), "1/2 - 1/4*sqrt2");
        assert_eq!(tag("1/2 + -1/4*sqrt2"), tag("1/2 - 1/4*sqrt2"));
        assert_eq!(tag("-sqrt2"), AlgebraicTag::new(q(0, 1), q(-1, 1)));
        assert_eq!(tag("-1/3 + sqrt2"), AlgebraicTag::new(q(-1, 3), q(1, 1)));
        assert_eq!(tag("0*sqrt2").to_string(), "0");
        assert!("1/2 + x*sqrt2".parse::<AlgebraicTag>().is_err());
        assert!("".parse::<AlgebraicTag>().is_err());
    }

    fn small_rational() -> impl Strategy<Value = Rational> {
        (-60i64..60, 1i64..40).prop_map(|(n, d)| Rational::new(n, d))
    }

    fn any_tag() -> impl Strategy<Value = AlgebraicTag> {
        (small_rational(), prop_oneof![Just(Rational::zero()), small_rational()])
            .prop_map(|(a, b)| AlgebraicTag::new(a, b))
    }

    proptest! {
        #[test]
        fn order_is_total_and_antisymmetric(x in any_tag(), y in any_tag()) {
            prop_assert_eq!(x.cmp(&y), y.cmp(&x).reverse());
            prop_assert_eq!(x.cmp(&y) == Ordering::Equal, x == y);
        }

        #[test]
        fn order_is_transitive(x in any_tag(), y in any_tag(), z in any_tag()) {
            if x <= y && y <= z {
                prop_assert!(x <= z);
            }
        }

        #[test]
        fn order_agrees_with_approximation(x in any_tag(), y in any_tag()) {
            let p = 12;
            let (ax, ay) = (x.value_approx(p), y.value_approx(p));
            let sep = Rational::from_big(2.into(), BigInt::from(10u32).pow(p)).unwrap();
            if (&ax - &ay).abs() > sep {
                prop_assert_eq!(x.cmp(&y), ax.cmp(&ay));
            }
        }

        #[test]
        fn approximation_error_is_bounded(x in any_tag(), p in 1u32..15) {
            let approx = x.value_approx(p);
            let unit = Rational::from_big(1.into(), BigInt::from(10u32).pow(p)).unwrap();
            prop_assert!(x.cmp_rational(&(&approx - &unit)) == Ordering::Greater);
            prop_assert!(x.cmp_rational(&(&approx + &unit)) == Ordering::Less);
        }

        #[test]
        fn text_round_trip(x in any_tag()) {
            prop_assert_eq!(x.to_string().parse::<AlgebraicTag>().unwrap(), x);
        }
    }
}
