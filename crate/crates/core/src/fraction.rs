//! Exact rationals over arbitrary-precision integers, always stored reduced.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeStruct, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `num / den` with `den > 0` and `gcd(num, den) = 1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Fraction {
    num: BigInt,
    den: BigInt,
}

impl Fraction {
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self> {
        let (mut num, mut den) = (num.into(), den.into());
        if den.is_zero() {
            return Err(Error::Domain("fraction with zero denominator".into()));
        }
        if den.is_negative() {
            num = -num;
            den = -den;
        }
        let g = num.gcd(&den);
        if !g.is_one() {
            num /= &g;
            den /= &g;
        }
        Ok(Fraction { num, den })
    }

    pub fn zero() -> Self {
        Fraction {
            num: BigInt::zero(),
            den: BigInt::one(),
        }
    }

    pub fn one() -> Self {
        Fraction {
            num: BigInt::one(),
            den: BigInt::one(),
        }
    }

    pub fn numer(&self) -> &BigInt {
        &self.num
    }

    pub fn denom(&self) -> &BigInt {
        &self.den
    }

    /// `⌊k · self⌋`.
    pub fn floor_mul(&self, k: i64) -> BigInt {
        (&self.num * k).div_floor(&self.den)
    }

    /// Numerator of `{k · self}` over the common denominator: `(k·num) mod den`.
    pub fn frac_residue(&self, k: i64) -> BigInt {
        (&self.num * k).mod_floor(&self.den)
    }

    pub fn is_strictly_between(&self, lo: &Fraction, hi: &Fraction) -> bool {
        lo < self && self < hi
    }

    /// Denominator as `u64`, if it fits.
    pub fn denom_u64(&self) -> Option<u64> {
        self.den.to_u64()
    }

    pub fn add(&self, other: &Fraction) -> Fraction {
        Fraction::new(
            &self.num * &other.den + &other.num * &self.den,
            &self.den * &other.den,
        )
        .expect("product of positive denominators")
    }

    pub fn sub(&self, other: &Fraction) -> Fraction {
        Fraction::new(
            &self.num * &other.den - &other.num * &self.den,
            &self.den * &other.den,
        )
        .expect("product of positive denominators")
    }
}

impl Ord for Fraction {
    fn cmp(&self, other: &Self) -> Ordering {
        (&self.num * &other.den).cmp(&(&other.num * &self.den))
    }
}

impl PartialOrd for Fraction {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl fmt::Debug for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Fraction({self})")
    }
}

impl FromStr for Fraction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let err = |reason: &str| Error::Parse {
            kind: "fraction",
            token: s.to_string(),
            reason: reason.to_string(),
        };
        let int = |t: &str| t.trim().parse::<BigInt>().map_err(|_| err("expected p/q"));
        match s.split_once('/') {
            Some((p, q)) => {
                let den = int(q)?;
                if den.is_zero() {
                    return Err(err("zero denominator"));
                }
                Fraction::new(int(p)?, den)
            }
            None => Fraction::new(int(s)?, 1),
        }
    }
}

// JSON form {"num": p, "den": q}; integers beyond i64 are written as strings.
fn big_to_json(n: &BigInt) -> serde_json::Value {
    match n.to_i64() {
        Some(v) => v.into(),
        None => n.to_string().into(),
    }
}

impl Serialize for Fraction {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("Fraction", 2)?;
        st.serialize_field("num", &big_to_json(&self.num))?;
        st.serialize_field("den", &big_to_json(&self.den))?;
        st.end()
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum BigRepr {
    Int(i64),
    Text(String),
}

impl BigRepr {
    fn into_big<E: de::Error>(self) -> std::result::Result<BigInt, E> {
        match self {
            BigRepr::Int(v) => Ok(v.into()),
            BigRepr::Text(s) => s
                .parse()
                .map_err(|_| E::custom(format!("bad integer {s:?}"))),
        }
    }
}

impl<'de> Deserialize<'de> for Fraction {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            num: BigRepr,
            den: BigRepr,
        }
        let r = Repr::deserialize(deserializer)?;
        Fraction::new(r.num.into_big()?, r.den.into_big()?).map_err(de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f(s: &str) -> Fraction {
        s.parse().unwrap()
    }

    #[test]
    fn reduces_on_construction() {
        let x = Fraction::new(6, -8).unwrap();
        assert_eq!(x.to_string(), "-3/4");
        assert_eq!(f("4/2").to_string(), "2/1");
        assert_eq!(f("3").to_string(), "3/1");
        assert!(Fraction::new(1, 0).is_err());
        assert!("1/0".parse::<Fraction>().is_err());
        assert!("a/2".parse::<Fraction>().is_err());
    }

    #[test]
    fn floors_and_residues() {
        let a = f("2/5");
        assert_eq!(a.floor_mul(3), BigInt::from(1));
        assert_eq!(a.floor_mul(-1), BigInt::from(-1));
        assert_eq!(a.frac_residue(3), BigInt::from(1));
        assert_eq!(a.frac_residue(-1), BigInt::from(3));
    }

    #[test]
    fn json_shape() {
        let s = serde_json::to_string(&f("2/5")).unwrap();
        assert_eq!(s, r#"{"num":2,"den":5}"#);
        let big = f("1/100000000000000000000000000");
        let back: Fraction = serde_json::from_str(&serde_json::to_string(&big).unwrap()).unwrap();
        assert_eq!(back, big);
        let unreduced: Fraction = serde_json::from_str(r#"{"num":2,"den":4}"#).unwrap();
        assert_eq!(unreduced, f("1/2"));
    }

    proptest! {
        #[test]
        fn ordering_matches_cross_multiplication(a in -500i64..500, b in 1i64..500, c in -500i64..500, d in 1i64..500) {
            let x = Fraction::new(a, b).unwrap();
            let y = Fraction::new(c, d).unwrap();
            prop_assert_eq!(x.cmp(&y), (a * d).cmp(&(c * b)));
            prop_assert_eq!(x.add(&y).sub(&y), x);
        }
    }
}
