//! Exact rational scalars and vectors.
//!
//! `Rational` is an arbitrary-precision fraction kept in lowest terms with a
//! positive denominator. Text I/O always uses the `num/den` form, including
//! for integers (`4/1`), so serialized values never pass through floats.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serializer};

use crate::error::{Error, Result};

pub type Rational = BigRational;
pub type RationalVector = Vec<Rational>;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

pub fn half() -> Rational {
    rat(1, 2)
}

pub fn vector(entries: &[(i64, i64)]) -> RationalVector {
    entries.iter().map(|&(n, d)| rat(n, d)).collect()
}

pub fn int_vector(entries: &[i64]) -> RationalVector {
    entries.iter().map(|&n| int(n)).collect()
}

/// `num/den` with the denominator always present.
pub fn format_rational(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Accepts `n/d` or a bare integer `n`. Zero denominators and anything else
/// (decimals, exponents, whitespace) are rejected.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::Parse(format!("malformed rational {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let valid = |t: &str| {
        let digits = t.strip_prefix('-').unwrap_or(t);
        !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
    };
    if !valid(num) || !valid(den) || den.starts_with('-') {
        return Err(bad());
    }
    let n: BigInt = num.parse().map_err(|_| bad())?;
    let d: BigInt = den.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

pub fn format_vector(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

pub fn parse_vector(items: &[String]) -> Result<RationalVector> {
    items.iter().map(|s| parse_rational(s)).collect()
}

/// Comma separated list of rationals, as accepted on the command line.
pub fn parse_vector_list(s: &str) -> Result<RationalVector> {
    s.split(',').map(|t| parse_rational(t.trim())).collect()
}

pub fn to_f64(q: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or(f64::NAN)
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

pub fn sub(a: &[Rational], b: &[Rational]) -> RationalVector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn add(a: &[Rational], b: &[Rational]) -> RationalVector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn scale(a: &[Rational], s: &Rational) -> RationalVector {
    a.iter().map(|x| x * s).collect()
}

pub fn is_zero_vector(a: &[Rational]) -> bool {
    a.iter().all(Zero::is_zero)
}

/// Scales `v` so that its first nonzero entry has absolute value one.
/// The sign is preserved. Zero vectors are returned unchanged.
pub fn normalize_leading(v: &[Rational]) -> RationalVector {
    match v.iter().find(|x| !x.is_zero()) {
        Some(lead) => {
            let s = lead.abs().recip();
            scale(v, &s)
        }
        None => v.to_vec(),
    }
}

pub mod serde_rational {
    use super::*;

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

pub mod serde_vector {
    use super::*;
    use serde::Serialize;

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        format_vector(v).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<RationalVector, D::Error> {
        let items = Vec::<String>::deserialize(d)?;
        parse_vector(&items).map_err(serde::de::Error::custom)
    }
}

pub mod serde_matrix {
    use super::*;
    use serde::Serialize;

    pub fn serialize<S: Serializer>(
        m: &[RationalVector],
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        m.iter().map(|r| format_vector(r)).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<RationalVector>, D::Error> {
        let rows = Vec::<Vec<String>>::deserialize(d)?;
        rows.iter()
            .map(|r| parse_vector(r))
            .collect::<Result<_>>()
            .map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn format_always_has_denominator() {
        assert_eq!(format_rational(&int(4)), "4/1");
        assert_eq!(format_rational(&rat(-2, 4)), "-1/2");
        assert_eq!(format_rational(&rat(3, -6)), "-1/2");
        assert_eq!(format_rational(&zero()), "0/1");
    }

    #[test]
    fn parse_accepts_fractions_and_integers() {
        assert_eq!(parse_rational("6/8").unwrap(), rat(3, 4));
        assert_eq!(parse_rational("-7").unwrap(), int(-7));
        assert_eq!(parse_rational("-1/3").unwrap(), rat(-1, 3));
    }

    #[test]
    fn parse_rejects_malformed() {
        for s in ["", "1/0", "0.5", "1e3", "a/b", "1/-2", " 1", "1//2", "--1", "/2"] {
            assert!(parse_rational(s).is_err(), "{s:?} should be rejected");
        }
    }

    #[test]
    fn normalize_keeps_sign() {
        assert_eq!(normalize_leading(&int_vector(&[0, -3, 6])), int_vector(&[0, -1, 2]));
    }
}
