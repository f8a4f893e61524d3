//! Helpers around arbitrary-precision rationals and their string form.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed};
use std::str::FromStr;

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Parses `"p/q"`, `"p"`, or a plain decimal like `"-0.125"` / `"1e-3"` exactly.
pub fn parse_rational(s: &str) -> Result<Q> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty rational".into()));
    }
    if s.contains('/') {
        let r = Q::from_str(s).map_err(|e| Error::Parse(format!("{s:?}: {e}")))?;
        return Ok(r);
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(pos) => {
            let e: i32 = s[pos + 1..]
                .parse()
                .map_err(|_| Error::Parse(format!("{s:?}: bad exponent")))?;
            (&s[..pos], e)
        }
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = match digits.split_once('.') {
        Some((a, b)) => (a, b),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty()
        || !int_part.chars().all(|c| c.is_ascii_digit())
        || !frac_part.chars().all(|c| c.is_ascii_digit())
    {
        return Err(Error::Parse(format!("{s:?}: not a rational number")));
    }
    let all: String = format!("{int_part}{frac_part}");
    let n = BigInt::from_str(if all.is_empty() { "0" } else { &all })
        .map_err(|e| Error::Parse(format!("{s:?}: {e}")))?;
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10u32);
    let mut r = if scale >= 0 {
        Q::from_integer(n * num_traits::pow(ten, scale as usize))
    } else {
        Q::new(n, num_traits::pow(ten, (-scale) as usize))
    };
    if neg {
        r = -r;
    }
    Ok(r)
}

pub fn to_string(x: &Q) -> String {
    x.to_string()
}

/// True when the rational is an integer.
pub fn is_integer(x: &Q) -> bool {
    x.denom().is_one()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rounding {
    Down,
    Up,
}

/// Fixed-point decimal rendering with `digits` places after the point, rounded
/// in the given direction so interval endpoints stay outward.
pub fn to_decimal(x: &Q, digits: usize, rounding: Rounding) -> String {
    let scale = num_traits::pow(BigInt::from(10u32), digits);
    let scaled = x * Q::from_integer(scale.clone());
    let n = match rounding {
        Rounding::Down => scaled.floor().to_integer(),
        Rounding::Up => scaled.ceil().to_integer(),
    };
    let neg = n.is_negative();
    let (int, frac) = n.abs().div_rem(&scale);
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    out.push_str(&int.to_string());
    if digits > 0 {
        let f = frac.to_string();
        out.push('.');
        out.push_str(&"0".repeat(digits - f.len()));
        out.push_str(&f);
    }
    out
}

/// Nearest `f64`; display only.
pub fn to_f64(x: &Q) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(f64::NAN)
}

pub fn floor_int(x: &Q) -> BigInt {
    x.floor().to_integer()
}

/// Serde helpers storing rationals as `"p/q"` strings.
pub mod serde_q {
    use super::*;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Q, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(de::Error::custom)
    }

    pub mod array4 {
        use super::*;
        use serde::ser::SerializeSeq;

        pub fn serialize<S: Serializer>(x: &[Q; 4], s: S) -> std::result::Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(4))?;
            for v in x {
                seq.serialize_element(&v.to_string())?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(
            d: D,
        ) -> std::result::Result<[Q; 4], D::Error> {
            let v: Vec<String> = Vec::deserialize(d)?;
            if v.len() != 4 {
                return Err(de::Error::custom(format!(
                    "expected 4 rationals, got {}",
                    v.len()
                )));
            }
            let mut out: [Q; 4] = Default::default();
            for (slot, s) in out.iter_mut().zip(&v) {
                *slot = parse_rational(s).map_err(de::Error::custom)?;
            }
            Ok(out)
        }
    }
}
