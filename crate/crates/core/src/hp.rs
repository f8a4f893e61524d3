//! Conversions between exact rationals and `astro_float` binary floats, and a
//! minimal complex type over them.

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign as FSign};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::Q;

pub(crate) const RM: RoundingMode = RoundingMode::ToEven;

pub(crate) fn consts() -> Consts {
    Consts::new().expect("constant cache allocation")
}

/// Exact conversion of an integer.
pub(crate) fn int_to_float(n: &BigInt, cc: &mut Consts) -> BigFloat {
    let p = (n.bits() as usize + 64).max(64);
    BigFloat::parse(&n.to_string(), Radix::Dec, p, RoundingMode::None, cc)
}

/// `x` rounded to `p` bits.
pub(crate) fn q_to_float(x: &Q, p: usize, cc: &mut Consts) -> BigFloat {
    if x.is_zero() {
        return BigFloat::from_u64(0, p);
    }
    let n = int_to_float(x.numer(), cc);
    if x.denom().is_one() {
        let mut n = n;
        n.set_precision(p, RM).expect("precision in range");
        return n;
    }
    n.div(&int_to_float(x.denom(), cc), p, RM)
}

/// Exact value of a finite float.
pub(crate) fn float_to_q(x: &BigFloat) -> Result<Q> {
    if x.is_zero() {
        return Ok(Q::zero());
    }
    let (words, _, sign, exp, _) = x
        .as_raw_parts()
        .ok_or_else(|| Error::InvalidInput("non-finite float".into()))?;
    let mut m = BigInt::zero();
    for w in words.iter().rev() {
        m = (m << 64u32) + BigInt::from(*w);
    }
    if sign == FSign::Neg {
        m = -m;
    }
    let shift = exp as i64 - 64 * words.len() as i64;
    Ok(if shift >= 0 {
        Q::from_integer(m << shift as u64)
    } else {
        Q::new(m, BigInt::one() << (-shift) as u64)
    })
}

/// Scientific decimal rendering with `digits` significant digits.
pub fn format_float(x: &BigFloat, digits: usize) -> String {
    if x.is_zero() {
        return "0".into();
    }
    let Ok(exact) = float_to_q(x) else {
        return x.to_string();
    };
    let neg = exact.is_negative();
    let a = exact.abs();
    // a = m·10^e with 1 ≤ m < 10
    let mut e: i64 = (a.numer().bits() as i64 - a.denom().bits() as i64) * 30103 / 100000;
    let ten = Q::from_integer(BigInt::from(10));
    let pow10 = |k: i64| {
        if k >= 0 {
            num_traits::pow(ten.clone(), k as usize)
        } else {
            num_traits::pow(ten.clone(), (-k) as usize).recip()
        }
    };
    while a >= pow10(e + 1) {
        e += 1;
    }
    while a < pow10(e) {
        e -= 1;
    }
    let scaled = &a * pow10(digits as i64 - 1 - e);
    let mut int = scaled.round().to_integer();
    if int >= num_traits::pow(BigInt::from(10), digits) {
        int /= 10;
        e += 1;
    }
    let s = int.to_string();
    let (head, tail) = s.split_at(1);
    let sign = if neg { "-" } else { "" };
    if tail.is_empty() {
        format!("{sign}{head}e{e}")
    } else {
        format!("{sign}{head}.{tail}e{e}")
    }
}

#[derive(Debug, Clone)]
pub struct HpComplex {
    pub re: BigFloat,
    pub im: BigFloat,
}

impl HpComplex {
    pub fn zero(p: usize) -> Self {
        Self { re: BigFloat::from_u64(0, p), im: BigFloat::from_u64(0, p) }
    }

    pub fn from_real(re: BigFloat, p: usize) -> Self {
        Self { re, im: BigFloat::from_u64(0, p) }
    }

    pub fn add(&self, o: &Self, p: usize) -> Self {
        Self { re: self.re.add(&o.re, p, RM), im: self.im.add(&o.im, p, RM) }
    }

    pub fn sub(&self, o: &Self, p: usize) -> Self {
        Self { re: self.re.sub(&o.re, p, RM), im: self.im.sub(&o.im, p, RM) }
    }

    pub fn mul(&self, o: &Self, p: usize) -> Self {
        let re = self.re.mul(&o.re, p, RM).sub(&self.im.mul(&o.im, p, RM), p, RM);
        let im = self.re.mul(&o.im, p, RM).add(&self.im.mul(&o.re, p, RM), p, RM);
        Self { re, im }
    }

    pub fn scale(&self, k: &BigFloat, p: usize) -> Self {
        Self { re: self.re.mul(k, p, RM), im: self.im.mul(k, p, RM) }
    }

    pub fn norm_sqr(&self, p: usize) -> BigFloat {
        self.re.mul(&self.re, p, RM).add(&self.im.mul(&self.im, p, RM), p, RM)
    }

    pub fn abs(&self, p: usize) -> BigFloat {
        self.norm_sqr(p).sqrt(p, RM)
    }

    pub fn div(&self, o: &Self, p: usize) -> Result<Self> {
        let d = o.norm_sqr(p);
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let num = self.mul(&Self { re: o.re.clone(), im: o.im.neg() }, p);
        Ok(Self { re: num.re.div(&d, p, RM), im: num.im.div(&d, p, RM) })
    }
}
