//! Dyadic interval boxes used to certify numeric embeddings of field elements.
//!
//! Every endpoint is a rational with denominator `2^precision_bits`; all
//! operations round outward, so a box produced here always encloses the exact
//! value it was computed from.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use std::ops::{Add, Mul, Neg, Sub};

use crate::rational::{self, Rounding, Q};

fn pow2(bits: u32) -> BigInt {
    BigInt::one() << bits as usize
}

fn round_down(x: &Q, bits: u32) -> Q {
    let s = pow2(bits);
    Q::new((x * Q::from_integer(s.clone())).floor().to_integer(), s)
}

fn round_up(x: &Q, bits: u32) -> Q {
    let s = pow2(bits);
    Q::new((x * Q::from_integer(s.clone())).ceil().to_integer(), s)
}

/// Closed real interval `[lo, hi]` with dyadic endpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RealInterval {
    lo: Q,
    hi: Q,
    bits: u32,
}

impl RealInterval {
    pub fn point(x: &Q, bits: u32) -> Self {
        Self { lo: round_down(x, bits), hi: round_up(x, bits), bits }
    }

    /// Interval from arbitrary rational bounds; the bounds are rounded outward.
    pub fn from_bounds(lo: &Q, hi: &Q, bits: u32) -> Self {
        debug_assert!(lo <= hi);
        Self { lo: round_down(lo, bits), hi: round_up(hi, bits), bits }
    }

    pub fn zero(bits: u32) -> Self {
        Self { lo: Q::zero(), hi: Q::zero(), bits }
    }

    pub fn lo(&self) -> &Q {
        &self.lo
    }

    pub fn hi(&self) -> &Q {
        &self.hi
    }

    pub fn precision_bits(&self) -> u32 {
        self.bits
    }

    pub fn width(&self) -> Q {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Q {
        (&self.lo + &self.hi) / Q::from_integer(BigInt::from(2))
    }

    pub fn contains(&self, x: &Q) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn intersects(&self, other: &Self) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn is_degenerate(&self) -> bool {
        self.lo == self.hi
    }

    /// Upper bound on `|x|` over the interval.
    pub fn mag(&self) -> Q {
        let a = self.lo.abs();
        let b = self.hi.abs();
        if a > b {
            a
        } else {
            b
        }
    }

    pub fn scale(&self, k: &Q) -> Self {
        let (a, b) = (&self.lo * k, &self.hi * k);
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        Self::from_bounds(&lo, &hi, self.bits)
    }

    /// Enclosure of `sqrt` over a non-negative interval.
    pub fn sqrt(&self) -> Self {
        assert!(!self.lo.is_negative(), "sqrt of an interval reaching below zero");
        let bits = self.bits;
        let four_p = pow2(2 * bits);
        let scale = pow2(bits);
        let lo_scaled = (&self.lo * Q::from_integer(four_p.clone())).floor().to_integer();
        let lo_root = lo_scaled.sqrt();
        let hi_scaled = (&self.hi * Q::from_integer(four_p)).ceil().to_integer();
        let mut hi_root = hi_scaled.sqrt();
        if &hi_root * &hi_root < hi_scaled {
            hi_root += 1;
        }
        Self {
            lo: Q::new(lo_root, scale.clone()),
            hi: Q::new(hi_root, scale),
            bits,
        }
    }

    pub fn to_decimal_bounds(&self, digits: usize) -> (String, String) {
        (
            rational::to_decimal(&self.lo, digits, Rounding::Down),
            rational::to_decimal(&self.hi, digits, Rounding::Up),
        )
    }
}

impl Add for &RealInterval {
    type Output = RealInterval;
    fn add(self, rhs: Self) -> RealInterval {
        let bits = self.bits.min(rhs.bits);
        RealInterval::from_bounds(&(&self.lo + &rhs.lo), &(&self.hi + &rhs.hi), bits)
    }
}

impl Sub for &RealInterval {
    type Output = RealInterval;
    fn sub(self, rhs: Self) -> RealInterval {
        let bits = self.bits.min(rhs.bits);
        RealInterval::from_bounds(&(&self.lo - &rhs.hi), &(&self.hi - &rhs.lo), bits)
    }
}

impl Neg for &RealInterval {
    type Output = RealInterval;
    fn neg(self) -> RealInterval {
        RealInterval { lo: -&self.hi, hi: -&self.lo, bits: self.bits }
    }
}

impl Mul for &RealInterval {
    type Output = RealInterval;
    fn mul(self, rhs: Self) -> RealInterval {
        let bits = self.bits.min(rhs.bits);
        let products = [
            &self.lo * &rhs.lo,
            &self.lo * &rhs.hi,
            &self.hi * &rhs.lo,
            &self.hi * &rhs.hi,
        ];
        let lo = products.iter().min().unwrap();
        let hi = products.iter().max().unwrap();
        RealInterval::from_bounds(lo, hi, bits)
    }
}

/// Axis-aligned complex box `[re_lo, re_hi] × [im_lo, im_hi]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplexInterval {
    pub re: RealInterval,
    pub im: RealInterval,
}

impl ComplexInterval {
    pub fn new(re: RealInterval, im: RealInterval) -> Self {
        Self { re, im }
    }

    pub fn zero(bits: u32) -> Self {
        Self { re: RealInterval::zero(bits), im: RealInterval::zero(bits) }
    }

    pub fn precision_bits(&self) -> u32 {
        self.re.bits.min(self.im.bits)
    }

    pub fn contains(&self, re: &Q, im: &Q) -> bool {
        self.re.contains(re) && self.im.contains(im)
    }

    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }

    pub fn intersects(&self, other: &Self) -> bool {
        self.re.intersects(&other.re) && self.im.intersects(&other.im)
    }

    /// Largest side length.
    pub fn width(&self) -> Q {
        let a = self.re.width();
        let b = self.im.width();
        if a > b {
            a
        } else {
            b
        }
    }

    pub fn scale(&self, k: &Q) -> Self {
        Self { re: self.re.scale(k), im: self.im.scale(k) }
    }

    /// Enclosure of `|z|²`.
    pub fn norm_sqr(&self) -> RealInterval {
        let sq = |x: &RealInterval| {
            let p = x * x;
            if x.contains_zero() {
                RealInterval { lo: Q::zero(), hi: p.hi, bits: p.bits }
            } else {
                p
            }
        };
        &sq(&self.re) + &sq(&self.im)
    }

    pub fn to_decimal(&self, digits: usize) -> DecimalBox {
        let (re_lo, re_hi) = self.re.to_decimal_bounds(digits);
        let (im_lo, im_hi) = self.im.to_decimal_bounds(digits);
        DecimalBox { re_lo, re_hi, im_lo, im_hi }
    }
}

impl Add for &ComplexInterval {
    type Output = ComplexInterval;
    fn add(self, rhs: Self) -> ComplexInterval {
        ComplexInterval { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl Sub for &ComplexInterval {
    type Output = ComplexInterval;
    fn sub(self, rhs: Self) -> ComplexInterval {
        ComplexInterval { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
}

impl Mul for &ComplexInterval {
    type Output = ComplexInterval;
    fn mul(self, rhs: Self) -> ComplexInterval {
        let re = &(&self.re * &rhs.re) - &(&self.im * &rhs.im);
        let im = &(&self.re * &rhs.im) + &(&self.im * &rhs.re);
        ComplexInterval { re, im }
    }
}

/// Decimal rendering of a box; lower ends rounded down, upper ends up.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct DecimalBox {
    pub re_lo: String,
    pub re_hi: String,
    pub im_lo: String,
    pub im_hi: String,
}
