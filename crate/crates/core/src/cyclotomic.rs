//! Exact arithmetic in the cyclotomic field ℚ(ζ), ζ = e^{2πi/20}.
//!
//! Elements are stored on the power basis ζ⁰..ζ⁷ and kept reduced modulo the
//! 20th cyclotomic polynomial Φ₂₀(x) = x⁸ − x⁶ + x⁴ − x² + 1, so equality of
//! values is equality of coordinate vectors. The fifth root of unity used
//! throughout the crate is α = ζ⁴ and the imaginary unit is i = ζ⁵.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use crate::error::{Error, Result};
use crate::interval::{ComplexInterval, RealInterval};
use crate::rational::{self, q, qi, Q};

pub const DEGREE: usize = 8;

/// Starting precision for exact sign decisions.
pub const SIGN_START_BITS: u32 = 64;
/// Refinement stops with [`Error::PrecisionCap`] beyond this precision.
pub const SIGN_CAP_BITS: u32 = 16384;

const GUARD_BITS: u32 = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn as_ordering(self) -> Ordering {
        match self {
            Sign::Negative => Ordering::Less,
            Sign::Zero => Ordering::Equal,
            Sign::Positive => Ordering::Greater,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct CycloNumber {
    coords: [Q; DEGREE],
}

/// Folds a coefficient list of arbitrary length back onto the power basis.
fn reduce(mut poly: Vec<Q>) -> [Q; DEGREE] {
    // x^8 = x^6 - x^4 + x^2 - 1
    for k in (DEGREE..poly.len()).rev() {
        let c = std::mem::take(&mut poly[k]);
        if c.is_zero() {
            continue;
        }
        poly[k - 2] += &c;
        poly[k - 4] -= &c;
        poly[k - 6] += &c;
        poly[k - 8] -= &c;
    }
    poly.resize(DEGREE, Q::zero());
    let mut out: [Q; DEGREE] = Default::default();
    for (slot, c) in out.iter_mut().zip(poly) {
        *slot = c;
    }
    out
}

impl CycloNumber {
    pub fn new(coords: [Q; DEGREE]) -> Self {
        Self { coords }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_rational(Q::one())
    }

    pub fn from_rational(x: Q) -> Self {
        let mut coords: [Q; DEGREE] = Default::default();
        coords[0] = x;
        Self { coords }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(qi(n))
    }

    /// ζ^k for any integer exponent.
    pub fn zeta_pow(k: i64) -> Self {
        let k = k.rem_euclid(20) as usize;
        let mut poly = vec![Q::zero(); k + 1];
        poly[k] = Q::one();
        Self { coords: reduce(poly) }
    }

    pub fn zeta() -> Self {
        Self::zeta_pow(1)
    }

    /// α = e^{2πi/5} = ζ⁴.
    pub fn alpha() -> Self {
        Self::zeta_pow(4)
    }

    /// √−1 = ζ⁵.
    pub fn i() -> Self {
        Self::zeta_pow(5)
    }

    pub fn alpha_pow(k: i64) -> Self {
        Self::zeta_pow(4 * k)
    }

    /// Σ coeffs[k]·α^k.
    pub fn alpha_poly(coeffs: &[Q]) -> Self {
        coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .fold(Self::zero(), |acc, (k, c)| acc + Self::alpha_pow(k as i64).scale(c))
    }

    pub fn coords(&self) -> &[Q; DEGREE] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn is_rational(&self) -> bool {
        self.coords[1..].iter().all(Zero::is_zero)
    }

    pub fn as_rational(&self) -> Option<&Q> {
        self.is_rational().then(|| &self.coords[0])
    }

    pub fn scale(&self, k: &Q) -> Self {
        Self { coords: self.coords.clone().map(|c| c * k) }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// The automorphism ζ ↦ ζ^k, defined for k coprime to 20.
    pub fn galois(&self, k: i64) -> Result<Self> {
        if k.gcd(&20) != 1 {
            return Err(Error::InvalidInput(format!(
                "ζ ↦ ζ^{k} is not an automorphism (gcd({k}, 20) ≠ 1)"
            )));
        }
        let mut poly = vec![Q::zero(); 10];
        for (j, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            // ζ^10 = −1
            let e = (j as i64 * k).rem_euclid(20) as usize;
            if e < 10 {
                poly[e] += c;
            } else {
                poly[e - 10] -= c;
            }
        }
        Ok(Self { coords: reduce(poly) })
    }

    /// Complex conjugation, ζ ↦ ζ⁻¹.
    pub fn conj(&self) -> Self {
        self.galois(19).expect("19 is a unit mod 20")
    }

    /// (x + x̄)/2.
    pub fn re(&self) -> Self {
        (self + &self.conj()).scale(&q(1, 2))
    }

    /// (x − x̄)/(2i).
    pub fn im(&self) -> Self {
        // 1/(2i) = −i/2
        &(self - &self.conj()) * &Self::i().scale(&q(-1, 2))
    }

    pub fn is_real(&self) -> bool {
        *self == self.conj()
    }

    /// `x⁻¹ = (∏_{σ ≠ id} σ(x)) / N(x)` with the field norm N(x) ∈ ℚ.
    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut y = Self::one();
        for k in [3, 7, 9, 11, 13, 17, 19] {
            y = &y * &self.galois(k).expect("unit mod 20");
        }
        let prod = self * &y;
        let norm = prod.as_rational().expect("the field norm is rational");
        Ok(y.scale(&norm.recip()))
    }

    pub fn try_div(&self, rhs: &Self) -> Result<Self> {
        Ok(self * &rhs.inverse()?)
    }

    /// Certified box around the image under ζ ↦ e^{2πi/20}.
    pub fn embed(&self, precision_bits: u32) -> Result<ComplexInterval> {
        if precision_bits < 32 {
            return Err(Error::PrecisionTooLow { min: 32, got: precision_bits });
        }
        if self.is_zero() {
            return Ok(ComplexInterval::zero(precision_bits));
        }
        let table = RootTable::new(precision_bits + GUARD_BITS);
        let work = precision_bits + GUARD_BITS;
        let mut re = RealInterval::zero(work);
        let mut im = RealInterval::zero(work);
        for (k, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            re = &re + &table.cos[k].scale(c);
            im = &im + &table.sin[k].scale(c);
        }
        let im = if self.is_real() {
            RealInterval::zero(precision_bits)
        } else {
            RealInterval::from_bounds(im.lo(), im.hi(), precision_bits)
        };
        Ok(ComplexInterval::new(RealInterval::from_bounds(re.lo(), re.hi(), precision_bits), im))
    }

    /// Midpoint approximation of the embedding; display only.
    pub fn to_f64_pair(&self) -> (f64, f64) {
        let b = self.embed(64).expect("64 bits is above the minimum");
        (rational::to_f64(&b.re.midpoint()), rational::to_f64(&b.im.midpoint()))
    }

    /// Exact sign of a real element.
    pub fn sign_of_real(&self) -> Result<Sign> {
        if !self.is_real() {
            return Err(Error::NotReal);
        }
        if self.is_zero() {
            return Ok(Sign::Zero);
        }
        let mut bits = SIGN_START_BITS;
        while bits <= SIGN_CAP_BITS {
            let b = self.embed(bits)?;
            if b.re.lo().is_positive() {
                return Ok(Sign::Positive);
            }
            if b.re.hi().is_negative() {
                return Ok(Sign::Negative);
            }
            bits *= 2;
        }
        Err(Error::PrecisionCap(SIGN_CAP_BITS))
    }

    /// Exact order of two real elements.
    pub fn cmp_real(&self, other: &Self) -> Result<Ordering> {
        Ok((self - other).sign_of_real()?.as_ordering())
    }

    /// Human-readable polynomial in ζ.
    pub fn to_zeta_string(&self) -> String {
        let mut out = String::new();
        for (k, c) in self.coords.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            let a = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            if out.is_empty() {
                if c.is_negative() {
                    out.push('-');
                }
            } else {
                out.push_str(&format!(" {sign} "));
            }
            let coeff = match (k, a.is_one(), a.is_integer()) {
                (0, _, _) => a.to_string(),
                (_, true, _) => String::new(),
                (_, _, true) => a.to_string(),
                _ => format!("({a})"),
            };
            out.push_str(&coeff);
            match k {
                0 => {}
                1 => out.push('ζ'),
                _ => out.push_str(&format!("ζ^{k}")),
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

impl fmt::Debug for CycloNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycloNumber({})", self.to_zeta_string())
    }
}

impl fmt::Display for CycloNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_zeta_string())
    }
}

impl From<Q> for CycloNumber {
    fn from(x: Q) -> Self {
        Self::from_rational(x)
    }
}

impl From<&Q> for CycloNumber {
    fn from(x: &Q) -> Self {
        Self::from_rational(x.clone())
    }
}

impl From<i64> for CycloNumber {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl Add for &CycloNumber {
    type Output = CycloNumber;
    fn add(self, rhs: Self) -> CycloNumber {
        let mut coords = self.coords.clone();
        for (a, b) in coords.iter_mut().zip(&rhs.coords) {
            *a += b;
        }
        CycloNumber { coords }
    }
}

impl Sub for &CycloNumber {
    type Output = CycloNumber;
    fn sub(self, rhs: Self) -> CycloNumber {
        let mut coords = self.coords.clone();
        for (a, b) in coords.iter_mut().zip(&rhs.coords) {
            *a -= b;
        }
        CycloNumber { coords }
    }
}

/// Common denominator and integer numerators of the coordinates.
fn integer_form(x: &CycloNumber) -> (BigInt, Vec<BigInt>) {
    let den = x.coords.iter().fold(BigInt::one(), |d, c| d.lcm(c.denom()));
    let nums = x.coords.iter().map(|c| c.numer() * (&den / c.denom())).collect();
    (den, nums)
}

impl Mul for &CycloNumber {
    type Output = CycloNumber;
    fn mul(self, rhs: Self) -> CycloNumber {
        if self.is_zero() || rhs.is_zero() {
            return CycloNumber::zero();
        }
        let (da, na) = integer_form(self);
        let (db, nb) = integer_form(rhs);
        let mut poly = vec![BigInt::zero(); 2 * DEGREE - 1];
        for (i, a) in na.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in nb.iter().enumerate() {
                if !b.is_zero() {
                    poly[i + j] += a * b;
                }
            }
        }
        for k in (DEGREE..poly.len()).rev() {
            let c = std::mem::take(&mut poly[k]);
            if c.is_zero() {
                continue;
            }
            poly[k - 2] += &c;
            poly[k - 4] -= &c;
            poly[k - 6] += &c;
            poly[k - 8] -= &c;
        }
        let den = da * db;
        let mut coords: [Q; DEGREE] = Default::default();
        for (slot, n) in coords.iter_mut().zip(poly) {
            *slot = Q::new(n, den.clone());
        }
        CycloNumber { coords }
    }
}

impl Neg for &CycloNumber {
    type Output = CycloNumber;
    fn neg(self) -> CycloNumber {
        CycloNumber { coords: self.coords.clone().map(|c| -c) }
    }
}

impl Neg for CycloNumber {
    type Output = CycloNumber;
    fn neg(self) -> CycloNumber {
        CycloNumber { coords: self.coords.map(|c| -c) }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for CycloNumber {
            type Output = CycloNumber;
            fn $m(self, rhs: CycloNumber) -> CycloNumber {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&CycloNumber> for CycloNumber {
            type Output = CycloNumber;
            fn $m(self, rhs: &CycloNumber) -> CycloNumber {
                (&self).$m(rhs)
            }
        }
        impl $tr<CycloNumber> for &CycloNumber {
            type Output = CycloNumber;
            fn $m(self, rhs: CycloNumber) -> CycloNumber {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl AddAssign<&CycloNumber> for CycloNumber {
    fn add_assign(&mut self, rhs: &CycloNumber) {
        for (a, b) in self.coords.iter_mut().zip(&rhs.coords) {
            *a += b;
        }
    }
}

impl SubAssign<&CycloNumber> for CycloNumber {
    fn sub_assign(&mut self, rhs: &CycloNumber) {
        for (a, b) in self.coords.iter_mut().zip(&rhs.coords) {
            *a -= b;
        }
    }
}

impl Serialize for CycloNumber {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(DEGREE))?;
        for c in &self.coords {
            seq.serialize_element(&c.to_string())?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for CycloNumber {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let v: Vec<String> = Vec::deserialize(d)?;
        if v.len() != DEGREE {
            return Err(D::Error::custom(format!(
                "expected {DEGREE} coordinates, got {}",
                v.len()
            )));
        }
        let mut coords: [Q; DEGREE] = Default::default();
        for (slot, s) in coords.iter_mut().zip(&v) {
            *slot = rational::parse_rational(s).map_err(D::Error::custom)?;
        }
        Ok(Self { coords })
    }
}

/// Enclosures of cos(kπ/10) and sin(kπ/10) for k = 0..7, built from nested
/// square roots of 5 so every bound is exact integer arithmetic.
struct RootTable {
    cos: Vec<RealInterval>,
    sin: Vec<RealInterval>,
}

impl RootTable {
    fn new(bits: u32) -> Self {
        let work = bits + 8;
        let c = |x: Q| RealInterval::point(&x, work);
        let s5 = c(qi(5)).sqrt();
        let one = c(qi(1));
        let five = c(qi(5));
        let cos36 = (&one + &s5).scale(&q(1, 4));
        let cos72 = (&s5 - &one).scale(&q(1, 4));
        let cos18 = (&five + &s5).scale(&q(1, 8)).sqrt();
        let cos54 = (&five - &s5).scale(&q(1, 8)).sqrt();
        let zero = RealInterval::zero(work);
        let cos = vec![
            one.clone(),
            cos18.clone(),
            cos36.clone(),
            cos54.clone(),
            cos72.clone(),
            zero.clone(),
            -&cos72,
            -&cos54,
        ];
        let sin = vec![zero, cos72, cos54, cos36.clone(), cos18.clone(), one, cos18, cos36];
        Self { cos, sin }
    }
}
