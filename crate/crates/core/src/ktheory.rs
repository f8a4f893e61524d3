//! Chern-character calculus on the quintic 3-fold X ⊂ ℙ⁴.
//!
//! A class is stored as `(v0, v1, v2, v3)` with `ch_i = v_i·H^i`. Intersection
//! numbers use `H³ = 5`, so the integrated pairings are
//! `(ch0, H²ch1, Hch2, ch3) = (v0, 5v1, 5v2, 5v3)`.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use std::ops::{Add, Index, Neg, Sub};

use crate::error::{Error, Result};
use crate::rational::{self, q, qi, Q};

/// H³ on the quintic 3-fold, also h² on the quintic surface.
pub const HYPERPLANE_DEGREE: i64 = 5;

/// td_X in H-power units: (1, 0, 5/6, 0), from c₁ = 0 and c₂(X) = 10H².
pub fn todd_class() -> [Q; 4] {
    [qi(1), qi(0), q(5, 6), qi(0)]
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct ChernVector {
    #[serde(rename = "ch", with = "crate::rational::serde_q::array4")]
    v: [Q; 4],
}

impl ChernVector {
    pub fn new(v0: Q, v1: Q, v2: Q, v3: Q) -> Self {
        Self { v: [v0, v1, v2, v3] }
    }

    pub fn from_array(v: [Q; 4]) -> Self {
        Self { v }
    }

    /// Convenience constructor from `(numerator, denominator)` pairs.
    pub fn from_fracs(v: [(i64, i64); 4]) -> Self {
        Self { v: v.map(|(n, d)| q(n, d)) }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    /// ch(O_X) = (1, 0, 0, 0).
    pub fn structure_sheaf() -> Self {
        Self::from_fracs([(1, 1), (0, 1), (0, 1), (0, 1)])
    }

    /// ch(O_x) of a closed point: ∫ch₃ = 1.
    pub fn point() -> Self {
        Self::from_fracs([(0, 1), (0, 1), (0, 1), (1, 5)])
    }

    /// ch(O_X(m)) = e^{mH}.
    pub fn line_bundle(m: i64) -> Self {
        let m = qi(m);
        Self::new(
            qi(1),
            m.clone(),
            &m * &m / qi(2),
            &m * &m * &m / qi(6),
        )
    }

    pub fn coords(&self) -> &[Q; 4] {
        &self.v
    }

    pub fn v0(&self) -> &Q {
        &self.v[0]
    }
    pub fn v1(&self) -> &Q {
        &self.v[1]
    }
    pub fn v2(&self) -> &Q {
        &self.v[2]
    }
    pub fn v3(&self) -> &Q {
        &self.v[3]
    }

    pub fn scale(&self, k: &Q) -> Self {
        Self { v: self.v.clone().map(|x| x * k) }
    }

    /// (ch0, H²ch1, Hch2, ch3) as numbers.
    pub fn integrated_pairings(&self) -> [Q; 4] {
        let five = qi(HYPERPLANE_DEGREE);
        [
            self.v[0].clone(),
            &self.v[1] * &five,
            &self.v[2] * &five,
            &self.v[3] * &five,
        ]
    }

    /// Inverse of [`Self::integrated_pairings`].
    pub fn from_integrated(p: [Q; 4]) -> Self {
        let five = qi(HYPERPLANE_DEGREE);
        let [a, b, c, d] = p;
        Self::new(a, b / &five, c / &five, d / five)
    }

    /// e^{−βH}·ch.
    pub fn twist(&self, beta: &Q) -> Self {
        let [v0, v1, v2, v3] = &self.v;
        let b2 = beta * beta;
        let b3 = &b2 * beta;
        Self::new(
            v0.clone(),
            v1 - beta * v0,
            v2 - beta * v1 + &b2 * v0 / qi(2),
            v3 - beta * v2 + &b2 * v1 / qi(2) - &b3 * v0 / qi(6),
        )
    }

    /// Multiplication by e^{mH}, i.e. ⊗O_X(m).
    pub fn tensor_line(&self, m: i64) -> Self {
        self.twist(&qi(-m))
    }

    /// ∫_X ch.
    pub fn integrate(&self) -> Q {
        &self.v[3] * qi(HYPERPLANE_DEGREE)
    }

    /// χ(E) = ∫ ch(E)·td_X = 5v3 + (25/6)v1.
    pub fn euler_char(&self) -> Q {
        let td = todd_class();
        let five = qi(HYPERPLANE_DEGREE);
        // ch·td top-degree part: v3 + v1·td₂ (td₁ = td₃ = 0).
        (&self.v[3] * &td[0] + &self.v[1] * &td[2] + &self.v[2] * &td[1] + &self.v[0] * &td[3])
            * five
    }

    /// Δ(E)·H = 5(v1² − 2·v0·v2).
    pub fn discriminant_h(&self) -> Q {
        let [v0, v1, v2, _] = &self.v;
        (v1 * v1 - qi(2) * v0 * v2) * qi(HYPERPLANE_DEGREE)
    }

    /// H²ch₁^B for B = βH, as a number.
    pub fn h2_ch1_twisted(&self, beta: &Q) -> Q {
        (&self.v[1] - beta * &self.v[0]) * qi(HYPERPLANE_DEGREE)
    }

    /// Checks the integrality lattice of a genuine sheaf class:
    /// `ch0, c1 ∈ ℤ`, `H·ch2 ∈ ½ℤ`, `6·ch3 ∈ ℤ` (integrated units).
    pub fn check_sheaf_like(&self) -> Result<()> {
        let [v0, v1, v2, v3] = &self.v;
        if !rational::is_integer(v0) {
            return Err(Error::NotSheafLike(format!("rank {v0} is not an integer")));
        }
        if !rational::is_integer(v1) {
            return Err(Error::NotSheafLike(format!("c1 = {v1}·H is not an integral class")));
        }
        if !rational::is_integer(&(v2 * qi(2 * HYPERPLANE_DEGREE))) {
            return Err(Error::NotSheafLike(format!("H·ch2 = {} is not in ½ℤ", v2 * qi(5))));
        }
        if !rational::is_integer(&(v3 * qi(6 * HYPERPLANE_DEGREE))) {
            return Err(Error::NotSheafLike(format!("ch3 = {} is not in (1/6)ℤ", v3 * qi(5))));
        }
        Ok(())
    }

    pub fn is_torsion(&self) -> bool {
        self.v[0].is_zero()
    }

    pub fn rank_is_positive(&self) -> bool {
        self.v[0].is_positive()
    }
}

impl Index<usize> for ChernVector {
    type Output = Q;
    fn index(&self, i: usize) -> &Q {
        &self.v[i]
    }
}

impl Add for &ChernVector {
    type Output = ChernVector;
    fn add(self, rhs: Self) -> ChernVector {
        let mut v = self.v.clone();
        for (a, b) in v.iter_mut().zip(&rhs.v) {
            *a += b;
        }
        ChernVector { v }
    }
}

impl Sub for &ChernVector {
    type Output = ChernVector;
    fn sub(self, rhs: Self) -> ChernVector {
        let mut v = self.v.clone();
        for (a, b) in v.iter_mut().zip(&rhs.v) {
            *a -= b;
        }
        ChernVector { v }
    }
}

impl Add for ChernVector {
    type Output = ChernVector;
    fn add(self, rhs: Self) -> ChernVector {
        &self + &rhs
    }
}

impl Sub for ChernVector {
    type Output = ChernVector;
    fn sub(self, rhs: Self) -> ChernVector {
        &self - &rhs
    }
}

impl Neg for &ChernVector {
    type Output = ChernVector;
    fn neg(self) -> ChernVector {
        ChernVector { v: self.v.clone().map(|x| -x) }
    }
}

impl Neg for ChernVector {
    type Output = ChernVector;
    fn neg(self) -> ChernVector {
        -&self
    }
}

/// A coherent system `(O_S^{⊕R} → F)` on the quintic surface S, through the
/// numbers the central charge sees: `ch(F) = (r, l, n)` with only `dh = h·l`
/// kept.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SurfaceClass {
    r: i64,
    dh: i64,
    #[serde(with = "crate::rational::serde_q")]
    n: Q,
    #[serde(rename = "R")]
    big_r: u64,
}

impl SurfaceClass {
    /// `n` must satisfy `2n ∈ ℤ`.
    pub fn new(big_r: u64, r: i64, dh: i64, n: Q) -> Result<Self> {
        if !rational::is_integer(&(&n * qi(2))) {
            return Err(Error::InvalidInput(format!("n = {n} must satisfy 2n ∈ ℤ")));
        }
        Ok(Self { r, dh, n, big_r })
    }

    /// The system `(O_S^R → 0)`.
    pub fn sections_only(big_r: u64) -> Self {
        Self { r: 0, dh: 0, n: Q::zero(), big_r }
    }

    /// The plain sheaf `(0 → F)`.
    pub fn sheaf(r: i64, dh: i64, n: Q) -> Result<Self> {
        Self::new(0, r, dh, n)
    }

    pub fn big_r(&self) -> u64 {
        self.big_r
    }
    pub fn r(&self) -> i64 {
        self.r
    }
    pub fn dh(&self) -> i64 {
        self.dh
    }
    pub fn n(&self) -> &Q {
        &self.n
    }

    pub fn is_plain_sheaf(&self) -> bool {
        self.big_r == 0
    }

    /// Whether `n ∈ ½ + ℤ`, the stricter condition some sources quote.
    pub fn n_is_half_odd(&self) -> bool {
        let twice = &self.n * qi(2);
        rational::is_integer(&twice) && !rational::is_integer(&self.n)
    }
}

/// ch(O_X^{⊕k}).
pub fn trivial_bundle(k: i64) -> ChernVector {
    ChernVector::structure_sheaf().scale(&qi(k))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twist_of_structure_sheaf_is_exponential() {
        let beta = q(3, 7);
        let t = ChernVector::structure_sheaf().twist(&beta);
        let b = beta.clone();
        assert_eq!(
            t,
            ChernVector::new(qi(1), -b.clone(), &b * &b / qi(2), -(&b * &b * &b) / qi(6))
        );
        let top = ChernVector::from_fracs([(0, 1), (0, 1), (0, 1), (4, 9)]);
        assert_eq!(top.twist(&beta), top);
    }

    #[test]
    fn euler_characteristics() {
        assert_eq!(ChernVector::structure_sheaf().euler_char(), qi(0));
        assert_eq!(ChernVector::line_bundle(1).euler_char(), qi(5));
        assert_eq!(ChernVector::point().euler_char(), qi(1));
        // h⁰(O_X(2)) = 15 quadrics in 5 variables, no higher cohomology.
        assert_eq!(ChernVector::line_bundle(2).euler_char(), qi(15));
    }

    #[test]
    fn euler_char_of_rank_two_dual() {
        // ch(F) = (2, H, ch2, ch3), H·ch2 = 1/2, ch3 = −1/6 + |Q|/2.
        for len in 0..6 {
            let ch3 = q(-1, 6) + q(len, 2);
            let f = ChernVector::from_integrated([qi(2), qi(5), q(1, 2), ch3]);
            assert_eq!(f.euler_char(), qi(4) + q(len, 2));
        }
    }

    #[test]
    fn discriminants() {
        let jardim = ChernVector::from_fracs([(4, 1), (-2, 1), (-1, 1), (-1, 3)]);
        assert_eq!(jardim.discriminant_h(), qi(60));
        assert_eq!(jardim.discriminant_h() / qi(16), q(15, 4));
        for m in -4..5 {
            assert_eq!(ChernVector::line_bundle(m).discriminant_h(), qi(0));
        }
    }

    #[test]
    fn integration() {
        assert_eq!(ChernVector::point().integrate(), qi(1));
        assert_eq!(ChernVector::structure_sheaf().integrate(), qi(0));
        assert_eq!(ChernVector::from_fracs([(0, 1), (0, 1), (0, 1), (1, 1)]).integrate(), qi(5));
    }

    #[test]
    fn sheaf_lattice() {
        assert!(ChernVector::from_fracs([(4, 1), (-2, 1), (-1, 1), (-1, 3)])
            .check_sheaf_like()
            .is_ok());
        assert!(ChernVector::from_fracs([(2, 1), (-1, 1), (1, 10), (0, 1)])
            .check_sheaf_like()
            .is_ok());
        assert!(ChernVector::from_fracs([(3, 1), (-3, 2), (0, 1), (0, 1)])
            .check_sheaf_like()
            .is_err());
        assert!(ChernVector::from_fracs([(1, 1), (0, 1), (1, 20), (0, 1)])
            .check_sheaf_like()
            .is_err());
        assert!(ChernVector::point().check_sheaf_like().is_ok());
    }

    #[test]
    fn surface_class_constraints() {
        assert!(SurfaceClass::new(1, 0, 0, q(1, 3)).is_err());
        let s = SurfaceClass::new(2, 1, 3, q(1, 2)).unwrap();
        assert!(s.n_is_half_odd());
        assert!(!SurfaceClass::sections_only(1).n_is_half_odd());
    }

    #[test]
    fn json_schema() {
        let c = ChernVector::from_fracs([(4, 1), (-2, 1), (-1, 1), (-1, 3)]);
        let s = serde_json::to_string(&c).unwrap();
        assert_eq!(s, r#"{"ch":["4","-2","-1","-1/3"]}"#);
        let back: ChernVector = serde_json::from_str(&s).unwrap();
        assert_eq!(back, c);
        assert!(serde_json::from_str::<ChernVector>(r#"{"ch":["1","2"]}"#).is_err());
    }
}
