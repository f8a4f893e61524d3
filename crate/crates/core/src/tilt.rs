//! Numerical shadow of the double tilt at B = −H/2: the slopes μ_{B,H} and
//! ν_G, Gepner phases, torsion-pair classification of classes whose stability
//! is declared by the caller, HN ordering, and the positivity properties of the
//! charge on the generators of the tilted heart.

use std::cmp::Ordering;

use astro_float::BigFloat;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::bginequality::strong_bg_verdict;
use crate::charges::{b_field, evaluate, rewrite_coefficients};
use crate::cyclotomic::{CycloNumber, Sign};
use crate::error::{Error, Result};
use crate::hp::{self, RM};
use crate::interval::RealInterval;
use crate::ktheory::ChernVector;
use crate::rational::{self, q, qi, Q};
use crate::trace::{Outcome, ProofTrace, Relation, Verdict};

/// An exact slope value, possibly infinite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SlopeKey {
    NegInf,
    Rational(Q),
    /// a real element of ℚ(ζ₂₀)
    Real(CycloNumber),
    PosInf,
}

impl SlopeKey {
    fn rank(&self) -> u8 {
        match self {
            SlopeKey::NegInf => 0,
            SlopeKey::Rational(_) | SlopeKey::Real(_) => 1,
            SlopeKey::PosInf => 2,
        }
    }

    fn finite(&self) -> Option<CycloNumber> {
        match self {
            SlopeKey::Rational(x) => Some(CycloNumber::from_rational(x.clone())),
            SlopeKey::Real(x) => Some(x.clone()),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.rank() == 1
    }

    /// Exact comparison; fails for non-real field elements.
    pub fn try_cmp(&self, other: &Self) -> Result<Ordering> {
        for k in [self, other] {
            if let SlopeKey::Real(x) = k {
                if !x.is_real() {
                    return Err(Error::NonComparable(format!("slope {x} is not real")));
                }
            }
        }
        match (self.finite(), other.finite()) {
            (Some(a), Some(b)) => a.cmp_real(&b),
            _ => Ok(self.rank().cmp(&other.rank())),
        }
    }

    pub fn render(&self) -> String {
        match self {
            SlopeKey::NegInf => "-inf".into(),
            SlopeKey::PosInf => "+inf".into(),
            SlopeKey::Rational(x) => x.to_string(),
            SlopeKey::Real(x) => match x.as_rational() {
                Some(r) => r.to_string(),
                None => x.to_zeta_string(),
            },
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum SlopeRepr {
    Text(String),
    Cyclo(CycloNumber),
}

impl Serialize for SlopeKey {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            SlopeKey::Real(x) if x.as_rational().is_none() => SlopeRepr::Cyclo(x.clone()).serialize(s),
            other => SlopeRepr::Text(other.render()).serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for SlopeKey {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match SlopeRepr::deserialize(d)? {
            SlopeRepr::Cyclo(x) => Ok(match x.as_rational() {
                Some(r) => SlopeKey::Rational(r.clone()),
                None => SlopeKey::Real(x),
            }),
            SlopeRepr::Text(t) => match t.trim() {
                "-inf" | "-∞" => Ok(SlopeKey::NegInf),
                "inf" | "+inf" | "∞" | "+∞" => Ok(SlopeKey::PosInf),
                other => rational::parse_rational(other).map(SlopeKey::Rational).map_err(serde::de::Error::custom),
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StabilityTag {
    MuSemistable,
    MuStable,
    #[serde(rename = "torsion-dim-le-1")]
    TorsionDimLe1,
    Unknown,
}

/// A class together with the caller's declaration of where it sits: `shift`
/// is 0 for a sheaf and 1 for a sheaf placed in degree −1 of the tilted heart.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "LabeledRepr")]
pub struct LabeledClass {
    #[serde(flatten)]
    ch: ChernVector,
    shift: u8,
    tag: StabilityTag,
}

#[derive(Deserialize)]
struct LabeledRepr {
    #[serde(flatten)]
    ch: ChernVector,
    #[serde(default)]
    shift: i64,
    tag: StabilityTag,
}

impl TryFrom<LabeledRepr> for LabeledClass {
    type Error = Error;
    fn try_from(r: LabeledRepr) -> Result<Self> {
        LabeledClass::new(r.ch, r.shift, r.tag)
    }
}

impl LabeledClass {
    pub fn new(ch: ChernVector, shift: i64, tag: StabilityTag) -> Result<Self> {
        if !(0..=1).contains(&shift) {
            return Err(Error::InvalidInput(format!("shift must be 0 or 1, got {shift}")));
        }
        if tag == StabilityTag::TorsionDimLe1 && !(ch.v0().is_zero() && ch.v1().is_zero()) {
            return Err(Error::InvalidInput(
                "a torsion sheaf of dimension ≤ 1 has ch0 = ch1 = 0".into(),
            ));
        }
        Ok(Self { ch, shift: shift as u8, tag })
    }

    pub fn ch(&self) -> &ChernVector {
        &self.ch
    }
    pub fn shift(&self) -> u8 {
        self.shift
    }
    pub fn tag(&self) -> StabilityTag {
        self.tag
    }

    /// `(−1)^shift · ch`, the class of the object in the heart.
    pub fn signed_ch(&self) -> ChernVector {
        if self.shift == 1 {
            -&self.ch
        } else {
            self.ch.clone()
        }
    }
}

/// `μ_{B,H} = H²ch₁^B / ch₀`, +∞ for torsion classes.
pub fn mu_bh(c: &ChernVector) -> SlopeKey {
    if c.v0().is_zero() {
        return SlopeKey::PosInf;
    }
    SlopeKey::Rational(c.h2_ch1_twisted(&b_field()) / c.v0())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TiltClass {
    /// T_{B,H}: torsion, or semistable of slope > 0
    Torsion,
    /// F_{B,H}: semistable of slope ≤ 0
    Free,
    NotClassifiable,
}

impl TiltClass {
    pub fn label(self) -> &'static str {
        match self {
            TiltClass::Torsion => "T",
            TiltClass::Free => "F",
            TiltClass::NotClassifiable => "not-classifiable",
        }
    }
}

pub fn classify_tilt(x: &LabeledClass) -> TiltClass {
    let c = &x.ch;
    match x.tag {
        StabilityTag::Unknown => TiltClass::NotClassifiable,
        StabilityTag::TorsionDimLe1 => TiltClass::Torsion,
        StabilityTag::MuSemistable | StabilityTag::MuStable => {
            if c.v0().is_negative() {
                return TiltClass::NotClassifiable;
            }
            match mu_bh(c) {
                SlopeKey::PosInf => TiltClass::Torsion,
                SlopeKey::Rational(s) if s.is_positive() => TiltClass::Torsion,
                _ => TiltClass::Free,
            }
        }
    }
}

/// `ν_G = Im Z_G† / H²ch₁^B` on the signed class, +∞ when the denominator is 0.
pub fn nu_g(x: &LabeledClass) -> SlopeKey {
    nu_g_class(&x.signed_ch())
}

pub fn nu_g_class(c: &ChernVector) -> SlopeKey {
    let d = c.h2_ch1_twisted(&b_field());
    if d.is_zero() {
        return SlopeKey::PosInf;
    }
    let v = evaluate(c).im().scale(&d.recip());
    match v.as_rational() {
        Some(r) => SlopeKey::Rational(r.clone()),
        None => SlopeKey::Real(v),
    }
}

fn corner_phase(x: &Q, y: &Q, quadrant: u8, w: usize) -> Result<Q> {
    let mut cc = hp::consts();
    let ratio = hp::q_to_float(&(y.abs() / x.abs()), w, &mut cc);
    let pi = cc.pi(w, RM);
    let base = ratio.atan(w, RM, &mut cc).div(&pi, w, RM);
    let one = BigFloat::from_u64(1, w);
    let two = BigFloat::from_u64(2, w);
    let phase = match quadrant {
        1 => base,
        2 => one.sub(&base, w, RM),
        3 => one.add(&base, w, RM),
        _ => two.sub(&base, w, RM),
    };
    hp::float_to_q(&phase)
}

/// Certified enclosure of `φ = arg Z_G†(c) / π ∈ (0, 2]`, of width about
/// `2^-precision_bits`; exact when Z is real or purely imaginary.
pub fn phase_g(c: &ChernVector, precision_bits: u32) -> Result<RealInterval> {
    let z = evaluate(c);
    if z.is_zero() {
        return Err(Error::InvalidInput("Z_G† vanishes on this class; the phase is undefined".into()));
    }
    let (re, im) = (z.re(), z.im());
    let (sr, si) = (re.sign_of_real()?, im.sign_of_real()?);
    let exact = |v: Q| RealInterval::point(&v, precision_bits);
    match (sr, si) {
        (Sign::Positive, Sign::Zero) => return Ok(exact(qi(2))),
        (Sign::Negative, Sign::Zero) => return Ok(exact(qi(1))),
        (Sign::Zero, Sign::Positive) => return Ok(exact(q(1, 2))),
        (Sign::Zero, Sign::Negative) => return Ok(exact(q(3, 2))),
        _ => {}
    }
    let quadrant = match (sr, si) {
        (Sign::Positive, Sign::Positive) => 1,
        (Sign::Negative, Sign::Positive) => 2,
        (Sign::Negative, Sign::Negative) => 3,
        _ => 4,
    };
    let mut bits = precision_bits + 16;
    let bx = loop {
        let b = z.embed(bits)?;
        if !b.re.contains_zero() && !b.im.contains_zero() {
            break b;
        }
        if bits > crate::cyclotomic::SIGN_CAP_BITS {
            return Err(Error::PrecisionCap(bits));
        }
        bits *= 2;
    };
    let w = bits as usize + 64;
    let mut lo: Option<Q> = None;
    let mut hi: Option<Q> = None;
    for x in [bx.re.lo(), bx.re.hi()] {
        for y in [bx.im.lo(), bx.im.hi()] {
            let p = corner_phase(x, y, quadrant, w)?;
            if lo.as_ref().is_none_or(|l| &p < l) {
                lo = Some(p.clone());
            }
            if hi.as_ref().is_none_or(|h| &p > h) {
                hi = Some(p);
            }
        }
    }
    // atan at w bits is accurate well below this margin
    let margin = Q::new(1.into(), num_bigint::BigInt::from(1) << (bits as usize + 8));
    let (lo, hi) = (lo.expect("four corners") - &margin, hi.expect("four corners") + &margin);
    Ok(RealInterval::from_bounds(&lo, &hi, precision_bits))
}

fn is_zero_slope_stable(p: &LabeledClass) -> bool {
    p.shift == 1
        && matches!(p.tag, StabilityTag::MuStable | StabilityTag::MuSemistable)
        && p.ch.h2_ch1_twisted(&b_field()).is_zero()
        && p.ch.v0().is_positive()
}

fn is_small_torsion(p: &LabeledClass) -> bool {
    p.shift == 0 && p.tag == StabilityTag::TorsionDimLe1
}

/// Checks, piece by piece and for the total, that the charge is positive on an
/// object built from generators `F[1]` (F μ-stable with H²ch₁^B = 0) and
/// torsion sheaves of dimension ≤ 1: H²ch₁^B ≥ 0, then Im Z ≥ 0 when it
/// vanishes, then −Re Z > 0 when Im Z vanishes too. The stable pieces rely on
/// the strengthened BG bound, which the trace checks for each of them.
pub fn lemma_property_check(pieces: &[LabeledClass]) -> Result<ProofTrace> {
    if pieces.is_empty() {
        return Err(Error::NotClassifiable("no decomposition into generators was declared".into()));
    }
    let rc = rewrite_coefficients();
    let beta = b_field();
    let mut t = ProofTrace::new("charge positivity on the tilted heart");
    t.assume(
        "generators",
        "every piece is F[1] with F μ_{B,H}-stable and H²ch₁^B(F) = 0, or a torsion sheaf of \
         dimension ≤ 1; the strengthened BG bound is checked for each stable piece",
    );
    for (k, p) in pieces.iter().enumerate() {
        let f = &p.ch;
        let w = f.twist(&beta);
        let [ch0, h2ch1, hch2, _] = w.integrated_pairings();
        let z = evaluate(&p.signed_ch());
        if is_zero_slope_stable(p) {
            t.check(&format!("piece {k}: slope"), "H²ch₁^B(F) = 0", h2ch1, Relation::Eq, qi(0))?;
            let bg = strong_bg_verdict(f)?;
            t.check(
                &format!("piece {k}: strong BG"),
                "Δ(F)·H / rank² > 2c/b",
                bg.ratio.clone(),
                Relation::Gt,
                bg.bound.clone(),
            )?;
            // Im Z(F[1]) = −(b·Hch₂^B + c·ch₀) and Hch₂^B = −Δ·H / (2r) when ch₁^B = 0
            let identity = rc.b.scale(&(&ch0 / qi(2))) * (CycloNumber::from_rational(bg.ratio.clone()) - &bg.bound);
            t.check(
                &format!("piece {k}: Im identity"),
                "Im Z(F[1]) = (rank·b/2)(Δ·H/rank² − 2c/b)",
                z.im(),
                Relation::Eq,
                identity,
            )?;
            t.check(&format!("piece {k}: Im Z"), "Im Z(F[1]) ≥ 0", z.im(), Relation::Ge, qi(0))?;
        } else if is_small_torsion(p) {
            t.check(&format!("piece {k}: slope"), "H²ch₁^B = 0 for torsion of dimension ≤ 1", h2ch1, Relation::Eq, qi(0))?;
            t.check(&format!("piece {k}: Im identity"), "Im Z = b·H·ch₂", z.im(), Relation::Eq, rc.b.scale(&hch2))?;
            t.check(&format!("piece {k}: degree"), "H·ch₂ ≥ 0 for a sheaf of dimension ≤ 1", hch2.clone(), Relation::Ge, qi(0))?;
            if hch2.is_zero() {
                t.check(&format!("piece {k}: length"), "−Re Z = ch₃ = length > 0 in dimension 0", -z.re(), Relation::Gt, qi(0))?;
            }
        } else {
            return Err(Error::NotClassifiable(format!(
                "piece {k} is neither F[1] with F stable of slope 0 nor torsion of dimension ≤ 1"
            )));
        }
    }
    let total: ChernVector = pieces.iter().fold(ChernVector::zero(), |a, p| &a + &p.signed_ch());
    let zt = evaluate(&total);
    let h = total.h2_ch1_twisted(&beta);
    t.check("total: slope", "H²ch₁^B(E) ≥ 0", h.clone(), Relation::Ge, qi(0))?;
    if h.is_zero() {
        t.check("total: Im Z", "Im Z(E) ≥ 0", zt.im(), Relation::Ge, qi(0))?;
        if zt.im().is_zero() {
            t.check("total: Re Z", "−Re Z(E) > 0", -zt.re(), Relation::Gt, qi(0))?;
        }
    }
    Ok(t.finish(Outcome::Holds))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HnPiece {
    #[serde(flatten)]
    pub ch: ChernVector,
    pub slope: SlopeKey,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HnReport {
    pub pieces: Vec<HnPiece>,
    /// input index of each output piece
    pub order: Vec<usize>,
    pub verdict: Verdict,
    /// `H²ch₁^B = 5(v1 + v0/2)` with `v1 + v0/2 ∈ ½ℤ` on every piece
    pub discreteness: bool,
}

/// Orders pieces by decreasing slope (stable for ties). With `strict`, two
/// pieces of equal slope but different classes make the verdict FAIL.
pub fn hn_sort(pieces: &[HnPiece], strict: bool) -> Result<HnReport> {
    for p in pieces {
        p.ch.check_sheaf_like()?;
        p.slope.try_cmp(&p.slope)?;
    }
    let mut idx: Vec<usize> = (0..pieces.len()).collect();
    let mut err = None;
    idx.sort_by(|&a, &b| match pieces[b].slope.try_cmp(&pieces[a].slope) {
        Ok(o) => o,
        Err(e) => {
            err.get_or_insert(e);
            Ordering::Equal
        }
    });
    if let Some(e) = err {
        return Err(e);
    }
    let sorted: Vec<HnPiece> = idx.iter().map(|&i| pieces[i].clone()).collect();
    let mut ok = true;
    if strict {
        for w in sorted.windows(2) {
            if w[0].slope.try_cmp(&w[1].slope)? == Ordering::Equal && w[0].ch != w[1].ch {
                ok = false;
            }
        }
    }
    let discreteness = sorted
        .iter()
        .all(|p| rational::is_integer(&((p.ch.v1() + p.ch.v0() / qi(2)) * qi(2))));
    Ok(HnReport { pieces: sorted, order: idx, verdict: Verdict::from_bool(ok && discreteness), discreteness })
}
