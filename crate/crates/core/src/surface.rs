//! Coherent systems `(O_S^{⊕R} → F)` on a quintic surface S ⊂ X: the twisted
//! Chern character of their image in D^b(X), the charge restricted to them, the
//! slope μ′, and the rank-one Clifford certificate.

use num_traits::Zero;

use crate::charges::rewrite_coefficients;
use crate::cyclotomic::{CycloNumber, Sign};
use crate::error::{Error, Result};
use crate::ktheory::{ChernVector, SurfaceClass};
use crate::rational::{q, qi, Q};
use crate::tilt::SlopeKey;
use crate::trace::{Outcome, ProofTrace, Relation, Verdict};

/// Degree of the surface, h² = 5.
pub const SURFACE_DEGREE: i64 = 5;

/// `ch^B` of the system, with integrated pairings
/// `(−R, 5(r − R/2), dh − 5R/8, n + 5r/24 − 5R/48)`.
pub fn pushforward_chb(s: &SurfaceClass) -> ChernVector {
    let big_r = qi(s.big_r() as i64);
    let r = qi(s.r());
    ChernVector::from_integrated([
        -big_r.clone(),
        qi(5) * (&r - &big_r / qi(2)),
        qi(s.dh()) - q(5, 8) * &big_r,
        s.n() + q(5, 24) * &r - q(5, 48) * &big_r,
    ])
}

/// `Z = −n − 5r/24 + 5R/48 + 5a(r − R/2) + i(b(dh − 5R/8) − cR)`.
pub fn zg_prime(s: &SurfaceClass) -> CycloNumber {
    let rc = rewrite_coefficients();
    let big_r = qi(s.big_r() as i64);
    let r = qi(s.r());
    let real = CycloNumber::from_rational(-s.n() - q(5, 24) * &r + q(5, 48) * &big_r)
        + rc.a.scale(&(qi(5) * (&r - &big_r / qi(2))));
    let imag = rc.b.scale(&(qi(s.dh()) - q(5, 8) * &big_r)) - rc.c.scale(&big_r);
    real + &imag * &CycloNumber::i()
}

/// `μ′ = 5(1/2 − r/R)`, and −∞ when R = 0.
pub fn mu_prime(s: &SurfaceClass) -> SlopeKey {
    if s.big_r() == 0 {
        return SlopeKey::NegInf;
    }
    SlopeKey::Rational(qi(5) * (q(1, 2) - q(s.r(), s.big_r() as i64)))
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct CliffordReport {
    #[serde(with = "crate::rational::serde_q")]
    pub ratio: Q,
    pub bound: CycloNumber,
    /// dh/R − (5/8 + c/b)
    pub margin: CycloNumber,
    pub verdict: Verdict,
}

/// Decides `dh/R > 5/8 + c/b` for a system with `R = 2r > 0`.
pub fn clifford_verdict(s: &SurfaceClass) -> Result<CliffordReport> {
    if s.big_r() == 0 || s.big_r() as i64 != 2 * s.r() {
        return Err(Error::Hypothesis(format!(
            "the Clifford-type bound needs R = 2·rank(F) > 0; got R = {}, rank(F) = {}",
            s.big_r(),
            s.r()
        )));
    }
    let ratio = q(s.dh(), s.big_r() as i64);
    let bound = rewrite_coefficients().clifford_bound.clone();
    let margin = CycloNumber::from_rational(ratio.clone()) - &bound;
    let sign = margin.sign_of_real()?;
    Ok(CliffordReport { ratio, bound, margin, verdict: Verdict::from_bool(sign == Sign::Positive) })
}

fn slope_value(k: SlopeKey) -> Q {
    match k {
        SlopeKey::Rational(x) => x,
        other => unreachable!("finite slope expected, got {other:?}"),
    }
}

/// Replays the rank-one, R = 2 case: a μ′-semistable `(O_S^{⊕2} → F)` with
/// `c₁(F)·h = dh ≤ 2` cannot exist.
pub fn r2_clifford_certificate(dh: i64) -> Result<ProofTrace> {
    if dh <= 0 {
        return Err(Error::Hypothesis(format!("c₁(F)·h = {dh} must be positive")));
    }
    let bound = rewrite_coefficients().clifford_bound.clone();
    let mut t = ProofTrace::new(format!("R = 2 Clifford bound, c₁(F)·h = {dh}"));
    t.assume(
        "hypotheses",
        "(O_S^{⊕2} → F) is μ′-semistable with rank(F) = 1; F may be taken torsion free, \
         F = L ⊗ I_W with L a line bundle, and c₁(F)·h = c₁(L)·h",
    );
    if dh >= 3 {
        t.check("bound", "c₁(F)·h / 2 > 5/8 + c/b", q(dh, 2), Relation::Gt, bound.clone())?;
        let margin = CycloNumber::from_rational(q(dh, 2)) - &bound;
        t.check("margin", "c₁(F)·h / 2 − (5/8 + c/b) > 0", margin, Relation::Gt, qi(0))?;
        return Ok(t.finish(Outcome::Consistent));
    }
    t.check("case-to-exclude", "c₁(F)·h / 2 < 5/8 + c/b", q(dh, 2), Relation::Lt, bound)?;
    let sub = slope_value(mu_prime(&SurfaceClass::sections_only(1)));
    let whole = slope_value(mu_prime(&SurfaceClass::new(2, 1, dh, Q::zero())?));
    t.check("sub slope", "μ′(O_S → 0) = 5/2", sub.clone(), Relation::Eq, q(5, 2))?;
    t.check("system slope", "μ′(O_S^{⊕2} → F) = 0", whole.clone(), Relation::Eq, qi(0))?;
    t.check("destabilizing", "μ′(O_S → 0) > μ′(O_S^{⊕2} → F)", sub, Relation::Gt, whole)?;
    t.assume(
        "two sections",
        "a section of F would give a destabilizing (O_S → 0) unless the two sections are \
         independent, so h⁰(L) ≥ h⁰(F) ≥ 2",
    );
    let c = qi(SURFACE_DEGREE);
    t.check("vanishing", "c₁(L(−C))·h = c₁(L)·h − 5 < 0, so h⁰(L(−C)) = 0", qi(dh) - &c, Relation::Lt, qi(0))?;
    t.assume(
        "restriction",
        "0 → L(−C) → L → L|_C → 0 for a general hyperplane section C gives h⁰(L|_C) ≥ h⁰(L) ≥ 2",
    );
    let h0_lower = qi(2);
    let genus = (&c - qi(1)) * (&c - qi(2)) / qi(2);
    t.check("genus", "C is a smooth plane quintic of genus 6", genus.clone(), Relation::Eq, qi(6))?;
    let deg_k = qi(2) * &genus - qi(2);
    t.check("degree range", "0 ≤ deg(L|_C) ≤ 2g − 2", qi(dh), Relation::Le, deg_k.clone())?;
    let clifford = q(dh, 2) + qi(1);
    t.check("clifford", "h⁰(L|_C) ≤ deg(L|_C)/2 + 1 ≤ 2", clifford.clone(), Relation::Le, h0_lower.clone())?;
    t.assume("non-hyperelliptic", "smooth plane quintics are not hyperelliptic");
    t.check("not canonical", "deg(L|_C) ≠ deg K_C = 10", qi(dh), Relation::Ne, deg_k)?;
    t.check("not trivial", "deg(L|_C) ≠ 0", qi(dh), Relation::Ne, qi(0))?;
    // largest integer strictly below the Clifford bound
    let strict_upper = Q::from_integer(clifford.ceil().to_integer()) - qi(1);
    t.check("strict clifford", "h⁰(L|_C) < deg(L|_C)/2 + 1 forces h⁰(L|_C) ≤ 1", strict_upper.clone(), Relation::Le, qi(1))?;
    t.check("contradiction", "h⁰(L|_C) ≥ 2 exceeds the strict Clifford bound", h0_lower, Relation::Gt, strict_upper)?;
    Ok(t.finish(Outcome::Excluded))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charges::{evaluate, rewrite_form_twisted};

    fn sc(big_r: u64, r: i64, dh: i64, n: Q) -> SurfaceClass {
        SurfaceClass::new(big_r, r, dh, n).unwrap()
    }

    #[test]
    fn pushforward_examples() {
        let p = pushforward_chb(&sc(1, 0, 0, qi(0))).integrated_pairings();
        assert_eq!(p, [qi(-1), q(-5, 2), q(-5, 8), q(-5, 48)]);
        let p = pushforward_chb(&sc(0, 1, 0, qi(0))).integrated_pairings();
        assert_eq!(p, [qi(0), qi(5), qi(0), q(5, 24)]);
        let s = pushforward_chb(&sc(0, 1, 0, qi(0)));
        let via_sequence = (&ChernVector::structure_sheaf() - &ChernVector::line_bundle(-1)).twist(&q(-1, 2));
        assert_eq!(s, via_sequence);
        let p = pushforward_chb(&sc(0, 0, 0, qi(1))).integrated_pairings();
        assert_eq!(p, [qi(0), qi(0), qi(0), qi(1)]);
    }

    #[test]
    fn charge_examples() {
        assert_eq!(zg_prime(&sc(0, 0, 0, qi(1))), CycloNumber::from_int(-1));
        let o_s_to_0 = zg_prime(&sc(1, 0, 0, qi(0)));
        assert_eq!(o_s_to_0, CycloNumber::one() - CycloNumber::alpha());
        assert_eq!(o_s_to_0, -evaluate(&ChernVector::structure_sheaf()));
        let rc = rewrite_coefficients();
        let v = zg_prime(&sc(0, 1, 0, qi(0)));
        assert_eq!(v, rc.a.scale(&qi(5)) - CycloNumber::from_rational(q(5, 24)));
        let x = v.embed(64).unwrap().re.midpoint();
        assert!((crate::rational::to_f64(&x) + 1.381968).abs() < 1e-5);
        for s in [sc(3, 2, -4, q(7, 2)), sc(0, -1, 9, q(-1, 2)), sc(5, 0, 2, qi(3))] {
            assert_eq!(zg_prime(&s), rewrite_form_twisted(&pushforward_chb(&s)));
        }
    }

    #[test]
    fn slopes() {
        assert_eq!(mu_prime(&sc(2, 1, 0, qi(0))), SlopeKey::Rational(qi(0)));
        assert_eq!(mu_prime(&SurfaceClass::sections_only(1)), SlopeKey::Rational(q(5, 2)));
        assert_eq!(mu_prime(&sc(0, 3, 1, qi(0))), SlopeKey::NegInf);
        assert_eq!(mu_prime(&sc(6, 1, 0, qi(0))), mu_prime(&sc(12, 2, 0, qi(0))));
    }

    #[test]
    fn clifford_verdicts() {
        assert!(clifford_verdict(&sc(2, 1, 3, qi(0))).unwrap().verdict.is_pass());
        assert_eq!(clifford_verdict(&sc(2, 1, 2, qi(0))).unwrap().verdict, Verdict::Fail);
        let r = clifford_verdict(&sc(4, 2, 6, qi(0))).unwrap();
        assert_eq!(r.ratio, q(3, 2));
        assert!(r.verdict.is_pass());
        assert!(clifford_verdict(&sc(3, 1, 3, qi(0))).is_err());
        assert!(clifford_verdict(&sc(0, 0, 3, qi(0))).is_err());
        let b = rewrite_coefficients().clifford_bound.clone();
        assert!(b.im().is_zero());
    }

    #[test]
    fn certificates() {
        for dh in [1, 2] {
            let t = r2_clifford_certificate(dh).unwrap();
            assert_eq!(t.outcome, Outcome::Excluded, "{}", t.to_markdown());
            assert!(t.replay().unwrap());
        }
        assert_eq!(r2_clifford_certificate(3).unwrap().outcome, Outcome::Consistent);
        assert!(r2_clifford_certificate(0).is_err());
    }
}
