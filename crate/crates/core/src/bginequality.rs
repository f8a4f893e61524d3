//! Bogomolov–Gieseker checks on the quintic 3-fold: the classical inequality,
//! the strengthened bound `Δ·H/rank² > 2c/b` for slope −1/2 sheaves, the K3
//! comparison bound, and the rank-two exclusion certificate.

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::charges::rewrite_coefficients;
use crate::cyclotomic::{CycloNumber, Sign};
use crate::error::{Error, Result};
use crate::ktheory::ChernVector;
use crate::rational::{self, q, qi, Q};
use crate::trace::{Outcome, ProofTrace, Relation, Verdict};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassicalBg {
    #[serde(with = "crate::rational::serde_q")]
    pub discriminant_h: Q,
    pub verdict: Verdict,
}

/// Δ(E)·H ≥ 0 for a torsion free sheaf class.
pub fn classical_bg(c: &ChernVector) -> Result<ClassicalBg> {
    if c.v0().is_zero() {
        return Err(Error::InvalidInput("torsion class (rank 0): BG inequality does not apply".into()));
    }
    if c.v0().is_negative() {
        return Err(Error::InvalidInput(format!("rank {} is negative", c.v0())));
    }
    c.check_sheaf_like()?;
    let d = c.discriminant_h();
    let verdict = Verdict::from_bool(!d.is_negative());
    Ok(ClassicalBg { discriminant_h: d, verdict })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StrongBgReport {
    /// Δ·H / rank²
    #[serde(with = "crate::rational::serde_q")]
    pub ratio: Q,
    /// 2c/b
    pub bound: CycloNumber,
    /// ratio − 2c/b, a real element of the field
    pub margin: CycloNumber,
    pub verdict: Verdict,
}

/// Decides `Δ·H/rank² > 2c/b` exactly for a class with `c₁/rank = −H/2`.
pub fn strong_bg_verdict(c: &ChernVector) -> Result<StrongBgReport> {
    let rank = c.v0();
    if !rational::is_integer(rank) || rank < &qi(2) || !rational::is_integer(&(rank / qi(2))) {
        return Err(Error::Hypothesis(format!(
            "rank must be an even integer ≥ 2 so that c₁ = −(rank/2)·H is integral; got {rank}"
        )));
    }
    if *c.v1() != -(rank / qi(2)) {
        return Err(Error::Hypothesis(format!(
            "slope condition c₁/rank = −H/2 fails: c₁ = {}·H with rank {rank}",
            c.v1()
        )));
    }
    let ratio = c.discriminant_h() / (rank * rank);
    let bound = rewrite_coefficients().strong_bg_bound.clone();
    let margin = CycloNumber::from_rational(ratio.clone()) - &bound;
    let sign = margin.sign_of_real()?;
    debug_assert_ne!(sign, Sign::Zero, "2c/b is irrational");
    Ok(StrongBgReport { ratio, bound, margin, verdict: Verdict::from_bool(sign == Sign::Positive) })
}

/// Lower bound `2 − 2/rank²` for Δ/rank² of stable sheaves on a K3 surface.
pub fn k3_bound(rank: i64) -> Result<Q> {
    if rank < 2 {
        return Err(Error::InvalidInput(format!("K3 bound needs rank ≥ 2, got {rank}")));
    }
    Ok(qi(2) - q(2, rank * rank))
}

/// ch(E) = (2, −H, ch₂, 0) with c₂(E)·H = `c2h`, i.e. H·ch₂ = 5/2 − c2h.
/// The top coefficient is irrelevant to every check and set to 0.
pub fn rank2_class(c2h: i64) -> ChernVector {
    ChernVector::from_integrated([qi(2), qi(-5), q(5, 2) - qi(c2h), qi(0)])
}

/// Coefficients `(constant, slope)` of an affine function of one variable,
/// read off from its values at 0 and 1.
fn affine(f: impl Fn(&Q) -> Q) -> (Q, Q) {
    let c0 = f(&qi(0));
    let c1 = f(&qi(1)) - &c0;
    (c0, c1)
}

/// Replays the rank-two case analysis for the given value of c₂(E)·H.
///
/// `c2h = 2` is the only value violating the strengthened bound allowed by the
/// classical one; for it the trace derives a contradiction in both cases
/// h⁰(F) = 0 and h⁰(F) ≠ 0. Larger values yield a CONSISTENT trace.
pub fn rank2_certificate(c2h: i64) -> Result<ProofTrace> {
    let e = rank2_class(c2h);
    let disc = e.discriminant_h();
    if disc.is_negative() {
        return Err(Error::Hypothesis(format!(
            "c₂·H = {c2h} violates the classical BG inequality: Δ·H = 4c₂·H − 5 = {disc} < 0 \
             (classical BG forces c₂·H ≥ 5/4)"
        )));
    }
    let rc = rewrite_coefficients();
    let bound = rc.strong_bg_bound.clone();
    let mut t = ProofTrace::new(format!("rank-two strengthened BG, c₂(E)·H = {c2h}"));
    t.assume(
        "hypotheses",
        "E torsion free μ-stable of rank 2 with c₁(E) = −H; we may take E reflexive since \
         Δ(E^∨∨)·H ≥ Δ(E)·H; c₂(E)·H ∈ ℤ",
    );
    t.check("discriminant", "Δ(E)·H = −H³ + 4c₂(E)·H", disc.clone(), Relation::Eq, qi(4 * c2h - 5))?;
    t.check("classical-bg", "Δ(E)·H ≥ 0", disc.clone(), Relation::Ge, qi(0))?;
    let ratio = &disc / qi(4);
    if c2h >= 3 {
        t.check("strong-bound", "Δ(E)·H/4 > 2c/b", ratio.clone(), Relation::Gt, bound.clone())?;
        let margin = CycloNumber::from_rational(ratio) - &bound;
        t.check("margin", "(4c₂·H − 5)/4 − 2c/b > 0", margin, Relation::Gt, qi(0))?;
        return Ok(t.finish(Outcome::Consistent));
    }

    // c2h == 2
    t.check(
        "case-to-exclude",
        "Δ(E)·H/4 < 2c/b, so the bound fails unless this case is impossible",
        ratio,
        Relation::Lt,
        bound,
    )?;
    let hch2 = e.integrated_pairings()[2].clone();
    t.check("(i) ch2", "ch₂(E)·H = 1/2", hch2.clone(), Relation::Eq, q(1, 2))?;

    t.assume(
        "dual",
        "F = E^∨ is reflexive and stable, Q = Ext¹(F, O_X) is zero-dimensional, \
         ch(F^∨) = (2, −H, ch₂(E), −ch₃(F) + |Q|), and F ≅ F^∨ ⊗ det F with det F = O_X(H)",
    );
    // e^H·(2, −H, ch₂, −x + |Q|) − (2, H, ch₂, x), components in integrated units.
    let mismatch = |x: &Q, len: &Q| -> [Q; 4] {
        let dual = ChernVector::from_integrated([qi(2), qi(-5), hch2.clone(), len - x]);
        let lhs = dual.tensor_line(1);
        let rhs = ChernVector::from_integrated([qi(2), qi(5), hch2.clone(), x.clone()]);
        (&lhs - &rhs).integrated_pairings()
    };
    let base = mismatch(&qi(0), &qi(0));
    t.check("duality c1", "c₁ components of the duality identity agree", base[1].clone(), Relation::Eq, qi(0))?;
    t.check("duality ch2", "ch₂ components of the duality identity agree", base[2].clone(), Relation::Eq, qi(0))?;
    let (d0, dx) = affine(|x| mismatch(x, &qi(0))[3].clone());
    let (_, dq) = affine(|len| mismatch(&qi(0), len)[3].clone());
    if dx.is_zero() {
        return Err(Error::InvalidInput("duality identity does not determine ch₃(F)".into()));
    }
    let ch3_const = -&d0 / &dx;
    let ch3_len = -&dq / &dx;
    t.check("(ii) ch3", "ch₃(F) = −1/6 + |Q|/2: constant term", ch3_const.clone(), Relation::Eq, q(-1, 6))?;
    t.check("(ii) ch3 |Q|", "ch₃(F) = −1/6 + |Q|/2: coefficient of |Q|", ch3_len.clone(), Relation::Eq, q(1, 2))?;

    let f_class = |len: &Q| {
        ChernVector::from_integrated([qi(2), qi(5), hch2.clone(), &ch3_const + &ch3_len * len])
    };
    let (chi_const, chi_len) = affine(|len| f_class(len).euler_char());
    t.check("(iii) chi", "χ(F) = 4 + |Q|/2 (c₂(X) = 10H²): constant term", chi_const.clone(), Relation::Eq, qi(4))?;
    t.check("(iii) chi |Q|", "χ(F) = 4 + |Q|/2: coefficient of |Q|, non-negative", chi_len.clone(), Relation::Ge, qi(0))?;

    // Case 1
    t.assume(
        "case 1",
        "h⁰(F) = 0; h³(F) = hom(F, O_X) = 0 by Serre duality and stability, so \
         dim Ext¹(F, O_X) = h²(F) = χ(F) + h¹(F) ≥ χ(F) for every |Q| ≥ 0",
    );
    let ext_lower = chi_const.ceil();
    t.check("(iii) ext lower", "dim Ext¹(F, O_X) ≥ 4", ext_lower.clone(), Relation::Ge, qi(4))?;
    t.assume(
        "universal extension",
        "0 → O_X ⊗ Ext¹(F, O_X)^∨ → U → F → 0 with U torsion free μ-stable, so Δ(U)·H ≥ 0",
    );
    let u_class = |ext: &Q| &f_class(&qi(0)) + &ChernVector::structure_sheaf().scale(ext);
    let (u0, ue) = affine(|ext| u_class(ext).discriminant_h());
    t.check("(iv) bg on U", "Δ(U)·H = 5 − (2 + e) with e = dim Ext¹: constant", u0.clone(), Relation::Eq, qi(3))?;
    t.check("(iv) bg on U slope", "Δ(U)·H = 5 − (2 + e): coefficient of e", ue.clone(), Relation::Eq, qi(-1))?;
    if !ue.is_negative() {
        return Err(Error::InvalidInput("Δ(U)·H does not decrease with e".into()));
    }
    let ext_upper = (&u0 / -&ue).floor();
    t.check("(iv) ext upper", "Δ(U)·H ≥ 0 forces dim Ext¹ ≤ 3", ext_upper.clone(), Relation::Eq, qi(3))?;
    t.check(
        "(iv) bg violated",
        "at e = 4 the extension would have Δ(U)·H < 0",
        u_class(&ext_lower).discriminant_h(),
        Relation::Lt,
        qi(0),
    )?;
    t.check("(iv) contradiction", "lower bound on dim Ext¹ exceeds the upper bound", ext_lower, Relation::Gt, ext_upper)?;

    // Case 2
    t.assume(
        "case 2",
        "h⁰(F) ≠ 0: 0 → O_X → F → M → 0 with M ≅ O_X(H) ⊗ I_Z torsion free stable, dim Z ≤ 1; \
         ch(I_Z) = (1, 0, −[Z], −χ(O_Z))",
    );
    let f2 = |deg: &Q, chi_z: &Q| {
        let ideal = ChernVector::from_integrated([qi(1), qi(0), -deg.clone(), -chi_z.clone()]);
        &ChernVector::structure_sheaf() + &ideal.tensor_line(1)
    };
    let (s0, sd) = affine(|deg| f2(deg, &qi(0)).integrated_pairings()[2].clone());
    let deg_z = (&hch2 - &s0) / &sd;
    t.check("(v) degree", "ch₂(F) = H²/2 − [Z] and ch₂(F)·H = 1/2 give H·[Z] = 2", deg_z.clone(), Relation::Eq, qi(2))?;
    let (t0, tchi) = affine(|chi_z| f2(&deg_z, chi_z).integrated_pairings()[3].clone());
    t.check("(v) ch3", "ch₃(F) = H³/6 − H·[Z] − χ(O_Z) = −7/6 − χ(O_Z): constant", t0.clone(), Relation::Eq, q(-7, 6))?;
    t.check("(v) ch3 chi", "coefficient of χ(O_Z) in ch₃(F)", tchi.clone(), Relation::Eq, qi(-1))?;
    // ch₃(F) ≥ ch3_const (|Q| ≥ 0), so t0 + tchi·χ ≥ ch3_const.
    let chi_upper = ((&ch3_const - &t0) / &tchi).floor();
    t.check("(v) chi upper", "ch₃(F) ≥ −1/6 gives χ(O_Z) ≤ −1", chi_upper.clone(), Relation::Eq, qi(-1))?;
    let genus_max = (&deg_z - qi(1)) * (&deg_z - qi(2)) / qi(2);
    t.check("(vi) castelnuovo", "g(Z) ≤ ½(H·[Z] − 1)(H·[Z] − 2) = 0", genus_max.clone(), Relation::Eq, qi(0))?;
    t.assume("(vi) h0", "χ(O_Z) = h⁰(O_Z) − h¹(O_Z) with h⁰(O_Z) ≥ 0 and h¹(O_Z) = g(Z)");
    let chi_lower = qi(0) - genus_max;
    t.check("(vi) contradiction", "χ(O_Z) ≥ 0 contradicts χ(O_Z) ≤ −1", chi_lower, Relation::Gt, chi_upper)?;
    Ok(t.finish(Outcome::Excluded))
}
