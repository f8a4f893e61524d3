//! Period series of the mirror quintic around the Gepner point ψ = 0, the Φ_i
//! combinations that enter the central charge, and two exact consistency
//! checks built on them.
//!
//! The branch `j` has
//! `ϖ_j(ψ) = −(1/5) Σ_{m≥1} Γ(m/5) / (Γ(m) Γ(1 − m/5)⁴) · (5 α^{2+j} ψ)^m`.

use astro_float::{BigFloat, Consts};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::charges::zg_dagger;
use crate::cyclotomic::CycloNumber;
use crate::error::{Error, Result};
use crate::hp::{self, HpComplex, RM};
use crate::ktheory::ChernVector;
use crate::rational::{q, qi, Q};

pub const DEFAULT_TERMS: usize = 250;
pub const DEFAULT_PRECISION_BITS: u32 = 256;
pub const MIN_PRECISION_BITS: u32 = 32;

const GUARD: usize = 64;

/// Γ(f) for rational f ∈ (0, 1), from the lower incomplete gamma series
/// `γ(f, T) = T^f e^{−T} Σ_k T^k / (f(f+1)…(f+k))` with T large enough that the
/// upper part `Γ(f, T) ≤ T^{f−1} e^{−T}` is below the target precision.
fn gamma_unit(f: &Q, p: usize, cc: &mut Consts) -> BigFloat {
    debug_assert!(f.is_positive() && f < &qi(1));
    let t = (p as u64 + 32) * 7 / 10 + 1;
    let work = 2 * p + GUARD;
    let tf = BigFloat::from_u64(t, work);
    let ff = hp::q_to_float(f, work, cc);
    let mut term = BigFloat::from_u64(1, work).div(&ff, work, RM);
    let mut sum = term.clone();
    let mut k: u64 = 1;
    loop {
        let denom = ff.add(&BigFloat::from_u64(k, work), work, RM);
        term = term.mul(&tf, work, RM).div(&denom, work, RM);
        sum = sum.add(&term, work, RM);
        if k > 2 * t {
            let rel = term.div(&sum, work, RM);
            if rel.is_zero() || rel.exponent().is_some_and(|e| (e as i64) < -(work as i64)) {
                break;
            }
        }
        k += 1;
    }
    let pow = ff.mul(&tf.ln(work, RM, cc), work, RM).sub(&tf, work, RM).exp(work, RM, cc);
    let mut out = sum.mul(&pow, work, RM);
    out.set_precision(p, RM).expect("precision in range");
    out
}

/// Γ(x) for rational x that is not a non-positive integer.
pub fn gamma(x: &Q, precision_bits: u32) -> Result<BigFloat> {
    let p = precision_bits as usize;
    let mut cc = hp::consts();
    gamma_with(x, p, &mut cc)
}

fn gamma_with(x: &Q, p: usize, cc: &mut Consts) -> Result<BigFloat> {
    let n = x.floor();
    let f = x - &n;
    let n: i64 = n
        .to_integer()
        .try_into()
        .map_err(|_| Error::InvalidInput(format!("Γ argument {x} out of range")))?;
    if f.is_zero() {
        if n <= 0 {
            return Err(Error::InvalidInput(format!("Γ has a pole at {x}")));
        }
        let fact: BigInt = (1..n).map(BigInt::from).product();
        return Ok(hp::q_to_float(&Q::from_integer(fact), p, cc));
    }
    let g = gamma_unit(&f, p + GUARD, cc);
    let mut shift = Q::one();
    if n >= 0 {
        for k in 0..n {
            shift *= &f + qi(k);
        }
        Ok(g.mul(&hp::q_to_float(&shift, p + GUARD, cc), p, RM))
    } else {
        for k in 1..=(-n) {
            shift *= &f - qi(k);
        }
        Ok(g.div(&hp::q_to_float(&shift, p + GUARD, cc), p, RM))
    }
}

/// The real factor `g_m = −(1/5) Γ(m/5) 5^m / (Γ(m) Γ(1 − m/5)⁴)` of the ψ^m
/// coefficient, evaluated directly from the Γ closed form. Zero when 5 | m.
pub fn direct_coefficient(m: i64, precision_bits: u32) -> Result<BigFloat> {
    let p = precision_bits as usize;
    if m < 1 {
        return Err(Error::InvalidInput(format!("coefficient index {m} must be ≥ 1")));
    }
    if m % 5 == 0 {
        return Ok(BigFloat::from_u64(0, p));
    }
    let mut cc = hp::consts();
    let w = p + GUARD;
    let top = gamma_with(&q(m, 5), w, &mut cc)?;
    let gm = gamma_with(&qi(m), w, &mut cc)?;
    let refl = gamma_with(&(qi(1) - q(m, 5)), w, &mut cc)?.powi(4, w, RM);
    let five_m = hp::q_to_float(&(Q::from_integer(num_traits::pow(BigInt::from(5), m as usize)) / qi(-5)), w, &mut cc);
    let v = top.mul(&five_m, w, RM).div(&gm.mul(&refl, w, RM), w, RM);
    let mut v = v;
    v.set_precision(p, RM).expect("precision in range");
    Ok(v)
}

/// Exact ratio `g_m / g_{m−5}`.
pub fn recursion_ratio(m: i64) -> Q {
    let num = num_traits::pow(qi(m - 5), 4);
    let den = qi((m - 1) * (m - 2) * (m - 3) * (m - 4));
    num / den
}

/// Truncated series `Σ_{m=1}^{N} c_m ψ^m` of one branch.
#[derive(Debug, Clone)]
pub struct PeriodSeries {
    j: usize,
    terms: usize,
    precision_bits: u32,
    /// `rel[m] = g_m / g_{m mod 5}`, exact; `rel[0]` is unused
    rel: Vec<Q>,
    /// real factors g_m (index m)
    real: Vec<BigFloat>,
    /// full coefficients `c_m = g_m α^{(2+j)m}` (index m)
    coeffs: Vec<HpComplex>,
}

fn alpha_powers(p: usize, cc: &mut Consts) -> Result<Vec<HpComplex>> {
    (0..5)
        .map(|k| {
            let b = CycloNumber::alpha_pow(k).embed(p as u32 + 32)?;
            Ok(HpComplex {
                re: hp::q_to_float(&b.re.midpoint(), p, cc),
                im: hp::q_to_float(&b.im.midpoint(), p, cc),
            })
        })
        .collect()
}

/// Seeds g_1..g_4 from the closed form; later coefficients from the exact
/// recursion `g_m = g_{m−5} (m−5)⁴ / ((m−1)(m−2)(m−3)(m−4))`.
pub fn build_series(j: i64, terms: usize, precision_bits: u32) -> Result<PeriodSeries> {
    if !(0..=3).contains(&j) {
        return Err(Error::InvalidInput(format!("branch index j = {j} must lie in 0..=3")));
    }
    if terms < 5 {
        return Err(Error::InvalidInput(format!("need at least 5 terms, got {terms}")));
    }
    if precision_bits < MIN_PRECISION_BITS {
        return Err(Error::PrecisionTooLow { min: MIN_PRECISION_BITS, got: precision_bits });
    }
    let p = precision_bits as usize;
    let mut cc = hp::consts();
    let seeds: Vec<BigFloat> = (1..=4)
        .map(|m| direct_coefficient(m, precision_bits + GUARD as u32))
        .collect::<Result<_>>()?;
    let mut rel = vec![Q::zero(); terms + 1];
    for m in 1..=terms {
        rel[m] = match m {
            1..=4 => Q::one(),
            _ if m % 5 == 0 => Q::zero(),
            _ => &rel[m - 5] * recursion_ratio(m as i64),
        };
    }
    let powers = alpha_powers(p + GUARD, &mut cc)?;
    let mut real = vec![BigFloat::from_u64(0, p)];
    let mut coeffs = vec![HpComplex::zero(p)];
    for m in 1..=terms {
        let g = if m % 5 == 0 {
            BigFloat::from_u64(0, p)
        } else {
            seeds[m % 5 - 1].mul(&hp::q_to_float(&rel[m], p + GUARD, &mut cc), p, RM)
        };
        let k = ((2 + j as usize) * m) % 5;
        coeffs.push(powers[k].scale(&g, p));
        real.push(g);
    }
    Ok(PeriodSeries { j: j as usize, terms, precision_bits, rel, real, coeffs })
}

/// A partial sum and a bound on its distance to the full series.
#[derive(Debug, Clone)]
pub struct PeriodValue {
    pub value: HpComplex,
    pub error_bound: BigFloat,
}

impl PeriodSeries {
    pub fn j(&self) -> usize {
        self.j
    }
    pub fn terms(&self) -> usize {
        self.terms
    }
    pub fn precision_bits(&self) -> u32 {
        self.precision_bits
    }

    /// Full coefficient of ψ^m, `1 ≤ m ≤ N`.
    pub fn coefficient(&self, m: usize) -> Option<&HpComplex> {
        (1..=self.terms).contains(&m).then(|| &self.coeffs[m])
    }

    /// Real factor g_m.
    pub fn real_coefficient(&self, m: usize) -> Option<&BigFloat> {
        (1..=self.terms).contains(&m).then(|| &self.real[m])
    }

    /// Exact `g_m / g_{m mod 5}`.
    pub fn exact_ratio(&self, m: usize) -> Option<&Q> {
        (1..=self.terms).contains(&m).then(|| &self.rel[m])
    }

    /// Checks `(m−5)⁴ g_{m−5} = (m−1)(m−2)(m−3)(m−4) g_m` on the exact ratios for
    /// every `6 ≤ m ≤ N`.
    pub fn pf_residual_vanishes(&self) -> bool {
        (6..=self.terms).all(|m| {
            let mi = m as i64;
            let lhs = num_traits::pow(qi(mi - 5), 4) * &self.rel[m - 5];
            let rhs = qi((mi - 1) * (mi - 2) * (mi - 3) * (mi - 4)) * &self.rel[m];
            lhs == rhs
        })
    }

    /// Evaluates the truncated series at ψ = `re + i·im`, requiring |5ψ| < 1.
    pub fn eval(&self, re: &Q, im: &Q) -> Result<PeriodValue> {
        let r2 = re * re + im * im;
        if r2 * qi(25) >= qi(1) {
            return Err(Error::InvalidInput(format!(
                "ψ = {re} + {im}i lies outside the supported region |5ψ| < 1"
            )));
        }
        let p = self.precision_bits as usize;
        let w = p + GUARD;
        let mut cc = hp::consts();
        let psi = HpComplex { re: hp::q_to_float(re, w, &mut cc), im: hp::q_to_float(im, w, &mut cc) };
        let mut acc = HpComplex::zero(w);
        for m in (1..=self.terms).rev() {
            acc = acc.add(&self.coeffs[m], w).mul(&psi, w);
        }
        // Coefficients decrease in modulus within each residue class, so every
        // |c_m| with m > N is at most the largest of the last five.
        let r = psi.abs(w);
        let up = astro_float::RoundingMode::Up;
        let cmax = (self.terms.saturating_sub(4)..=self.terms)
            .map(|m| self.real[m].abs())
            .fold(BigFloat::from_u64(0, w), |a, b| a.max(&b));
        let one = BigFloat::from_u64(1, w);
        let tail = if r.is_zero() {
            BigFloat::from_u64(0, w)
        } else {
            cmax.mul(&r.powi(self.terms + 1, w, up), w, up).div(&one.sub(&r, w, RM), w, up)
        };
        // rounding: |Σ c_m ψ^m| budget at a relative 2^-(p+8) per term
        let mut abs_sum = BigFloat::from_u64(0, w);
        for m in (1..=self.terms).rev() {
            abs_sum = abs_sum.add(&self.real[m].abs(), w, up).mul(&r, w, up);
        }
        let eps = BigFloat::from_u64(1, w).mul(&BigFloat::from_u64(2, w).powi(p + 8, w, RM).reciprocal(w, RM), w, up);
        let rounding = abs_sum.mul(&eps, w, up).mul(&BigFloat::from_u64(self.terms as u64 + 16, w), w, up);
        let mut error_bound = tail.add(&rounding, w, up);
        error_bound.set_precision(p, up).expect("precision in range");
        let mut value = acc;
        value.re.set_precision(p, RM).expect("precision in range");
        value.im.set_precision(p, RM).expect("precision in range");
        Ok(PeriodValue { value, error_bound })
    }
}

pub fn varpi_eval(series: &PeriodSeries, re: &Q, im: &Q) -> Result<PeriodValue> {
    series.eval(re, im)
}

/// Rows i = 0..3 of the matrix P with `Φ_i = Σ_j P[i][j] ϖ_j`.
pub fn phi_coefficients() -> [[Q; 4]; 4] {
    [
        [qi(1), qi(-1), qi(0), qi(0)],
        [q(16, 30), q(-9, 30), qi(0), q(3, 30)],
        [q(1, 5), q(-3, 5), q(-2, 5), q(-1, 5)],
        [qi(1), qi(0), qi(0), qi(0)],
    ]
}

/// `−Φ_i` with `ϖ_j ↦ α^j`, for i = 0..3.
pub fn gepner_limit_covector() -> [CycloNumber; 4] {
    phi_coefficients().map(|row| -CycloNumber::alpha_poly(&row))
}

pub fn gepner_limit_check() -> bool {
    gepner_limit_covector() == *zg_dagger().coeffs()
}

/// Coefficients of ϖ_0..ϖ_3 in `Z_ψ(O_X(m))` as computed by Aspinwall.
pub fn aspinwall_polynomials(m: i64) -> [Q; 4] {
    let mq = qi(m);
    [
        (qi(5) * &mq * &mq * &mq + qi(3) * &mq * &mq + qi(16) * &mq + qi(6)) / qi(6),
        -(qi(3) * &mq * &mq + qi(3) * &mq + qi(2)) / qi(2),
        -(&mq * &mq),
        -(&mq * (&mq - qi(1))) / qi(2),
    ]
}

/// Coefficients of ϖ_0..ϖ_3 in `Σ_i Φ_i · H^{3−i}ch_i(O_X(m))`.
pub fn aspinwall_expansion(m: i64) -> [Q; 4] {
    let pairings = ChernVector::line_bundle(m).integrated_pairings();
    let p = phi_coefficients();
    std::array::from_fn(|j| (0..4).map(|i| &p[i][j] * &pairings[i]).sum())
}

pub fn aspinwall_check(ms: &[i64]) -> bool {
    ms.iter().all(|&m| aspinwall_expansion(m) == aspinwall_polynomials(m))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel_err(a: &BigFloat, b: &BigFloat) -> f64 {
        let p = 512;
        let d = a.sub(b, p, RM).abs().div(&b.abs(), p, RM);
        hp::float_to_q(&d).map(|x| crate::rational::to_f64(&x)).unwrap_or(f64::INFINITY)
    }

    #[test]
    fn gamma_known_values() {
        let half = gamma(&q(1, 2), 256).unwrap();
        let sqrt_pi = {
            let mut cc = hp::consts();
            cc.pi(320, RM).sqrt(256, RM)
        };
        assert!(rel_err(&half, &sqrt_pi) < 1e-70);
        let g5 = gamma(&qi(5), 128).unwrap();
        assert_eq!(hp::float_to_q(&g5).unwrap(), qi(24));
        // Γ(−1/2) = −2√π
        let mh = gamma(&q(-1, 2), 256).unwrap();
        let target = sqrt_pi.mul(&BigFloat::from_i64(-2, 256), 256, RM);
        assert!(rel_err(&mh, &target) < 1e-70);
        assert!(gamma(&qi(0), 64).is_err());
        assert!(gamma(&qi(-3), 64).is_err());
    }

    #[test]
    fn gamma_of_fifths_reflection() {
        // Γ(1/5)Γ(4/5) = π / sin(π/5)
        let p = 256;
        let prod = gamma(&q(1, 5), 256).unwrap().mul(&gamma(&q(4, 5), 256).unwrap(), p, RM);
        let mut cc = hp::consts();
        let pi = cc.pi(p + 64, RM);
        let s = pi.div(&BigFloat::from_u64(5, p + 64), p + 64, RM).sin(p + 64, RM, &mut cc);
        assert!(rel_err(&prod, &pi.div(&s, p, RM)) < 1e-70);
    }

    #[test]
    fn series_structure() {
        let s = build_series(0, 30, 128).unwrap();
        assert!(s.real_coefficient(5).unwrap().is_zero());
        assert!(s.real_coefficient(25).unwrap().is_zero());
        assert_eq!(s.exact_ratio(6).unwrap(), &q(1, 120));
        assert!(s.pf_residual_vanishes());
        assert!(s.coefficient(0).is_none());
        assert!(build_series(4, 30, 128).is_err());
        assert!(build_series(0, 4, 128).is_err());
        assert!(build_series(0, 10, 16).is_err());
    }

    #[test]
    fn series_matches_direct_formula() {
        let s = build_series(1, 50, 256).unwrap();
        for m in 1..=50usize {
            let d = direct_coefficient(m as i64, 256).unwrap();
            let g = s.real_coefficient(m).unwrap();
            if m % 5 == 0 {
                assert!(g.is_zero() && d.is_zero());
            } else {
                assert!(rel_err(g, &d) < 1e-30, "m = {m}");
            }
        }
    }

    #[test]
    fn eval_at_origin_and_outside() {
        let s = build_series(2, 20, 128).unwrap();
        let v = s.eval(&qi(0), &qi(0)).unwrap();
        assert!(v.value.re.is_zero() && v.value.im.is_zero());
        assert!(s.eval(&q(1, 5), &qi(0)).is_err());
        assert!(s.eval(&q(3, 25), &q(4, 25)).is_err());
        assert!(s.eval(&q(1, 10), &q(1, 10)).is_ok());
    }

    #[test]
    fn phi_and_limits() {
        assert!(gepner_limit_check());
        assert_eq!(aspinwall_expansion(0), [qi(1), qi(-1), qi(0), qi(0)]);
        assert_eq!(aspinwall_expansion(1)[0], qi(5));
        assert!(aspinwall_check(&[-3, -2, -1, 0, 1, 2, 3]));
        let c = gepner_limit_covector();
        assert_eq!(c[3], CycloNumber::from_int(-1));
    }
}
