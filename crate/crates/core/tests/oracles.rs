//! Independent recomputations that the library results are compared against.

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use gepnerkit::charges::{b_field, evaluate};
use gepnerkit::periods::{build_series, direct_coefficient, PeriodSeries};
use gepnerkit::rational::{q, qi, to_f64};
use gepnerkit::surface::pushforward_chb;
use gepnerkit::{ChernVector, SurfaceClass, Q};

const RM: RoundingMode = RoundingMode::ToEven;

/// ch(i_*F) by Grothendieck–Riemann–Roch for S ⊂ X a hyperplane section:
/// `i_*(ch(F) · td(N)^{-1})` with `td(O_S(1))^{-1} = 1 − h/2 + h²/6`,
/// followed by `ch(O_X^{⊕R})` removed and the B-twist.
fn grr_chb(s: &SurfaceClass) -> ChernVector {
    let (r, dh, n) = (qi(s.r()), qi(s.dh()), s.n().clone());
    let sheaf = ChernVector::from_integrated([
        qi(0),
        qi(5) * &r,
        &dh - q(5, 2) * &r,
        &n - &dh / qi(2) + q(5, 6) * &r,
    ]);
    let sections = ChernVector::structure_sheaf().scale(&qi(s.big_r() as i64));
    (&sheaf - &sections).twist(&b_field())
}

#[test]
fn pushforward_matches_grr() {
    for big_r in 0..4u64 {
        for r in -3..=3 {
            for dh in -7..=7 {
                for n2 in -5..=5 {
                    let s = SurfaceClass::new(big_r, r, dh, q(n2, 2)).unwrap();
                    assert_eq!(pushforward_chb(&s), grr_chb(&s), "{s:?}");
                }
            }
        }
    }
}

#[test]
fn structure_sheaf_of_surface_from_sequence() {
    // 0 → O_X(−1) → O_X → i_*O_S → 0
    let seq = &ChernVector::structure_sheaf() - &ChernVector::line_bundle(-1);
    let s = SurfaceClass::sheaf(1, 0, Q::from_integer(0.into())).unwrap();
    assert_eq!(pushforward_chb(&s), seq.twist(&b_field()));
}

fn reference_coefficients() -> Vec<(usize, String)> {
    include_str!("data/period_coefficients.txt")
        .lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|l| {
            let mut it = l.split_whitespace();
            (it.next().unwrap().parse().unwrap(), it.next().unwrap().to_string())
        })
        .collect()
}

fn rel_err(a: &BigFloat, b: &BigFloat) -> f64 {
    let d = a.sub(b, 512, RM).abs().div(&b.abs(), 512, RM);
    d.to_string().parse::<f64>().unwrap()
}

#[test]
fn coefficients_match_frozen_high_precision_values() {
    let mut cc = Consts::new().unwrap();
    let series: PeriodSeries = build_series(0, 50, 256).unwrap();
    let refs = reference_coefficients();
    assert_eq!(refs.len(), 50);
    for (m, text) in refs {
        let expected = BigFloat::parse(&text, Radix::Dec, 256, RM, &mut cc);
        let got = series.real_coefficient(m).unwrap();
        let direct = direct_coefficient(m as i64, 256).unwrap();
        if m % 5 == 0 {
            assert!(expected.is_zero() && got.is_zero() && direct.is_zero());
            continue;
        }
        assert!(rel_err(got, &expected) < 1e-55, "recursion, m = {m}");
        assert!(rel_err(&direct, &expected) < 1e-55, "direct, m = {m}");
    }
}

#[test]
fn period_sum_is_self_convergent() {
    let psi = (q(1, 10), qi(0));
    let a = build_series(0, 250, 256).unwrap().eval(&psi.0, &psi.1).unwrap();
    let b = build_series(0, 500, 256).unwrap().eval(&psi.0, &psi.1).unwrap();
    let diff = a.value.sub(&b.value, 320).abs(320);
    let scale = b.value.abs(320);
    let rel = diff.div(&scale, 320, RM);
    assert!(rel.is_zero() || rel.to_string().parse::<f64>().unwrap() < 1e-40);
    assert!(diff.cmp(&a.error_bound.add(&b.error_bound, 320, RM)).unwrap() <= 0);
}

#[test]
fn error_bound_is_sound_under_doubling() {
    for (re, im) in [(q(1, 7), q(1, 20)), (q(-3, 20), qi(0)), (qi(0), q(19, 100))] {
        for j in 0..4 {
            let a = build_series(j, 60, 192).unwrap().eval(&re, &im).unwrap();
            let b = build_series(j, 120, 192).unwrap().eval(&re, &im).unwrap();
            let diff = a.value.sub(&b.value, 256).abs(256);
            assert!(diff.cmp(&a.error_bound).unwrap() <= 0, "j = {j}, ψ = {re} + {im}i");
        }
    }
}

#[test]
fn charge_of_jardim_class_numerically() {
    let c = ChernVector::from_fracs([(4, 1), (-2, 1), (-1, 1), (-1, 3)]);
    let b = evaluate(&c).embed(96).unwrap();
    let (re, im) = (to_f64(&b.re.midpoint()), to_f64(&b.im.midpoint()));
    // 4(α − 1) − 10 z1 − 5 z2 + 5/3, with α = e^{2πi/5}
    let (ca, sa) = ((0.4f64 * std::f64::consts::PI).cos(), (0.4f64 * std::f64::consts::PI).sin());
    let alpha = |k: f64| ((k * 0.4 * std::f64::consts::PI).cos(), (k * 0.4 * std::f64::consts::PI).sin());
    let (a2, a3) = (alpha(2.0), alpha(3.0));
    let z1 = ((-16.0 + 9.0 * ca - 3.0 * a3.0) / 30.0, (9.0 * sa - 3.0 * a3.1) / 30.0);
    let z2 = ((-1.0 + 3.0 * ca + 2.0 * a2.0 + a3.0) / 5.0, (3.0 * sa + 2.0 * a2.1 + a3.1) / 5.0);
    let exp_re = 4.0 * (ca - 1.0) - 10.0 * z1.0 - 5.0 * z2.0 + 5.0 / 3.0;
    let exp_im = 4.0 * sa - 10.0 * z1.1 - 5.0 * z2.1;
    assert!((re - exp_re).abs() < 1e-12 && (im - exp_im).abs() < 1e-12);
}

#[test]
fn period_value_matches_frozen_summation() {
    // 600-term summation of the Γ closed form at 60 digits
    let re = "0.194958368850551021659976086279418817970489546054463169751131";
    let im = "-0.126159027137780620579594755827938276950702729212613781897684";
    let mut cc = Consts::new().unwrap();
    let v = build_series(0, 250, 256).unwrap().eval(&q(1, 10), &qi(0)).unwrap();
    for (got, want) in [(&v.value.re, re), (&v.value.im, im)] {
        let want = BigFloat::parse(want, Radix::Dec, 256, RM, &mut cc);
        assert!(rel_err(got, &want) < 1e-58);
    }
}
