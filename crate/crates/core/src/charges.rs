//! The Gepner-point central charge Z_G†, its rewrite in B-twisted form, the
//! large-volume charge Z_{B,tH}, and the K-theoretic action of
//! ST_{O_X} ∘ ⊗O_X(1).

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::sync::OnceLock;

use crate::cyclotomic::CycloNumber;
use crate::error::{Error, Result};
use crate::ktheory::ChernVector;
use crate::rational::{q, qi, Q};

/// The B-field used throughout: B = −H/2.
pub fn b_field() -> Q {
    q(-1, 2)
}

/// A linear charge `Z(c) = z0·ch0 + z1·H²ch1 + z2·Hch2 + z3·ch3` on integrated
/// pairings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChargeCovector {
    z: [CycloNumber; 4],
}

impl ChargeCovector {
    pub fn new(z: [CycloNumber; 4]) -> Self {
        Self { z }
    }

    pub fn coeffs(&self) -> &[CycloNumber; 4] {
        &self.z
    }

    pub fn evaluate(&self, c: &ChernVector) -> CycloNumber {
        self.z
            .iter()
            .zip(c.integrated_pairings())
            .filter(|(_, p)| !p.is_zero())
            .fold(CycloNumber::zero(), |acc, (z, p)| acc + z.scale(&p))
    }

    /// Applies a field automorphism coefficientwise.
    pub fn galois(&self, k: i64) -> Result<Self> {
        let [a, b, c, d] = &self.z;
        Ok(Self { z: [a.galois(k)?, b.galois(k)?, c.galois(k)?, d.galois(k)?] })
    }
}

/// Z_G†(E) = −ch₃ + ⅕(α³+2α²+3α−1)Hch₂ + (1/30)(−3α³+9α−16)H²ch₁ + (α−1)ch₀.
pub fn zg_dagger() -> ChargeCovector {
    let z0 = CycloNumber::alpha_poly(&[qi(-1), qi(1)]);
    let z1 = CycloNumber::alpha_poly(&[q(-16, 30), q(9, 30), qi(0), q(-3, 30)]);
    let z2 = CycloNumber::alpha_poly(&[q(-1, 5), q(3, 5), q(2, 5), q(1, 5)]);
    let z3 = CycloNumber::from_int(-1);
    ChargeCovector::new([z0, z1, z2, z3])
}

pub fn evaluate(c: &ChernVector) -> CycloNumber {
    zg_dagger().evaluate(c)
}

/// Real coefficients of the twisted form
/// `−ch₃^B + a·H²ch₁^B + i(b·Hch₂^B + c·ch₀^B)`, plus the two bounds derived
/// from them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RewriteCoefficients {
    pub a: CycloNumber,
    pub b: CycloNumber,
    pub c: CycloNumber,
    /// 2c/b
    pub strong_bg_bound: CycloNumber,
    /// 5/8 + c/b
    pub clifford_bound: CycloNumber,
}

fn build_rewrite_coefficients() -> RewriteCoefficients {
    let minus_i = -CycloNumber::i();
    let a = CycloNumber::alpha_poly(&[q(-67, 120), qi(0), q(-1, 5), q(-1, 5)]);
    let b_i = CycloNumber::alpha_poly(&[q(3, 10), q(3, 5), q(2, 5), q(1, 5)]);
    let c_i = CycloNumber::alpha_poly(&[q(5, 16), q(5, 8), q(1, 4), q(3, 8)]);
    let b = &b_i * &minus_i;
    let c = &c_i * &minus_i;
    let c_over_b = c.try_div(&b).expect("b is a nonzero field element");
    let strong_bg_bound = c_over_b.scale(&qi(2));
    let clifford_bound = &c_over_b + &CycloNumber::from_rational(q(5, 8));
    RewriteCoefficients { a, b, c, strong_bg_bound, clifford_bound }
}

pub fn rewrite_coefficients() -> &'static RewriteCoefficients {
    static CELL: OnceLock<RewriteCoefficients> = OnceLock::new();
    CELL.get_or_init(build_rewrite_coefficients)
}

/// Rewrite form evaluated on an already twisted class `w = ch^B`.
pub fn rewrite_form_twisted(w: &ChernVector) -> CycloNumber {
    let RewriteCoefficients { a, b, c, .. } = rewrite_coefficients();
    let [ch0, h2ch1, hch2, ch3] = w.integrated_pairings();
    let real = a.scale(&h2ch1) - CycloNumber::from_rational(ch3);
    let imag = b.scale(&hch2) + c.scale(&ch0);
    real + &imag * &CycloNumber::i()
}

/// Rewrite form on an untwisted class, with B = −H/2.
pub fn rewrite_form(c: &ChernVector) -> CycloNumber {
    rewrite_form_twisted(&c.twist(&b_field()))
}

pub fn rewrite_equivalence_check(c: &ChernVector) -> bool {
    rewrite_form(c) == evaluate(c)
}

/// Z_{B,tH}(E) = −∫ e^{−itH} ch^B(E); both parts are rational for rational t.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LargeVolumeCharge {
    #[serde(with = "crate::rational::serde_q")]
    pub re: Q,
    #[serde(with = "crate::rational::serde_q")]
    pub im: Q,
}

pub fn zb_th(c: &ChernVector, t: &Q) -> Result<LargeVolumeCharge> {
    if !t.is_positive() {
        return Err(Error::InvalidInput(format!("t must be positive, got {t}")));
    }
    let [ch0, h2ch1, hch2, ch3] = c.twist(&b_field()).integrated_pairings();
    let t2 = t * t;
    let t3 = &t2 * t;
    Ok(LargeVolumeCharge {
        re: -ch3 + &t2 / qi(2) * h2ch1,
        im: t * hch2 - qi(5) * t3 / qi(6) * ch0,
    })
}

/// 4×4 rational matrix acting on `(v0, v1, v2, v3)` column vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonodromyMatrix {
    rows: [[Q; 4]; 4],
}

impl MonodromyMatrix {
    pub fn from_rows(rows: [[Q; 4]; 4]) -> Self {
        Self { rows }
    }

    pub fn identity() -> Self {
        let mut rows: [[Q; 4]; 4] = Default::default();
        for (i, row) in rows.iter_mut().enumerate() {
            row[i] = Q::one();
        }
        Self { rows }
    }

    /// Matrix whose columns are the images of the basis classes.
    pub fn from_map(f: impl Fn(&ChernVector) -> ChernVector) -> Self {
        let mut rows: [[Q; 4]; 4] = Default::default();
        for j in 0..4 {
            let image = f(&basis_class(j));
            for (i, row) in rows.iter_mut().enumerate() {
                row[j] = image[i].clone();
            }
        }
        Self { rows }
    }

    pub fn rows(&self) -> &[[Q; 4]; 4] {
        &self.rows
    }

    pub fn apply(&self, c: &ChernVector) -> ChernVector {
        let mut out: [Q; 4] = Default::default();
        for (o, row) in out.iter_mut().zip(&self.rows) {
            *o = row.iter().zip(c.coords()).map(|(a, b)| a * b).sum();
        }
        ChernVector::from_array(out)
    }

    /// `self ∘ rhs`.
    pub fn compose(&self, rhs: &Self) -> Self {
        let mut rows: [[Q; 4]; 4] = Default::default();
        for (i, row) in rows.iter_mut().enumerate() {
            for (j, slot) in row.iter_mut().enumerate() {
                *slot = (0..4).map(|k| &self.rows[i][k] * &rhs.rows[k][j]).sum();
            }
        }
        Self { rows }
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::identity(), |acc, _| acc.compose(self))
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    pub fn det(&self) -> Q {
        let mut m = self.rows.clone();
        let mut det = Q::one();
        for col in 0..4 {
            let Some(p) = (col..4).find(|&r| !m[r][col].is_zero()) else {
                return Q::zero();
            };
            if p != col {
                m.swap(p, col);
                det = -det;
            }
            det *= &m[col][col];
            for r in col + 1..4 {
                let f = &m[r][col] / &m[col][col];
                for c in col..4 {
                    let d = &f * &m[col][c];
                    m[r][c] -= d;
                }
            }
        }
        det
    }

    /// Characteristic polynomial det(x·I − M), coefficients from x⁰ to x⁴.
    pub fn char_poly(&self) -> [Q; 5] {
        // Faddeev–LeVerrier: M_k = A·M_{k−1} + c_{n−k+1}·I, c_{n−k} = −tr(A·M_k)/k.
        let n = 4;
        let mut coeffs: [Q; 5] = Default::default();
        coeffs[n] = Q::one();
        let mut mk = Self::from_rows(Default::default());
        for k in 1..=n {
            mk = self.compose(&mk);
            for i in 0..n {
                mk.rows[i][i] += &coeffs[n - k + 1];
            }
            let am = self.compose(&mk);
            let trace: Q = (0..n).map(|i| am.rows[i][i].clone()).sum();
            coeffs[n - k] = -trace / qi(k as i64);
        }
        coeffs
    }
}

fn basis_class(j: usize) -> ChernVector {
    let mut v: [Q; 4] = Default::default();
    v[j] = Q::one();
    ChernVector::from_array(v)
}

/// ⊗O_X(1): multiplication by e^H.
pub fn tensor_o1(c: &ChernVector) -> ChernVector {
    c.tensor_line(1)
}

/// K-theory shadow of ST_{O_X}: c ↦ c − χ(c)·[O_X].
pub fn seidel_thomas(c: &ChernVector) -> ChernVector {
    c - &ChernVector::structure_sheaf().scale(&c.euler_char())
}

pub fn tensor_o1_matrix() -> MonodromyMatrix {
    MonodromyMatrix::from_map(tensor_o1)
}

pub fn seidel_thomas_matrix() -> MonodromyMatrix {
    MonodromyMatrix::from_map(seidel_thomas)
}

/// M = ST_{O_X} ∘ ⊗O_X(1).
pub fn monodromy_matrix() -> MonodromyMatrix {
    seidel_thomas_matrix().compose(&tensor_o1_matrix())
}

/// `Z(M·e_k) − λ·Z(e_k)` for the four basis classes.
pub fn eigen_residual(
    z: &ChargeCovector,
    m: &MonodromyMatrix,
    eigenvalue: &CycloNumber,
) -> [CycloNumber; 4] {
    std::array::from_fn(|k| {
        let e = basis_class(k);
        z.evaluate(&m.apply(&e)) - eigenvalue * &z.evaluate(&e)
    })
}

/// Z_G† ∘ M = α·Z_G†, checked exactly on the basis.
pub fn gepner_eigen_check() -> bool {
    eigen_residual(&zg_dagger(), &monodromy_matrix(), &CycloNumber::alpha())
        .iter()
        .all(CycloNumber::is_zero)
}

/// The factor in Z_G(Ψ(E)) = −(1−α)⁴·Z_G†(E).
pub fn gepner_scalar() -> CycloNumber {
    -(CycloNumber::one() - CycloNumber::alpha()).pow(4)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::Sign;

    #[test]
    fn point_and_structure_sheaf_charges() {
        assert_eq!(evaluate(&ChernVector::point()), CycloNumber::from_int(-1));
        assert_eq!(
            evaluate(&ChernVector::structure_sheaf()),
            CycloNumber::alpha() - CycloNumber::one()
        );
    }

    #[test]
    fn coefficients_are_real_with_expected_signs() {
        let rc = rewrite_coefficients();
        for x in [&rc.a, &rc.b, &rc.c, &rc.strong_bg_bound, &rc.clifford_bound] {
            assert!(x.is_real());
            assert!(x.im().is_zero());
        }
        assert_eq!(rc.a.sign_of_real().unwrap(), Sign::Negative);
        assert_eq!(rc.b.sign_of_real().unwrap(), Sign::Positive);
        assert_eq!(rc.c.sign_of_real().unwrap(), Sign::Positive);
    }

    #[test]
    fn rewrite_agrees_on_basic_classes() {
        assert!(rewrite_equivalence_check(&ChernVector::point()));
        assert!(rewrite_equivalence_check(&ChernVector::structure_sheaf()));
        for m in -3..=3 {
            assert!(rewrite_equivalence_check(&ChernVector::line_bundle(m)));
        }
    }

    #[test]
    fn large_volume_charge() {
        for t in [q(1, 3), qi(1), qi(7)] {
            let z = zb_th(&ChernVector::point(), &t).unwrap();
            assert_eq!((z.re, z.im), (qi(-1), qi(0)));
        }
        // ch^B = (1,0,0,0) exactly when ch = e^{−H/2}.
        let c = ChernVector::from_fracs([(1, 1), (-1, 2), (1, 8), (-1, 48)]);
        let z = zb_th(&c, &qi(1)).unwrap();
        assert_eq!((z.re, z.im), (qi(0), q(-5, 6)));
        assert!(zb_th(&c, &qi(0)).is_err());
        assert!(zb_th(&c, &q(-1, 2)).is_err());
    }

    #[test]
    fn monodromy_on_point_and_structure_sheaf() {
        let m = monodromy_matrix();
        assert_eq!(
            m.apply(&ChernVector::point()),
            ChernVector::from_fracs([(-1, 1), (0, 1), (0, 1), (1, 5)])
        );
        assert_eq!(tensor_o1(&ChernVector::structure_sheaf()), ChernVector::line_bundle(1));
        let st = seidel_thomas_matrix();
        assert_eq!(st.rows()[0], [qi(1), q(-25, 6), qi(0), qi(-5)]);
    }

    #[test]
    fn matrix_is_order_five() {
        let m = monodromy_matrix();
        assert!(m.pow(5).is_identity());
        for k in 1..5 {
            assert!(!m.pow(k).is_identity());
        }
        assert_eq!(m.det(), qi(1));
        assert_eq!(m.char_poly(), [qi(1), qi(1), qi(1), qi(1), qi(1)]);
    }

    #[test]
    fn eigenvector_is_specific_to_alpha() {
        assert!(gepner_eigen_check());
        let m = monodromy_matrix();
        let z = zg_dagger();
        let a2 = CycloNumber::alpha().pow(2);
        assert!(eigen_residual(&z, &m, &a2).iter().any(|r| !r.is_zero()));
        // α ↦ α² (ζ ↦ ζ¹⁷) gives the eigen-covector for α² instead.
        let z2 = z.galois(17).unwrap();
        assert!(eigen_residual(&z2, &m, &a2).iter().all(CycloNumber::is_zero));
        assert!(eigen_residual(&z2, &m, &CycloNumber::alpha()).iter().any(|r| !r.is_zero()));
    }

    #[test]
    fn gepner_scalar_properties() {
        let s = gepner_scalar();
        assert!(!s.is_zero());
        assert_eq!(s.conj(), -(CycloNumber::one() - CycloNumber::alpha().pow(4)).pow(4));
        // |1 − α|² = (5 − √5)/2, so |s|² = ((5 − √5)/2)⁴ ≈ 3.6475.
        let norm = &s * &s.conj();
        assert!(norm.is_real());
        let b = norm.embed(64).unwrap();
        assert!(b.re.lo() > &q(36474, 10000) && b.re.hi() < &q(36476, 10000));
    }
}
