//! Hodge star on 2-forms of a rational metric 4-space, kept exact over ℚ(√det g).


use super::surd::Surd;
use super::CalibratedError;
use crate::linalg::{definiteness, determinant, inverse, rank, Definiteness, Field, Matrix};
use crate::rational::Q;

/// Ordered basis e₁₂, e₁₃, e₁₄, e₂₃, e₂₄, e₃₄ (0-based index pairs).
pub const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// A rational 2-form in the ordered basis [`PAIRS`].
pub type TwoForm = [Q; 6];

/// A 2-form with coefficients in ℚ(√det g).
pub type SurdForm = [Surd; 6];

/// Positive-definite symmetric rational 4×4 metric.
#[derive(Clone, Debug, PartialEq)]
pub struct Metric4 {
    g: Matrix<Q>,
    det: Q,
    /// Induced inverse metric on 2-forms: g^{ik}g^{jl} − g^{il}g^{jk}.
    g2: Matrix<Q>,
    /// `*w = √det · star_rational · w`.
    star_rational: Matrix<Q>,
}

/// Sign of the permutation (i, j, k, l) of (0, 1, 2, 3), or 0 if indices repeat.
pub fn levi_civita(p: [usize; 4]) -> i64 {
    let mut sign = 1;
    for a in 0..4 {
        for b in a + 1..4 {
            if p[a] == p[b] {
                return 0;
            }
            if p[a] > p[b] {
                sign = -sign;
            }
        }
    }
    sign
}

impl Metric4 {
    pub fn new(g: Matrix<Q>) -> Result<Self, CalibratedError> {
        if g.len() != 4 || g.iter().any(|r| r.len() != 4) {
            return Err(CalibratedError::Shape("metric must be 4x4".into()));
        }
        for i in 0..4 {
            for j in 0..4 {
                if g[i][j] != g[j][i] {
                    return Err(CalibratedError::NotSymmetric);
                }
            }
        }
        if definiteness(&g) != Definiteness::Positive {
            return Err(CalibratedError::NotPositiveDefinite);
        }
        let det = determinant(&g);
        let gi = inverse(&g).ok_or(CalibratedError::NotPositiveDefinite)?;
        let mut g2 = vec![vec![Q::zero(); 6]; 6];
        for (a, &(i, j)) in PAIRS.iter().enumerate() {
            for (b, &(k, l)) in PAIRS.iter().enumerate() {
                g2[a][b] = &gi[i][k] * &gi[j][l] - &gi[i][l] * &gi[j][k];
            }
        }
        let mut eps = vec![vec![Q::zero(); 6]; 6];
        for (a, &(k, l)) in PAIRS.iter().enumerate() {
            for (b, &(i, j)) in PAIRS.iter().enumerate() {
                eps[a][b] = Q::from_integer(levi_civita([i, j, k, l]).into());
            }
        }
        let star_rational = crate::linalg::mat_mul(&eps, &g2);
        Ok(Metric4 { g, det, g2, star_rational })
    }

    pub fn identity() -> Self {
        Metric4::new(crate::linalg::identity(4)).expect("identity is definite")
    }

    pub fn matrix(&self) -> &Matrix<Q> {
        &self.g
    }

    pub fn det(&self) -> &Q {
        &self.det
    }

    pub fn sqrt_det(&self) -> Surd {
        Surd::sqrt(self.det.clone())
    }

    /// Matrix of the rational inner product on 2-forms.
    pub fn two_form_gram(&self) -> &Matrix<Q> {
        &self.g2
    }
}

pub fn lift(w: &TwoForm) -> SurdForm {
    std::array::from_fn(|i| Surd::rational(w[i].clone()))
}

fn lin<F: Fn(&Surd, &Surd) -> Surd>(a: &SurdForm, b: &SurdForm, f: F) -> SurdForm {
    std::array::from_fn(|i| f(&a[i], &b[i]))
}

pub fn form_add(a: &SurdForm, b: &SurdForm) -> SurdForm {
    lin(a, b, |x, y| x.add(y))
}

pub fn form_sub(a: &SurdForm, b: &SurdForm) -> SurdForm {
    lin(a, b, |x, y| x.sub(y))
}

pub fn form_scale(a: &SurdForm, q: &Q) -> SurdForm {
    std::array::from_fn(|i| a[i].scale(q))
}

pub fn form_is_zero(a: &SurdForm) -> bool {
    a.iter().all(|x| x.is_zero())
}

/// Hodge star of a 2-form with coefficients in ℚ(√det g).
pub fn hodge_star2_surd(g: &Metric4, w: &SurdForm) -> SurdForm {
    let s = g.sqrt_det();
    std::array::from_fn(|a| {
        let mut acc = Surd::zero();
        for (b, wb) in w.iter().enumerate() {
            let r = &g.star_rational[a][b];
            if !r.is_zero() && !wb.is_zero() {
                acc = acc.add(&wb.scale(r));
            }
        }
        acc.mul(&s)
    })
}

pub fn hodge_star2(g: &Metric4, w: &TwoForm) -> SurdForm {
    hodge_star2_surd(g, &lift(w))
}

/// `g`-inner product of two 2-forms.
pub fn inner(g: &Metric4, a: &SurdForm, b: &SurdForm) -> Surd {
    let mut acc = Surd::zero();
    for i in 0..6 {
        for j in 0..6 {
            if !g.g2[i][j].is_zero() {
                acc = acc.add(&a[i].mul(&b[j]).scale(&g.g2[i][j]));
            }
        }
    }
    acc
}

pub fn norm_sq(g: &Metric4, a: &SurdForm) -> Surd {
    inner(g, a, a)
}

/// Self-dual and anti-self-dual parts.
pub fn sd_split_surd(g: &Metric4, w: &SurdForm) -> (SurdForm, SurdForm) {
    let sw = hodge_star2_surd(g, w);
    let half = Q::new(1.into(), 2.into());
    (form_scale(&form_add(w, &sw), &half), form_scale(&form_sub(w, &sw), &half))
}

pub fn sd_split(g: &Metric4, w: &TwoForm) -> (SurdForm, SurdForm) {
    sd_split_surd(g, &lift(w))
}

/// Pfaffian w₁₂w₃₄ − w₁₃w₂₄ + w₁₄w₂₃; w∧w = 2·pf·e₁₂₃₄.
pub fn pfaffian(w: &SurdForm) -> Surd {
    w[0].mul(&w[5]).sub(&w[1].mul(&w[4])).add(&w[2].mul(&w[3]))
}

/// Coefficient of w∧w on dvol = √det g · e₁₂₃₄.
pub fn wedge_square_coefficient(g: &Metric4, w: &SurdForm) -> Surd {
    let two_pf = pfaffian(w).scale(&Q::from_integer(2.into()));
    two_pf.mul(&g.sqrt_det().inv())
}

#[derive(Clone, Debug, PartialEq)]
pub struct WedgeSquareReport {
    pub wedge_coefficient: Surd,
    pub plus_norm_sq: Surd,
    pub minus_norm_sq: Surd,
    /// (w∧w)/dvol − (|w⁺|² − |w⁻|²).
    pub wedge_residual: Surd,
    /// |w|² − (|w⁺|² + |w⁻|²).
    pub energy_residual: Surd,
}

impl WedgeSquareReport {
    pub fn ok(&self) -> bool {
        self.wedge_residual.is_zero() && self.energy_residual.is_zero()
    }
}

pub fn wedge_square_check(g: &Metric4, w: &TwoForm) -> WedgeSquareReport {
    let w = lift(w);
    let (p, m) = sd_split_surd(g, &w);
    let plus = norm_sq(g, &p);
    let minus = norm_sq(g, &m);
    let wedge = wedge_square_coefficient(g, &w);
    let wedge_residual = wedge.sub(&plus.sub(&minus));
    let energy_residual = norm_sq(g, &w).sub(&plus.add(&minus));
    WedgeSquareReport {
        wedge_coefficient: wedge,
        plus_norm_sq: plus,
        minus_norm_sq: minus,
        wedge_residual,
        energy_residual,
    }
}

/// Dimensions of the +1 and −1 eigenspaces of the star.
pub fn eigenspace_dims(g: &Metric4) -> (usize, usize) {
    let cols: Vec<SurdForm> = (0..6)
        .map(|j| {
            let mut e: TwoForm = std::array::from_fn(|_| Q::zero());
            e[j] = Q::one();
            hodge_star2(g, &e)
        })
        .collect();
    let shifted = |sign: i64| -> Matrix<Surd> {
        (0..6)
            .map(|i| {
                (0..6)
                    .map(|j| {
                        let mut v = cols[j][i].clone();
                        if i == j {
                            v = v.sub(&Surd::rational(Q::from_integer(sign.into())));
                        }
                        v
                    })
                    .collect()
            })
            .collect()
    };
    (6 - rank(&shifted(1)), 6 - rank(&shifted(-1)))
}

/// Finite shadow of the vanishing argument: if every wᵢ is anti-self-dual and the
/// wedge-square coefficients sum to zero, then every wᵢ vanishes. Returns whether the
/// hypothesis held and, if so, whether the conclusion did.
pub fn asd_family_vanishes(g: &Metric4, family: &[SurdForm]) -> (bool, bool) {
    let mut total = Surd::zero();
    for w in family {
        let (p, _) = sd_split_surd(g, w);
        if !form_is_zero(&p) {
            return (false, true);
        }
        total = total.add(&wedge_square_coefficient(g, w));
    }
    if !total.is_zero() {
        return (false, true);
    }
    (true, family.iter().all(form_is_zero))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q_frac, q_int};
    use proptest::prelude::*;

    fn form(v: [i64; 6]) -> TwoForm {
        v.map(q_int)
    }

    fn diag(d: [i64; 4]) -> Metric4 {
        let mut g = crate::linalg::identity::<Q>(4);
        for i in 0..4 {
            g[i][i] = q_int(d[i]);
        }
        Metric4::new(g).unwrap()
    }

    #[test]
    fn standard_star() {
        let g = Metric4::identity();
        let s = hodge_star2(&g, &form([1, 0, 0, 0, 0, 0]));
        assert_eq!(s, lift(&form([0, 0, 0, 0, 0, 1])));
        // *e13 = −e24, *e14 = e23
        assert_eq!(hodge_star2(&g, &form([0, 1, 0, 0, 0, 0])), lift(&form([0, 0, 0, 0, -1, 0])));
        assert_eq!(hodge_star2(&g, &form([0, 0, 1, 0, 0, 0])), lift(&form([0, 0, 0, 1, 0, 0])));
    }

    #[test]
    fn scaled_metric_star() {
        let g = diag([4, 1, 1, 1]);
        let s = hodge_star2(&g, &form([1, 0, 0, 0, 0, 0]));
        let mut want = lift(&form([0; 6]));
        want[5] = Surd::rational(q_frac(1, 2));
        assert_eq!(s, want);
        let s = hodge_star2(&g, &form([0, 0, 0, 0, 0, 1]));
        assert_eq!(s, lift(&form([2, 0, 0, 0, 0, 0])));
    }

    #[test]
    fn irrational_volume_star_is_involution() {
        let g = diag([2, 1, 1, 1]);
        let w = form([1, 2, 3, 4, 5, 6]);
        let s = hodge_star2(&g, &w);
        assert!(s.iter().any(|c| c.as_rational().is_none()));
        assert_eq!(hodge_star2_surd(&g, &s), lift(&w));
    }

    #[test]
    fn split_examples() {
        let g = Metric4::identity();
        let (p, m) = sd_split(&g, &form([1, 0, 0, 0, 0, 1]));
        assert_eq!(p, lift(&form([1, 0, 0, 0, 0, 1])));
        assert!(form_is_zero(&m));
        let (p, _) = sd_split(&g, &form([1, 0, 0, 0, 0, -1]));
        assert!(form_is_zero(&p));
    }

    #[test]
    fn wedge_examples() {
        let g = Metric4::identity();
        let r = wedge_square_check(&g, &form([0; 6]));
        assert!(r.ok() && r.wedge_coefficient.is_zero());
        let r = wedge_square_check(&g, &form([1, 0, 0, 0, 0, 0]));
        assert!(r.ok());
        assert!(r.wedge_coefficient.is_zero());
        assert_eq!(r.plus_norm_sq, Surd::rational(q_frac(1, 2)));
        assert_eq!(r.minus_norm_sq, Surd::rational(q_frac(1, 2)));
    }

    #[test]
    fn non_definite_metric_rejected() {
        let mut g = crate::linalg::identity::<Q>(4);
        g[0][0] = q_int(-1);
        assert_eq!(Metric4::new(g), Err(CalibratedError::NotPositiveDefinite));
    }

    #[test]
    fn shadow_on_explicit_families() {
        let g = Metric4::identity();
        // Anti-self-dual forms have negative wedge coefficient, so a nonzero family cannot sum to 0.
        let asd = [lift(&form([1, 0, 0, 0, 0, -1])), lift(&form([0, 1, 0, 0, 1, 0]))];
        assert_eq!(asd_family_vanishes(&g, &asd), (false, true));
        let zero = lift(&form([0; 6]));
        assert_eq!(asd_family_vanishes(&g, &[zero.clone(), zero]), (true, true));
    }

    pub(crate) fn arb_metric() -> impl Strategy<Value = Metric4> {
        (proptest::collection::vec(-3i64..=3, 16), 1i64..4).prop_map(|(a, s)| {
            let a: Vec<Vec<Q>> = (0..4).map(|i| (0..4).map(|j| q_frac(a[4 * i + j], s)).collect()).collect();
            let at = crate::linalg::transpose(&a);
            let mut g = crate::linalg::mat_mul(&at, &a);
            for (i, row) in g.iter_mut().enumerate() {
                row[i] += q_frac(1, s);
            }
            Metric4::new(g).unwrap()
        })
    }

    fn arb_form() -> impl Strategy<Value = TwoForm> {
        proptest::collection::vec((-5i64..=5, 1i64..4), 6)
            .prop_map(|v| std::array::from_fn(|i| q_frac(v[i].0, v[i].1)))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn star_is_involution(g in arb_metric(), w in arb_form()) {
            let s = hodge_star2(&g, &w);
            prop_assert_eq!(hodge_star2_surd(&g, &s), lift(&w));
        }

        #[test]
        fn split_is_eigen_decomposition(g in arb_metric(), w in arb_form()) {
            let (p, m) = sd_split(&g, &w);
            prop_assert_eq!(form_add(&p, &m), lift(&w));
            prop_assert_eq!(hodge_star2_surd(&g, &p), p.clone());
            prop_assert_eq!(hodge_star2_surd(&g, &m), form_scale(&m, &q_int(-1)));
        }

        #[test]
        fn wedge_and_energy_identities(g in arb_metric(), w in arb_form()) {
            prop_assert!(wedge_square_check(&g, &w).ok());
        }

        #[test]
        fn eigenspaces_are_three_dimensional(g in arb_metric()) {
            prop_assert_eq!(eigenspace_dims(&g), (3, 3));
        }

        #[test]
        fn asd_shadow(g in arb_metric(), ws in proptest::collection::vec(arb_form(), 1..4)) {
            let family: Vec<SurdForm> = ws.iter().map(|w| sd_split(&g, w).1).collect();
            let (hyp, concl) = asd_family_vanishes(&g, &family);
            prop_assert!(concl);
            let nonzero = family.iter().any(|w| !form_is_zero(w));
            prop_assert_eq!(hyp, !nonzero);
        }
    }
}
