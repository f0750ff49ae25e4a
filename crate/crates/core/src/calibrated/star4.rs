//! The conjugate-linear operator *₄ = (Ω⌟)∘* on (0,2)-forms of flat ℂ⁴.
//!
//! Forms live in the exterior algebra on dz₁..dz₄ (bits 0..3) and dz̄₁..dz̄₄ (bits 4..7)
//! with the flat metric |dzⱼ|² = |dz̄ⱼ|² = 2, volume form dvol = ∏ⱼ (i/2) dzⱼ∧dz̄ⱼ and
//! Ω = dz₁∧dz₂∧dz₃∧dz₄.

use std::collections::BTreeMap;


use super::surd::GaussQ;
use crate::linalg::{rank, Field, Matrix};
use crate::rational::{q_frac, q_int, Q};

type Form = BTreeMap<u8, GaussQ>;

/// Basis dz̄ᵢ∧dz̄ⱼ, i < j, in the same order as the real 2-form basis.
pub const ZBAR_PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// A (0,2)-form as coefficients on [`ZBAR_PAIRS`].
pub type Form02 = [GaussQ; 6];

fn zbar(j: usize) -> u8 {
    1 << (4 + j)
}

fn dz(j: usize) -> u8 {
    1 << j
}

fn pair_mask(p: (usize, usize)) -> u8 {
    zbar(p.0) | zbar(p.1)
}

/// Sign of `e_a ∧ e_b` relative to the sorted monomial `e_{a|b}`, or 0 if they overlap.
fn wedge_sign(a: u8, b: u8) -> i64 {
    if a & b != 0 {
        return 0;
    }
    let mut swaps = 0;
    for i in 0..8 {
        if b & (1 << i) != 0 {
            swaps += ((a as u32) >> (i + 1)).count_ones();
        }
    }
    if swaps % 2 == 0 {
        1
    } else {
        -1
    }
}

fn wedge(x: &Form, y: &Form) -> Form {
    let mut out = Form::new();
    for (&a, ca) in x {
        for (&b, cb) in y {
            let s = wedge_sign(a, b);
            if s == 0 {
                continue;
            }
            let c = ca.mul(cb).scale(&q_int(s));
            let e = out.entry(a | b).or_insert_with(GaussQ::zero);
            *e = e.add(&c);
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Interior product with the coordinate vector dual to generator `g`.
fn contract(g: u8, x: &Form) -> Form {
    let mut out = Form::new();
    for (&m, c) in x {
        if m & g == 0 {
            continue;
        }
        let before = (m & (g - 1)).count_ones();
        let s = if before.is_multiple_of(2) { 1 } else { -1 };
        let e = out.entry(m & !g).or_insert_with(GaussQ::zero);
        *e = e.add(&c.scale(&q_int(s)));
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn dvol() -> Form {
    let half_i = GaussQ::new(Q::zero(), q_frac(1, 2));
    let mut v = Form::from([(0u8, GaussQ::one())]);
    for j in 0..4 {
        let f = Form::from([(dz(j) | zbar(j), half_i.clone())]);
        v = wedge(&v, &f);
    }
    v
}

/// Squared norm of a basis monomial: 2 per generator.
fn mono_norm_sq(m: u8) -> Q {
    q_int(1 << m.count_ones())
}

/// Conjugate-linear Hodge star of the basis form dz̄ᵢ∧dz̄ⱼ into Λ^{4,2}, characterized by
/// α ∧ *β̄ = ⟨α, β⟩ dvol for all (0,2)-forms α.
fn star_basis(p: (usize, usize)) -> Form {
    let beta = pair_mask(p);
    let full: u8 = 0xff;
    let target = full & !beta;
    let vol = dvol()[&full].clone();
    let probe = Form::from([(beta, GaussQ::one())]);
    let cand = Form::from([(target, GaussQ::one())]);
    let top = wedge(&probe, &cand)[&full].clone();
    // c · top = |β|² · vol
    let c = GaussQ::real(mono_norm_sq(beta)).mul(&vol).mul(&top.inv());
    Form::from([(target, c)])
}

/// Ω⌟ (the adjoint of Ω∧) applied to a (4,2)-form, divided by |Ω| = 4.
///
/// The adjoint is contraction with the metric duals 2∂_{zⱼ}, so Ω⌟(Ω∧β) = |Ω|²β = 16β.
fn omega_contract(x: &Form) -> Form {
    let mut y = x.clone();
    for j in 0..4 {
        y = contract(dz(j), &y);
    }
    let scale = q_frac(16, OMEGA_NORM);
    y.into_iter().map(|(m, c)| (m, c.scale(&scale))).collect()
}

/// |Ω| in the flat metric; *₄ is normalized by 1/|Ω| so that it is an involution.
pub const OMEGA_NORM: i64 = 4;

/// The normalization constant: *₄(dz̄₁∧dz̄₂) = c · dz̄₃∧dz̄₄.
pub fn normalization_constant() -> GaussQ {
    let img = omega_contract(&star_basis((0, 1)));
    img.get(&pair_mask((2, 3))).cloned().unwrap_or_else(GaussQ::zero)
}

pub fn star4_flat(alpha: &Form02) -> Form02 {
    let mut out: Form02 = std::array::from_fn(|_| GaussQ::zero());
    for (k, &p) in ZBAR_PAIRS.iter().enumerate() {
        if alpha[k].is_zero() {
            continue;
        }
        let img = omega_contract(&star_basis(p));
        let coeff = alpha[k].conj();
        for (m, c) in img {
            let idx = ZBAR_PAIRS.iter().position(|&q| pair_mask(q) == m).expect("(0,2) output");
            out[idx] = out[idx].add(&coeff.mul(&c));
        }
    }
    out
}

pub fn basis02(k: usize) -> Form02 {
    std::array::from_fn(|i| if i == k { GaussQ::one() } else { GaussQ::zero() })
}

/// *₄ as a real-linear map on ℝ¹² = (Re, Im) coordinates of Λ^{0,2}.
pub fn real_matrix() -> Matrix<Q> {
    let mut m = vec![vec![Q::zero(); 12]; 12];
    for k in 0..6 {
        for (col, unit) in [(2 * k, GaussQ::one()), (2 * k + 1, GaussQ::new(Q::zero(), Q::one()))] {
            let mut a = basis02(k);
            a[k] = unit;
            let img = star4_flat(&a);
            for (i, c) in img.iter().enumerate() {
                m[2 * i][col] = c.re.clone();
                m[2 * i + 1][col] = c.im.clone();
            }
        }
    }
    m
}

/// Real dimensions of the +1 and −1 eigenspaces of *₄.
pub fn real_eigenspace_dims() -> (usize, usize) {
    let m = real_matrix();
    let shifted = |s: i64| -> Matrix<Q> {
        let mut a = m.clone();
        for (i, row) in a.iter_mut().enumerate() {
            row[i] -= q_int(s);
        }
        a
    };
    (12 - rank(&shifted(1)), 12 - rank(&shifted(-1)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn dvol_is_real_orientation_form() {
        // (i/2)dz∧dz̄ = dx∧dy, so dvol is real with all four factors in the standard order.
        let v = dvol();
        assert_eq!(v.len(), 1);
        let c = &v[&0xff];
        assert!(c.im.is_zero());
        assert_eq!(c.norm_sq(), q_frac(1, 256));
    }

    #[test]
    fn constant_has_unit_modulus() {
        let c = normalization_constant();
        assert_eq!(c, GaussQ::one());
        let img = star4_flat(&basis02(0));
        for (i, v) in img.iter().enumerate() {
            assert_eq!(v.is_zero(), i != 5);
        }
    }

    #[test]
    fn involution_on_basis() {
        for k in 0..6 {
            let b = basis02(k);
            assert_eq!(star4_flat(&star4_flat(&b)), b);
        }
    }

    #[test]
    fn eigenspaces_split_evenly() {
        assert_eq!(real_eigenspace_dims(), (6, 6));
    }

    fn arb02() -> impl Strategy<Value = Form02> {
        proptest::collection::vec((-4i64..=4, -4i64..=4, 1i64..4), 6)
            .prop_map(|v| std::array::from_fn(|i| GaussQ::new(q_frac(v[i].0, v[i].2), q_frac(v[i].1, v[i].2))))
    }

    proptest! {
        #[test]
        fn conjugate_linear_involution(a in arb02(), re in -3i64..3, im in -3i64..3) {
            prop_assert_eq!(star4_flat(&star4_flat(&a)), a.clone());
            let lam = GaussQ::new(q_int(re), q_int(im));
            let scaled: Form02 = std::array::from_fn(|i| a[i].mul(&lam));
            let lhs = star4_flat(&scaled);
            let rhs: Form02 = star4_flat(&a).map(|c| c.mul(&lam.conj()));
            prop_assert_eq!(lhs, rhs);
        }
    }
}
