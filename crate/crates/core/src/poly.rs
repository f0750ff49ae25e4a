//! Sparse multivariate polynomials over ℚ.
//!
//! These are the coefficients of symbolic Novikov scalars: every deformation
//! variable is a commuting indeterminate identified by a `u32`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::rational::{format_q, Q};

/// A monomial `∏ t_v^{e_v}` stored as `(v, e_v)` pairs sorted by `v`, `e_v > 0`.
///
/// Ordered graded-lexicographically, so the order is compatible with
/// multiplication.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(u32, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: u32) -> Self {
        Monomial(vec![(v, 1)])
    }

    pub fn from_pairs(mut pairs: Vec<(u32, u32)>) -> Self {
        pairs.retain(|&(_, e)| e > 0);
        pairs.sort_unstable();
        let mut merged: Vec<(u32, u32)> = Vec::with_capacity(pairs.len());
        for (v, e) in pairs {
            match merged.last_mut() {
                Some((lv, le)) if *lv == v => *le += e,
                _ => merged.push((v, e)),
            }
        }
        Monomial(merged)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn exponent(&self, v: u32) -> u32 {
        self.0
            .binary_search_by_key(&v, |&(w, _)| w)
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    pub fn pairs(&self) -> &[(u32, u32)] {
        &self.0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            let (a, b) = (self.0[i], other.0[j]);
            match a.0.cmp(&b.0) {
                Ordering::Less => {
                    out.push(a);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a.0, a.1 + b.1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    /// Removes variable `v`, returning its exponent and the remaining monomial.
    pub fn split_off(&self, v: u32) -> (u32, Monomial) {
        let mut rest = self.0.clone();
        match rest.binary_search_by_key(&v, |&(w, _)| w) {
            Ok(i) => {
                let e = rest.remove(i).1;
                (e, Monomial(rest))
            }
            Err(_) => (0, Monomial(rest)),
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.total_degree().cmp(&other.total_degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        let (mut i, mut j) = (0, 0);
        loop {
            match (self.0.get(i), other.0.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some(&(va, ea)), Some(&(vb, eb))) => match va.cmp(&vb) {
                    // `self` has a positive exponent in a smaller variable.
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => {
                        if ea != eb {
                            return ea.cmp(&eb);
                        }
                        i += 1;
                        j += 1;
                    }
                },
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial with rational coefficients; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Q>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: BTreeMap::new() }
    }

    pub fn constant(c: Q) -> Self {
        let mut p = Poly::zero();
        if !c.is_zero() {
            p.terms.insert(Monomial::one(), c);
        }
        p
    }

    pub fn one() -> Self {
        Poly::constant(Q::one())
    }

    pub fn var(v: u32) -> Self {
        Poly::monomial(Monomial::var(v), Q::one())
    }

    pub fn monomial(m: Monomial, c: Q) -> Self {
        let mut p = Poly::zero();
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    /// The value of a constant polynomial (`Some(0)` for the zero polynomial).
    pub fn as_constant(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    /// Leading monomial and coefficient in graded-lex order.
    pub fn leading(&self) -> Option<(&Monomial, &Q)> {
        self.terms.iter().next_back()
    }

    pub fn variables(&self) -> BTreeSet<u32> {
        self.terms
            .keys()
            .flat_map(|m| m.pairs().iter().map(|&(v, _)| v))
            .collect()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::total_degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, v: u32) -> u32 {
        self.terms.keys().map(|m| m.exponent(v)).max().unwrap_or(0)
    }

    fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_assign_ref(&mut self, other: &Poly) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    /// `self += c · other`.
    pub fn add_scaled(&mut self, other: &Poly, c: &Q) {
        if c.is_zero() {
            return;
        }
        for (m, d) in &other.terms {
            self.add_term(m.clone(), d * c);
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        out.add_assign_ref(other);
        out
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        out.add_scaled(other, &-Q::one());
        out
    }

    pub fn scale(&self, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, d)| (m.clone(), d * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        // Constant fast paths dominate in concrete (non-symbolic) arithmetic.
        if let Some(c) = self.single_constant() {
            return other.scale(c);
        }
        if let Some(c) = other.single_constant() {
            return self.scale(c);
        }
        let mut out = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    fn single_constant(&self) -> Option<&Q> {
        if self.terms.len() == 1 {
            self.terms.get(&Monomial::one())
        } else {
            None
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut out = Poly::one();
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Substitutes rational values for the given variables; others stay symbolic.
    pub fn substitute(&self, values: &BTreeMap<u32, Q>) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut rest = Vec::new();
            for &(v, e) in m.pairs() {
                match values.get(&v) {
                    Some(val) => coeff *= num_traits::pow(val.clone(), e as usize),
                    None => rest.push((v, e)),
                }
            }
            out.add_term(Monomial(rest), coeff);
        }
        out
    }

    /// Coefficients of `self` viewed as a polynomial in `v`: index `i` holds the
    /// coefficient of `v^i`.
    pub fn coefficients_in(&self, v: u32) -> Vec<Poly> {
        let mut out = vec![Poly::zero(); self.degree_in(v) as usize + 1];
        for (m, c) in &self.terms {
            let (e, rest) = m.split_off(v);
            out[e as usize].add_term(rest, c.clone());
        }
        out
    }

    pub fn display_with<F: Fn(u32) -> String>(&self, name: F) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (m, c) in self.terms.iter().rev() {
            let mut s = String::new();
            if m.is_one() {
                s.push_str(&format_q(c));
            } else {
                if !c.is_one() {
                    if (-c).is_one() {
                        s.push('-');
                    } else {
                        s.push_str(&format_q(c));
                        s.push('*');
                    }
                }
                let vars: Vec<String> = m
                    .pairs()
                    .iter()
                    .map(|&(v, e)| {
                        if e == 1 {
                            name(v)
                        } else {
                            format!("{}^{}", name(v), e)
                        }
                    })
                    .collect();
                s.push_str(&vars.join("*"));
            }
            parts.push(s);
        }
        parts.join(" + ")
    }

    pub fn is_negative_constant(&self) -> bool {
        self.as_constant().map(|c| c.is_negative()).unwrap_or(false)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with(|v| format!("t{v}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q_int;

    #[test]
    fn grlex_is_multiplicative() {
        let a = Monomial::from_pairs(vec![(0, 2)]);
        let b = Monomial::from_pairs(vec![(0, 1), (1, 1)]);
        let c = Monomial::from_pairs(vec![(2, 1)]);
        assert!(a > b);
        assert!(a.mul(&c) > b.mul(&c));
        assert!(Monomial::var(0) > Monomial::var(1));
        assert!(Monomial::var(5) > Monomial::one());
    }

    #[test]
    fn difference_of_squares() {
        let x = Poly::var(0);
        let y = Poly::var(1);
        let lhs = x.add(&y).mul(&x.sub(&y));
        let rhs = x.mul(&x).sub(&y.mul(&y));
        assert_eq!(lhs, rhs);
        assert!(lhs.sub(&rhs).is_zero());
    }

    #[test]
    fn substitution_and_coefficients() {
        let x = Poly::var(0);
        let y = Poly::var(1);
        let p = x.mul(&x).mul(&y).add(&Poly::constant(q_int(3)));
        let mut vals = BTreeMap::new();
        vals.insert(0, q_int(2));
        assert_eq!(p.substitute(&vals), y.scale(&q_int(4)).add(&Poly::constant(q_int(3))));
        let coeffs = p.coefficients_in(0);
        assert_eq!(coeffs.len(), 3);
        assert_eq!(coeffs[2], y);
        assert_eq!(coeffs[0], Poly::constant(q_int(3)));
    }
}
