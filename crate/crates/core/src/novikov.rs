//! Truncated universal Novikov ring.
//!
//! A [`Nov`] is a finite sum `Σ aᵢ T^{λᵢ} e^{nᵢ}` with `λᵢ ∈ ℚ≥0`, `nᵢ ∈ ℤ`, kept
//! modulo `T^E` for a fixed energy cutoff `E`. Coefficients are polynomials
//! over ℚ in deformation variables; a concrete scalar simply has constant
//! coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use thiserror::Error;

use crate::poly::Poly;
use crate::rational::{format_energy, format_q, parse_energy, parse_q, Energy, Q};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NovikovError {
    #[error("cutoff mismatch: {0} vs {1}")]
    CutoffMismatch(String, String),
    #[error("negative energy exponent {0}")]
    NegativeEnergy(String),
    #[error("leading term of the zero scalar")]
    ZeroInput,
    #[error("cannot raise cutoff from {from} to {to}")]
    CutoffIncrease { from: String, to: String },
    #[error("cannot parse Novikov scalar {text:?}: {reason}")]
    Parse { text: String, reason: String },
}

/// Energy valuation: the minimal `T`-exponent, `Infinite` for zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Valuation {
    Finite(Energy),
    Infinite,
}

impl Valuation {
    pub fn is_positive(&self) -> bool {
        match self {
            Valuation::Finite(e) => *e > Energy::zero(),
            Valuation::Infinite => true,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(e) => write!(f, "{}", format_energy(e)),
            Valuation::Infinite => write!(f, "inf"),
        }
    }
}

/// Term key: `(λ, e-power)`, ordered lexicographically.
pub type TermKey = (Energy, i64);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Nov {
    terms: BTreeMap<TermKey, Poly>,
    cutoff: Energy,
}

impl Nov {
    pub fn zero(cutoff: Energy) -> Self {
        Nov { terms: BTreeMap::new(), cutoff }
    }

    pub fn one(cutoff: Energy) -> Self {
        Nov::constant(Q::one(), cutoff)
    }

    pub fn constant(c: Q, cutoff: Energy) -> Self {
        Nov::term(Poly::constant(c), Energy::zero(), 0, cutoff)
    }

    /// `c · T^λ · e^n`. Panics if `λ < 0`; use [`Nov::try_term`] on untrusted input.
    pub fn term(c: Poly, lambda: Energy, e_power: i64, cutoff: Energy) -> Self {
        Nov::try_term(c, lambda, e_power, cutoff).expect("negative energy exponent")
    }

    pub fn try_term(c: Poly, lambda: Energy, e_power: i64, cutoff: Energy) -> Result<Self, NovikovError> {
        if lambda < Energy::zero() {
            return Err(NovikovError::NegativeEnergy(format_energy(&lambda)));
        }
        let mut out = Nov::zero(cutoff);
        out.add_term((lambda, e_power), c);
        Ok(out)
    }

    pub fn q_term(c: Q, lambda: Energy, e_power: i64, cutoff: Energy) -> Self {
        Nov::term(Poly::constant(c), lambda, e_power, cutoff)
    }

    /// `T^λ`.
    pub fn t_pow(lambda: Energy, cutoff: Energy) -> Self {
        Nov::term(Poly::one(), lambda, 0, cutoff)
    }

    pub fn cutoff(&self) -> Energy {
        self.cutoff
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&(Energy::zero(), 0))
                .map(|p| p.as_constant().map(|c| c.is_one()).unwrap_or(false))
                .unwrap_or(false)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TermKey, &Poly)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, key: &TermKey) -> Poly {
        self.terms.get(key).cloned().unwrap_or_default()
    }

    fn add_term(&mut self, key: TermKey, c: Poly) {
        if c.is_zero() || key.0 >= self.cutoff {
            return;
        }
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                e.get_mut().add_assign_ref(&c);
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn check_cutoff(&self, other: &Nov) -> Result<(), NovikovError> {
        if self.cutoff != other.cutoff {
            return Err(NovikovError::CutoffMismatch(
                format_energy(&self.cutoff),
                format_energy(&other.cutoff),
            ));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Nov) -> Result<Nov, NovikovError> {
        self.check_cutoff(other)?;
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(*k, c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Nov) -> Result<Nov, NovikovError> {
        self.check_cutoff(other)?;
        let mut out = Nov::zero(self.cutoff);
        for (&(la, na), ca) in &self.terms {
            for (&(lb, nb), cb) in &other.terms {
                let l = la + lb;
                if l >= self.cutoff {
                    // Terms are sorted by energy, so later ones are larger still.
                    break;
                }
                out.add_term((l, na + nb), ca.mul(cb));
            }
        }
        Ok(out)
    }

    /// In-place `self += other`; panics on cutoff mismatch.
    pub fn add_assign_ref(&mut self, other: &Nov) {
        assert_eq!(self.cutoff, other.cutoff, "cutoff mismatch");
        for (k, c) in &other.terms {
            self.add_term(*k, c.clone());
        }
    }

    /// In-place `self += c · other`.
    pub fn add_scaled_q(&mut self, other: &Nov, c: &Q) {
        assert_eq!(self.cutoff, other.cutoff, "cutoff mismatch");
        if c.is_zero() {
            return;
        }
        for (k, p) in &other.terms {
            self.add_term(*k, p.scale(c));
        }
    }

    pub fn scale_q(&self, c: &Q) -> Nov {
        if c.is_zero() {
            return Nov::zero(self.cutoff);
        }
        Nov {
            terms: self.terms.iter().map(|(k, p)| (*k, p.scale(c))).collect(),
            cutoff: self.cutoff,
        }
    }

    pub fn pow(&self, e: u32) -> Nov {
        let mut out = Nov::one(self.cutoff);
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    pub fn valuation(&self) -> Valuation {
        match self.terms.keys().next() {
            Some(&(l, _)) => Valuation::Finite(l),
            None => Valuation::Infinite,
        }
    }

    /// True iff every term has strictly positive energy (the maximal ideal Λ⁺).
    pub fn is_plus(&self) -> bool {
        self.valuation().is_positive()
    }

    /// The lexicographically minimal term `(λ, n, coefficient)`.
    pub fn leading_term(&self) -> Result<(Energy, i64, &Poly), NovikovError> {
        self.terms
            .iter()
            .next()
            .map(|(&(l, n), c)| (l, n, c))
            .ok_or(NovikovError::ZeroInput)
    }

    /// Drops every term at or above a (smaller or equal) cutoff.
    pub fn truncate(&self, cutoff: Energy) -> Result<Nov, NovikovError> {
        if cutoff > self.cutoff {
            return Err(NovikovError::CutoffIncrease {
                from: format_energy(&self.cutoff),
                to: format_energy(&cutoff),
            });
        }
        Ok(Nov {
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| k.0 < cutoff)
                .map(|(k, c)| (*k, c.clone()))
                .collect(),
            cutoff,
        })
    }

    /// Reinterprets the scalar at a higher cutoff. Only meaningful for data that
    /// is exact (not the result of truncation), e.g. user-supplied constants.
    pub fn lift_exact(&self, cutoff: Energy) -> Nov {
        Nov { terms: self.terms.clone(), cutoff }
    }

    pub fn substitute(&self, values: &BTreeMap<u32, Q>) -> Nov {
        let mut out = Nov::zero(self.cutoff);
        for (k, c) in &self.terms {
            out.add_term(*k, c.substitute(values));
        }
        out
    }

    /// True iff all coefficients are rational constants.
    pub fn is_concrete(&self) -> bool {
        self.terms.values().all(Poly::is_constant)
    }

    /// The rational value when the scalar is `q · T⁰e⁰` (or zero).
    pub fn as_rational(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::zero()),
            1 => self.terms.get(&(Energy::zero(), 0)).and_then(Poly::as_constant),
            _ => None,
        }
    }

    pub fn display_with<F: Fn(u32) -> String + Copy>(&self, name: F) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        self.terms
            .iter()
            .map(|(&(l, n), c)| {
                let coeff = match c.as_constant() {
                    Some(q) => format_q(&q),
                    None => format!("({})", c.display_with(name)),
                };
                format!("{}*T^({})*e^{}", coeff, format_energy(&l), n)
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// Parses the canonical rendering `a*T^(p/q)*e^n + ...`. Factors may be
    /// omitted (`T^(1/2)`, `3`, `2*e^-1`); coefficients must be rational.
    pub fn parse(text: &str, cutoff: Energy) -> Result<Nov, NovikovError> {
        let err = |reason: &str| NovikovError::Parse { text: text.to_string(), reason: reason.to_string() };
        let trimmed = text.trim();
        if trimmed.is_empty() {
            return Err(err("empty"));
        }
        let mut out = Nov::zero(cutoff);
        if trimmed == "0" {
            return Ok(out);
        }
        for raw_term in trimmed.split('+') {
            let raw_term = raw_term.trim();
            if raw_term.is_empty() {
                return Err(err("empty term"));
            }
            let mut coeff = Q::one();
            let mut lambda = Energy::zero();
            let mut e_power = 0i64;
            let mut seen_coeff = false;
            for factor in raw_term.split('*') {
                let factor = factor.trim();
                if let Some(rest) = factor.strip_prefix('T') {
                    let exp = if rest.is_empty() {
                        "1".to_string()
                    } else {
                        let rest = rest.strip_prefix('^').ok_or_else(|| err("expected T^(λ)"))?;
                        strip_parens(rest).to_string()
                    };
                    let l = parse_energy(&exp).map_err(|e| err(&e.to_string()))?;
                    if l < Energy::zero() {
                        return Err(NovikovError::NegativeEnergy(format_energy(&l)));
                    }
                    lambda += l;
                } else if let Some(rest) = factor.strip_prefix('e') {
                    let exp = if rest.is_empty() {
                        "1".to_string()
                    } else {
                        let rest = rest.strip_prefix('^').ok_or_else(|| err("expected e^n"))?;
                        strip_parens(rest).to_string()
                    };
                    let n: i64 = exp.parse().map_err(|_| err("e-power must be an integer"))?;
                    e_power += n;
                } else {
                    if seen_coeff {
                        return Err(err("more than one coefficient in a term"));
                    }
                    coeff = parse_q(factor).map_err(|e| err(&e.to_string()))?;
                    seen_coeff = true;
                }
            }
            out.add_term((lambda, e_power), Poly::constant(coeff));
        }
        Ok(out)
    }
}

fn strip_parens(s: &str) -> &str {
    s.strip_prefix('(').and_then(|r| r.strip_suffix(')')).unwrap_or(s)
}

impl fmt::Display for Nov {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with(|v| format!("t{v}")))
    }
}

impl Add for &Nov {
    type Output = Nov;
    fn add(self, rhs: &Nov) -> Nov {
        self.checked_add(rhs).expect("cutoff mismatch")
    }
}

impl Sub for &Nov {
    type Output = Nov;
    fn sub(self, rhs: &Nov) -> Nov {
        self.checked_add(&-rhs).expect("cutoff mismatch")
    }
}

impl Mul for &Nov {
    type Output = Nov;
    fn mul(self, rhs: &Nov) -> Nov {
        self.checked_mul(rhs).expect("cutoff mismatch")
    }
}

impl Neg for &Nov {
    type Output = Nov;
    fn neg(self) -> Nov {
        Nov {
            terms: self.terms.iter().map(|(k, c)| (*k, c.neg())).collect(),
            cutoff: self.cutoff,
        }
    }
}

/// `nov_add`: termwise sum, renormalized.
pub fn nov_add(a: &Nov, b: &Nov) -> Result<Nov, NovikovError> {
    a.checked_add(b)
}

/// `nov_mul`: convolution with truncation at the shared cutoff.
pub fn nov_mul(a: &Nov, b: &Nov) -> Result<Nov, NovikovError> {
    a.checked_mul(b)
}
