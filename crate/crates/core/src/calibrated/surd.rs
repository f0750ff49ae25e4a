//! Exact arithmetic in ℚ(√d) and ℚ(i).

use std::fmt;

use num_traits::Signed;

use crate::linalg::Field;
use crate::rational::{format_q, q_sqrt_exact, q_to_f64, Q};

/// `a + b√d`. Pure rationals carry `d = 0`; a perfect-square `d` is folded into `a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Surd {
    a: Q,
    b: Q,
    d: Q,
}

impl Surd {
    pub fn rational(a: Q) -> Self {
        Surd { a, b: Q::zero(), d: Q::zero() }
    }

    /// `a + b√d` for `d ≥ 0`.
    pub fn new(a: Q, b: Q, d: Q) -> Self {
        assert!(!d.is_negative(), "negative radicand");
        if b.is_zero() || d.is_zero() {
            return Surd::rational(a);
        }
        if let Some(r) = q_sqrt_exact(&d) {
            return Surd::rational(a + b * r);
        }
        Surd { a, b, d }
    }

    /// `√d`.
    pub fn sqrt(d: Q) -> Self {
        Surd::new(Q::zero(), Q::one(), d)
    }

    pub fn rational_part(&self) -> &Q {
        &self.a
    }

    pub fn surd_part(&self) -> &Q {
        &self.b
    }

    pub fn radicand(&self) -> &Q {
        &self.d
    }

    pub fn as_rational(&self) -> Option<&Q> {
        if self.b.is_zero() {
            Some(&self.a)
        } else {
            None
        }
    }

    fn common_d(&self, o: &Surd) -> Q {
        match (self.b.is_zero(), o.b.is_zero()) {
            (true, _) => o.d.clone(),
            (_, true) => self.d.clone(),
            _ => {
                assert_eq!(self.d, o.d, "mixing different quadratic fields");
                self.d.clone()
            }
        }
    }

    pub fn scale(&self, q: &Q) -> Surd {
        Surd::new(&self.a * q, &self.b * q, self.d.clone())
    }

    pub fn to_f64(&self) -> f64 {
        q_to_f64(&self.a) + q_to_f64(&self.b) * q_to_f64(&self.d).sqrt()
    }
}

impl Field for Surd {
    fn zero() -> Self {
        Surd::rational(Q::zero())
    }
    fn one() -> Self {
        Surd::rational(Q::one())
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        let d = self.common_d(o);
        Surd::new(&self.a + &o.a, &self.b + &o.b, d)
    }
    fn sub(&self, o: &Self) -> Self {
        let d = self.common_d(o);
        Surd::new(&self.a - &o.a, &self.b - &o.b, d)
    }
    fn mul(&self, o: &Self) -> Self {
        let d = self.common_d(o);
        let a = &self.a * &o.a + &self.b * &o.b * &d;
        let b = &self.a * &o.b + &self.b * &o.a;
        Surd::new(a, b, d)
    }
    fn inv(&self) -> Self {
        // (a − b√d) / (a² − b²d); the norm is nonzero because √d is irrational.
        let n = &self.a * &self.a - &self.b * &self.b * &self.d;
        Surd::new(&self.a / &n, -&self.b / &n, self.d.clone())
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", format_q(&self.a))
        } else {
            write!(f, "{} + {}*sqrt({})", format_q(&self.a), format_q(&self.b), format_q(&self.d))
        }
    }
}

/// Gaussian rational `re + i·im`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaussQ {
    pub re: Q,
    pub im: Q,
}

impl GaussQ {
    pub fn new(re: Q, im: Q) -> Self {
        GaussQ { re, im }
    }

    pub fn real(re: Q) -> Self {
        GaussQ { re, im: Q::zero() }
    }

    pub fn i() -> Self {
        GaussQ { re: Q::zero(), im: Q::one() }
    }

    pub fn conj(&self) -> Self {
        GaussQ { re: self.re.clone(), im: -&self.im }
    }

    pub fn norm_sq(&self) -> Q {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn scale(&self, q: &Q) -> Self {
        GaussQ { re: &self.re * q, im: &self.im * q }
    }
}

impl Field for GaussQ {
    fn zero() -> Self {
        GaussQ::real(Q::zero())
    }
    fn one() -> Self {
        GaussQ::real(Q::one())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        GaussQ { re: &self.re + &o.re, im: &self.im + &o.im }
    }
    fn sub(&self, o: &Self) -> Self {
        GaussQ { re: &self.re - &o.re, im: &self.im - &o.im }
    }
    fn mul(&self, o: &Self) -> Self {
        GaussQ { re: &self.re * &o.re - &self.im * &o.im, im: &self.re * &o.im + &self.im * &o.re }
    }
    fn inv(&self) -> Self {
        let n = self.norm_sq();
        GaussQ { re: &self.re / &n, im: -&self.im / &n }
    }
}

impl fmt::Display for GaussQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}i", format_q(&self.re), format_q(&self.im))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q_frac, q_int};

    #[test]
    fn surd_field_ops() {
        let r2 = Surd::sqrt(q_int(2));
        assert_eq!(r2.mul(&r2), Surd::rational(q_int(2)));
        let x = Surd::new(q_int(1), q_int(1), q_int(2));
        assert_eq!(x.mul(&x.inv()), Surd::one());
        assert_eq!(Surd::sqrt(q_frac(9, 4)), Surd::rational(q_frac(3, 2)));
        assert!((x.to_f64() - (1.0 + 2f64.sqrt())).abs() < 1e-12);
    }

    #[test]
    fn gauss_ops() {
        let i = GaussQ::i();
        assert_eq!(i.mul(&i), GaussQ::real(q_int(-1)));
        let z = GaussQ::new(q_int(3), q_int(4));
        assert_eq!(z.mul(&z.inv()), GaussQ::one());
        assert_eq!(z.norm_sq(), q_int(25));
    }
}
