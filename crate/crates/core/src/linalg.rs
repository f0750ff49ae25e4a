//! Exact dense linear algebra over small fields (ℚ, ℚ(√d), ℚ(i)).

use num_traits::{One, Signed, Zero};

use crate::rational::Q;

/// Minimal field interface for Gaussian elimination.
pub trait Field: Clone + PartialEq {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    /// Multiplicative inverse; callers guarantee `self` is nonzero.
    fn inv(&self) -> Self;
    fn neg(&self) -> Self {
        Self::zero().sub(self)
    }
}

impl Field for Q {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn inv(&self) -> Self {
        self.recip()
    }
}

pub type Matrix<F> = Vec<Vec<F>>;

pub fn identity<F: Field>(n: usize) -> Matrix<F> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { F::one() } else { F::zero() }).collect())
        .collect()
}

pub fn transpose<F: Field>(a: &Matrix<F>) -> Matrix<F> {
    if a.is_empty() {
        return Vec::new();
    }
    (0..a[0].len()).map(|j| a.iter().map(|row| row[j].clone()).collect()).collect()
}

pub fn mat_mul<F: Field>(a: &Matrix<F>, b: &Matrix<F>) -> Matrix<F> {
    let inner = b.len();
    let cols = if inner == 0 { 0 } else { b[0].len() };
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut acc = F::zero();
                    for k in 0..inner {
                        if !row[k].is_zero() && !b[k][j].is_zero() {
                            acc = acc.add(&row[k].mul(&b[k][j]));
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

pub fn mat_vec<F: Field>(a: &Matrix<F>, v: &[F]) -> Vec<F> {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(F::zero(), |acc, (x, y)| if x.is_zero() || y.is_zero() { acc } else { acc.add(&x.mul(y)) })
        })
        .collect()
}

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref<F: Field>(a: &mut Matrix<F>) -> Vec<usize> {
    let rows = a.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = a[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].inv();
        for j in c..cols {
            a[r][j] = a[r][j].mul(&inv);
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in c..cols {
                    let t = a[r][j].mul(&f);
                    a[i][j] = a[i][j].sub(&t);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<F: Field>(a: &Matrix<F>) -> usize {
    let mut m = a.clone();
    rref(&mut m).len()
}

/// Some solution of `a · x = b`, if one exists (free variables set to zero).
pub fn solve<F: Field>(a: &Matrix<F>, b: &[F]) -> Option<Vec<F>> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut aug: Matrix<F> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    if rows == 0 {
        return Some(Vec::new());
    }
    let pivots = rref(&mut aug);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![F::zero(); cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = aug[r][cols].clone();
    }
    Some(x)
}

pub fn inverse<F: Field>(a: &Matrix<F>) -> Option<Matrix<F>> {
    let n = a.len();
    let mut aug: Matrix<F> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { F::one() } else { F::zero() }));
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(aug.into_iter().map(|row| row[n..].to_vec()).collect())
}

pub fn determinant<F: Field>(a: &Matrix<F>) -> F {
    let n = a.len();
    let mut m = a.clone();
    let mut det = F::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return F::zero();
        };
        if p != c {
            m.swap(p, c);
            det = det.neg();
        }
        det = det.mul(&m[c][c]);
        let inv = m[c][c].inv();
        for i in c + 1..n {
            if m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c].mul(&inv);
            for j in c..n {
                let t = m[c][j].mul(&f);
                m[i][j] = m[i][j].sub(&t);
            }
        }
    }
    det
}

pub fn leading_principal_minors<F: Field>(a: &Matrix<F>) -> Vec<F> {
    (1..=a.len())
        .map(|k| {
            let sub: Matrix<F> = a[..k].iter().map(|row| row[..k].to_vec()).collect();
            determinant(&sub)
        })
        .collect()
}

/// Sign of a real symmetric form given by a rational matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Definiteness {
    Positive,
    Negative,
    Indefinite,
    /// Singular matrix (including semidefinite forms).
    Degenerate,
}

/// Sylvester's criterion on leading principal minors; a vanishing minor of a nonsingular
/// matrix rules out definiteness.
pub fn definiteness(a: &Matrix<Q>) -> Definiteness {
    if Zero::is_zero(&determinant(a)) {
        return Definiteness::Degenerate;
    }
    let minors = leading_principal_minors(a);
    if minors.iter().any(Zero::is_zero) {
        return Definiteness::Indefinite;
    }
    if minors.iter().all(|m| m.is_positive()) {
        return Definiteness::Positive;
    }
    let alternating = minors
        .iter()
        .enumerate()
        .all(|(k, m)| if k % 2 == 0 { m.is_negative() } else { m.is_positive() });
    if alternating {
        Definiteness::Negative
    } else {
        Definiteness::Indefinite
    }
}
