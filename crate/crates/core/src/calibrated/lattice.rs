//! Definite unimodular integer forms and their diagonalization by norm-one vectors.

use rand::Rng;

use super::CalibratedError;
use crate::linalg::{definiteness, determinant, Definiteness, Matrix};
use crate::rational::{q_int, Q};

pub type IntMatrix = Vec<Vec<i64>>;

fn to_q(f: &IntMatrix) -> Matrix<Q> {
    f.iter().map(|r| r.iter().map(|&x| q_int(x)).collect()).collect()
}

fn check_symmetric(f: &IntMatrix) -> Result<(), CalibratedError> {
    let n = f.len();
    if f.iter().any(|r| r.len() != n) {
        return Err(CalibratedError::Shape("form must be square".into()));
    }
    for i in 0..n {
        for j in 0..n {
            if f[i][j] != f[j][i] {
                return Err(CalibratedError::NotSymmetric);
            }
        }
    }
    Ok(())
}

/// Sign of definiteness via leading principal minors.
pub fn is_definite(f: &IntMatrix) -> Result<Definiteness, CalibratedError> {
    check_symmetric(f)?;
    Ok(definiteness(&to_q(f)))
}

fn bilinear(f: &IntMatrix, x: &[i64], y: &[i64]) -> i128 {
    let mut s = 0i128;
    for (i, xi) in x.iter().enumerate() {
        for (j, yj) in y.iter().enumerate() {
            s += (*xi as i128) * (f[i][j] as i128) * (*yj as i128);
        }
    }
    s
}

/// All x with xᵀFx = 1 for positive-definite F, up to sign (first nonzero entry positive),
/// sparsest first, then by position of the leading entry, then lexicographically. Uses Fincke–Pohst enumeration on the Cholesky form.
pub fn norm_one_vectors(f: &IntMatrix) -> Vec<Vec<i64>> {
    let n = f.len();
    // q[i][i] = dᵢ, q[i][j] = μ_ij (j > i) with xᵀFx = Σ dᵢ (xᵢ + Σ_{j>i} μ_ij xⱼ)².
    let mut q = vec![vec![0f64; n]; n];
    for i in 0..n {
        for j in 0..n {
            q[i][j] = f[i][j] as f64;
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            q[j][i] = q[i][j];
            q[i][j] /= q[i][i];
        }
        for k in i + 1..n {
            for l in k..n {
                q[k][l] -= q[k][i] * q[i][l];
            }
        }
    }
    let bound = 1.0 + 1e-6;
    let mut out = Vec::new();
    let mut x = vec![0i64; n];
    fn rec(i: usize, rem: f64, q: &[Vec<f64>], x: &mut Vec<i64>, f: &IntMatrix, out: &mut Vec<Vec<i64>>, n: usize) {
        let c: f64 = -(i + 1..n).map(|j| q[i][j] * x[j] as f64).sum::<f64>();
        let r = (rem / q[i][i]).max(0.0).sqrt();
        let lo = (c - r - 1e-9).ceil() as i64;
        let hi = (c + r + 1e-9).floor() as i64;
        for v in lo..=hi {
            x[i] = v;
            let t = v as f64 - c;
            let left = rem - q[i][i] * t * t;
            if left < -1e-9 {
                continue;
            }
            if i == 0 {
                if x.iter().any(|&e| e != 0) && bilinear(f, x, x) == 1 {
                    out.push(x.clone());
                }
            } else {
                rec(i - 1, left, q, x, f, out, n);
            }
        }
        x[i] = 0;
    }
    if n > 0 {
        rec(n - 1, bound, &q, &mut x, f, &mut out, n);
    }
    let mut canon: Vec<Vec<i64>> = out
        .into_iter()
        .filter(|v| v.iter().find(|&&e| e != 0).is_some_and(|&e| e > 0))
        .collect();
    canon.sort_by_key(|v| {
        let nnz = v.iter().filter(|&&e| e != 0).count();
        let first = v.iter().position(|&e| e != 0).unwrap_or(0);
        (nnz, first, v.clone())
    });
    canon.dedup();
    canon
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagonalization {
    /// Columns are the new basis vectors.
    pub u: IntMatrix,
    /// +1 if UᵀFU = I, −1 if UᵀFU = −I.
    pub sign: i64,
}

/// Integer U with UᵀFU = ±I, built from pairwise orthogonal norm-one vectors.
pub fn diagonalize_definite(f: &IntMatrix) -> Result<Diagonalization, CalibratedError> {
    check_symmetric(f)?;
    let det = determinant(&to_q(f));
    if det != q_int(1) && det != q_int(-1) {
        return Err(CalibratedError::NotUnimodular(crate::rational::format_q(&det)));
    }
    let sign = match definiteness(&to_q(f)) {
        Definiteness::Positive => 1,
        Definiteness::Negative => -1,
        _ => return Err(CalibratedError::NotDefinite),
    };
    let pos: IntMatrix = f.iter().map(|r| r.iter().map(|&x| x * sign).collect()).collect();
    let n = f.len();
    let mut chosen: Vec<Vec<i64>> = Vec::new();
    for v in norm_one_vectors(&pos) {
        if chosen.iter().all(|c| bilinear(&pos, c, &v) == 0) {
            chosen.push(v);
            if chosen.len() == n {
                break;
            }
        }
    }
    if chosen.len() < n {
        return Err(CalibratedError::NotFound);
    }
    let u: IntMatrix = (0..n).map(|i| (0..n).map(|j| chosen[j][i]).collect()).collect();
    debug_assert_eq!(congruence(f, &u), scalar(n, sign));
    Ok(Diagonalization { u, sign })
}

fn scalar(n: usize, s: i64) -> IntMatrix {
    (0..n).map(|i| (0..n).map(|j| if i == j { s } else { 0 }).collect()).collect()
}

/// UᵀFU.
pub fn congruence(f: &IntMatrix, u: &IntMatrix) -> IntMatrix {
    let n = f.len();
    let col = |j: usize| -> Vec<i64> { (0..n).map(|i| u[i][j]).collect() };
    (0..n).map(|i| (0..n).map(|j| bilinear(f, &col(i), &col(j)) as i64).collect()).collect()
}

/// Random element of GL_k(ℤ) as a product of elementary matrices and sign flips.
pub fn random_unimodular<R: Rng>(rng: &mut R, k: usize, steps: usize) -> IntMatrix {
    let mut u = scalar(k, 1);
    if k < 2 {
        if rng.gen_bool(0.5) && k == 1 {
            u[0][0] = -1;
        }
        return u;
    }
    for _ in 0..steps {
        let i = rng.gen_range(0..k);
        let mut j = rng.gen_range(0..k - 1);
        if j >= i {
            j += 1;
        }
        let c = rng.gen_range(-2..=2);
        // row_i += c · row_j
        for col in 0..k {
            u[i][col] += c * u[j][col];
        }
        if rng.gen_ratio(1, 6) {
            for v in u[i].iter_mut() {
                *v = -*v;
            }
        }
    }
    u
}

/// ±UᵀU for a random U ∈ GL_k(ℤ).
pub fn random_conjugate_of_identity<R: Rng>(rng: &mut R, k: usize, sign: i64) -> IntMatrix {
    let u = random_unimodular(rng, k, 3 * k);
    congruence(&scalar(k, sign), &u)
}

/// The E8 form: even, unimodular, positive definite, with no norm-one vectors.
pub fn e8() -> IntMatrix {
    let mut f = scalar(8, 2);
    let edges = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (2, 7)];
    for (a, b) in edges {
        f[a][b] = -1;
        f[b][a] = -1;
    }
    f
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::rng;

    #[test]
    fn definiteness_examples() {
        assert_eq!(is_definite(&scalar(3, 1)).unwrap(), Definiteness::Positive);
        assert_eq!(is_definite(&vec![vec![1, 0], vec![0, -1]]).unwrap(), Definiteness::Indefinite);
        assert_eq!(is_definite(&vec![vec![2, 1], vec![1, 1]]).unwrap(), Definiteness::Positive);
        assert_eq!(is_definite(&scalar(2, -1)).unwrap(), Definiteness::Negative);
    }

    #[test]
    fn identity_is_fixed() {
        let d = diagonalize_definite(&scalar(2, 1)).unwrap();
        assert_eq!(d.u, scalar(2, 1));
        assert_eq!(d.sign, 1);
    }

    #[test]
    fn two_by_two_example() {
        let f = vec![vec![2, 1], vec![1, 1]];
        let d = diagonalize_definite(&f).unwrap();
        assert_eq!(d.u, vec![vec![0, 1], vec![1, -1]]);
        assert_eq!(congruence(&f, &d.u), scalar(2, 1));
    }

    #[test]
    fn error_cases() {
        assert!(matches!(diagonalize_definite(&vec![vec![2, 0], vec![0, 1]]), Err(CalibratedError::NotUnimodular(_))));
        assert_eq!(diagonalize_definite(&vec![vec![0, 1], vec![1, 0]]), Err(CalibratedError::NotDefinite));
        assert_eq!(diagonalize_definite(&e8()), Err(CalibratedError::NotFound));
        assert_eq!(determinant(&to_q(&e8())), q_int(1));
    }

    #[test]
    fn random_conjugates_round_trip() {
        let mut r = rng(5);
        for k in 1..=4 {
            for sign in [1, -1] {
                for _ in 0..5 {
                    let f = random_conjugate_of_identity(&mut r, k, sign);
                    let d = diagonalize_definite(&f).unwrap();
                    assert_eq!(d.sign, sign);
                    assert_eq!(congruence(&f, &d.u), scalar(k, sign));
                    let det = determinant(&to_q(&d.u));
                    assert!(det == q_int(1) || det == q_int(-1));
                }
            }
        }
    }

    #[test]
    fn norm_one_vectors_of_identity() {
        let v = norm_one_vectors(&scalar(3, 1));
        assert_eq!(v, vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
    }
}
