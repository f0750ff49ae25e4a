//! Cayley-form checks on oriented 4-planes in ℝ⁸ ≅ ℂ⁴.
//!
//! Coordinates are (x₁, y₁, …, x₄, y₄) with zⱼ = xⱼ + i·yⱼ, ω = Σ dxⱼ∧dyⱼ and
//! Ω = dz₁∧dz₂∧dz₃∧dz₄. The Cayley form is Φ = Re Ω − ½ω∧ω.

use rand::Rng;

use super::hodge::{norm_sq, sd_split, Metric4, TwoForm};
use super::surd::GaussQ;
use super::CalibratedError;
use crate::linalg::{determinant, inverse, mat_mul, rank, Field, Matrix};
use crate::rational::{q_frac, q_int, q_to_f64, Q};

/// Tolerance for the floating-point part of the Cayley check.
pub const CAYLEY_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct FourPlane {
    pub vectors: [[Q; 8]; 4],
    /// +1 keeps the orientation of the spanning frame, −1 reverses it.
    pub orientation: i8,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CayleyReport {
    /// |(ω|_P)⁺| in the induced metric.
    pub omega_plus_norm: f64,
    /// Im Ω(P) / vol(P).
    pub im_omega_value: f64,
    /// Re Ω(P) / vol(P).
    pub re_omega_value: f64,
    /// Φ(P) / vol(P).
    pub calibration_value: f64,
    /// 1 − Φ(P)/vol(P).
    pub cayley_calibration_gap: f64,
}

impl CayleyReport {
    pub fn is_cayley(&self) -> bool {
        self.cayley_calibration_gap.abs() < CAYLEY_TOLERANCE
    }

    /// (ω|_P)⁺ = 0 and Im Ω|_P = 0.
    pub fn is_special_asd(&self) -> bool {
        self.omega_plus_norm < CAYLEY_TOLERANCE && self.im_omega_value.abs() < CAYLEY_TOLERANCE
    }

    /// The literal equivalence: gap 0 ⟺ special ASD.
    pub fn biconditional_holds(&self) -> bool {
        self.is_cayley() == self.is_special_asd()
    }

    /// The equivalence with the orientation condition Re Ω|_P ≥ 0 added to the right side.
    pub fn oriented_biconditional_holds(&self) -> bool {
        self.is_cayley() == (self.is_special_asd() && self.re_omega_value > -CAYLEY_TOLERANCE)
    }
}

impl FourPlane {
    pub fn new(vectors: [[Q; 8]; 4], orientation: i8) -> Result<Self, CalibratedError> {
        if orientation != 1 && orientation != -1 {
            return Err(CalibratedError::Shape("orientation must be +1 or -1".into()));
        }
        let m: Matrix<Q> = vectors.iter().map(|v| v.to_vec()).collect();
        let r = rank(&m);
        if r != 4 {
            return Err(CalibratedError::DegeneratePlane(r));
        }
        Ok(FourPlane { vectors, orientation })
    }

    fn z(&self, a: usize, j: usize) -> GaussQ {
        GaussQ::new(self.vectors[a][2 * j].clone(), self.vectors[a][2 * j + 1].clone())
    }

    /// Gram matrix of the spanning frame.
    pub fn gram(&self) -> Matrix<Q> {
        (0..4)
            .map(|a| {
                (0..4)
                    .map(|b| {
                        let mut s = Q::zero();
                        for k in 0..8 {
                            s += &self.vectors[a][k] * &self.vectors[b][k];
                        }
                        s
                    })
                    .collect()
            })
            .collect()
    }

    /// ω(v_a, v_b) as a 2-form in the frame basis.
    pub fn omega_restricted(&self) -> TwoForm {
        let w = |a: usize, b: usize| {
            let mut s = Q::zero();
            for j in 0..4 {
                s += &self.vectors[a][2 * j] * &self.vectors[b][2 * j + 1]
                    - &self.vectors[a][2 * j + 1] * &self.vectors[b][2 * j];
            }
            s
        };
        super::hodge::PAIRS.map(|(a, b)| w(a, b))
    }

    /// Ω(v₁, …, v₄) = det[zⱼ(v_a)], times the orientation flag.
    pub fn omega_value(&self) -> GaussQ {
        let z: Matrix<GaussQ> = (0..4).map(|j| (0..4).map(|a| self.z(a, j)).collect()).collect();
        determinant(&z).scale(&q_int(self.orientation as i64))
    }

    /// ½ω∧ω(v₁, …, v₄) = pf(ω_ab), times the orientation flag.
    pub fn half_omega_squared(&self) -> Q {
        let w = self.omega_restricted();
        let pf = &w[0] * &w[5] - &w[1] * &w[4] + &w[2] * &w[3];
        pf * q_int(self.orientation as i64)
    }

    /// Image under a complex-linear map of ℂ⁴.
    pub fn transform(&self, u: &Matrix<GaussQ>) -> FourPlane {
        let vectors = std::array::from_fn(|a| {
            let z: Vec<GaussQ> = (0..4).map(|j| self.z(a, j)).collect();
            let mut out: [Q; 8] = std::array::from_fn(|_| Q::zero());
            for j in 0..4 {
                let mut s = GaussQ::zero();
                for (k, zk) in z.iter().enumerate() {
                    s = s.add(&u[j][k].mul(zk));
                }
                out[2 * j] = s.re;
                out[2 * j + 1] = s.im;
            }
            out
        });
        FourPlane { vectors, orientation: self.orientation }
    }
}

pub fn cayley_check(p: &FourPlane) -> Result<CayleyReport, CalibratedError> {
    let gram = p.gram();
    let metric = Metric4::new(gram.clone()).map_err(|_| CalibratedError::DegeneratePlane(rank(&gram)))?;
    let vol = q_to_f64(metric.det()).sqrt();
    let (plus, _) = sd_split(&metric, &p.omega_restricted());
    // Reversing the orientation negates the star, exchanging the SD and ASD parts.
    let plus_sq = if p.orientation == 1 {
        norm_sq(&metric, &plus)
    } else {
        let (_, minus) = sd_split(&metric, &p.omega_restricted());
        norm_sq(&metric, &minus)
    };
    let omega = p.omega_value();
    let phi = &omega.re - p.half_omega_squared();
    let calibration_value = q_to_f64(&phi) / vol;
    Ok(CayleyReport {
        omega_plus_norm: plus_sq.to_f64().max(0.0).sqrt(),
        im_omega_value: q_to_f64(&omega.im) / vol,
        re_omega_value: q_to_f64(&omega.re) / vol,
        calibration_value,
        cayley_calibration_gap: 1.0 - calibration_value,
    })
}

fn unit(k: usize) -> [Q; 8] {
    std::array::from_fn(|i| if i == k { Q::one() } else { Q::zero() })
}

/// The real slice {y = 0}.
pub fn real_slice() -> FourPlane {
    FourPlane::new([unit(0), unit(2), unit(4), unit(6)], 1).expect("rank 4")
}

/// The complex plane {z₃ = z₄ = 0} with its complex orientation.
pub fn complex_plane() -> FourPlane {
    FourPlane::new([unit(0), unit(1), unit(2), unit(3)], 1).expect("rank 4")
}

/// A rational element of SU(4): Cayley transform of a random skew-Hermitian matrix with the
/// first column rescaled by the conjugate determinant.
pub fn random_su4<R: Rng>(rng: &mut R) -> Matrix<GaussQ> {
    let mut a: Matrix<GaussQ> = vec![vec![GaussQ::zero(); 4]; 4];
    let r = |rng: &mut R| q_frac(rng.gen_range(-3..=3), rng.gen_range(1..=3));
    for i in 0..4 {
        a[i][i] = GaussQ::new(Q::zero(), r(rng));
        for j in i + 1..4 {
            let z = GaussQ::new(r(rng), r(rng));
            a[j][i] = z.conj().neg();
            a[i][j] = z;
        }
    }
    let id: Matrix<GaussQ> = crate::linalg::identity(4);
    let minus: Matrix<GaussQ> = (0..4).map(|i| (0..4).map(|j| id[i][j].sub(&a[i][j])).collect()).collect();
    let plus: Matrix<GaussQ> = (0..4).map(|i| (0..4).map(|j| id[i][j].add(&a[i][j])).collect()).collect();
    let mut u = mat_mul(&minus, &inverse(&plus).expect("I + A is invertible for skew-Hermitian A"));
    let d = determinant(&u).conj();
    for row in u.iter_mut() {
        row[0] = row[0].mul(&d);
    }
    u
}

/// A generic random rational 4-plane.
pub fn random_plane<R: Rng>(rng: &mut R) -> FourPlane {
    loop {
        let vectors = std::array::from_fn(|_| std::array::from_fn(|_| q_frac(rng.gen_range(-4..=4), rng.gen_range(1..=2))));
        let orientation = if rng.gen_bool(0.5) { 1 } else { -1 };
        if let Ok(p) = FourPlane::new(vectors, orientation) {
            return p;
        }
    }
}

/// Random samples mixing generic planes with SU(4) images of Cayley planes (the real slice
/// and the oppositely oriented complex plane), each with a random change of frame.
pub fn sample_planes<R: Rng>(rng: &mut R, count: usize) -> Vec<FourPlane> {
    let mut opposite_complex = complex_plane();
    opposite_complex.orientation = -1;
    (0..count)
        .map(|i| match i % 4 {
            0 | 1 => random_plane(rng),
            2 => {
                let u = random_su4(rng);
                reframe(rng, &real_slice().transform(&u))
            }
            _ => {
                let u = random_su4(rng);
                reframe(rng, &opposite_complex.transform(&u))
            }
        })
        .collect()
}

/// Same oriented plane described by a random positively oriented frame.
fn reframe<R: Rng>(rng: &mut R, p: &FourPlane) -> FourPlane {
    loop {
        let c: Matrix<Q> = (0..4).map(|_| (0..4).map(|_| q_int(rng.gen_range(-2..=2))).collect()).collect();
        let d = determinant(&c);
        if d.is_zero() {
            continue;
        }
        let vectors = std::array::from_fn(|a| {
            std::array::from_fn(|k| {
                let mut s = Q::zero();
                for b in 0..4 {
                    s += &c[a][b] * &p.vectors[b][k];
                }
                s
            })
        });
        let flip = if d > Q::zero() { 1 } else { -1 };
        return FourPlane { vectors, orientation: p.orientation * flip };
    }
}
