//! Minkowski space R^4_1 (signature (-,+,+,+)), its 2x2 Hermitian-matrix
//! model, the model hypersurfaces and the projections between them.

use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

use crate::holo::Complex;

/// Default tolerance for hypersurface membership tests.
pub const MEMBERSHIP_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LorentzError {
    #[error("matrix is not Hermitian (asymmetry {0:e})")]
    NotHermitian(f64),
    #[error("point is not on the upper hyperboloid H^3_+")]
    NotInUpperSheet,
    #[error("point is not on the two-sheeted hyperboloid")]
    NotOnHyperboloid,
}

/// A point of R^4_1.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec4(pub [f64; 4]);

impl Vec4 {
    pub const E0: Vec4 = Vec4([1.0, 0.0, 0.0, 0.0]);

    pub fn new(x0: f64, x1: f64, x2: f64, x3: f64) -> Self {
        Vec4([x0, x1, x2, x3])
    }

    pub fn x0(&self) -> f64 {
        self.0[0]
    }

    pub fn spatial(&self) -> [f64; 3] {
        [self.0[1], self.0[2], self.0[3]]
    }

    /// Lorentzian inner product `-x0 y0 + x1 y1 + x2 y2 + x3 y3`.
    pub fn inner(&self, other: &Vec4) -> f64 {
        let (a, b) = (&self.0, &other.0);
        -a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3]
    }

    pub fn euclid_norm(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn scale(&self, s: f64) -> Vec4 {
        Vec4(self.0.map(|x| s * x))
    }

    pub fn max_abs_diff(&self, other: &Vec4) -> f64 {
        (0..4)
            .map(|k| (self.0[k] - other.0[k]).abs())
            .fold(0.0, f64::max)
    }
}

impl Add for Vec4 {
    type Output = Vec4;
    fn add(self, rhs: Vec4) -> Vec4 {
        Vec4(std::array::from_fn(|k| self.0[k] + rhs.0[k]))
    }
}

impl Sub for Vec4 {
    type Output = Vec4;
    fn sub(self, rhs: Vec4) -> Vec4 {
        Vec4(std::array::from_fn(|k| self.0[k] - rhs.0[k]))
    }
}

impl Neg for Vec4 {
    type Output = Vec4;
    fn neg(self) -> Vec4 {
        self.scale(-1.0)
    }
}

pub fn inner(x: &Vec4, y: &Vec4) -> f64 {
    x.inner(y)
}

/// General 2x2 complex matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2(pub [[Complex; 2]; 2]);

/// A matrix expected to lie in SL(2, C) (frames, null lifts).
pub type SL2 = Mat2;

impl Mat2 {
    pub fn new(a: Complex, b: Complex, c: Complex, d: Complex) -> Self {
        Mat2([[a, b], [c, d]])
    }

    pub fn identity() -> Self {
        let one = Complex::new(1.0, 0.0);
        let zero = Complex::new(0.0, 0.0);
        Mat2([[one, zero], [zero, one]])
    }

    pub fn det(&self) -> Complex {
        let m = &self.0;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn trace(&self) -> Complex {
        self.0[0][0] + self.0[1][1]
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Mat2 {
        let m = &self.0;
        Mat2([[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]])
    }

    pub fn transpose(&self) -> Mat2 {
        let m = &self.0;
        Mat2([[m[0][0], m[1][0]], [m[0][1], m[1][1]]])
    }

    /// Inverse via the adjugate; callers guarantee `det != 0`.
    pub fn inverse(&self) -> Mat2 {
        let m = &self.0;
        let d = self.det();
        Mat2([[m[1][1] / d, -m[0][1] / d], [-m[1][0] / d, m[0][0] / d]])
    }

    pub fn scale(&self, s: Complex) -> Mat2 {
        Mat2(self.0.map(|row| row.map(|x| s * x)))
    }

    /// `self * m * self^*`.
    pub fn conjugate(&self, m: &Mat2) -> Mat2 {
        *self * *m * self.adjoint()
    }

    pub fn max_abs(&self) -> f64 {
        self.0
            .iter()
            .flatten()
            .map(|x| x.norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Mat2) -> f64 {
        (*self - *other).max_abs()
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: Mat2) -> Mat2 {
        let (a, b) = (&self.0, &rhs.0);
        Mat2(std::array::from_fn(|i| {
            std::array::from_fn(|j| a[i][0] * b[0][j] + a[i][1] * b[1][j])
        }))
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, rhs: Mat2) -> Mat2 {
        Mat2(std::array::from_fn(|i| {
            std::array::from_fn(|j| self.0[i][j] + rhs.0[i][j])
        }))
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, rhs: Mat2) -> Mat2 {
        Mat2(std::array::from_fn(|i| {
            std::array::from_fn(|j| self.0[i][j] - rhs.0[i][j])
        }))
    }
}

/// Hermitian 2x2 matrix; the image of R^4_1 under `X = sum x_k e_k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Herm2(Mat2);

impl Herm2 {
    /// Accept `m` if `|m - m^*| <= 1e-9` (relative to its magnitude when large).
    pub fn try_from_mat(m: Mat2) -> Result<Self, LorentzError> {
        let asym = m.max_abs_diff(&m.adjoint());
        if asym > 1e-9 * m.max_abs().max(1.0) {
            return Err(LorentzError::NotHermitian(asym));
        }
        // Symmetrize so downstream code sees an exactly Hermitian matrix.
        let s = (m + m.adjoint()).scale(Complex::new(0.5, 0.0));
        Ok(Herm2(s))
    }

    pub fn as_mat(&self) -> &Mat2 {
        &self.0
    }

    /// Real determinant; equals `-<X, X>`.
    pub fn det(&self) -> f64 {
        self.0.det().re
    }

    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }

    /// `a X a^*` for any complex `a`; an isometry when `det a = 1`.
    pub fn congruence(&self, a: &Mat2) -> Herm2 {
        let m = a.conjugate(&self.0);
        Herm2((m + m.adjoint()).scale(Complex::new(0.5, 0.0)))
    }
}

/// `(x0, x1, x2, x3) -> [[x0 + x3, x1 + i x2], [x1 - i x2, x0 - x3]]`.
pub fn herm_from_vec(x: &Vec4) -> Herm2 {
    let [x0, x1, x2, x3] = x.0;
    Herm2(Mat2::new(
        Complex::new(x0 + x3, 0.0),
        Complex::new(x1, x2),
        Complex::new(x1, -x2),
        Complex::new(x0 - x3, 0.0),
    ))
}

pub fn vec_from_herm(m: &Herm2) -> Vec4 {
    let a = &m.0 .0;
    Vec4::new(
        0.5 * (a[0][0].re + a[1][1].re),
        a[0][1].re,
        a[0][1].im,
        0.5 * (a[0][0].re - a[1][1].re),
    )
}

/// Hermitian check plus conversion for an arbitrary complex matrix.
pub fn vec_from_mat(m: &Mat2) -> Result<Vec4, LorentzError> {
    Herm2::try_from_mat(*m).map(|h| vec_from_herm(&h))
}

/// The basis matrices `e_0 .. e_3`.
pub fn basis(k: usize) -> Mat2 {
    let mut v = [0.0; 4];
    v[k] = 1.0;
    *herm_from_vec(&Vec4(v)).as_mat()
}

/// `<X, Y> = -1/2 trace(X e_2 Y^T e_2)`, the matrix form of the inner product.
pub fn inner_trace(x: &Herm2, y: &Herm2) -> f64 {
    let e2 = basis(2);
    -0.5 * (*x.as_mat() * e2 * y.as_mat().transpose() * e2).trace().re
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PointClass {
    H3Plus,
    H3Minus,
    DeSitter,
    LightCone,
    Generic,
}

pub fn classify_point(x: &Vec4, tol: f64) -> PointClass {
    let q = x.inner(x);
    if (q + 1.0).abs() <= tol {
        if x.x0() > 0.0 {
            PointClass::H3Plus
        } else {
            PointClass::H3Minus
        }
    } else if (q - 1.0).abs() <= tol {
        PointClass::DeSitter
    } else if q.abs() <= tol {
        PointClass::LightCone
    } else {
        PointClass::Generic
    }
}

/// A point of R^3 ∪ {∞}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChartPoint {
    Finite([f64; 3]),
    Infinity,
}

/// A point of C ∪ {∞}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Extended {
    Finite(Complex),
    Infinity,
}

impl Extended {
    pub fn finite(self) -> Option<Complex> {
        match self {
            Extended::Finite(w) => Some(w),
            Extended::Infinity => None,
        }
    }

    /// Chordal distance on the Riemann sphere; handles ∞ uniformly.
    pub fn chordal_distance(&self, other: &Extended) -> f64 {
        match (self, other) {
            (Extended::Infinity, Extended::Infinity) => 0.0,
            (Extended::Finite(a), Extended::Infinity) | (Extended::Infinity, Extended::Finite(a)) => {
                2.0 / (1.0 + a.norm_sqr()).sqrt()
            }
            (Extended::Finite(a), Extended::Finite(b)) => {
                2.0 * (a - b).norm() / ((1.0 + a.norm_sqr()).sqrt() * (1.0 + b.norm_sqr()).sqrt())
            }
        }
    }
}

/// Stereographic projection `(x1, x2, x3) / (1 - x0)` of H^3_+ ∪ H^3_- into
/// the hyperbolic 3-sphere chart. `x0 = 1` maps to ∞.
pub fn stereo_phi3(x: &Vec4) -> ChartPoint {
    let den = 1.0 - x.x0();
    if den == 0.0 {
        return ChartPoint::Infinity;
    }
    ChartPoint::Finite(x.spatial().map(|c| c / den))
}

/// Inverse of [`stereo_phi3`] away from the unit sphere:
/// `y -> (|y|^2 + 1, -2y) / (|y|^2 - 1)`.
pub fn stereo_phi3_inv(y: &ChartPoint) -> Result<Vec4, LorentzError> {
    match y {
        ChartPoint::Infinity => Ok(Vec4::E0),
        ChartPoint::Finite(p) => {
            let r2: f64 = p.iter().map(|c| c * c).sum();
            let den = r2 - 1.0;
            if den == 0.0 {
                return Err(LorentzError::NotOnHyperboloid);
            }
            Ok(Vec4::new(
                (r2 + 1.0) / den,
                -2.0 * p[0] / den,
                -2.0 * p[1] / den,
                -2.0 * p[2] / den,
            ))
        }
    }
}

/// `ψ∘φ⁻¹`, real analytic on the whole chart including the unit sphere:
/// `(1 + |x|^2, -2x) / sqrt((1 + |x|^2)^2 + 4|x|^2)`.
pub fn psi_phi_inv(x: &ChartPoint) -> Vec4 {
    match x {
        ChartPoint::Infinity => Vec4::E0,
        ChartPoint::Finite(p) => {
            let r2: f64 = p.iter().map(|c| c * c).sum();
            let a = 1.0 + r2;
            let norm = (a * a + 4.0 * r2).sqrt();
            Vec4::new(a / norm, -2.0 * p[0] / norm, -2.0 * p[1] / norm, -2.0 * p[2] / norm)
        }
    }
}

/// `ψ(u) = ±u/|u|_E` with the sign chosen so the time component is positive.
pub fn psi(u: &Vec4) -> Vec4 {
    let s = if u.x0() >= 0.0 { 1.0 } else { -1.0 };
    u.scale(s / u.euclid_norm())
}

/// Poincaré ball model of H^3_+: `(x1, x2, x3) / (1 + x0)`.
pub fn poincare_ball(x: &Vec4) -> Result<[f64; 3], LorentzError> {
    if classify_point(x, MEMBERSHIP_TOL * x.euclid_norm().powi(2).max(1.0)) != PointClass::H3Plus {
        return Err(LorentzError::NotInUpperSheet);
    }
    let den = 1.0 + x.x0();
    Ok(x.spatial().map(|c| c / den))
}

/// A point of R^3_1 with metric `-x0^2 + x1^2 + x2^2`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec3(pub [f64; 3]);

impl Vec3 {
    pub fn new(x0: f64, x1: f64, x2: f64) -> Self {
        Vec3([x0, x1, x2])
    }

    pub fn inner(&self, other: &Vec3) -> f64 {
        let (a, b) = (&self.0, &other.0);
        -a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
    }

    pub fn euclid_norm(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn scale(&self, s: f64) -> Vec3 {
        Vec3(self.0.map(|x| s * x))
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, rhs: Vec3) -> Vec3 {
        Vec3(std::array::from_fn(|k| self.0[k] + rhs.0[k]))
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, rhs: Vec3) -> Vec3 {
        Vec3(std::array::from_fn(|k| self.0[k] - rhs.0[k]))
    }
}

/// `(x1 + i x2) / (1 - x0)` on H^2_+ ∪ H^2_-.
pub fn stereo_phi2(x: &Vec3) -> Extended {
    let den = 1.0 - x.0[0];
    if den == 0.0 {
        return Extended::Infinity;
    }
    Extended::Finite(Complex::new(x.0[1] / den, x.0[2] / den))
}

/// Inverse of [`stereo_phi2`] off the unit circle.
pub fn stereo_phi2_inv(w: &Extended) -> Result<Vec3, LorentzError> {
    match w {
        Extended::Infinity => Ok(Vec3::new(1.0, 0.0, 0.0)),
        Extended::Finite(w) => {
            let r2 = w.norm_sqr();
            let den = r2 - 1.0;
            if den == 0.0 {
                return Err(LorentzError::NotOnHyperboloid);
            }
            Ok(Vec3::new((r2 + 1.0) / den, -2.0 * w.re / den, -2.0 * w.im / den))
        }
    }
}

/// Two-dimensional `ψ∘φ⁻¹`: `(1 + |w|^2, -2 Re w, -2 Im w) / sqrt(Δ)`.
pub fn psi_phi_inv2(w: &Extended) -> Vec3 {
    match w {
        Extended::Infinity => Vec3::new(1.0, 0.0, 0.0),
        Extended::Finite(w) => {
            let r2 = w.norm_sqr();
            let a = 1.0 + r2;
            let norm = (a * a + 4.0 * r2).sqrt();
            Vec3::new(a / norm, -2.0 * w.re / norm, -2.0 * w.im / norm)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_matrices() {
        assert_eq!(*herm_from_vec(&Vec4::E0).as_mat(), Mat2::identity());
        let e3 = herm_from_vec(&Vec4::new(0.0, 0.0, 0.0, 1.0));
        let one = Complex::new(1.0, 0.0);
        let zero = Complex::new(0.0, 0.0);
        assert_eq!(*e3.as_mat(), Mat2::new(one, zero, zero, -one));
        let e2 = basis(2);
        assert_eq!(e2.0[0][1], Complex::new(0.0, 1.0));
        assert_eq!(e2.0[1][0], Complex::new(0.0, -1.0));
    }

    #[test]
    fn round_trip_and_det() {
        let x = Vec4::new(0.3, -1.2, 0.5, 2.0);
        let m = herm_from_vec(&x);
        assert!(vec_from_herm(&m).max_abs_diff(&x) < 1e-12);
        assert!((m.det() + x.inner(&x)).abs() < 1e-12);
    }

    #[test]
    fn non_hermitian_rejected() {
        let i = Complex::new(0.0, 1.0);
        let one = Complex::new(1.0, 0.0);
        let m = Mat2::new(one, i, i, one);
        assert!(matches!(vec_from_mat(&m), Err(LorentzError::NotHermitian(_))));
    }

    #[test]
    fn inner_examples() {
        let e = |k: usize| {
            let mut v = [0.0; 4];
            v[k] = 1.0;
            Vec4(v)
        };
        assert_eq!(inner(&e(0), &e(0)), -1.0);
        assert_eq!(inner(&e(1), &e(1)), 1.0);
        assert_eq!(inner(&Vec4::new(1.0, 1.0, 0.0, 0.0), &Vec4::new(1.0, -1.0, 0.0, 0.0)), -2.0);
        let x = Vec4::new(0.4, -1.1, 2.3, 0.7);
        let y = Vec4::new(-2.0, 0.5, 0.25, 1.5);
        let t = inner_trace(&herm_from_vec(&x), &herm_from_vec(&y));
        assert!((t - inner(&x, &y)).abs() < 1e-12);
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify_point(&Vec4::E0, MEMBERSHIP_TOL), PointClass::H3Plus);
        assert_eq!(classify_point(&-Vec4::E0, MEMBERSHIP_TOL), PointClass::H3Minus);
        assert_eq!(classify_point(&Vec4::new(0.0, 1.0, 0.0, 0.0), MEMBERSHIP_TOL), PointClass::DeSitter);
        assert_eq!(classify_point(&Vec4::new(1.0, 1.0, 0.0, 0.0), MEMBERSHIP_TOL), PointClass::LightCone);
        assert_eq!(classify_point(&Vec4::new(3.0, 1.0, 0.0, 0.0), MEMBERSHIP_TOL), PointClass::Generic);
    }

    #[test]
    fn stereographic_examples() {
        assert_eq!(stereo_phi3(&-Vec4::E0), ChartPoint::Finite([0.0, 0.0, 0.0]));
        assert_eq!(stereo_phi3(&Vec4::E0), ChartPoint::Infinity);
        assert_eq!(psi_phi_inv(&ChartPoint::Finite([0.0; 3])), Vec4::E0);
        let p = psi_phi_inv(&ChartPoint::Finite([1.0, 0.0, 0.0]));
        let s8 = 8f64.sqrt();
        assert!(p.max_abs_diff(&Vec4::new(2.0 / s8, -2.0 / s8, 0.0, 0.0)) < 1e-15);
        assert_eq!(stereo_phi2(&Vec3::new(-1.0, 0.0, 0.0)), Extended::Finite(Complex::new(0.0, 0.0)));
        assert_eq!(psi_phi_inv2(&Extended::Finite(Complex::new(0.0, 0.0))), Vec3::new(1.0, 0.0, 0.0));
    }

    #[test]
    fn psi_phi_inv_is_continuous_across_unit_sphere() {
        let dir = [0.6, -0.0, 0.8];
        let at = |r: f64| psi_phi_inv(&ChartPoint::Finite(dir.map(|c| c * r)));
        assert!(at(1.0 + 1e-6).max_abs_diff(&at(1.0 - 1e-6)) <= 1e-5);
    }

    #[test]
    fn poincare_ball_examples() {
        assert_eq!(poincare_ball(&Vec4::E0).unwrap(), [0.0, 0.0, 0.0]);
        let t: f64 = 1.3;
        let p = poincare_ball(&Vec4::new(t.cosh(), t.sinh(), 0.0, 0.0)).unwrap();
        assert!((p[0] - (t / 2.0).tanh()).abs() < 1e-14);
        assert!(poincare_ball(&-Vec4::E0).is_err());
        assert!(poincare_ball(&Vec4::new(0.0, 1.0, 0.0, 0.0)).is_err());
    }
}
