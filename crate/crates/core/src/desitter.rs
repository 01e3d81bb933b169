//! CMC-1 faces in de Sitter space S^3_1.
//!
//! For data with `ε = -1` the null lift `F = 𝒢 [[0, -i], [-i, ih]]` gives the
//! face `f = F e₃ F*`. Its singular set is `{|h| = 1}`, across which the unit
//! normal jumps between the sheets of H^3 while the line field `[ν̃]` and the
//! extended normal `Ψ` stay real analytic.

use thiserror::Error;

use crate::holo::{Complex, POLE_TOL};
use crate::lorentz::{stereo_phi3, vec_from_herm, ChartPoint, Herm2, Mat2, Vec4};
use crate::weingarten::{WeingartenData, WeingartenError};

/// `||h|² - 1|` at or below this is on the singular set.
pub const SINGULAR_SET_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DesitterError {
    #[error("CMC-1 faces need ε = -1, got {0}")]
    NotCmc1Face(f64),
    #[error(transparent)]
    Weingarten(#[from] WeingartenError),
    #[error("normal undefined on the singular set |h| = 1")]
    SingularSet,
    #[error("degenerate lift: denominator r = {0:e}")]
    DegenerateLift(f64),
}

impl From<crate::holo::PoleSignal> for DesitterError {
    fn from(p: crate::holo::PoleSignal) -> Self {
        DesitterError::Weingarten(p.into())
    }
}

pub type Result<T> = std::result::Result<T, DesitterError>;

fn e3() -> Mat2 {
    let one = Complex::new(1.0, 0.0);
    let zero = Complex::new(0.0, 0.0);
    Mat2::new(one, zero, zero, -one)
}

/// Residuals of the structure equations of the null lift.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LiftResiduals {
    /// `F⁻¹F_z` against `[[h, -h²], [1, -h]] q/h_z`.
    pub lift: f64,
    /// `F_z F⁻¹` against `[[G, -G²], [1, -G]] q/G_z`.
    pub companion: f64,
    /// `|det F_z|`.
    pub null: f64,
}

/// Extended normal of a CMC-1 face: the chart point `N` and `Ψ = ψ∘φ⁻¹(N)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtendedNormal {
    pub n: ChartPoint,
    pub psi: Vec4,
    /// `2(1-|h|²) + |A+Bh̄|² + |C+Dh̄|² + |Ah+B|² + |Ch+D|²`.
    pub r: f64,
    /// `tr ν̃ - 2(1-|h|²)`, the denominator of `φ(ν) = -2ṽ/r'`.
    pub r_chart: f64,
}

#[derive(Debug, Clone)]
pub struct Cmc1FaceData {
    base: WeingartenData,
}

impl Cmc1FaceData {
    pub fn new(base: WeingartenData) -> Result<Self> {
        if base.epsilon() != -1.0 {
            return Err(DesitterError::NotCmc1Face(base.epsilon()));
        }
        Ok(Cmc1FaceData { base })
    }

    pub fn base(&self) -> &WeingartenData {
        &self.base
    }

    pub fn null_lift(&self, z: Complex) -> Result<Mat2> {
        Ok(self.null_lift_near(z, None)?.0)
    }

    /// Null lift with the frame branch nearest `reference`; also returns the
    /// branch used so neighbours can follow it.
    pub fn null_lift_near(&self, z: Complex, reference: Option<Complex>) -> Result<(Mat2, Complex)> {
        let frame = self.base.build_frame_near(z, reference)?;
        let h = self.base.h().eval(z)?;
        let i = Complex::new(0.0, 1.0);
        let zero = Complex::new(0.0, 0.0);
        Ok((frame.matrix * Mat2::new(zero, -i, -i, i * h), frame.branch))
    }

    /// Finite-difference residuals of `F⁻¹dF` and `dF F⁻¹` (step `step`).
    pub fn verify_lift(&self, z: Complex, step: f64) -> Result<LiftResiduals> {
        let (f, branch) = self.null_lift_near(z, None)?;
        let at = |w: Complex| -> Result<Mat2> { Ok(self.null_lift_near(w, Some(branch))?.0) };
        let fu = (at(z + step)? - at(z - step)?).scale(Complex::new(0.5 / step, 0.0));
        let i = Complex::new(0.0, 1.0);
        let fv = (at(z + i * step)? - at(z - i * step)?).scale(Complex::new(0.5 / step, 0.0));
        // F is holomorphic: F_z = F_u = -i F_v; average for symmetry.
        let f_z = (fu - fv.scale(i)).scale(Complex::new(0.5, 0.0));

        let j = self.base.jet(z)?;
        let g_z = self.base.g().derivative().eval(z)?;
        if j.h_z.norm() <= POLE_TOL || g_z.norm() <= POLE_TOL {
            return Err(WeingartenError::DegenerateMetric.into());
        }
        let one = Complex::new(1.0, 0.0);
        let lift_expected = Mat2::new(j.h, -j.h * j.h, one, -j.h).scale(j.q / j.h_z);
        let comp_expected = Mat2::new(j.g, -j.g * j.g, one, -j.g).scale(j.q / g_z);
        let inv = f.inverse();
        let scale = lift_expected.max_abs().max(1.0);
        let cscale = comp_expected.max_abs().max(1.0);
        Ok(LiftResiduals {
            lift: (inv * f_z).max_abs_diff(&lift_expected) / scale,
            companion: (f_z * inv).max_abs_diff(&comp_expected) / cscale,
            null: f_z.det().norm(),
        })
    }

    /// `|h|² - 1`; the face is singular exactly on its zero set.
    pub fn face_singular_function(&self, z: Complex) -> Result<f64> {
        Ok(self.base.h().eval(z)?.norm_sqr() - 1.0)
    }

    /// `f = F e₃ F*`.
    pub fn face_point(&self, z: Complex) -> Result<Vec4> {
        let f = self.null_lift(z)?;
        Ok(vec_from_herm(&herm(f.conjugate(&e3()))))
    }

    /// `ν̃ = F [[1+|h|², 2h], [2h̄, 1+|h|²]] F*`, smooth across `|h| = 1`.
    pub fn normal_tilde(&self, z: Complex) -> Result<Herm2> {
        let f = self.null_lift(z)?;
        let h = self.base.h().eval(z)?;
        let d = Complex::new(1.0 + h.norm_sqr(), 0.0);
        Ok(herm(f.conjugate(&Mat2::new(d, 2.0 * h, 2.0 * h.conj(), d))))
    }

    /// `ν = ν̃ / (1 - |h|²)`, in H^3_+ or H^3_- depending on the side of `|h| = 1`.
    pub fn normal(&self, z: Complex) -> Result<Vec4> {
        let w = -self.face_singular_function(z)?;
        if w.abs() <= SINGULAR_SET_TOL {
            return Err(DesitterError::SingularSet);
        }
        Ok(vec_from_herm(&self.normal_tilde(z)?).scale(1.0 / w))
    }

    /// `N = φ∘ν` extended across the singular set, and `Ψ = ψ∘φ⁻¹(N)`.
    pub fn extended_normal(&self, z: Complex) -> Result<ExtendedNormal> {
        let f = self.null_lift(z)?;
        let h = self.base.h().eval(z)?;
        let w = 1.0 - h.norm_sqr();
        let [[a, b], [c, d]] = f.0;
        let hb = h.conj();
        let trace = (a + b * hb).norm_sqr() + (c + d * hb).norm_sqr() + (a * h + b).norm_sqr() + (c * h + d).norm_sqr();
        let r = 2.0 * w + trace;
        if r.abs() <= 1e-12 {
            return Err(DesitterError::DegenerateLift(r));
        }
        let v = vec_from_herm(&self.normal_tilde(z)?);
        let s = v.spatial();
        // φ(ν) = ṽ/(w - ṽ0) = -2ṽ/(tr ν̃ - 2w), with tr ν̃ = 2ṽ0
        let r_chart = 2.0 * v.x0() - 2.0 * w;
        let s2: f64 = s.iter().map(|x| x * x).sum();
        let n = if r_chart.abs() <= 1e-14 * (v.x0().abs() + w.abs()) {
            ChartPoint::Infinity
        } else {
            ChartPoint::Finite(s.map(|x| -2.0 * x / r_chart))
        };
        // ψ∘φ⁻¹(N) with the denominator cleared: ∝ (r'² + 4|ṽ|², 4r'ṽ)
        let psi = Vec4::new(
            r_chart * r_chart + 4.0 * s2,
            4.0 * r_chart * s[0],
            4.0 * r_chart * s[1],
            4.0 * r_chart * s[2],
        );
        let psi = psi.scale(1.0 / psi.euclid_norm());
        Ok(ExtendedNormal { n, psi, r, r_chart })
    }

    /// `stereo_phi3(normal)`, for comparison with the extended form.
    pub fn chart_normal(&self, z: Complex) -> Result<ChartPoint> {
        Ok(stereo_phi3(&self.normal(z)?))
    }
}

fn herm(m: Mat2) -> Herm2 {
    Herm2::try_from_mat(m).expect("congruence of a Hermitian matrix is Hermitian")
}
