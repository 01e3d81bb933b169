//! Linear Weingarten fronts of Bryant type in H^3.
//!
//! A front is determined by a meromorphic hyperbolic Gauss map `G`, a
//! developing map `h` of the pseudometric `dσ² = 4|dh|²/(1+ε|h|²)²` and the
//! constant `ε = a/(a+2b)`. The front and its unit normal are
//! `f = 𝒢𝒜𝒢*`, `ν = 𝒢ℬ𝒢*` in the Hermitian-matrix model; all geometric
//! quantities below (fundamental forms, curvatures, singular set, Gauss maps)
//! are evaluated pointwise from `(G, h, ε)`.

use thiserror::Error;

use crate::holo::{Complex, MeroExpr, ParseError, PoleSignal, POLE_TOL};
use crate::lorentz::{herm_from_vec, vec_from_herm, Extended, Herm2, Mat2, Vec4};
use crate::mesh::{newton_project, Rect};

/// `|Φ| <= SINGULAR_TOL * (1 + σ̂)` counts as singular.
pub const SINGULAR_TOL: f64 = 1e-7;
/// `|Δ|` at or below this is treated as zero when screening swallowtails.
pub const DELTA_TOL: f64 = 1e-6;
/// Minimum `|d(Δ∘γ)/dt|` for a zero of Δ to count as a swallowtail.
pub const DELTA_SLOPE_TOL: f64 = 1e-6;
/// Nondegeneracy threshold on the magnitude of the transversality expression.
pub const NONDEGENERACY_TOL: f64 = 1e-8;
/// Safety margin subtracted from `½ ln c` in the zig-zag certificate.
pub const ZIGZAG_MARGIN: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WeingartenError {
    #[error(transparent)]
    Pole(#[from] PoleSignal),
    #[error("coefficients (a, b) = (0, 0) are not allowed")]
    ZeroCoefficients,
    #[error("horo-flat unsupported: a + 2b = 0")]
    HoroFlat,
    #[error("epsilon must be finite")]
    NonFiniteEpsilon,
    #[error("{0} has identically vanishing derivative")]
    ConstantMap(&'static str),
    #[error("degenerate metric: dh vanishes")]
    DegenerateMetric,
    #[error("metric signature change: 1 + ε|h|² = 0")]
    MetricSignature,
    #[error("singular point: det I = {0:e}")]
    SingularPoint(f64),
    #[error("point is not singular: Φ = {0:e}")]
    NotSingular(f64),
    #[error("classification unsupported for CMC-1 data (ε = 1)")]
    Cmc1Unsupported,
    #[error("flat data (ε = 0) has no CMC-1 parallel")]
    FlatUnsupported,
    #[error("zig-zag certificate requires flat data (ε = 0)")]
    FlatOnly,
    #[error("loop passes through a zero of q or dh (min |q/h_z²| = {0:e})")]
    LoopThroughZero(f64),
    #[error("parallel front at δ = {0} still has a singular point on the loop")]
    CertificateFailed(f64),
}

pub type Result<T, E = WeingartenError> = std::result::Result<T, E>;

/// Failure to build data from expression strings.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum BuildError {
    #[error("cannot parse {0}: {1}")]
    Parse(&'static str, ParseError),
    #[error(transparent)]
    Data(#[from] WeingartenError),
}

/// The coefficient representation a front was declared with.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Coefficients {
    Epsilon(f64),
    Ab { a: f64, b: f64 },
}

/// A symmetric bilinear form `E du² + 2F du dv + G dv²`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SymForm {
    pub e: f64,
    pub f: f64,
    pub g: f64,
}

impl SymForm {
    pub fn new(e: f64, f: f64, g: f64) -> Self {
        SymForm { e, f, g }
    }

    /// `A|dz|² + 2 Re(c dz²)`.
    pub fn from_complex(a: f64, c: Complex) -> Self {
        SymForm {
            e: a + 2.0 * c.re,
            f: -2.0 * c.im,
            g: a - 2.0 * c.re,
        }
    }

    pub fn det(&self) -> f64 {
        self.e * self.g - self.f * self.f
    }

    pub fn trace(&self) -> f64 {
        self.e + self.g
    }

    pub fn scale(&self, s: f64) -> SymForm {
        SymForm::new(s * self.e, s * self.f, s * self.g)
    }

    pub fn add(&self, o: &SymForm) -> SymForm {
        SymForm::new(self.e + o.e, self.f + o.f, self.g + o.g)
    }

    pub fn max_abs(&self) -> f64 {
        self.e.abs().max(self.f.abs()).max(self.g.abs())
    }

    pub fn max_abs_diff(&self, o: &SymForm) -> f64 {
        self.add(&o.scale(-1.0)).max_abs()
    }

    /// Half trace and determinant of the shape operator `self⁻¹ other`.
    pub fn shape(&self, other: &SymForm) -> (f64, f64) {
        let det = self.det();
        let half_trace = (self.e * other.g - 2.0 * self.f * other.f + self.g * other.e) / (2.0 * det);
        (half_trace, other.det() / det)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FundamentalForms {
    pub first: SymForm,
    pub second: SymForm,
    pub third: SymForm,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Curvatures {
    /// Mean curvature with respect to ν.
    pub mean: f64,
    /// Intrinsic Gaussian curvature `det(I⁻¹II) - 1`.
    pub gauss: f64,
    /// Extrinsic curvature `det(I⁻¹II)`.
    pub extrinsic: f64,
}

/// `H = ½ tr(I⁻¹II)`, `K_ext = det(I⁻¹II)`, `K = K_ext - 1`.
pub fn curvatures(first: &SymForm, second: &SymForm) -> Result<Curvatures> {
    let det = first.det();
    if det <= 1e-12 * first.trace().powi(2) || det <= 0.0 {
        return Err(WeingartenError::SingularPoint(det));
    }
    let (mean, extrinsic) = first.shape(second);
    Ok(Curvatures {
        mean,
        gauss: extrinsic - 1.0,
        extrinsic,
    })
}

/// Curvatures of ν as a spacelike surface in S^3_1 with unit normal f:
/// shape operator `III⁻¹II`, intrinsic curvature `1 - det`.
pub fn dual_curvatures(forms: &FundamentalForms) -> Result<Curvatures> {
    let third = &forms.third;
    let det = third.det();
    if det <= 1e-12 * third.trace().powi(2) || det <= 0.0 {
        return Err(WeingartenError::SingularPoint(det));
    }
    let (mean, extrinsic) = third.shape(&forms.second);
    Ok(Curvatures {
        mean,
        gauss: 1.0 - extrinsic,
        extrinsic,
    })
}

/// An SL(2, C) frame together with the value of `(G_h)^{-3/2}` it used.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frame {
    pub matrix: Mat2,
    pub branch: Complex,
    /// True when the branch was flipped away from the principal value to
    /// follow a reference (the frame changes sign; f and ν do not).
    pub flipped: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sheet {
    Upper,
    Lower,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrontPoint {
    pub f: Vec4,
    pub nu: Vec4,
    pub sheet: Sheet,
}

/// Values of the data and its derivatives at one parameter point.
#[derive(Debug, Clone, Copy)]
pub struct Jet {
    pub z: Complex,
    pub g: Complex,
    pub h: Complex,
    pub h_z: Complex,
    pub h_zz: Complex,
    pub g_h: Complex,
    pub g_hh: Complex,
    pub q: Complex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SingularKind {
    CuspidalEdge,
    Swallowtail,
    DegenerateOrUnknown,
}

impl SingularKind {
    pub fn label(&self) -> &'static str {
        match self {
            SingularKind::CuspidalEdge => "cuspidal_edge",
            SingularKind::Swallowtail => "swallowtail",
            SingularKind::DegenerateOrUnknown => "degenerate",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingularClass {
    pub kind: SingularKind,
    pub delta: f64,
    pub nondegenerate: bool,
}

/// Δ together with the value of `1/sqrt(h_z θ̂)` used to compute it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaValue {
    pub value: f64,
    pub inv_sqrt: Complex,
    /// Continuation picked the non-principal root.
    pub crossed_cut: bool,
}

/// Local context of a point on an extracted singular curve.
#[derive(Debug, Clone, Copy)]
pub struct CurveContext {
    /// Unit tangent of the curve in the parameter plane.
    pub tangent: Complex,
    /// Branch of `1/sqrt(h_z θ̂)` at the previous curve point, if any.
    pub branch: Option<Complex>,
    /// Finite-difference step for `d(Δ∘γ)/dt`.
    pub step: f64,
}

/// Per-point record used for grid sampling and export.
#[derive(Debug, Clone, Copy)]
pub struct FrontSample {
    pub z: Complex,
    pub f: Vec4,
    pub nu: Vec4,
    pub sheet: Sheet,
    pub forms: FundamentalForms,
    pub curvatures: Option<Curvatures>,
    /// Value of the singular function Φ.
    pub sing: f64,
    pub sigma_hat: f64,
    pub q: Complex,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParallelParams {
    pub delta: f64,
    pub b_delta: f64,
}

impl ParallelParams {
    /// `b_δ = b e^{2δ} + a (e^{2δ} - 1)/2`.
    pub fn new(a: f64, b: f64, delta: f64) -> Self {
        let e2 = (2.0 * delta).exp();
        ParallelParams {
            delta,
            b_delta: b * e2 + a * (e2 - 1.0) / 2.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZigzagCertificate {
    pub delta: f64,
    /// `min |q/h_z²|` over the loop samples.
    pub c: f64,
    /// `min e^{-2δ}|q/h_z²|` over the loop; exceeds 1.
    pub min_rho: f64,
    /// `min Φ_δ` over the loop; positive.
    pub min_phi: f64,
}

/// The data `(G, h, ε)` of a Bryant-type front on a rectangular domain.
#[derive(Debug, Clone)]
pub struct WeingartenData {
    g: MeroExpr,
    h: MeroExpr,
    eps: f64,
    a: f64,
    b: f64,
    declared: Coefficients,
    domain: Rect,
    g_h: MeroExpr,
    g_hh: MeroExpr,
    q: MeroExpr,
}

fn vanishes_identically(e: &MeroExpr) -> bool {
    if e.to_string() == "0" {
        return true;
    }
    let probes = [
        Complex::new(0.3137, 0.2718),
        Complex::new(-0.577, 0.4142),
        Complex::new(0.1234, -0.8765),
    ];
    probes
        .iter()
        .all(|z| matches!(e.eval(*z), Ok(v) if v.norm() <= POLE_TOL))
}

fn principal_inv_sqrt_1m(eps: f64) -> Complex {
    // 1/sqrt(1 - ε), with sqrt(1 - ε) = i sqrt(ε - 1) for ε > 1.
    if eps < 1.0 {
        Complex::new(1.0 / (1.0 - eps).sqrt(), 0.0)
    } else {
        Complex::new(0.0, -1.0 / (eps - 1.0).sqrt())
    }
}

fn pick_branch(principal: Complex, reference: Option<Complex>) -> (Complex, bool) {
    match reference {
        Some(r) if (principal + r).norm() < (principal - r).norm() => (-principal, true),
        _ => (principal, false),
    }
}

impl WeingartenData {
    pub fn new(g: MeroExpr, h: MeroExpr, coeffs: Coefficients, domain: Rect) -> Result<Self> {
        let (eps, a, b) = match coeffs {
            Coefficients::Epsilon(eps) => {
                if !eps.is_finite() {
                    return Err(WeingartenError::NonFiniteEpsilon);
                }
                (eps, eps, (1.0 - eps) / 2.0)
            }
            Coefficients::Ab { a, b } => {
                if a == 0.0 && b == 0.0 {
                    return Err(WeingartenError::ZeroCoefficients);
                }
                if (a + 2.0 * b).abs() <= 1e-14 * a.abs().max(b.abs()) {
                    return Err(WeingartenError::HoroFlat);
                }
                (a / (a + 2.0 * b), a, b)
            }
        };
        if vanishes_identically(g.derivative()) {
            return Err(WeingartenError::ConstantMap("G"));
        }
        if vanishes_identically(h.derivative()) {
            return Err(WeingartenError::ConstantMap("h"));
        }
        let g_h = g.deriv_wrt(&h);
        let g_hh = g_h.deriv_wrt(&h);
        let q = MeroExpr::mul(
            &MeroExpr::real(0.5),
            &MeroExpr::sub(&h.schwarzian(), &g.schwarzian()),
        );
        Ok(WeingartenData {
            g,
            h,
            eps,
            a,
            b,
            declared: coeffs,
            domain,
            g_h,
            g_hh,
            q,
        })
    }

    /// Parse `G` and `h` and build the data with `ε` coefficients.
    pub fn from_strs(g: &str, h: &str, eps: f64, domain: Rect) -> std::result::Result<Self, BuildError> {
        let g = MeroExpr::parse(g).map_err(|e| BuildError::Parse("G", e))?;
        let h = MeroExpr::parse(h).map_err(|e| BuildError::Parse("h", e))?;
        Ok(Self::new(g, h, Coefficients::Epsilon(eps), domain)?)
    }

    pub fn g(&self) -> &MeroExpr {
        &self.g
    }

    pub fn h(&self) -> &MeroExpr {
        &self.h
    }

    pub fn epsilon(&self) -> f64 {
        self.eps
    }

    /// `(a, b)` as declared, or normalized to `a + 2b = 1` when ε was given.
    pub fn coefficients(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    pub fn declared(&self) -> Coefficients {
        self.declared
    }

    pub fn domain(&self) -> Rect {
        self.domain
    }

    /// Hopf differential density `q` (with `Q = q dz²`) as an expression.
    pub fn q_expr(&self) -> &MeroExpr {
        &self.q
    }

    pub fn jet(&self, z: Complex) -> Result<Jet> {
        Ok(Jet {
            z,
            g: self.g.eval(z)?,
            h: self.h.eval(z)?,
            h_z: self.h.derivative().eval(z)?,
            h_zz: self.h.derivative().derivative().eval(z)?,
            g_h: self.g_h.eval(z)?,
            g_hh: self.g_hh.eval(z)?,
            q: self.q.eval(z)?,
        })
    }

    fn conformal_factor(&self, h: Complex) -> Result<f64> {
        let w = 1.0 + self.eps * h.norm_sqr();
        if w.abs() <= POLE_TOL {
            return Err(WeingartenError::MetricSignature);
        }
        Ok(w)
    }

    /// `σ̂` with `dσ² = σ̂ |dz|²`, i.e. `4|h_z|²/(1+ε|h|²)²`.
    pub fn sigma_hat(&self, z: Complex) -> Result<f64> {
        let h = self.h.eval(z)?;
        let h_z = self.h.derivative().eval(z)?;
        let w = 1.0 + self.eps * h.norm_sqr();
        if w.abs() <= POLE_TOL {
            return Err(PoleSignal {
                location: format!("4|h_z|^2/(1 + {}|h|^2)^2", self.eps),
            }
            .into());
        }
        if h_z.norm() <= POLE_TOL {
            return Err(WeingartenError::DegenerateMetric);
        }
        Ok(4.0 * h_z.norm_sqr() / (w * w))
    }

    /// `q` with `Q = ½(S(h) - S(G)) = q dz²`.
    pub fn hopf_q(&self, z: Complex) -> Result<Complex> {
        Ok(self.q.eval(z)?)
    }

    pub fn build_frame(&self, z: Complex) -> Result<Frame> {
        self.build_frame_near(z, None)
    }

    /// Frame whose `(G_h)^{-3/2}` branch is the one closest to `reference`.
    pub fn build_frame_near(&self, z: Complex, reference: Option<Complex>) -> Result<Frame> {
        let g = self.g.eval(z)?;
        let g_h = self.g_h.eval(z)?;
        let g_hh = self.g_hh.eval(z)?;
        if g_h.norm() <= POLE_TOL {
            return Err(PoleSignal {
                location: format!("({})^(-3/2)", self.g_h),
            }
            .into());
        }
        let principal = (-1.5 * g_h.ln()).exp();
        let (branch, flipped) = pick_branch(principal, reference);
        let i = Complex::new(0.0, 1.0);
        let half_hh = 0.5 * g_hh;
        let m = Mat2::new(-g * g_h, g * half_hh - g_h * g_h, -g_h, half_hh).scale(i * branch);
        Ok(Frame {
            matrix: m,
            branch,
            flipped,
        })
    }

    /// The middle factors `𝒜` and `ℬ` of the representation formula.
    pub fn middle_factors(&self, h: Complex) -> Result<(Mat2, Mat2)> {
        let eps = self.eps;
        let w = self.conformal_factor(h)?;
        let n2 = h.norm_sqr();
        let re = |x: f64| Complex::new(x, 0.0);
        let a = Mat2::new(re((1.0 + eps * eps * n2) / w), -eps * h.conj(), -eps * h, re(w));
        let b = Mat2::new(re((1.0 - eps * eps * n2) / w), eps * h.conj(), eps * h, re(-w));
        Ok((a, b))
    }

    /// `f = 𝒢𝒜𝒢*`, `ν = 𝒢ℬ𝒢*`.
    pub fn build_front(&self, z: Complex) -> Result<FrontPoint> {
        let frame = self.build_frame(z)?;
        let h = self.h.eval(z)?;
        let (a, b) = self.middle_factors(h)?;
        let f = vec_from_herm(&Herm2::try_from_mat(frame.matrix.conjugate(&a)).expect("congruence is Hermitian"));
        let nu = vec_from_herm(&Herm2::try_from_mat(frame.matrix.conjugate(&b)).expect("congruence is Hermitian"));
        if !(f.0.iter().chain(nu.0.iter()).all(|x| x.is_finite())) {
            return Err(PoleSignal {
                location: "f = GAG*".into(),
            }
            .into());
        }
        let sheet = if f.x0() > 0.0 { Sheet::Upper } else { Sheet::Lower };
        Ok(FrontPoint { f, nu, sheet })
    }

    /// First, second and third fundamental forms from `σ̂` and `q`.
    pub fn fundamental_forms(&self, z: Complex) -> Result<FundamentalForms> {
        let s = self.sigma_hat(z)?;
        let q = self.hopf_q(z)?;
        Ok(self.forms_from(s, q))
    }

    fn forms_from(&self, s: f64, q: Complex) -> FundamentalForms {
        let eps = self.eps;
        let a = 4.0 * q.norm_sqr() / s;
        // Q + Q̄ = 2 Re(q dz²)
        FundamentalForms {
            first: SymForm::from_complex((1.0 - eps).powi(2) / 4.0 * s + a, (1.0 - eps) * q),
            second: SymForm::from_complex((eps * eps - 1.0) / 4.0 * s + a, -eps * q),
            third: SymForm::from_complex((1.0 + eps).powi(2) / 4.0 * s + a, -(1.0 + eps) * q),
        }
    }

    /// `|a(H-1) + bK|` at `z`.
    pub fn weingarten_residual(&self, z: Complex, a: f64, b: f64) -> Result<f64> {
        let forms = self.fundamental_forms(z)?;
        let c = curvatures(&forms.first, &forms.second)?;
        Ok((a * (c.mean - 1.0) + b * c.gauss).abs())
    }

    /// `Φ = 4|q|²/σ̂ - (1-ε)²σ̂/4`; its zero set is the singular set.
    pub fn singular_function(&self, z: Complex) -> Result<f64> {
        let s = self.sigma_hat(z)?;
        let q = self.hopf_q(z)?;
        Ok(self.phi_from(s, q))
    }

    fn phi_from(&self, s: f64, q: Complex) -> f64 {
        4.0 * q.norm_sqr() / s - (1.0 - self.eps).powi(2) / 4.0 * s
    }

    /// Whether `|Φ(z)| <= SINGULAR_TOL (1 + σ̂)`.
    pub fn is_singular(&self, z: Complex) -> Result<bool> {
        let s = self.sigma_hat(z)?;
        let phi = self.phi_from(s, self.hopf_q(z)?);
        Ok(phi.abs() <= SINGULAR_TOL * (1.0 + s))
    }

    /// `4ε h_z h̄ + (1+ε|h|²)(θ̂_z/θ̂ - h_zz/h_z)` with `θ̂ = q/h_z`.
    pub fn nondegeneracy_expr(&self, z: Complex) -> Result<Complex> {
        let j = self.jet(z)?;
        let w = 1.0 + self.eps * j.h.norm_sqr();
        Ok(4.0 * self.eps * j.h_z * j.h.conj() + w * self.bracket(&j, z)?)
    }

    /// `θ̂_z/θ̂ - h_zz/h_z = q_z/q - 2 h_zz/h_z`.
    fn bracket(&self, j: &Jet, z: Complex) -> Result<Complex> {
        if j.q.norm() <= POLE_TOL {
            return Err(PoleSignal {
                location: format!("q_z/q with q = {}", self.q),
            }
            .into());
        }
        if j.h_z.norm() <= POLE_TOL {
            return Err(WeingartenError::DegenerateMetric);
        }
        let q_z = self.q.derivative().eval(z)?;
        Ok(q_z / j.q - 2.0 * j.h_zz / j.h_z)
    }

    fn check_singular(&self, z: Complex) -> Result<()> {
        let s = self.sigma_hat(z)?;
        let phi = self.phi_from(s, self.hopf_q(z)?);
        if phi.abs() > SINGULAR_TOL * (1.0 + s) {
            return Err(WeingartenError::NotSingular(phi));
        }
        Ok(())
    }

    pub fn is_nondegenerate(&self, z: Complex) -> Result<bool> {
        if self.eps == 1.0 {
            return Err(WeingartenError::Cmc1Unsupported);
        }
        self.check_singular(z)?;
        Ok(self.nondegeneracy_expr(z)?.norm() > NONDEGENERACY_TOL)
    }

    /// The invariant Δ at `z`; the branch of `1/sqrt(h_z θ̂)` follows `branch`
    /// when given and is principal otherwise.
    pub fn delta_invariant(&self, z: Complex, branch: Option<Complex>) -> Result<DeltaValue> {
        if self.eps == 1.0 {
            return Err(WeingartenError::Cmc1Unsupported);
        }
        let j = self.jet(z)?;
        let w = 1.0 + self.eps * j.h.norm_sqr();
        if w.abs() <= POLE_TOL {
            return Err(WeingartenError::MetricSignature);
        }
        let braces = 4.0 * self.eps * j.h_z * j.h.conj() / w + self.bracket(&j, z)?;
        // h_z θ̂ = q
        let principal = 1.0 / j.q.sqrt();
        let (inv_sqrt, crossed_cut) = pick_branch(principal, branch);
        let value = (principal_inv_sqrt_1m(self.eps) * braces * inv_sqrt).im;
        Ok(DeltaValue {
            value,
            inv_sqrt,
            crossed_cut,
        })
    }

    pub fn classify_singularity(&self, z: Complex, ctx: &CurveContext) -> Result<SingularClass> {
        if self.eps == 1.0 {
            return Err(WeingartenError::Cmc1Unsupported);
        }
        let nondegenerate = self.is_nondegenerate(z)?;
        let delta = self.delta_invariant(z, ctx.branch)?;
        let kind = if !nondegenerate {
            SingularKind::DegenerateOrUnknown
        } else if delta.value.abs() > DELTA_TOL {
            SingularKind::CuspidalEdge
        } else {
            let t = ctx.tangent / ctx.tangent.norm();
            let fwd = self.delta_invariant(z + ctx.step * t, Some(delta.inv_sqrt))?;
            let back = self.delta_invariant(z - ctx.step * t, Some(delta.inv_sqrt))?;
            let slope = (fwd.value - back.value) / (2.0 * ctx.step);
            if slope.abs() > DELTA_SLOPE_TOL {
                SingularKind::Swallowtail
            } else {
                SingularKind::DegenerateOrUnknown
            }
        };
        Ok(SingularClass {
            kind,
            delta: delta.value,
            nondegenerate,
        })
    }

    /// Classify every vertex of a singular curve, continuing the branch of
    /// Δ along it, and locate the swallowtails (sign changes of Δ∘γ).
    pub fn classify_curve(&self, points: &[Complex]) -> Result<CurveClassification> {
        if self.eps == 1.0 {
            return Err(WeingartenError::Cmc1Unsupported);
        }
        let mut vertices = Vec::with_capacity(points.len());
        let mut deltas: Vec<DeltaValue> = Vec::with_capacity(points.len());
        let mut branch = None;
        for (k, &z) in points.iter().enumerate() {
            let prev = points[k.saturating_sub(1)];
            let next = points[(k + 1).min(points.len() - 1)];
            let mut tangent = next - prev;
            if tangent.norm() == 0.0 {
                tangent = Complex::new(1.0, 0.0);
            }
            let step = (0.25 * (next - prev).norm()).clamp(1e-6, 1e-3);
            let ctx = CurveContext {
                tangent,
                branch,
                step,
            };
            let class = self.classify_singularity(z, &ctx)?;
            let dv = self.delta_invariant(z, branch)?;
            branch = Some(dv.inv_sqrt);
            deltas.push(dv);
            vertices.push((z, class));
        }

        let mut swallowtails = Vec::new();
        for k in 1..points.len() {
            let (d0, d1) = (deltas[k - 1], deltas[k]);
            if d0.value == 0.0 || d0.value.signum() == d1.value.signum() {
                continue;
            }
            if !(vertices[k - 1].1.nondegenerate && vertices[k].1.nondegenerate) {
                continue;
            }
            let root = self.bisect_delta_root(points[k - 1], points[k], d0)?;
            let tangent = points[k] - points[k - 1];
            let ctx = CurveContext {
                tangent,
                branch: Some(d0.inv_sqrt),
                step: (0.25 * tangent.norm()).clamp(1e-6, 1e-3),
            };
            swallowtails.push((root, self.classify_singularity(root, &ctx)?));
        }
        Ok(CurveClassification {
            vertices,
            swallowtails,
        })
    }

    fn bisect_delta_root(&self, a: Complex, b: Complex, da: DeltaValue) -> Result<Complex> {
        let on_curve = |z: Complex| newton_project(|w| self.singular_function(w).ok(), z, 3);
        let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
        let sign_lo = da.value.signum();
        let mut mid_z = a;
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            mid_z = on_curve(a + (b - a) * mid);
            let dm = self.delta_invariant(mid_z, Some(da.inv_sqrt))?;
            if dm.value == 0.0 {
                break;
            }
            if dm.value.signum() == sign_lo {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo < 1e-14 {
                break;
            }
        }
        Ok(mid_z)
    }

    /// `f_δ = cosh δ f + sinh δ ν`, `ν_δ = cosh δ ν + sinh δ f`.
    pub fn parallel_front(&self, z: Complex, delta: f64) -> Result<FrontPoint> {
        let p = self.build_front(z)?;
        let (c, s) = (delta.cosh(), delta.sinh());
        let f = p.f.scale(c) + p.nu.scale(s);
        let nu = p.nu.scale(c) + p.f.scale(s);
        let sheet = if f.x0() > 0.0 { Sheet::Upper } else { Sheet::Lower };
        Ok(FrontPoint { f, nu, sheet })
    }

    pub fn parallel_params(&self, delta: f64) -> ParallelParams {
        ParallelParams::new(self.a, self.b, delta)
    }

    /// Data of the parallel front `f_δ`: same `G`, developing map `e^δ h`,
    /// `ε_δ = ε e^{-2δ}`, coefficients `(a, b_δ)`.
    pub fn parallel(&self, delta: f64) -> Result<WeingartenData> {
        let h = MeroExpr::mul(&MeroExpr::real(delta.exp()), &self.h);
        let p = self.parallel_params(delta);
        WeingartenData::new(
            self.g.clone(),
            h,
            Coefficients::Ab {
                a: self.a,
                b: p.b_delta,
            },
            self.domain,
        )
    }

    /// Fundamental forms of `f_δ` from those of `f`.
    pub fn parallel_forms(&self, z: Complex, delta: f64) -> Result<FundamentalForms> {
        let FundamentalForms {
            first,
            second,
            third,
        } = self.fundamental_forms(z)?;
        let (c, s) = (delta.cosh(), delta.sinh());
        let i_plus_iii = first.add(&third);
        Ok(FundamentalForms {
            first: first.scale(c * c).add(&second.scale(-2.0 * c * s)).add(&third.scale(s * s)),
            second: second.scale(c * c + s * s).add(&i_plus_iii.scale(-c * s)),
            third: third.scale(c * c).add(&second.scale(-2.0 * c * s)).add(&first.scale(s * s)),
        })
    }

    /// The δ for which `f_δ` (ε > 0) or `ν_δ` (ε < 0) is CMC-1.
    pub fn cmc1_delta(&self) -> Result<f64> {
        cmc1_delta(self.eps)
    }

    /// The holomorphic hyperbolic Gauss map `G(z)`.
    pub fn gauss_g(&self, z: Complex) -> Extended {
        match self.g.eval(z) {
            Ok(w) => Extended::Finite(w),
            Err(_) => Extended::Infinity,
        }
    }

    /// `G★` from the explicit formula in `G`, `h` and their h-derivatives.
    pub fn gauss_gstar_explicit(&self, z: Complex) -> Result<Extended> {
        let j = self.jet(z)?;
        let w = 1.0 + self.eps * j.h.norm_sqr();
        let den = self.eps * j.h.conj() * j.g_h + 0.5 * j.g_hh * w;
        if den.norm() <= POLE_TOL {
            return Ok(Extended::Infinity);
        }
        Ok(Extended::Finite(j.g - j.g_h * j.g_h * w / den))
    }

    /// `G★ = q/s` where `𝒢Φ = [[p, q], [r, s]]` and `𝒜 = ΦΦ*`, `ℬ = Φe₃Φ*`.
    pub fn gauss_gstar_numeric(&self, z: Complex) -> Result<Extended> {
        let frame = self.build_frame(z)?;
        let h = self.h.eval(z)?;
        let w = self.conformal_factor(h)?;
        // The scalar prefactor of Φ cancels in q/s.
        let phi = Mat2::new(
            Complex::new(-1.0, 0.0),
            -self.eps * h.conj(),
            Complex::new(0.0, 0.0),
            Complex::new(w, 0.0),
        );
        let m = frame.matrix * phi;
        let (q, s) = (m.0[0][1], m.0[1][1]);
        if s.norm() <= POLE_TOL * q.norm().max(1.0) {
            return Ok(Extended::Infinity);
        }
        Ok(Extended::Finite(q / s))
    }

    /// `|∂G★/∂z̄|` by central differences with step `1e-4`.
    pub fn antiholo_defect_gstar(&self, z: Complex) -> Result<f64> {
        const STEP: f64 = 1e-4;
        let at = |w: Complex| -> Result<Complex> {
            self.gauss_gstar_explicit(w)?.finite().ok_or_else(|| {
                PoleSignal {
                    location: "G★".into(),
                }
                .into()
            })
        };
        let du = (at(z + STEP)? - at(z - STEP)?) / (2.0 * STEP);
        let i = Complex::new(0.0, 1.0);
        let dv = (at(z + i * STEP)? - at(z - i * STEP)?) / (2.0 * STEP);
        Ok((0.5 * (du + i * dv)).norm())
    }

    /// Smallest `δ` margin for which `f_δ` has no singular point on the loop.
    pub fn zigzag_trivializing_delta(&self, samples: &[Complex]) -> Result<ZigzagCertificate> {
        if self.eps != 0.0 {
            return Err(WeingartenError::FlatOnly);
        }
        let mut c = f64::INFINITY;
        for &z in samples {
            let rho = self
                .hopf_q(z)
                .and_then(|q| {
                    let h_z = self.h.derivative().eval(z)?;
                    if h_z.norm() <= POLE_TOL {
                        return Err(WeingartenError::DegenerateMetric);
                    }
                    Ok((q / (h_z * h_z)).norm())
                })
                .map_err(|_| WeingartenError::LoopThroughZero(0.0))?;
            c = c.min(rho);
        }
        if c.is_nan() || c <= 1e-12 {
            return Err(WeingartenError::LoopThroughZero(c));
        }
        let delta = 0.5 * c.ln() - ZIGZAG_MARGIN;
        let parallel = self.parallel(delta)?;
        let mut min_phi = f64::INFINITY;
        for &z in samples {
            let phi = parallel.singular_function(z)?;
            min_phi = min_phi.min(phi);
        }
        if min_phi.is_nan() || min_phi <= 0.0 {
            return Err(WeingartenError::CertificateFailed(delta));
        }
        Ok(ZigzagCertificate {
            delta,
            c,
            min_rho: (-2.0 * delta).exp() * c,
            min_phi,
        })
    }

    pub fn sample(&self, z: Complex) -> Result<FrontSample> {
        let p = self.build_front(z)?;
        let s = self.sigma_hat(z)?;
        let q = self.hopf_q(z)?;
        let forms = self.forms_from(s, q);
        Ok(FrontSample {
            z,
            f: p.f,
            nu: p.nu,
            sheet: p.sheet,
            forms,
            curvatures: curvatures(&forms.first, &forms.second).ok(),
            sing: self.phi_from(s, q),
            sigma_hat: s,
            q,
        })
    }
}

#[derive(Debug, Clone)]
pub struct CurveClassification {
    pub vertices: Vec<(Complex, SingularClass)>,
    /// Zeros of Δ between consecutive vertices, refined onto the curve.
    pub swallowtails: Vec<(Complex, SingularClass)>,
}

/// Closed forms of the CMC-1 parallel: `½ ln ε` (ε > 0) from `b_δ = 0`,
/// `½ ln(-ε)` (ε < 0) from `b_δ = -a`.
pub fn cmc1_delta(eps: f64) -> Result<f64> {
    if eps == 0.0 {
        Err(WeingartenError::FlatUnsupported)
    } else {
        Ok(0.5 * eps.abs().ln())
    }
}

/// Class `[X] ∈ C ∪ {∞}` of a lightlike vector, `a/c` for `X = λ (a, c)ᵀ(a, c)*`.
pub fn lightlike_class(x: &Vec4) -> Extended {
    let m = herm_from_vec(x);
    let m = m.as_mat();
    let (m11, m12, m22) = (m.0[0][0], m.0[0][1], m.0[1][1]);
    let m21 = m12.conj();
    if m22.norm() >= m11.norm() {
        if m22.norm() == 0.0 {
            return Extended::Infinity;
        }
        Extended::Finite(m12 / m22)
    } else if m21.norm() <= POLE_TOL * m11.norm() {
        Extended::Infinity
    } else {
        Extended::Finite(m11 / m21)
    }
}

/// `G = [f + ν]`.
pub fn gauss_g_numeric(f: &Vec4, nu: &Vec4) -> Extended {
    lightlike_class(&(*f + *nu))
}

/// `G★ = [f - ν]`.
pub fn gauss_gstar_from_front(f: &Vec4, nu: &Vec4) -> Extended {
    lightlike_class(&(*f - *nu))
}

/// `coth⁻¹ x = ½ ln((x+1)/(x-1))` for `|x| > 1`.
fn acoth(x: f64) -> f64 {
    0.5 * ((x + 1.0) / (x - 1.0)).ln()
}

/// Parallel distances at which `f_δ` becomes singular, one per principal
/// curvature with `|κ| > 1`.
pub fn parallel_singular_radii(kappa1: f64, kappa2: f64) -> Vec<f64> {
    [kappa1, kappa2]
        .into_iter()
        .filter(|k| k.abs() > 1.0)
        .map(acoth)
        .collect()
}
