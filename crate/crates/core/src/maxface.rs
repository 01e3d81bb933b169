//! Maxfaces in Lorentz-Minkowski space R^3_1.
//!
//! `f = Re ∫ (-2g, 1+g², i(1-g²)) ω̂ dz` from a base point; the surface is
//! spacelike off `{|g| = 1}` and its normal `ψ∘φ⁻¹∘g` extends analytically
//! across that set.

use thiserror::Error;

use crate::holo::{Complex, MeroExpr, PoleSignal, POLE_TOL};
use crate::lorentz::{psi_phi_inv2, Extended, Vec3};

/// Relative tolerance of the adaptive quadrature.
pub const QUAD_TOL: f64 = 1e-12;
const MAX_DEPTH: usize = 40;
// Off-centre split so odd singularities cannot cancel between halves.
const SPLIT: f64 = 0.4718;

/// `|g|² - 1` within this of zero with near-zero slope makes a path non-generic.
pub const GENERIC_TOL: f64 = 1e-10;
/// Maximum `g∘T - 1/ḡ` mismatch accepted along a parity path.
pub const INVOLUTION_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MaxfaceError {
    #[error("pole on integration path near {0}")]
    PoleOnPath(Complex),
    #[error(transparent)]
    Pole(#[from] PoleSignal),
    #[error("g has modulus 1 identically")]
    UnimodularGaussMap,
    #[error("height differential vanishes identically")]
    ZeroDifferential,
    #[error("path endpoints are not related by the involution (gap {0:e})")]
    EndpointsNotRelated(f64),
    #[error("g∘T = 1/ḡ fails along the path (residual {0:e})")]
    InvolutionViolated(f64),
    #[error("non-generic path: tangential contact with |g| = 1 near {0}")]
    NonGenericPath(Complex),
    #[error("path needs at least two samples")]
    ShortPath,
}

pub type Result<T> = std::result::Result<T, MaxfaceError>;

// 8-point Gauss-Legendre nodes and weights on [-1, 1].
const GL_X: [f64; 4] = [
    0.183_434_642_495_649_8,
    0.525_532_409_916_329,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_3,
];
const GL_W: [f64; 4] = [
    0.362_683_783_378_362,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_5,
    0.101_228_536_290_376_3,
];

fn gl8<const N: usize>(
    f: &dyn Fn(Complex) -> Option<[Complex; N]>,
    a: Complex,
    b: Complex,
) -> Option<[Complex; N]> {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = [Complex::new(0.0, 0.0); N];
    for (x, w) in GL_X.iter().zip(GL_W) {
        for s in [-1.0, 1.0] {
            let v = f(mid + half * (s * x))?;
            for k in 0..N {
                acc[k] += w * v[k];
            }
        }
    }
    Some(acc.map(|s| s * half))
}

fn max_diff<const N: usize>(x: &[Complex; N], y: &[Complex; N]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
}

/// Adaptive Gauss-Legendre integral of a vector of holomorphic densities
/// along the segment `[a, b]`.
pub fn integrate_segment<const N: usize>(
    f: &dyn Fn(Complex) -> Option<[Complex; N]>,
    a: Complex,
    b: Complex,
) -> Result<[Complex; N]> {
    fn rec<const N: usize>(
        f: &dyn Fn(Complex) -> Option<[Complex; N]>,
        a: Complex,
        b: Complex,
        whole: [Complex; N],
        depth: usize,
    ) -> Result<[Complex; N]> {
        let m = a + SPLIT * (b - a);
        let left = gl8(f, a, m).ok_or(MaxfaceError::PoleOnPath(m))?;
        let right = gl8(f, m, b).ok_or(MaxfaceError::PoleOnPath(m))?;
        let mut sum = left;
        for k in 0..N {
            sum[k] += right[k];
        }
        let scale = sum.iter().map(|c| c.norm()).fold(1.0, f64::max);
        if max_diff(&sum, &whole) <= QUAD_TOL * scale {
            return Ok(sum);
        }
        if depth == 0 || sum.iter().any(|c| !c.is_finite()) {
            return Err(MaxfaceError::PoleOnPath(m));
        }
        let l = rec(f, a, m, left, depth - 1)?;
        let r = rec(f, m, b, right, depth - 1)?;
        let mut out = l;
        for k in 0..N {
            out[k] += r[k];
        }
        Ok(out)
    }
    if a == b {
        return Ok([Complex::new(0.0, 0.0); N]);
    }
    let whole = gl8(f, a, b).ok_or(MaxfaceError::PoleOnPath(a))?;
    rec(f, a, b, whole, MAX_DEPTH)
}

/// `z ↦ (a z̄ + b)/(c z̄ + d)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AntiMobius {
    pub a: Complex,
    pub b: Complex,
    pub c: Complex,
    pub d: Complex,
}

impl AntiMobius {
    /// `z ↦ -1/z̄`, the antipodal map of the Riemann sphere.
    pub fn antipodal() -> Self {
        let zero = Complex::new(0.0, 0.0);
        let one = Complex::new(1.0, 0.0);
        AntiMobius {
            a: zero,
            b: -one,
            c: one,
            d: zero,
        }
    }

    pub fn apply(&self, z: Extended) -> Extended {
        match z {
            Extended::Infinity => {
                if self.c.norm() == 0.0 {
                    Extended::Infinity
                } else {
                    Extended::Finite(self.a / self.c)
                }
            }
            Extended::Finite(z) => {
                let w = z.conj();
                let den = self.c * w + self.d;
                if den.norm() <= POLE_TOL {
                    Extended::Infinity
                } else {
                    Extended::Finite((self.a * w + self.b) / den)
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Odd,
    Even,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LoopParity {
    pub crossings: usize,
    pub parity: Parity,
}

impl LoopParity {
    fn from_count(crossings: usize) -> Self {
        let parity = if crossings % 2 == 1 { Parity::Odd } else { Parity::Even };
        LoopParity { crossings, parity }
    }
}

#[derive(Debug, Clone)]
pub struct MaxfaceData {
    g: MeroExpr,
    omega: MeroExpr,
    base: Complex,
}

impl MaxfaceData {
    pub fn new(g: MeroExpr, omega: MeroExpr, base: Complex) -> Result<Self> {
        let probes = [
            Complex::new(0.3137, 0.2718),
            Complex::new(-0.577, 0.4142),
            Complex::new(1.234, -0.8765),
        ];
        let all = |pred: &dyn Fn(Complex) -> bool, e: &MeroExpr| {
            probes.iter().all(|z| e.eval(*z).map(pred).unwrap_or(false))
        };
        if all(&|w| (w.norm() - 1.0).abs() <= 1e-14, &g) {
            return Err(MaxfaceError::UnimodularGaussMap);
        }
        if all(&|w| w.norm() <= POLE_TOL, &omega) {
            return Err(MaxfaceError::ZeroDifferential);
        }
        Ok(MaxfaceData { g, omega, base })
    }

    pub fn g(&self) -> &MeroExpr {
        &self.g
    }

    pub fn omega(&self) -> &MeroExpr {
        &self.omega
    }

    pub fn base(&self) -> Complex {
        self.base
    }

    /// `(-2g, 1+g², i(1-g²)) ω̂`.
    pub fn integrand(&self, z: Complex) -> Result<[Complex; 3]> {
        let g = self.g.eval(z)?;
        let w = self.omega.eval(z)?;
        let g2 = g * g;
        let i = Complex::new(0.0, 1.0);
        Ok([-2.0 * g * w, (1.0 + g2) * w, i * (1.0 - g2) * w])
    }

    /// `Re ∫` of the integrand along the segment from the base point to `z`.
    pub fn maxface_point(&self, z: Complex) -> Result<Vec3> {
        let f = |w: Complex| self.integrand(w).ok();
        let v = integrate_segment(&f, self.base, z)?;
        Ok(Vec3::new(v[0].re, v[1].re, v[2].re))
    }

    /// Conformal factor `(1-|g|²)²|ω̂|²` of the induced metric.
    pub fn induced_metric(&self, z: Complex) -> Result<f64> {
        let g = self.g.eval(z)?;
        let w = self.omega.eval(z)?;
        Ok((1.0 - g.norm_sqr()).powi(2) * w.norm_sqr())
    }

    pub fn singular_function(&self, z: Complex) -> Result<f64> {
        Ok(self.g.eval(z)?.norm_sqr() - 1.0)
    }

    fn g_ext(&self, z: Complex) -> Extended {
        match self.g.eval(z) {
            Ok(w) => Extended::Finite(w),
            Err(_) => Extended::Infinity,
        }
    }

    /// Euclidean-unit normal `ψ∘φ⁻¹∘g`, defined across `|g| = 1`.
    pub fn lorentz_normal(&self, z: Complex) -> Vec3 {
        psi_phi_inv2(&self.g_ext(z))
    }

    /// `|g(T(z)) - 1/conj(g(z))|`.
    pub fn involution_residual(&self, t: &AntiMobius, z: Complex) -> Result<f64> {
        let tz = t
            .apply(Extended::Finite(z))
            .finite()
            .ok_or_else(|| PoleSignal {
                location: "T(z)".into(),
            })?;
        let lhs = self.g.eval(tz)?;
        let g = self.g.eval(z)?;
        if g.norm() <= POLE_TOL {
            return Err(PoleSignal {
                location: "1/conj(g)".into(),
            }
            .into());
        }
        Ok((lhs - 1.0 / g.conj()).norm())
    }

    /// Number of transversal sign changes of `|g|² - 1` along a sampled path.
    pub fn crossing_count(&self, path: &[Complex]) -> Result<usize> {
        if path.len() < 2 {
            return Err(MaxfaceError::ShortPath);
        }
        let values = path
            .iter()
            .map(|z| self.singular_function(*z))
            .collect::<Result<Vec<_>>>()?;
        for k in 0..values.len() {
            if values[k].abs() <= GENERIC_TOL {
                let prev = values[k.saturating_sub(1)];
                let next = values[(k + 1).min(values.len() - 1)];
                if (next - prev).abs() <= GENERIC_TOL {
                    return Err(MaxfaceError::NonGenericPath(path[k]));
                }
            }
        }
        Ok(values
            .windows(2)
            .filter(|w| (w[0] < 0.0) != (w[1] < 0.0))
            .count())
    }

    /// Crossing parity along a path from `z0` to `T(z0)`.
    pub fn loop_singular_parity(&self, t: &AntiMobius, path: &[Complex]) -> Result<LoopParity> {
        if path.len() < 2 {
            return Err(MaxfaceError::ShortPath);
        }
        let (z0, z1) = (path[0], path[path.len() - 1]);
        let gap = match t.apply(Extended::Finite(z0)) {
            Extended::Finite(w) => (w - z1).norm(),
            Extended::Infinity => f64::INFINITY,
        };
        if gap > 1e-9 * (1.0 + z1.norm()) {
            return Err(MaxfaceError::EndpointsNotRelated(gap));
        }
        for z in path {
            let r = self.involution_residual(t, *z)?;
            if r > INVOLUTION_TOL {
                return Err(MaxfaceError::InvolutionViolated(r));
            }
        }
        Ok(LoopParity::from_count(self.crossing_count(path)?))
    }

    /// Parity of `γ` followed by `T∘γ`.
    pub fn doubled_parity(&self, t: &AntiMobius, path: &[Complex]) -> Result<LoopParity> {
        let image = path
            .iter()
            .map(|z| t.apply(Extended::Finite(*z)).finite().ok_or(MaxfaceError::PoleOnPath(*z)))
            .collect::<Result<Vec<_>>>()?;
        Ok(LoopParity::from_count(self.crossing_count(path)? + self.crossing_count(&image)?))
    }
}

/// `t ↦ z(t)` sampled at `n` evenly spaced parameters in `[0, 1]`.
pub fn sample_path(n: usize, z: impl Fn(f64) -> Complex) -> Vec<Complex> {
    (0..n).map(|k| z(k as f64 / (n - 1) as f64)).collect()
}
