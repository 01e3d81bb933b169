use std::path::{Path, PathBuf};

use serde::Deserialize;
use thiserror::Error;

use crate::desitter::{Cmc1FaceData, DesitterError};
use crate::holo::{Complex, MeroExpr, ParseError};
use crate::maxface::{AntiMobius, MaxfaceData, MaxfaceError};
use crate::mesh::Rect;
use crate::weingarten::{Coefficients, WeingartenData, WeingartenError};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        source: serde_json::Error,
    },
    #[error("{field}: {message}")]
    Invalid { field: String, message: String },
    #[error("{field}: parse error at offset {}: {source}", source.offset())]
    Expression { field: String, source: ParseError },
    #[error("{field}: {source}")]
    Data {
        field: String,
        source: Box<dyn std::error::Error + Send + Sync>,
    },
}

fn invalid(field: &str, message: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        field: field.to_string(),
        message: message.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SurfaceKind {
    Weingarten,
    Cmc1face,
    Maxface,
}

/// Circle `|z - center| = radius` sampled at `samples` points.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LoopSpec {
    pub center: [f64; 2],
    pub radius: f64,
    #[serde(default = "default_loop_samples")]
    pub samples: usize,
}

fn default_loop_samples() -> usize {
    400
}

impl LoopSpec {
    pub fn points(&self) -> Vec<Complex> {
        let c = Complex::new(self.center[0], self.center[1]);
        (0..self.samples)
            .map(|k| c + Complex::from_polar(self.radius, std::f64::consts::TAU * k as f64 / self.samples as f64))
            .collect()
    }
}

/// `t ↦ (r0 + (r1 - r0) t) e^{2πi·turns·t}`, `t ∈ [0, 1]`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathSpec {
    pub from_radius: f64,
    pub to_radius: f64,
    pub turns: f64,
    #[serde(default = "default_path_samples")]
    pub samples: usize,
}

fn default_path_samples() -> usize {
    1001
}

impl PathSpec {
    pub fn points(&self) -> Vec<Complex> {
        crate::maxface::sample_path(self.samples, |t| {
            Complex::from_polar(
                self.from_radius + (self.to_radius - self.from_radius) * t,
                std::f64::consts::TAU * self.turns * t,
            )
        })
    }
}

/// `z ↦ (a z̄ + b)/(c z̄ + d)` with coefficients as `[re, im]` pairs, or the
/// string `"antipodal"`.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum InvolutionSpec {
    Named(String),
    Coefficients {
        a: [f64; 2],
        b: [f64; 2],
        c: [f64; 2],
        d: [f64; 2],
    },
}

impl InvolutionSpec {
    fn resolve(&self) -> Result<AntiMobius, ConfigError> {
        let cx = |p: [f64; 2]| Complex::new(p[0], p[1]);
        match self {
            InvolutionSpec::Named(n) if n == "antipodal" => Ok(AntiMobius::antipodal()),
            InvolutionSpec::Named(n) => Err(invalid("involution", format!("unknown involution {n:?}"))),
            InvolutionSpec::Coefficients { a, b, c, d } => {
                let t = AntiMobius {
                    a: cx(*a),
                    b: cx(*b),
                    c: cx(*c),
                    d: cx(*d),
                };
                if (t.a * t.d - t.b * t.c).norm() == 0.0 {
                    return Err(invalid("involution", "ad - bc must be nonzero"));
                }
                Ok(t)
            }
        }
    }
}

/// Scene file contents, before validation.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneConfig {
    pub kind: SurfaceKind,
    #[serde(default)]
    pub name: Option<String>,
    #[serde(rename = "G", default)]
    pub gauss: Option<String>,
    #[serde(default)]
    pub h: Option<String>,
    #[serde(default)]
    pub epsilon: Option<f64>,
    #[serde(default)]
    pub a: Option<f64>,
    #[serde(default)]
    pub b: Option<f64>,
    #[serde(default)]
    pub g: Option<String>,
    #[serde(default)]
    pub omega: Option<String>,
    #[serde(default)]
    pub base: Option<[f64; 2]>,
    pub domain: [f64; 4],
    #[serde(default = "default_grid")]
    pub grid: usize,
    #[serde(default)]
    pub deltas: Vec<f64>,
    #[serde(rename = "loop", default)]
    pub loop_: Option<LoopSpec>,
    #[serde(default)]
    pub involution: Option<InvolutionSpec>,
    #[serde(default)]
    pub path: Option<PathSpec>,
    #[serde(default)]
    pub out: Option<PathBuf>,
}

fn default_grid() -> usize {
    100
}

impl SceneConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|source| ConfigError::Json {
            path: path.to_path_buf(),
            source,
        })
    }
}

#[derive(Debug, Clone)]
pub enum Surface {
    Weingarten(WeingartenData),
    Cmc1Face(Cmc1FaceData),
    Maxface(MaxfaceData),
}

/// A validated scene.
#[derive(Debug, Clone)]
pub struct Scene {
    pub name: String,
    pub surface: Surface,
    pub domain: Rect,
    pub grid: usize,
    pub deltas: Vec<f64>,
    pub loop_points: Option<Vec<Complex>>,
    pub involution: Option<AntiMobius>,
    pub path: Option<Vec<Complex>>,
    pub out: Option<PathBuf>,
}

fn expr(field: &str, src: &Option<String>) -> Result<MeroExpr, ConfigError> {
    let src = src.as_deref().ok_or_else(|| invalid(field, "missing expression"))?;
    MeroExpr::parse(src).map_err(|source| ConfigError::Expression {
        field: field.to_string(),
        source,
    })
}

fn data_err<E: std::error::Error + Send + Sync + 'static>(field: &str) -> impl FnOnce(E) -> ConfigError + '_ {
    move |e| ConfigError::Data {
        field: field.to_string(),
        source: Box::new(e),
    }
}

impl Scene {
    pub fn from_config(cfg: &SceneConfig) -> Result<Self, ConfigError> {
        let [u0, u1, v0, v1] = cfg.domain;
        if !(cfg.domain.iter().all(|x| x.is_finite()) && u0 < u1 && v0 < v1) {
            return Err(invalid("domain", "expected [u0, u1, v0, v1] with u0 < u1 and v0 < v1"));
        }
        let domain = Rect::new(u0, u1, v0, v1);
        if !(2..=2000).contains(&cfg.grid) {
            return Err(invalid("grid", "resolution must be between 2 and 2000"));
        }
        if let Some(d) = cfg.deltas.iter().find(|d| !d.is_finite()) {
            return Err(invalid("deltas", format!("non-finite value {d}")));
        }

        let coefficients = || -> Result<Coefficients, ConfigError> {
            match (cfg.epsilon, cfg.a, cfg.b) {
                (Some(e), None, None) => Ok(Coefficients::Epsilon(e)),
                (None, Some(a), Some(b)) => Ok(Coefficients::Ab { a, b }),
                (None, None, None) => Err(invalid("epsilon", "give epsilon or both a and b")),
                _ => Err(invalid("epsilon", "give either epsilon or (a, b), not a mix")),
            }
        };

        let surface = match cfg.kind {
            SurfaceKind::Weingarten | SurfaceKind::Cmc1face => {
                let g = expr("G", &cfg.gauss)?;
                let h = expr("h", &cfg.h)?;
                let coeffs = if cfg.kind == SurfaceKind::Cmc1face && cfg.epsilon.is_none() && cfg.a.is_none() {
                    Coefficients::Epsilon(-1.0)
                } else {
                    coefficients()?
                };
                let d = WeingartenData::new(g, h, coeffs, domain).map_err(data_err::<WeingartenError>("epsilon"))?;
                if cfg.kind == SurfaceKind::Cmc1face {
                    Surface::Cmc1Face(Cmc1FaceData::new(d).map_err(data_err::<DesitterError>("epsilon"))?)
                } else {
                    Surface::Weingarten(d)
                }
            }
            SurfaceKind::Maxface => {
                let g = expr("g", &cfg.g)?;
                let omega = expr("omega", &cfg.omega)?;
                let base = cfg.base.map(|b| Complex::new(b[0], b[1])).unwrap_or_else(|| domain.center());
                if !domain.contains(base) {
                    return Err(invalid("base", "base point must lie in the domain"));
                }
                Surface::Maxface(MaxfaceData::new(g, omega, base).map_err(data_err::<MaxfaceError>("g"))?)
            }
        };

        if let Some(l) = &cfg.loop_ {
            if l.radius.is_nan() || l.radius <= 0.0 || l.samples < 3 {
                return Err(invalid("loop", "radius must be positive and samples >= 3"));
            }
        }
        if let Some(p) = &cfg.path {
            if p.samples < 2 {
                return Err(invalid("path.samples", "need at least 2 samples"));
            }
        }
        let involution = cfg.involution.as_ref().map(|t| t.resolve()).transpose()?;

        Ok(Scene {
            name: cfg.name.clone().unwrap_or_else(|| "scene".to_string()),
            surface,
            domain,
            grid: cfg.grid,
            deltas: cfg.deltas.clone(),
            loop_points: cfg.loop_.as_ref().map(|l| l.points()),
            involution,
            path: cfg.path.as_ref().map(|p| p.points()),
            out: cfg.out.clone(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(json: &str) -> Result<Scene, ConfigError> {
        Scene::from_config(&serde_json::from_str(json).unwrap())
    }

    #[test]
    fn weingarten_scene() {
        let s = parse(r#"{"kind":"weingarten","G":"z","h":"exp(z)","epsilon":0,"domain":[-2,0,-1,1]}"#).unwrap();
        assert!(matches!(s.surface, Surface::Weingarten(_)));
        assert_eq!(s.grid, 100);
    }

    #[test]
    fn parse_error_has_field_and_offset() {
        let e = parse(r#"{"kind":"weingarten","G":"z + * 2","h":"z","epsilon":0,"domain":[0,1,0,1]}"#).unwrap_err();
        assert_eq!(e.to_string().split(':').next().unwrap(), "G");
        assert!(e.to_string().contains("offset 4"));
    }

    #[test]
    fn horo_flat_rejected() {
        let e = parse(r#"{"kind":"weingarten","G":"z","h":"z","a":2,"b":-1,"domain":[0,1,0,1]}"#).unwrap_err();
        assert!(e.to_string().contains("horo-flat unsupported"));
    }

    #[test]
    fn bad_domain() {
        let e = parse(r#"{"kind":"weingarten","G":"z","h":"z","epsilon":0,"domain":[1,0,0,1]}"#).unwrap_err();
        assert!(e.to_string().starts_with("domain:"));
    }

    #[test]
    fn maxface_scene() {
        let s = parse(
            r#"{"kind":"maxface","g":"z^2","omega":"1","domain":[-2,2,-2,2],"base":[1,0],
                "involution":"antipodal","path":{"from_radius":2,"to_radius":0.5,"turns":0.5}}"#,
        )
        .unwrap();
        let p = s.path.unwrap();
        assert_eq!(p.len(), 1001);
        assert!((p[1000] - Complex::new(-0.5, 0.0)).norm() < 1e-12);
    }
}
