use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use thiserror::Error;

use super::config::{Scene, Surface};
use super::report::{Check, Report};
use crate::desitter::Cmc1FaceData;
use crate::holo::Complex;
use crate::lorentz::{classify_point, poincare_ball, vec_from_herm, ChartPoint, Herm2, PointClass, Vec3, Vec4};
use crate::maxface::{MaxfaceData, Parity};
use crate::mesh::{export_csv, export_obj, sample_grid, zero_set, CsvRow, Grid, Mesh, MeshError, Polyline, Sampled};
use crate::weingarten::{
    curvatures, dual_curvatures, gauss_g_numeric, FrontSample, SymForm, WeingartenData, WeingartenError,
};

#[derive(Debug, Error)]
pub enum CommandError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: MeshError },
    #[error("cannot create {path}: {source}")]
    Create { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Weingarten(#[from] WeingartenError),
}

pub type Result<T> = std::result::Result<T, CommandError>;

/// Newton iterations applied to each marching-squares crossing.
pub const REFINE_ITERS: usize = 4;

fn max_of(it: impl Iterator<Item = f64>) -> f64 {
    it.fold(0.0, |m, x| if x.is_nan() || m.is_nan() { f64::NAN } else { m.max(x) })
}

fn min_of(it: impl Iterator<Item = f64>) -> f64 {
    it.fold(f64::INFINITY, f64::min)
}

fn grid_for(scene: &Scene, n: usize) -> Result<Grid> {
    Ok(Grid::square(scene.domain, n)?)
}

fn write_file(dir: &Path, name: &str, f: impl FnOnce(BufWriter<File>) -> std::result::Result<(), MeshError>) -> Result<PathBuf> {
    std::fs::create_dir_all(dir).map_err(|source| CommandError::Create {
        path: dir.to_path_buf(),
        source,
    })?;
    let path = dir.join(name);
    let file = File::create(&path).map_err(|source| CommandError::Create {
        path: path.clone(),
        source,
    })?;
    f(BufWriter::new(file)).map_err(|source| CommandError::Write {
        path: path.clone(),
        source,
    })?;
    Ok(path)
}

fn sorted_by_z(mut rows: Vec<CsvRow>) -> Vec<CsvRow> {
    rows.sort_by(|a, b| (a.z.im, a.z.re).partial_cmp(&(b.z.im, b.z.re)).unwrap_or(std::cmp::Ordering::Equal));
    rows
}

/// Magnitude used to scale membership tolerances near poles of the front.
fn mag(f: &Vec4) -> f64 {
    f.euclid_norm().powi(2).max(1.0)
}

struct NodeEval {
    sample: FrontSample,
    frame_det: f64,
    membership: f64,
    lightlike: f64,
    sing_form: f64,
    residual: Option<f64>,
    dual: Option<f64>,
    gauss_g: f64,
}

fn eval_node(d: &WeingartenData, z: Complex) -> std::result::Result<NodeEval, WeingartenError> {
    let sample = d.sample(z)?;
    let frame = d.build_frame(z)?;
    let (f, nu) = (sample.f, sample.nu);
    let m = mag(&f);
    let membership = [(f.inner(&f) + 1.0).abs(), (nu.inner(&nu) - 1.0).abs(), f.inner(&nu).abs()]
        .into_iter()
        .fold(0.0, f64::max)
        / m;
    let (p, q) = (f + nu, f - nu);
    let lightlike = p.inner(&p).abs().max(q.inner(&q).abs()) / m;

    let eps = d.epsilon();
    let forms = sample.forms;
    let combined = forms.first.scale(eps).add(&forms.second.scale(1.0 - eps));
    let conformal = SymForm::new(sample.sing, 0.0, sample.sing);
    let sing_form = combined.max_abs_diff(&conformal) / forms.first.max_abs().max(1.0);

    let (a, b) = d.coefficients();
    let residual = sample.curvatures.map(|k| (a * (k.mean - 1.0) + b * k.gauss).abs());
    let dual = dual_curvatures(&forms)
        .ok()
        .map(|k| (2.0 * eps * (k.mean - 1.0) + (1.0 + eps) * k.gauss).abs());

    let gauss_g = gauss_g_numeric(&f, &nu).chordal_distance(&d.gauss_g(z));
    Ok(NodeEval {
        sample,
        frame_det: (frame.matrix.det() - 1.0).norm(),
        membership,
        lightlike,
        sing_form,
        residual,
        dual,
        gauss_g,
    })
}

/// Everything computed on a front's grid, shared by several commands.
pub struct FrontRun {
    pub report: Report,
    pub rows: Vec<CsvRow>,
    pub curves: Vec<Polyline>,
    pub samples: Sampled<FrontSample>,
}

/// Representation, curvature and singular-set checks on a grid.
pub fn front_suite(d: &WeingartenData, grid: Grid) -> Result<FrontRun> {
    let evals = sample_grid(grid, |z| eval_node(d, z));
    evals.check_coverage()?;
    let ok: Vec<&NodeEval> = evals.values.iter().flatten().collect();

    let mut report = Report::new(format!("front (ε = {})", d.epsilon()));
    let masked = evals.masked_cells();
    report.note(format!(
        "grid {}x{}, {} of {} cells masked",
        grid.nu,
        grid.nv,
        masked,
        grid.cell_count()
    ));
    let upper = ok.iter().filter(|e| classify_point(&e.sample.f, 1e-9 * mag(&e.sample.f)) == PointClass::H3Plus).count();
    report.note(format!("sheet: {} samples in H3+, {} in H3-", upper, ok.len() - upper));

    report.push(Check::at_most("frame determinant", max_of(ok.iter().map(|e| e.frame_det)), 1e-9));
    report.push(Check::at_most("hyperboloid membership (relative)", max_of(ok.iter().map(|e| e.membership)), 1e-9));
    report.push(Check::at_most("f ± ν lightlike (relative)", max_of(ok.iter().map(|e| e.lightlike)), 1e-9));
    report.push(Check::at_most("εI + (1-ε)II two ways", max_of(ok.iter().map(|e| e.sing_form)), 1e-9));
    report.push(Check::at_most(
        "weingarten residual",
        max_of(ok.iter().filter_map(|e| e.residual)),
        1e-5,
    ));
    report.push(Check::at_most("dual relation residual", max_of(ok.iter().filter_map(|e| e.dual)), 1e-5));
    report.push(Check::at_most("G from f + ν (chordal)", max_of(ok.iter().map(|e| e.gauss_g)), 1e-8));

    let phi = evals.map(|e| Some(e.sample.sing));
    let exact = |z: Complex| d.singular_function(z).ok();
    let curves = zero_set(&phi, Some(&exact), REFINE_ITERS);
    let vertices: Vec<Complex> = curves.iter().flat_map(|c| c.points.iter().copied()).collect();
    report.note(format!("singular set: {} curves, {} vertices", curves.len(), vertices.len()));
    if !vertices.is_empty() {
        let worst = max_of(vertices.iter().map(|z| {
            match (d.singular_function(*z), d.sigma_hat(*z)) {
                (Ok(p), Ok(s)) => p.abs() / (1.0 + s),
                _ => f64::NAN,
            }
        }));
        report.push(Check::at_most("refined singular vertices |Φ|/(1+σ̂)", worst, 1e-6));
    }

    let mut rows: Vec<CsvRow> = ok
        .iter()
        .map(|e| CsvRow {
            z: e.sample.z,
            mean: e.sample.curvatures.map(|k| k.mean),
            gauss: e.sample.curvatures.map(|k| k.gauss),
            phi: Some(e.sample.sing),
            delta: None,
            class: None,
        })
        .collect();

    if d.epsilon() != 1.0 {
        let mut counts = [0usize; 3];
        let mut failures = 0;
        for c in &curves {
            match d.classify_curve(&c.points) {
                Ok(cc) => {
                    for (z, k) in cc.vertices.iter().chain(cc.swallowtails.iter()) {
                        counts[k.kind as usize] += 1;
                        rows.push(CsvRow {
                            z: *z,
                            mean: None,
                            gauss: None,
                            phi: d.singular_function(*z).ok(),
                            delta: Some(k.delta),
                            class: Some(k.kind.label().to_string()),
                        });
                    }
                }
                Err(_) => failures += 1,
            }
        }
        report.note(format!(
            "classified: {} cuspidal edge, {} swallowtail, {} degenerate; {} curves not classifiable",
            counts[0], counts[1], counts[2], failures
        ));
    }

    Ok(FrontRun {
        report,
        rows: sorted_by_z(rows),
        curves,
        samples: evals.map(|e| Some(e.sample)),
    })
}

/// Explicit versus projected G★, and the ∂̄-defect.
pub fn gauss_suite(d: &WeingartenData, grid: Grid) -> Result<Report> {
    let vals = sample_grid(grid, |z| -> std::result::Result<(f64, f64, f64), WeingartenError> {
        let e = d.gauss_gstar_explicit(z)?;
        let n = d.gauss_gstar_numeric(z)?;
        let defect = d.antiholo_defect_gstar(z)?;
        let abs = match (e.finite(), n.finite()) {
            (Some(a), Some(b)) => (a - b).norm() / (1.0 + a.norm()),
            _ => e.chordal_distance(&n),
        };
        Ok((abs, e.chordal_distance(&n), defect))
    });
    let ok: Vec<&(f64, f64, f64)> = vals.values.iter().flatten().collect();
    let mut report = Report::new("gauss maps");
    report.note(format!("{} of {} samples evaluated", ok.len(), grid.len()));
    report.push(Check::at_most("|G★ explicit - projected| / (1+|G★|)", max_of(ok.iter().map(|v| v.0)), 1e-8));
    let defect = max_of(ok.iter().map(|v| v.2));
    if d.epsilon() == 0.0 {
        report.push(Check::at_most("antiholomorphic defect of G★", defect, 1e-6));
    } else {
        report.push(Check::above("antiholomorphic defect of G★", defect, 1e-3));
    }
    Ok(report)
}

/// Residuals of the parallel family, the CMC-1 parallel and the zig-zag
/// certificate.
pub fn parallel_suite(d: &WeingartenData, grid: Grid, deltas: &[f64], loop_points: Option<&[Complex]>) -> Result<Report> {
    let mut report = Report::new("parallel fronts");
    let (a, _) = d.coefficients();
    for &delta in deltas {
        let p = d.parallel_params(delta);
        let pd = d.parallel(delta)?;
        let vals = sample_grid(grid, |z| -> std::result::Result<(Option<f64>, f64), WeingartenError> {
            let forms = d.parallel_forms(z, delta)?;
            let res = curvatures(&forms.first, &forms.second)
                .ok()
                .map(|k| (a * (k.mean - 1.0) + p.b_delta * k.gauss).abs());
            let x = d.parallel_front(z, delta)?;
            let y = pd.build_front(z)?;
            let agree = x.f.max_abs_diff(&y.f).max(x.nu.max_abs_diff(&y.nu)) / x.f.euclid_norm().max(1.0);
            Ok((res, agree))
        });
        let ok: Vec<&(Option<f64>, f64)> = vals.values.iter().flatten().collect();
        report.push(Check::at_most(
            &format!("δ = {delta}: residual (b_δ = {:.6})", p.b_delta),
            max_of(ok.iter().filter_map(|v| v.0)),
            1e-5,
        ));
        report.push(Check::at_most(
            &format!("δ = {delta}: f_δ against parallel data"),
            max_of(ok.iter().map(|v| v.1)),
            1e-9,
        ));
    }

    if d.epsilon() != 0.0 {
        let delta = d.cmc1_delta()?;
        report.note(format!(
            "CMC-1 parallel at δ* = {delta:.12} ({} is CMC-1)",
            if d.epsilon() > 0.0 { "f_δ*" } else { "ν_δ*" }
        ));
        let eps_pos = d.epsilon() > 0.0;
        let vals = sample_grid(grid, |z| -> std::result::Result<f64, WeingartenError> {
            let forms = d.parallel_forms(z, delta)?;
            let form = if eps_pos { forms.first } else { forms.third };
            let s = (2.0 * delta).exp() * d.sigma_hat(z)?;
            let expected = 4.0 * d.hopf_q(z)?.norm_sqr() / s;
            Ok(form.max_abs_diff(&SymForm::new(expected, 0.0, expected)) / expected.max(1.0))
        });
        report.push(Check::at_most(
            "CMC-1 parallel: metric = 4|Q|²/dσ²",
            max_of(vals.values.iter().flatten().copied()),
            1e-8,
        ));
    } else if let Some(points) = loop_points {
        // A loop the certificate cannot handle is a failed check, not bad input.
        match d.zigzag_trivializing_delta(points) {
            Ok(cert) => {
                report.note(format!(
                    "zig-zag certificate: δ = {:.9}, c = {:.9}",
                    cert.delta, cert.c
                ));
                report.push(Check::above("min e^{-2δ}|q/h_z²| on loop", cert.min_rho, 1.0));
                report.push(Check::above("min Φ_δ on loop", cert.min_phi, 1e-3));
            }
            Err(e @ (WeingartenError::LoopThroughZero(_) | WeingartenError::CertificateFailed(_))) => {
                report.note(format!("zig-zag certificate: {e}"));
                let c = match e {
                    WeingartenError::LoopThroughZero(c) => c,
                    _ => f64::NAN,
                };
                report.push(Check::above("min |q/h_z²| on loop", c, 1e-12));
            }
            Err(e) => return Err(e.into()),
        }
    }
    Ok(report)
}

struct FaceEval {
    det: f64,
    null: f64,
    lift: f64,
    companion: f64,
    face_vs_front: f64,
    normal_vs_front: Option<f64>,
    chart: Option<f64>,
    r: f64,
    r_chart: f64,
    psi_unit: f64,
    psi_orth: f64,
    sing: f64,
    point: Vec4,
    tilde: Vec4,
}

fn face_node(d: &Cmc1FaceData, z: Complex) -> std::result::Result<FaceEval, crate::desitter::DesitterError> {
    const STEP: f64 = 1e-5;
    let f = d.null_lift(z)?;
    let res = d.verify_lift(z, STEP)?;
    let point = d.face_point(z)?;
    let base = d.base();
    let front = base.build_front(z)?;
    let m = mag(&point).max(mag(&front.nu));
    let face_vs_front = point.max_abs_diff(&front.nu.scale(-1.0)) / m.sqrt();
    let normal = d.normal(z).ok();
    let (normal_vs_front, chart) = match normal {
        Some(n) => {
            let frame = base.build_frame(z)?;
            let h = base.h().eval(z)?;
            let (a, _) = base.middle_factors(h)?;
            let a_vec = vec_from_herm(&Herm2::try_from_mat(frame.matrix.conjugate(&a)).expect("Hermitian"));
            let diff = n.max_abs_diff(&a_vec) / mag(&n).sqrt();
            let e = d.extended_normal(z)?;
            let chart = match (crate::lorentz::stereo_phi3(&n), e.n) {
                (ChartPoint::Finite(x), ChartPoint::Finite(y)) => {
                    let dist: f64 = x.iter().zip(y).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
                    let size: f64 = x.iter().map(|a| a * a).sum::<f64>().sqrt();
                    Some(dist / (1.0 + size))
                }
                (ChartPoint::Infinity, ChartPoint::Infinity) => Some(0.0),
                _ => None,
            };
            (Some(diff), chart)
        }
        None => (None, None),
    };
    let e = d.extended_normal(z)?;
    let fd = |w: Complex| d.face_point(w).ok();
    let du = fd(z + STEP).zip(fd(z - STEP)).map(|(a, b)| (a - b).scale(0.5 / STEP));
    let dv = fd(z + Complex::new(0.0, STEP))
        .zip(fd(z - Complex::new(0.0, STEP)))
        .map(|(a, b)| (a - b).scale(0.5 / STEP));
    let psi_orth = match (du, dv) {
        (Some(u), Some(v)) => {
            let s = u.euclid_norm().max(v.euclid_norm()).max(1e-300);
            (e.psi.inner(&u).abs().max(e.psi.inner(&v).abs()) / s).max(e.psi.inner(&point).abs() / point.euclid_norm())
        }
        _ => f64::NAN,
    };
    Ok(FaceEval {
        det: (f.det() - 1.0).norm(),
        null: res.null / f.max_abs().powi(2).max(1.0),
        lift: res.lift,
        companion: res.companion,
        face_vs_front,
        normal_vs_front,
        chart,
        r: e.r,
        r_chart: e.r_chart,
        psi_unit: (e.psi.euclid_norm() - 1.0).abs(),
        psi_orth,
        sing: d.face_singular_function(z)?,
        point,
        tilde: vec_from_herm(&d.normal_tilde(z)?),
    })
}

pub struct FaceRun {
    pub report: Report,
    pub rows: Vec<CsvRow>,
    pub curves: Vec<Polyline>,
    pub points: Sampled<(Vec4, Vec4)>,
}

/// Null lift, structure equations, singular set and extended normal.
pub fn face_suite(d: &Cmc1FaceData, grid: Grid) -> Result<FaceRun> {
    let evals = sample_grid(grid, |z| face_node(d, z));
    evals.check_coverage()?;
    let ok: Vec<&FaceEval> = evals.values.iter().flatten().collect();
    let mut report = Report::new("CMC-1 face");
    report.push(Check::at_most("det F - 1", max_of(ok.iter().map(|e| e.det)), 1e-9));
    report.push(Check::at_most("null condition det F_z (relative)", max_of(ok.iter().map(|e| e.null)), 1e-8));
    report.push(Check::at_most("F⁻¹dF structure equation", max_of(ok.iter().map(|e| e.lift)), 1e-5));
    report.push(Check::at_most("dF F⁻¹ structure equation", max_of(ok.iter().map(|e| e.companion)), 1e-5));
    report.push(Check::at_most("Fe₃F* = -GBG* (relative)", max_of(ok.iter().map(|e| e.face_vs_front)), 1e-9));
    report.push(Check::at_most(
        "ν = GAG* (relative)",
        max_of(ok.iter().filter_map(|e| e.normal_vs_front)),
        1e-9,
    ));
    report.push(Check::at_most(
        "N = φ(ν) at regular points",
        max_of(ok.iter().filter_map(|e| e.chart)),
        1e-8,
    ));
    report.push(Check::above("min denominator r", min_of(ok.iter().map(|e| e.r)), 0.0));
    report.push(Check::info("min chart denominator r'", min_of(ok.iter().map(|e| e.r_chart))));
    report.push(Check::at_most("|Ψ|_E - 1", max_of(ok.iter().map(|e| e.psi_unit)), 1e-12));
    report.push(Check::at_most("Ψ ⟂ f, df (relative)", max_of(ok.iter().map(|e| e.psi_orth)), 1e-6));

    let field = evals.map(|e| Some(e.sing));
    let exact = |z: Complex| d.face_singular_function(z).ok();
    let curves = zero_set(&field, Some(&exact), REFINE_ITERS);
    let vertices: Vec<Complex> = curves.iter().flat_map(|c| c.points.iter().copied()).collect();
    report.note(format!("singular set |h| = 1: {} curves, {} vertices", curves.len(), vertices.len()));
    if !vertices.is_empty() {
        report.push(Check::at_most(
            "refined singular vertices ||h|²-1|",
            max_of(vertices.iter().map(|z| d.face_singular_function(*z).map(f64::abs).unwrap_or(f64::NAN))),
            1e-6,
        ));
        let (mut flips, mut jump, mut r_min) = (0usize, 0f64, f64::INFINITY);
        for z in &vertices {
            let Some((n, r)) = crossing_normal(d, *z) else { continue };
            let offset = 1e-4;
            let (a, b) = (*z + n * offset, *z - n * offset);
            if let (Ok(na), Ok(nb)) = (d.normal(a), d.normal(b)) {
                if (na.x0() > 0.0) != (nb.x0() > 0.0) {
                    flips += 1;
                }
            }
            if let (Ok(pa), Ok(pb)) = (d.extended_normal(a), d.extended_normal(b)) {
                jump = jump.max(pa.psi.max_abs_diff(&pb.psi));
            }
            r_min = r_min.min(r);
        }
        report.push(Check::above("min r on singular curve", r_min, 0.0));
        report.push(Check::at_most("Ψ jump across curve (offset 1e-4)", jump, 1e-3));
        report.push(Check::at_most(
            "vertices without sheet flip",
            (vertices.len() - flips) as f64,
            0.0,
        ));
    }

    let rows = ok
        .iter()
        .zip(evals.values.iter().enumerate().filter(|(_, v)| v.is_some()).map(|(k, _)| k))
        .map(|(e, k)| CsvRow {
            z: grid.point(k % grid.nu, k / grid.nu),
            mean: None,
            gauss: None,
            phi: Some(e.sing),
            delta: None,
            class: None,
        })
        .collect();
    Ok(FaceRun {
        report,
        rows,
        curves,
        points: evals.map(|e| Some((e.point, e.tilde))),
    })
}

/// Unit gradient direction of `|h|²` and the denominator `r` at `z`.
fn crossing_normal(d: &Cmc1FaceData, z: Complex) -> Option<(Complex, f64)> {
    let s = 1e-6;
    let f = |w: Complex| d.face_singular_function(w).ok();
    let g = Complex::new(
        (f(z + s)? - f(z - s)?) / (2.0 * s),
        (f(z + Complex::new(0.0, s))? - f(z - Complex::new(0.0, s))?) / (2.0 * s),
    );
    let r = d.extended_normal(z).ok()?.r;
    (g.norm() > 0.0).then(|| (g / g.norm(), r))
}

struct MaxEval {
    point: Vec3,
    conformal: f64,
    metric: f64,
    orth: f64,
    norm: f64,
    sing: f64,
}

fn max_node(d: &MaxfaceData, z: Complex) -> std::result::Result<MaxEval, crate::maxface::MaxfaceError> {
    const STEP: f64 = 1e-5;
    let point = d.maxface_point(z)?;
    let fu = (d.maxface_point(z + STEP)? - d.maxface_point(z - STEP)?).scale(0.5 / STEP);
    let i = Complex::new(0.0, STEP);
    let fv = (d.maxface_point(z + i)? - d.maxface_point(z - i)?).scale(0.5 / STEP);
    let scale = fu.euclid_norm().powi(2).max(fv.euclid_norm().powi(2)).max(1e-300);
    let conformal = (fu.inner(&fu) - fv.inner(&fv)).abs().max(fu.inner(&fv).abs()) / scale;
    let lam = d.induced_metric(z)?;
    let metric = (fu.inner(&fu) - lam).abs() / scale;
    let nu = d.lorentz_normal(z);
    let orth = nu.inner(&fu).abs().max(nu.inner(&fv).abs()) / scale.sqrt();
    Ok(MaxEval {
        point,
        conformal,
        metric,
        orth,
        norm: nu.inner(&nu),
        sing: d.singular_function(z)?,
    })
}

pub struct MaxfaceRun {
    pub report: Report,
    pub rows: Vec<CsvRow>,
    pub curves: Vec<Polyline>,
    pub points: Sampled<Vec3>,
}

/// Conformality, normal, involution and parity checks.
pub fn maxface_suite(d: &MaxfaceData, grid: Grid, scene: &Scene) -> Result<MaxfaceRun> {
    let evals = sample_grid(grid, |z| max_node(d, z));
    evals.check_coverage()?;
    let ok: Vec<&MaxEval> = evals.values.iter().flatten().collect();
    let regular: Vec<&&MaxEval> = ok.iter().filter(|e| e.sing.abs() > 1e-3).collect();
    let mut report = Report::new("maxface");
    report.push(Check::at_most("conformality (relative)", max_of(regular.iter().map(|e| e.conformal)), 1e-5));
    report.push(Check::at_most("metric (1-|g|²)²|ω̂|² (relative)", max_of(regular.iter().map(|e| e.metric)), 1e-5));
    report.push(Check::at_most("ν ⟂ df (relative)", max_of(regular.iter().map(|e| e.orth)), 1e-5));
    let off = ok.iter().filter(|e| e.sing.abs() > 1e-8);
    report.push(Check::at_most("max ⟨ν,ν⟩ off |g| = 1", max_of(off.map(|e| e.norm)), 0.0));

    let field = evals.map(|e| Some(e.sing));
    let exact = |z: Complex| d.singular_function(z).ok();
    let curves = zero_set(&field, Some(&exact), REFINE_ITERS);
    let vertices: Vec<Complex> = curves.iter().flat_map(|c| c.points.iter().copied()).collect();
    report.note(format!("singular set |g| = 1: {} curves, {} vertices", curves.len(), vertices.len()));
    if !vertices.is_empty() {
        report.push(Check::at_most(
            "|⟨ν,ν⟩| on singular curve",
            max_of(vertices.iter().map(|z| {
                let n = d.lorentz_normal(*z);
                n.inner(&n).abs()
            })),
            1e-8,
        ));
    }

    if let Some(t) = &scene.involution {
        let samples: Vec<Complex> = match &scene.path {
            Some(p) => p.clone(),
            None => ok.iter().zip(0..).map(|(_, k)| grid.point(k % grid.nu, k / grid.nu)).collect(),
        };
        let res = max_of(samples.iter().map(|z| d.involution_residual(t, *z).unwrap_or(f64::NAN)));
        report.push(Check::at_most("involution residual |g∘T - 1/ḡ|", res, 1e-9));
        if let Some(path) = &scene.path {
            match d.loop_singular_parity(t, path) {
                Ok(p) => {
                    report.push(Check::info("crossings on path", p.crossings as f64));
                    report.push(Check::at_most(
                        "path parity is odd (0 = odd)",
                        if p.parity == Parity::Odd { 0.0 } else { 1.0 },
                        0.0,
                    ));
                }
                Err(e) => {
                    report.note(format!("parity: {e}"));
                    report.push(Check::at_most("path parity is odd (0 = odd)", f64::NAN, 0.0));
                }
            }
            if let Ok(p) = d.doubled_parity(t, path) {
                report.push(Check::at_most(
                    "doubled path parity is even (0 = even)",
                    if p.parity == Parity::Even { 0.0 } else { 1.0 },
                    0.0,
                ));
            }
        }
    }

    let rows = evals
        .values
        .iter()
        .enumerate()
        .filter_map(|(k, v)| {
            v.as_ref().map(|e| CsvRow {
                z: grid.point(k % grid.nu, k / grid.nu),
                mean: None,
                gauss: None,
                phi: Some(e.sing),
                delta: None,
                class: None,
            })
        })
        .collect();
    Ok(MaxfaceRun {
        report,
        rows,
        curves,
        points: evals.map(|e| Some(e.point)),
    })
}

fn ball_point(f: &Vec4) -> Option<[f64; 3]> {
    // H3- is drawn through its antipodal copy in H3+.
    let f = if f.x0() < 0.0 { f.scale(-1.0) } else { *f };
    poincare_ball(&f).ok()
}

fn curve_lines(mesh: &mut Mesh, curves: &[Polyline], lift: impl Fn(Complex) -> Option<[f64; 3]>) {
    for c in curves {
        let mut pts: Vec<[f64; 3]> = c.points.iter().filter_map(|z| lift(*z)).collect();
        if c.closed {
            if let Some(p) = pts.first().copied() {
                pts.push(p);
            }
        }
        if pts.len() >= 2 {
            mesh.add_line(&pts);
        }
    }
}

pub fn out_dir(scene: &Scene, flag: Option<&Path>) -> PathBuf {
    flag.map(Path::to_path_buf)
        .or_else(|| scene.out.clone())
        .unwrap_or_else(|| PathBuf::from("frontlab-out"))
}

fn need_front<'a>(scene: &'a Scene, cmd: &str) -> Result<&'a WeingartenData> {
    match &scene.surface {
        Surface::Weingarten(d) => Ok(d),
        Surface::Cmc1Face(f) => Ok(f.base()),
        Surface::Maxface(_) => Err(CommandError::Usage(format!("{cmd} needs G and h (kind weingarten or cmc1face)"))),
    }
}

pub fn analyze(scene: &Scene, out: &Path) -> Result<Report> {
    let grid = grid_for(scene, scene.grid)?;
    match &scene.surface {
        Surface::Maxface(d) => {
            let run = maxface_suite(d, grid, scene)?;
            write_file(out, &format!("{}_analyze.csv", scene.name), |w| export_csv(w, &run.rows))?;
            Ok(run.report)
        }
        _ => {
            let d = need_front(scene, "analyze")?;
            let run = front_suite(d, grid)?;
            write_file(out, &format!("{}_analyze.csv", scene.name), |w| export_csv(w, &run.rows))?;
            Ok(run.report)
        }
    }
}

pub fn render(scene: &Scene, out: &Path) -> Result<Report> {
    let grid = grid_for(scene, scene.grid)?;
    let mut report = Report::new("render");
    match &scene.surface {
        Surface::Weingarten(d) => {
            let run = front_suite(d, grid)?;
            let pts = run.samples.map(|s| ball_point(&s.f));
            let mut mesh = Mesh::from_grid(&pts);
            curve_lines(&mut mesh, &run.curves, |z| d.build_front(z).ok().and_then(|p| ball_point(&p.f)));
            let path = write_file(out, &format!("{}.obj", scene.name), |w| export_obj(w, &mesh))?;
            write_file(out, &format!("{}.csv", scene.name), |w| export_csv(w, &run.rows))?;
            report.note(format!("wrote {} ({} faces, {} curves)", path.display(), mesh.faces.len(), mesh.lines.len()));
        }
        Surface::Cmc1Face(d) => {
            let run = face_suite(d, grid)?;
            let pts = run.points.map(|(f, _)| Some(f.spatial()));
            let mut mesh = Mesh::from_grid(&pts);
            curve_lines(&mut mesh, &run.curves, |z| d.face_point(z).ok().map(|f| f.spatial()));
            let path = write_file(out, &format!("{}.obj", scene.name), |w| export_obj(w, &mesh))?;
            write_file(out, &format!("{}_normal.csv", scene.name), |w| face_csv(w, &run.points))?;
            report.note(format!("wrote {} ({} faces, {} curves)", path.display(), mesh.faces.len(), mesh.lines.len()));
        }
        Surface::Maxface(d) => {
            let run = maxface_suite(d, grid, scene)?;
            let pts = run.points.map(|p| Some(p.0));
            let mut mesh = Mesh::from_grid(&pts);
            curve_lines(&mut mesh, &run.curves, |z| d.maxface_point(z).ok().map(|p| p.0));
            let path = write_file(out, &format!("{}.obj", scene.name), |w| export_obj(w, &mesh))?;
            write_file(out, &format!("{}.csv", scene.name), |w| export_csv(w, &run.rows))?;
            report.note(format!("wrote {} ({} faces, {} curves)", path.display(), mesh.faces.len(), mesh.lines.len()));
        }
    }
    Ok(report)
}

/// Per-sample face coordinates with `x0` and the `ν̃` direction as attributes.
fn face_csv<W: std::io::Write>(mut w: W, pts: &Sampled<(Vec4, Vec4)>) -> std::result::Result<(), MeshError> {
    writeln!(w, "# frontlab {}", env!("CARGO_PKG_VERSION"))?;
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["z_re", "z_im", "x0", "x1", "x2", "x3", "nt0", "nt1", "nt2", "nt3"])?;
    for (k, v) in pts.values.iter().enumerate() {
        let Some((f, t)) = v else { continue };
        let z = pts.grid.point(k % pts.grid.nu, k / pts.grid.nu);
        let t = t.scale(1.0 / t.euclid_norm());
        let mut rec = vec![z.re.to_string(), z.im.to_string()];
        rec.extend(f.0.iter().chain(t.0.iter()).map(|x| x.to_string()));
        out.write_record(&rec)?;
    }
    out.flush()?;
    Ok(())
}

pub fn parallel(scene: &Scene) -> Result<Report> {
    let d = need_front(scene, "parallel")?;
    let grid = grid_for(scene, scene.grid)?;
    parallel_suite(d, grid, &scene.deltas, scene.loop_points.as_deref())
}

pub fn gaussmaps(scene: &Scene) -> Result<Report> {
    let d = need_front(scene, "gaussmaps")?;
    let grid = grid_for(scene, scene.grid.min(60))?;
    gauss_suite(d, grid)
}

pub fn face(scene: &Scene, out: &Path) -> Result<Report> {
    let Surface::Cmc1Face(d) = &scene.surface else {
        return Err(CommandError::Usage("face needs kind cmc1face".into()));
    };
    let run = face_suite(d, grid_for(scene, scene.grid)?)?;
    write_file(out, &format!("{}_face.csv", scene.name), |w| export_csv(w, &run.rows))?;
    Ok(run.report)
}

pub fn maxface(scene: &Scene, out: &Path) -> Result<Report> {
    let Surface::Maxface(d) = &scene.surface else {
        return Err(CommandError::Usage("maxface needs kind maxface".into()));
    };
    let run = maxface_suite(d, grid_for(scene, scene.grid)?, scene)?;
    write_file(out, &format!("{}_maxface.csv", scene.name), |w| export_csv(w, &run.rows))?;
    Ok(run.report)
}

/// Every applicable suite; writes `<name>_verify.csv`.
pub fn verify(scene: &Scene, out: &Path) -> Result<Report> {
    let grid = grid_for(scene, scene.grid)?;
    let mut report = Report::new(format!("verify {}", scene.name));
    let rows = match &scene.surface {
        Surface::Weingarten(d) => {
            let run = front_suite(d, grid)?;
            report.extend(run.report);
            report.extend(gauss_suite(d, grid_for(scene, scene.grid.min(60))?)?);
            report.extend(parallel_suite(d, grid, &scene.deltas, scene.loop_points.as_deref())?);
            run.rows
        }
        Surface::Cmc1Face(d) => {
            let run = front_suite(d.base(), grid)?;
            report.extend(run.report);
            let face = face_suite(d, grid)?;
            report.extend(face.report);
            report.extend(parallel_suite(d.base(), grid, &scene.deltas, None)?);
            let mut rows = run.rows;
            rows.extend(face.rows.into_iter().map(|r| CsvRow {
                class: Some("face".into()),
                ..r
            }));
            rows
        }
        Surface::Maxface(d) => {
            let run = maxface_suite(d, grid, scene)?;
            report.extend(run.report);
            run.rows
        }
    };
    write_file(out, &format!("{}_verify.csv", scene.name), |w| export_csv(w, &rows))?;
    Ok(report)
}
