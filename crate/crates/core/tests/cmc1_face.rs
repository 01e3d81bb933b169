mod common;

use common::*;
use frontlab::desitter::{Cmc1FaceData, DesitterError};
use frontlab::lorentz::{classify_point, PointClass, Vec4};
use frontlab::Complex;

fn face() -> Cmc1FaceData {
    Cmc1FaceData::new(fx2()).unwrap()
}

fn scale(v: &Vec4) -> f64 {
    v.euclid_norm().powi(2).max(1.0)
}

/// Points of `|h| = 1` found by scanning rays from the origin and bisecting.
fn radial_singular_points(d: &Cmc1FaceData, rays: usize) -> Vec<Complex> {
    let rect = d.base().domain();
    let w = |z: Complex| d.face_singular_function(z).unwrap();
    let mut out = Vec::new();
    for k in 0..rays {
        let dir = Complex::from_polar(1.0, std::f64::consts::TAU * (k as f64 + 0.5) / rays as f64);
        let step = 1e-3;
        let mut t = step;
        while rect.contains(dir * (t + step)) {
            let (a, b) = (w(dir * t), w(dir * (t + step)));
            if a.signum() != b.signum() {
                let s = bisect(|s| w(dir * s), t, t + step);
                out.push(dir * s);
            }
            t += step;
        }
    }
    out
}

#[test]
fn lift_determinant_and_null_condition() {
    let d = face();
    for z in grid_points(d.base().domain(), 40) {
        let f = d.null_lift(z).unwrap();
        assert!((f.det() - 1.0).norm() <= 1e-8, "{z}");
        let r = d.verify_lift(z, 1e-5).unwrap();
        assert!(r.null <= 1e-8 * f.max_abs().powi(2).max(1.0), "{z}: {:e}", r.null);
    }
}

#[test]
fn face_is_minus_the_front_normal() {
    let d = face();
    for z in grid_points(d.base().domain(), 40) {
        let x = d.face_point(z).unwrap();
        let nu = d.base().build_front(z).unwrap().nu;
        let diff = (x + nu).euclid_norm() / scale(&x);
        assert!(diff <= 1e-9, "{z}: {diff:e}");
        assert!((x.inner(&x) - 1.0).abs() / scale(&x) <= 1e-9);
    }
}

#[test]
fn lift_structure_equations() {
    let d = face();
    for z in sample_points(d.base().domain(), 200, 8) {
        let Ok(r) = d.verify_lift(z, 1e-5) else { continue };
        assert!(r.lift <= 1e-5, "{z}: {:e}", r.lift);
        assert!(r.companion <= 1e-5, "{z}: {:e}", r.companion);
    }
}

#[test]
fn extracted_singular_curve_matches_radial_bisection() {
    use frontlab::mesh::{sample_grid, zero_set, Grid};
    let d = face();
    let grid = Grid::square(d.base().domain(), 100).unwrap();
    let field = sample_grid(grid, |z| d.face_singular_function(z));
    let exact = |z: Complex| d.face_singular_function(z).ok();
    let curves = zero_set(&field, Some(&exact), 4);
    assert!(!curves.is_empty());
    let oracle = radial_singular_points(&d, 2000);
    let cell = grid.du().max(grid.dv());
    for c in &curves {
        for z in &c.points {
            let near = oracle.iter().map(|w| (w - z).norm()).fold(f64::MAX, f64::min);
            assert!(near <= cell, "{z}: {near}");
        }
    }
    // The Jacobian of the face drops rank on the oracle points and not off them.
    let f = |w: Complex| d.face_point(w).ok();
    for z in oracle.iter().step_by(97) {
        let (big, small) = jacobian_singular_values(&f, *z, 1e-6).unwrap();
        assert!(small / big < 1e-4, "{z}");
        let off = *z * 1.05;
        if d.base().domain().contains(off) {
            let (big, small) = jacobian_singular_values(&f, off, 1e-6).unwrap();
            assert!(small / big > 1e-3, "{off}");
        }
    }
}

#[test]
fn lift_denominator_positive() {
    let d = face();
    let mut pts = sample_points(d.base().domain(), 950, 31);
    let on_curve = radial_singular_points(&d, 400);
    pts.extend(on_curve.iter().step_by(on_curve.len() / 50).take(50));
    assert_eq!(pts.len(), 1000);
    for z in pts {
        let n = d.extended_normal(z).unwrap();
        assert!(n.r > 0.0, "{z}");
        assert!(n.r_chart >= 0.0, "{z}");
    }
}

#[test]
fn extended_normal_is_unit_and_orthogonal() {
    let d = face();
    let f = |w: Complex| d.face_point(w).ok();
    for z in sample_points(d.base().domain(), 300, 12) {
        let n = d.extended_normal(z).unwrap();
        assert!((n.psi.euclid_norm() - 1.0).abs() < 1e-12);
        if d.face_singular_function(z).unwrap().abs() < 1e-2 {
            continue;
        }
        let (fu, fv) = partials(&f, z, 1e-6).unwrap();
        let r = n.psi.inner(&fu).abs() / fu.euclid_norm() + n.psi.inner(&fv).abs() / fv.euclid_norm();
        assert!(r <= 1e-6, "{z}: {r:e}");
    }
}

#[test]
fn extended_normal_continuous_across_singular_curve() {
    let d = face();
    for z in radial_singular_points(&d, 200) {
        let dir = z / z.norm();
        let inside = d.extended_normal(z - dir * 1e-4).unwrap().psi;
        let outside = d.extended_normal(z + dir * 1e-4).unwrap().psi;
        assert!(inside.max_abs_diff(&outside) <= 1e-3, "{z}");
    }
}

#[test]
fn normal_changes_sheet_across_singular_curve() {
    let d = face();
    for z in radial_singular_points(&d, 200) {
        let dir = z / z.norm();
        let (zi, zo) = (z - dir * 1e-3, z + dir * 1e-3);
        let class = |w: Complex| {
            let n = d.normal(w).unwrap();
            classify_point(&n, 1e-8 * scale(&n))
        };
        // |h| < 1 on the inner side along every ray here.
        assert!(d.face_singular_function(zi).unwrap() < 0.0);
        assert_eq!(class(zi), PointClass::H3Plus, "{zi}");
        assert_eq!(class(zo), PointClass::H3Minus, "{zo}");
    }
    assert_eq!(d.normal(c(0.6823278038280193, 0.0)), Err(DesitterError::SingularSet));
}

#[test]
fn only_de_sitter_data_makes_faces() {
    assert!(matches!(Cmc1FaceData::new(fx1()), Err(DesitterError::NotCmc1Face(_))));
    assert!(matches!(Cmc1FaceData::new(fx3()), Err(DesitterError::NotCmc1Face(_))));
}
