//! Singular distances of parallel surfaces, predicted from principal
//! curvatures and observed as rank drops of the Jacobian of `f_δ`.
mod common;

use common::*;
use frontlab::lorentz::Vec4;
use frontlab::weingarten::{curvatures, parallel_singular_radii};
use frontlab::Complex;

type Param = Box<dyn Fn(Complex) -> (Vec4, Vec4)>;

/// Geodesic sphere of radius `r` about the origin, unit normal pointing in.
fn sphere(r: f64) -> Param {
    Box::new(move |z: Complex| {
        let (u, v) = (z.re, z.im);
        let n = [u.sin() * v.cos(), u.sin() * v.sin(), u.cos()];
        let f = Vec4([r.cosh(), r.sinh() * n[0], r.sinh() * n[1], r.sinh() * n[2]]);
        let nu = Vec4([-r.sinh(), -r.cosh() * n[0], -r.cosh() * n[1], -r.cosh() * n[2]]);
        (f, nu)
    })
}

/// Hyperbolic cylinder at distance `r` from a geodesic.
fn cylinder(r: f64) -> Param {
    Box::new(move |z: Complex| {
        let (u, v) = (z.re, z.im);
        let f = Vec4([r.cosh() * v.cosh(), r.cosh() * v.sinh(), r.sinh() * u.cos(), r.sinh() * u.sin()]);
        let nu = Vec4([-r.sinh() * v.cosh(), -r.sinh() * v.sinh(), -r.cosh() * u.cos(), -r.cosh() * u.sin()]);
        (f, nu)
    })
}

fn principal_curvatures(p: &Param, z: Complex) -> (f64, f64) {
    let f = |w: Complex| Some(p(w).0);
    let n = |w: Complex| Some(p(w).1);
    let (i, ii, _) = fd_forms(&f, &n, z, 1e-5).unwrap();
    let k = curvatures(&i, &ii).unwrap();
    let disc = (k.mean * k.mean - k.extrinsic).max(0.0).sqrt();
    (k.mean + disc, k.mean - disc)
}

/// Near-zero local minima of the smaller singular value of the Jacobian of
/// `f_δ` over a δ scan.
fn rank_drops(p: &Param, z: Complex, lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let ratio = |delta: f64| {
        let fd = |w: Complex| {
            let (f, nu) = p(w);
            Some(f.scale(delta.cosh()) + nu.scale(delta.sinh()))
        };
        jacobian_singular_values(&fd, z, 1e-6).unwrap().1
    };
    let n = ((hi - lo) / step).round() as usize;
    let vals: Vec<(f64, f64)> = (0..=n).map(|k| lo + step * k as f64).map(|d| (d, ratio(d))).collect();
    vals.windows(3)
        .filter(|w| w[1].1 < w[0].1 && w[1].1 <= w[2].1 && w[1].1 < 1e-2)
        .map(|w| w[1].0)
        .collect()
}

#[test]
fn sphere_collapses_at_its_radius() {
    let r = 1.0;
    let p = sphere(r);
    let z = Complex::new(1.0, 0.5);
    let (k1, k2) = principal_curvatures(&p, z);
    assert!((k1 - 1.0 / r.tanh()).abs() < 1e-5 && (k2 - 1.0 / r.tanh()).abs() < 1e-5);
    let predicted = parallel_singular_radii(k1, k2);
    assert_eq!(predicted.len(), 2);
    let observed = rank_drops(&p, z, -2.0, 3.0, 1e-3);
    assert_eq!(observed.len(), 1, "{observed:?}");
    for d in predicted {
        assert!((d - observed[0]).abs() <= 1e-3, "{d} vs {observed:?}");
        assert!((d - r).abs() < 1e-5);
    }
}

#[test]
fn cylinder_collapses_once() {
    for r in [0.5, 1.2] {
        let p = cylinder(r);
        let z = Complex::new(0.7, -0.3);
        let (k1, k2) = principal_curvatures(&p, z);
        assert!((k1 - 1.0 / r.tanh()).abs() < 1e-5, "{k1}");
        assert!((k2 - r.tanh()).abs() < 1e-5, "{k2}");
        let predicted = parallel_singular_radii(k1, k2);
        assert_eq!(predicted.len(), 1);
        let observed = rank_drops(&p, z, -3.0, 3.0, 1e-3);
        assert_eq!(observed.len(), 1, "{observed:?}");
        assert!((predicted[0] - observed[0]).abs() <= 1e-3, "{predicted:?} vs {observed:?}");
    }
}

#[test]
fn no_radius_for_small_curvature() {
    assert!(parallel_singular_radii(0.5, -0.9).is_empty());
    let r = parallel_singular_radii(2.0, -2.0);
    assert!((r[0] + r[1]).abs() < 1e-15);
}
