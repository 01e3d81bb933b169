#![allow(dead_code)]

use frontlab::lorentz::Vec4;
use frontlab::mesh::Rect;
use frontlab::weingarten::{SymForm, WeingartenData};
use frontlab::Complex;

pub fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

pub fn fx1() -> WeingartenData {
    WeingartenData::from_strs("z + i*z^2", "z + z^3", 1.0, Rect::new(-1.0, 1.0, -1.0, 1.0)).unwrap()
}

pub fn fx2() -> WeingartenData {
    WeingartenData::from_strs("z + i*z^2", "z + z^3", -1.0, Rect::new(-1.0, 1.0, -1.0, 1.0)).unwrap()
}

pub fn fx3() -> WeingartenData {
    WeingartenData::from_strs("z", "exp(z)", 0.0, Rect::new(-2.0, 0.0, -1.0, 1.0)).unwrap()
}

/// Central-difference partials of a vector-valued map.
pub fn partials(map: &dyn Fn(Complex) -> Option<Vec4>, z: Complex, h: f64) -> Option<(Vec4, Vec4)> {
    let du = (map(z + c(h, 0.0))? - map(z - c(h, 0.0))?).scale(0.5 / h);
    let dv = (map(z + c(0.0, h))? - map(z - c(0.0, h))?).scale(0.5 / h);
    Some((du, dv))
}

/// Fundamental forms `⟨df, df⟩`, `-⟨df, dν⟩`, `⟨dν, dν⟩` by finite differences.
pub fn fd_forms(
    f: &dyn Fn(Complex) -> Option<Vec4>,
    nu: &dyn Fn(Complex) -> Option<Vec4>,
    z: Complex,
    h: f64,
) -> Option<(SymForm, SymForm, SymForm)> {
    let (fu, fv) = partials(f, z, h)?;
    let (nu_u, nu_v) = partials(nu, z, h)?;
    let first = SymForm::new(fu.inner(&fu), fu.inner(&fv), fv.inner(&fv));
    let off = -0.5 * (fu.inner(&nu_v) + fv.inner(&nu_u));
    let second = SymForm::new(-fu.inner(&nu_u), off, -fv.inner(&nu_v));
    let third = SymForm::new(nu_u.inner(&nu_u), nu_u.inner(&nu_v), nu_v.inner(&nu_v));
    Some((first, second, third))
}

/// Deterministic sample points in a rectangle, avoiding nothing.
pub fn sample_points(rect: Rect, n: usize, seed: u64) -> Vec<Complex> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| c(rng.gen_range(rect.u0..rect.u1), rng.gen_range(rect.v0..rect.v1)))
        .collect()
}

/// Singular values of the Euclidean Jacobian `[f_u f_v]`, largest first.
pub fn jacobian_singular_values(map: &dyn Fn(Complex) -> Option<Vec4>, z: Complex, h: f64) -> Option<(f64, f64)> {
    let (u, v) = partials(map, z, h)?;
    let dot = |a: &Vec4, b: &Vec4| a.0.iter().zip(b.0.iter()).map(|(x, y)| x * y).sum::<f64>();
    let (a, b, d) = (dot(&u, &u), dot(&u, &v), dot(&v, &v));
    let mean = 0.5 * (a + d);
    let disc = (0.25 * (a - d).powi(2) + b * b).sqrt();
    Some(((mean + disc).sqrt(), (mean - disc).max(0.0).sqrt()))
}

/// Uniform grid of `n x n` points over a rectangle.
pub fn grid_points(rect: Rect, n: usize) -> Vec<Complex> {
    let mut out = Vec::with_capacity(n * n);
    for j in 0..n {
        for i in 0..n {
            out.push(c(
                rect.u0 + (rect.u1 - rect.u0) * i as f64 / (n - 1) as f64,
                rect.v0 + (rect.v1 - rect.v0) * j as f64 / (n - 1) as f64,
            ));
        }
    }
    out
}

/// Bisection for a sign change of `f` on `[lo, hi]`.
pub fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let s = f(lo).signum();
    for _ in 0..200 {
        let m = 0.5 * (lo + hi);
        if f(m).signum() == s {
            lo = m;
        } else {
            hi = m;
        }
    }
    0.5 * (lo + hi)
}

/// Singular curves of a front on an `n x n` grid, with vertices refined onto Φ = 0.
pub fn singular_curves(d: &WeingartenData, n: usize) -> Vec<frontlab::mesh::Polyline> {
    use frontlab::mesh::{sample_grid, zero_set, Grid};
    let grid = Grid::square(d.domain(), n).unwrap();
    let phi = sample_grid(grid, |z| d.singular_function(z));
    let exact = |z: Complex| d.singular_function(z).ok();
    zero_set(&phi, Some(&exact), 4)
}
