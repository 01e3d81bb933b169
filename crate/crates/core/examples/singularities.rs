//! Extract singular curves and classify their points as cuspidal edges or
//! swallowtails.
use frontlab::mesh::{sample_grid, zero_set, Grid, Rect};
use frontlab::weingarten::{SingularKind, WeingartenData};
use frontlab::Complex;

fn report(name: &str, d: &WeingartenData, n: usize) -> Result<(), Box<dyn std::error::Error>> {
    let grid = Grid::square(d.domain(), n)?;
    let phi = sample_grid(grid, |z| d.singular_function(z));
    let exact = |z: Complex| d.singular_function(z).ok();
    let curves = zero_set(&phi, Some(&exact), 4);
    println!("{name}: {} singular curve(s)", curves.len());
    for (k, c) in curves.iter().enumerate() {
        let cc = d.classify_curve(&c.points)?;
        let cusps = cc.vertices.iter().filter(|(_, s)| s.kind == SingularKind::CuspidalEdge).count();
        println!("  curve {k}: {} vertices, {cusps} cuspidal edge", c.points.len());
        if let Some((z, s)) = cc.vertices.first() {
            println!("    first vertex {z:.5}: Δ = {:.5}", s.delta);
        }
        for (z, s) in &cc.swallowtails {
            println!("    {} at {z:.8}", s.kind.label());
        }
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // Singular along Re z = -ln 2 with |Δ| = 4.
    let flat = WeingartenData::from_strs("z", "exp(z)", 0.0, Rect::new(-2.0, 0.0, -1.0, 1.0))?;
    report("G = z, h = exp z", &flat, 100)?;
    // A swallowtail at z = 1.
    let tail = WeingartenData::from_strs("exp(0.5*z^2)", "z", 0.0, Rect::new(0.7, 1.3, -0.3, 0.3))?;
    report("G = exp(z²/2), h = z", &tail, 80)?;
    Ok(())
}
