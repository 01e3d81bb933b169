//! The two hyperbolic Gauss maps G and G★, computed several ways.
use frontlab::mesh::Rect;
use frontlab::weingarten::{gauss_g_numeric, gauss_gstar_from_front, WeingartenData};
use frontlab::Complex;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cases = [
        ("flat", WeingartenData::from_strs("z", "exp(z)", 0.0, Rect::new(-2.0, 0.0, -1.0, 1.0))?),
        ("ε = 1", WeingartenData::from_strs("z + i*z^2", "z + z^3", 1.0, Rect::new(-1.0, 1.0, -1.0, 1.0))?),
    ];
    let z = Complex::new(-0.5, 0.25);
    for (name, d) in cases {
        let p = d.build_front(z)?;
        println!("{name} at z = {z}");
        println!("  G        = {:?}", d.gauss_g(z));
        println!("  [f + ν]  = {:?}", gauss_g_numeric(&p.f, &p.nu));
        println!("  G★ explicit  = {:?}", d.gauss_gstar_explicit(z)?);
        println!("  G★ from 𝒢Φ   = {:?}", d.gauss_gstar_numeric(z)?);
        println!("  [f - ν]      = {:?}", gauss_gstar_from_front(&p.f, &p.nu));
        println!("  |∂G★/∂z̄|    = {:.3e}", d.antiholo_defect_gstar(z)?);
    }
    Ok(())
}
