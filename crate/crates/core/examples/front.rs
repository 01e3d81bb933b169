//! Build the front of a few data sets and print position, normal and curvatures.
use frontlab::mesh::Rect;
use frontlab::weingarten::{curvatures, dual_curvatures, WeingartenData};
use frontlab::Complex;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let domain = Rect::new(-1.0, 1.0, -1.0, 1.0);
    let cases = [
        ("horosphere", "z", "z", 0.0),
        ("hyperbolic type", "z + i*z^2", "z + z^3", 1.0),
        ("de Sitter type", "z + i*z^2", "z + z^3", -1.0),
        ("flat", "z", "exp(z)", 0.0),
    ];
    let z = Complex::new(0.3, -0.2);
    for (name, g, h, eps) in cases {
        let d = WeingartenData::from_strs(g, h, eps, domain)?;
        let p = d.build_front(z)?;
        let forms = d.fundamental_forms(z)?;
        let k = curvatures(&forms.first, &forms.second)?;
        let dual = dual_curvatures(&forms)?;
        let (a, b) = d.coefficients();
        println!("{name}: G = {g}, h = {h}, ε = {eps}");
        println!("  f  = {:.6?}  ({:?})", p.f.0, p.sheet);
        println!("  ν  = {:.6?}", p.nu.0);
        println!("  q  = {:.6}", d.hopf_q(z)?);
        println!("  H = {:.6}, K = {:.6}, Ĥ = {:.6}, K̂ = {:.6}", k.mean, k.gauss, dual.mean, dual.gauss);
        println!("  |a(H-1) + bK| = {:.2e} with (a, b) = ({a}, {b})", d.weingarten_residual(z, a, b)?);
    }
    Ok(())
}
