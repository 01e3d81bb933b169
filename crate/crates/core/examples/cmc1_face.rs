//! A CMC-1 face in de Sitter space: lift residuals, the singular set |h| = 1
//! and the extended normal across it.
use frontlab::desitter::Cmc1FaceData;
use frontlab::lorentz::classify_point;
use frontlab::mesh::Rect;
use frontlab::weingarten::WeingartenData;
use frontlab::Complex;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let base = WeingartenData::from_strs("z + i*z^2", "z + z^3", -1.0, Rect::new(-1.0, 1.0, -1.0, 1.0))?;
    let d = Cmc1FaceData::new(base)?;
    let z = Complex::new(0.3, 0.2);
    let res = d.verify_lift(z, 1e-5)?;
    println!("lift residuals at {z}: F⁻¹F_z {:.1e}, F_zF⁻¹ {:.1e}, det F_z {:.1e}", res.lift, res.companion, res.null);
    println!("face point {:.6?}", d.face_point(z)?.0);

    // h(x) = x + x³ is 1 at x ≈ 0.6823 on the real axis.
    let x0 = 0.6823278038280193;
    for x in [x0 - 0.05, x0 - 1e-4, x0, x0 + 1e-4, x0 + 0.05] {
        let z = Complex::new(x, 0.0);
        let n = d.extended_normal(z)?;
        let sheet = d
            .normal(z)
            .map(|v| format!("{:?}", classify_point(&v, 1e-8 * v.euclid_norm().powi(2).max(1.0))))
            .unwrap_or_else(|e| e.to_string());
        println!(
            "x = {x:.6}: |h|² - 1 = {:>10.3e}, Ψ = {:.5?}, r = {:.4}, ν: {sheet}",
            d.face_singular_function(z)?,
            n.psi.0,
            n.r
        );
    }
    Ok(())
}
