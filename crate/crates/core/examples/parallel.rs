//! Parallel fronts: the shifted coefficient b_δ, the CMC-1 member of the
//! family, and a zig-zag certificate for a flat front.
use frontlab::mesh::Rect;
use frontlab::weingarten::{curvatures, WeingartenData};
use frontlab::Complex;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let d = WeingartenData::from_strs("z + i*z^2", "z + z^3", 0.5, Rect::new(-1.0, 1.0, -1.0, 1.0))?;
    let (a, b) = d.coefficients();
    let z = Complex::new(0.2, 0.4);
    println!("ε = {}, (a, b) = ({a}, {b})", d.epsilon());
    for delta in [-0.5, 0.0, 0.3, 1.0] {
        let b_delta = d.parallel_params(delta).b_delta;
        let forms = d.parallel_forms(z, delta)?;
        let k = curvatures(&forms.first, &forms.second)?;
        println!(
            "  δ = {delta:>4}: b_δ = {b_delta:>8.5}, H = {:>8.5}, K = {:>8.5}, residual {:.1e}",
            k.mean,
            k.gauss,
            (a * (k.mean - 1.0) + b_delta * k.gauss).abs()
        );
    }
    let star = d.cmc1_delta()?;
    let forms = d.parallel_forms(z, star)?;
    let k = curvatures(&forms.first, &forms.second)?;
    println!("CMC-1 parallel at δ = ½ ln ε = {star:.6}: H = {:.12}", k.mean);

    let flat = WeingartenData::from_strs("z", "exp(z)", 0.0, Rect::new(-2.0, 2.0, -1.0, 1.0))?;
    let circle: Vec<Complex> = (0..400)
        .map(|k| Complex::new(1.0, 0.0) + Complex::from_polar(0.3, std::f64::consts::TAU * k as f64 / 400.0))
        .collect();
    let cert = flat.zigzag_trivializing_delta(&circle)?;
    println!(
        "zig-zag certificate on |z - 1| = 0.3: δ = {:.4}, min e^(-2δ)|q/h_z²| = {:.4}, min Φ_δ = {:.4}",
        cert.delta, cert.min_rho, cert.min_phi
    );
    Ok(())
}
