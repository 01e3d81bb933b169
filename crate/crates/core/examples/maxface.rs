//! Maxfaces: the Lorentzian catenoid and the loop parity for g = z², ω̂ = dz
//! with the antipodal involution.
use frontlab::maxface::{sample_path, AntiMobius, MaxfaceData};
use frontlab::{Complex, MeroExpr};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let catenoid = MaxfaceData::new(MeroExpr::parse("z")?, MeroExpr::parse("z^(-2)")?, Complex::new(1.0, 0.0))?;
    for r in [0.5, 1.0, 2.0] {
        let z = Complex::from_polar(r, 0.4);
        let p = catenoid.maxface_point(z)?;
        let n = catenoid.lorentz_normal(z);
        println!(
            "catenoid at |z| = {r}: f = {:.5?}, metric {:.4e}, <ν,ν> = {:.4e}",
            p.0,
            catenoid.induced_metric(z)?,
            n.inner(&n)
        );
    }

    let m = MaxfaceData::new(MeroExpr::parse("z^2")?, MeroExpr::parse("1")?, Complex::new(1.0, 0.0))?;
    let t = AntiMobius::antipodal();
    let path = sample_path(1001, |s| Complex::from_polar(2.0 - 1.5 * s, std::f64::consts::PI * s));
    println!("g(T(z)) - 1/conj(g(z)) at 2: {:.1e}", m.involution_residual(&t, Complex::new(2.0, 0.0))?);
    let once = m.loop_singular_parity(&t, &path)?;
    let twice = m.doubled_parity(&t, &path)?;
    println!("path 2 → -1/2: {} crossing(s), {:?}", once.crossings, once.parity);
    println!("doubled path:  {} crossing(s), {:?}", twice.crossings, twice.parity);
    Ok(())
}
