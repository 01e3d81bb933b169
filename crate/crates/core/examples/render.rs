//! Write OBJ meshes (Poincaré ball model) with the singular curves as
//! polylines. Usage: `cargo run --example render -- [out_dir]`.
use std::path::PathBuf;

use frontlab::cli::{commands, Scene, SceneConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "frontlab-out".into()));
    let fixtures = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    for name in ["fx1", "fx2", "fx3", "catenoid"] {
        let scene = Scene::from_config(&SceneConfig::load(&fixtures.join(format!("{name}.json")))?)?;
        let report = commands::render(&scene, &out)?;
        println!("{report}");
    }
    Ok(())
}
