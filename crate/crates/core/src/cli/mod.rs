//! The `frontlab` command line: scene files in, reports and OBJ/CSV out.
//!
//! Exit codes: 0 when every verification passes, 1 when one fails, 2 for
//! configuration, parse and I/O errors.

pub mod commands;
pub mod config;
pub mod report;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub use config::{ConfigError, Scene, SceneConfig, Surface};
pub use report::{Check, Report};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "frontlab", version, about = "Fronts of Bryant type, CMC-1 faces and maxfaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, clap::Args)]
pub struct CommonArgs {
    /// Scene description (JSON).
    #[arg(long)]
    pub config: PathBuf,
    /// Output directory; overrides the scene's `out`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Grid resolution per side; overrides the scene's `grid`.
    #[arg(long)]
    pub grid: Option<usize>,
    /// Comma-separated parallel distances; overrides the scene's `deltas`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub delta: Option<Vec<f64>>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample the surface, check curvature relations and write a CSV.
    Analyze(CommonArgs),
    /// Write an OBJ mesh with the singular curves as polylines.
    Render(CommonArgs),
    /// Residual table for the parallel family.
    Parallel(CommonArgs),
    /// Compare the two routes to the secondary Gauss map.
    Gaussmaps(CommonArgs),
    /// CMC-1 face checks in de Sitter space.
    Face(CommonArgs),
    /// Maxface checks in Lorentz-Minkowski space.
    Maxface(CommonArgs),
    /// Run every applicable check.
    Verify(CommonArgs),
}

impl Command {
    fn args(&self) -> &CommonArgs {
        match self {
            Command::Analyze(a)
            | Command::Render(a)
            | Command::Parallel(a)
            | Command::Gaussmaps(a)
            | Command::Face(a)
            | Command::Maxface(a)
            | Command::Verify(a) => a,
        }
    }
}

/// Cap rayon's pool from `FRONTLAB_THREADS`; ignored when unset or invalid.
pub fn init_threads() {
    if let Some(n) = std::env::var("FRONTLAB_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

fn load_scene(args: &CommonArgs) -> Result<Scene, ConfigError> {
    let mut cfg = SceneConfig::load(&args.config)?;
    if let Some(n) = args.grid {
        cfg.grid = n;
    }
    if let Some(d) = &args.delta {
        cfg.deltas = d.clone();
    }
    Scene::from_config(&cfg)
}

/// Run a parsed command, print its report and return the exit code.
pub fn run(cli: Cli) -> i32 {
    let args = cli.command.args();
    let scene = match load_scene(args) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_CONFIG;
        }
    };
    let out = commands::out_dir(&scene, args.out.as_deref());
    let result = match &cli.command {
        Command::Analyze(_) => commands::analyze(&scene, &out),
        Command::Render(_) => commands::render(&scene, &out),
        Command::Parallel(_) => commands::parallel(&scene),
        Command::Gaussmaps(_) => commands::gaussmaps(&scene),
        Command::Face(_) => commands::face(&scene, &out),
        Command::Maxface(_) => commands::maxface(&scene, &out),
        Command::Verify(_) => commands::verify(&scene, &out),
    };
    match result {
        Ok(report) => {
            println!("{report}");
            if report.passed() {
                EXIT_PASS
            } else {
                EXIT_FAIL
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_CONFIG
        }
    }
}
