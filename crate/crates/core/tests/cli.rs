use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn run(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_frontlab"))
        .args(args)
        .arg("--out")
        .arg(out)
        .env("FRONTLAB_THREADS", "2")
        .output()
        .unwrap()
}

fn write_scene(dir: &Path, json: &str) -> PathBuf {
    let p = dir.join("scene.json");
    std::fs::write(&p, json).unwrap();
    p
}

#[test]
fn verify_passes_on_every_fixture() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["fx1", "fx2", "fx3", "catenoid", "mobius"] {
        let cfg = fixture(&format!("{name}.json"));
        let o = run(&["verify", "--config", cfg.to_str().unwrap()], dir.path());
        let stdout = String::from_utf8_lossy(&o.stdout);
        assert_eq!(o.status.code(), Some(0), "{name}:\n{stdout}");
        assert!(stdout.trim_end().ends_with("result: pass"));
        assert!(dir.path().join(format!("{name}_verify.csv")).exists());
    }
}

#[test]
fn each_subcommand_runs() {
    let dir = tempfile::tempdir().unwrap();
    let fx3 = fixture("fx3.json");
    let fx2 = fixture("fx2.json");
    let cat = fixture("catenoid.json");
    for (cmd, cfg) in [
        ("analyze", &fx3),
        ("render", &fx3),
        ("parallel", &fx3),
        ("gaussmaps", &fx3),
        ("face", &fx2),
        ("maxface", &cat),
    ] {
        let o = run(&[cmd, "--config", cfg.to_str().unwrap(), "--grid", "40"], dir.path());
        assert_eq!(o.status.code(), Some(0), "{cmd}: {}", String::from_utf8_lossy(&o.stderr));
    }
    assert!(dir.path().join("fx3.obj").exists() && dir.path().join("fx3.csv").exists());
}

#[test]
fn delta_flag_overrides_scene() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = fixture("fx1.json");
    let o = run(&["parallel", "--config", cfg.to_str().unwrap(), "--grid", "30", "--delta", "-0.25,0.75"], dir.path());
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout.contains("-0.25") && stdout.contains("0.75"), "{stdout}");
}

#[test]
fn failing_verification_exits_one() {
    // A loop through a zero of q cannot be certified.
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_scene(
        dir.path(),
        r#"{"kind":"weingarten","name":"bad","G":"z","h":"z + z^3/3","epsilon":0,
            "domain":[0.1,1.5,-0.6,0.6],"grid":40,
            "loop":{"center":[1.0071067811865475,0],"radius":0.3,"samples":400}}"#,
    );
    let o = run(&["parallel", "--config", cfg.to_str().unwrap()], dir.path());
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert_eq!(o.status.code(), Some(1), "{stdout}\n{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout.trim_end().ends_with("result: FAIL"));
}

#[test]
fn malformed_expression_exits_two_with_offset() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_scene(dir.path(), r#"{"kind":"weingarten","G":"z + * 2","h":"z","epsilon":0,"domain":[0,1,0,1]}"#);
    let o = run(&["verify", "--config", cfg.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&o.stderr);
    assert!(stderr.contains("G: parse error at offset 4"), "{stderr}");
}

#[test]
fn horo_flat_coefficients_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_scene(dir.path(), r#"{"kind":"weingarten","G":"z","h":"z","a":2,"b":-1,"domain":[0,1,0,1]}"#);
    let o = run(&["analyze", "--config", cfg.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("horo-flat unsupported"));
}

#[test]
fn io_and_usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["verify", "--config", "/nonexistent/scene.json"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    let cfg = write_scene(dir.path(), r#"{"kind":"weingarten","G":"z","h":"z","epsilon":0,"domain":[0,1,0,1],"colour":1}"#);
    let o = run(&["verify", "--config", cfg.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["no-such-command"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    // Wrong command for the surface kind.
    let o = run(&["maxface", "--config", fixture("fx3.json").to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(2));
}
