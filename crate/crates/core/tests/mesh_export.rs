mod common;

use std::path::PathBuf;

use common::*;
use frontlab::cli::commands;
use frontlab::cli::{Scene, SceneConfig};
use frontlab::mesh::{export_csv, export_obj, CsvRow, Mesh, Polyline};

fn fixture(name: &str) -> Scene {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name);
    Scene::from_config(&SceneConfig::load(&path).unwrap()).unwrap()
}

fn length(curves: &[Polyline]) -> f64 {
    curves
        .iter()
        .map(|c| {
            let open: f64 = c.points.windows(2).map(|w| (w[1] - w[0]).norm()).sum();
            let close = if c.closed { (c.points[0] - *c.points.last().unwrap()).norm() } else { 0.0 };
            open + close
        })
        .sum()
}

#[test]
fn curve_length_converges_under_refinement() {
    let d = fx3();
    for n in [25, 50, 100, 200] {
        assert!((length(&singular_curves(&d, n)) - 2.0).abs() < 1e-6, "n={n}");
    }
    let d = fx2();
    let (a, b) = (length(&singular_curves(&d, 100)), length(&singular_curves(&d, 200)));
    assert!((a - b).abs() / b < 1e-2, "{a} vs {b}");
}

struct Obj {
    vertices: Vec<[f64; 3]>,
    faces: Vec<[usize; 3]>,
    lines: Vec<Vec<usize>>,
    objects: Vec<String>,
}

fn parse_obj(text: &str) -> Obj {
    let mut obj = Obj {
        vertices: vec![],
        faces: vec![],
        lines: vec![],
        objects: vec![],
    };
    for line in text.lines() {
        let mut it = line.split_whitespace();
        match it.next() {
            Some("v") => {
                let v: Vec<f64> = it.map(|x| x.parse().unwrap()).collect();
                obj.vertices.push([v[0], v[1], v[2]]);
            }
            Some("f") => {
                let f: Vec<usize> = it.map(|x| x.parse().unwrap()).collect();
                obj.faces.push([f[0], f[1], f[2]]);
            }
            Some("l") => obj.lines.push(it.map(|x| x.parse().unwrap()).collect()),
            Some("o") => obj.objects.push(it.next().unwrap().to_string()),
            Some("#") | None => {}
            Some(other) => panic!("unexpected OBJ record {other}"),
        }
    }
    obj
}

#[test]
fn rendered_front_reparses() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["fx1", "fx3"] {
        let scene = fixture(&format!("{name}.json"));
        commands::render(&scene, dir.path()).unwrap();
        let obj = parse_obj(&std::fs::read_to_string(dir.path().join(format!("{name}.obj"))).unwrap());
        assert!(obj.faces.len() > 1000);
        let n = obj.vertices.len();
        assert!(obj.faces.iter().flatten().chain(obj.lines.iter().flatten()).all(|&k| (1..=n).contains(&k)));
        // Poincaré ball model.
        for v in &obj.vertices {
            assert!(v.iter().all(|x| x.is_finite()));
            assert!(v.iter().map(|x| x * x).sum::<f64>() < 1.0 + 1e-12);
        }
        assert_eq!(obj.objects[0], "surface");
        assert_eq!(obj.objects.len() - 1, obj.lines.len());
        if name == "fx3" {
            assert_eq!(obj.lines.len(), 1);
        }
    }
}

#[test]
fn rendered_maxface_and_face() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["catenoid", "fx2"] {
        let scene = fixture(&format!("{name}.json"));
        commands::render(&scene, dir.path()).unwrap();
        let obj = parse_obj(&std::fs::read_to_string(dir.path().join(format!("{name}.obj"))).unwrap());
        assert!(!obj.faces.is_empty() && !obj.lines.is_empty(), "{name}");
    }
    assert!(dir.path().join("fx2_normal.csv").exists());
}

#[test]
fn obj_writer_layout() {
    let mut mesh = Mesh {
        vertices: vec![[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]],
        faces: vec![[0, 1, 2]],
        lines: vec![],
    };
    mesh.add_line(&[[0.0, 0.0, 1.0], [0.5, 0.5, 1.0]]);
    mesh.add_line(&[[2.0, 2.0, 2.0]]);
    let mut buf = Vec::new();
    export_obj(&mut buf, &mesh).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert!(text.starts_with("# frontlab "));
    let obj = parse_obj(&text);
    assert_eq!(obj.vertices.len(), 6);
    assert_eq!(obj.faces, vec![[1, 2, 3]]);
    // Single-point lines are dropped.
    assert_eq!(obj.lines, vec![vec![4, 5]]);
    assert_eq!(obj.objects, vec!["surface", "singular_curve_0"]);
}

#[test]
fn csv_writer_layout() {
    let rows = vec![
        CsvRow {
            z: c(0.5, -0.25),
            mean: Some(1.5),
            gauss: Some(-2.0),
            phi: Some(0.125),
            delta: None,
            class: None,
        },
        CsvRow {
            z: c(1.0, 0.0),
            mean: None,
            gauss: None,
            phi: Some(0.0),
            delta: Some(4.0),
            class: Some("cuspidal_edge".into()),
        },
    ];
    let mut buf = Vec::new();
    export_csv(&mut buf, &rows).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let mut reader = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
    assert_eq!(reader.headers().unwrap(), vec!["z_re", "z_im", "H", "K", "Phi", "Delta", "class"]);
    let recs: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(recs[0], vec!["0.5", "-0.25", "1.5", "-2", "0.125", "", ""]);
    assert_eq!(recs[1], vec!["1", "0", "", "", "0", "4", "cuspidal_edge"]);
}

#[test]
fn verify_csv_rows_are_sorted_by_im_then_re() {
    let dir = tempfile::tempdir().unwrap();
    let scene = fixture("fx3.json");
    commands::verify(&scene, dir.path()).unwrap();
    let text = std::fs::read_to_string(dir.path().join("fx3_verify.csv")).unwrap();
    let mut reader = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
    let keys: Vec<(f64, f64)> = reader
        .records()
        .map(|r| {
            let r = r.unwrap();
            (r[1].parse().unwrap(), r[0].parse().unwrap())
        })
        .collect();
    assert!(keys.len() > 10000);
    assert!(keys.windows(2).all(|w| w[0].partial_cmp(&w[1]) != Some(std::cmp::Ordering::Greater)));
}
