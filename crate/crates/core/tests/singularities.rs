mod common;

use common::*;
use frontlab::mesh::Rect;
use frontlab::weingarten::{CurveContext, SingularKind, WeingartenData, WeingartenError};

fn swallowtail_front() -> WeingartenData {
    // q = 3/(4z²) + z²/4; Δ changes sign at z = 1 along |q| = 1.
    WeingartenData::from_strs("exp(0.5*z^2)", "z", 0.0, Rect::new(0.7, 1.3, -0.3, 0.3)).unwrap()
}

#[test]
fn flat_fixture_curve_is_the_vertical_line() {
    let d = fx3();
    let curves = singular_curves(&d, 100);
    assert_eq!(curves.len(), 1);
    let u = -(2f64.ln());
    for z in &curves[0].points {
        assert!((z.re - u).abs() <= 1e-4, "{z}");
    }
    let (lo, hi) = curves[0].points.iter().fold((f64::MAX, f64::MIN), |(a, b), z| (a.min(z.im), b.max(z.im)));
    assert!(lo < -0.98 && hi > 0.98);
}

#[test]
fn flat_fixture_vertices_are_cuspidal_edges() {
    let d = fx3();
    for c in singular_curves(&d, 100) {
        let cc = d.classify_curve(&c.points).unwrap();
        assert!(cc.swallowtails.is_empty());
        for (z, k) in cc.vertices {
            assert!(k.nondegenerate, "{z}");
            assert_eq!(k.kind, SingularKind::CuspidalEdge, "{z}");
            assert!((k.delta.abs() - 4.0).abs() <= 1e-3, "{z}: {}", k.delta);
        }
    }
}

#[test]
fn delta_is_insensitive_to_the_square_root_branch() {
    let d = fx3();
    let z = c(-(2f64.ln()), 0.3);
    let p = d.delta_invariant(z, None).unwrap();
    let m = d.delta_invariant(z, Some(-p.inv_sqrt)).unwrap();
    assert!((p.value + m.value).abs() < 1e-12);
    assert!((p.value.abs() - 4.0).abs() < 1e-9);
    for branch in [None, Some(p.inv_sqrt), Some(-p.inv_sqrt)] {
        let ctx = CurveContext {
            tangent: c(0.0, 1.0),
            branch,
            step: 1e-4,
        };
        assert_eq!(d.classify_singularity(z, &ctx).unwrap().kind, SingularKind::CuspidalEdge);
    }
}

#[test]
fn cmc1_data_is_not_classified() {
    let d = fx1();
    let ctx = CurveContext {
        tangent: c(1.0, 0.0),
        branch: None,
        step: 1e-4,
    };
    let z = c(0.3, 0.2);
    assert_eq!(d.classify_singularity(z, &ctx), Err(WeingartenError::Cmc1Unsupported));
    assert_eq!(d.delta_invariant(z, None).map(|_| ()), Err(WeingartenError::Cmc1Unsupported));
    assert!(matches!(d.classify_curve(&[z]), Err(WeingartenError::Cmc1Unsupported)));
    assert_eq!(d.is_nondegenerate(z), Err(WeingartenError::Cmc1Unsupported));
}

#[test]
fn regular_points_are_rejected() {
    let d = fx3();
    let ctx = CurveContext {
        tangent: c(0.0, 1.0),
        branch: None,
        step: 1e-4,
    };
    assert!(matches!(d.classify_singularity(c(-1.5, 0.0), &ctx), Err(WeingartenError::NotSingular(_))));
}

#[test]
fn swallowtail_at_known_point() {
    let d = swallowtail_front();
    let z = c(1.0, 0.0);
    assert!(d.singular_function(z).unwrap().abs() < 1e-12);
    assert!(d.delta_invariant(z, None).unwrap().value.abs() < 1e-12);
    let ctx = CurveContext {
        tangent: c(0.0, 1.0),
        branch: None,
        step: 1e-4,
    };
    let k = d.classify_singularity(z, &ctx).unwrap();
    assert!(k.nondegenerate);
    assert_eq!(k.kind, SingularKind::Swallowtail);
}

#[test]
fn swallowtail_found_along_extracted_curve() {
    let d = swallowtail_front();
    let curves = singular_curves(&d, 80);
    let mut found = Vec::new();
    for c in &curves {
        let cc = d.classify_curve(&c.points).unwrap();
        found.extend(cc.swallowtails.iter().map(|(z, k)| (*z, k.kind)));
        // Δ changes sign once along the curve, every other vertex is a cuspidal edge.
        let cusp = cc.vertices.iter().filter(|(_, k)| k.kind == SingularKind::CuspidalEdge).count();
        assert!(cusp + 2 >= cc.vertices.len());
    }
    assert_eq!(found.len(), 1, "{found:?}");
    assert!((found[0].0 - c(1.0, 0.0)).norm() < 1e-6, "{:?}", found[0]);
    assert_eq!(found[0].1, SingularKind::Swallowtail);
}

#[test]
fn degenerate_singular_point() {
    // G = exp(z²/√3), h = z: the transversality expression vanishes at z = √1.5.
    let d = WeingartenData::from_strs("exp(0.5773502691896258*z^2)", "z", 0.0, Rect::new(1.0, 1.5, -0.3, 0.3)).unwrap();
    let z0 = c(1.5f64.sqrt(), 0.0);
    assert!(d.is_singular(z0).unwrap());
    assert!(d.nondegeneracy_expr(z0).unwrap().norm() < 1e-10);
    assert!(!d.is_nondegenerate(z0).unwrap());
    let ctx = CurveContext {
        tangent: c(0.0, 1.0),
        branch: None,
        step: 1e-4,
    };
    assert_eq!(d.classify_singularity(z0, &ctx).unwrap().kind, SingularKind::DegenerateOrUnknown);
}

#[test]
fn de_sitter_type_fixture_classifies() {
    let d = fx2();
    let mut total = 0;
    for c in singular_curves(&d, 100) {
        if let Ok(cc) = d.classify_curve(&c.points) {
            total += cc.vertices.len();
            for (z, k) in cc.vertices {
                if k.kind == SingularKind::CuspidalEdge {
                    assert!(k.nondegenerate && k.delta.abs() > 1e-6, "{z}");
                }
            }
        }
    }
    assert!(total > 100);
}
