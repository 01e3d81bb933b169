mod common;

use common::*;
use frontlab::lorentz::Extended;
use frontlab::weingarten::gauss_gstar_from_front;

#[test]
fn flat_fixture_secondary_map_is_a_translation() {
    let d = fx3();
    for z in grid_points(d.domain(), 30) {
        let expected = Extended::Finite(z + 2.0);
        assert!(d.gauss_gstar_explicit(z).unwrap().chordal_distance(&expected) < 1e-9, "{z}");
        assert!(d.gauss_gstar_numeric(z).unwrap().chordal_distance(&expected) < 1e-9, "{z}");
        let Extended::Finite(w) = d.gauss_gstar_explicit(z).unwrap() else { panic!() };
        assert!((w - z - 2.0).norm() < 1e-9);
    }
}

#[test]
fn explicit_and_projected_routes_agree() {
    for d in [fx1(), fx2()] {
        let mut checked = 0;
        for z in sample_points(d.domain(), 200, 99) {
            if checked == 50 {
                break;
            }
            let (Ok(a), Ok(b)) = (d.gauss_gstar_explicit(z), d.gauss_gstar_numeric(z)) else { continue };
            if d.fundamental_forms(z).is_err() {
                continue;
            }
            assert!(a.chordal_distance(&b) < 1e-8, "ε={} {z}", d.epsilon());
            checked += 1;
        }
        assert_eq!(checked, 50);
    }
}

#[test]
fn secondary_map_is_the_class_of_f_minus_nu() {
    for d in [fx1(), fx2(), fx3()] {
        for z in sample_points(d.domain(), 100, 4) {
            let p = d.build_front(z).unwrap();
            let a = gauss_gstar_from_front(&p.f, &p.nu);
            let b = d.gauss_gstar_explicit(z).unwrap();
            assert!(a.chordal_distance(&b) < 1e-7, "ε={} {z}", d.epsilon());
        }
    }
}

#[test]
fn antiholomorphy_defect() {
    let flat = fx3();
    for z in grid_points(flat.domain(), 20) {
        assert!(flat.antiholo_defect_gstar(z).unwrap() <= 1e-6, "{z}");
    }
    let d = fx1();
    let worst = grid_points(d.domain(), 20)
        .into_iter()
        .filter_map(|z| d.antiholo_defect_gstar(z).ok())
        .fold(0.0, f64::max);
    assert!(worst > 1e-3);
}
