//! Independent constructions checked against each other.

use teich3::curves::{length, slope_length, GeodesicClass, Slope};
use teich3::holonomy::{build_pants, dual_word, fn_to_pants, parse_word, pants_to_fn, slope_word, Orientability};
use teich3::special::{x_h, x_p};
use teich3::systole::{slice_closed_form, slice_extremum, systole};
use teich3::{PantsCoords, Point, SliceSpec};

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(1.0)
}

#[test]
fn hexagon_group_reproduces_the_length_formulas() {
    // the pants group is built from right-angled hexagons, with no twist formula
    for (n1, n2, n3) in [(1.0, 1.0, 1.0), (0.4, 1.3, 2.2), (2.5, 0.7, 1.1), (3.0, 3.0, 0.3)] {
        let c = PantsCoords::new(n1, n2, n3).unwrap();
        let g = build_pants(&c);
        let p = pants_to_fn(&c);
        for s in Slope::all_within(5) {
            let (o, l) = g.word_length(&slope_word(s)).unwrap();
            assert_eq!(o, Orientability::Orientable);
            assert!(rel(l, slope_length(&p, s)) < 1e-9, "{s} at {p:?}");
            let (o, l) = g.word_length(&dual_word(s)).unwrap();
            assert_eq!(o, Orientability::NonOrientable);
            assert!(rel(l, length(GeodesicClass::Dual(s), &p)) < 1e-9, "{s}' at {p:?}");
        }
        let (_, lx) = g.word_length(&parse_word("X").unwrap()).unwrap();
        assert!(rel(lx, p.lx) < 1e-9);
        // the pants glides are the three marked duals
        for (w, n) in [("U", n1), ("V", n2), ("W", n3)] {
            let (o, l) = g.word_length(&parse_word(w).unwrap()).unwrap();
            assert_eq!(o, Orientability::NonOrientable);
            assert!(rel(l, n) < 1e-9, "{w}");
        }
    }
}

#[test]
fn special_values() {
    assert!((systole(&x_h()).value.cosh() - 4.561_552_812_8).abs() < 1e-10);
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    assert!(((systole(&x_p()).value / 2.0).cosh() - phi).abs() < 1e-12);
    // all three pants glides of X(P) have the same length
    let c = fn_to_pants(&x_p());
    assert!((c.n1 - c.n2).abs() < 1e-12);
}

#[test]
fn slice_examples() {
    let t = slice_extremum(&SliceSpec::Torus { b1: 6.0 }).unwrap();
    assert!(((t.systole.value / 2.0).cosh() - (1f64.cosh() + 0.5)).abs() < 1e-7);
    let pp = SliceSpec::ProjectivePlane { b1: 2.0, b2: 3.0 };
    let e = slice_extremum(&pp).unwrap();
    assert!((e.systole.value.cosh() - (1f64.cosh() + 1.5f64.cosh() + 1.0)).abs() < 1e-7);
    assert!((e.systole.value - slice_closed_form(&pp)).abs() < 1e-7);
    assert!(pp.contains(&e.point, 1e-7));
}

#[test]
fn twist_by_one_is_a_relabelling() {
    let p = Point { theta1: 0.37, l1: 1.4, lx: 0.9 };
    let q = Point { theta1: 1.37, ..p };
    for k in -3..=3 {
        let a = slope_length(&p, Slope::new(1, k + 1).unwrap());
        let b = slope_length(&q, Slope::new(1, k).unwrap());
        assert!(rel(a, b) < 1e-12);
    }
}
