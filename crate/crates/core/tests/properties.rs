use proptest::prelude::*;

use teich3::curves::{candidate_geodesics, length};
use teich3::extremal::is_eutactic;
use teich3::holonomy::{fn_to_pants, pants_to_fn};
use teich3::modular::{self, Generator};
use teich3::special::cell_representative;
use teich3::systole::{classify_cell, systole};
use teich3::{CellId, FundamentalDomain, MappingClass, Point, Point32};

fn point() -> impl Strategy<Value = Point> {
    (-4.0..4.0f64, 0.05..6.0f64, 0.05..6.0f64).prop_map(|(theta1, l1, lx)| Point { theta1, l1, lx })
}

fn mapping(max_len: usize) -> impl Strategy<Value = MappingClass> {
    prop::collection::vec(prop_oneof![Just(Generator::N), Just(Generator::T), Just(Generator::S)], 0..=max_len)
        .prop_map(|w| MappingClass::from_word(&w))
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn reduce_lands_in_domain_and_is_idempotent(p in point()) {
        let r = modular::reduce(&p);
        prop_assert!(FundamentalDomain { eps: 1e-9 }.contains(&r.point), "{:?}", r.point);
        let rr = modular::reduce(&r.point);
        prop_assert!(rr.point.distance(&r.point) < 1e-9);
        // the reducing class carries p to its reduction
        let q = modular::act_on_point(&r.mapping, &p);
        prop_assert!(q.distance(&r.point) < 1e-8 * r.point.l1.max(1.0), "{:?} vs {:?}", q, r.point);
    }

    #[test]
    fn systole_matches_enumeration(p in point()) {
        let s = systole(&p);
        let found = candidate_geodesics(s.value * (1.0 + 1e-6) + 1e-6, &p);
        let min = found.iter().map(|c| c.1).fold(f64::INFINITY, f64::min);
        prop_assert!(rel(s.value, min) < 1e-9, "{} vs {}", s.value, min);
        for c in &s.classes {
            prop_assert!(rel(length(*c, &p), s.value) < 1e-8, "{c}");
            prop_assert!(found.iter().any(|f| f.0 == *c), "{c} not enumerated");
        }
    }

    #[test]
    fn systole_is_modular_invariant(p in point(), g in mapping(10)) {
        let gp = modular::act_on_point(&g, &p);
        let (a, b) = (systole(&p), systole(&gp));
        prop_assert!(rel(a.value, b.value) < 1e-8);
        // realizing classes move by g
        let mut moved: Vec<_> = a.classes.iter().map(|c| c.apply(&g)).collect();
        moved.sort();
        if a.classes.len() == 1 {
            prop_assert_eq!(moved, b.classes);
        }
    }

    #[test]
    fn lengths_transform_by_the_inverse(p in point(), g in mapping(8)) {
        let gp = modular::act_on_point(&g, &p);
        let back = g.inverse();
        for c in systole(&gp).classes {
            prop_assert!(rel(length(c, &gp), length(c.apply(&back), &p)) < 1e-8);
        }
    }

    #[test]
    fn pants_round_trip(p in point()) {
        let q = pants_to_fn(&fn_to_pants(&p));
        prop_assert!(q.distance(&p) < 1e-7 * p.l1.max(p.lx).max(1.0), "{:?}", q);
    }

    #[test]
    fn single_precision_agrees(p in point()) {
        let p32 = Point32 { theta1: p.theta1 as f32, l1: p.l1 as f32, lx: p.lx as f32 };
        let (a, b) = (systole(&p).value, systole(&p32).value as f64);
        prop_assert!((a - b).abs() < 1e-3 * a.max(1.0), "{a} vs {b}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn eutaxy_is_invariant_under_remarking(g in mapping(8)) {
        for c in [CellId::XP, CellId::XH, CellId::C1, CellId::A123, CellId::A12_h, CellId::S123] {
            let p = cell_representative(c);
            prop_assert_eq!(is_eutactic(&p), is_eutactic(&modular::act_on_point(&g, &p)), "{}", c);
        }
    }
}

#[test]
fn classification_is_stable_under_the_stabilizer() {
    // points of D that are moved back into D keep their cell
    for c in CellId::ALL {
        let p = cell_representative(c);
        for w in ["n", "t", "s", "ts", "st"] {
            let g = MappingClass::parse(w).unwrap();
            let q = modular::reduce(&modular::act_on_point(&g, &p)).point;
            assert_eq!(classify_cell(&q).unwrap(), c, "{c} via {w}");
        }
    }
}
