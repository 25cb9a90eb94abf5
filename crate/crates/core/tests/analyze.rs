use std::sync::Arc;

use mbs_core::analyze::*;
use mbs_core::generators::{instantiate, Family, GeneratorId};
use mbs_core::lifting::{classify_fibration, FibrationClass, Outcome, DEFAULT_BUDGET};
use mbs_core::{CellId, Deco, DecoratedMap, FiniteSSet, MBSSet, SSetBuilder, Simplex};

fn suite() -> Vec<Fixture> {
    fixture_suite(3).unwrap()
}

fn fixture(name: &str) -> Fixture {
    suite().into_iter().find(|f| f.name == name).unwrap()
}

fn cell(x: &FiniteSSet, name: &str) -> Simplex {
    Simplex::cell(x.get(name).unwrap())
}

/// A 3-simplex `rho` with d3 = s0(ab), d2 = tau, d1 = sigma and thin d0.
fn eta_fixture() -> (MBSSet, Simplex, Simplex, Simplex) {
    let mut b = SSetBuilder::new(3);
    let a = b.add("a", vec![]).unwrap();
    let bb = b.add("b", vec![]).unwrap();
    let c = b.add("c", vec![]).unwrap();
    let v = Simplex::cell;
    let ab = b.add("ab", vec![v(bb), v(a)]).unwrap();
    let ac = b.add("ac", vec![v(c), v(a)]).unwrap();
    let ac2 = b.add("ac2", vec![v(c), v(a)]).unwrap();
    let bc = b.add("bc", vec![v(c), v(bb)]).unwrap();
    let sigma = b.add("sigma", vec![v(bc), v(ac2), v(ab)]).unwrap();
    let tau = b.add("tau", vec![v(ac), v(ac2), Simplex::constant(a, 1)]).unwrap();
    let eta0 = b.add("eta0", vec![v(bc), v(ac), v(ab)]).unwrap();
    let s0ab = Simplex {
        cell: ab,
        surj: [0u8, 0, 1].into_iter().collect(),
    };
    let rho = b.add("rho", vec![v(eta0), v(sigma), v(tau), s0ab]).unwrap();
    let set = Arc::new(b.finish().unwrap());
    let x = MBSSet::decorate(set, &Deco::Flat, &Deco::named(["eta0"]), &Deco::Flat).unwrap().0;
    (x, v(sigma), v(tau), v(rho))
}

#[test]
fn degenerate_triangle_at_a_vertex_is_cocartesian() {
    for f in suite() {
        let u = f.p.source().under().clone();
        for v in u.cells(0) {
            let s = Simplex::constant(v, 2);
            let r = is_cocartesian_triangle(&f.p, &s, 3, DEFAULT_BUDGET).unwrap();
            assert_eq!(r.answer, Answer::Yes, "{} at {}", f.name, u.name(v));
        }
    }
}

#[test]
fn fibrant_fixtures_have_cartesian_marked_edges_and_cocartesian_thin_triangles() {
    let mut checked = 0;
    for f in suite() {
        let mb = classify_fibration(&f.p, FibrationClass::MB, 3, DEFAULT_BUDGET).unwrap();
        if mb.outcome != Outcome::Pass {
            continue;
        }
        let x = f.p.source().clone();
        let u = x.under();
        for e in u.simplices(1).into_iter().filter(|e| x.is_marked(e)) {
            let r = is_p_cartesian_edge(&f.p, &e, CartesianMode::Plain, 3, DEFAULT_BUDGET).unwrap();
            assert_eq!(r.answer, Answer::Yes, "{}: {}", f.name, u.simplex_name(&e));
            checked += 1;
        }
        for t in u.simplices(2).into_iter().filter(|t| x.is_thin(t)) {
            let r = is_cocartesian_triangle(&f.p, &t, 3, DEFAULT_BUDGET).unwrap();
            assert_eq!(r.answer, Answer::Yes, "{}: {}", f.name, u.simplex_name(&t));
            checked += 1;
        }
    }
    assert!(checked > 50, "{checked}");
}

#[test]
fn collapsed_horn_face_is_not_cocartesian() {
    let f = fixture("A3:3-source/point");
    let u = f.p.source().under().clone();
    let s = cell(&u, "012");
    assert!(is_left_degenerate(&u, &s));
    assert!(!f.p.source().is_thin(&s) && !f.p.source().is_lean(&s));
    let r = is_cocartesian_triangle(&f.p, &s, 3, DEFAULT_BUDGET).unwrap();
    assert_eq!(r.answer, Answer::No);
    let w = r.witness.unwrap();
    assert!(w.top.contains(&("013".to_string(), "012".to_string())), "{:?}", w.top);
}

#[test]
fn left_degeneration_cases() {
    // already left-degenerate: itself, with a degenerate witness
    let d = Arc::new(FiniteSSet::standard(2, 3).unwrap());
    let x = MBSSet::flat(d.clone());
    let s = d.degeneracy(&cell(&d, "02"), 0);
    let ld = left_degeneration(&x, &s).unwrap();
    assert_eq!(ld.tau, s);
    assert!(ld.witness.is_degenerate());

    // no 3-cells, not left-degenerate: nothing to find
    assert!(left_degeneration(&x, &cell(&d, "012")).is_none());

    // the witness 3-cell is recovered by search
    let (x, sigma, tau, rho) = eta_fixture();
    let ld = left_degeneration(&x, &sigma).unwrap();
    assert_eq!(ld.tau, tau);
    assert_eq!(ld.witness, rho);
}

#[test]
fn left_degeneration_is_idempotent() {
    let (x, ..) = eta_fixture();
    let mut fixtures: Vec<MBSSet> = suite().into_iter().map(|f| (**f.p.source()).clone()).collect();
    fixtures.push(x);
    for x in fixtures {
        let u = x.under().clone();
        for s in u.simplices(2) {
            if let Some(ld) = left_degeneration(&x, &s) {
                assert!(is_left_degenerate(&u, &ld.tau));
                assert_eq!(left_degeneration(&x, &ld.tau).unwrap().tau, ld.tau);
            }
        }
    }
}

#[test]
fn degenerate_edges_are_cartesian_in_o2_fixtures() {
    for f in suite() {
        let prof = check_family(&f.p, 3, DEFAULT_BUDGET).unwrap();
        if !prof.flags.o2 {
            continue;
        }
        let u = f.p.source().under().clone();
        for v in u.cells(0) {
            let e = Simplex::constant(v, 1);
            let r = is_p_cartesian_edge(&f.p, &e, CartesianMode::Plain, 3, DEFAULT_BUDGET).unwrap();
            assert_eq!(r.answer, Answer::Yes, "{}", f.name);
        }
    }
}

#[test]
fn marked_edges_of_the_projection_are_cartesian() {
    let f = fixture("JxD1/D1");
    let x = f.p.source().clone();
    for &c in x.marked() {
        for mode in [CartesianMode::Plain, CartesianMode::Strong] {
            let r = is_p_cartesian_edge(&f.p, &Simplex::cell(c), mode, 3, DEFAULT_BUDGET).unwrap();
            assert_eq!(r.answer, Answer::Yes);
        }
    }
}

#[test]
fn a4_target_marked_edge_fails_the_existence_clause() {
    let t = instantiate(&GeneratorId::new(Family::A4, &[2]), 3).unwrap().target().clone();
    let e = cell(t.under(), "12");
    for p in [DecoratedMap::identity(t.clone()), fixture("A4:2-target/D2").p] {
        for mode in [CartesianMode::Plain, CartesianMode::Strong] {
            let r = is_p_cartesian_edge(&p, &e, mode, 3, DEFAULT_BUDGET).unwrap();
            assert_eq!(r.answer, Answer::No);
            assert!(r.witness.unwrap().top.contains(&("12".into(), "12".into())));
        }
    }
}

#[test]
fn unmarked_fibre_equivalence_is_cartesian() {
    let f = fixture("JxD1-unmarked/D1");
    let prof = check_family(&f.p, 3, DEFAULT_BUDGET).unwrap();
    let c4 = prof.condition("marked-are-cartesian").unwrap();
    assert_eq!(c4.outcome, Outcome::Fail);
    assert_eq!(c4.evidence, vec!["(x,0)(y,0) is p-Cartesian but not marked".to_string()]);
}

#[test]
fn point_profile() {
    let prof = check_family(&fixture("point").p, 3, DEFAULT_BUDGET).unwrap();
    assert_eq!(prof.outcome, Outcome::Pass);
    assert!(prof.cocartesian.is_empty());
    assert!(prof.cartesian.is_empty());
    assert_eq!(prof.base, Outcome::Pass);
    assert_eq!(prof.conditions.len(), 6);
}

#[test]
fn projection_is_o2c() {
    for name in ["JxD1/D1", "D1xD1/D1"] {
        let prof = check_family(&fixture(name).p, 3, DEFAULT_BUDGET).unwrap();
        assert!(prof.flags.o2c, "{name}: {:?}", prof.conditions);
        assert_eq!(prof.thin_in_cocartesian, Some(true));
    }
}

#[test]
fn family_check_agrees_with_mb_fibrancy() {
    for f in suite() {
        let prof = check_family(&f.p, 3, DEFAULT_BUDGET).unwrap();
        let mb = classify_fibration(&f.p, FibrationClass::MB, 3, DEFAULT_BUDGET).unwrap();
        assert_eq!(prof.outcome, mb.outcome, "{}", f.name);
        if prof.flags.locally_fibred && prof.thin_in_cocartesian.is_some() {
            assert_eq!(prof.thin_in_cocartesian, Some(true), "{}", f.name);
        }
    }
}

#[test]
fn mapping_space_detection_agrees_on_weak_s_fixtures() {
    let mut compared = 0;
    for f in suite() {
        let w = classify_fibration(&f.p, FibrationClass::WeakS, 3, DEFAULT_BUDGET).unwrap();
        if w.outcome != Outcome::Pass {
            continue;
        }
        let u = f.p.source().under().clone();
        for s in u.simplices(2).into_iter().filter(|s| is_left_degenerate(&u, s)) {
            let a = is_cocartesian_triangle(&f.p, &s, 3, DEFAULT_BUDGET).unwrap();
            let b = mapping_space_cocartesian(&f.p, &s, 3, DEFAULT_BUDGET).unwrap();
            assert_eq!(a.answer, b.answer, "{}: {}", f.name, u.simplex_name(&s));
            compared += 1;
        }
    }
    assert!(compared > 20, "{compared}");
}

#[test]
fn left_degenerate_three_simplices_close_up() {
    // functorially fibred fixtures: faces 1,2,3 coCartesian force face 0
    for f in suite() {
        let prof = check_family(&f.p, 3, DEFAULT_BUDGET).unwrap();
        if !prof.flags.functorial {
            continue;
        }
        let u = f.p.source().under().clone();
        let yes = |s: &Simplex| is_cocartesian_triangle(&f.p, s, 3, DEFAULT_BUDGET).unwrap().answer == Answer::Yes;
        for rho in u.simplices(3) {
            if !u.restrict(&rho, &[0, 1]).is_degenerate() {
                continue;
            }
            if (1..4).all(|i| yes(&u.face(&rho, i))) {
                assert!(yes(&u.face(&rho, 0)), "{}: {}", f.name, u.simplex_name(&rho));
            }
        }
    }
}

#[test]
fn inputs_are_validated() {
    let f = fixture("point");
    let v = Simplex::cell(CellId::new(0, 0));
    assert!(is_cocartesian_triangle(&f.p, &v, 3, DEFAULT_BUDGET).is_err());
    assert!(is_p_cartesian_edge(&f.p, &v, CartesianMode::Plain, 3, DEFAULT_BUDGET).is_err());
}
