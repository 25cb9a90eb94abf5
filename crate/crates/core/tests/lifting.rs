use std::sync::Arc;

use mbs_core::analyze::{fixture_suite, to_point};
use mbs_core::derivation::theta_map;
use mbs_core::generators::{instantiate, Family, GeneratorId, KanFixture};
use mbs_core::lifting::*;
use mbs_core::{CellId, Deco, DecoratedMap, FiniteSSet, MBSSet, SSetMap, Simplex};

fn std_set(n: usize) -> Arc<FiniteSSet> {
    Arc::new(FiniteSSet::standard(n, 3).unwrap())
}

fn flat_sharp(x: Arc<FiniteSSet>) -> Arc<MBSSet> {
    Arc::new(MBSSet::decorate(x, &Deco::Flat, &Deco::Sharp, &Deco::Sharp).unwrap().0)
}

fn point() -> Arc<MBSSet> {
    Arc::new(MBSSet::sharp(std_set(0)))
}

fn mb(p: &DecoratedMap) -> FibrationReport {
    classify_fibration(p, FibrationClass::MB, 3, DEFAULT_BUDGET).unwrap()
}

/// Horn into the nerve of `0 < 1 < 2`, over the point.
fn poset_square() -> LiftSquare {
    let j = instantiate(&GeneratorId::new(Family::A1, &[2, 1]), 3).unwrap().map;
    let x = flat_sharp(std_set(2));
    let top = SSetMap::new(j.source().under().clone(), x.under().clone(), j.map().assignments().clone()).unwrap();
    let top = DecoratedMap::new(top, j.source().clone(), x.clone()).unwrap();
    let p = to_point(x, 3).unwrap();
    let bottom = to_point(j.target().clone(), 3).unwrap();
    LiftSquare::new(j, p, top, bottom).unwrap()
}

#[test]
fn horn_in_a_poset_lifts_uniquely() {
    let sq = poset_square();
    let r = solve_lift(&sq, DEFAULT_BUDGET);
    assert_eq!(r.verdict, Verdict::Lifts);
    let w = r.witness.unwrap();
    verify_witness(&sq, &w).unwrap();
    assert!(w.map().same_assignments(&SSetMap::identity(sq.p.source().under().clone())));
}

#[test]
fn corrupted_witness_is_rejected() {
    let sq = poset_square();
    let x = sq.p.source().clone();
    let constant = SSetMap::from_fn(sq.j.target().under().clone(), x.under().clone(), |c| {
        Simplex::constant(CellId::new(0, 0), c.dim())
    })
    .unwrap();
    let bad = DecoratedMap::new(constant, sq.j.target().clone(), x).unwrap();
    assert!(verify_witness(&sq, &bad).is_err());
}

#[test]
fn identity_square_lifts_with_the_top_map() {
    let x = flat_sharp(std_set(2));
    let j = DecoratedMap::identity(x.clone());
    let p = to_point(x.clone(), 3).unwrap();
    let sq = LiftSquare::new(j.clone(), p.clone(), j.clone(), p).unwrap();
    let r = solve_lift(&sq, DEFAULT_BUDGET);
    assert!(r.witness.unwrap().map().same_assignments(j.map()));
}

#[test]
fn budget_exhaustion_is_its_own_verdict() {
    let sq = poset_square();
    assert_eq!(solve_lift(&sq, 0).verdict, Verdict::BudgetExhausted);
}

#[test]
fn terminal_vertex_against_a_sharp_edge() {
    let p = to_point(Arc::new(MBSSet::sharp(std_set(1))), 3).unwrap();
    let g = instantiate(&GeneratorId::new(Family::A5, &[]), 3).unwrap();
    let r = has_rlp(&p, &g, DEFAULT_BUDGET);
    assert_eq!(r.verdict, Verdict::Lifts);
    assert_eq!(r.squares, 2);
}

#[test]
fn point_lifts_against_every_generator() {
    let p = DecoratedMap::identity(point());
    for class in [FibrationClass::MB, FibrationClass::WeakS] {
        let r = classify_fibration(&p, class, 3, DEFAULT_BUDGET).unwrap();
        assert_eq!(r.outcome, Outcome::Pass);
        assert_eq!(r.entries.len(), class.generators(3).len());
    }
}

#[test]
fn edge_classifications() {
    // the only equivalences of [1] are identities, so the flat marking is fibrant
    assert_eq!(mb(&to_point(flat_sharp(std_set(1)), 3).unwrap()).outcome, Outcome::Pass);
    let sharp = mb(&to_point(Arc::new(MBSSet::sharp(std_set(1))), 3).unwrap());
    assert_eq!(sharp.outcome, Outcome::Fail);
    let failing: Vec<&str> = sharp.failures().map(|r| r.generator.as_str()).collect();
    assert!(failing.contains(&"A4:2"), "{failing:?}");

    let j = KanFixture::load("J", 3).unwrap().complex;
    let r = mb(&to_point(flat_sharp(j), 3).unwrap());
    let failing: Vec<&str> = r.failures().map(|r| r.generator.as_str()).collect();
    assert_eq!(failing, ["E:J"]);
    let f = r.failures().next().unwrap().failing.clone().unwrap();
    assert!(!f.top.is_empty());
}

#[test]
fn fibres() {
    let suite = fixture_suite(3).unwrap();
    let proj = &suite.iter().find(|f| f.name == "JxD1/D1").unwrap().p;
    let j = KanFixture::load("J", 3).unwrap().complex;
    for v in proj.target().under().cells(0) {
        let (fib, incl) = fibre(proj, v).unwrap();
        assert_eq!(fib.under().census(), j.census());
        assert!(incl.is_mono());
    }

    let d1 = Arc::new(MBSSet::sharp(std_set(1)));
    let (fib, _) = fibre(&DecoratedMap::identity(d1), CellId::new(0, 0)).unwrap();
    assert_eq!(fib.under().census(), vec![1]);
}

#[test]
fn fibres_of_fibrant_fixtures() {
    let mut checked = 0;
    for f in fixture_suite(3).unwrap() {
        if mb(&f.p).outcome != Outcome::Pass {
            continue;
        }
        for v in f.p.target().under().cells(0) {
            let (fib, _) = fibre(&f.p, v).unwrap();
            let over = to_point(fib.clone(), 3).unwrap();
            let w = classify_fibration(&over, FibrationClass::WeakS, 3, DEFAULT_BUDGET).unwrap();
            assert_eq!(w.outcome, Outcome::Pass, "{}", f.name);
            assert_eq!(fib.thin(), fib.lean(), "{}", f.name);
            for e in fib.under().simplices(1) {
                assert_eq!(fib.is_marked(&e), is_equivalence(&fib, &e), "{}", f.name);
            }
            checked += 1;
        }
    }
    assert!(checked >= 8, "{checked}");
}

#[test]
fn equivalences() {
    let d1 = flat_sharp(std_set(1));
    let v = Simplex::constant(CellId::new(0, 0), 1);
    assert!(is_equivalence(&d1, &v));
    let e01 = Simplex::cell(CellId::new(1, 0));
    assert!(!is_equivalence(&MBSSet::flat(std_set(1)), &e01));
    assert!(!is_equivalence(&d1, &e01));

    let j = Arc::new(MBSSet::sharp(KanFixture::load("J", 3).unwrap().complex));
    for e in j.under().cells(1) {
        let e = Simplex::cell(e);
        let (g, ..) = equivalence_witness(&j, &e).expect("J is a groupoid");
        assert!(!g.is_degenerate());
    }
}

#[test]
fn mapping_spaces() {
    let v = |i| CellId::new(0, i);
    let d1 = MBSSet::sharp(std_set(1));
    let m = mapping_space(&d1, v(0), v(1), 3).unwrap();
    assert_eq!(m.set.census(), vec![1]);
    for n in 0..3 {
        assert_eq!(m.set.simplices(n).len(), 1);
    }
    let pt = MBSSet::sharp(std_set(0));
    assert_eq!(mapping_space(&pt, v(0), v(0), 3).unwrap().set.census(), vec![1]);
    let d2 = MBSSet::flat(std_set(2));
    assert_eq!(mapping_space(&d2, v(0), v(2), 3).unwrap().set.census(), vec![1]);
}

/// Over a sharp-marked base, marked edges of a fibration satisfy two-out-of-three.
#[test]
fn theta_lifts_over_sharp_bases() {
    let theta = theta_map(3).unwrap();
    let mut tested = 0;
    for f in fixture_suite(3).unwrap() {
        let s = f.p.target();
        let sharp_base = s.under().cells(1).all(|e| s.marked().contains(&e));
        if !sharp_base || mb(&f.p).outcome != Outcome::Pass {
            continue;
        }
        let r = has_rlp_map(&f.p, "theta", &theta, DEFAULT_BUDGET);
        assert_eq!(r.verdict, Verdict::Lifts, "{}: {:?}", f.name, r.failing);
        tested += 1;
    }
    assert!(tested >= 4, "{tested}");
}

#[test]
fn reports_are_deterministic() {
    let suite = fixture_suite(3).unwrap();
    for f in suite.iter().take(6) {
        let a = serde_json::to_string(&mb(&f.p)).unwrap();
        let b = serde_json::to_string(&mb(&f.p)).unwrap();
        assert_eq!(a, b, "{}", f.name);
    }
    let sq = poset_square();
    let w1 = solve_lift(&sq, DEFAULT_BUDGET).witness.unwrap();
    let w2 = solve_lift(&sq, DEFAULT_BUDGET).witness.unwrap();
    assert!(w1.map().same_assignments(w2.map()));
}
