use std::collections::BTreeSet;
use std::sync::Arc;

use mbs_core::generators::{instantiate, list_generators, Family, GeneratorId};
use mbs_core::{Deco, DecoratedMap, FiniteSSet, MBSSet, ScaledSSet};

fn names(x: &MBSSet) -> (Vec<String>, Vec<String>, Vec<String>) {
    x.names()
}

fn set(v: &[&str]) -> Vec<String> {
    let mut v: Vec<String> = v.iter().map(|s| s.to_string()).collect();
    v.sort();
    v
}

#[test]
fn a2_scalings_as_printed() {
    let g = instantiate(&"A2".parse().unwrap(), 5).unwrap();
    let (m, t, l) = names(g.source());
    assert!(m.is_empty());
    assert_eq!(t, set(&["024", "123", "013", "134", "012"]));
    assert_eq!(l, t);
    let (m, t2, l2) = names(g.target());
    assert!(m.is_empty());
    let added: BTreeSet<_> = t2.iter().filter(|c| !t.contains(c)).cloned().collect();
    assert_eq!(added, ["014", "034"].iter().map(|s| s.to_string()).collect());
    assert_eq!(l2, t2);
}

#[test]
fn a1_removes_top_and_one_face() {
    for id in list_generators(Family::A1, 5) {
        let g = instantiate(&id, 5).unwrap();
        let s = g.source().under().total_cells();
        let t = g.target().under().total_cells();
        assert_eq!(t - s, 2, "{id}");
        let (n, i) = (id.params[0], id.params[1]);
        let face: String = (0..=n).filter(|&v| v != i).map(|v| v.to_string()).collect();
        assert!(g.source().under().lookup(&face).is_none());
    }
    let g = instantiate(&"A1:2:1".parse().unwrap(), 3).unwrap();
    // the scaled triangle is the missing top cell, so the source is flat
    assert!(g.source().thin().is_empty());
    assert_eq!(names(g.target()).1, set(&["012"]));
}

#[test]
fn every_generator_is_a_decorated_mono() {
    for fam in Family::ALL {
        for id in list_generators(fam, 4) {
            let g = instantiate(&id, 5).unwrap();
            g.map.check().unwrap();
            assert!(g.map.is_mono(), "{id}");
            g.source().check_closure().unwrap();
            g.target().check_closure().unwrap();
        }
    }
}

#[test]
fn decorations_match_the_printed_families() {
    let g = instantiate(&"S5".parse().unwrap(), 3).unwrap();
    assert_eq!(names(g.source()).0, set(&["23"]));
    // every triangle except d_3 = 012
    assert_eq!(names(g.source()).2, set(&["013", "023", "123"]));
    assert_eq!(names(g.target()).2.len(), 4);

    let g = instantiate(&"S3:1".parse().unwrap(), 3).unwrap();
    assert_eq!(names(g.source()).1, set(&["012"]));
    assert_eq!(names(g.source()).2, set(&["012", "013", "123"]));
    assert_eq!(names(g.target()).1, set(&["012"]));

    let g = instantiate(&"A4:3".parse().unwrap(), 3).unwrap();
    assert_eq!(names(g.source()).0, set(&["23"]));
    assert_eq!(names(g.source()).2, set(&["023"]));
    assert!(names(g.source()).1.is_empty());

    // the lean triangle of A3 is the image of 01n in the collapsed horn
    let g = instantiate(&"A3:3".parse().unwrap(), 3).unwrap();
    assert_eq!(names(g.source()).2, set(&["013"]));
    assert!(names(g.source()).1.is_empty());
    assert_eq!(g.target().under().census(), vec![3, 5, 4, 1]);

    let g = instantiate(&"S4".parse().unwrap(), 3).unwrap();
    assert_eq!(names(g.source()).2, set(&["012", "013", "023"]));

    let g = instantiate(&"A5".parse().unwrap(), 3).unwrap();
    assert_eq!(g.source().under().census(), vec![1]);
    assert_eq!(g.target().under().name(g.map.map().image_of_cell(mbs_core::CellId::new(0, 0)).cell), "1");

    let g = instantiate(&"E:J".parse().unwrap(), 3).unwrap();
    assert!(g.source().marked().is_empty());
    assert_eq!(g.target().marked().len(), 2);
}

#[test]
fn parameter_ranges() {
    let ids = |f, n| list_generators(f, n).iter().map(|i| i.to_string()).collect::<Vec<_>>();
    assert_eq!(ids(Family::A1, 3), ["A1:2:1", "A1:3:1", "A1:3:2"]);
    assert_eq!(ids(Family::A5, 3), ["A5"]);
    assert_eq!(ids(Family::C1, 2), ["C1:0", "C1:1", "C1:2"]);
    assert_eq!(ids(Family::SCiii, 4), ["SCiii:3", "SCiii:4"]);
    assert_eq!(ids(Family::A3, 3), ["A3:2", "A3:3"]);
    assert!("A4:1".parse::<GeneratorId>().is_err());
    assert!("S3:3".parse::<GeneratorId>().is_err());
    assert!(instantiate(&"A2".parse().unwrap(), 3).is_err());
}

#[test]
fn scaled_translation_round_trip() {
    let d2 = Arc::new(FiniteSSet::standard(2, 3).unwrap());
    let x = ScaledSSet { under: d2.clone(), thin: d2.cells(2).collect() };
    let l = MBSSet::from_scaled(&x);
    assert!(l.marked().is_empty());
    assert_eq!(l.lean(), l.thin());
    assert_eq!(l.to_scaled(), x);
    let flat1 = ScaledSSet { under: Arc::new(FiniteSSet::standard(1, 3).unwrap()), thin: BTreeSet::new() };
    assert_eq!(MBSSet::from_scaled(&flat1), MBSSet::flat(flat1.under.clone()));
    assert_eq!(MBSSet::sharp(d2.clone()).to_scaled().thin.len(), 1);
    // scaled generators become their marked biscaled counterparts under L
    let sci = instantiate(&"SCi:3:1".parse().unwrap(), 3).unwrap();
    let a1 = instantiate(&"A1:3:1".parse().unwrap(), 3).unwrap();
    assert_eq!(**sci.target(), **a1.target());
}

#[test]
fn product_decorations_are_componentwise() {
    let d1 = Arc::new(MBSSet::sharp(Arc::new(FiniteSSet::standard(1, 3).unwrap())));
    let (p, pr) = MBSSet::product(&d1, &d1).unwrap();
    assert_eq!(p.marked().len(), 5);
    assert_eq!(p.thin().len(), 2);
    DecoratedMap::new(pr.proj1.clone(), p.clone(), d1.clone()).unwrap();
    DecoratedMap::new(pr.proj2.clone(), p.clone(), d1.clone()).unwrap();

    let flat = Arc::new(MBSSet::flat(d1.under().clone()));
    let (q, _) = MBSSet::product(&flat, &d1).unwrap();
    // marked only where the first projection is degenerate
    assert_eq!(q.marked().len(), 2);
    // both triangles of the square project degenerately to each factor
    assert_eq!(q.thin().len(), 2);

    let pt = Arc::new(MBSSet::sharp(Arc::new(FiniteSSet::standard(0, 3).unwrap())));
    let d2 = Arc::new(MBSSet::decorate(Arc::new(FiniteSSet::standard(2, 3).unwrap()), &Deco::named(["01"]), &Deco::Flat, &Deco::Sharp).unwrap().0);
    let (u, _) = MBSSet::product(&d2, &pt).unwrap();
    assert_eq!(u.marked().len(), 1);
    assert_eq!(u.lean().len(), 1);
    assert!(u.thin().is_empty());
}
