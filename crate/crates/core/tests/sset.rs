use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use mbs_core::sset::ops::binomial;
use mbs_core::sset::SubcomplexKind;
use mbs_core::{FiniteSSet, SSetMap, Simplex};
use proptest::prelude::*;

fn delta(n: usize) -> Arc<FiniteSSet> {
    Arc::new(FiniteSSet::standard(n, 6).unwrap())
}

/// Strictly increasing chains of length k+1 in the grid poset [p] x [q].
fn chains(p: usize, q: usize, k: usize) -> usize {
    fn rec(cur: (usize, usize), left: usize, p: usize, q: usize) -> usize {
        if left == 0 {
            return 1;
        }
        let mut n = 0;
        for a in cur.0..=p {
            for b in cur.1..=q {
                if (a, b) != cur {
                    n += rec((a, b), left - 1, p, q);
                }
            }
        }
        n
    }
    let mut total = 0;
    for a in 0..=p {
        for b in 0..=q {
            total += rec((a, b), k, p, q);
        }
    }
    total
}

#[test]
fn standard_counts_match_subsets() {
    for n in 0..=5 {
        let d = delta(n);
        for k in 0..=n {
            let brute = (0u32..1 << (n + 1)).filter(|m| m.count_ones() as usize == k + 1).count();
            assert_eq!(d.count(k), brute);
        }
        d.check_identities().unwrap();
    }
    assert_eq!(delta(4).total_cells(), 31);
    assert!(FiniteSSet::standard(4, 3).is_err());
}

#[test]
fn boundary_and_horns() {
    let (b, incl) = delta(1).subcomplex(&SubcomplexKind::Boundary).unwrap();
    assert_eq!(b.census(), vec![2]);
    incl.check_mono().unwrap();

    let (h, _) = delta(2).subcomplex(&SubcomplexKind::Horn(1)).unwrap();
    assert_eq!(h.census(), vec![3, 2]);
    assert!(h.lookup("02").is_none());

    // faces of Δ^3 other than the top cell and d_0: subsets containing 0, or missing a vertex other than 0
    let (h, incl) = delta(3).subcomplex(&SubcomplexKind::Horn(0)).unwrap();
    let brute = (1u32..16)
        .filter(|&m| m != 15 && m != 0b1110)
        .count();
    assert_eq!(h.total_cells(), brute);
    assert_eq!(h.census(), vec![4, 6, 3]);
    incl.check_mono().unwrap();
    incl.check().unwrap();
    assert!(delta(3).subcomplex(&SubcomplexKind::Horn(4)).is_err());
}

#[test]
fn product_census_matches_chain_oracle() {
    for p in 0..=3 {
        for q in 0..=3 {
            let pr = FiniteSSet::product(&delta(p), &delta(q)).unwrap();
            for k in 0..=p + q {
                assert_eq!(pr.product.count(k), chains(p, q, k), "p={p} q={q} k={k}");
            }
            pr.product.check_identities().unwrap();
            pr.proj1.check().unwrap();
            pr.proj2.check().unwrap();
            assert!(!pr.product.truncation().is_truncated());
        }
    }
    let sq = FiniteSSet::product(&delta(1), &delta(1)).unwrap();
    assert_eq!(sq.product.census(), vec![4, 5, 2]);
    assert!(sq.product.lookup("(001,011)").is_some());
}

#[test]
fn shuffle_top_cells_are_binomial() {
    for n in 1..=4 {
        for m in 1..=4 {
            let a = Arc::new(FiniteSSet::standard(n, 8).unwrap());
            let b = Arc::new(FiniteSSet::standard(m, 8).unwrap());
            let pr = FiniteSSet::product(&a, &b).unwrap();
            assert_eq!(pr.product.count(n + m), binomial(n + m, n));
        }
    }
}

#[test]
fn product_with_point_is_identity() {
    let pr = FiniteSSet::product(&delta(3), &delta(0)).unwrap();
    assert_eq!(pr.product.census(), delta(3).census());
    assert!(pr.proj1.is_mono());
}

#[test]
fn truncation_is_flagged() {
    let a = Arc::new(FiniteSSet::standard(2, 3).unwrap());
    let pr = FiniteSSet::product(&a, &a).unwrap();
    assert_eq!(pr.product.dim(), 3);
    let t = pr.product.truncation();
    assert!(t.is_truncated());
    assert_eq!(t.lowest_dropped_dim, Some(4));
}

/// Counts classes of k-simplices of B + C under the relation generated by f(a) ~ g(a).
fn quotient_oracle(f: &SSetMap, g: &SSetMap, k: usize) -> usize {
    let mut id: HashMap<(u8, Simplex), usize> = HashMap::new();
    let mut parent: Vec<usize> = Vec::new();
    for (side, set) in [(0u8, f.target()), (1, g.target())] {
        for s in set.simplices(k) {
            id.insert((side, s), parent.len());
            parent.push(parent.len());
        }
    }
    fn find(p: &mut Vec<usize>, mut i: usize) -> usize {
        while p[i] != i {
            i = p[i];
        }
        i
    }
    for s in f.source().simplices(k) {
        let a = id[&(0, f.apply(&s))];
        let b = id[&(1, g.apply(&s))];
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        parent[ra] = rb;
    }
    (0..parent.len()).filter(|&i| find(&mut parent, i) == i).count()
}

#[test]
fn edge_collapse_pushout() {
    let d2 = delta(2);
    let (e, incl) = d2.subcomplex(&SubcomplexKind::Span(vec!["01".into()])).unwrap();
    let pt = delta(0);
    let collapse = SSetMap::from_fn(e.clone(), pt.clone(), |c| {
        Simplex::constant(pt.lookup("0").unwrap(), c.dim())
    })
    .unwrap();
    let po = FiniteSSet::pushout(&incl, &collapse).unwrap();
    assert_eq!(po.pushout.census(), vec![2, 2, 1]);
    po.pushout.check_identities().unwrap();
    po.in_b.check().unwrap();
    po.in_c.check().unwrap();
    for k in 0..=3 {
        assert_eq!(po.pushout.simplices(k).len(), quotient_oracle(&incl, &collapse, k));
    }
    // the triangle is left-degenerate: its 01 face is degenerate
    let top = Simplex::cell(po.pushout.cells(2).next().unwrap());
    assert!(po.pushout.face(&top, 2).is_degenerate());
}

#[test]
fn pushout_along_identity_is_copy() {
    let c = delta(2);
    let (a, incl) = c.subcomplex(&SubcomplexKind::Horn(1)).unwrap();
    let id = SSetMap::identity(a.clone());
    let po = FiniteSSet::pushout(&id, &incl).unwrap();
    assert_eq!(po.pushout.census(), c.census());
    assert!(po.in_c.is_mono());
}

#[test]
fn boundary_vertices_to_point() {
    let d2 = delta(2);
    let (verts, incl) = d2
        .subcomplex(&SubcomplexKind::Span(vec!["0".into(), "1".into(), "2".into()]))
        .unwrap();
    let pt = delta(0);
    let collapse = SSetMap::from_fn(verts.clone(), pt.clone(), |_| Simplex::cell(pt.lookup("0").unwrap())).unwrap();
    let po = FiniteSSet::pushout(&incl, &collapse).unwrap();
    assert_eq!(po.pushout.census(), vec![1, 3, 1]);
    for k in 0..=3 {
        assert_eq!(po.pushout.simplices(k).len(), quotient_oracle(&incl, &collapse, k));
    }
    po.pushout.check_identities().unwrap();
}

#[test]
fn pushout_factors_cocones() {
    // glue two triangles along an edge, then factor the evident cocone into Δ^1 x Δ^1
    let sq = FiniteSSet::product(&delta(1), &delta(1)).unwrap().product;
    let (t1, i1) = sq.subcomplex(&SubcomplexKind::Span(vec!["(001,011)".into()])).unwrap();
    let (t2, i2) = sq.subcomplex(&SubcomplexKind::Span(vec!["(011,001)".into()])).unwrap();
    let (shared, _) = sq.subcomplex(&SubcomplexKind::Span(vec!["(01,01)".into()])).unwrap();
    let f = SSetMap::by_name(shared.clone(), t1.clone()).unwrap();
    let g = SSetMap::by_name(shared, t2.clone()).unwrap();
    let po = FiniteSSet::pushout(&f, &g).unwrap();
    assert_eq!(po.pushout.census(), sq.census());
    let h = po.factor(&i1, &i2).unwrap();
    assert!(h.is_mono());
}

fn span_strategy() -> impl Strategy<Value = Vec<String>> {
    let names: Vec<String> = (1u32..32)
        .map(|m| (0..5).filter(|v| m >> v & 1 == 1).map(|v| v.to_string()).collect())
        .collect();
    proptest::sample::subsequence(names, 1..6)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn spans_are_face_closed_subcomplexes(cells in span_strategy()) {
        let d4 = delta(4);
        let (sub, incl) = d4.subcomplex(&SubcomplexKind::Span(cells.clone())).unwrap();
        sub.check_identities().unwrap();
        incl.check().unwrap();
        incl.check_mono().unwrap();
        // membership oracle: a subset is present iff it is contained in a seed
        let seeds: Vec<BTreeSet<char>> = cells.iter().map(|c| c.chars().collect()).collect();
        for m in 1u32..32 {
            let s: BTreeSet<char> = (0..5).filter(|v| m >> v & 1 == 1).map(|v| char::from(b'0' + v as u8)).collect();
            let name: String = s.iter().collect();
            let expect = seeds.iter().any(|t| s.is_subset(t));
            prop_assert_eq!(sub.lookup(&name).is_some(), expect);
        }
    }

    #[test]
    fn products_of_spans_are_valid(a in span_strategy(), b in span_strategy()) {
        let cap3 = Arc::new(FiniteSSet::standard(4, 4).unwrap());
        let (x, _) = cap3.subcomplex(&SubcomplexKind::Span(a)).unwrap();
        let (y, _) = cap3.subcomplex(&SubcomplexKind::Span(b)).unwrap();
        let pr = FiniteSSet::product(&x, &y).unwrap();
        pr.product.check_identities().unwrap();
        pr.proj1.check().unwrap();
        pr.proj2.check().unwrap();
    }
}
