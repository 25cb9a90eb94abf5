//! Standard simplices, subcomplexes, products and pushouts.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use super::{ops, CellId, FiniteSSet, SSetBuilder, SSetMap, Simplex};
use crate::error::{Error, Result};

/// Which subcomplex to take.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SubcomplexKind {
    /// All cells below the top dimension of a set with a single top cell.
    Boundary,
    /// All faces of the top cell except the `i`-th.
    Horn(usize),
    /// The smallest subcomplex containing the named cells.
    Span(Vec<String>),
}

#[derive(Clone, Debug)]
pub struct ProductResult {
    pub product: Arc<FiniteSSet>,
    pub proj1: SSetMap,
    pub proj2: SSetMap,
}

#[derive(Clone, Debug)]
pub struct PushoutResult {
    pub pushout: Arc<FiniteSSet>,
    pub in_b: SSetMap,
    pub in_c: SSetMap,
}

pub(crate) fn vertex_label(v: usize, n: usize) -> String {
    if n < 10 {
        v.to_string()
    } else {
        format!("{v}.")
    }
}

pub(crate) fn subset_name(vs: &[usize], n: usize) -> String {
    vs.iter().map(|&v| vertex_label(v, n)).collect()
}

impl FiniteSSet {
    /// The standard `n`-simplex; cells are the nonempty subsets of `{0..n}`.
    pub fn standard(n: usize, cap: usize) -> Result<FiniteSSet> {
        if n > cap {
            return Err(Error::DimensionCap { dim: n, cap });
        }
        let mut b = SSetBuilder::new(cap).vertex_determined(true);
        let mut ids: HashMap<Vec<usize>, CellId> = HashMap::new();
        for k in 0..=n {
            for subset in k_subsets(n + 1, k + 1) {
                let faces = if k == 0 {
                    Vec::new()
                } else {
                    (0..=k)
                        .map(|i| {
                            let mut f = subset.clone();
                            f.remove(i);
                            Simplex::cell(ids[&f])
                        })
                        .collect()
                };
                let id = b.add(subset_name(&subset, n), faces)?;
                ids.insert(subset, id);
            }
        }
        Ok(b.finish_unchecked())
    }

    /// Smallest set of cells containing `seeds` and closed under faces.
    pub fn closure(&self, seeds: impl IntoIterator<Item = CellId>) -> BTreeSet<CellId> {
        let mut out = BTreeSet::new();
        let mut stack: Vec<CellId> = seeds.into_iter().collect();
        while let Some(c) = stack.pop() {
            if out.insert(c) {
                stack.extend(self.faces(c).iter().map(|f| f.cell));
            }
        }
        out
    }

    /// The subcomplex on a face-closed set of cells, keeping names.
    pub fn sub_on(self: &Arc<Self>, keep: &BTreeSet<CellId>) -> Result<(Arc<FiniteSSet>, SSetMap)> {
        let mut b = SSetBuilder::new(self.cap).vertex_determined(self.vertex_determined);
        b.merge_truncation(&self.truncation);
        let mut remap: HashMap<CellId, CellId> = HashMap::new();
        let mut assign: Vec<Vec<Simplex>> = Vec::new();
        for &c in keep {
            let faces = self
                .faces(c)
                .iter()
                .map(|f| {
                    remap
                        .get(&f.cell)
                        .map(|&cell| Simplex {
                            cell,
                            surj: f.surj.clone(),
                        })
                        .ok_or_else(|| Error::MalformedCell {
                            cell: self.name(c).to_string(),
                            reason: "cell set is not closed under faces".into(),
                        })
                })
                .collect::<Result<Vec<_>>>()?;
            let id = b.add(self.name(c), faces)?;
            remap.insert(c, id);
            if assign.len() <= id.dim() {
                assign.resize(id.dim() + 1, Vec::new());
            }
            assign[id.dim()].push(Simplex::cell(c));
        }
        let sub = Arc::new(b.finish_unchecked());
        let incl = SSetMap::new_unchecked(sub.clone(), self.clone(), assign)?;
        Ok((sub, incl))
    }

    pub fn subcomplex(
        self: &Arc<Self>,
        kind: &SubcomplexKind,
    ) -> Result<(Arc<FiniteSSet>, SSetMap)> {
        let keep = match kind {
            SubcomplexKind::Span(names) => {
                let seeds = names
                    .iter()
                    .map(|n| self.get(n))
                    .collect::<Result<Vec<_>>>()?;
                self.closure(seeds)
            }
            SubcomplexKind::Boundary => {
                let top = self.dim();
                let below: Vec<CellId> = self.all_cells().filter(|c| c.dim() < top).collect();
                self.closure(below)
            }
            SubcomplexKind::Horn(i) => {
                let n = self.dim();
                if self.count(n) != 1 || n == 0 {
                    return Err(Error::Params(
                        "horns are taken in a set with a single top cell".into(),
                    ));
                }
                if *i > n {
                    return Err(Error::HornIndex { dim: n, index: *i });
                }
                let top = CellId::new(n, 0);
                let seeds: Vec<CellId> = self
                    .faces(top)
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| j != i)
                    .map(|(_, f)| f.cell)
                    .collect();
                let mut keep = self.closure(seeds);
                // cells not below the top cell are untouched
                for c in self.all_cells() {
                    if c.dim() < n && !self.closure([top]).contains(&c) {
                        keep.insert(c);
                    }
                }
                keep
            }
        };
        self.sub_on(&keep)
    }

    /// Cartesian product, truncated at the larger of the two caps.
    pub fn product(x: &Arc<FiniteSSet>, y: &Arc<FiniteSSet>) -> Result<ProductResult> {
        let cap = x.cap.max(y.cap);
        let mut b = SSetBuilder::new(cap).vertex_determined(x.vertex_determined && y.vertex_determined);
        b.merge_truncation(&x.truncation);
        b.merge_truncation(&y.truncation);
        let mut ids: HashMap<(Simplex, Simplex), CellId> = HashMap::new();
        let mut proj: Vec<Vec<(Simplex, Simplex)>> = Vec::new();
        let top = x.dim() + y.dim();
        for k in 0..=top {
            let mut level: Vec<(Simplex, Simplex)> = Vec::new();
            for p in 0..=k.min(x.dim()) {
                for q in 0..=k.min(y.dim()) {
                    if p + q < k || x.count(p) == 0 || y.count(q) == 0 {
                        continue;
                    }
                    let sa = ops::surjections(k, p);
                    let sb = ops::surjections(k, q);
                    for eta in &sa {
                        for mu in &sb {
                            let joint = (0..k).all(|j| eta[j] != eta[j + 1] || mu[j] != mu[j + 1]);
                            if !joint {
                                continue;
                            }
                            for cx in x.cells(p) {
                                for cy in y.cells(q) {
                                    level.push((
                                        Simplex { cell: cx, surj: eta.clone() },
                                        Simplex { cell: cy, surj: mu.clone() },
                                    ));
                                }
                            }
                        }
                    }
                }
            }
            level.sort();
            if k > cap {
                for _ in &level {
                    b.note_truncated(k);
                }
                continue;
            }
            for (a, c) in level {
                let faces = if k == 0 {
                    Vec::new()
                } else {
                    (0..=k)
                        .map(|i| {
                            let fa = x.face(&a, i);
                            let fc = y.face(&c, i);
                            let (zeta, na, nc) = normalize_pair(x, y, &fa, &fc);
                            Simplex {
                                cell: ids[&(na, nc)],
                                surj: zeta,
                            }
                        })
                        .collect()
                };
                let name = format!("({},{})", x.simplex_name(&a), y.simplex_name(&c));
                let id = b.add(name, faces)?;
                ids.insert((a.clone(), c.clone()), id);
                if proj.len() <= k {
                    proj.resize(k + 1, Vec::new());
                }
                proj[k].push((a, c));
            }
        }
        let product = Arc::new(b.finish_unchecked());
        let p1 = proj.iter().map(|v| v.iter().map(|(a, _)| a.clone()).collect()).collect();
        let p2 = proj.iter().map(|v| v.iter().map(|(_, c)| c.clone()).collect()).collect();
        Ok(ProductResult {
            proj1: SSetMap::new_unchecked(product.clone(), x.clone(), p1)?,
            proj2: SSetMap::new_unchecked(product.clone(), y.clone(), p2)?,
            product,
        })
    }

    /// Looks up the product cell (or degenerate simplex) with the given projections.
    pub fn product_simplex(
        prod: &ProductResult,
        a: &Simplex,
        c: &Simplex,
    ) -> Option<Simplex> {
        let x = prod.proj1.target();
        let y = prod.proj2.target();
        let (zeta, na, nc) = normalize_pair(x, y, a, c);
        let dim = na.dim();
        prod.product.cells(dim).find_map(|cell| {
            let s = Simplex::cell(cell);
            (prod.proj1.apply(&s) == na && prod.proj2.apply(&s) == nc).then(|| Simplex {
                cell,
                surj: zeta.clone(),
            })
        })
    }

    /// Pushout of `B <- A -> C`, computed level-wise on all simplices up to the cap.
    pub fn pushout(f: &SSetMap, g: &SSetMap) -> Result<PushoutResult> {
        if !Arc::ptr_eq(f.source(), g.source()) && **f.source() != **g.source() {
            return Err(Error::NotAMap("pushout legs must share a source".into()));
        }
        let a = f.source().clone();
        let bset = f.target().clone();
        let cset = g.target().clone();
        let cap = bset.cap.max(cset.cap);
        let top = bset.dim().max(cset.dim()).min(cap);

        let mut uf = UnionFind::default();
        let mut key_of: HashMap<(u8, Simplex), usize> = HashMap::new();
        let mut keys: Vec<(u8, Simplex)> = Vec::new();
        let mut node = |side: u8, s: Simplex, uf: &mut UnionFind| -> usize {
            *key_of.entry((side, s.clone())).or_insert_with(|| {
                keys.push((side, s));
                uf.push()
            })
        };
        for side in 0..2u8 {
            let set = if side == 0 { &bset } else { &cset };
            for c in set.all_cells() {
                node(side, Simplex::cell(c), &mut uf);
            }
        }
        for n in 0..=top.min(a.dim().max(top)) {
            for s in a.simplices(n) {
                let u = node(0, f.apply(&s), &mut uf);
                let v = node(1, g.apply(&s), &mut uf);
                uf.union(u, v);
            }
        }
        drop(node);
        // classes with a degenerate member are degenerate
        let mut degenerate_root: HashMap<usize, (u8, Simplex)> = HashMap::new();
        let mut members: HashMap<usize, Vec<(u8, CellId)>> = HashMap::new();
        for (i, (side, s)) in keys.iter().enumerate() {
            let r = uf.find(i);
            if s.is_degenerate() {
                let e = degenerate_root.entry(r).or_insert_with(|| (*side, s.clone()));
                if (*side, s) < (e.0, &e.1) {
                    *e = (*side, s.clone());
                }
            } else {
                members.entry(r).or_default().push((*side, s.cell));
            }
        }
        let mut classes: Vec<(u8, CellId, usize)> = members
            .iter()
            .filter(|(r, _)| !degenerate_root.contains_key(r))
            .map(|(&r, m)| {
                let (side, cell) = *m.iter().min().unwrap();
                (side, cell, r)
            })
            .collect();
        classes.sort_by_key(|&(side, cell, _)| (cell.dim, side, cell.idx));

        let mut b = SSetBuilder::new(cap);
        b.merge_truncation(&bset.truncation);
        b.merge_truncation(&cset.truncation);
        let mut class_cell: HashMap<usize, CellId> = HashMap::new();
        let b_names: std::collections::HashSet<&str> =
            bset.all_cells().map(|c| bset.name(c)).collect();

        // Eilenberg–Zilber decomposition of the class of a simplex.
        fn decompose(
            side: u8,
            s: &Simplex,
            sets: [&FiniteSSet; 2],
            key_of: &HashMap<(u8, Simplex), usize>,
            uf: &mut UnionFind,
            degenerate_root: &HashMap<usize, (u8, Simplex)>,
            class_cell: &HashMap<usize, CellId>,
        ) -> Simplex {
            let root = key_of.get(&(side, s.clone())).map(|&i| uf.find(i));
            if let Some(r) = root {
                if let Some(&cell) = class_cell.get(&r) {
                    return Simplex::cell(cell);
                }
            }
            let (dside, dm) = match root.and_then(|r| degenerate_root.get(&r)) {
                Some(m) => m.clone(),
                None => {
                    debug_assert!(s.is_degenerate());
                    (side, s.clone())
                }
            };
            let base = decompose(
                dside,
                &Simplex::cell(dm.cell),
                sets,
                key_of,
                uf,
                degenerate_root,
                class_cell,
            );
            Simplex {
                cell: base.cell,
                surj: ops::compose(&base.surj, &dm.surj),
            }
        }

        let sets = [&*bset, &*cset];
        for &(side, cell, root) in &classes {
            let set = sets[side as usize];
            let faces = if cell.dim() == 0 {
                Vec::new()
            } else {
                (0..=cell.dim())
                    .map(|i| {
                        let face = set.face(&Simplex::cell(cell), i);
                        decompose(side, &face, sets, &key_of, &mut uf, &degenerate_root, &class_cell)
                    })
                    .collect()
            };
            let mut name = set.name(cell).to_string();
            if side == 1 {
                while b_names.contains(name.as_str()) || b.lookup(&name).is_some() {
                    name = format!("c.{name}");
                }
            }
            let id = b.add(name, faces)?;
            class_cell.insert(root, id);
        }
        let pushout = Arc::new(b.finish_unchecked());
        let mut leg = |side: u8, set: &Arc<FiniteSSet>| -> Result<SSetMap> {
            let assign = (0..set.raw_cells().len())
                .map(|d| {
                    set.cells(d)
                        .map(|c| {
                            decompose(
                                side,
                                &Simplex::cell(c),
                                sets,
                                &key_of,
                                &mut uf,
                                &degenerate_root,
                                &class_cell,
                            )
                        })
                        .collect()
                })
                .collect();
            SSetMap::new_unchecked(set.clone(), pushout.clone(), assign)
        };
        let in_b = leg(0, &bset)?;
        let in_c = leg(1, &cset)?;
        Ok(PushoutResult {
            pushout,
            in_b,
            in_c,
        })
    }
}

impl PushoutResult {
    /// The unique map out of the pushout restricting to `u` and `v`.
    pub fn factor(&self, u: &SSetMap, v: &SSetMap) -> Result<SSetMap> {
        let target = u.target().clone();
        let p = &self.pushout;
        let mut assign: Vec<Vec<Option<Simplex>>> =
            (0..=p.dim()).map(|d| vec![None; p.count(d)]).collect();
        for (leg, m) in [(&self.in_b, u), (&self.in_c, v)] {
            for c in leg.source().all_cells() {
                let img = leg.image_of_cell(c);
                if img.is_degenerate() {
                    continue;
                }
                let val = m.image_of_cell(c).clone();
                let slot = &mut assign[img.cell.dim()][img.cell.idx as usize];
                match slot {
                    Some(prev) if *prev != val => {
                        return Err(Error::NotAMap("cocone does not commute".into()))
                    }
                    _ => *slot = Some(val),
                }
            }
        }
        let assign = assign
            .into_iter()
            .map(|v| v.into_iter().map(|s| s.expect("pushout legs are jointly surjective")).collect())
            .collect();
        let h = SSetMap::new(p.clone(), target, assign)?;
        let ok_b = self.in_b.then(&h)?.same_assignments(u);
        let ok_c = self.in_c.then(&h)?.same_assignments(v);
        if !(ok_b && ok_c) {
            return Err(Error::NotAMap("cocone does not factor".into()));
        }
        Ok(h)
    }
}

/// Normalises a pair of simplices to `zeta^*(a', c')` with `(a', c')` jointly nondegenerate.
pub(crate) fn normalize_pair(
    x: &FiniteSSet,
    y: &FiniteSSet,
    a: &Simplex,
    c: &Simplex,
) -> (ops::Mono, Simplex, Simplex) {
    let va: Vec<(u8, u8)> = a.surj.iter().copied().zip(c.surj.iter().copied()).collect();
    let mut keep: Vec<usize> = vec![0];
    let mut zeta: ops::Mono = ops::Mono::new();
    zeta.push(0);
    for j in 1..va.len() {
        if va[j] != va[j - 1] {
            keep.push(j);
        }
        zeta.push((keep.len() - 1) as u8);
    }
    let na = x.restrict(a, &keep);
    let nc = y.restrict(c, &keep);
    (zeta, na, nc)
}

fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in start..n {
            cur.push(v);
            rec(v + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

#[derive(Default)]
pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn push(&mut self) -> usize {
        self.parent.push(self.parent.len());
        self.parent.len() - 1
    }
    pub(crate) fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }
    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}
