//! Backtracking extension search: assign images to the free cells of a
//! decorated source, dimension by dimension, subject to faces, decorations
//! and an optional projection constraint.

use std::collections::HashMap;
use std::ops::ControlFlow;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::decor::MBSSet;
use crate::sset::{ops, CellId, FiniteSSet, SSetMap, Simplex};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    pub nodes: u64,
    pub max_depth: usize,
}

impl SearchStats {
    pub fn absorb(&mut self, other: SearchStats) {
        self.nodes += other.nodes;
        self.max_depth = self.max_depth.max(other.max_depth);
    }
}

/// Raised when the node budget runs out.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OutOfBudget;

/// Simplices of a target indexed by their tuple of faces, built lazily per dimension.
pub struct TargetIndex<'a> {
    x: &'a FiniteSSet,
    levels: Vec<OnceLock<HashMap<Vec<Simplex>, Vec<Simplex>>>>,
}

impl<'a> TargetIndex<'a> {
    pub fn new(x: &'a FiniteSSet, max_dim: usize) -> Self {
        TargetIndex {
            x,
            levels: (0..=max_dim).map(|_| OnceLock::new()).collect(),
        }
    }

    pub fn set(&self) -> &FiniteSSet {
        self.x
    }

    fn level(&self, k: usize) -> &HashMap<Vec<Simplex>, Vec<Simplex>> {
        self.levels[k].get_or_init(|| {
            let mut m: HashMap<Vec<Simplex>, Vec<Simplex>> = HashMap::new();
            for s in self.x.simplices(k) {
                let key = if k == 0 {
                    Vec::new()
                } else {
                    (0..=k).map(|i| self.x.face(&s, i)).collect()
                };
                m.entry(key).or_default().push(s);
            }
            m
        })
    }

    /// All `k`-simplices with the given faces (ignored when `k == 0`).
    pub fn with_faces(&self, k: usize, faces: &[Simplex]) -> &[Simplex] {
        if k >= self.levels.len() {
            return &[];
        }
        self.level(k).get(faces).map(|v| v.as_slice()).unwrap_or(&[])
    }
}

/// An extension problem: find a decorated map `B -> X` agreeing with `fixed`
/// and, when `over` is set, lying over the given images in the base.
pub struct Extension<'a> {
    pub b: &'a MBSSet,
    pub x: &'a MBSSet,
    pub index: &'a TargetIndex<'a>,
    pub fixed: Vec<Vec<Option<Simplex>>>,
    pub over: Option<(&'a SSetMap, Vec<Vec<Simplex>>)>,
}

/// An assignment of images to every nondegenerate cell of the source.
pub type Assignment = Vec<Vec<Simplex>>;

impl<'a> Extension<'a> {
    pub fn new(b: &'a MBSSet, x: &'a MBSSet, index: &'a TargetIndex<'a>) -> Self {
        debug_assert!(index.levels.len() > b.under().dim());
        let fixed = (0..=b.under().dim())
            .map(|d| vec![None; b.under().count(d)])
            .collect();
        Extension {
            b,
            x,
            index,
            fixed,
            over: None,
        }
    }

    pub fn fix(&mut self, c: CellId, s: Simplex) {
        self.fixed[c.dim()][c.idx as usize] = Some(s);
    }

    fn decorations_ok(&self, c: CellId, s: &Simplex) -> bool {
        match c.dim() {
            1 => !self.b.marked().contains(&c) || self.x.is_marked(s),
            2 => {
                (!self.b.thin().contains(&c) || self.x.is_thin(s))
                    && (!self.b.lean().contains(&c) || self.x.is_lean(s))
            }
            _ => true,
        }
    }

    fn over_ok(&self, c: CellId, s: &Simplex) -> bool {
        match &self.over {
            Some((p, bottom)) => p.apply(s) == bottom[c.dim()][c.idx as usize],
            None => true,
        }
    }

    fn image_of(assign: &[Vec<Option<Simplex>>], f: &Simplex) -> Simplex {
        let img = assign[f.cell.dim()][f.cell.idx as usize]
            .as_ref()
            .expect("faces are assigned before cofaces");
        Simplex {
            cell: img.cell,
            surj: ops::compose(&img.surj, &f.surj),
        }
    }

    /// Face compatibility of a fixed cell against its fixed faces.
    fn faces_ok(&self, assign: &[Vec<Option<Simplex>>], c: CellId, s: &Simplex) -> bool {
        let bset = self.b.under();
        c.dim() == 0
            || bset.faces(c).iter().enumerate().all(|(i, f)| {
                assign[f.cell.dim()][f.cell.idx as usize].is_none()
                    || Self::image_of(assign, f) == self.x.under().face(s, i)
            })
    }

    /// Visits every solution in canonical order until `visit` breaks.
    /// Returns `Err(OutOfBudget)` if the node budget ran out first.
    pub fn for_each(
        &self,
        budget: &mut u64,
        stats: &mut SearchStats,
        mut visit: impl FnMut(&Assignment) -> ControlFlow<()>,
    ) -> Result<ControlFlow<()>, OutOfBudget> {
        let bset = self.b.under();
        let mut assign = self.fixed.clone();
        let mut free = Vec::new();
        for c in bset.all_cells() {
            match &self.fixed[c.dim()][c.idx as usize] {
                Some(s) => {
                    if !self.decorations_ok(c, s) || !self.over_ok(c, s) || !self.faces_ok(&assign, c, s) {
                        return Ok(ControlFlow::Continue(()));
                    }
                }
                None => free.push(c),
            }
        }
        self.dfs(&free, 0, &mut assign, budget, stats, &mut visit)
    }

    fn dfs(
        &self,
        free: &[CellId],
        depth: usize,
        assign: &mut Vec<Vec<Option<Simplex>>>,
        budget: &mut u64,
        stats: &mut SearchStats,
        visit: &mut impl FnMut(&Assignment) -> ControlFlow<()>,
    ) -> Result<ControlFlow<()>, OutOfBudget> {
        stats.max_depth = stats.max_depth.max(depth);
        if depth == free.len() {
            let full: Assignment = assign
                .iter()
                .map(|v| v.iter().map(|s| s.clone().unwrap()).collect())
                .collect();
            return Ok(visit(&full));
        }
        let c = free[depth];
        let k = c.dim();
        let faces: Vec<Simplex> = if k == 0 {
            Vec::new()
        } else {
            self.b
                .under()
                .faces(c)
                .iter()
                .map(|f| Self::image_of(assign, f))
                .collect()
        };
        for cand in self.index.with_faces(k, &faces) {
            if *budget == 0 {
                return Err(OutOfBudget);
            }
            *budget -= 1;
            stats.nodes += 1;
            if !self.decorations_ok(c, cand) || !self.over_ok(c, cand) {
                continue;
            }
            assign[k][c.idx as usize] = Some(cand.clone());
            let r = self.dfs(free, depth + 1, assign, budget, stats, visit)?;
            assign[k][c.idx as usize] = None;
            if r.is_break() {
                return Ok(r);
            }
        }
        Ok(ControlFlow::Continue(()))
    }

    /// The first solution in canonical order.
    pub fn first(
        &self,
        budget: &mut u64,
        stats: &mut SearchStats,
    ) -> Result<Option<Assignment>, OutOfBudget> {
        let mut found = None;
        let _ = self.for_each(budget, stats, |a| {
            found = Some(a.clone());
            ControlFlow::Break(())
        })?;
        Ok(found)
    }

    /// Every solution, in canonical order.
    pub fn all(
        &self,
        budget: &mut u64,
        stats: &mut SearchStats,
    ) -> Result<Vec<Assignment>, OutOfBudget> {
        let mut out = Vec::new();
        let _ = self.for_each(budget, stats, |a| {
            out.push(a.clone());
            ControlFlow::Continue(())
        })?;
        Ok(out)
    }
}
