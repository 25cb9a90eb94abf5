//! Markings and biscalings on finite simplicial sets.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::sset::{CellId, FiniteSSet, ProductResult, PushoutResult, SSetMap, Simplex};

/// A choice of decorated cells in a fixed dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Deco {
    /// Only degenerate cells.
    Flat,
    /// Every cell.
    Sharp,
    /// The named cells (names absent from the set are ignored when `lenient`).
    Named(Vec<String>),
}

impl Deco {
    pub fn named<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Deco {
        Deco::Named(names.into_iter().map(Into::into).collect())
    }

    fn resolve(&self, x: &FiniteSSet, dim: usize, lenient: bool) -> Result<BTreeSet<CellId>> {
        match self {
            Deco::Flat => Ok(BTreeSet::new()),
            Deco::Sharp => Ok(x.cells(dim).collect()),
            Deco::Named(names) => {
                let mut out = BTreeSet::new();
                for n in names {
                    match x.lookup(n) {
                        Some(c) if c.dim() == dim => {
                            out.insert(c);
                        }
                        Some(_) => {
                            return Err(Error::Decoration(format!(
                                "`{n}` is not a {dim}-cell"
                            )))
                        }
                        None if lenient => {}
                        None => return Err(Error::UnknownCell(n.clone())),
                    }
                }
                Ok(out)
            }
        }
    }
}

/// A marked biscaled simplicial set. Degenerate edges and triangles are
/// decorated implicitly and never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct MBSSet {
    under: Arc<FiniteSSet>,
    marked: BTreeSet<CellId>,
    thin: BTreeSet<CellId>,
    lean: BTreeSet<CellId>,
}

/// A simplicial set with a single scaling.
#[derive(Clone, Debug, PartialEq)]
pub struct ScaledSSet {
    pub under: Arc<FiniteSSet>,
    pub thin: BTreeSet<CellId>,
}

impl MBSSet {
    /// Builds from cell-id sets, closing `lean` under `thin`.
    /// Returns the set and a note for each thin cell that had to be added to `lean`.
    pub fn from_ids(
        under: Arc<FiniteSSet>,
        marked: BTreeSet<CellId>,
        thin: BTreeSet<CellId>,
        mut lean: BTreeSet<CellId>,
    ) -> Result<(MBSSet, Vec<String>)> {
        for (set, dim) in [(&marked, 1), (&thin, 2), (&lean, 2)] {
            for c in set {
                if c.dim() != dim || c.idx as usize >= under.count(dim) {
                    return Err(Error::Decoration(format!(
                        "cell {:?} is not a {dim}-cell of the underlying set",
                        c
                    )));
                }
            }
        }
        let mut repairs = Vec::new();
        for &t in &thin {
            if lean.insert(t) {
                repairs.push(format!("thin `{}` added to lean", under.name(t)));
            }
        }
        Ok((
            MBSSet {
                under,
                marked,
                thin,
                lean,
            },
            repairs,
        ))
    }

    /// Decorates `under` by name; unknown names are errors.
    pub fn decorate(
        under: Arc<FiniteSSet>,
        marked: &Deco,
        thin: &Deco,
        lean: &Deco,
    ) -> Result<(MBSSet, Vec<String>)> {
        Self::decorate_inner(under, marked, thin, lean, false)
    }

    /// Like [`MBSSet::decorate`] but silently drops names of missing cells.
    pub fn decorate_lenient(
        under: Arc<FiniteSSet>,
        marked: &Deco,
        thin: &Deco,
        lean: &Deco,
    ) -> Result<MBSSet> {
        Ok(Self::decorate_inner(under, marked, thin, lean, true)?.0)
    }

    fn decorate_inner(
        under: Arc<FiniteSSet>,
        marked: &Deco,
        thin: &Deco,
        lean: &Deco,
        lenient: bool,
    ) -> Result<(MBSSet, Vec<String>)> {
        let m = marked.resolve(&under, 1, lenient)?;
        let t = thin.resolve(&under, 2, lenient)?;
        let l = lean.resolve(&under, 2, lenient)?;
        Self::from_ids(under, m, t, l)
    }

    pub fn flat(under: Arc<FiniteSSet>) -> MBSSet {
        MBSSet {
            under,
            marked: BTreeSet::new(),
            thin: BTreeSet::new(),
            lean: BTreeSet::new(),
        }
    }

    pub fn sharp(under: Arc<FiniteSSet>) -> MBSSet {
        MBSSet {
            marked: under.cells(1).collect(),
            thin: under.cells(2).collect(),
            lean: under.cells(2).collect(),
            under,
        }
    }

    pub fn under(&self) -> &Arc<FiniteSSet> {
        &self.under
    }

    pub fn marked(&self) -> &BTreeSet<CellId> {
        &self.marked
    }

    pub fn thin(&self) -> &BTreeSet<CellId> {
        &self.thin
    }

    pub fn lean(&self) -> &BTreeSet<CellId> {
        &self.lean
    }

    pub fn is_marked(&self, s: &Simplex) -> bool {
        s.is_degenerate() || self.marked.contains(&s.cell)
    }

    pub fn is_thin(&self, s: &Simplex) -> bool {
        s.is_degenerate() || self.thin.contains(&s.cell)
    }

    pub fn is_lean(&self, s: &Simplex) -> bool {
        s.is_degenerate() || self.lean.contains(&s.cell)
    }

    /// Decorations as sorted name lists (marked, thin, lean).
    pub fn names(&self) -> (Vec<String>, Vec<String>, Vec<String>) {
        let f = |s: &BTreeSet<CellId>| s.iter().map(|&c| self.under.name(c).to_string()).collect();
        (f(&self.marked), f(&self.thin), f(&self.lean))
    }

    pub fn with_marked(mut self, marked: BTreeSet<CellId>) -> Self {
        self.marked = marked;
        self
    }

    /// Replaces both scalings; `lean` is closed under `thin`.
    pub fn with_scalings(mut self, thin: BTreeSet<CellId>, lean: BTreeSet<CellId>) -> Self {
        self.lean = lean.union(&thin).copied().collect();
        self.thin = thin;
        self
    }

    pub fn check_closure(&self) -> Result<()> {
        if self.thin.is_subset(&self.lean) {
            Ok(())
        } else {
            Err(Error::Decoration("thin triangles must be lean".into()))
        }
    }

    /// Decorations pulled back along a map into `self`.
    pub fn pull_back(&self, along: &SSetMap) -> MBSSet {
        let src = along.source();
        let pick = |dim: usize, pred: &dyn Fn(&Simplex) -> bool| -> BTreeSet<CellId> {
            src.cells(dim).filter(|&c| pred(along.image_of_cell(c))).collect()
        };
        MBSSet {
            marked: pick(1, &|s| self.is_marked(s)),
            thin: pick(2, &|s| self.is_thin(s)),
            lean: pick(2, &|s| self.is_lean(s)),
            under: src.clone(),
        }
    }

    /// Componentwise product decorations.
    pub fn product(x: &Arc<MBSSet>, y: &Arc<MBSSet>) -> Result<(Arc<MBSSet>, ProductResult)> {
        let pr = FiniteSSet::product(&x.under, &y.under)?;
        let p = &pr.product;
        let both = |c: CellId, fx: &dyn Fn(&MBSSet, &Simplex) -> bool| {
            fx(x, pr.proj1.image_of_cell(c)) && fx(y, pr.proj2.image_of_cell(c))
        };
        let marked = p.cells(1).filter(|&c| both(c, &|m, s| m.is_marked(s))).collect();
        let thin = p.cells(2).filter(|&c| both(c, &|m, s| m.is_thin(s))).collect();
        let lean = p.cells(2).filter(|&c| both(c, &|m, s| m.is_lean(s))).collect();
        let out = MBSSet {
            under: p.clone(),
            marked,
            thin,
            lean,
        };
        Ok((Arc::new(out), pr))
    }

    /// Pushout with decorations the union of the images of both legs' decorations.
    pub fn pushout(f: &DecoratedMap, g: &DecoratedMap) -> Result<(Arc<MBSSet>, PushoutResult)> {
        let po = FiniteSSet::pushout(f.map(), g.map())?;
        let mut out = MBSSet::flat(po.pushout.clone());
        for (leg, deco) in [(&po.in_b, f.target()), (&po.in_c, g.target())] {
            for (src, dst) in [
                (&deco.marked, &mut out.marked),
                (&deco.thin, &mut out.thin),
                (&deco.lean, &mut out.lean),
            ] {
                for &c in src {
                    let img = leg.image_of_cell(c);
                    if !img.is_degenerate() {
                        dst.insert(img.cell);
                    }
                }
            }
        }
        Ok((Arc::new(out), po))
    }

    /// Left adjoint to the forgetful functor: flat marking, both scalings `T`.
    pub fn from_scaled(x: &ScaledSSet) -> MBSSet {
        MBSSet {
            under: x.under.clone(),
            marked: BTreeSet::new(),
            thin: x.thin.clone(),
            lean: x.thin.clone(),
        }
    }

    /// Forgets the marking and the lean scaling.
    pub fn to_scaled(&self) -> ScaledSSet {
        ScaledSSet {
            under: self.under.clone(),
            thin: self.thin.clone(),
        }
    }
}

/// A simplicial map preserving marking, thin and lean triangles.
#[derive(Clone, Debug)]
pub struct DecoratedMap {
    map: SSetMap,
    source: Arc<MBSSet>,
    target: Arc<MBSSet>,
}

impl DecoratedMap {
    pub fn new(map: SSetMap, source: Arc<MBSSet>, target: Arc<MBSSet>) -> Result<Self> {
        let m = DecoratedMap::new_unchecked(map, source, target)?;
        m.check()?;
        Ok(m)
    }

    pub(crate) fn new_unchecked(
        map: SSetMap,
        source: Arc<MBSSet>,
        target: Arc<MBSSet>,
    ) -> Result<Self> {
        let same = |a: &Arc<FiniteSSet>, b: &Arc<FiniteSSet>| Arc::ptr_eq(a, b) || **a == **b;
        if !same(map.source(), &source.under) || !same(map.target(), &target.under) {
            return Err(Error::NotAMap(
                "decorations are on different underlying sets".into(),
            ));
        }
        Ok(DecoratedMap {
            map,
            source,
            target,
        })
    }

    pub fn identity(x: Arc<MBSSet>) -> Self {
        DecoratedMap {
            map: SSetMap::identity(x.under.clone()),
            source: x.clone(),
            target: x,
        }
    }

    pub fn map(&self) -> &SSetMap {
        &self.map
    }

    pub fn source(&self) -> &Arc<MBSSet> {
        &self.source
    }

    pub fn target(&self) -> &Arc<MBSSet> {
        &self.target
    }

    pub fn apply(&self, s: &Simplex) -> Simplex {
        self.map.apply(s)
    }

    /// Checks the underlying map and decoration preservation on every cell.
    pub fn check(&self) -> Result<()> {
        self.map.check()?;
        self.check_decorations()
    }

    pub fn check_decorations(&self) -> Result<()> {
        let (s, t) = (&*self.source, &*self.target);
        let name = |c: CellId| s.under.name(c).to_string();
        for &c in &s.marked {
            if !t.is_marked(self.map.image_of_cell(c)) {
                return Err(Error::Decoration(format!("marked edge `{}`", name(c))));
            }
        }
        for &c in &s.thin {
            if !t.is_thin(self.map.image_of_cell(c)) {
                return Err(Error::Decoration(format!("thin triangle `{}`", name(c))));
            }
        }
        for &c in &s.lean {
            if !t.is_lean(self.map.image_of_cell(c)) {
                return Err(Error::Decoration(format!("lean triangle `{}`", name(c))));
            }
        }
        Ok(())
    }

    pub fn is_mono(&self) -> bool {
        self.map.is_mono()
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &DecoratedMap) -> Result<DecoratedMap> {
        Ok(DecoratedMap {
            map: self.map.then(&other.map)?,
            source: self.source.clone(),
            target: other.target.clone(),
        })
    }

    /// True when the decorations of the source are exactly those pulled back from the target.
    pub fn reflects_decorations(&self) -> bool {
        *self.source == self.target.pull_back(&self.map)
    }
}
