use std::collections::HashSet;
use std::sync::Arc;

use super::{ops, CellId, FiniteSSet, Simplex};
use crate::error::{Error, Result};

/// A simplicial map, stored on nondegenerate source cells.
#[derive(Clone, Debug)]
pub struct SSetMap {
    source: Arc<FiniteSSet>,
    target: Arc<FiniteSSet>,
    assign: Vec<Vec<Simplex>>,
}

impl SSetMap {
    /// Builds and validates a map from per-cell images.
    pub fn new(
        source: Arc<FiniteSSet>,
        target: Arc<FiniteSSet>,
        assign: Vec<Vec<Simplex>>,
    ) -> Result<Self> {
        let m = SSetMap::new_unchecked(source, target, assign)?;
        m.check()?;
        Ok(m)
    }

    pub(crate) fn new_unchecked(
        source: Arc<FiniteSSet>,
        target: Arc<FiniteSSet>,
        mut assign: Vec<Vec<Simplex>>,
    ) -> Result<Self> {
        let dims = source.raw_cells().len();
        assign.resize(dims.max(assign.len()), Vec::new());
        for d in 0..dims {
            if assign[d].len() != source.count(d) {
                return Err(Error::NotAMap(format!(
                    "{} images given for {} cells of dimension {d}",
                    assign[d].len(),
                    source.count(d)
                )));
            }
        }
        Ok(SSetMap {
            source,
            target,
            assign,
        })
    }

    /// Builds a map from a per-cell closure.
    pub fn from_fn(
        source: Arc<FiniteSSet>,
        target: Arc<FiniteSSet>,
        mut f: impl FnMut(CellId) -> Simplex,
    ) -> Result<Self> {
        let assign = (0..source.raw_cells().len())
            .map(|d| source.cells(d).map(&mut f).collect())
            .collect();
        SSetMap::new(source, target, assign)
    }

    pub fn identity(x: Arc<FiniteSSet>) -> Self {
        let assign = (0..x.raw_cells().len())
            .map(|d| x.cells(d).map(Simplex::cell).collect())
            .collect();
        SSetMap {
            source: x.clone(),
            target: x,
            assign,
        }
    }

    /// The map sending cells to the target cells of the same name.
    pub fn by_name(source: Arc<FiniteSSet>, target: Arc<FiniteSSet>) -> Result<Self> {
        let mut missing = None;
        let assign = (0..source.raw_cells().len())
            .map(|d| {
                source
                    .cells(d)
                    .map(|c| match target.lookup(source.name(c)) {
                        Some(t) => Simplex::cell(t),
                        None => {
                            missing.get_or_insert_with(|| source.name(c).to_string());
                            Simplex::cell(c)
                        }
                    })
                    .collect()
            })
            .collect();
        if let Some(name) = missing {
            return Err(Error::UnknownCell(name));
        }
        SSetMap::new(source, target, assign)
    }

    pub fn source(&self) -> &Arc<FiniteSSet> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteSSet> {
        &self.target
    }

    pub fn image_of_cell(&self, c: CellId) -> &Simplex {
        &self.assign[c.dim()][c.idx as usize]
    }

    pub fn assignments(&self) -> &Vec<Vec<Simplex>> {
        &self.assign
    }

    pub fn apply(&self, s: &Simplex) -> Simplex {
        let img = self.image_of_cell(s.cell);
        Simplex {
            cell: img.cell,
            surj: ops::compose(&img.surj, &s.surj),
        }
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &SSetMap) -> Result<SSetMap> {
        if !Arc::ptr_eq(&self.target, &other.source) && *self.target != *other.source {
            return Err(Error::NotAMap("composition of non-composable maps".into()));
        }
        let assign = self
            .assign
            .iter()
            .map(|v| v.iter().map(|s| other.apply(s)).collect())
            .collect();
        Ok(SSetMap {
            source: self.source.clone(),
            target: other.target.clone(),
            assign,
        })
    }

    /// Checks that every image is a simplex of matching dimension and that faces commute.
    pub fn check(&self) -> Result<()> {
        for c in self.source.all_cells() {
            let img = self.image_of_cell(c);
            if img.dim() != c.dim() || !self.target.contains(img) {
                return Err(Error::NotAMap(format!(
                    "cell `{}` has an image of the wrong shape",
                    self.source.name(c)
                )));
            }
            if c.dim() == 0 {
                continue;
            }
            let s = Simplex::cell(c);
            for i in 0..=c.dim() {
                let lhs = self.apply(&self.source.face(&s, i));
                let rhs = self.target.face(img, i);
                if lhs != rhs {
                    return Err(Error::NotAMap(format!(
                        "face d_{i} of `{}` does not commute",
                        self.source.name(c)
                    )));
                }
            }
        }
        Ok(())
    }

    /// True when nondegenerate cells go injectively to nondegenerate cells.
    pub fn is_mono(&self) -> bool {
        self.check_mono().is_ok()
    }

    pub fn check_mono(&self) -> Result<()> {
        let mut seen = HashSet::new();
        for c in self.source.all_cells() {
            let img = self.image_of_cell(c);
            if img.is_degenerate() {
                return Err(Error::NotMono(format!(
                    "`{}` maps to a degenerate simplex",
                    self.source.name(c)
                )));
            }
            if !seen.insert(img.cell) {
                return Err(Error::NotMono(format!(
                    "`{}` collides with another cell",
                    self.source.name(c)
                )));
            }
        }
        Ok(())
    }

    /// Nondegenerate target cells hit by nondegenerate source cells.
    pub fn image_cells(&self) -> HashSet<CellId> {
        self.assign
            .iter()
            .flatten()
            .filter(|s| !s.is_degenerate())
            .map(|s| s.cell)
            .collect()
    }

    pub fn same_assignments(&self, other: &SSetMap) -> bool {
        self.assign == other.assign
    }
}
