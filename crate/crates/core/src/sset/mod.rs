//! Finitely presented simplicial sets in Eilenberg–Zilber normal form.
//!
//! A [`FiniteSSet`] lists its nondegenerate cells dimension by dimension, each
//! with the `k+1` faces it was attached along. Every simplex is then uniquely
//! `eta^* x` for a monotone surjection `eta` and a nondegenerate cell `x`, which
//! is exactly the [`Simplex`] representation used everywhere in this crate.

mod constructions;
mod map;
pub mod ops;

pub use constructions::{PushoutResult, ProductResult, SubcomplexKind};
pub(crate) use constructions::{normalize_pair, subset_name};
pub use map::SSetMap;

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use ops::Mono;

pub const DEFAULT_CAP: usize = 5;

/// Position of a nondegenerate cell: its dimension and its index within that dimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CellId {
    pub dim: u8,
    pub idx: u32,
}

impl CellId {
    pub fn new(dim: usize, idx: usize) -> Self {
        CellId {
            dim: dim as u8,
            idx: idx as u32,
        }
    }
    pub fn dim(self) -> usize {
        self.dim as usize
    }
}

/// A simplex `surj^* cell`; its dimension is `surj.len() - 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Simplex {
    pub cell: CellId,
    pub surj: Mono,
}

impl Simplex {
    pub fn cell(cell: CellId) -> Self {
        Simplex {
            cell,
            surj: ops::identity(cell.dim()),
        }
    }
    pub fn dim(&self) -> usize {
        self.surj.len() - 1
    }
    pub fn is_degenerate(&self) -> bool {
        self.surj.len() - 1 != self.cell.dim()
    }
    pub fn word(&self) -> DegeneracyWord {
        DegeneracyWord::from_surjection(&self.surj)
    }
    /// The totally degenerate `n`-simplex on a vertex.
    pub fn constant(vertex: CellId, n: usize) -> Self {
        debug_assert_eq!(vertex.dim, 0);
        Simplex {
            cell: vertex,
            surj: std::iter::repeat(0).take(n + 1).collect(),
        }
    }
}

/// A degeneracy word `s_{j1} s_{j2} ... ` in normal form (`j1 > j2 > ...`).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DegeneracyWord(Vec<usize>);

impl DegeneracyWord {
    pub fn new(indices: Vec<usize>) -> Result<Self> {
        if indices.windows(2).any(|w| w[0] <= w[1]) {
            return Err(Error::MalformedCell {
                cell: format!("{indices:?}"),
                reason: "degeneracy word must be strictly decreasing".into(),
            });
        }
        Ok(DegeneracyWord(indices))
    }
    pub fn identity() -> Self {
        DegeneracyWord(Vec::new())
    }
    pub fn indices(&self) -> &[usize] {
        &self.0
    }
    pub fn len(&self) -> usize {
        self.0.len()
    }
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
    pub fn from_surjection(eta: &[u8]) -> Self {
        let mut r = ops::repeats(eta);
        r.reverse();
        DegeneracyWord(r)
    }
    /// The surjection `[base_dim + len] ->> [base_dim]` this word denotes.
    pub fn to_surjection(&self, base_dim: usize) -> Result<Mono> {
        let n = base_dim + self.0.len();
        if self.0.iter().any(|&j| j >= n) {
            return Err(Error::MalformedCell {
                cell: format!("{:?}", self.0),
                reason: format!("index out of range for a {n}-simplex"),
            });
        }
        let mut eta = Mono::new();
        eta.push(0);
        for j in 0..n {
            let last = *eta.last().unwrap();
            eta.push(if self.0.contains(&j) { last } else { last + 1 });
        }
        Ok(eta)
    }
}

impl fmt::Display for DegeneracyWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for j in &self.0 {
            write!(f, "s{j}")?;
        }
        Ok(())
    }
}

/// Presentation-level reference to a simplex: a word applied to a named cell.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SimplexRef {
    pub word: DegeneracyWord,
    pub target: String,
    pub dim: usize,
}

#[derive(Clone, Debug)]
pub(crate) struct CellData {
    pub(crate) name: String,
    pub(crate) faces: Vec<Simplex>,
}

/// Record of cells dropped because they lay above the dimension cap.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Truncation {
    pub dropped: usize,
    pub lowest_dropped_dim: Option<usize>,
}

impl Truncation {
    pub fn is_truncated(&self) -> bool {
        self.dropped > 0
    }
    pub fn record(&mut self, dim: usize) {
        self.dropped += 1;
        self.lowest_dropped_dim = Some(self.lowest_dropped_dim.map_or(dim, |d| d.min(dim)));
    }
    pub fn merge(&mut self, other: &Truncation) {
        self.dropped += other.dropped;
        if let Some(d) = other.lowest_dropped_dim {
            self.lowest_dropped_dim = Some(self.lowest_dropped_dim.map_or(d, |e| e.min(d)));
        }
    }
}

/// A finite simplicial set truncated at dimension `cap`.
#[derive(Clone, Debug)]
pub struct FiniteSSet {
    cap: usize,
    cells: Vec<Vec<CellData>>,
    names: HashMap<String, CellId>,
    /// Simplices are determined by their vertex sequences (nerves of posets).
    vertex_determined: bool,
    truncation: Truncation,
}

impl PartialEq for FiniteSSet {
    fn eq(&self, other: &Self) -> bool {
        self.cap == other.cap
            && self.cells.len() == other.cells.len()
            && self.cells.iter().zip(&other.cells).all(|(a, b)| {
                a.len() == b.len()
                    && a.iter()
                        .zip(b)
                        .all(|(x, y)| x.name == y.name && x.faces == y.faces)
            })
    }
}

pub struct SSetBuilder {
    set: FiniteSSet,
}

impl SSetBuilder {
    pub fn new(cap: usize) -> Self {
        SSetBuilder {
            set: FiniteSSet {
                cap,
                cells: Vec::new(),
                names: HashMap::new(),
                vertex_determined: false,
                truncation: Truncation::default(),
            },
        }
    }

    pub fn vertex_determined(mut self, yes: bool) -> Self {
        self.set.vertex_determined = yes;
        self
    }

    pub fn cap(&self) -> usize {
        self.set.cap
    }

    pub fn lookup(&self, name: &str) -> Option<CellId> {
        self.set.names.get(name).copied()
    }

    pub fn note_truncated(&mut self, dim: usize) {
        self.set.truncation.record(dim);
    }

    pub fn merge_truncation(&mut self, t: &Truncation) {
        self.set.truncation.merge(t);
    }

    /// Adds a nondegenerate cell with the given faces `d_0 .. d_k` (empty for vertices).
    pub fn add(&mut self, name: impl Into<String>, faces: Vec<Simplex>) -> Result<CellId> {
        let name = name.into();
        let dim = if faces.is_empty() { 0 } else { faces.len() - 1 };
        if dim > self.set.cap {
            return Err(Error::DimensionCap {
                dim,
                cap: self.set.cap,
            });
        }
        if faces.len() == 1 {
            return Err(Error::MalformedCell {
                cell: name,
                reason: "a cell needs zero or at least two faces".into(),
            });
        }
        if self.set.names.contains_key(&name) {
            return Err(Error::DuplicateCell(name));
        }
        for f in &faces {
            if f.dim() + 1 != dim {
                return Err(Error::MalformedCell {
                    cell: name,
                    reason: format!("face of dimension {} on a {dim}-cell", f.dim()),
                });
            }
            let ok = self
                .set
                .cells
                .get(f.cell.dim())
                .is_some_and(|v| (f.cell.idx as usize) < v.len());
            if !ok || f.surj.iter().max().copied().unwrap_or(0) as usize != f.cell.dim() {
                return Err(Error::MalformedCell {
                    cell: name,
                    reason: "face refers to a missing cell".into(),
                });
            }
        }
        while self.set.cells.len() <= dim {
            self.set.cells.push(Vec::new());
        }
        let id = CellId::new(dim, self.set.cells[dim].len());
        self.set.cells[dim].push(CellData {
            name: name.clone(),
            faces,
        });
        self.set.names.insert(name, id);
        Ok(id)
    }

    /// Validates the simplicial identities and returns the set.
    pub fn finish(self) -> Result<FiniteSSet> {
        self.set.check_identities()?;
        Ok(self.set)
    }

    pub(crate) fn finish_unchecked(self) -> FiniteSSet {
        self.set
    }
}

impl FiniteSSet {
    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn truncation(&self) -> &Truncation {
        &self.truncation
    }

    pub fn is_vertex_determined(&self) -> bool {
        self.vertex_determined
    }

    /// Highest dimension carrying a nondegenerate cell (0 for the empty set).
    pub fn dim(&self) -> usize {
        self.cells
            .iter()
            .rposition(|v| !v.is_empty())
            .unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.cells.first().is_none_or(|v| v.is_empty())
    }

    pub fn count(&self, dim: usize) -> usize {
        self.cells.get(dim).map_or(0, |v| v.len())
    }

    pub fn census(&self) -> Vec<usize> {
        self.cells.iter().map(|v| v.len()).collect()
    }

    pub fn total_cells(&self) -> usize {
        self.cells.iter().map(|v| v.len()).sum()
    }

    pub fn cells(&self, dim: usize) -> impl Iterator<Item = CellId> + '_ {
        (0..self.count(dim)).map(move |i| CellId::new(dim, i))
    }

    pub fn all_cells(&self) -> impl Iterator<Item = CellId> + '_ {
        (0..self.cells.len()).flat_map(move |d| self.cells(d))
    }

    pub fn name(&self, c: CellId) -> &str {
        &self.cells[c.dim()][c.idx as usize].name
    }

    pub fn lookup(&self, name: &str) -> Option<CellId> {
        self.names.get(name).copied()
    }

    pub fn get(&self, name: &str) -> Result<CellId> {
        self.lookup(name)
            .ok_or_else(|| Error::UnknownCell(name.to_string()))
    }

    /// The stored faces `d_0 .. d_k` of a nondegenerate cell.
    pub fn faces(&self, c: CellId) -> &[Simplex] {
        &self.cells[c.dim()][c.idx as usize].faces
    }

    /// Applies the simplicial operator `alpha: [m] -> [n]` to an `n`-simplex.
    pub fn pull(&self, s: &Simplex, alpha: &[u8]) -> Simplex {
        let beta = ops::compose(&s.surj, alpha);
        let (eps, image) = ops::epi_mono(&beta);
        let y = self.restrict_cell(s.cell, &image);
        Simplex {
            cell: y.cell,
            surj: ops::compose(&y.surj, &eps),
        }
    }

    /// The face of a nondegenerate cell spanned by the (increasing) vertex positions `image`.
    fn restrict_cell(&self, c: CellId, image: &[u8]) -> Simplex {
        let k = c.dim();
        if image.len() == k + 1 {
            return Simplex::cell(c);
        }
        let missing = (0..=k as u8)
            .rev()
            .find(|v| !image.contains(v))
            .expect("proper face");
        let face = &self.faces(c)[missing as usize];
        let shifted: Mono = image
            .iter()
            .map(|&v| if v > missing { v - 1 } else { v })
            .collect();
        self.pull(face, &shifted)
    }

    pub fn face(&self, s: &Simplex, i: usize) -> Simplex {
        self.pull(s, &ops::coface(s.dim(), i))
    }

    pub fn degeneracy(&self, s: &Simplex, j: usize) -> Simplex {
        Simplex {
            cell: s.cell,
            surj: ops::compose(&s.surj, &ops::codegeneracy(s.dim(), j)),
        }
    }

    pub fn vertex(&self, s: &Simplex, i: usize) -> CellId {
        self.pull(s, &[i as u8]).cell
    }

    pub fn vertices(&self, s: &Simplex) -> Vec<CellId> {
        (0..=s.dim()).map(|i| self.vertex(s, i)).collect()
    }

    /// Restriction to the face spanned by the listed vertex positions.
    pub fn restrict(&self, s: &Simplex, positions: &[usize]) -> Simplex {
        self.pull(s, &ops::inclusion(positions))
    }

    /// Every `n`-simplex, degenerate ones included, in canonical order.
    pub fn simplices(&self, n: usize) -> Vec<Simplex> {
        let mut out = Vec::new();
        for k in 0..=n.min(self.cells.len().saturating_sub(1)) {
            let surjs = ops::surjections(n, k);
            for c in self.cells(k) {
                for eta in &surjs {
                    out.push(Simplex {
                        cell: c,
                        surj: eta.clone(),
                    });
                }
            }
        }
        out.sort();
        out
    }

    pub fn contains(&self, s: &Simplex) -> bool {
        self.cells
            .get(s.cell.dim())
            .is_some_and(|v| (s.cell.idx as usize) < v.len())
            && s.surj.last().copied() == Some(s.cell.dim)
            && s.surj.first().copied() == Some(0)
            && s.surj.windows(2).all(|w| w[1] == w[0] || w[1] == w[0] + 1)
    }

    pub fn simplex_ref(&self, s: &Simplex) -> SimplexRef {
        SimplexRef {
            word: s.word(),
            target: self.name(s.cell).to_string(),
            dim: s.cell.dim(),
        }
    }

    pub fn resolve(&self, r: &SimplexRef) -> Result<Simplex> {
        let cell = self.get(&r.target)?;
        if cell.dim() != r.dim {
            return Err(Error::MalformedCell {
                cell: r.target.clone(),
                reason: format!("declared dimension {} but cell has {}", r.dim, cell.dim()),
            });
        }
        Ok(Simplex {
            cell,
            surj: r.word.to_surjection(r.dim)?,
        })
    }

    /// A canonical display name for any simplex.
    pub fn simplex_name(&self, s: &Simplex) -> String {
        if self.vertex_determined {
            self.vertices(s)
                .into_iter()
                .map(|v| self.name(v))
                .collect()
        } else if s.is_degenerate() {
            format!("{}({})", s.word(), self.name(s.cell))
        } else {
            self.name(s.cell).to_string()
        }
    }

    /// The unique nondegenerate cell with the given vertex sequence, if any.
    pub fn cell_with_vertices(&self, vertices: &[CellId]) -> Option<CellId> {
        if vertices.is_empty() {
            return None;
        }
        let dim = vertices.len() - 1;
        self.cells(dim)
            .find(|&c| self.vertices(&Simplex::cell(c)) == vertices)
    }

    /// Looks up a cell of a vertex-determined set by its vertex names.
    pub fn cell_by_vertex_names(&self, names: &[&str]) -> Result<CellId> {
        let vs = names
            .iter()
            .map(|n| self.get(n))
            .collect::<Result<Vec<_>>>()?;
        self.cell_with_vertices(&vs)
            .ok_or_else(|| Error::UnknownCell(names.join("->")))
    }

    /// Checks `d_i d_j = d_{j-1} d_i` for `i < j` on every cell.
    pub fn check_identities(&self) -> Result<()> {
        for c in self.all_cells() {
            let k = c.dim();
            if k < 2 {
                continue;
            }
            let s = Simplex::cell(c);
            for j in 0..=k {
                for i in 0..j {
                    let lhs = self.face(&self.face(&s, j), i);
                    let rhs = self.face(&self.face(&s, i), j - 1);
                    if lhs != rhs {
                        return Err(Error::SimplicialIdentity {
                            cell: self.name(c).to_string(),
                            i,
                            j,
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub(crate) fn raw_cells(&self) -> &Vec<Vec<CellData>> {
        &self.cells
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn word_surjection_roundtrip() {
        for n in 0..6 {
            for k in 0..=n {
                for eta in ops::surjections(n, k) {
                    let w = DegeneracyWord::from_surjection(&eta);
                    assert_eq!(w.len(), n - k);
                    assert_eq!(w.to_surjection(k).unwrap(), eta);
                }
            }
        }
    }

    #[test]
    fn normal_form_matches_applying_degeneracies() {
        // s_{j1} s_{j2} ... applied right-to-left agrees with the stored surjection.
        let delta = FiniteSSet::standard(2, 5).unwrap();
        let top = Simplex::cell(delta.lookup("012").unwrap());
        let w = DegeneracyWord::new(vec![3, 1, 0]).unwrap();
        let mut s = top.clone();
        for &j in w.indices().iter().rev() {
            s = delta.degeneracy(&s, j);
        }
        assert_eq!(s.surj, w.to_surjection(2).unwrap());
        assert_eq!(s.word(), w);
    }

    #[test]
    fn word_must_decrease() {
        assert!(DegeneracyWord::new(vec![0, 1]).is_err());
        assert!(DegeneracyWord::new(vec![1, 1]).is_err());
        assert!(DegeneracyWord::new(vec![]).unwrap().is_empty());
    }

    #[test]
    fn face_of_degenerate_simplex() {
        let d1 = FiniteSSet::standard(1, 5).unwrap();
        let e = Simplex::cell(d1.lookup("01").unwrap());
        let s0e = d1.degeneracy(&e, 0); // 001
        assert_eq!(d1.simplex_name(&s0e), "001");
        // d_0 s_0 = id, d_1 s_0 = id, d_2 s_0 = s_0 d_1
        assert_eq!(d1.face(&s0e, 0), e);
        assert_eq!(d1.face(&s0e, 1), e);
        assert_eq!(d1.simplex_name(&d1.face(&s0e, 2)), "00");
    }

    #[test]
    fn builder_rejects_bad_identities() {
        let mut b = SSetBuilder::new(3);
        let x = b.add("x", vec![]).unwrap();
        let y = b.add("y", vec![]).unwrap();
        let f = b
            .add("f", vec![Simplex::cell(y), Simplex::cell(x)])
            .unwrap();
        let g = b
            .add("g", vec![Simplex::cell(y), Simplex::cell(y)])
            .unwrap();
        // d_1 d_2 = d_1 f = x but d_1 d_1 = d_1 g = y
        b.add(
            "bad",
            vec![Simplex::cell(g), Simplex::cell(g), Simplex::cell(f)],
        )
        .unwrap();
        assert!(matches!(
            b.finish(),
            Err(Error::SimplicialIdentity { .. })
        ));
    }
}
