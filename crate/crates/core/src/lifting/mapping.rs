use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use crate::decor::MBSSet;
use crate::error::{Error, Result};
use crate::sset::{ops, CellId, FiniteSSet, SSetBuilder, SSetMap, Simplex};

/// The mapping space `X(a,b)`: its `n`-simplices are the `(n+1)`-simplices of
/// `X` whose first `n+1` vertices collapse onto `a` and whose last vertex is `b`.
#[derive(Clone, Debug)]
pub struct MappingSpace {
    pub set: Arc<FiniteSSet>,
    /// The simplex of `X` underlying each nondegenerate cell.
    pub simplex_of: Vec<Vec<Simplex>>,
    /// Edges coming from thin triangles.
    pub equivalences: BTreeSet<CellId>,
    /// Edges coming from lean triangles.
    pub cocartesian: BTreeSet<CellId>,
    lookup: HashMap<Simplex, CellId>,
    pub a: CellId,
    pub b: CellId,
}

/// Splits an `X`-simplex of mapping-space dimension `m` into its mapping-space
/// degeneracy (repeats among the first `m+1` vertices) and the remaining simplex.
fn split(x: &FiniteSSet, s: &Simplex) -> (ops::Mono, Simplex) {
    let m = s.dim() - 1;
    let mut keep: Vec<usize> = vec![0];
    let mut zeta: ops::Mono = ops::Mono::new();
    zeta.push(0);
    for p in 1..=m {
        if s.surj[p] != s.surj[p - 1] {
            keep.push(p);
        }
        zeta.push((keep.len() - 1) as u8);
    }
    keep.push(m + 1);
    (zeta, x.restrict(s, &keep))
}

impl MappingSpace {
    /// Looks up an `X`-simplex of the right shape as a (possibly degenerate) simplex of `X(a,b)`.
    pub fn simplex(&self, x: &FiniteSSet, s: &Simplex) -> Option<Simplex> {
        let (zeta, base) = split(x, s);
        self.lookup.get(&base).map(|&cell| Simplex { cell, surj: zeta })
    }

    /// The `X`-simplex underlying a simplex of `X(a,b)`.
    pub fn realize(&self, x: &FiniteSSet, s: &Simplex) -> Simplex {
        let base = &self.simplex_of[s.cell.dim()][s.cell.idx as usize];
        let mut alpha: ops::Mono = s.surj.clone();
        alpha.push(base.dim() as u8);
        x.pull(base, &alpha)
    }

    /// The induced map `X(a,b) -> S(pa,pb)`.
    pub fn induced(&self, x: &FiniteSSet, p: &SSetMap, other: &MappingSpace) -> Result<SSetMap> {
        let s = p.target();
        let assign = self
            .simplex_of
            .iter()
            .map(|level| {
                level
                    .iter()
                    .map(|sig| {
                        let _ = x;
                        other
                            .simplex(s, &p.apply(sig))
                            .ok_or_else(|| Error::NotAMap("image leaves the mapping space".into()))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        SSetMap::new(self.set.clone(), other.set.clone(), assign)
    }

    /// Marked by the coCartesian edges; no scalings.
    pub fn as_marked(&self) -> MBSSet {
        MBSSet::flat(self.set.clone()).with_marked(self.cocartesian.clone())
    }
}

/// Builds `X(a,b)` up to dimension `cap` (limited by the cap of `X`).
pub fn mapping_space(x: &MBSSet, a: CellId, b: CellId, cap: usize) -> Result<MappingSpace> {
    let u = x.under();
    for v in [a, b] {
        if v.dim() != 0 || v.idx as usize >= u.count(0) {
            return Err(Error::Params("mapping spaces are taken between vertices".into()));
        }
    }
    let mut builder = SSetBuilder::new(cap);
    builder.merge_truncation(u.truncation());
    let top = cap.min(u.cap().saturating_sub(1));
    if top < cap {
        builder.note_truncated(top + 1);
    }
    let mut simplex_of: Vec<Vec<Simplex>> = Vec::new();
    let mut lookup: HashMap<Simplex, CellId> = HashMap::new();
    for n in 0..=top {
        let mut level = Vec::new();
        for s in u.simplices(n + 1) {
            let vs = u.vertices(&s);
            if vs[n + 1] != b || vs[..=n].iter().any(|&v| v != a) {
                continue;
            }
            if (0..n).any(|p| s.surj[p] == s.surj[p + 1]) {
                continue;
            }
            if u.restrict(&s, &(0..=n).collect::<Vec<_>>()) != Simplex::constant(a, n) {
                continue;
            }
            let faces = if n == 0 {
                Vec::new()
            } else {
                (0..=n)
                    .map(|i| {
                        let f = u.face(&s, i);
                        let (zeta, base) = split(u, &f);
                        Simplex {
                            cell: lookup[&base],
                            surj: zeta,
                        }
                    })
                    .collect()
            };
            let id = builder.add(u.simplex_name(&s), faces)?;
            lookup.insert(s.clone(), id);
            level.push(s);
        }
        simplex_of.push(level);
    }
    let set = Arc::new(builder.finish()?);
    let mut equivalences = BTreeSet::new();
    let mut cocartesian = BTreeSet::new();
    if let Some(edges) = simplex_of.get(1) {
        for (i, s) in edges.iter().enumerate() {
            let c = CellId::new(1, i);
            if x.is_thin(s) {
                equivalences.insert(c);
            }
            if x.is_lean(s) {
                cocartesian.insert(c);
            }
        }
    }
    Ok(MappingSpace {
        set,
        simplex_of,
        equivalences,
        cocartesian,
        lookup,
        a,
        b,
    })
}
