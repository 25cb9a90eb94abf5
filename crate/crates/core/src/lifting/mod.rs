//! Lifting problems, right lifting properties, fibres, equivalences and mapping spaces.

mod mapping;
pub mod search;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::decor::{DecoratedMap, MBSSet};
use crate::error::{Error, Result};
use crate::generators::{instantiate, list_generators, Family, Generator, GeneratorId};
use crate::sset::{CellId, SSetMap, Simplex};

pub use mapping::{mapping_space, MappingSpace};
pub use search::{Assignment, Extension, OutOfBudget, SearchStats, TargetIndex};

pub const DEFAULT_BUDGET: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Lifts,
    NoLift,
    BudgetExhausted,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Lifts => "lifts",
            Verdict::NoLift => "no-lift",
            Verdict::BudgetExhausted => "budget-exhausted",
        })
    }
}

/// A commuting square `p ∘ top = bottom ∘ j` with `j` a monomorphism.
#[derive(Clone, Debug)]
pub struct LiftSquare {
    pub j: DecoratedMap,
    pub p: DecoratedMap,
    pub top: DecoratedMap,
    pub bottom: DecoratedMap,
}

impl LiftSquare {
    pub fn new(j: DecoratedMap, p: DecoratedMap, top: DecoratedMap, bottom: DecoratedMap) -> Result<Self> {
        j.map().check_mono()?;
        for m in [&j, &p, &top, &bottom] {
            m.check()?;
        }
        let lhs = top.map().then(p.map())?;
        let rhs = j.map().then(bottom.map())?;
        if !lhs.same_assignments(&rhs) {
            return Err(Error::Square("p ∘ top differs from bottom ∘ j".into()));
        }
        Ok(LiftSquare { j, p, top, bottom })
    }
}

#[derive(Clone, Debug)]
pub struct LiftReport {
    pub verdict: Verdict,
    pub witness: Option<DecoratedMap>,
    pub stats: SearchStats,
}

pub(crate) fn assignment_map(
    source: &Arc<MBSSet>,
    target: &Arc<MBSSet>,
    assign: Assignment,
) -> DecoratedMap {
    let m = SSetMap::new_unchecked(source.under().clone(), target.under().clone(), assign)
        .expect("assignment has the source's shape");
    DecoratedMap::new_unchecked(m, source.clone(), target.clone()).expect("same underlying sets")
}

/// Fixes the cells in the image of `j` to `top`.
fn fix_along(ext: &mut Extension<'_>, j: &SSetMap, top: &Assignment) {
    for c in j.source().all_cells() {
        let img = j.image_of_cell(c);
        ext.fix(img.cell, top[c.dim()][c.idx as usize].clone());
    }
}

/// Searches for a diagonal filler.
pub fn solve_lift(sq: &LiftSquare, budget: u64) -> LiftReport {
    let b = sq.j.target();
    let x = sq.p.source();
    let index = TargetIndex::new(x.under(), b.under().dim());
    let mut ext = Extension::new(b, x, &index);
    fix_along(&mut ext, sq.j.map(), sq.top.map().assignments());
    ext.over = Some((sq.p.map(), sq.bottom.map().assignments().clone()));
    let mut left = budget;
    let mut stats = SearchStats::default();
    match ext.first(&mut left, &mut stats) {
        Ok(Some(a)) => {
            let w = assignment_map(b, x, a);
            debug_assert!(verify_witness(sq, &w).is_ok());
            LiftReport {
                verdict: Verdict::Lifts,
                witness: Some(w),
                stats,
            }
        }
        Ok(None) => LiftReport {
            verdict: Verdict::NoLift,
            witness: None,
            stats,
        },
        Err(OutOfBudget) => LiftReport {
            verdict: Verdict::BudgetExhausted,
            witness: None,
            stats,
        },
    }
}

/// Re-checks that `w` is a decorated filler of the square.
pub fn verify_witness(sq: &LiftSquare, w: &DecoratedMap) -> Result<()> {
    w.check()?;
    if !sq.j.map().then(w.map())?.same_assignments(sq.top.map()) {
        return Err(Error::Square("witness does not extend the top map".into()));
    }
    if !w.map().then(sq.p.map())?.same_assignments(sq.bottom.map()) {
        return Err(Error::Square("witness does not lie over the bottom map".into()));
    }
    Ok(())
}

/// A square for which no lift exists, recorded by cell names.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SquareDesc {
    pub top: Vec<(String, String)>,
    pub bottom: Vec<(String, String)>,
}

fn describe(m: &DecoratedMap) -> Vec<(String, String)> {
    let (s, t) = (m.map().source(), m.map().target());
    s.all_cells()
        .map(|c| (s.name(c).to_string(), t.simplex_name(m.map().image_of_cell(c))))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RlpReport {
    /// Generator id, or `theta` for the two-out-of-three map.
    pub generator: String,
    pub verdict: Verdict,
    pub squares: usize,
    pub failing: Option<SquareDesc>,
    pub stats: SearchStats,
}

/// Automorphisms of the generator target preserving the source, restricted to the source.
fn source_automorphisms(g: &DecoratedMap, budget: &mut u64, stats: &mut SearchStats) -> Vec<Assignment> {
    let (a, b, j) = (g.source(), g.target(), g.map());
    let index = TargetIndex::new(b.under(), b.under().dim());
    let ext = Extension::new(b, b, &index);
    let Ok(all) = ext.all(budget, stats) else {
        return Vec::new();
    };
    let back: std::collections::HashMap<CellId, CellId> = a
        .under()
        .all_cells()
        .map(|c| (j.image_of_cell(c).cell, c))
        .collect();
    all.into_iter()
        .filter_map(|alpha| {
            let m = assignment_map(b, b, alpha);
            if !m.is_mono() || !m.reflects_decorations() {
                return None;
            }
            a.under()
                .all_cells()
                .map(|c| {
                    let img = m.apply(&Simplex::cell(j.image_of_cell(c).cell));
                    back.get(&img.cell).filter(|_| !img.is_degenerate()).map(|&c2| Simplex::cell(c2))
                })
                .collect::<Option<Vec<Simplex>>>()
                .map(|flat| {
                    let mut out: Assignment = (0..=a.under().dim()).map(|_| Vec::new()).collect();
                    for (c, s) in a.under().all_cells().zip(flat) {
                        out[c.dim()].push(s);
                    }
                    out
                })
        })
        .filter(|alpha| {
            // the identity is not a useful symmetry
            alpha.iter().flatten().zip(a.under().all_cells()).any(|(s, c)| s.cell != c)
        })
        .collect()
}

fn precompose(top: &Assignment, alpha: &Assignment, a: &MBSSet) -> Assignment {
    alpha
        .iter()
        .map(|level| {
            level
                .iter()
                .map(|s| {
                    let t = &top[s.cell.dim()][s.cell.idx as usize];
                    let _ = a;
                    Simplex {
                        cell: t.cell,
                        surj: crate::sset::ops::compose(&t.surj, &s.surj),
                    }
                })
                .collect()
        })
        .collect()
}

/// Decides whether `p` has the right lifting property against one generator,
/// enumerating every commuting square up to symmetries of the generator.
pub fn has_rlp(p: &DecoratedMap, g: &Generator, budget: u64) -> RlpReport {
    has_rlp_map(p, &g.id.to_string(), &g.map, budget)
}

/// As [`has_rlp`], for any monomorphism `j`.
pub fn has_rlp_map(p: &DecoratedMap, label: &str, g: &DecoratedMap, budget: u64) -> RlpReport {
    let (a, b, j) = (g.source(), g.target(), g.map());
    let (x, s) = (p.source(), p.target());
    let mut left = budget;
    let mut stats = SearchStats::default();
    let mut report = RlpReport {
        generator: label.to_string(),
        verdict: Verdict::Lifts,
        squares: 0,
        failing: None,
        stats,
    };
    let dim = b.under().dim();
    let ix = TargetIndex::new(x.under(), dim);
    let is = TargetIndex::new(s.under(), dim);
    let autos = source_automorphisms(g, &mut left, &mut stats);
    let tops = match Extension::new(a, x, &ix).all(&mut left, &mut stats) {
        Ok(t) => t,
        Err(_) => {
            report.verdict = Verdict::BudgetExhausted;
            report.stats = stats;
            return report;
        }
    };
    'tops: for top in tops {
        if autos.iter().any(|alpha| precompose(&top, alpha, a) < top) {
            continue;
        }
        let image: Assignment = top
            .iter()
            .map(|l| l.iter().map(|t| p.apply(t)).collect())
            .collect();
        let mut ext_s = Extension::new(b, s, &is);
        fix_along(&mut ext_s, j, &image);
        let bottoms = match ext_s.all(&mut left, &mut stats) {
            Ok(v) => v,
            Err(_) => {
                report.verdict = Verdict::BudgetExhausted;
                break 'tops;
            }
        };
        for bottom in bottoms {
            report.squares += 1;
            let mut ext = Extension::new(b, x, &ix);
            fix_along(&mut ext, j, &top);
            ext.over = Some((p.map(), bottom.clone()));
            match ext.first(&mut left, &mut stats) {
                Ok(Some(_)) => {}
                Ok(None) => {
                    report.verdict = Verdict::NoLift;
                    report.failing = Some(SquareDesc {
                        top: describe(&assignment_map(a, x, top.clone())),
                        bottom: describe(&assignment_map(b, s, bottom)),
                    });
                    break 'tops;
                }
                Err(_) => {
                    report.verdict = Verdict::BudgetExhausted;
                    break 'tops;
                }
            }
        }
    }
    report.stats = stats;
    report
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FibrationClass {
    #[serde(rename = "MB")]
    MB,
    #[serde(rename = "weak-S")]
    WeakS,
    #[serde(rename = "trivial")]
    Trivial,
}

impl fmt::Display for FibrationClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FibrationClass::MB => "MB",
            FibrationClass::WeakS => "weak-S",
            FibrationClass::Trivial => "trivial",
        })
    }
}

impl FromStr for FibrationClass {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "MB" | "mb" => Ok(FibrationClass::MB),
            "weak-S" | "weakS" | "weak-s" => Ok(FibrationClass::WeakS),
            "trivial" => Ok(FibrationClass::Trivial),
            _ => Err(Error::Params(format!("unknown fibration class `{s}`"))),
        }
    }
}

impl FibrationClass {
    /// Generator ids of the class with dimension at most `cap`.
    pub fn generators(self, cap: usize) -> Vec<GeneratorId> {
        let fams: &[Family] = match self {
            FibrationClass::MB => &Family::ANODYNE,
            FibrationClass::WeakS => &Family::SCALED,
            FibrationClass::Trivial => &Family::COFIBRATIONS,
        };
        fams.iter().flat_map(|&f| list_generators(f, cap)).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Pass,
    Fail,
    Inconclusive,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Pass => 0,
            Outcome::Fail => 1,
            Outcome::Inconclusive => 2,
        }
    }

    pub fn from_verdicts(vs: impl IntoIterator<Item = Verdict>) -> Outcome {
        let mut out = Outcome::Pass;
        for v in vs {
            match v {
                Verdict::NoLift => return Outcome::Fail,
                Verdict::BudgetExhausted => out = Outcome::Inconclusive,
                Verdict::Lifts => {}
            }
        }
        out
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Pass => "pass",
            Outcome::Fail => "fail",
            Outcome::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FibrationReport {
    pub class: FibrationClass,
    pub cap: usize,
    pub outcome: Outcome,
    pub entries: Vec<RlpReport>,
}

impl FibrationReport {
    pub fn failures(&self) -> impl Iterator<Item = &RlpReport> {
        self.entries.iter().filter(|e| e.verdict != Verdict::Lifts)
    }
}

/// Runs the right lifting property against every generator of the class up to `cap`.
pub fn classify_fibration(
    p: &DecoratedMap,
    class: FibrationClass,
    cap: usize,
    budget: u64,
) -> Result<FibrationReport> {
    let gens = class
        .generators(cap)
        .iter()
        .map(|id| instantiate(id, cap))
        .collect::<Result<Vec<_>>>()?;
    let entries: Vec<RlpReport> = gens.par_iter().map(|g| has_rlp(p, g, budget)).collect();
    Ok(FibrationReport {
        class,
        cap,
        outcome: Outcome::from_verdicts(entries.iter().map(|e| e.verdict)),
        entries,
    })
}

/// The fibre of `p` over a vertex of the base, with restricted decorations.
pub fn fibre(p: &DecoratedMap, vertex: CellId) -> Result<(Arc<MBSSet>, DecoratedMap)> {
    let x = p.source();
    let base = p.target().under();
    if vertex.dim() != 0 || vertex.idx as usize >= base.count(0) {
        return Err(Error::Params("fibres are taken over vertices of the base".into()));
    }
    let keep: BTreeSet<CellId> = x
        .under()
        .all_cells()
        .filter(|&c| *p.map().image_of_cell(c) == Simplex::constant(vertex, c.dim()))
        .collect();
    let (sub, incl) = x.under().sub_on(&keep)?;
    let f = Arc::new(x.pull_back(&incl));
    debug_assert!(Arc::ptr_eq(f.under(), &sub));
    let m = DecoratedMap::new_unchecked(incl, f.clone(), x.clone())?;
    Ok((f, m))
}

/// Witness that an edge is invertible up to thin triangles: an inverse `g`
/// and thin triangles with boundaries `(g, id_a, e)` and `(e, id_b, g)`.
pub fn equivalence_witness(x: &MBSSet, e: &Simplex) -> Option<(Simplex, Simplex, Simplex)> {
    let u = x.under();
    let a = u.vertex(e, 0);
    let b = u.vertex(e, 1);
    let id_a = Simplex::constant(a, 1);
    let id_b = Simplex::constant(b, 1);
    let thin: Vec<Simplex> = u.simplices(2).into_iter().filter(|t| x.is_thin(t)).collect();
    let faces = |t: &Simplex| (u.face(t, 0), u.face(t, 1), u.face(t, 2));
    for s in &thin {
        let (g, d1, d2) = faces(s);
        if d2 != *e || d1 != id_a {
            continue;
        }
        if let Some(t) = thin.iter().find(|t| faces(t) == (e.clone(), id_b.clone(), g.clone())) {
            return Some((g, s.clone(), t.clone()));
        }
    }
    None
}

pub fn is_equivalence(x: &MBSSet, e: &Simplex) -> bool {
    e.is_degenerate() || equivalence_witness(x, e).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decor::Deco;
    use crate::sset::FiniteSSet;

    fn point() -> Arc<MBSSet> {
        Arc::new(MBSSet::sharp(Arc::new(FiniteSSet::standard(0, 3).unwrap())))
    }

    #[test]
    fn point_lifts_against_everything() {
        let p = DecoratedMap::identity(point());
        let r = classify_fibration(&p, FibrationClass::MB, 3, DEFAULT_BUDGET).unwrap();
        assert_eq!(r.outcome, Outcome::Pass, "{:?}", r.failures().collect::<Vec<_>>());
    }

    fn to_point(x: MBSSet) -> DecoratedMap {
        let x = Arc::new(x);
        let pt = point();
        let m = SSetMap::from_fn(x.under().clone(), pt.under().clone(), |c| {
            Simplex::constant(CellId::new(0, 0), c.dim())
        })
        .unwrap();
        DecoratedMap::new(m, x, pt).unwrap()
    }

    fn failing(r: &FibrationReport) -> Vec<String> {
        r.failures().map(|e| e.generator.to_string()).collect()
    }

    #[test]
    fn marked_noninvertible_edge_is_refuted() {
        // over a point marked edges must be equivalences; 01 in Δ^1 is not
        let d1 = Arc::new(FiniteSSet::standard(1, 3).unwrap());
        let p = to_point(MBSSet::sharp(d1.clone()));
        let r = classify_fibration(&p, FibrationClass::MB, 3, DEFAULT_BUDGET).unwrap();
        assert_eq!(r.outcome, Outcome::Fail);
        assert!(failing(&r).contains(&"A4:2".to_string()), "{:?}", failing(&r));

        let flat = MBSSet::decorate(d1, &Deco::Flat, &Deco::Sharp, &Deco::Sharp).unwrap().0;
        let r = classify_fibration(&to_point(flat), FibrationClass::MB, 3, DEFAULT_BUDGET).unwrap();
        assert_eq!(r.outcome, Outcome::Pass, "{:?}", failing(&r));
    }

    #[test]
    fn unmarked_equivalence_fails_e_j() {
        let j = crate::generators::KanFixture::load("J", 3).unwrap();
        let x = MBSSet::decorate(j.complex, &Deco::Flat, &Deco::Sharp, &Deco::Sharp).unwrap().0;
        let r = classify_fibration(&to_point(x), FibrationClass::MB, 3, DEFAULT_BUDGET).unwrap();
        assert_eq!(failing(&r), vec!["E:J".to_string()]);
    }
}
