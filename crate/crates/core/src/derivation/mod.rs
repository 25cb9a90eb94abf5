//! Derivation certificates: finite sequences of generator pushouts carried out
//! inside a fixed ambient target, so that every stage is a sub-object of it.

mod auto;
mod named;
mod scripted;
mod zstring;


pub use auto::{derive_auto, derive_within, AutoConfig, AutoOutcome, Catalog};
pub use named::{named_subcomplex, NamedComplex, NamedSubcomplex};
pub use scripted::{derive_scripted, Script};
pub use zstring::{compare, path_simplex, path_vertices, product_path, z_strings, ZString};

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::decor::{Deco, DecoratedMap, MBSSet};
use crate::error::{Error, Result};
use crate::generators::{instantiate, GeneratorId};
use crate::sset::{CellId, FiniteSSet, SSetMap, Simplex};

/// What a step attaches: a generator, or the two-out-of-three map for marked
/// edges `(Δ^2, {12, 02}, ♯) -> (Δ^2, ♯, ♯)`, which is anodyne only through a
/// retract argument and is therefore reported separately.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rule {
    Generator(GeneratorId),
    Theta,
}

impl Rule {
    pub fn dimension(&self) -> usize {
        match self {
            Rule::Generator(id) => id.dimension(),
            Rule::Theta => 2,
        }
    }

    pub fn is_lemma(&self) -> bool {
        matches!(self, Rule::Theta)
    }

    /// The decorated map this rule pushes out along.
    pub fn instantiate(&self, cap: usize) -> Result<DecoratedMap> {
        let cap = cap.max(self.dimension());
        match self {
            Rule::Generator(id) => Ok(instantiate(id, cap)?.map),
            Rule::Theta => theta_map(cap),
        }
    }
}

pub fn theta_map(cap: usize) -> Result<DecoratedMap> {
    let d = Arc::new(FiniteSSet::standard(2, cap.max(2))?);
    let src = MBSSet::decorate(d.clone(), &Deco::named(["12", "02"]), &Deco::Sharp, &Deco::Sharp)?.0;
    let dst = MBSSet::sharp(d.clone());
    DecoratedMap::new(SSetMap::identity(d), Arc::new(src), Arc::new(dst))
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::Generator(id) => write!(f, "{id}"),
            Rule::Theta => f.write_str("theta"),
        }
    }
}

impl FromStr for Rule {
    type Err = Error;
    fn from_str(s: &str) -> Result<Rule> {
        if s == "theta" {
            Ok(Rule::Theta)
        } else {
            Ok(Rule::Generator(s.parse()?))
        }
    }
}

impl Serialize for Rule {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rule {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// A sub-object of the ambient: a face-closed set of cells with decorations.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Stage {
    cells: Vec<Vec<bool>>,
    pub marked: BTreeSet<CellId>,
    pub thin: BTreeSet<CellId>,
    pub lean: BTreeSet<CellId>,
}

impl Stage {
    pub fn empty(x: &FiniteSSet) -> Stage {
        Stage {
            cells: (0..=x.dim()).map(|d| vec![false; x.count(d)]).collect(),
            marked: BTreeSet::new(),
            thin: BTreeSet::new(),
            lean: BTreeSet::new(),
        }
    }

    /// All of `x` with all of its decorations.
    pub fn full(x: &MBSSet) -> Stage {
        let u = x.under();
        Stage {
            cells: (0..=u.dim()).map(|d| vec![true; u.count(d)]).collect(),
            marked: x.marked().clone(),
            thin: x.thin().clone(),
            lean: x.lean().clone(),
        }
    }

    /// The image of a monomorphism, decorated by the images of its source decorations.
    pub fn image_of(j: &DecoratedMap) -> Result<Stage> {
        j.map().check_mono()?;
        let mut st = Stage::empty(j.target().under());
        for c in j.source().under().all_cells() {
            st.insert(j.map().image_of_cell(c).cell);
        }
        let src = j.source();
        let img = |c: &CellId| j.map().image_of_cell(*c).cell;
        st.marked = src.marked().iter().map(img).collect();
        st.thin = src.thin().iter().map(img).collect();
        st.lean = src.lean().iter().map(img).collect();
        Ok(st)
    }

    /// The given cells (face-closed) carrying the decorations restricted from `x`.
    pub fn restricted(x: &MBSSet, cells: impl IntoIterator<Item = CellId>) -> Stage {
        let mut st = Stage::empty(x.under());
        for c in x.under().closure(cells) {
            st.insert(c);
        }
        st.marked = x.marked().iter().copied().filter(|&c| st.contains(c)).collect();
        st.thin = x.thin().iter().copied().filter(|&c| st.contains(c)).collect();
        st.lean = x.lean().iter().copied().filter(|&c| st.contains(c)).collect();
        st
    }

    pub fn contains(&self, c: CellId) -> bool {
        self.cells
            .get(c.dim())
            .and_then(|v| v.get(c.idx as usize))
            .copied()
            .unwrap_or(false)
    }

    fn insert(&mut self, c: CellId) {
        self.cells[c.dim()][c.idx as usize] = true;
    }

    pub fn cells(&self) -> impl Iterator<Item = CellId> + '_ {
        self.cells.iter().enumerate().flat_map(|(d, v)| {
            v.iter()
                .enumerate()
                .filter(|(_, &b)| b)
                .map(move |(i, _)| CellId::new(d, i))
        })
    }

    pub fn cell_count(&self) -> usize {
        self.cells.iter().flatten().filter(|&&b| b).count()
    }

    fn has_marked(&self, s: &Simplex) -> bool {
        s.is_degenerate() || self.marked.contains(&s.cell)
    }

    fn has_thin(&self, s: &Simplex) -> bool {
        s.is_degenerate() || self.thin.contains(&s.cell)
    }

    fn has_lean(&self, s: &Simplex) -> bool {
        s.is_degenerate() || self.lean.contains(&s.cell)
    }

    /// Checks that this is a sub-object of `x`.
    pub fn check_within(&self, x: &MBSSet) -> std::result::Result<(), String> {
        let u = x.under();
        if self.cells.len() != u.dim() + 1
            || self.cells.iter().enumerate().any(|(d, v)| v.len() != u.count(d))
        {
            return Err("stage is shaped for a different ambient".into());
        }
        for c in self.cells() {
            if let Some(f) = u.faces(c).iter().find(|f| !self.contains(f.cell)) {
                return Err(format!(
                    "`{}` is present but its face `{}` is not",
                    u.name(c),
                    u.name(f.cell)
                ));
            }
        }
        for (set, amb, what) in [
            (&self.marked, x.marked(), "marked"),
            (&self.thin, x.thin(), "thin"),
            (&self.lean, x.lean(), "lean"),
        ] {
            if let Some(c) = set.iter().find(|c| !amb.contains(c) || !self.contains(**c)) {
                return Err(format!("`{}` is {what} in the stage but not in the ambient", u.name(*c)));
            }
        }
        if let Some(c) = self.thin.iter().find(|c| !self.lean.contains(c)) {
            return Err(format!("thin `{}` is not lean", u.name(*c)));
        }
        Ok(())
    }

    /// Cell names and decoration names, each sorted.
    pub fn names(&self, x: &FiniteSSet) -> StageNames {
        let names = |it: &mut dyn Iterator<Item = CellId>| {
            let mut v: Vec<String> = it.map(|c| x.name(c).to_string()).collect();
            v.sort();
            v
        };
        StageNames {
            cells: names(&mut self.cells()),
            marked: names(&mut self.marked.iter().copied()),
            thin: names(&mut self.thin.iter().copied()),
            lean: names(&mut self.lean.iter().copied()),
        }
    }

    pub fn from_names(x: &MBSSet, names: &StageNames) -> Result<Stage> {
        let u = x.under();
        let get = |v: &Vec<String>| v.iter().map(|n| u.get(n)).collect::<Result<BTreeSet<_>>>();
        let mut st = Stage::empty(u);
        for c in get(&names.cells)? {
            st.insert(c);
        }
        st.marked = get(&names.marked)?;
        st.thin = get(&names.thin)?;
        st.lean = get(&names.lean)?;
        Ok(st)
    }

    /// The stage as a decorated set with its inclusion into the ambient.
    pub fn realize(&self, x: &MBSSet) -> Result<DecoratedMap> {
        let keep: BTreeSet<CellId> = self.cells().collect();
        let (sub, incl) = x.under().sub_on(&keep)?;
        let back: HashMap<CellId, CellId> = sub
            .all_cells()
            .map(|c| (incl.image_of_cell(c).cell, c))
            .collect();
        let pull = |s: &BTreeSet<CellId>| s.iter().map(|c| back[c]).collect();
        let (m, _) = MBSSet::from_ids(sub, pull(&self.marked), pull(&self.thin), pull(&self.lean))?;
        DecoratedMap::new(incl, Arc::new(m), Arc::new(x.clone()))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageNames {
    pub cells: Vec<String>,
    pub marked: Vec<String>,
    pub thin: Vec<String>,
    pub lean: Vec<String>,
}

/// One pushout: `map` sends the rule's target into the ambient; the rule's
/// source must already lie in the current stage.
#[derive(Clone, Debug)]
pub struct Step {
    pub rule: Rule,
    pub map: SSetMap,
    /// Optional label grouping consecutive steps (e.g. one simplex of a filtration).
    pub group: Option<String>,
}

#[derive(Clone, Debug)]
pub struct Derivation {
    pub ambient: Arc<MBSSet>,
    pub start: Stage,
    pub steps: Vec<Step>,
}

impl Derivation {
    pub fn trivial(ambient: Arc<MBSSet>) -> Derivation {
        Derivation {
            start: Stage::full(&ambient),
            ambient,
            steps: Vec::new(),
        }
    }

    pub fn uses_lemma(&self) -> bool {
        self.steps.iter().any(|s| s.rule.is_lemma())
    }

    /// Step counts per rule, in order of first use.
    pub fn rule_counts(&self) -> Vec<(String, usize)> {
        let mut out: Vec<(String, usize)> = Vec::new();
        for s in &self.steps {
            let r = s.rule.to_string();
            match out.iter_mut().find(|(k, _)| *k == r) {
                Some((_, n)) => *n += 1,
                None => out.push((r, 1)),
            }
        }
        out
    }

    /// Distinct group labels in order.
    pub fn groups(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for s in &self.steps {
            if let Some(g) = &s.group {
                if out.last() != Some(g) {
                    out.push(g.clone());
                }
            }
        }
        out
    }

    /// Steps that attach new cells (as opposed to decorations only).
    pub fn attaching_steps(&self) -> usize {
        let mut cache = RuleCache::default();
        self.steps
            .iter()
            .filter(|s| {
                cache
                    .get(&s.rule, self.ambient.under().cap())
                    .map(|g| g.source().under().total_cells() < g.target().under().total_cells())
                    .unwrap_or(false)
            })
            .count()
    }
}

/// Instantiated rules, keyed by rule.
#[derive(Default)]
pub struct RuleCache {
    map: HashMap<Rule, Arc<DecoratedMap>>,
}

impl RuleCache {
    pub fn get(&mut self, rule: &Rule, cap: usize) -> Result<Arc<DecoratedMap>> {
        if let Some(g) = self.map.get(rule) {
            return Ok(g.clone());
        }
        let g = Arc::new(rule.instantiate(cap)?);
        self.map.insert(rule.clone(), g.clone());
        Ok(g)
    }
}

/// What a single attachment needs and provides, in ambient cells.
#[derive(Clone, Debug)]
pub struct Attachment {
    pub rule: Rule,
    pub map: SSetMap,
    needs_cells: Vec<CellId>,
    needs_marked: Vec<Simplex>,
    needs_thin: Vec<Simplex>,
    needs_lean: Vec<Simplex>,
    pub new_cells: Vec<CellId>,
    adds_marked: Vec<CellId>,
    adds_thin: Vec<CellId>,
    adds_lean: Vec<CellId>,
}

impl Attachment {
    /// Analyzes `f: target(g) -> ambient`. Fails when `f` is not a decorated map
    /// or would glue new cells non-injectively.
    pub fn new(
        rule: Rule,
        g: &DecoratedMap,
        f: SSetMap,
        ambient: &MBSSet,
    ) -> std::result::Result<Attachment, String> {
        let t = g.target();
        let same = Arc::ptr_eq(f.source(), t.under()) || **f.source() == **t.under();
        if !same {
            return Err("map is not defined on the rule's target".into());
        }
        if !(Arc::ptr_eq(f.target(), ambient.under()) || **f.target() == **ambient.under()) {
            return Err("map does not land in the ambient".into());
        }
        f.check().map_err(|e| e.to_string())?;
        let tu = t.under();
        for (set, test, what) in [
            (t.marked(), &(|s: &Simplex| ambient.is_marked(s)) as &dyn Fn(&Simplex) -> bool, "marked"),
            (t.thin(), &|s: &Simplex| ambient.is_thin(s), "thin"),
            (t.lean(), &|s: &Simplex| ambient.is_lean(s), "lean"),
        ] {
            for &c in set {
                if !test(f.image_of_cell(c)) {
                    return Err(format!("target cell `{}` must land on a {what} simplex", tu.name(c)));
                }
            }
        }
        let src = g.source();
        let through = |c: CellId| f.apply(g.map().image_of_cell(c));
        let mut needs_cells: Vec<CellId> = src.under().all_cells().map(|c| through(c).cell).collect();
        needs_cells.sort();
        needs_cells.dedup();
        let needs_marked = src.marked().iter().map(|&c| through(c)).collect();
        let needs_thin = src.thin().iter().map(|&c| through(c)).collect();
        let needs_lean = src.lean().iter().map(|&c| through(c)).collect();
        let old = g.map().image_cells();
        let mut new_cells = Vec::new();
        let mut seen = HashSet::new();
        for c in tu.all_cells() {
            if old.contains(&c) {
                continue;
            }
            let img = f.image_of_cell(c);
            if img.is_degenerate() {
                return Err(format!("new cell `{}` lands on a degenerate simplex", tu.name(c)));
            }
            if !seen.insert(img.cell) {
                return Err(format!("new cell `{}` is glued to another new cell", tu.name(c)));
            }
            new_cells.push(img.cell);
        }
        if new_cells.iter().any(|c| needs_cells.contains(c)) {
            return Err("a new cell coincides with a cell of the attaching region".into());
        }
        let nondeg = |set: &BTreeSet<CellId>| -> Vec<CellId> {
            let mut v: Vec<CellId> = set
                .iter()
                .map(|&c| f.image_of_cell(c))
                .filter(|s| !s.is_degenerate())
                .map(|s| s.cell)
                .collect();
            v.sort();
            v.dedup();
            v
        };
        Ok(Attachment {
            adds_marked: nondeg(t.marked()),
            adds_thin: nondeg(t.thin()),
            adds_lean: nondeg(t.lean()),
            rule,
            map: f,
            needs_cells,
            needs_marked,
            needs_thin,
            needs_lean,
            new_cells,
        })
    }

    pub fn attaches_cells(&self) -> bool {
        !self.new_cells.is_empty()
    }

    /// Why this attachment cannot be made at `stage`, if it cannot.
    pub fn blocked(&self, stage: &Stage, x: &FiniteSSet) -> Option<String> {
        if let Some(c) = self.needs_cells.iter().find(|&&c| !stage.contains(c)) {
            return Some(format!("attaching region needs `{}`, not yet present", x.name(*c)));
        }
        if let Some(c) = self.new_cells.iter().find(|&&c| stage.contains(c)) {
            return Some(format!("`{}` is attached twice", x.name(*c)));
        }
        for (need, test, what) in [
            (&self.needs_marked, Stage::has_marked as fn(&Stage, &Simplex) -> bool, "marked"),
            (&self.needs_thin, Stage::has_thin, "thin"),
            (&self.needs_lean, Stage::has_lean, "lean"),
        ] {
            if let Some(s) = need.iter().find(|s| !test(stage, s)) {
                return Some(format!("`{}` must already be {what}", x.simplex_name(s)));
            }
        }
        None
    }

    /// True when applying at `stage` would change it.
    pub fn useful(&self, stage: &Stage) -> bool {
        self.attaches_cells()
            || self.adds_marked.iter().any(|c| !stage.marked.contains(c))
            || self.adds_thin.iter().any(|c| !stage.thin.contains(c))
            || self.adds_lean.iter().any(|c| !stage.lean.contains(c))
    }

    pub fn apply(&self, stage: &mut Stage) {
        for &c in &self.new_cells {
            stage.insert(c);
        }
        stage.marked.extend(self.adds_marked.iter().copied());
        stage.thin.extend(self.adds_thin.iter().copied());
        stage.lean.extend(self.adds_lean.iter().copied());
    }

    pub fn into_step(self, group: Option<String>) -> Step {
        Step {
            rule: self.rule,
            map: self.map,
            group,
        }
    }
}

/// Outcome of [`verify`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub ok: bool,
    pub steps: usize,
    /// Index of the first failing step; `steps` when the final stage is wrong,
    /// absent when the start itself is invalid.
    pub failing_step: Option<usize>,
    pub reason: Option<String>,
    /// True when some step uses the two-out-of-three lemma map.
    pub uses_lemma: bool,
}

/// Re-checks every step of a derivation and that it ends at the ambient.
pub fn verify(d: &Derivation) -> VerifyReport {
    let x = d.ambient.under();
    let fail = |at: Option<usize>, why: String| VerifyReport {
        ok: false,
        steps: d.steps.len(),
        failing_step: at,
        reason: Some(why),
        uses_lemma: d.uses_lemma(),
    };
    if let Err(e) = d.start.check_within(&d.ambient) {
        return fail(None, format!("start: {e}"));
    }
    let mut stage = d.start.clone();
    let mut cache = RuleCache::default();
    for (i, step) in d.steps.iter().enumerate() {
        let g = match cache.get(&step.rule, x.cap()) {
            Ok(g) => g,
            Err(e) => return fail(Some(i), e.to_string()),
        };
        let a = match Attachment::new(step.rule.clone(), &g, step.map.clone(), &d.ambient) {
            Ok(a) => a,
            Err(e) => return fail(Some(i), format!("{}: {e}", step.rule)),
        };
        if let Some(why) = a.blocked(&stage, x) {
            return fail(Some(i), format!("{}: {why}", step.rule));
        }
        a.apply(&mut stage);
    }
    let full = Stage::full(&d.ambient);
    if stage != full {
        let missing_cell = x.all_cells().find(|&c| !stage.contains(c));
        let why = match missing_cell {
            Some(c) => format!("final stage lacks `{}`", x.name(c)),
            None => {
                let lacks = full
                    .marked
                    .difference(&stage.marked)
                    .chain(full.thin.difference(&stage.thin))
                    .chain(full.lean.difference(&stage.lean))
                    .next()
                    .map(|c| x.name(*c).to_string())
                    .unwrap_or_default();
                format!("final stage lacks a decoration on `{lacks}`")
            }
        };
        return fail(Some(d.steps.len()), why);
    }
    VerifyReport {
        ok: true,
        steps: d.steps.len(),
        failing_step: None,
        reason: None,
        uses_lemma: d.uses_lemma(),
    }
}

/// The map `Δ^n -> X` (or from a quotient of `Δ^n` whose cells are named by
/// vertex subsets) determined by an `n`-simplex of `X`.
pub fn shape_map(target: &Arc<FiniteSSet>, x: &Arc<FiniteSSet>, s: &Simplex) -> Result<SSetMap> {
    let assign = (0..=target.dim())
        .map(|d| {
            target
                .cells(d)
                .map(|c| {
                    let positions: Vec<usize> = target
                        .name(c)
                        .chars()
                        .map(|ch| ch.to_digit(10).map(|v| v as usize))
                        .collect::<Option<Vec<_>>>()
                        .ok_or_else(|| Error::NotAMap(format!("`{}` is not a vertex subset", target.name(c))))?;
                    Ok(x.restrict(s, &positions))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    SSetMap::new(target.clone(), x.clone(), assign)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::Family;

    fn horn_ambient(scaled: bool) -> (Arc<MBSSet>, Stage) {
        let d = Arc::new(FiniteSSet::standard(2, 3).unwrap());
        let t = if scaled { Deco::named(["012"]) } else { Deco::Flat };
        let x = Arc::new(MBSSet::decorate(d.clone(), &Deco::Flat, &t, &t).unwrap().0);
        let start = Stage::restricted(&x, [d.get("01").unwrap(), d.get("12").unwrap()]);
        (x, start)
    }

    fn a1_step(x: &Arc<MBSSet>) -> Step {
        let rule = Rule::Generator(GeneratorId::new(Family::A1, &[2, 1]));
        let g = rule.instantiate(3).unwrap();
        let top = Simplex::cell(x.under().get("012").unwrap());
        let map = shape_map(g.target().under(), x.under(), &top).unwrap();
        Step { rule, map, group: None }
    }

    #[test]
    fn empty_derivation_of_the_whole_thing() {
        let (x, _) = horn_ambient(true);
        assert!(verify(&Derivation::trivial(x)).ok);
    }

    #[test]
    fn single_inner_horn() {
        let (x, start) = horn_ambient(true);
        let d = Derivation { steps: vec![a1_step(&x)], ambient: x, start };
        let r = verify(&d);
        assert!(r.ok, "{r:?}");
    }

    #[test]
    fn unscaled_triangle_is_rejected() {
        let (x, start) = horn_ambient(false);
        let (sx, _) = horn_ambient(true);
        let mut step = a1_step(&sx);
        step.map = shape_map(step.map.source(), x.under(), &Simplex::cell(x.under().get("012").unwrap())).unwrap();
        let d = Derivation { steps: vec![step], ambient: x, start };
        let r = verify(&d);
        assert!(!r.ok);
        assert_eq!(r.failing_step, Some(0));
    }
}
