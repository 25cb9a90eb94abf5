//! Fibration analysis over a base: coCartesian triangles, left-degenerations,
//! (strongly) p-Cartesian edges and the fibrancy characterization, all
//! truncated at a dimension cap.

mod fixtures;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::decor::{DecoratedMap, MBSSet};
use crate::error::{Error, Result};
use crate::lifting::{
    classify_fibration, mapping_space, Assignment, Extension, FibrationClass, OutOfBudget, Outcome,
    SearchStats, SquareDesc, TargetIndex,
};
use crate::sset::{subset_name, CellId, FiniteSSet, SSetMap, Simplex, SubcomplexKind};

pub use fixtures::{fixture_suite, to_point, Fixture};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Answer {
    Yes,
    No,
    Inconclusive,
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Answer::Yes => "yes",
            Answer::No => "no",
            Answer::Inconclusive => "inconclusive",
        })
    }
}

/// A verdict on a quantified lifting condition, valid up to `cap`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Finding {
    pub answer: Answer,
    pub cap: usize,
    pub squares: usize,
    pub witness: Option<SquareDesc>,
    pub note: Option<String>,
}

impl Finding {
    fn yes(cap: usize) -> Finding {
        Finding {
            answer: Answer::Yes,
            cap,
            squares: 0,
            witness: None,
            note: None,
        }
    }

    fn absorb(&mut self, other: Finding) {
        self.squares += other.squares;
        match other.answer {
            Answer::No => {
                self.answer = Answer::No;
                self.witness = other.witness;
                self.note = other.note;
            }
            Answer::Inconclusive if self.answer == Answer::Yes => {
                self.answer = Answer::Inconclusive;
                self.note = other.note;
            }
            _ => {}
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CartesianMode {
    /// `{0, n-1, n}` ranges over coCartesian triangles.
    Strong,
    /// `{0, n-1, n}` ranges over thin triangles.
    Plain,
}

pub fn is_left_degenerate(x: &FiniteSSet, sigma: &Simplex) -> bool {
    x.restrict(sigma, &[0, 1]).is_degenerate()
}

fn describe(set: &FiniteSSet, target: &FiniteSSet, assign: &Assignment) -> Vec<(String, String)> {
    set.all_cells()
        .map(|c| {
            (
                set.name(c).to_string(),
                target.simplex_name(&assign[c.dim()][c.idx as usize]),
            )
        })
        .collect()
}

/// Lifting problems `Λ^n_k -> X` over `Δ^n -> S` against one map, with some
/// cells of the horn pinned down.
struct Ctx<'a> {
    x: &'a MBSSet,
    s: &'a MBSSet,
    p: &'a SSetMap,
    ix: TargetIndex<'a>,
    is: TargetIndex<'a>,
    cap: usize,
}

/// A horn inside `Δ^n` and the simplex it sits in.
struct Horn {
    n: usize,
    delta: MBSSet,
    horn: MBSSet,
    incl: SSetMap,
}

impl Horn {
    fn new(n: usize, k: usize) -> Result<Horn> {
        let d = Arc::new(FiniteSSet::standard(n, n)?);
        let (h, incl) = d.subcomplex(&SubcomplexKind::Horn(k))?;
        Ok(Horn {
            n,
            delta: MBSSet::flat(d),
            horn: MBSSet::flat(h),
            incl,
        })
    }

    fn cell(set: &FiniteSSet, n: usize, vs: &[usize]) -> CellId {
        set.get(&subset_name(vs, n)).expect("standard cell names")
    }

    /// Value of an assignment on the face spanned by `vs`.
    fn at<'b>(set: &FiniteSSet, n: usize, assign: &'b Assignment, vs: &[usize]) -> &'b Simplex {
        let c = Self::cell(set, n, vs);
        &assign[c.dim()][c.idx as usize]
    }
}

impl<'a> Ctx<'a> {
    fn new(x: &'a MBSSet, s: &'a MBSSet, p: &'a SSetMap, cap: usize) -> Ctx<'a> {
        let cap = cap.min(x.under().cap()).min(s.under().cap());
        Ctx {
            x,
            s,
            p,
            ix: TargetIndex::new(x.under(), cap),
            is: TargetIndex::new(s.under(), cap),
            cap,
        }
    }

    /// Pins `cell` of the horn (and all its faces) to `value`; false on a clash.
    fn pin(&self, set: &FiniteSSet, pins: &mut BTreeMap<CellId, Simplex>, cell: CellId, value: Simplex) -> bool {
        if let Some(old) = pins.get(&cell) {
            return *old == value;
        }
        for (i, f) in set.faces(cell).to_vec().into_iter().enumerate() {
            let v = self.x.under().face(&value, i);
            if !self.pin(set, pins, f.cell, v) {
                return false;
            }
        }
        pins.insert(cell, value);
        true
    }

    /// Every square with the given pins, keeping the tops accepted by `top_ok`,
    /// must have a filler accepted by `filler_ok`.
    fn sweep(
        &self,
        horn: &Horn,
        pins: &[(&[usize], Simplex)],
        budget: u64,
        top_ok: impl Fn(&Assignment) -> bool,
        filler_ok: impl Fn(&Assignment) -> bool,
    ) -> Finding {
        let n = horn.n;
        let hset = horn.horn.under();
        let mut found = Finding::yes(self.cap);
        let mut fixed = BTreeMap::new();
        for (vs, value) in pins {
            if value.dim() + 1 != vs.len() || !self.pin(hset, &mut fixed, Horn::cell(hset, n, vs), value.clone()) {
                return found;
            }
        }
        let mut left = budget;
        let mut stats = SearchStats::default();
        let out_of_budget = |mut f: Finding| {
            f.answer = Answer::Inconclusive;
            f.note = Some(format!("budget exhausted on Λ^{n} squares"));
            f
        };
        let mut ext = Extension::new(&horn.horn, self.x, &self.ix);
        for (c, v) in &fixed {
            ext.fix(*c, v.clone());
        }
        let tops = match ext.all(&mut left, &mut stats) {
            Ok(t) => t,
            Err(OutOfBudget) => return out_of_budget(found),
        };
        let fix_along = |ext: &mut Extension<'_>, top: &Assignment| {
            for c in hset.all_cells() {
                ext.fix(horn.incl.image_of_cell(c).cell, top[c.dim()][c.idx as usize].clone());
            }
        };
        for top in tops.iter().filter(|t| top_ok(t)) {
            let image: Assignment = top
                .iter()
                .map(|l| l.iter().map(|t| self.p.apply(t)).collect())
                .collect();
            let mut ext_s = Extension::new(&horn.delta, self.s, &self.is);
            fix_along(&mut ext_s, &image);
            let bottoms = match ext_s.all(&mut left, &mut stats) {
                Ok(b) => b,
                Err(OutOfBudget) => return out_of_budget(found),
            };
            for bottom in bottoms {
                found.squares += 1;
                let mut ext = Extension::new(&horn.delta, self.x, &self.ix);
                fix_along(&mut ext, top);
                ext.over = Some((self.p, bottom.clone()));
                let mut ok = false;
                let r = ext.for_each(&mut left, &mut stats, |a| {
                    if filler_ok(a) {
                        ok = true;
                        std::ops::ControlFlow::Break(())
                    } else {
                        std::ops::ControlFlow::Continue(())
                    }
                });
                if r.is_err() {
                    return out_of_budget(found);
                }
                if !ok {
                    found.answer = Answer::No;
                    found.witness = Some(SquareDesc {
                        top: describe(hset, self.x.under(), top),
                        bottom: describe(horn.delta.under(), self.s.under(), &bottom),
                    });
                    return found;
                }
            }
        }
        found
    }

    /// `Λ^n_0` problems with `{0,1,n}` pinned to a left-degenerate `sigma`, `3 <= n <= cap`.
    fn cocartesian(&self, sigma: &Simplex, budget: u64) -> Result<Finding> {
        let mut out = Finding::yes(self.cap);
        for n in 3..=self.cap {
            let horn = Horn::new(n, 0)?;
            out.absorb(self.sweep(&horn, &[(&[0, 1, n], sigma.clone())], budget, |_| true, |_| true));
            if out.answer == Answer::No {
                break;
            }
        }
        Ok(out)
    }

    /// `Λ^n_n` problems with `{n-1,n}` pinned to `e`, `2 <= n <= cap`.
    fn cartesian(&self, e: &Simplex, accept: &(dyn Fn(&Simplex) -> bool + Sync), budget: u64) -> Result<Finding> {
        let mut out = Finding::yes(self.cap);
        for n in 2..=self.cap {
            let horn = Horn::new(n, n)?;
            let hset = horn.horn.under().clone();
            let dset = horn.delta.under().clone();
            let f = if n == 2 {
                self.sweep(&horn, &[(&[1, 2], e.clone())], budget, |_| true, |a| {
                    accept(Horn::at(&dset, 2, a, &[0, 1, 2]))
                })
            } else {
                self.sweep(
                    &horn,
                    &[(&[n - 1, n], e.clone())],
                    budget,
                    |t| accept(Horn::at(&hset, n, t, &[0, n - 1, n])),
                    |_| true,
                )
            };
            out.absorb(f);
            if out.answer == Answer::No {
                break;
            }
        }
        Ok(out)
    }
}

/// A left-degeneration `tau` of a triangle and the 3-simplex exhibiting it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeftDegeneration {
    pub tau: Simplex,
    pub witness: Simplex,
}

/// Searches the 3-simplices of `x` for a left-degeneration of `sigma`:
/// `d3 = s0(d2 sigma)`, `d2 = tau`, `d1 = sigma`, `d0` thin. A left-degenerate
/// triangle is its own left-degeneration, witnessed by `s1 sigma`.
pub fn left_degeneration(x: &MBSSet, sigma: &Simplex) -> Option<LeftDegeneration> {
    let u = x.under();
    if is_left_degenerate(u, sigma) {
        return Some(LeftDegeneration {
            tau: sigma.clone(),
            witness: u.degeneracy(sigma, 1),
        });
    }
    let d3 = u.degeneracy(&u.face(sigma, 2), 0);
    u.simplices(3).into_iter().find_map(|rho| {
        (u.face(&rho, 1) == *sigma && u.face(&rho, 3) == d3 && x.is_thin(&u.face(&rho, 0))).then(|| {
            LeftDegeneration {
                tau: u.face(&rho, 2),
                witness: rho,
            }
        })
    })
}

/// Whether `sigma` is p-coCartesian: its left-degeneration (computed first if
/// needed) solves every `Λ^n_0` problem through `{0,1,n}` up to `cap`.
pub fn is_cocartesian_triangle(p: &DecoratedMap, sigma: &Simplex, cap: usize, budget: u64) -> Result<Finding> {
    let x = p.source();
    if sigma.dim() != 2 || !x.under().contains(sigma) {
        return Err(Error::Params("expected a 2-simplex of the source".into()));
    }
    let ctx = Ctx::new(x, p.target(), p.map(), cap);
    match left_degeneration(x, sigma) {
        Some(ld) => ctx.cocartesian(&ld.tau, budget),
        None => Ok(Finding {
            answer: Answer::No,
            cap: ctx.cap,
            squares: 0,
            witness: None,
            note: Some("no left-degeneration up to the cap".into()),
        }),
    }
}

/// Whether `e` is (strongly) p-Cartesian up to `cap`.
pub fn is_p_cartesian_edge(
    p: &DecoratedMap,
    e: &Simplex,
    mode: CartesianMode,
    cap: usize,
    budget: u64,
) -> Result<Finding> {
    let x = p.source();
    if e.dim() != 1 || !x.under().contains(e) {
        return Err(Error::Params("expected an edge of the source".into()));
    }
    let ctx = Ctx::new(x, p.target(), p.map(), cap);
    match mode {
        CartesianMode::Plain => ctx.cartesian(e, &|t| x.is_thin(t), budget),
        CartesianMode::Strong => {
            let table = CoCartesianTable::build(&ctx, budget)?;
            ctx.cartesian(e, &|t| table.contains(t), budget)
        }
    }
}

/// coCartesian membership of every triangle of the source, degenerate ones included.
struct CoCartesianTable {
    verdicts: HashMap<Simplex, Answer>,
    /// Left-degenerate triangles with their own findings.
    left: BTreeMap<Simplex, Finding>,
    /// Triangles with no left-degeneration up to the cap.
    orphans: Vec<Simplex>,
}

impl CoCartesianTable {
    fn build(ctx: &Ctx<'_>, budget: u64) -> Result<CoCartesianTable> {
        let u = ctx.x.under();
        let all = u.simplices(2);
        let (left, rest): (Vec<Simplex>, Vec<Simplex>) = all.into_iter().partition(|s| is_left_degenerate(u, s));
        let found = left
            .par_iter()
            .map(|s| ctx.cocartesian(s, budget))
            .collect::<Result<Vec<_>>>()?;
        let left: BTreeMap<Simplex, Finding> = left.into_iter().zip(found).collect();
        let mut verdicts: HashMap<Simplex, Answer> = left.iter().map(|(s, f)| (s.clone(), f.answer)).collect();
        let mut orphans = Vec::new();
        for s in rest {
            match left_degeneration(ctx.x, &s) {
                Some(ld) => {
                    verdicts.insert(s, verdicts[&ld.tau]);
                }
                None => {
                    verdicts.insert(s.clone(), Answer::No);
                    orphans.push(s);
                }
            }
        }
        Ok(CoCartesianTable { verdicts, left, orphans })
    }

    fn contains(&self, s: &Simplex) -> bool {
        self.verdicts.get(s) == Some(&Answer::Yes)
    }

    fn any_inconclusive(&self) -> bool {
        self.verdicts.values().any(|&a| a == Answer::Inconclusive)
    }
}

/// One of the six conditions of the characterization, with evidence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionRecord {
    pub name: String,
    pub outcome: Outcome,
    /// Counterexamples on failure, or the undecided items when inconclusive.
    pub evidence: Vec<String>,
}

impl ConditionRecord {
    fn new(name: &str, failures: Vec<String>, undecided: Vec<String>) -> ConditionRecord {
        let (outcome, evidence) = if !failures.is_empty() {
            (Outcome::Fail, failures)
        } else if !undecided.is_empty() {
            (Outcome::Inconclusive, undecided)
        } else {
            (Outcome::Pass, Vec::new())
        };
        ConditionRecord {
            name: name.to_string(),
            outcome,
            evidence,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Flags {
    pub locally_fibred: bool,
    pub functorial: bool,
    pub o2: bool,
    pub o2c: bool,
}

/// Everything `check_family` computes about a map, valid up to `cap`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FibrationProfile {
    pub cap: usize,
    /// Nondegenerate triangles in `C_X`.
    pub cocartesian: Vec<String>,
    /// Nondegenerate edges in `E_X` (p-Cartesian edges).
    pub cartesian: Vec<String>,
    pub strongly_cartesian: Vec<String>,
    pub flags: Flags,
    pub conditions: Vec<ConditionRecord>,
    /// `None` when no thin triangle exists to test.
    pub thin_in_cocartesian: Option<bool>,
    pub outcome: Outcome,
    /// Weak-S fibrancy of the base over the point.
    pub base: Outcome,
}

impl FibrationProfile {
    pub fn condition(&self, name: &str) -> Option<&ConditionRecord> {
        self.conditions.iter().find(|c| c.name == name)
    }
}

pub const CONDITIONS: [&str; 6] = [
    "scaled-anodyne-rlp",
    "lean-contains-cocartesian",
    "composition-stable",
    "marked-are-cartesian",
    "cartesian-lifts",
    "cocartesian-lifts",
];

/// Computes `C_X` and `E_X` by exhaustive sweeps and evaluates the six
/// conditions characterizing fibrant objects over the base.
pub fn check_family(p: &DecoratedMap, cap: usize, budget: u64) -> Result<FibrationProfile> {
    let (x, s) = (p.source(), p.target());
    let (u, base) = (x.under(), s.under());
    let ctx = Ctx::new(x, s, p.map(), cap);
    let name = |t: &Simplex| u.simplex_name(t);

    let table = CoCartesianTable::build(&ctx, budget)?;
    let edges = u.simplices(1);
    let cart = |mode: CartesianMode| -> Result<Vec<Finding>> {
        edges
            .par_iter()
            .map(|e| match mode {
                CartesianMode::Plain => ctx.cartesian(e, &|t| x.is_thin(t), budget),
                CartesianMode::Strong => ctx.cartesian(e, &|t| table.contains(t), budget),
            })
            .collect()
    };
    let plain = cart(CartesianMode::Plain)?;
    let strong = cart(CartesianMode::Strong)?;
    let in_ex: HashMap<&Simplex, Answer> = edges.iter().zip(plain.iter().map(|f| f.answer)).collect();

    let mut conditions = Vec::new();

    // 1. weak-S fibration
    let weak = classify_fibration(p, FibrationClass::WeakS, ctx.cap, budget)?;
    conditions.push(ConditionRecord {
        name: CONDITIONS[0].into(),
        outcome: weak.outcome,
        evidence: weak.failures().map(|r| format!("{}: {}", r.generator, r.verdict)).collect(),
    });

    // 2. lean triangles contain the left-degenerate coCartesian ones
    let mut fail = Vec::new();
    let mut undecided = Vec::new();
    for (t, f) in &table.left {
        match f.answer {
            Answer::Yes if !x.is_lean(t) => fail.push(format!("{} is coCartesian but not lean", name(t))),
            Answer::Inconclusive if !x.is_lean(t) => undecided.push(name(t)),
            _ => {}
        }
    }
    conditions.push(ConditionRecord::new(CONDITIONS[1], fail, undecided));

    // 3. functorial family on every 3-simplex
    let mut fail = Vec::new();
    let undecided = if table.any_inconclusive() {
        vec!["coCartesian membership undecided for some triangle".to_string()]
    } else {
        Vec::new()
    };
    for rho in u.simplices(3) {
        let faces: Vec<Simplex> = (0..4).map(|i| u.face(&rho, i)).collect();
        for i in 1..3 {
            let inner = u.restrict(&rho, &[i - 1, i, i + 1]);
            if !x.is_thin(&inner) {
                continue;
            }
            let others = (0..4).filter(|&j| j != i).all(|j| table.contains(&faces[j]));
            if others && !table.contains(&faces[i]) {
                fail.push(format!("{} at {i}: face {} not coCartesian", name(&rho), name(&faces[i])));
            }
        }
    }
    conditions.push(ConditionRecord::new(CONDITIONS[2], fail, undecided));

    // 4. marked edges are exactly the p-Cartesian ones
    let mut fail = Vec::new();
    let mut undecided = Vec::new();
    for (e, f) in edges.iter().zip(&plain) {
        let marked = x.is_marked(e);
        match f.answer {
            Answer::Yes if !marked => fail.push(format!("{} is p-Cartesian but not marked", name(e))),
            Answer::No if marked => fail.push(format!("{} is marked but not p-Cartesian", name(e))),
            Answer::Inconclusive => undecided.push(name(e)),
            _ => {}
        }
    }
    conditions.push(ConditionRecord::new(CONDITIONS[3], fail, undecided));

    // 5. every edge of the base ending at p(x) has a p-Cartesian lift ending at x
    let mut fail = Vec::new();
    let mut undecided = Vec::new();
    let mut lifts: HashMap<(Simplex, CellId), Vec<Answer>> = HashMap::new();
    for e in &edges {
        lifts.entry((p.apply(e), u.vertex(e, 1))).or_default().push(in_ex[e]);
    }
    for v in u.cells(0) {
        let pv = p.map().image_of_cell(v).cell;
        for be in base.simplices(1).into_iter().filter(|be| base.vertex(be, 1) == pv) {
            let got = lifts.get(&(be.clone(), v)).cloned().unwrap_or_default();
            if got.contains(&Answer::Yes) {
                continue;
            }
            let what = format!("{} ending at {}", base.simplex_name(&be), u.name(v));
            if got.contains(&Answer::Inconclusive) {
                undecided.push(what);
            } else {
                fail.push(what);
            }
        }
    }
    conditions.push(ConditionRecord::new(CONDITIONS[4], fail, undecided));

    // 6. left-degenerate base triangles lift to coCartesian ones along any edge over d1
    let mut fail = Vec::new();
    let mut undecided = Vec::new();
    let mut over: HashMap<(Simplex, Simplex), Vec<Answer>> = HashMap::new();
    for (t, f) in &table.left {
        over.entry((p.apply(t), u.face(t, 1))).or_default().push(f.answer);
    }
    for bt in base.simplices(2).into_iter().filter(|t| is_left_degenerate(base, t)) {
        let d1 = base.face(&bt, 1);
        for e in edges.iter().filter(|e| p.apply(e) == d1) {
            let got = over.get(&(bt.clone(), e.clone())).cloned().unwrap_or_default();
            if got.contains(&Answer::Yes) {
                continue;
            }
            let what = format!("{} along {}", base.simplex_name(&bt), name(e));
            if got.contains(&Answer::Inconclusive) {
                undecided.push(what);
            } else {
                fail.push(what);
            }
        }
    }
    conditions.push(ConditionRecord::new(CONDITIONS[5], fail, undecided));

    let pass = |i: usize| conditions[i].outcome == Outcome::Pass;
    let locally_fibred = pass(0) && pass(5);
    let functorial = locally_fibred && pass(2);
    let o2 = functorial
        && edges
            .iter()
            .filter(|e| e.is_degenerate())
            .all(|e| in_ex[e] == Answer::Yes);
    let flags = Flags {
        locally_fibred,
        functorial,
        o2,
        o2c: o2 && pass(4),
    };

    let thin: Vec<&Simplex> = table.verdicts.keys().filter(|t| !t.is_degenerate() && x.is_thin(t)).collect();
    let thin_in_cocartesian = (!thin.is_empty()).then(|| thin.iter().all(|t| table.contains(t)));

    let nondeg = |pairs: Vec<(&Simplex, Answer)>| -> Vec<String> {
        let set: BTreeSet<&Simplex> = pairs
            .into_iter()
            .filter(|(t, a)| !t.is_degenerate() && *a == Answer::Yes)
            .map(|(t, _)| t)
            .collect();
        set.into_iter().map(|t| name(t)).collect()
    };
    let cocartesian = nondeg(table.verdicts.iter().map(|(t, a)| (t, *a)).collect());
    let cartesian = nondeg(edges.iter().zip(plain.iter().map(|f| f.answer)).collect());
    let strongly_cartesian = nondeg(edges.iter().zip(strong.iter().map(|f| f.answer)).collect());

    let outcome = Outcome::from_verdicts(conditions.iter().map(|c| match c.outcome {
        Outcome::Pass => crate::lifting::Verdict::Lifts,
        Outcome::Fail => crate::lifting::Verdict::NoLift,
        Outcome::Inconclusive => crate::lifting::Verdict::BudgetExhausted,
    }));
    let base_report = classify_fibration(&to_point(s.clone(), s.under().cap())?, FibrationClass::WeakS, ctx.cap, budget)?;
    let _ = &table.orphans;
    Ok(FibrationProfile {
        cap: ctx.cap,
        cocartesian,
        cartesian,
        strongly_cartesian,
        flags,
        conditions,
        thin_in_cocartesian,
        outcome,
        base: base_report.outcome,
    })
}

/// Mapping-space view of a left-degenerate triangle `sigma: a -> b`: whether
/// its edge in `X(a,b)` is coCartesian for `X(a,b) -> S(pa,pb)`, checked on
/// `Λ^n_0` problems with `2 <= n` up to the mapping-space cap.
pub fn mapping_space_cocartesian(p: &DecoratedMap, sigma: &Simplex, cap: usize, budget: u64) -> Result<Finding> {
    let (x, s) = (p.source(), p.target());
    let u = x.under();
    if sigma.dim() != 2 || !is_left_degenerate(u, sigma) {
        return Err(Error::Params("expected a left-degenerate triangle".into()));
    }
    let (a, b) = (u.vertex(sigma, 0), u.vertex(sigma, 2));
    let (pa, pb) = (p.map().image_of_cell(a).cell, p.map().image_of_cell(b).cell);
    let xm = mapping_space(x, a, b, cap)?;
    let sm = mapping_space(s, pa, pb, cap)?;
    let q = xm.induced(u, p.map(), &sm)?;
    let e = xm
        .simplex(u, sigma)
        .ok_or_else(|| Error::Params("triangle is not an edge of the mapping space".into()))?;
    let (xf, sf) = (MBSSet::flat(xm.set.clone()), MBSSet::flat(sm.set.clone()));
    let ctx = Ctx {
        x: &xf,
        s: &sf,
        p: &q,
        ix: TargetIndex::new(&xm.set, cap),
        is: TargetIndex::new(&sm.set, cap),
        cap: xm.set.cap().min(sm.set.cap()).min(cap.saturating_sub(1)),
    };
    let mut out = Finding::yes(ctx.cap);
    for n in 2..=ctx.cap {
        let horn = Horn::new(n, 0)?;
        out.absorb(ctx.sweep(&horn, &[(&[0, 1], e.clone())], budget, |_| true, |_| true));
        if out.answer == Answer::No {
            break;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn left_degenerate_is_its_own_left_degeneration() {
        let d = Arc::new(FiniteSSet::standard(2, 3).unwrap());
        let x = MBSSet::sharp(d.clone());
        let s0 = d.degeneracy(&d.simplices(1)[0], 0);
        let ld = left_degeneration(&x, &s0).unwrap();
        assert_eq!(ld.tau, s0);
        assert_eq!(d.face(&ld.witness, 1), s0);
    }
}
