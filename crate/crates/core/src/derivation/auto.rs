//! Automatic derivation search: saturate decorations greedily, then backtrack
//! over cell attachments in canonical order.

use std::collections::HashSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{shape_map, Attachment, Derivation, Rule, RuleCache, Stage, Step};
use crate::decor::{DecoratedMap, MBSSet};
use crate::error::{Error, Result};
use crate::generators::{list_generators, Family};
use crate::lifting::search::{Extension, SearchStats, TargetIndex};
use crate::sset::{SSetMap, Simplex};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutoConfig {
    /// Maximum number of cell attachments tried.
    pub budget: u64,
    /// Also allow the two-out-of-three map for marked edges.
    pub allow_lemma: bool,
    /// Node budget for enumerating maps out of Kan fixtures.
    pub enumeration_budget: u64,
}

impl Default for AutoConfig {
    fn default() -> Self {
        AutoConfig {
            budget: 100_000,
            allow_lemma: false,
            enumeration_budget: 1_000_000,
        }
    }
}

#[derive(Clone, Debug)]
pub struct AutoOutcome {
    pub derivation: Option<Derivation>,
    pub stats: SearchStats,
    /// True when the budget ran out before the search space did.
    pub exhausted: bool,
    pub candidates: usize,
}

fn attaches(f: Family) -> bool {
    matches!(f, Family::A1 | Family::A3 | Family::A4 | Family::A5)
}

/// Every attachment of every rule into a fixed ambient, in canonical order.
pub struct Catalog {
    ambient: Arc<MBSSet>,
    cells: Vec<Attachment>,
    decorations: Vec<Attachment>,
    pub enumeration: SearchStats,
    rules: RuleCache,
}

impl Catalog {
    pub fn new(ambient: &Arc<MBSSet>, config: &AutoConfig) -> Result<Catalog> {
        Catalog::build(ambient, config, true)
    }

    /// Only the decoration rules; cell rules are looked up on demand.
    pub fn decorations_only(ambient: &Arc<MBSSet>, config: &AutoConfig) -> Result<Catalog> {
        Catalog::build(ambient, config, false)
    }

    fn build(ambient: &Arc<MBSSet>, config: &AutoConfig, with_cells: bool) -> Result<Catalog> {
        let x = ambient.under();
        let mut rules = RuleCache::default();
        let mut cells = Vec::new();
        let mut decorations = Vec::new();
        let mut enumeration = SearchStats::default();
        let mut ids: Vec<Rule> = Vec::new();
        for fam in Family::ANODYNE {
            if attaches(fam) && !with_cells {
                continue;
            }
            let max_n = if attaches(fam) { x.dim() } else { 4 };
            ids.extend(list_generators(fam, max_n).into_iter().map(Rule::Generator));
        }
        if config.allow_lemma {
            ids.push(Rule::Theta);
        }
        for rule in ids {
            let g = rules.get(&rule, x.cap())?;
            let t = g.target().under();
            let cell_rule = matches!(&rule, Rule::Generator(id) if attaches(id.family));
            let maps: Vec<SSetMap> = match &rule {
                Rule::Generator(id) if id.family == Family::E => {
                    let index = TargetIndex::new(x, t.dim().max(x.dim()));
                    let ext = Extension::new(g.target(), ambient, &index);
                    let mut budget = config.enumeration_budget;
                    let found = ext.all(&mut budget, &mut enumeration).unwrap_or_default();
                    found
                        .into_iter()
                        .filter_map(|a| SSetMap::new(t.clone(), x.clone(), a).ok())
                        .collect()
                }
                _ => {
                    let n = rule.dimension();
                    let sims: Vec<Simplex> = if cell_rule {
                        x.cells(n).map(Simplex::cell).collect()
                    } else {
                        x.simplices(n)
                    };
                    sims.iter().filter_map(|s| shape_map(t, x, s).ok()).collect()
                }
            };
            for f in maps {
                let Ok(a) = Attachment::new(rule.clone(), &g, f, ambient) else {
                    continue;
                };
                if a.attaches_cells() {
                    cells.push(a);
                } else if a.useful(&Stage::empty(x)) {
                    decorations.push(a);
                }
            }
        }
        Ok(Catalog {
            ambient: ambient.clone(),
            cells,
            decorations,
            enumeration,
            rules,
        })
    }

    pub fn len(&self) -> usize {
        self.cells.len() + self.decorations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Applies decoration-only attachments until nothing changes.
    pub fn saturate(&self, stage: &mut Stage, steps: &mut Vec<Step>, group: &Option<String>) {
        let x = self.ambient.under();
        loop {
            let mut changed = false;
            for a in &self.decorations {
                if a.useful(stage) && a.blocked(stage, x).is_none() {
                    a.apply(stage);
                    steps.push(a.clone().into_step(group.clone()));
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
    }

    /// The attachment of `rule` along the simplex `s`, if it is a valid map.
    pub fn attachment(&mut self, rule: &Rule, s: &Simplex) -> std::result::Result<Attachment, String> {
        let x = self.ambient.under().clone();
        let g = self.rules.get(rule, x.cap()).map_err(|e| e.to_string())?;
        let f = shape_map(g.target().under(), &x, s).map_err(|e| e.to_string())?;
        Attachment::new(rule.clone(), &g, f, &self.ambient)
    }

    pub fn ambient(&self) -> &Arc<MBSSet> {
        &self.ambient
    }
}

struct Search<'a> {
    catalog: &'a Catalog,
    full: Stage,
    visited: HashSet<Stage>,
    budget: u64,
    stats: SearchStats,
}

struct OutOfBudget;

impl Search<'_> {
    fn run(&mut self, mut stage: Stage, steps: &mut Vec<Step>, depth: usize) -> std::result::Result<bool, OutOfBudget> {
        self.stats.max_depth = self.stats.max_depth.max(depth);
        let mark = steps.len();
        self.catalog.saturate(&mut stage, steps, &None);
        if stage == self.full {
            return Ok(true);
        }
        if !self.visited.insert(stage.clone()) {
            steps.truncate(mark);
            return Ok(false);
        }
        let x = self.catalog.ambient.under();
        for a in &self.catalog.cells {
            if a.blocked(&stage, x).is_some() {
                continue;
            }
            if self.budget == 0 {
                return Err(OutOfBudget);
            }
            self.budget -= 1;
            self.stats.nodes += 1;
            let mut next = stage.clone();
            a.apply(&mut next);
            steps.push(a.clone().into_step(None));
            if self.run(next, steps, depth + 1)? {
                return Ok(true);
            }
            steps.pop();
        }
        steps.truncate(mark);
        Ok(false)
    }
}

/// Searches for a derivation of `j`, a monomorphism, inside its target.
pub fn derive_auto(j: &DecoratedMap, budget: u64) -> Result<AutoOutcome> {
    let config = AutoConfig {
        budget,
        ..AutoConfig::default()
    };
    derive_within(j.target().clone(), Stage::image_of(j)?, &config)
}

/// Searches for a derivation from `start` to all of `ambient`.
pub fn derive_within(ambient: Arc<MBSSet>, start: Stage, config: &AutoConfig) -> Result<AutoOutcome> {
    start
        .check_within(&ambient)
        .map_err(|e| Error::Params(format!("start is not a sub-object of the ambient: {e}")))?;
    let has_all_cells = start.cell_count() == ambient.under().total_cells();
    let catalog = Catalog::build(&ambient, config, !has_all_cells)?;
    let mut search = Search {
        catalog: &catalog,
        full: Stage::full(&ambient),
        visited: HashSet::new(),
        budget: config.budget,
        stats: SearchStats::default(),
    };
    let mut steps = Vec::new();
    let result = search.run(start.clone(), &mut steps, 0);
    let mut stats = search.stats;
    stats.absorb(catalog.enumeration);
    let (derivation, exhausted) = match result {
        Ok(true) => (
            Some(Derivation {
                ambient,
                start,
                steps,
            }),
            false,
        ),
        Ok(false) => (None, false),
        Err(OutOfBudget) => (None, true),
    };
    Ok(AutoOutcome {
        derivation,
        stats,
        exhausted,
        candidates: catalog.len(),
    })
}
