//! Pushout-products of decorated maps and the case table for generating
//! cofibrations against generating anodyne maps.

use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::decor::{DecoratedMap, MBSSet};
use crate::derivation::{derive_scripted, derive_within, verify, AutoConfig, Derivation, Script, Stage};
use crate::error::{Error, Result};
use crate::generators::{instantiate, Family, GeneratorId};
use crate::lifting::search::SearchStats;
use crate::sset::{normalize_pair, CellId, FiniteSSet, ProductResult, SSetMap, Simplex};

/// `f □ g : B×X ∪_{A×X} A×Y -> B×Y` for `f: A -> B` and `g: X -> Y`.
#[derive(Clone, Debug)]
pub struct PPInstance {
    pub cof: DecoratedMap,
    pub ano: DecoratedMap,
    pub result: DecoratedMap,
    /// `B × Y` with its projections.
    pub target_product: ProductResult,
}

impl PPInstance {
    /// True when the result is a bijection on cells and reflects decorations.
    pub fn is_isomorphism(&self) -> bool {
        let r = &self.result;
        r.is_mono()
            && r.map().image_cells().len() == r.target().under().total_cells()
            && r.reflects_decorations()
    }

    pub fn is_truncated(&self) -> bool {
        self.target_product.product.truncation().is_truncated()
    }
}

/// `u × v` between products, using the projections of both.
fn product_map(src: &ProductResult, dst: &ProductResult, u: &SSetMap, v: &SSetMap) -> Result<SSetMap> {
    let p = &dst.product;
    let index: HashMap<(Simplex, Simplex), CellId> = p
        .all_cells()
        .map(|c| {
            let s = Simplex::cell(c);
            ((dst.proj1.apply(&s), dst.proj2.apply(&s)), c)
        })
        .collect();
    let x = dst.proj1.target();
    let y = dst.proj2.target();
    SSetMap::from_fn(src.product.clone(), p.clone(), |c| {
        let s = Simplex::cell(c);
        let a = u.apply(&src.proj1.apply(&s));
        let b = v.apply(&src.proj2.apply(&s));
        let (surj, na, nb) = normalize_pair(x, y, &a, &b);
        let cell = *index
            .get(&(na, nb))
            .expect("both products are truncated at the same cap");
        Simplex { cell, surj }
    })
}

fn decorated_product_map(
    src: &(Arc<MBSSet>, ProductResult),
    dst: &(Arc<MBSSet>, ProductResult),
    u: &SSetMap,
    v: &SSetMap,
) -> Result<DecoratedMap> {
    let m = product_map(&src.1, &dst.1, u, v)?;
    DecoratedMap::new(m, src.0.clone(), dst.0.clone())
}

/// The pushout-product of `f` (a cofibration) with `g`.
pub fn pushout_product(f: &DecoratedMap, g: &DecoratedMap) -> Result<PPInstance> {
    if !f.is_mono() {
        return Err(Error::NotMono("the first factor of a pushout-product must be a monomorphism".into()));
    }
    let (a, b) = (f.source(), f.target());
    let (x, y) = (g.source(), g.target());
    let ax = MBSSet::product(a, x)?;
    let bx = MBSSet::product(b, x)?;
    let ay = MBSSet::product(a, y)?;
    let by = MBSSet::product(b, y)?;
    let id = |m: &Arc<MBSSet>| SSetMap::identity(m.under().clone());
    let f_x = decorated_product_map(&ax, &bx, f.map(), &id(x))?;
    let a_g = decorated_product_map(&ax, &ay, &id(a), g.map())?;
    let b_g = decorated_product_map(&bx, &by, &id(b), g.map())?;
    let f_y = decorated_product_map(&ay, &by, f.map(), &id(y))?;
    let (pushout, po) = MBSSet::pushout(&f_x, &a_g)?;
    let h = po.factor(b_g.map(), f_y.map())?;
    let result = DecoratedMap::new(h, pushout, by.0.clone())?;
    Ok(PPInstance {
        cof: f.clone(),
        ano: g.clone(),
        result,
        target_product: by.1,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    Isomorphism,
    Nightmare,
    DualNightmare,
    Prism,
    Auto,
    AutoWithLemma,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CaseStatus {
    Isomorphism,
    Verified,
    Unverified,
}

impl std::fmt::Display for CaseStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            CaseStatus::Isomorphism => "isomorphism",
            CaseStatus::Verified => "verified",
            CaseStatus::Unverified => "unverified",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceReport {
    pub cof: GeneratorId,
    pub ano: GeneratorId,
    pub cap: usize,
    pub strategy: Strategy,
    pub status: CaseStatus,
    pub steps: usize,
    pub attaching_steps: usize,
    pub rules: Vec<(String, usize)>,
    pub uses_lemma: bool,
    pub truncated: bool,
    pub source_census: Vec<usize>,
    pub target_census: Vec<usize>,
    pub stats: SearchStats,
    pub note: Option<String>,
}

/// Runs one instance and, when verified, also returns its derivation.
pub fn verify_instance(
    cof: &GeneratorId,
    ano: &GeneratorId,
    budget: u64,
) -> Result<(InstanceReport, Option<Derivation>)> {
    if !Family::COFIBRATIONS.contains(&cof.family) {
        return Err(Error::Params(format!("{cof} is not a generating cofibration")));
    }
    if !Family::ANODYNE.contains(&ano.family) {
        return Err(Error::Params(format!("{ano} is not a generating anodyne map")));
    }
    let cap = (cof.dimension() + ano.dimension()).max(3);
    let f = instantiate(cof, cap)?.map;
    let g = instantiate(ano, cap)?.map;
    let pp = pushout_product(&f, &g)?;
    let mut report = InstanceReport {
        cof: cof.clone(),
        ano: ano.clone(),
        cap,
        strategy: Strategy::Isomorphism,
        status: CaseStatus::Isomorphism,
        steps: 0,
        attaching_steps: 0,
        rules: Vec::new(),
        uses_lemma: false,
        truncated: pp.is_truncated(),
        source_census: pp.result.source().under().census(),
        target_census: pp.result.target().under().census(),
        stats: SearchStats::default(),
        note: None,
    };
    if pp.is_isomorphism() {
        return Ok((report, None));
    }
    let n = cof.params.first().copied().unwrap_or(0);
    let script = match (cof.family, ano.family) {
        (Family::C1, Family::A3) if n >= 1 => Some((Strategy::Nightmare, Script::Nightmare)),
        (Family::C1, Family::A4) if n >= 1 => Some((Strategy::DualNightmare, Script::DualNightmare)),
        (Family::C1, Family::A5) if n >= 1 => Some((Strategy::Prism, Script::Prism)),
        _ => None,
    };
    let derivation = match script {
        Some((strategy, s)) => {
            report.strategy = strategy;
            let params = match s {
                Script::Prism => vec![n],
                _ => vec![n, ano.params[0]],
            };
            match derive_scripted(s, &params) {
                Ok(d) => Some(d),
                Err(e) => {
                    report.note = Some(format!("scripted filtration failed: {e}"));
                    None
                }
            }
        }
        None => {
            let start = Stage::image_of(&pp.result)?;
            let ambient = pp.result.target().clone();
            let mut config = AutoConfig {
                budget,
                ..AutoConfig::default()
            };
            report.strategy = Strategy::Auto;
            let mut out = derive_within(ambient.clone(), start.clone(), &config)?;
            report.stats.absorb(out.stats);
            if out.derivation.is_none() {
                config.allow_lemma = true;
                report.strategy = Strategy::AutoWithLemma;
                out = derive_within(ambient, start, &config)?;
                report.stats.absorb(out.stats);
            }
            if out.derivation.is_none() {
                report.note = Some(if out.exhausted {
                    "search budget exhausted".into()
                } else {
                    "search space exhausted without a derivation".into()
                });
            }
            out.derivation
        }
    };
    match &derivation {
        Some(d) => {
            let v = verify(d);
            report.steps = d.steps.len();
            report.attaching_steps = d.attaching_steps();
            report.rules = d.rule_counts();
            report.uses_lemma = v.uses_lemma;
            report.status = if v.ok { CaseStatus::Verified } else { CaseStatus::Unverified };
            if !v.ok {
                report.note = v.reason;
            }
        }
        None => report.status = CaseStatus::Unverified,
    }
    Ok((report, derivation))
}

/// Case parameters for the table: which instances of each family to run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub version: String,
    /// Instances per family, e.g. `"A1": ["A1:2:1", "A1:3:1"]`.
    pub params: std::collections::BTreeMap<String, Vec<GeneratorId>>,
    /// Instance pairs left out to bound runtime.
    #[serde(default)]
    pub skip: Vec<(GeneratorId, GeneratorId)>,
}

pub const MANIFEST_VERSION: &str = "manifest.v1";

impl Manifest {
    pub fn builtin() -> Manifest {
        serde_json::from_str(include_str!("../data/manifest.v1.json")).expect("built-in manifest parses")
    }

    pub fn parse(text: &str) -> Result<Manifest> {
        let m: Manifest = serde_json::from_str(text).map_err(|e| Error::Document(e.to_string()))?;
        if m.version != MANIFEST_VERSION {
            return Err(Error::Document(format!("unsupported manifest version `{}`", m.version)));
        }
        for fam in Family::COFIBRATIONS.iter().chain(Family::ANODYNE.iter()) {
            let list = m
                .params
                .get(fam.as_str())
                .ok_or_else(|| Error::Document(format!("manifest has no entry for {fam}")))?;
            if list.is_empty() || list.iter().any(|id| id.family != *fam) {
                return Err(Error::Document(format!("manifest entry for {fam} is empty or mixed")));
            }
        }
        Ok(m)
    }

    /// All instance pairs of one case.
    pub fn instances(&self, cof: Family, ano: Family) -> Vec<(GeneratorId, GeneratorId)> {
        let mut out = Vec::new();
        for c in &self.params[cof.as_str()] {
            for a in &self.params[ano.as_str()] {
                let pair = (c.clone(), a.clone());
                if !self.skip.contains(&pair) {
                    out.push(pair);
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseReport {
    pub cof: Family,
    pub ano: Family,
    pub status: CaseStatus,
    pub instances: Vec<InstanceReport>,
}

/// Runs every instance of one case.
pub fn verify_case(cof: Family, ano: Family, manifest: &Manifest, budget: u64) -> Result<CaseReport> {
    let instances = manifest
        .instances(cof, ano)
        .into_iter()
        .map(|(c, a)| verify_instance(&c, &a, budget).map(|r| r.0))
        .collect::<Result<Vec<_>>>()?;
    let status = instances
        .iter()
        .map(|r| r.status)
        .max()
        .unwrap_or(CaseStatus::Unverified);
    Ok(CaseReport {
        cof,
        ano,
        status,
        instances,
    })
}

/// All 44 cases, run in parallel, reported in table order.
pub fn verify_table(manifest: &Manifest, budget: u64) -> Result<Vec<CaseReport>> {
    let pairs: Vec<(Family, Family)> = Family::COFIBRATIONS
        .iter()
        .flat_map(|&c| Family::ANODYNE.iter().map(move |&a| (c, a)))
        .collect();
    pairs
        .par_iter()
        .map(|&(c, a)| verify_case(c, a, manifest, budget))
        .collect()
}

/// Cell counts of the pushout `B×X ∪_{A×X} A×Y` computed dimension-wise as
/// `|B×X| + |A×Y| - |A×X|` on nondegenerate cells; valid because both legs are monomorphisms.
pub fn expected_source_census(f: &DecoratedMap, g: &DecoratedMap) -> Result<Vec<usize>> {
    let count = |x: &Arc<FiniteSSet>, y: &Arc<FiniteSSet>| -> Result<Vec<usize>> {
        Ok(FiniteSSet::product(x, y)?.product.census())
    };
    let bx = count(f.target().under(), g.source().under())?;
    let ay = count(f.source().under(), g.target().under())?;
    let ax = count(f.source().under(), g.source().under())?;
    let len = bx.len().max(ay.len());
    let at = |v: &Vec<usize>, i: usize| v.get(i).copied().unwrap_or(0);
    let mut out: Vec<usize> = (0..len).map(|i| at(&bx, i) + at(&ay, i) - at(&ax, i)).collect();
    while out.last() == Some(&0) {
        out.pop();
    }
    Ok(out)
}
