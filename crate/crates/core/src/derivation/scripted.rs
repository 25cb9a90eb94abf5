//! Explicit filtrations: each listed simplex is attached by a horn of the
//! matching type, after recursively filling whichever of its faces are missing.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::auto::{AutoConfig, Catalog};
use super::named::{named_subcomplex, NamedComplex};
use super::zstring::{path_vertices, product_path, z_strings};
use super::{Derivation, Rule, Stage, Step};
use crate::decor::MBSSet;
use crate::error::{Error, Result};
use crate::generators::{instantiate, Family, GeneratorId};
use crate::pushout_product::pushout_product;
use crate::sset::{CellId, ProductResult, Simplex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Script {
    /// `(Λ^m_i⃗, flat, T_i⃗) ⊂ (Δ^m, flat, T_i⃗)`; params `m, i1, i2, ...`.
    IndI,
    /// The same with the edge `01` collapsed and `0` in the list; params `m, 0, i1, ...`.
    IndII,
    /// `C1(n) □ A3(m)` along the shuffles in Z-order; params `n, m`.
    Nightmare,
    /// `C1(n) □ A4(m)` along the mirrored shuffles; params `n, m`.
    DualNightmare,
    /// `C1(n) □ A5` along the prism simplices; params `n`.
    Prism,
}

impl Script {
    pub const ALL: [Script; 5] = [
        Script::IndI,
        Script::IndII,
        Script::Nightmare,
        Script::DualNightmare,
        Script::Prism,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Script::IndI => "indI",
            Script::IndII => "indII",
            Script::Nightmare => "nightmare",
            Script::DualNightmare => "dual-nightmare",
            Script::Prism => "prism",
        }
    }
}

impl fmt::Display for Script {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Script {
    type Err = Error;
    fn from_str(s: &str) -> Result<Script> {
        Script::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::Params(format!("unknown script `{s}`")))
    }
}

/// Attaches simplices one at a time, keeping the stage and the steps taken.
struct Filler {
    catalog: Catalog,
    start: Stage,
    stage: Stage,
    steps: Vec<Step>,
    /// Prefer filling the largest missing face first (mirrored filtrations).
    dual: bool,
}

impl Filler {
    fn new(ambient: &Arc<MBSSet>, start: Stage, dual: bool) -> Result<Filler> {
        start
            .check_within(ambient)
            .map_err(|e| Error::Params(format!("start is not a sub-object: {e}")))?;
        Ok(Filler {
            catalog: Catalog::decorations_only(ambient, &AutoConfig::default())?,
            stage: start.clone(),
            start,
            steps: Vec::new(),
            dual,
        })
    }

    fn saturate(&mut self, group: &Option<String>) {
        self.catalog.saturate(&mut self.stage, &mut self.steps, group);
    }

    fn missing_faces(&self, c: CellId) -> Vec<usize> {
        let x = self.catalog.ambient().under();
        let mut out: Vec<usize> = Vec::new();
        for (i, f) in x.faces(c).iter().enumerate() {
            if !self.stage.contains(f.cell) {
                out.push(i);
            }
        }
        out
    }

    fn horn_rule(n: usize, i: usize) -> Option<Rule> {
        let id = if i > 0 && i < n {
            GeneratorId::new(Family::A1, &[n, i])
        } else if n < 2 {
            return None;
        } else if i == 0 {
            GeneratorId::new(Family::A3, &[n])
        } else {
            GeneratorId::new(Family::A4, &[n])
        };
        Some(Rule::Generator(id))
    }

    /// Attaches `c` along a horn, filling missing faces first.
    fn fill(&mut self, c: CellId, group: &Option<String>) -> Result<()> {
        let x = self.catalog.ambient().under().clone();
        loop {
            if self.stage.contains(c) {
                return Ok(());
            }
            let missing = self.missing_faces(c);
            let n = c.dim();
            match missing.len() {
                0 => {
                    return Err(Error::Params(format!(
                        "`{}` has its whole boundary present; no horn attaches it",
                        x.name(c)
                    )))
                }
                1 => return self.attach(c, missing[0], group),
                _ => {
                    let pick = if self.dual {
                        missing.iter().rev().copied().find(|&i| i != n)
                    } else {
                        missing.iter().copied().find(|&i| i != 0)
                    }
                    .unwrap_or(missing[0]);
                    let face = x.faces(c)[pick].cell;
                    self.fill(face, group)?;
                }
            }
        }
    }

    fn attach(&mut self, c: CellId, i: usize, group: &Option<String>) -> Result<()> {
        let x = self.catalog.ambient().under().clone();
        let rule = Self::horn_rule(c.dim(), i).ok_or_else(|| {
            Error::Params(format!("no horn attaches `{}` along face {i}", x.name(c)))
        })?;
        let a = self
            .catalog
            .attachment(&rule, &Simplex::cell(c))
            .map_err(|e| Error::Params(format!("{rule} on `{}`: {e}", x.name(c))))?;
        if a.blocked(&self.stage, &x).is_some() {
            self.saturate(group);
        }
        if let Some(why) = a.blocked(&self.stage, &x) {
            return Err(Error::Params(format!("{rule} on `{}`: {why}", x.name(c))));
        }
        a.apply(&mut self.stage);
        self.steps.push(a.into_step(group.clone()));
        Ok(())
    }

    fn finish(mut self) -> Derivation {
        self.saturate(&None);
        let ambient = self.catalog.ambient().clone();
        Derivation {
            ambient,
            start: self.start,
            steps: self.steps,
        }
    }
}

fn need(params: &[usize], k: usize, script: Script) -> Result<()> {
    if params.len() == k {
        Ok(())
    } else {
        Err(Error::Params(format!("{script} takes {k} parameters, got {}", params.len())))
    }
}

/// A top cell of `B × Y` given by a lattice path of vertex coordinates.
fn path_cell(prod: &ProductResult, path: &[(usize, usize)]) -> Result<CellId> {
    let s = product_path(prod, path)
        .ok_or_else(|| Error::Params("path simplex lies above the cap".into()))?;
    if s.is_degenerate() {
        return Err(Error::Params("path simplex is degenerate".into()));
    }
    Ok(s.cell)
}

/// Runs one of the scripted filtrations and returns its derivation.
pub fn derive_scripted(script: Script, params: &[usize]) -> Result<Derivation> {
    match script {
        Script::IndI | Script::IndII => {
            let (&m, list) = params
                .split_first()
                .ok_or_else(|| Error::Params(format!("{script} needs m and an index list")))?;
            let has_zero = list.contains(&0);
            if has_zero != (script == Script::IndII) {
                return Err(Error::Params(format!(
                    "{script}: the index list must {}contain 0",
                    if has_zero { "not " } else { "" }
                )));
            }
            if script == Script::IndI && list.contains(&m) {
                return Err(Error::Params(format!("{script}: the index list must not contain m")));
            }
            let named = named_subcomplex(&NamedComplex::LambdaVec(m, list.to_vec()), m)?;
            let start = named.stage();
            let mut filler = Filler::new(&named.ambient, start, false)?;
            let top = CellId::new(m, 0);
            filler.fill(top, &None)?;
            Ok(filler.finish())
        }
        Script::Nightmare | Script::DualNightmare => {
            need(params, 2, script)?;
            let (n, m) = (params[0], params[1]);
            if n == 0 || m < 2 {
                return Err(Error::Params(format!("{script} needs n >= 1 and m >= 2")));
            }
            let fam = if script == Script::Nightmare { Family::A3 } else { Family::A4 };
            let cap = n + m;
            let f = instantiate(&GeneratorId::new(Family::C1, &[n]), cap)?.map;
            let g = instantiate(&GeneratorId::new(fam, &[m]), cap)?.map;
            let pp = pushout_product(&f, &g)?;
            let ambient = pp.result.target().clone();
            let start = Stage::image_of(&pp.result)?;
            let dual = script == Script::DualNightmare;
            let mut filler = Filler::new(&ambient, start, dual)?;
            for z in z_strings(n, m) {
                let mut path = path_vertices(n, m, &z)?;
                if dual {
                    path = path.iter().rev().map(|&(i, j)| (n - i, m - j)).collect();
                }
                let c = path_cell(&pp.target_product, &path)?;
                filler.fill(c, &Some(format!("z={z}")))?;
            }
            Ok(filler.finish())
        }
        Script::Prism => {
            need(params, 1, script)?;
            let n = params[0];
            if n == 0 {
                return Err(Error::Params("prism needs n >= 1".into()));
            }
            let cap = (n + 1).max(2);
            let f = instantiate(&GeneratorId::new(Family::C1, &[n]), cap)?.map;
            let g = instantiate(&GeneratorId::new(Family::A5, &[]), cap)?.map;
            let pp = pushout_product(&f, &g)?;
            let ambient = pp.result.target().clone();
            let start = Stage::image_of(&pp.result)?;
            let mut filler = Filler::new(&ambient, start, false)?;
            for k in 0..=n {
                let path: Vec<(usize, usize)> =
                    (0..=n + 1).map(|i| if i <= k { (i, 0) } else { (i - 1, 1) }).collect();
                let c = path_cell(&pp.target_product, &path)?;
                filler.fill(c, &Some(format!("k={k}")))?;
            }
            Ok(filler.finish())
        }
    }
}
