//! Versioned JSON documents holding named decorated sets and maps between them.

use std::collections::BTreeMap;
use std::sync::Arc;

use mbs_core::sset::SimplexRef;
use mbs_core::{CellId, Deco, DecoratedMap, DegeneracyWord, FiniteSSet, MBSSet, SSetBuilder, SSetMap, Simplex};
use serde::{Deserialize, Serialize};

use crate::InputError;

pub const DOC_VERSION: &str = "mbs-doc.v1";

/// A face or image: the degeneracy word `ops` (decreasing) applied to cell `of`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RefDoc {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ops: Vec<usize>,
    pub of: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellDoc {
    pub id: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub faces: Vec<RefDoc>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObjectDoc {
    /// Cells by dimension, keyed `"0"`, `"1"`, ...
    pub cells: BTreeMap<String, Vec<CellDoc>>,
    #[serde(default)]
    pub marked: Vec<String>,
    #[serde(default)]
    pub thin: Vec<String>,
    #[serde(default)]
    pub lean: Vec<String>,
    /// Simplices are named by their vertices (nerves of posets).
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub nerve: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapDoc {
    pub source: String,
    pub target: String,
    /// Image of every nondegenerate source cell.
    pub assign: BTreeMap<String, RefDoc>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Metadata {
    pub cap: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Document {
    pub version: String,
    pub metadata: Metadata,
    #[serde(default)]
    pub objects: BTreeMap<String, ObjectDoc>,
    #[serde(default)]
    pub maps: BTreeMap<String, MapDoc>,
}

/// A loaded document.
pub struct Loaded {
    pub cap: usize,
    pub objects: BTreeMap<String, Arc<MBSSet>>,
    pub maps: BTreeMap<String, DecoratedMap>,
    /// Decoration repairs applied at load, as `object: message`.
    pub warnings: Vec<String>,
}

fn bad(what: impl Into<String>) -> InputError {
    InputError(what.into())
}

impl Document {
    pub fn new(cap: usize, provenance: Option<String>) -> Document {
        Document {
            version: DOC_VERSION.into(),
            metadata: Metadata { cap, provenance },
            objects: BTreeMap::new(),
            maps: BTreeMap::new(),
        }
    }

    pub fn parse(text: &str) -> Result<Document, InputError> {
        let doc: Document = serde_json::from_str(text).map_err(|e| {
            bad(format!("syntax error at line {}, column {}: {e}", e.line(), e.column()))
        })?;
        if doc.version != DOC_VERSION {
            return Err(bad(format!("unsupported document version `{}`", doc.version)));
        }
        Ok(doc)
    }

    pub fn emit(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("documents serialize");
        s.push('\n');
        s
    }

    pub fn add_object(&mut self, name: &str, x: &MBSSet) {
        self.objects.insert(name.into(), object_doc(x));
    }

    pub fn add_map(&mut self, name: &str, source: &str, target: &str, f: &DecoratedMap) {
        let (s, t) = (f.map().source(), f.map().target());
        let assign = s
            .all_cells()
            .map(|c| (s.name(c).to_string(), ref_doc(t, f.map().image_of_cell(c))))
            .collect();
        self.maps.insert(
            name.into(),
            MapDoc {
                source: source.into(),
                target: target.into(),
                assign,
            },
        );
    }

    /// Builds every object and map; `strict` turns decoration repairs into errors.
    pub fn load(&self, strict: bool) -> Result<Loaded, InputError> {
        let cap = self.metadata.cap;
        let mut objects = BTreeMap::new();
        let mut warnings = Vec::new();
        for (name, o) in &self.objects {
            let (x, repairs) = build_object(o, cap).map_err(|e| bad(format!("object `{name}`: {e}")))?;
            if strict && !repairs.is_empty() {
                return Err(bad(format!("object `{name}`: {} (rejected under --strict)", repairs.join("; "))));
            }
            warnings.extend(repairs.into_iter().map(|r| format!("{name}: {r}")));
            objects.insert(name.clone(), Arc::new(x));
        }
        let mut maps = BTreeMap::new();
        for (name, m) in &self.maps {
            let get = |o: &str| {
                objects
                    .get(o)
                    .cloned()
                    .ok_or_else(|| bad(format!("map `{name}` refers to undeclared object `{o}`")))
            };
            let (s, t) = (get(&m.source)?, get(&m.target)?);
            let f = build_map(m, s, t).map_err(|e| bad(format!("map `{name}`: {e}")))?;
            maps.insert(name.clone(), f);
        }
        Ok(Loaded {
            cap,
            objects,
            maps,
            warnings,
        })
    }
}

pub fn ref_doc(x: &FiniteSSet, s: &Simplex) -> RefDoc {
    let r = x.simplex_ref(s);
    RefDoc {
        ops: r.word.indices().to_vec(),
        of: r.target,
    }
}

pub fn resolve(x: &FiniteSSet, r: &RefDoc) -> mbs_core::Result<Simplex> {
    let cell = x.get(&r.of)?;
    x.resolve(&SimplexRef {
        word: DegeneracyWord::new(r.ops.clone())?,
        target: r.of.clone(),
        dim: cell.dim(),
    })
}

pub fn object_doc(x: &MBSSet) -> ObjectDoc {
    let u = x.under();
    let mut cells = BTreeMap::new();
    for d in 0..=u.dim() {
        let list: Vec<CellDoc> = u
            .cells(d)
            .map(|c| CellDoc {
                id: u.name(c).to_string(),
                faces: if d == 0 {
                    Vec::new()
                } else {
                    u.faces(c).iter().map(|f| ref_doc(u, f)).collect()
                },
            })
            .collect();
        if !list.is_empty() {
            cells.insert(d.to_string(), list);
        }
    }
    let names = |set: &std::collections::BTreeSet<CellId>| set.iter().map(|&c| u.name(c).to_string()).collect();
    ObjectDoc {
        cells,
        marked: names(x.marked()),
        thin: names(x.thin()),
        lean: names(x.lean()),
        nerve: u.is_vertex_determined(),
    }
}

fn build_object(o: &ObjectDoc, cap: usize) -> mbs_core::Result<(MBSSet, Vec<String>)> {
    let mut dims: Vec<(usize, &Vec<CellDoc>)> = Vec::new();
    for (k, v) in &o.cells {
        let d: usize = k
            .parse()
            .map_err(|_| mbs_core::Error::Document(format!("cell dimension key `{k}` is not a number")))?;
        dims.push((d, v));
    }
    dims.sort_by_key(|p| p.0);
    let mut b = SSetBuilder::new(cap).vertex_determined(o.nerve);
    for (d, list) in dims {
        for c in list {
            if c.faces.len() != if d == 0 { 0 } else { d + 1 } {
                return Err(mbs_core::Error::MalformedCell {
                    cell: c.id.clone(),
                    reason: format!("a {d}-cell needs {} faces", if d == 0 { 0 } else { d + 1 }),
                });
            }
            let mut faces = Vec::with_capacity(c.faces.len());
            for f in &c.faces {
                let cell = b.lookup(&f.of).ok_or_else(|| mbs_core::Error::UnknownCell(f.of.clone()))?;
                let surj = DegeneracyWord::new(f.ops.clone())?.to_surjection(cell.dim())?;
                faces.push(Simplex { cell, surj });
            }
            b.add(c.id.clone(), faces)?;
        }
    }
    let u = Arc::new(b.finish()?);
    MBSSet::decorate(
        u,
        &Deco::named(o.marked.clone()),
        &Deco::named(o.thin.clone()),
        &Deco::named(o.lean.clone()),
    )
}

fn build_map(m: &MapDoc, s: Arc<MBSSet>, t: Arc<MBSSet>) -> mbs_core::Result<DecoratedMap> {
    let (su, tu) = (s.under().clone(), t.under().clone());
    for k in m.assign.keys() {
        su.get(k)?;
    }
    let mut assign = Vec::new();
    for d in 0..=su.dim() {
        let mut row = Vec::new();
        for c in su.cells(d) {
            let r = m
                .assign
                .get(su.name(c))
                .ok_or_else(|| mbs_core::Error::NotAMap(format!("no image for `{}`", su.name(c))))?;
            row.push(resolve(&tu, r)?);
        }
        assign.push(row);
    }
    DecoratedMap::new(SSetMap::new(su, tu, assign)?, s, t)
}
