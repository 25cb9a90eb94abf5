//! `.mbd` derivation certificates.

use std::collections::BTreeMap;
use std::sync::Arc;

use mbs_core::derivation::{Derivation, Rule, Stage, StageNames, Step};
use mbs_core::{MBSSet, SSetMap};
use serde::{Deserialize, Serialize};

use crate::doc::{object_doc, ref_doc, Document, ObjectDoc, RefDoc};
use crate::InputError;

pub const CERT_VERSION: &str = "mbd.v1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepDoc {
    pub rule: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<String>,
    /// Image of every nondegenerate cell of the rule's target.
    pub assign: BTreeMap<String, RefDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Certificate {
    pub version: String,
    pub cap: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
    pub ambient: ObjectDoc,
    pub start: StageNames,
    pub steps: Vec<StepDoc>,
}

impl Certificate {
    pub fn from_derivation(d: &Derivation, provenance: Option<String>) -> Certificate {
        let x = d.ambient.under();
        let steps = d
            .steps
            .iter()
            .map(|s| {
                let src = s.map.source();
                StepDoc {
                    rule: s.rule.to_string(),
                    group: s.group.clone(),
                    assign: src
                        .all_cells()
                        .map(|c| (src.name(c).to_string(), ref_doc(x, s.map.image_of_cell(c))))
                        .collect(),
                }
            })
            .collect();
        Certificate {
            version: CERT_VERSION.into(),
            cap: x.cap(),
            provenance,
            ambient: object_doc(&d.ambient),
            start: d.start.names(x),
            steps,
        }
    }

    pub fn parse(text: &str) -> Result<Certificate, InputError> {
        // check the version before the schema so that newer files are rejected by name
        let raw: serde_json::Value = serde_json::from_str(text).map_err(|e| {
            InputError(format!("syntax error at line {}, column {}: {e}", e.line(), e.column()))
        })?;
        match raw.get("version").and_then(|v| v.as_str()) {
            Some(CERT_VERSION) => {}
            Some(v) => return Err(InputError(format!("unsupported certificate version `{v}`"))),
            None => return Err(InputError("certificate has no version".into())),
        }
        serde_json::from_value(raw).map_err(|e| InputError(format!("malformed certificate: {e}")))
    }

    pub fn emit(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("certificates serialize");
        s.push('\n');
        s
    }

    /// Rebuilds the derivation; every step map is validated but the steps are not yet verified.
    pub fn to_derivation(&self) -> Result<Derivation, InputError> {
        let mut doc = Document::new(self.cap, None);
        doc.objects.insert("ambient".into(), self.ambient.clone());
        let loaded = doc.load(false)?;
        let ambient: Arc<MBSSet> = loaded.objects["ambient"].clone();
        let x = ambient.under().clone();
        let start = Stage::from_names(&ambient, &self.start).map_err(|e| InputError(format!("start stage: {e}")))?;
        let mut steps = Vec::new();
        for (i, s) in self.steps.iter().enumerate() {
            let err = |e: mbs_core::Error| InputError(format!("step {i} ({}): {e}", s.rule));
            let rule: Rule = s.rule.parse().map_err(err)?;
            let g = rule.instantiate(self.cap).map_err(err)?;
            let t = g.target().under().clone();
            let mut assign = Vec::new();
            for d in 0..=t.dim() {
                let mut row = Vec::new();
                for c in t.cells(d) {
                    let r = s
                        .assign
                        .get(t.name(c))
                        .ok_or_else(|| InputError(format!("step {i}: no image for `{}`", t.name(c))))?;
                    row.push(crate::doc::resolve(&x, r).map_err(err)?);
                }
                assign.push(row);
            }
            let map = SSetMap::new(t, x.clone(), assign).map_err(err)?;
            steps.push(Step {
                rule,
                map,
                group: s.group.clone(),
            });
        }
        Ok(Derivation { ambient, start, steps })
    }
}
