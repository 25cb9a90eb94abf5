//! Named subcomplexes of standard simplices with the decorations their
//! filling arguments impose.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use super::Stage;
use crate::decor::{DecoratedMap, MBSSet};
use crate::error::{Error, Result};
use crate::sset::{CellId, FiniteSSet, SSetMap, SubcomplexKind};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum NamedComplex {
    /// `R(n,k) ⊂ Δ^{n+1}`.
    R(usize, usize),
    /// Conditions a) or c) of `R`.
    L(usize, usize),
    /// `P(n,k) ⊂ Δ^{n+1}`.
    P(usize, usize),
    /// Conditions a) or c) of `P`.
    M(usize, usize),
    /// `P(n,k)` plus the faces skipping `1..=k` and `k+2..=n`.
    TExt(usize, usize),
    /// `S_ext(p,j) ⊂ Δ^p`.
    SExt(usize, usize),
    /// `Δ^m` with an edge glued at vertex `j+1`, inside `Δ^{m+1}`.
    B(usize, usize),
    /// `∂Δ^m` with the same edge.
    DB(usize, usize),
    /// Simplices skipping some vertex outside the list; the collapsed variant when the list contains 0.
    LambdaVec(usize, Vec<usize>),
}

impl fmt::Display for NamedComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NamedComplex::R(a, b) => write!(f, "R({a},{b})"),
            NamedComplex::L(a, b) => write!(f, "L({a},{b})"),
            NamedComplex::P(a, b) => write!(f, "P({a},{b})"),
            NamedComplex::M(a, b) => write!(f, "M({a},{b})"),
            NamedComplex::TExt(a, b) => write!(f, "T_ext({a},{b})"),
            NamedComplex::SExt(a, b) => write!(f, "S_ext({a},{b})"),
            NamedComplex::B(a, b) => write!(f, "B({a},{b})"),
            NamedComplex::DB(a, b) => write!(f, "dB({a},{b})"),
            NamedComplex::LambdaVec(m, v) => {
                let v: Vec<String> = v.iter().map(|i| i.to_string()).collect();
                write!(f, "Lambda_vec({m},[{}])", v.join(","))
            }
        }
    }
}

impl FromStr for NamedComplex {
    type Err = Error;
    fn from_str(s: &str) -> Result<NamedComplex> {
        let bad = || Error::Params(format!("cannot parse named subcomplex `{s}`"));
        let s = s.trim();
        let open = s.find('(').ok_or_else(bad)?;
        let head = &s[..open];
        let body = s[open + 1..].strip_suffix(')').ok_or_else(bad)?;
        let num = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
        if head == "Lambda_vec" {
            let (m, rest) = body.split_once(',').ok_or_else(bad)?;
            let list = rest
                .trim()
                .strip_prefix('[')
                .and_then(|r| r.strip_suffix(']'))
                .ok_or_else(bad)?;
            let v = if list.trim().is_empty() {
                Vec::new()
            } else {
                list.split(',').map(num).collect::<Result<Vec<_>>>()?
            };
            return Ok(NamedComplex::LambdaVec(num(m)?, v));
        }
        let (a, b) = body.split_once(',').ok_or_else(bad)?;
        let (a, b) = (num(a)?, num(b)?);
        Ok(match head {
            "R" => NamedComplex::R(a, b),
            "L" => NamedComplex::L(a, b),
            "P" => NamedComplex::P(a, b),
            "M" => NamedComplex::M(a, b),
            "T_ext" => NamedComplex::TExt(a, b),
            "S_ext" => NamedComplex::SExt(a, b),
            "B" => NamedComplex::B(a, b),
            "dB" => NamedComplex::DB(a, b),
            _ => return Err(bad()),
        })
    }
}

/// A named subcomplex, decorated by restriction from its ambient.
#[derive(Clone, Debug)]
pub struct NamedSubcomplex {
    pub ambient: Arc<MBSSet>,
    pub sub: Arc<MBSSet>,
    pub inclusion: DecoratedMap,
}

impl NamedSubcomplex {
    pub fn stage(&self) -> Stage {
        Stage::image_of(&self.inclusion).expect("inclusions are monomorphisms")
    }
}

/// Vertex set of a cell named by its digits.
pub(crate) fn vertex_set(x: &FiniteSSet, c: CellId) -> BTreeSet<usize> {
    x.name(c).chars().filter_map(|ch| ch.to_digit(10)).map(|d| d as usize).collect()
}

fn skips(j: &BTreeSet<usize>, v: usize) -> bool {
    !j.contains(&v)
}

fn within(j: &BTreeSet<usize>, allowed: &[usize]) -> bool {
    j.iter().all(|v| allowed.contains(v))
}

fn triangles(x: &FiniteSSet, pred: impl Fn(&BTreeSet<usize>) -> bool) -> BTreeSet<CellId> {
    x.cells(2).filter(|&c| pred(&vertex_set(x, c))).collect()
}

fn ambient(
    x: &Arc<FiniteSSet>,
    marked: BTreeSet<CellId>,
    thin: BTreeSet<CellId>,
    lean: BTreeSet<CellId>,
) -> Result<Arc<MBSSet>> {
    Ok(Arc::new(MBSSet::from_ids(x.clone(), marked, thin, lean)?.0))
}

fn build(x: &Arc<MBSSet>, member: impl Fn(&BTreeSet<usize>) -> bool) -> Result<NamedSubcomplex> {
    let u = x.under();
    let seeds: Vec<CellId> = u.all_cells().filter(|&c| member(&vertex_set(u, c))).collect();
    let stage = Stage::restricted(x, seeds);
    let inclusion = stage.realize(x)?;
    Ok(NamedSubcomplex {
        ambient: x.clone(),
        sub: inclusion.source().clone(),
        inclusion,
    })
}

fn params(ok: bool, what: &NamedComplex, why: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Params(format!("{what}: {why}")))
    }
}

/// Membership in `R(n,k)` restricted to conditions a), b) (if `with_b`) and c).
fn r_member(n: usize, k: usize, with_b: bool) -> impl Fn(&BTreeSet<usize>) -> bool {
    move |j| {
        skips(j, k + 1)
            || (with_b && skips(j, n + 1))
            || (j.len() == 3 && (k + 3..=n + 1).any(|t| within(j, &[k + 1, k + 2, t])))
    }
}

fn p_member(n: usize, k: usize, with_b: bool) -> impl Fn(&BTreeSet<usize>) -> bool {
    move |j| {
        skips(j, n + 1)
            || (with_b && skips(j, k + 1) && (1..=n + 1).any(|i| i != k + 1 && skips(j, i)))
            || (k + 3..=n + 1).any(|t| within(j, &[k + 1, k + 2, t]))
    }
}

/// Thin (and lean) triangles inside `[0, k+1]` and the triangles `{k+1, k+2, j}`.
fn rp_scaling(x: &FiniteSSet, n: usize, k: usize, extra: Option<[usize; 3]>) -> BTreeSet<CellId> {
    let lower: Vec<usize> = (0..=k + 1).collect();
    triangles(x, |j| {
        within(j, &lower)
            || (k + 3..=n + 1).any(|t| within(j, &[k + 1, k + 2, t]))
            || extra.is_some_and(|e| within(j, &e))
    })
}

/// Marked `{j+1, j+2}`, lean every triangle through it, thin `{j+1,j+2,j+3}`
/// and, when `j = 0`, `{0,1,2}`.
fn extravaganza(x: &Arc<FiniteSSet>, top: usize, j: usize) -> Result<Arc<MBSSet>> {
    let edge: BTreeSet<usize> = [j + 1, j + 2].into();
    let marked = x.cells(1).filter(|&c| vertex_set(x, c) == edge).collect();
    let lean = triangles(x, |t| edge.is_subset(t));
    let thin = triangles(x, |t| {
        (j + 3 <= top && within(t, &[j + 1, j + 2, j + 3])) || (j == 0 && within(t, &[0, 1, 2]))
    });
    ambient(x, marked, thin, lean)
}

/// Builds a named subcomplex with its ambient.
pub fn named_subcomplex(name: &NamedComplex, cap: usize) -> Result<NamedSubcomplex> {
    let std = |n: usize| -> Result<Arc<FiniteSSet>> { Ok(Arc::new(FiniteSSet::standard(n, cap.max(n))?)) };
    match name {
        NamedComplex::R(n, k) | NamedComplex::L(n, k) => {
            let (n, k) = (*n, *k);
            params(n >= 1 && k < n, name, "needs n >= 1 and 0 <= k < n")?;
            let d = std(n + 1)?;
            let t = rp_scaling(&d, n, k, None);
            let x = ambient(&d, BTreeSet::new(), t.clone(), t)?;
            build(&x, r_member(n, k, matches!(name, NamedComplex::R(..))))
        }
        NamedComplex::P(n, k) | NamedComplex::M(n, k) | NamedComplex::TExt(n, k) => {
            let (n, k) = (*n, *k);
            params(n >= 2 && k >= 1 && k < n, name, "needs 1 <= k < n")?;
            let d = std(n + 1)?;
            let ext = matches!(name, NamedComplex::TExt(..));
            let t = rp_scaling(&d, n, k, ext.then_some([k, k + 1, k + 2]));
            let x = ambient(&d, BTreeSet::new(), t.clone(), t)?;
            let base = p_member(n, k, !matches!(name, NamedComplex::M(..)));
            if ext {
                build(&x, move |j| {
                    base(j) || (1..=k).any(|i| skips(j, i)) || (k + 2..=n).any(|i| skips(j, i))
                })
            } else {
                build(&x, base)
            }
        }
        NamedComplex::SExt(p, j) => {
            let (p, j) = (*p, *j);
            params(p >= 2 && j + 2 <= p, name, "needs j + 2 <= p")?;
            let d = std(p)?;
            let x = extravaganza(&d, p, j)?;
            build(&x, move |s| {
                let missing: Vec<usize> = (0..=p).filter(|v| skips(s, *v)).collect();
                missing.iter().any(|&v| v != j + 1 && v != j + 2)
                    || (skips(s, j + 1) && skips(s, j + 2))
            })
        }
        NamedComplex::B(m, j) | NamedComplex::DB(m, j) => {
            let (m, j) = (*m, *j);
            params(m >= 1 && j < m, name, "needs 0 <= j < m")?;
            let d = std(m + 1)?;
            let x = extravaganza(&d, m + 1, j)?;
            let boundary = matches!(name, NamedComplex::DB(..));
            let edge = [j + 1, j + 2];
            build(&x, move |s| {
                let in_face = skips(s, j + 1) && !(boundary && s.len() == m + 1);
                in_face || within(s, &edge)
            })
        }
        NamedComplex::LambdaVec(m, v) => {
            let m = *m;
            let mut sorted = v.clone();
            sorted.sort_unstable();
            sorted.dedup();
            params(m >= 2 && !sorted.is_empty(), name, "needs m >= 2 and a nonempty list")?;
            params(
                sorted.windows(2).all(|w| w[1] > w[0] + 1),
                name,
                "indices must be non-consecutive",
            )?;
            params(*sorted.last().unwrap() < m, name, "indices must be below m")?;
            let collapsed = sorted[0] == 0;
            params(
                !collapsed || sorted.get(1).is_none_or(|&i| i > 1),
                name,
                "with 0 in the list the other indices must exceed 1",
            )?;
            let d = std(m)?;
            let x = if collapsed {
                let (e, incl) = d.subcomplex(&SubcomplexKind::Span(vec!["01".into()]))?;
                let pt = std(0)?;
                let v0 = pt.get("0")?;
                let c = SSetMap::from_fn(e, pt, |c| crate::sset::Simplex::constant(v0, c.dim()))?;
                FiniteSSet::pushout(&incl, &c)?.pushout
            } else {
                d
            };
            let inner: Vec<usize> = sorted.iter().copied().filter(|&i| i != 0).collect();
            let thin = triangles(&x, |t| inner.iter().any(|&i| within(t, &[i - 1, i, i + 1])) && t.len() == 3);
            let mut lean = thin.clone();
            if collapsed {
                lean.extend(triangles(&x, |t| t.len() == 3 && within(t, &[0, 1, m])));
            }
            let amb = ambient(&x, BTreeSet::new(), thin, lean)?;
            // quotient cells keep the name of their unique nondegenerate preimage
            build(&amb, move |s| (0..=m).any(|j| !sorted.contains(&j) && skips(s, j)))
        }
    }
}
