//! The generating anodyne maps and cofibrations as concrete decorated maps.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::decor::{Deco, DecoratedMap, MBSSet};
use crate::error::{Error, Result};
use crate::sset::{FiniteSSet, SSetBuilder, SSetMap, Simplex, SubcomplexKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize, serde::Deserialize)]
pub enum Family {
    SCi,
    SCii,
    SCiii,
    A1,
    A2,
    A3,
    A4,
    A5,
    S1,
    S2,
    S3,
    S4,
    S5,
    E,
    C1,
    C2,
    C3,
    C4,
}

impl Family {
    pub const ALL: [Family; 18] = [
        Family::SCi,
        Family::SCii,
        Family::SCiii,
        Family::A1,
        Family::A2,
        Family::A3,
        Family::A4,
        Family::A5,
        Family::S1,
        Family::S2,
        Family::S3,
        Family::S4,
        Family::S5,
        Family::E,
        Family::C1,
        Family::C2,
        Family::C3,
        Family::C4,
    ];

    /// The anodyne families, in their printed order.
    pub const ANODYNE: [Family; 11] = [
        Family::A1,
        Family::A2,
        Family::A3,
        Family::A4,
        Family::A5,
        Family::S1,
        Family::S2,
        Family::S3,
        Family::S4,
        Family::S5,
        Family::E,
    ];

    pub const SCALED: [Family; 3] = [Family::SCi, Family::SCii, Family::SCiii];

    pub const COFIBRATIONS: [Family; 4] = [Family::C1, Family::C2, Family::C3, Family::C4];

    pub fn as_str(self) -> &'static str {
        match self {
            Family::SCi => "SCi",
            Family::SCii => "SCii",
            Family::SCiii => "SCiii",
            Family::A1 => "A1",
            Family::A2 => "A2",
            Family::A3 => "A3",
            Family::A4 => "A4",
            Family::A5 => "A5",
            Family::S1 => "S1",
            Family::S2 => "S2",
            Family::S3 => "S3",
            Family::S4 => "S4",
            Family::S5 => "S5",
            Family::E => "E",
            Family::C1 => "C1",
            Family::C2 => "C2",
            Family::C3 => "C3",
            Family::C4 => "C4",
        }
    }

    /// Number of integer parameters.
    fn arity(self) -> usize {
        match self {
            Family::SCi | Family::A1 => 2,
            Family::SCiii | Family::A3 | Family::A4 | Family::S3 | Family::C1 => 1,
            _ => 0,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Family> {
        Family::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| Error::GeneratorSyntax(s.to_string()))
    }
}

/// A generator family with its parameters, written `A1:3:1`, `E:J`, `C1:0`, `A2`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GeneratorId {
    pub family: Family,
    pub params: Vec<usize>,
    /// Kan fixture name for family E.
    pub fixture: Option<String>,
}

impl GeneratorId {
    pub fn new(family: Family, params: &[usize]) -> GeneratorId {
        GeneratorId {
            family,
            params: params.to_vec(),
            fixture: None,
        }
    }

    pub fn kan(fixture: &str) -> GeneratorId {
        GeneratorId {
            family: Family::E,
            params: Vec::new(),
            fixture: Some(fixture.to_string()),
        }
    }

    /// Checks the printed parameter ranges.
    pub fn validate(&self) -> Result<()> {
        let bad = |why: &str| Err(Error::GeneratorParams(format!("{self}: {why}")));
        if self.family == Family::E {
            if self.fixture.is_none() || !self.params.is_empty() {
                return bad("expects a Kan fixture name");
            }
            return Ok(());
        }
        if self.fixture.is_some() || self.params.len() != self.family.arity() {
            return bad(&format!("expects {} integer parameters", self.family.arity()));
        }
        let p = &self.params;
        match self.family {
            Family::SCi | Family::A1 if p[0] < 2 || p[1] == 0 || p[1] >= p[0] => {
                bad("needs n >= 2 and 0 < i < n")
            }
            Family::A3 | Family::A4 if p[0] < 2 => bad("needs n >= 2"),
            Family::SCiii if p[0] < 3 => bad("needs n >= 3"),
            Family::S3 if p[0] == 0 || p[0] >= 3 => bad("needs 0 < i < 3"),
            _ => Ok(()),
        }
    }

    /// Largest simplex dimension the generator involves.
    pub fn dimension(&self) -> usize {
        match self.family {
            Family::SCi | Family::A1 | Family::SCiii | Family::A3 | Family::A4 | Family::C1 => {
                self.params[0]
            }
            Family::SCii | Family::A2 => 4,
            Family::S3 | Family::S4 | Family::S5 => 3,
            Family::S1 | Family::S2 | Family::C3 | Family::C4 => 2,
            Family::A5 | Family::C2 => 1,
            Family::E => 0,
        }
    }
}

impl fmt::Display for GeneratorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.family)?;
        for p in &self.params {
            write!(f, ":{p}")?;
        }
        if let Some(k) = &self.fixture {
            write!(f, ":{k}")?;
        }
        Ok(())
    }
}

impl FromStr for GeneratorId {
    type Err = Error;
    fn from_str(s: &str) -> Result<GeneratorId> {
        let syntax = || Error::GeneratorSyntax(s.to_string());
        let mut parts = s.split(':');
        let family: Family = parts.next().ok_or_else(syntax)?.parse().map_err(|_| syntax())?;
        let rest: Vec<&str> = parts.collect();
        let id = if family == Family::E {
            match rest.as_slice() {
                [k] if !k.is_empty() => GeneratorId::kan(k),
                _ => return Err(syntax()),
            }
        } else {
            let params = rest
                .iter()
                .map(|p| p.parse::<usize>().map_err(|_| syntax()))
                .collect::<Result<Vec<_>>>()?;
            GeneratorId::new(family, &params)
        };
        id.validate()?;
        Ok(id)
    }
}

impl Serialize for GeneratorId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for GeneratorId {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// An instantiated generator.
#[derive(Clone, Debug)]
pub struct Generator {
    pub id: GeneratorId,
    pub map: DecoratedMap,
}

impl Generator {
    pub fn source(&self) -> &Arc<MBSSet> {
        self.map.source()
    }

    pub fn target(&self) -> &Arc<MBSSet> {
        self.map.target()
    }
}

/// Names of the configured Kan fixtures for family E.
pub const KAN_FIXTURES: [&str; 2] = ["D0", "J"];

/// A finite stand-in for a Kan complex, truncated at the cap.
#[derive(Clone, Debug)]
pub struct KanFixture {
    pub name: String,
    pub complex: Arc<FiniteSSet>,
}

impl KanFixture {
    pub fn load(name: &str, cap: usize) -> Result<KanFixture> {
        let complex = match name {
            "D0" => FiniteSSet::standard(0, cap)?,
            "J" => codiscrete_nerve(&["x", "y"], cap)?,
            _ => return Err(Error::UnknownKanFixture(name.to_string())),
        };
        Ok(KanFixture {
            name: name.to_string(),
            complex: Arc::new(complex),
        })
    }
}

/// Horn-filling report for a Kan fixture.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HornCertificate {
    pub fixture: String,
    pub max_dim: usize,
    /// `(n, i, horns, filled)` for each horn `Λ^n_i`.
    pub horns: Vec<(usize, usize, usize, usize)>,
    pub complete: bool,
}

impl KanFixture {
    /// Checks that every horn `Λ^n_i -> K` with `1 <= n <= max_dim` has a filler.
    pub fn horn_certificate(&self, max_dim: usize, budget: u64) -> Result<HornCertificate> {
        use crate::lifting::{Extension, SearchStats, TargetIndex};
        let k = MBSSet::flat(self.complex.clone());
        let index = TargetIndex::new(&self.complex, max_dim);
        let mut left = budget;
        let mut stats = SearchStats::default();
        let mut horns = Vec::new();
        let out_of_budget = || Error::Params(format!("horn certificate for {} ran out of budget", self.name));
        for n in 1..=max_dim {
            let d = delta(n, self.complex.cap().max(n))?;
            for i in 0..=n {
                let (h, incl) = d.subcomplex(&SubcomplexKind::Horn(i))?;
                let hm = MBSSet::flat(h);
                let maps = Extension::new(&hm, &k, &index)
                    .all(&mut left, &mut stats)
                    .map_err(|_| out_of_budget())?;
                let dm = MBSSet::flat(d.clone());
                let mut filled = 0;
                for m in &maps {
                    let mut ext = Extension::new(&dm, &k, &index);
                    for c in incl.source().all_cells() {
                        ext.fix(incl.image_of_cell(c).cell, m[c.dim()][c.idx as usize].clone());
                    }
                    if ext.first(&mut left, &mut stats).map_err(|_| out_of_budget())?.is_some() {
                        filled += 1;
                    }
                }
                horns.push((n, i, maps.len(), filled));
            }
        }
        Ok(HornCertificate {
            fixture: self.name.clone(),
            max_dim,
            complete: horns.iter().all(|h| h.2 == h.3),
            horns,
        })
    }
}

/// Nerve of the groupoid with one isomorphism between each pair of objects,
/// truncated at `cap`. Its nondegenerate `k`-simplices are the vertex sequences
/// without consecutive repeats.
pub fn codiscrete_nerve(objects: &[&str], cap: usize) -> Result<FiniteSSet> {
    let mut b = SSetBuilder::new(cap).vertex_determined(true);
    let name = |seq: &[usize]| -> String { seq.iter().map(|&v| objects[v]).collect() };
    let mut level: Vec<Vec<usize>> = (0..objects.len()).map(|v| vec![v]).collect();
    for k in 0..=cap {
        for seq in &level {
            let faces = if k == 0 {
                Vec::new()
            } else {
                (0..=k)
                    .map(|i| {
                        let mut f = seq.clone();
                        f.remove(i);
                        // collapse consecutive repeats into a degeneracy
                        let mut base = vec![f[0]];
                        let mut surj = crate::sset::ops::Mono::new();
                        surj.push(0);
                        for &v in &f[1..] {
                            if *base.last().unwrap() != v {
                                base.push(v);
                            }
                            surj.push((base.len() - 1) as u8);
                        }
                        Simplex {
                            cell: b.lookup(&name(&base)).expect("lower cells exist"),
                            surj,
                        }
                    })
                    .collect()
            };
            b.add(name(seq), faces)?;
        }
        level = level
            .iter()
            .flat_map(|seq| {
                (0..objects.len())
                    .filter(|&v| v != *seq.last().unwrap())
                    .map(|v| {
                        let mut s = seq.clone();
                        s.push(v);
                        s
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
    }
    b.finish()
}

fn delta(n: usize, cap: usize) -> Result<Arc<FiniteSSet>> {
    Ok(Arc::new(FiniteSSet::standard(n, cap)?))
}

fn digits(vs: &[usize]) -> String {
    crate::sset::subset_name(vs, 9)
}

/// `Δ^n` with the edge `01` collapsed, together with the quotient map.
fn collapse_01(
    x: &Arc<FiniteSSet>,
    cap: usize,
) -> Result<(Arc<FiniteSSet>, SSetMap)> {
    let (e, incl) = x.subcomplex(&SubcomplexKind::Span(vec!["01".into()]))?;
    let pt = delta(0, cap)?;
    let v = pt.lookup("0").unwrap();
    let collapse = SSetMap::from_fn(e, pt, |c| Simplex::constant(v, c.dim()))?;
    let po = FiniteSSet::pushout(&incl, &collapse)?;
    Ok((po.pushout, po.in_b))
}

/// Triangles of `Δ^3`-like sets whose names are faces of the top cell other than `skip`.
fn all_triangles_but(x: &FiniteSSet, top: &[usize], skip: usize) -> Deco {
    let mut keep: Vec<String> = Vec::new();
    for omit in 0..top.len() {
        if omit == skip {
            continue;
        }
        let face: Vec<usize> = top.iter().enumerate().filter(|&(j, _)| j != omit).map(|(_, &v)| v).collect();
        let name = digits(&face);
        if x.lookup(&name).is_some() {
            keep.push(name);
        }
    }
    Deco::Named(keep)
}

fn decorated(
    x: &Arc<FiniteSSet>,
    marked: &Deco,
    thin: &Deco,
    lean: &Deco,
) -> Result<Arc<MBSSet>> {
    Ok(Arc::new(MBSSet::decorate_lenient(x.clone(), marked, thin, lean)?))
}

/// A decorated map between sets whose cells correspond by name.
fn named_map(source: Arc<MBSSet>, target: Arc<MBSSet>) -> Result<DecoratedMap> {
    let m = SSetMap::by_name(source.under().clone(), target.under().clone())?;
    DecoratedMap::new(m, source, target)
}

/// Builds the decorated map for a generator id at the given cap.
pub fn instantiate(id: &GeneratorId, cap: usize) -> Result<Generator> {
    id.validate()?;
    if id.dimension() > cap {
        return Err(Error::DimensionCap {
            dim: id.dimension(),
            cap,
        });
    }
    let p = &id.params;
    let flat = Deco::Flat;
    let sharp = Deco::Sharp;
    let map = match id.family {
        Family::SCi | Family::A1 => {
            let (n, i) = (p[0], p[1]);
            let d = delta(n, cap)?;
            let (h, _) = d.subcomplex(&SubcomplexKind::Horn(i))?;
            let t = Deco::Named(vec![digits(&[i - 1, i, i + 1])]);
            named_map(decorated(&h, &flat, &t, &t)?, decorated(&d, &flat, &t, &t)?)?
        }
        Family::SCii | Family::A2 => {
            let d = delta(4, cap)?;
            let t = ["024", "123", "013", "134", "012"];
            let t_src = Deco::named(t);
            let t_dst = Deco::named(t.iter().chain(&["034", "014"]).copied());
            named_map(
                decorated(&d, &flat, &t_src, &t_src)?,
                decorated(&d, &flat, &t_dst, &t_dst)?,
            )?
        }
        Family::SCiii | Family::A3 => {
            let n = p[0];
            let d = delta(n, cap)?;
            let (h, _) = d.subcomplex(&SubcomplexKind::Horn(0))?;
            let (qh, _) = collapse_01(&h, cap)?;
            let (qd, _) = collapse_01(&d, cap)?;
            let l = Deco::Named(vec![digits(&[0, 1, n])]);
            // the scaled version has a single scaling: thin = lean
            let t = if id.family == Family::SCiii { l.clone() } else { Deco::Flat };
            named_map(decorated(&qh, &flat, &t, &l)?, decorated(&qd, &flat, &t, &l)?)?
        }
        Family::A4 => {
            let n = p[0];
            let d = delta(n, cap)?;
            let (h, _) = d.subcomplex(&SubcomplexKind::Horn(n))?;
            let m = Deco::Named(vec![digits(&[n - 1, n])]);
            let l = Deco::Named(vec![digits(&[0, n - 1, n])]);
            named_map(decorated(&h, &m, &flat, &l)?, decorated(&d, &m, &flat, &l)?)?
        }
        Family::A5 => {
            let d = delta(1, cap)?;
            let (v, _) = d.subcomplex(&SubcomplexKind::Span(vec!["1".into()]))?;
            named_map(decorated(&v, &sharp, &sharp, &sharp)?, decorated(&d, &sharp, &sharp, &sharp)?)?
        }
        Family::S1 => {
            let d = delta(2, cap)?;
            named_map(
                decorated(&d, &Deco::named(["01", "12"]), &sharp, &sharp)?,
                decorated(&d, &sharp, &sharp, &sharp)?,
            )?
        }
        Family::S2 | Family::C4 => {
            let d = delta(2, cap)?;
            named_map(decorated(&d, &flat, &flat, &sharp)?, decorated(&d, &flat, &sharp, &sharp)?)?
        }
        Family::S3 => {
            let i = p[0];
            let d = delta(3, cap)?;
            let t = Deco::Named(vec![digits(&[i - 1, i, i + 1])]);
            let u = all_triangles_but(&d, &[0, 1, 2, 3], i);
            named_map(decorated(&d, &flat, &t, &u)?, decorated(&d, &flat, &t, &sharp)?)?
        }
        Family::S4 => {
            let d = delta(3, cap)?;
            let (q, _) = collapse_01(&d, cap)?;
            let u = all_triangles_but(&q, &[0, 1, 2, 3], 0);
            named_map(decorated(&q, &flat, &flat, &u)?, decorated(&q, &flat, &flat, &sharp)?)?
        }
        Family::S5 => {
            let d = delta(3, cap)?;
            let m = Deco::named(["23"]);
            let u = all_triangles_but(&d, &[0, 1, 2, 3], 3);
            named_map(decorated(&d, &m, &flat, &u)?, decorated(&d, &m, &flat, &sharp)?)?
        }
        Family::E => {
            let k = KanFixture::load(id.fixture.as_deref().unwrap(), cap)?;
            named_map(
                decorated(&k.complex, &flat, &sharp, &sharp)?,
                decorated(&k.complex, &sharp, &sharp, &sharp)?,
            )?
        }
        Family::C1 => {
            let n = p[0];
            let d = delta(n, cap)?;
            let (b, _) = if n == 0 {
                d.sub_on(&Default::default())?
            } else {
                d.subcomplex(&SubcomplexKind::Boundary)?
            };
            named_map(decorated(&b, &flat, &flat, &flat)?, decorated(&d, &flat, &flat, &flat)?)?
        }
        Family::C2 => {
            let d = delta(1, cap)?;
            named_map(decorated(&d, &flat, &flat, &flat)?, decorated(&d, &sharp, &flat, &flat)?)?
        }
        Family::C3 => {
            let d = delta(2, cap)?;
            named_map(decorated(&d, &flat, &flat, &flat)?, decorated(&d, &flat, &flat, &sharp)?)?
        }
    };
    debug_assert!(map.is_mono());
    Ok(Generator {
        id: id.clone(),
        map,
    })
}

/// All ids of a family with dimension at most `max_n`.
pub fn list_generators(family: Family, max_n: usize) -> Vec<GeneratorId> {
    let mut out = Vec::new();
    match family {
        Family::SCi | Family::A1 => {
            for n in 2..=max_n {
                for i in 1..n {
                    out.push(GeneratorId::new(family, &[n, i]));
                }
            }
        }
        Family::A3 | Family::A4 => {
            out.extend((2..=max_n).map(|n| GeneratorId::new(family, &[n])));
        }
        Family::SCiii => out.extend((3..=max_n).map(|n| GeneratorId::new(family, &[n]))),
        Family::C1 => out.extend((0..=max_n).map(|n| GeneratorId::new(family, &[n]))),
        Family::S3 => {
            if max_n >= 3 {
                out.extend((1..3).map(|i| GeneratorId::new(family, &[i])));
            }
        }
        Family::E => out.extend(KAN_FIXTURES.iter().map(|k| GeneratorId::kan(k))),
        _ => {
            let id = GeneratorId::new(family, &[]);
            if id.dimension() <= max_n {
                out.push(id);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_round_trip() {
        for s in ["A1:3:1", "E:J", "C1:0", "A2", "S3:2", "SCiii:3"] {
            let id: GeneratorId = s.parse().unwrap();
            assert_eq!(id.to_string(), s);
        }
        assert!("A1:3:3".parse::<GeneratorId>().is_err());
        assert!("SCiii:2".parse::<GeneratorId>().is_err());
        assert!("A3:2".parse::<GeneratorId>().is_ok());
        assert!("Q7".parse::<GeneratorId>().is_err());
    }

    #[test]
    fn j_is_two_cells_per_dimension() {
        let j = KanFixture::load("J", 4).unwrap();
        assert_eq!(j.complex.census(), vec![2; 5]);
    }

    #[test]
    fn fixtures_fill_horns_below_the_cap() {
        for name in KAN_FIXTURES {
            let k = KanFixture::load(name, 5).unwrap();
            let cert = k.horn_certificate(4, 10_000_000).unwrap();
            assert!(cert.complete, "{cert:?}");
        }
        // Δ^1 is not Kan: the horn Λ^2_0 sending 01 to 01 and 02 to 00 has no filler
        let not_kan = KanFixture {
            name: "D1".into(),
            complex: delta(1, 3).unwrap(),
        };
        assert!(!not_kan.horn_certificate(2, 1_000_000).unwrap().complete);
    }
}
