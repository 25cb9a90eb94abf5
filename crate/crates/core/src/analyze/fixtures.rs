//! Curated maps for the analysis sweeps: identities, projections with fibrant
//! fibres, generator targets over their bases, and mutants of each.

use std::sync::Arc;

use crate::decor::{Deco, DecoratedMap, MBSSet};
use crate::error::Result;
use crate::generators::{instantiate, Family, GeneratorId, KanFixture};
use crate::sset::{CellId, FiniteSSet, SSetMap, Simplex};

#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: String,
    pub p: DecoratedMap,
}

fn point(cap: usize) -> Result<Arc<MBSSet>> {
    Ok(Arc::new(MBSSet::sharp(Arc::new(FiniteSSet::standard(0, cap)?))))
}

/// The unique map to the sharp point.
pub fn to_point(x: Arc<MBSSet>, cap: usize) -> Result<DecoratedMap> {
    let pt = point(cap)?;
    let m = SSetMap::from_fn(x.under().clone(), pt.under().clone(), |c| {
        Simplex::constant(CellId::new(0, 0), c.dim())
    })?;
    DecoratedMap::new(m, x, pt)
}

fn decorate(x: &Arc<FiniteSSet>, marked: Deco, thin: Deco, lean: Deco) -> Result<Arc<MBSSet>> {
    Ok(Arc::new(MBSSet::decorate(x.clone(), &marked, &thin, &lean)?.0))
}

fn projection(fibre: &Arc<MBSSet>, base: &Arc<MBSSet>) -> Result<DecoratedMap> {
    let (prod, pr) = MBSSet::product(fibre, base)?;
    DecoratedMap::new(pr.proj2, prod, base.clone())
}

/// Generator target over the sharp simplex of the same shape (identity underneath).
fn over_sharp(id: &GeneratorId, cap: usize) -> Result<DecoratedMap> {
    let g = instantiate(id, cap)?;
    let t = g.target().clone();
    let base = Arc::new(MBSSet::sharp(t.under().clone()));
    DecoratedMap::new(SSetMap::identity(t.under().clone()), t, base)
}

pub fn fixture_suite(cap: usize) -> Result<Vec<Fixture>> {
    let j = KanFixture::load("J", cap)?.complex;
    let d1 = Arc::new(FiniteSSet::standard(1, cap)?);
    let (flat, sharp) = (Deco::Flat, Deco::Sharp);

    let j_sharp = decorate(&j, sharp.clone(), sharp.clone(), sharp.clone())?;
    let j_flat = decorate(&j, flat.clone(), sharp.clone(), sharp.clone())?;
    let j_unthinned = {
        let rest: Vec<String> = j.cells(2).skip(1).map(|c| j.name(c).to_string()).collect();
        decorate(&j, sharp.clone(), Deco::Named(rest), sharp.clone())?
    };
    let d1_flat = decorate(&d1, flat.clone(), sharp.clone(), sharp.clone())?;
    let d1_sharp = decorate(&d1, sharp.clone(), sharp.clone(), sharp.clone())?;

    let proj_j = projection(&j_sharp, &d1_sharp)?;
    let proj_j_unmarked = {
        let x = proj_j.source();
        let drop = x
            .marked()
            .iter()
            .copied()
            .find(|&c| proj_j.map().image_of_cell(c).is_degenerate())
            .expect("J has nondegenerate edges");
        let mut marked = x.marked().clone();
        marked.remove(&drop);
        let x2 = Arc::new((**x).clone().with_marked(marked));
        DecoratedMap::new(proj_j.map().clone(), x2, proj_j.target().clone())?
    };

    let mut out = vec![
        ("point", DecoratedMap::identity(point(cap)?)),
        ("J/point", to_point(j_sharp, cap)?),
        ("J-flat/point", to_point(j_flat, cap)?),
        ("J-unthinned/point", to_point(j_unthinned, cap)?),
        ("D1-flat/point", to_point(d1_flat.clone(), cap)?),
        ("D1-sharp/point", to_point(d1_sharp.clone(), cap)?),
        ("id/D1-sharp", DecoratedMap::identity(d1_sharp.clone())),
        ("JxD1/D1", proj_j),
        ("JxD1-unmarked/D1", proj_j_unmarked),
        ("D1xD1/D1", projection(&d1_flat, &d1_sharp)?),
        ("A4:2-target/D2", over_sharp(&GeneratorId::new(Family::A4, &[2]), cap)?),
        ("A3:2-target/quotient", over_sharp(&GeneratorId::new(Family::A3, &[2]), cap)?),
    ];
    for id in [GeneratorId::new(Family::A4, &[2]), GeneratorId::new(Family::A3, &[2])] {
        let t = instantiate(&id, cap)?.target().clone();
        let name = if id.family == Family::A4 { "A4:2-target/point" } else { "A3:2-target/point" };
        out.push((name, to_point(t, cap)?));
    }
    // the collapsed 0-horn: its face {0,1,3} admits no filler
    let src = instantiate(&GeneratorId::new(Family::A3, &[3]), cap)?.source().clone();
    out.push(("A3:3-source/point", to_point(src, cap)?));
    Ok(out
        .into_iter()
        .map(|(name, p)| Fixture {
            name: name.to_string(),
            p,
        })
        .collect())
}
