//! Marked biscaled simplicial sets: finite simplicial sets, decorations,
//! generating maps, lifting problems, derivations and fibration analysis.

pub mod analyze;
pub mod decor;
pub mod derivation;
pub mod error;
pub mod generators;
pub mod lifting;
pub mod pushout_product;
pub mod sset;

pub use decor::{Deco, DecoratedMap, MBSSet, ScaledSSet};
pub use error::{Error, Result};
pub use sset::{CellId, DegeneracyWord, FiniteSSet, SSetBuilder, SSetMap, Simplex};
