//! Turning-point strings indexing the top simplices of `Δ^n × Δ^m`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sset::{FiniteSSet, ProductResult, SSetMap, Simplex};

/// Pairs `(a, b)` with `a_{i-1} < a_i < n` and `0 < b_{i-1} < b_i <= m`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ZString {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
}

impl ZString {
    pub fn new(a: Vec<usize>, b: Vec<usize>) -> ZString {
        ZString { a, b }
    }

    /// From the interleaved form `(a1, b1, a2, b2, ...)`.
    pub fn interleaved(v: &[usize]) -> Result<ZString> {
        if v.len() % 2 != 0 {
            return Err(Error::ZString(format!("odd length {}", v.len())));
        }
        Ok(ZString {
            a: v.iter().step_by(2).copied().collect(),
            b: v.iter().skip(1).step_by(2).copied().collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    pub fn validate(&self, n: usize, m: usize) -> Result<()> {
        let bad = |why: &str| Err(Error::ZString(format!("{self} for ({n},{m}): {why}")));
        if self.a.len() != self.b.len() {
            return bad("vectors of different length");
        }
        for i in 0..self.a.len() {
            if self.a[i] >= n || (i > 0 && self.a[i - 1] >= self.a[i]) {
                return bad("a must increase strictly and stay below n");
            }
            let prev = if i == 0 { 0 } else { self.b[i - 1] };
            if self.b[i] <= prev || self.b[i] > m {
                return bad("b must increase strictly from above 0 and stay at most m");
            }
        }
        Ok(())
    }

    fn a_at(&self, j: usize, n: usize) -> usize {
        self.a.get(j).copied().unwrap_or(n)
    }

    fn b_at(&self, j: usize, m: usize) -> usize {
        self.b.get(j).copied().unwrap_or(m)
    }
}

impl fmt::Display for ZString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("()");
        }
        let parts: Vec<String> = self
            .a
            .iter()
            .zip(&self.b)
            .flat_map(|(a, b)| [a.to_string(), b.to_string()])
            .collect();
        write!(f, "({})", parts.join(","))
    }
}

impl FromStr for ZString {
    type Err = Error;
    fn from_str(s: &str) -> Result<ZString> {
        let inner = s
            .trim()
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| Error::ZString(format!("`{s}` is not parenthesized")))?;
        if inner.trim().is_empty() {
            return Ok(ZString::default());
        }
        let v = inner
            .split(',')
            .map(|p| p.trim().parse::<usize>().map_err(|_| Error::ZString(format!("bad entry in `{s}`"))))
            .collect::<Result<Vec<_>>>()?;
        ZString::interleaved(&v)
    }
}

/// The lexicographic order in which a larger `a` entry or a smaller `b`
/// entry makes a string smaller; missing entries read as `a = n`, `b = m`.
pub fn compare(n: usize, m: usize, x: &ZString, y: &ZString) -> Ordering {
    let k = x.len().max(y.len());
    for j in 0..=k {
        let (xa, ya) = (x.a_at(j, n), y.a_at(j, n));
        if xa != ya {
            return ya.cmp(&xa);
        }
        let (xb, yb) = (x.b_at(j, m), y.b_at(j, m));
        if xb != yb {
            return xb.cmp(&yb);
        }
    }
    Ordering::Equal
}

fn increasing(below: usize, from: usize, len: usize) -> Vec<Vec<usize>> {
    if len == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in from..below {
        for mut rest in increasing(below, first + 1, len - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// All strings for `(n, m)`, sorted.
pub fn z_strings(n: usize, m: usize) -> Vec<ZString> {
    let mut out = Vec::new();
    for k in 0..=n.min(m) {
        for a in increasing(n, 0, k) {
            for b in increasing(m + 1, 1, k) {
                out.push(ZString::new(a.clone(), b));
            }
        }
    }
    out.sort_by(|x, y| compare(n, m, x, y));
    out
}

/// The staircase `[n+m] -> [n] × [m]` turning at the points of `z`.
pub fn path_vertices(n: usize, m: usize, z: &ZString) -> Result<Vec<(usize, usize)>> {
    z.validate(n, m)?;
    let k = z.len();
    let a = |r: usize| if r == k + 1 { n } else { z.a[r - 1] };
    let b = |r: usize| match r {
        0 => 0,
        r if r == k + 1 => m,
        r => z.b[r - 1],
    };
    let mut out = Vec::with_capacity(n + m + 1);
    for l in 0..=n + m {
        let v = if l <= a(1) {
            (l, 0)
        } else {
            (1..=k + 1)
                .find_map(|r| {
                    if a(r) + b(r - 1) < l && l <= a(r) + b(r) {
                        Some((a(r), l - a(r)))
                    } else if r <= k && a(r) + b(r) < l && l <= a(r + 1) + b(r) {
                        Some((l - b(r), b(r)))
                    } else {
                        None
                    }
                })
                .ok_or_else(|| Error::ZString(format!("{z}: position {l} is not covered")))?
        };
        out.push(v);
    }
    let steps_ok = out
        .windows(2)
        .all(|w| (w[1].0 == w[0].0 + 1 && w[1].1 == w[0].1) || (w[1].0 == w[0].0 && w[1].1 == w[0].1 + 1));
    if !steps_ok || out.last() != Some(&(n, m)) {
        return Err(Error::ZString(format!("{z}: formula does not give a lattice path")));
    }
    Ok(out)
}

/// The simplex of a product with the given vertex path, where the factors are
/// sets with a single top cell whose vertices are numbered in order.
pub fn product_path(prod: &ProductResult, path: &[(usize, usize)]) -> Option<Simplex> {
    let x = prod.proj1.target();
    let y = prod.proj2.target();
    let along = |s: &FiniteSSet, coords: Vec<u8>| {
        let top = crate::sset::CellId::new(s.dim(), 0);
        s.pull(&Simplex::cell(top), &coords)
    };
    let a = along(x, path.iter().map(|p| p.0 as u8).collect());
    let c = along(y, path.iter().map(|p| p.1 as u8).collect());
    FiniteSSet::product_simplex(prod, &a, &c)
}

/// The path simplex as a map `Δ^{n+m} -> Δ^n × Δ^m`.
pub fn path_simplex(n: usize, m: usize, z: &ZString) -> Result<SSetMap> {
    let path = path_vertices(n, m, z)?;
    let cap = (n + m).max(1);
    let dn = Arc::new(FiniteSSet::standard(n, cap)?);
    let dm = Arc::new(FiniteSSet::standard(m, cap)?);
    let prod = FiniteSSet::product(&dn, &dm)?;
    let s = product_path(&prod, &path).ok_or_else(|| Error::ZString(format!("{z}: no such simplex")))?;
    if s.is_degenerate() {
        return Err(Error::ZString(format!("{z}: path simplex is degenerate")));
    }
    let top = Arc::new(FiniteSSet::standard(n + m, cap)?);
    super::shape_map(&top, &prod.product, &s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(s: &str) -> ZString {
        s.parse().unwrap()
    }

    #[test]
    fn printed_orderings() {
        assert_eq!(compare(4, 4, &z("(0,1,3,2)"), &z("(0,1,2,2)")), Ordering::Less);
        assert_eq!(compare(4, 4, &z("(0,1,2,2)"), &z("(0,2,1,4)")), Ordering::Less);
        assert_eq!(compare(4, 3, &z("(1,2)"), &z("(0,1,2,3)")), Ordering::Less);
    }

    #[test]
    fn small_list() {
        assert_eq!(z_strings(1, 2), vec![z("()"), z("(0,1)"), z("(0,2)")]);
    }

    #[test]
    fn staircases() {
        assert_eq!(path_vertices(1, 2, &z("()")).unwrap(), vec![(0, 0), (1, 0), (1, 1), (1, 2)]);
        assert_eq!(path_vertices(1, 2, &z("(0,1)")).unwrap(), vec![(0, 0), (0, 1), (1, 1), (1, 2)]);
    }
}
