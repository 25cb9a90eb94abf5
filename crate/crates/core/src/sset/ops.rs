//! Monotone maps between ordinals `[m] -> [n]`, stored as value vectors.
//!
//! A simplicial operator acting on an `n`-simplex is a monotone map
//! `alpha: [m] -> [n]`; the result is an `m`-simplex. Surjections are the
//! degeneracy part, injections the face part.

use smallvec::SmallVec;

/// Values of a monotone map `[len-1] -> [?]`.
pub type Mono = SmallVec<[u8; 8]>;

pub fn identity(n: usize) -> Mono {
    (0..=n as u8).collect()
}

pub fn is_identity(alpha: &[u8]) -> bool {
    alpha.iter().enumerate().all(|(i, &v)| v as usize == i)
}

/// `(outer ∘ inner)(i) = outer(inner(i))`.
pub fn compose(outer: &[u8], inner: &[u8]) -> Mono {
    inner.iter().map(|&i| outer[i as usize]).collect()
}

/// Splits a monotone map into `(epi, image)` with `alpha = image ∘ epi`.
pub fn epi_mono(alpha: &[u8]) -> (Mono, Mono) {
    let mut image: Mono = SmallVec::new();
    let mut epi: Mono = SmallVec::new();
    for &v in alpha {
        if image.last() != Some(&v) {
            image.push(v);
        }
        epi.push((image.len() - 1) as u8);
    }
    (epi, image)
}

/// Coface `δ_i: [n-1] -> [n]` skipping `i`.
pub fn coface(n: usize, i: usize) -> Mono {
    (0..=n as u8).filter(|&v| v as usize != i).collect()
}

/// Codegeneracy `σ_j: [n+1] -> [n]` hitting `j` twice.
pub fn codegeneracy(n: usize, j: usize) -> Mono {
    (0..=n as u8 + 1)
        .map(|v| if v as usize > j { v - 1 } else { v })
        .collect()
}

/// The inclusion `[len-1] -> [n]` with the given (strictly increasing) image.
pub fn inclusion(vertices: &[usize]) -> Mono {
    vertices.iter().map(|&v| v as u8).collect()
}

/// All monotone surjections `[n] ->> [k]` in lexicographic order.
pub fn surjections(n: usize, k: usize) -> Vec<Mono> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    // choose the k positions p in 1..=n where the value steps up
    let mut steps: Vec<usize> = (1..=k).collect();
    loop {
        let mut s: Mono = SmallVec::with_capacity(n + 1);
        let mut v = 0u8;
        let mut next = 0;
        for pos in 0..=n {
            if next < k && steps[next] == pos {
                v += 1;
                next += 1;
            }
            s.push(v);
        }
        out.push(s);
        // advance combination
        let mut idx = k;
        loop {
            if idx == 0 {
                out.sort();
                return out;
            }
            idx -= 1;
            if steps[idx] < n - (k - 1 - idx) {
                steps[idx] += 1;
                for t in idx + 1..k {
                    steps[t] = steps[t - 1] + 1;
                }
                break;
            }
        }
    }
}

/// All monotone maps `[m] -> [n]` in lexicographic order.
pub fn monotone_maps(m: usize, n: usize) -> Vec<Mono> {
    let mut out = Vec::new();
    let mut cur: Mono = SmallVec::new();
    fn rec(m: usize, n: usize, lo: u8, cur: &mut Mono, out: &mut Vec<Mono>) {
        if cur.len() == m + 1 {
            out.push(cur.clone());
            return;
        }
        for v in lo..=n as u8 {
            cur.push(v);
            rec(m, n, v, cur, out);
            cur.pop();
        }
    }
    rec(m, n, 0, &mut cur, &mut out);
    out
}

/// Positions `j` with `eta(j) == eta(j+1)`, i.e. the degeneracy indices of a surjection.
pub fn repeats(eta: &[u8]) -> Vec<usize> {
    (0..eta.len().saturating_sub(1))
        .filter(|&j| eta[j] == eta[j + 1])
        .collect()
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: usize = 1;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}
