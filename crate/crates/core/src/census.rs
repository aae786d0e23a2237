//! Exhaustive search for small reduced origamis whose Veech group is all
//! of SL(2, Z).

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::origami::Origami;
use crate::perm::{canonical_pair, is_transitive, Permutation};

pub const MAX_CENSUS_SQUARES: usize = 9;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusEntry {
    pub n: usize,
    pub h: String,
    pub v: String,
    pub stratum: String,
    pub genus: usize,
}

/// Integer partitions of `n`, parts descending.
fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            out.push(prefix.clone());
            return;
        }
        for p in (1..=n.min(max)).rev() {
            prefix.push(p);
            go(n - p, p, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// The permutation with consecutive cycles of the given lengths.
fn representative(cycle_type: &[usize]) -> Permutation {
    let n: usize = cycle_type.iter().sum();
    let mut images = vec![0u32; n];
    let mut start = 0;
    for &len in cycle_type {
        for k in 0..len {
            images[start + k] = (start + (k + 1) % len) as u32;
        }
        start += len;
    }
    Permutation::from_images0_unchecked(images)
}

fn next_permutation(xs: &mut [u32]) -> bool {
    let Some(i) = (1..xs.len()).rev().find(|&i| xs[i - 1] < xs[i]) else {
        return false;
    };
    let j = (i..xs.len()).rev().find(|&j| xs[j] > xs[i - 1]).expect("pivot exists");
    xs.swap(i - 1, j);
    xs[i..].reverse();
    true
}

/// Cheap necessary conditions first: SL(2,Z) contains an element swapping
/// the two directions, so `h` and `v` share a cycle type, and `T`, `S`
/// preserve the cycle types of `v` and `h`.
fn candidate(h: &Permutation, v: &Permutation) -> Result<Option<Origami>> {
    if v.cycle_type() != h.cycle_type() {
        return Ok(None);
    }
    if v.compose(&h.inverse())?.cycle_type() != v.cycle_type() {
        return Ok(None);
    }
    if h.compose(&v.inverse())?.cycle_type() != h.cycle_type() {
        return Ok(None);
    }
    if !is_transitive(h, v)? {
        return Ok(None);
    }
    let o = Origami::new(h.clone(), v.clone(), None)?;
    Ok((o.is_reduced() && o.is_veech_full()).then_some(o))
}

/// Hits with exactly `n` squares, keyed by canonical form.
fn search_degree(n: usize) -> Result<BTreeMap<(Vec<u32>, Vec<u32>), Origami>> {
    let mut found = BTreeMap::new();
    for ct in partitions(n) {
        let h = representative(&ct);
        let per_first: Vec<Vec<Origami>> = (0..n as u32)
            .into_par_iter()
            .map(|first| -> Result<Vec<Origami>> {
                let mut rest: Vec<u32> = (0..n as u32).filter(|&x| x != first).collect();
                let mut hits = Vec::new();
                loop {
                    let mut images = Vec::with_capacity(n);
                    images.push(first);
                    images.extend_from_slice(&rest);
                    let v = Permutation::from_images0_unchecked(images);
                    if let Some(o) = candidate(&h, &v)? {
                        hits.push(o);
                    }
                    if !next_permutation(&mut rest) {
                        break;
                    }
                }
                Ok(hits)
            })
            .collect::<Result<_>>()?;
        for o in per_first.into_iter().flatten() {
            let (ch, cv) = canonical_pair(&o.h, &o.v)?;
            let key = (ch.images0().to_vec(), cv.images0().to_vec());
            found.entry(key).or_insert_with(|| Origami { h: ch, v: cv, name: None });
        }
    }
    Ok(found)
}

/// All reduced origamis with at most `max_squares` squares whose Veech
/// group is SL(2, Z), up to simultaneous conjugacy, ordered by size and
/// canonical form.
pub fn census(max_squares: usize) -> Result<Vec<CensusEntry>> {
    if max_squares > MAX_CENSUS_SQUARES {
        return Err(Error::DomainError(format!(
            "census is limited to {MAX_CENSUS_SQUARES} squares, got {max_squares}"
        )));
    }
    let mut out = Vec::new();
    for n in 1..=max_squares {
        for o in search_degree(n)?.into_values() {
            let stratum = o.stratum()?;
            out.push(CensusEntry {
                n,
                h: o.h.to_string(),
                v: o.v.to_string(),
                stratum: stratum.to_string(),
                genus: stratum.genus,
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_counts() {
        let counts: Vec<usize> = (1..=9).map(|n| partitions(n).len()).collect();
        assert_eq!(counts, vec![1, 2, 3, 5, 7, 11, 15, 22, 30]);
    }

    #[test]
    fn representatives() {
        assert_eq!(representative(&[3, 2, 1]).cycle_type(), vec![3, 2, 1]);
    }

    #[test]
    fn permutations_enumerated() {
        let mut xs = vec![0, 1, 2, 3];
        let mut count = 1;
        while next_permutation(&mut xs) {
            count += 1;
        }
        assert_eq!(count, 24);
    }

    #[test]
    fn small_census() {
        let c = census(4).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].n, 1);
        assert!(census(10).is_err());
    }
}
