//! Permutations of `{1..n}` with cycle-notation I/O.
//!
//! Points are 1-based in every public signature and in the text format;
//! storage is 0-based. Composition follows function composition:
//! `a.compose(&b)` is `a ∘ b`, i.e. `i ↦ a(b(i))`. The commutator is
//! `[h, v] = v h v⁻¹ h⁻¹` in that same convention.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation { images: (0..degree as u32).collect() }
    }

    /// Builds a permutation from 0-based images, checking bijectivity.
    pub fn from_images0(images: Vec<u32>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            let x = x as usize;
            if x >= n || seen[x] {
                return Err(Error::MalformedCycles(format!("images {images:?} are not a bijection")));
            }
            seen[x] = true;
        }
        Ok(Permutation { images })
    }

    /// Builds a permutation from 1-based images: `images[i]` is the image of `i + 1`.
    pub fn from_images(images: &[usize]) -> Result<Self> {
        let mut v = Vec::with_capacity(images.len());
        for &x in images {
            if x == 0 {
                return Err(Error::MalformedCycles("point 0 is not allowed".into()));
            }
            v.push((x - 1) as u32);
        }
        Self::from_images0(v)
    }

    pub(crate) fn from_images0_unchecked(images: Vec<u32>) -> Self {
        debug_assert!(Self::from_images0(images.clone()).is_ok());
        Permutation { images }
    }

    /// Parses cycle notation such as `(1,2,3)(4,5)`. Fixed points may be
    /// omitted or written as singletons; `""` and `"()"` are the identity.
    pub fn parse_cycles(text: &str, degree: Option<usize>) -> Result<Self> {
        let mut cycles: Vec<Vec<usize>> = Vec::new();
        let mut rest = text.trim();
        while !rest.is_empty() {
            if !rest.starts_with('(') {
                return Err(Error::MalformedCycles(format!("expected '(' at {rest:?}")));
            }
            let close = rest
                .find(')')
                .ok_or_else(|| Error::MalformedCycles(format!("unclosed cycle in {text:?}")))?;
            let body = &rest[1..close];
            let mut cycle = Vec::new();
            for tok in body.split(|c: char| c == ',' || c.is_whitespace()) {
                if tok.is_empty() {
                    continue;
                }
                let p: i64 = tok
                    .parse()
                    .map_err(|_| Error::MalformedCycles(format!("bad point {tok:?}")))?;
                if p <= 0 {
                    return Err(Error::MalformedCycles(format!("non-positive point {p}")));
                }
                cycle.push(p as usize);
            }
            if body.contains(',') && cycle.is_empty() {
                return Err(Error::MalformedCycles(format!("empty cycle body {body:?}")));
            }
            cycles.push(cycle);
            rest = rest[close + 1..].trim_start();
        }

        let max_point = cycles.iter().flatten().copied().max().unwrap_or(0);
        let n = match degree {
            Some(d) if d < max_point => {
                return Err(Error::MalformedCycles(format!("degree {d} below point {max_point}")))
            }
            Some(d) => d,
            None => max_point,
        };
        let mut images: Vec<u32> = (0..n as u32).collect();
        let mut used = vec![false; n];
        for cycle in &cycles {
            for (k, &p) in cycle.iter().enumerate() {
                if used[p - 1] {
                    return Err(Error::MalformedCycles(format!("point {p} repeated")));
                }
                used[p - 1] = true;
                let next = cycle[(k + 1) % cycle.len()];
                images[p - 1] = (next - 1) as u32;
            }
        }
        Ok(Permutation { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// Image of the 1-based point `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.images[i - 1] as usize + 1
    }

    #[inline]
    pub fn apply0(&self, i: usize) -> usize {
        self.images[i] as usize
    }

    pub fn images0(&self) -> &[u32] {
        &self.images
    }

    /// 1-based images, `result[i]` being the image of `i + 1`.
    pub fn images(&self) -> Vec<usize> {
        self.images.iter().map(|&x| x as usize + 1).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    fn check_degree(&self, other: &Permutation) -> Result<()> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch(self.degree(), other.degree()));
        }
        Ok(())
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        self.check_degree(other)?;
        Ok(Permutation {
            images: other.images.iter().map(|&x| self.images[x as usize]).collect(),
        })
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u32; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Permutation { images: inv }
    }

    /// `ψ ∘ self ∘ ψ⁻¹`.
    pub fn conjugate_by(&self, psi: &Permutation) -> Result<Permutation> {
        self.check_degree(psi)?;
        let mut out = vec![0u32; self.images.len()];
        for i in 0..self.images.len() {
            out[psi.images[i] as usize] = psi.images[self.images[i] as usize];
        }
        Ok(Permutation { images: out })
    }

    /// All cycles (fixed points included), 1-based, each starting at its
    /// smallest element, ordered by that element.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.images.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x + 1);
                x = self.images[x] as usize;
            }
            out.push(cycle);
        }
        out
    }

    /// Cycle lengths in non-increasing order, fixed points included.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        t.sort_unstable_by(|a, b| b.cmp(a));
        t
    }

    pub fn order(&self) -> u64 {
        self.cycle_type()
            .into_iter()
            .fold(1u64, |acc, l| num_integer::lcm(acc, l as u64))
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut any = false;
        for cycle in self.cycles() {
            if cycle.len() < 2 {
                continue;
            }
            any = true;
            write!(f, "(")?;
            for (k, p) in cycle.iter().enumerate() {
                if k > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{p}")?;
            }
            write!(f, ")")?;
        }
        if !any {
            write!(f, "()")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation[{}]{}", self.degree(), self)
    }
}

impl FromStr for Permutation {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Permutation::parse_cycles(s, None)
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Permutation::parse_cycles(&s, None).map_err(serde::de::Error::custom)
    }
}

/// `[h, v] = v h v⁻¹ h⁻¹`, so `[h, v](i) = v(h(v⁻¹(h⁻¹(i))))`.
pub fn commutator(h: &Permutation, v: &Permutation) -> Result<Permutation> {
    v.compose(&h.compose(&v.inverse().compose(&h.inverse())?)?)
}

pub fn is_transitive(h: &Permutation, v: &Permutation) -> Result<bool> {
    h.check_degree(v)?;
    let n = h.degree();
    if n == 0 {
        return Ok(false);
    }
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    let mut count = 1;
    let (hi, vi) = (h.inverse(), v.inverse());
    while let Some(x) = queue.pop_front() {
        for g in [h, v, &hi, &vi] {
            let y = g.apply0(x);
            if !seen[y] {
                seen[y] = true;
                count += 1;
                queue.push_back(y);
            }
        }
    }
    Ok(count == n)
}

/// Tries to extend `ψ(0) = target` to a conjugator with `ψ h ψ⁻¹ = h2`
/// and `ψ v ψ⁻¹ = v2`, i.e. `ψ(h(x)) = h2(ψ(x))`.
fn extend_conjugator(
    h: &Permutation,
    v: &Permutation,
    h2: &Permutation,
    v2: &Permutation,
    target: usize,
) -> Option<Permutation> {
    let n = h.degree();
    const UNSET: u32 = u32::MAX;
    let mut psi = vec![UNSET; n];
    let mut used = vec![false; n];
    psi[0] = target as u32;
    used[target] = true;
    let mut queue = VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        let px = psi[x] as usize;
        for (g, g2) in [(h, h2), (v, v2)] {
            let y = g.apply0(x);
            let py = g2.apply0(px);
            if psi[y] == UNSET {
                if used[py] {
                    return None;
                }
                psi[y] = py as u32;
                used[py] = true;
                queue.push_back(y);
            } else if psi[y] as usize != py {
                return None;
            }
        }
    }
    if psi.iter().any(|&p| p == UNSET) {
        return None;
    }
    let psi = Permutation { images: psi };
    // full pointwise verification
    let ok = (0..n).all(|x| {
        psi.apply0(h.apply0(x)) == h2.apply0(psi.apply0(x))
            && psi.apply0(v.apply0(x)) == v2.apply0(psi.apply0(x))
    });
    ok.then_some(psi)
}

/// Finds `ψ` with `ψ h ψ⁻¹ = h2` and `ψ v ψ⁻¹ = v2`. By transitivity `ψ`
/// is determined by `ψ(1)`; candidates are tried in increasing order, so
/// the returned conjugator is the lexicographically smallest one.
pub fn simultaneous_conjugator(
    h: &Permutation,
    v: &Permutation,
    h2: &Permutation,
    v2: &Permutation,
) -> Result<Option<Permutation>> {
    h.check_degree(v)?;
    h.check_degree(h2)?;
    h.check_degree(v2)?;
    if !is_transitive(h, v)? {
        return Err(Error::RequiresTransitive);
    }
    if h.cycle_type() != h2.cycle_type() || v.cycle_type() != v2.cycle_type() {
        return Ok(None);
    }
    Ok((0..h.degree()).find_map(|c| extend_conjugator(h, v, h2, v2, c)))
}

/// Relabels a transitive pair by breadth-first search from `start`
/// (neighbours visited in the order h, v). Returns the relabeled images.
fn relabel_from(h: &Permutation, v: &Permutation, start: usize) -> (Vec<u32>, Vec<u32>) {
    let n = h.degree();
    const UNSET: u32 = u32::MAX;
    let mut label = vec![UNSET; n];
    let mut order = Vec::with_capacity(n);
    label[start] = 0;
    order.push(start);
    let mut head = 0;
    while head < order.len() {
        let x = order[head];
        head += 1;
        for g in [h, v] {
            let y = g.apply0(x);
            if label[y] == UNSET {
                label[y] = order.len() as u32;
                order.push(y);
            }
        }
    }
    let mut nh = vec![0u32; n];
    let mut nv = vec![0u32; n];
    for x in 0..n {
        nh[label[x] as usize] = label[h.apply0(x)];
        nv[label[x] as usize] = label[v.apply0(x)];
    }
    (nh, nv)
}

/// Canonical representative of the simultaneous-conjugacy class of a
/// transitive pair: the lexicographically least relabeling over all `n`
/// choices of the point labeled 1.
pub fn canonical_pair(h: &Permutation, v: &Permutation) -> Result<(Permutation, Permutation)> {
    h.check_degree(v)?;
    if !is_transitive(h, v)? {
        return Err(Error::RequiresTransitive);
    }
    let best = (0..h.degree())
        .map(|s| relabel_from(h, v, s))
        .min()
        .expect("non-empty degree");
    Ok((Permutation { images: best.0 }, Permutation { images: best.1 }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str, n: usize) -> Permutation {
        Permutation::parse_cycles(s, Some(n)).unwrap()
    }

    #[test]
    fn parses_flagship_h() {
        let h = p("(1,2,3,4,5,6)(12,11,10,9,8,7)(13,14)(15,16)", 16);
        assert_eq!(h.apply(1), 2);
        assert_eq!(h.apply(12), 11);
        assert_eq!(h.apply(6), 1);
        assert_eq!(h.degree(), 16);
    }

    #[test]
    fn empty_text_is_identity() {
        let id = p("", 5);
        assert!(id.is_identity());
        assert_eq!(id.degree(), 5);
        assert_eq!(id.to_string(), "()");
    }

    #[test]
    fn singletons_and_round_trip() {
        let a: Permutation = "(1,3)(2)".parse().unwrap();
        assert_eq!(a.degree(), 3);
        assert_eq!(a.to_string(), "(1,3)");
        let b = Permutation::parse_cycles(&a.to_string(), Some(3)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn whitespace_is_tolerated() {
        let a = Permutation::parse_cycles(" ( 1, 2 ,3) (4 5) ", None).unwrap();
        assert_eq!(a.to_string(), "(1,2,3)(4,5)");
    }

    #[test]
    fn rejects_bad_cycles() {
        for bad in ["(1,2)(2,3)", "(1,1)", "(0,1)", "(-1,2)", "(1,2", "1,2", "(a,b)"] {
            assert!(
                matches!(Permutation::parse_cycles(bad, None), Err(Error::MalformedCycles(_))),
                "{bad}"
            );
        }
        assert!(Permutation::parse_cycles("(1,7)", Some(5)).is_err());
    }

    #[test]
    fn flagship_commutator() {
        let h = p("(1,2,3,4,5,6)(12,11,10,9,8,7)(13,14)(15,16)", 16);
        let v = p("(12,2,16,14,10,6)(11,5,15,13,7,1)(3,9)(4,8)", 16);
        let c = commutator(&h, &v).unwrap();
        assert_eq!(c.to_string(), "(1,3,5)(7,15,9)(10,16,12)");
        assert_eq!(c.cycles().len(), 10);
    }

    #[test]
    fn commutator_with_identity() {
        let a = p("(1,4,2)(3,5)", 5);
        assert!(commutator(&a, &Permutation::identity(5)).unwrap().is_identity());
    }

    #[test]
    fn degree_mismatch() {
        let a = Permutation::identity(3);
        let b = Permutation::identity(4);
        assert_eq!(a.compose(&b), Err(Error::DegreeMismatch(3, 4)));
        assert!(commutator(&a, &b).is_err());
        assert!(is_transitive(&a, &b).is_err());
    }

    #[test]
    fn transitivity() {
        let h = p("(1,2)", 4);
        assert!(!is_transitive(&h, &h).unwrap());
        let cyc = p("(1,2,3,4)", 4);
        assert!(is_transitive(&cyc, &Permutation::identity(4)).unwrap());
    }

    #[test]
    fn non_transitive_conjugator_request() {
        let h = p("(1,2)", 4);
        assert_eq!(simultaneous_conjugator(&h, &h, &h, &h), Err(Error::RequiresTransitive));
    }

    #[test]
    fn flagship_t_conjugator() {
        let h = p("(1,2,3,4,5,6)(12,11,10,9,8,7)(13,14)(15,16)", 16);
        let v = p("(12,2,16,14,10,6)(11,5,15,13,7,1)(3,9)(4,8)", 16);
        let tv = v.compose(&h.inverse()).unwrap();
        let psi = simultaneous_conjugator(&h, &tv, &h, &v).unwrap().unwrap();
        assert_eq!(h.conjugate_by(&psi).unwrap(), h);
        assert_eq!(tv.conjugate_by(&psi).unwrap(), v);
        // trivial automorphism group: the conjugator is unique
        assert_eq!(psi, p("(1,3,5)(2,4,6)(7,10)(8,11)(9,12)(13)(14)(15,16)", 16));
    }

    #[test]
    fn canonical_pair_is_conjugation_invariant() {
        let h = p("(1,2,3)", 3);
        let v = p("(1,2)", 3);
        let psi = p("(1,3)", 3);
        let a = canonical_pair(&h, &v).unwrap();
        let b = canonical_pair(&h.conjugate_by(&psi).unwrap(), &v.conjugate_by(&psi).unwrap()).unwrap();
        assert_eq!(a, b);
    }
}
