//! Origamis (square-tiled surfaces) given by a transitive pair `(h, v)`:
//! square `i` has right neighbour `h(i)` and top neighbour `v(i)`.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::homology::{Chain, ChainComplex};
use crate::monodromy::edge_map;
use crate::perm::{canonical_pair, commutator, is_transitive, simultaneous_conjugator, Permutation};

#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Origami {
    pub h: Permutation,
    pub v: Permutation,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stratum {
    /// Cone point orders, descending.
    pub zero_orders: Vec<usize>,
    pub genus: usize,
}

impl fmt::Display for Stratum {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        if self.zero_orders.is_empty() {
            return write!(f, "H(0)");
        }
        let parts: Vec<String> = self.zero_orders.iter().map(ToString::to_string).collect();
        write!(f, "H({})", parts.join(","))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VeechGenerator {
    T,
    S,
    TInv,
    SInv,
}

impl VeechGenerator {
    pub fn from_letter(c: char) -> Option<Self> {
        match c {
            'T' => Some(Self::T),
            'S' => Some(Self::S),
            't' => Some(Self::TInv),
            's' => Some(Self::SInv),
            _ => None,
        }
    }

    pub fn letter(self) -> char {
        match self {
            Self::T => 'T',
            Self::S => 'S',
            Self::TInv => 't',
            Self::SInv => 's',
        }
    }

    pub fn inverse(self) -> Self {
        match self {
            Self::T => Self::TInv,
            Self::S => Self::SInv,
            Self::TInv => Self::T,
            Self::SInv => Self::S,
        }
    }

    /// Action on plane vectors: T = [[1,1],[0,1]], S = [[1,0],[1,1]].
    pub fn matrix(self) -> [[i64; 2]; 2] {
        match self {
            Self::T => [[1, 1], [0, 1]],
            Self::S => [[1, 0], [1, 1]],
            Self::TInv => [[1, -1], [0, 1]],
            Self::SInv => [[1, 0], [-1, 1]],
        }
    }
}

/// Which vertices of the tiling bound cylinders.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VertexMarking {
    AllVertices,
    ConePointsOnly,
}

#[derive(Clone, Debug, Serialize)]
pub struct Cylinder {
    pub circumference: usize,
    pub height: usize,
    /// Core curve as an edge chain (bottom edges first, then left edges).
    #[serde(with = "crate::serde_int::vec")]
    pub waist: Chain,
}

#[derive(Clone, Debug, Serialize)]
pub struct CylinderDecomposition {
    pub direction: (i64, i64),
    pub cylinders: Vec<Cylinder>,
}

impl CylinderDecomposition {
    /// Circumferences, descending.
    pub fn circumferences(&self) -> Vec<usize> {
        let mut c: Vec<usize> = self.cylinders.iter().map(|c| c.circumference).collect();
        c.sort_unstable_by(|a, b| b.cmp(a));
        c
    }

    pub fn area(&self) -> usize {
        self.cylinders.iter().map(|c| c.circumference * c.height).sum()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitGraph {
    /// Canonical `(h, v)` of every node; node 0 is the start surface.
    pub nodes: Vec<(Permutation, Permutation)>,
    /// `(from, generator letter, to)`.
    pub edges: Vec<(usize, char, usize)>,
    pub truncated: bool,
}

impl OrbitGraph {
    pub fn size(&self) -> usize {
        self.nodes.len()
    }
}

/// Input file format: permutations in cycle notation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrigamiInput {
    pub name: String,
    pub h: String,
    pub v: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
}

impl OrigamiInput {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_origami(&self) -> Result<Origami> {
        Origami::from_cycles(&self.h, &self.v, self.n, Some(self.name.clone()))
    }
}

impl Origami {
    pub fn new(h: Permutation, v: Permutation, name: Option<String>) -> Result<Self> {
        if h.degree() != v.degree() {
            return Err(Error::DegreeMismatch(h.degree(), v.degree()));
        }
        if !is_transitive(&h, &v)? {
            return Err(Error::RequiresTransitive);
        }
        Ok(Origami { h, v, name })
    }

    pub fn from_cycles(h: &str, v: &str, n: Option<usize>, name: Option<String>) -> Result<Self> {
        let mut hp = Permutation::parse_cycles(h, n)?;
        let mut vp = Permutation::parse_cycles(v, n)?;
        // without an explicit degree, pad the shorter one with fixed points
        if n.is_none() && hp.degree() != vp.degree() {
            let d = hp.degree().max(vp.degree());
            hp = Permutation::parse_cycles(h, Some(d))?;
            vp = Permutation::parse_cycles(v, Some(d))?;
        }
        Self::new(hp, vp, name)
    }

    pub fn torus() -> Self {
        Origami { h: Permutation::identity(1), v: Permutation::identity(1), name: Some("torus".into()) }
    }

    pub fn n(&self) -> usize {
        self.h.degree()
    }

    pub fn commutator(&self) -> Permutation {
        commutator(&self.h, &self.v).expect("equal degrees")
    }

    /// Vertex index of the lower-left corner of each square (0-based),
    /// numbered by the commutator cycles in order of their least element.
    pub fn corner_vertices(&self) -> (Vec<usize>, usize) {
        let cycles = self.commutator().cycles();
        let mut vertex = vec![0; self.n()];
        for (k, cyc) in cycles.iter().enumerate() {
            for &p in cyc {
                vertex[p - 1] = k;
            }
        }
        (vertex, cycles.len())
    }

    pub fn stratum(&self) -> Result<Stratum> {
        let cycles = self.commutator().cycles();
        let c = cycles.len();
        let n = self.n();
        if n < c || (n - c) % 2 == 1 {
            return Err(Error::InternalInvariantViolation(format!(
                "n = {n} and {c} vertices give a non-integral genus"
            )));
        }
        let genus = 1 + (n - c) / 2;
        let mut zero_orders: Vec<usize> =
            cycles.iter().filter(|c| c.len() > 1).map(|c| c.len() - 1).collect();
        zero_orders.sort_unstable_by(|a, b| b.cmp(a));
        if zero_orders.iter().sum::<usize>() != 2 * genus - 2 {
            return Err(Error::InternalInvariantViolation("cone orders do not sum to 2g-2".into()));
        }
        Ok(Stratum { zero_orders, genus })
    }

    pub fn apply(&self, g: VeechGenerator) -> Origami {
        let (h, v) = (&self.h, &self.v);
        let (nh, nv) = match g {
            VeechGenerator::T => (Ok(h.clone()), v.compose(&h.inverse())),
            VeechGenerator::TInv => (Ok(h.clone()), v.compose(h)),
            VeechGenerator::S => (h.compose(&v.inverse()), Ok(v.clone())),
            VeechGenerator::SInv => (h.compose(v), Ok(v.clone())),
        };
        Origami { h: nh.expect("equal degrees"), v: nv.expect("equal degrees"), name: self.name.clone() }
    }

    /// `ψ` with `ψ h' ψ⁻¹ = h`, `ψ v' ψ⁻¹ = v` where `(h', v') = g(self)`.
    pub fn veech_conjugator(&self, g: VeechGenerator) -> Option<Permutation> {
        let img = self.apply(g);
        simultaneous_conjugator(&img.h, &img.v, &self.h, &self.v).expect("transitive origami")
    }

    pub fn is_veech_full(&self) -> bool {
        self.veech_conjugator(VeechGenerator::T).is_some()
            && self.veech_conjugator(VeechGenerator::S).is_some()
    }

    pub fn canonical(&self) -> (Permutation, Permutation) {
        canonical_pair(&self.h, &self.v).expect("transitive origami")
    }

    pub fn is_same_origami(&self, other: &Origami) -> bool {
        self.n() == other.n()
            && simultaneous_conjugator(&self.h, &self.v, &other.h, &other.v)
                .expect("transitive origami")
                .is_some()
    }

    /// Breadth-first closure of the SL(2,Z)-orbit under T and S, up to
    /// relabeling. Stops once `max_size` nodes are known.
    pub fn sl2z_orbit(&self, max_size: usize) -> OrbitGraph {
        let start = self.canonical();
        let mut index: HashMap<(Permutation, Permutation), usize> = HashMap::new();
        let mut nodes = vec![start.clone()];
        index.insert(start, 0);
        let mut edges = Vec::new();
        let mut queue = VecDeque::from([0usize]);
        let mut truncated = false;
        while let Some(k) = queue.pop_front() {
            let (h, v) = nodes[k].clone();
            let o = Origami { h, v, name: None };
            for g in [VeechGenerator::T, VeechGenerator::S] {
                let key = o.apply(g).canonical();
                let target = match index.get(&key) {
                    Some(&t) => t,
                    None => {
                        if nodes.len() >= max_size {
                            truncated = true;
                            continue;
                        }
                        let t = nodes.len();
                        index.insert(key.clone(), t);
                        nodes.push(key);
                        queue.push_back(t);
                        t
                    }
                };
                edges.push((k, g.letter(), target));
            }
        }
        OrbitGraph { nodes, edges, truncated }
    }

    /// Relative periods span `Z²`: the lattice generated by absolute
    /// periods and by displacements between singular corners is the whole
    /// integer lattice. Surfaces without singularities use one marked point.
    pub fn is_reduced(&self) -> bool {
        let n = self.n();
        let (vertex, _) = self.corner_vertices();
        let c = self.commutator();
        let mut pos: Vec<Option<(i64, i64)>> = vec![None; n];
        pos[0] = Some((0, 0));
        let mut queue = VecDeque::from([0usize]);
        let mut gens: Vec<(i64, i64)> = Vec::new();
        while let Some(x) = queue.pop_front() {
            let (px, py) = pos[x].unwrap();
            for (y, d) in [(self.h.apply0(x), (1, 0)), (self.v.apply0(x), (0, 1))] {
                let q = (px + d.0, py + d.1);
                match pos[y] {
                    None => {
                        pos[y] = Some(q);
                        queue.push_back(y);
                    }
                    Some(old) => gens.push((q.0 - old.0, q.1 - old.1)),
                }
            }
        }
        let marked: Vec<usize> = {
            let singular: Vec<usize> = (0..n).filter(|&x| c.apply0(x) != x).collect();
            if singular.is_empty() {
                (0..n).filter(|&x| vertex[x] == vertex[0]).collect()
            } else {
                singular
            }
        };
        let base = pos[marked[0]].unwrap();
        for &x in &marked[1..] {
            let p = pos[x].unwrap();
            gens.push((p.0 - base.0, p.1 - base.1));
        }
        // the lattice spanned by gens is Z² iff its 2x2 minors have gcd 1
        let mut g = 0i64;
        for i in 0..gens.len() {
            for j in i + 1..gens.len() {
                g = g.gcd(&(gens[i].0 * gens[j].1 - gens[i].1 * gens[j].0));
            }
        }
        g == 1
    }

    pub fn chain_complex(&self) -> ChainComplex {
        ChainComplex::new(self)
    }

    /// Horizontal cylinders with every vertex of the tiling marked (the
    /// preimages of the torus's marked point), so each row is a cylinder.
    pub fn horizontal_cylinders(&self) -> CylinderDecomposition {
        self.horizontal_cylinders_with(VertexMarking::AllVertices)
    }

    /// Rows are the cycles of `h`. With `ConePointsOnly`, a row and the row
    /// above it belong to the same cylinder when the top boundary of the row
    /// carries no singular vertex.
    pub fn horizontal_cylinders_with(&self, marking: VertexMarking) -> CylinderDecomposition {
        let n = self.n();
        let c = self.commutator();
        let rows = self.h.cycles();
        let mut row_of = vec![0; n];
        for (k, r) in rows.iter().enumerate() {
            for &p in r {
                row_of[p - 1] = k;
            }
        }
        let mut parent: Vec<usize> = (0..rows.len()).collect();
        fn find(p: &mut Vec<usize>, x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        for (k, r) in rows.iter().enumerate() {
            let regular_top = r.iter().all(|&p| {
                let above = self.v.apply(p);
                c.apply(above) == above
            });
            if regular_top && marking == VertexMarking::ConePointsOnly {
                let a = find(&mut parent, k);
                let b = find(&mut parent, row_of[self.v.apply0(r[0] - 1)]);
                parent[a] = b;
            }
        }
        let mut groups: Vec<(usize, usize, usize)> = Vec::new(); // (root, first row, rows)
        for k in 0..rows.len() {
            let root = find(&mut parent, k);
            match groups.iter_mut().find(|g| g.0 == root) {
                Some(g) => g.2 += 1,
                None => groups.push((root, k, 1)),
            }
        }
        let cylinders = groups
            .into_iter()
            .map(|(_, first, height)| {
                let mut waist = vec![BigInt::zero(); 2 * n];
                for &p in &rows[first] {
                    waist[p - 1] = BigInt::from(1);
                }
                Cylinder { circumference: rows[first].len(), height, waist }
            })
            .collect();
        CylinderDecomposition { direction: (1, 0), cylinders }
    }

    /// Cylinders in the rational direction `(p, q)`, found by moving the
    /// direction to the horizontal with a word in T, S and pulling the
    /// waist curves back. Waists are oriented along `(p, q)`.
    pub fn cylinders_in_direction(&self, p: i64, q: i64) -> Result<CylinderDecomposition> {
        if p.gcd(&q) != 1 {
            return Err(Error::DomainError(format!("direction ({p}, {q}) is not primitive")));
        }
        let word = direction_word(p, q);
        let mut surfaces = vec![self.clone()];
        for &g in &word {
            let next = surfaces.last().unwrap().apply(g);
            surfaces.push(next);
        }
        let top = surfaces.last().unwrap();
        let mut dec = top.horizontal_cylinders();
        for cyl in &mut dec.cylinders {
            let mut chain = cyl.waist.clone();
            for (k, &g) in word.iter().enumerate().rev() {
                // surfaces[k + 1] = g(surfaces[k]); pull back along g⁻¹
                let m = edge_map(&surfaces[k + 1], g.inverse());
                chain = m.mul_vec(&chain);
            }
            let (hx, hy) = crate::homology::holonomy_of_chain(&chain, self.n());
            let along = &hx * BigInt::from(p) + &hy * BigInt::from(q);
            if along.is_negative() {
                chain = chain.iter().map(|x| -x).collect();
            }
            cyl.waist = chain;
        }
        dec.direction = (p, q);
        Ok(dec)
    }

    /// Rank of the span of the waist classes in `H₁(X; Q)`.
    pub fn homological_dimension(&self, p: i64, q: i64) -> Result<usize> {
        let dec = self.cylinders_in_direction(p, q)?;
        let cc = self.chain_complex();
        let waists: Vec<Chain> = dec.cylinders.into_iter().map(|c| c.waist).collect();
        Ok(cc.homology_rank_of_span(&waists))
    }
}

impl fmt::Debug for Origami {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        write!(f, "Origami(h={}, v={})", self.h, self.v)
    }
}

/// Word `[g₁, …, g_k]` (applied in that order) sending the direction
/// `(p, q)` to the horizontal.
pub fn direction_word(p: i64, q: i64) -> Vec<VeechGenerator> {
    let (mut x, mut y) = (p, q);
    let mut word = Vec::new();
    let mut push = |g: VeechGenerator, k: i64, x: &mut i64, y: &mut i64| {
        for _ in 0..k.unsigned_abs() {
            let g = if k > 0 { g } else { g.inverse() };
            let m = g.matrix();
            let (nx, ny) = (m[0][0] * *x + m[0][1] * *y, m[1][0] * *x + m[1][1] * *y);
            *x = nx;
            *y = ny;
            word.push(g);
        }
    };
    while y != 0 {
        if x == 0 {
            // (0, y) -> (y, y) -> (y, 0)
            push(VeechGenerator::T, 1, &mut x, &mut y);
            push(VeechGenerator::S, -1, &mut x, &mut y);
            continue;
        }
        if x.abs() >= y.abs() {
            // reduce x modulo y with T^k: x -> x + k y
            let k = -x.div_euclid(y);
            push(VeechGenerator::T, k, &mut x, &mut y);
        } else {
            // reduce y modulo x with S^k: y -> y + k x
            let k = -y.div_euclid(x);
            push(VeechGenerator::S, k, &mut x, &mut y);
        }
    }
    word
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn flagship() -> Origami {
        Origami::from_cycles(
            "(1,2,3,4,5,6)(12,11,10,9,8,7)(13,14)(15,16)",
            "(12,2,16,14,10,6)(11,5,15,13,7,1)(3,9)(4,8)",
            Some(16),
            Some("O".into()),
        )
        .unwrap()
    }

    fn l_shape() -> Origami {
        Origami::from_cycles("(1,2,3)", "(1,2)", Some(3), None).unwrap()
    }

    #[test]
    fn strata() {
        let s = flagship().stratum().unwrap();
        assert_eq!(s.zero_orders, vec![2, 2, 2]);
        assert_eq!(s.genus, 4);
        assert_eq!(s.to_string(), "H(2,2,2)");
        let t = Origami::torus().stratum().unwrap();
        assert_eq!((t.zero_orders.len(), t.genus), (0, 1));
        let l = l_shape().stratum().unwrap();
        assert_eq!((l.zero_orders, l.genus), (vec![2], 2));
    }

    #[test]
    fn generators_and_inverses() {
        let o = flagship();
        for g in [VeechGenerator::T, VeechGenerator::S] {
            assert_eq!(o.apply(g).apply(g.inverse()), o);
            assert_eq!(o.apply(g.inverse()).apply(g), o);
        }
    }

    #[test]
    fn veech_full() {
        assert!(flagship().is_veech_full());
        assert!(Origami::torus().is_veech_full());
        assert!(!l_shape().is_veech_full());
        assert_eq!(flagship().sl2z_orbit(100).size(), 1);
        assert_eq!(Origami::torus().sl2z_orbit(100).size(), 1);
        assert_eq!(l_shape().sl2z_orbit(100).size(), 3);
        let small = l_shape().sl2z_orbit(2);
        assert!(small.truncated);
    }

    #[test]
    fn horizontal() {
        let d = flagship().horizontal_cylinders();
        assert_eq!(d.circumferences(), vec![6, 6, 2, 2]);
        assert!(d.cylinders.iter().all(|c| c.height == 1));
        let merged = flagship().horizontal_cylinders_with(VertexMarking::ConePointsOnly);
        assert_eq!(merged.circumferences(), vec![6, 6, 2]);
        assert_eq!(merged.area(), 16);
        let t = Origami::torus().horizontal_cylinders();
        assert_eq!(t.cylinders.len(), 1);
        assert_eq!((t.cylinders[0].circumference, t.cylinders[0].height), (1, 1));
    }

    #[test]
    fn direction_words_reach_horizontal() {
        for (p, q) in [(1, 0), (0, 1), (1, 2), (-3, 5), (7, -4), (0, -1), (-1, 0), (13, 8)] {
            let mut v = (p, q);
            for g in direction_word(p, q) {
                let m = g.matrix();
                v = (m[0][0] * v.0 + m[0][1] * v.1, m[1][0] * v.0 + m[1][1] * v.1);
            }
            assert_eq!(v.1, 0);
            assert_eq!(v.0.abs(), 1);
        }
        assert!(direction_word(1, 0).is_empty());
    }

    #[test]
    fn other_directions() {
        let o = flagship();
        let cc = o.chain_complex();
        for (p, q) in [(1, 0), (0, 1), (1, 2), (2, -3)] {
            let d = o.cylinders_in_direction(p, q).unwrap();
            assert_eq!(d.circumferences(), vec![6, 6, 2, 2]);
            for c in &d.cylinders {
                assert!(cc.is_cycle(&c.waist));
                let (x, y) = cc.holonomy(&c.waist);
                assert_eq!((x, y), (BigInt::from(c.circumference as i64 * p), BigInt::from(c.circumference as i64 * q)));
            }
            assert_eq!(o.homological_dimension(p, q).unwrap(), 2);
        }
        assert_eq!(Origami::torus().homological_dimension(1, 0).unwrap(), 1);
        assert!(o.cylinders_in_direction(2, 4).is_err());
    }

    #[test]
    fn reducedness() {
        assert!(flagship().is_reduced());
        assert!(Origami::torus().is_reduced());
        let doubled = Origami::from_cycles("(1,2)", "()", Some(2), None).unwrap();
        assert!(!doubled.is_reduced());
        assert!(l_shape().is_reduced());
    }
}
