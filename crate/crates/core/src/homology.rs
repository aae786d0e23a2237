//! Integral homology of an origami from its square tiling.
//!
//! Edge `i` (0-based, `i < n`) is the bottom edge `b_i` of square `i`,
//! oriented left to right; edge `n + i` is the left edge `l_i`, oriented
//! bottom to top. Vertices are the lower-left corners, identified along the
//! cycles of the commutator `v h v⁻¹ h⁻¹`.
//!
//! Intersection numbers are computed by pushing the second cycle onto the
//! dual cell structure (square centres joined across edges) and counting
//! signed crossings, which fixes `⟨b, l⟩ = +1` on the torus.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{integer_kernel, smith_normal_form, IntMatrix, RatMatrix};
use crate::origami::Origami;
use crate::perm::Permutation;

/// Integer coefficients on the `2n` edges.
pub type Chain = Vec<BigInt>;

#[derive(Clone, Debug)]
pub struct ChainComplex {
    pub n: usize,
    pub h: Permutation,
    pub v: Permutation,
    /// Vertex of the lower-left corner of each square.
    pub vertex_of: Vec<usize>,
    pub vertex_count: usize,
    /// Edges to vertices, `vertex_count × 2n`.
    pub d1: IntMatrix,
    /// Faces to edges, `2n × n`.
    pub d2: IntMatrix,
    /// `⟨a, b⟩ = aᵗ · pairing · b` for cycles `a`, `b`.
    pub pairing: IntMatrix,
}

#[cfg(test)]
fn unit(len: usize, i: usize) -> Chain {
    let mut c = vec![BigInt::zero(); len];
    c[i] = BigInt::one();
    c
}

pub fn holonomy_of_chain(chain: &[BigInt], n: usize) -> (BigInt, BigInt) {
    let x = chain[..n].iter().sum();
    let y = chain[n..2 * n].iter().sum();
    (x, y)
}

impl ChainComplex {
    pub fn new(o: &Origami) -> Self {
        let n = o.n();
        let (h, v) = (o.h.clone(), o.v.clone());
        let (vertex_of, vertex_count) = o.corner_vertices();
        let c = o.commutator();
        let (hi, vi) = (h.inverse(), v.inverse());

        let mut d1 = IntMatrix::zeros(vertex_count, 2 * n);
        let add = |m: &mut IntMatrix, r: usize, col: usize, x: i64| {
            m[(r, col)] = &m[(r, col)] + BigInt::from(x);
        };
        for i in 0..n {
            add(&mut d1, vertex_of[h.apply0(i)], i, 1);
            add(&mut d1, vertex_of[i], i, -1);
            add(&mut d1, vertex_of[v.apply0(i)], n + i, 1);
            add(&mut d1, vertex_of[i], n + i, -1);
        }
        let mut d2 = IntMatrix::zeros(2 * n, n);
        for i in 0..n {
            add(&mut d2, i, i, 1);
            add(&mut d2, n + h.apply0(i), i, 1);
            add(&mut d2, v.apply0(i), i, -1);
            add(&mut d2, n + i, i, -1);
        }

        // Dual edges: b*_i (index i) runs from the centre of v⁻¹(i) up to
        // the centre of i; l*_i (index n + i) from the centre of h⁻¹(i) to i.
        // `step(y)` goes counter-clockwise around the lower-left corner of y
        // from the centre of y to the centre of c(y).
        let step = |y: usize| -> Vec<(usize, i64)> {
            let a = hi.apply0(y);
            let b = vi.apply0(a);
            let d = h.apply0(b);
            let e = v.apply0(d);
            debug_assert_eq!(e, c.apply0(y));
            vec![(n + y, -1), (a, -1), (n + d, 1), (e, 1)]
        };
        let root = |x: usize| -> usize {
            let mut best = x;
            let mut y = c.apply0(x);
            while y != x {
                best = best.min(y);
                y = c.apply0(y);
            }
            best
        };
        // dual path from the centre of root(x) to the centre of x
        let connector = |x: usize| -> Vec<(usize, i64)> {
            let mut out = Vec::new();
            let mut y = root(x);
            while y != x {
                out.extend(step(y));
                y = c.apply0(y);
            }
            out
        };
        let mut phi = IntMatrix::zeros(2 * n, 2 * n);
        for e in 0..2 * n {
            let (x, y, shifted) = if e < n {
                (e, h.apply0(e), n + h.apply0(e))
            } else {
                let i = e - n;
                (i, v.apply0(i), v.apply0(i))
            };
            for (k, s) in connector(x) {
                add(&mut phi, k, e, s);
            }
            add(&mut phi, shifted, e, 1);
            for (k, s) in connector(y) {
                add(&mut phi, k, e, -s);
            }
        }
        let mut pairing = phi;
        for r in n..2 * n {
            pairing.negate_row(r);
        }
        ChainComplex { n, h, v, vertex_of, vertex_count, d1, d2, pairing }
    }

    pub fn edge_count(&self) -> usize {
        2 * self.n
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_count as i64 - self.n as i64
    }

    pub fn genus(&self) -> usize {
        ((2 - self.euler_characteristic()) / 2) as usize
    }

    pub fn boundary(&self, chain: &[BigInt]) -> Vec<BigInt> {
        self.d1.mul_vec(chain)
    }

    pub fn is_cycle(&self, chain: &[BigInt]) -> bool {
        chain.len() == 2 * self.n && self.boundary(chain).iter().all(Zero::is_zero)
    }

    pub fn face_boundary(&self, face: usize) -> Chain {
        self.d2.col(face)
    }

    pub fn intersection_number(&self, a: &[BigInt], b: &[BigInt]) -> Result<BigInt> {
        if !self.is_cycle(a) || !self.is_cycle(b) {
            return Err(Error::NotACycle);
        }
        Ok(self.pairing_unchecked(a, b))
    }

    pub(crate) fn pairing_unchecked(&self, a: &[BigInt], b: &[BigInt]) -> BigInt {
        let pb = self.pairing.mul_vec(b);
        a.iter().zip(&pb).map(|(x, y)| x * y).sum()
    }

    pub fn holonomy(&self, chain: &[BigInt]) -> (BigInt, BigInt) {
        holonomy_of_chain(chain, self.n)
    }

    /// Sum of all bottom edges and of all left edges.
    pub fn tautological_chains(&self) -> [Chain; 2] {
        let n = self.n;
        let mut sh = vec![BigInt::zero(); 2 * n];
        let mut sv = vec![BigInt::zero(); 2 * n];
        for i in 0..n {
            sh[i] = BigInt::one();
            sv[n + i] = BigInt::one();
        }
        [sh, sv]
    }

    /// Dimension over Q of the span of the given cycles in homology.
    pub fn homology_rank_of_span(&self, cycles: &[Chain]) -> usize {
        if cycles.is_empty() {
            return 0;
        }
        let extra = IntMatrix::from_columns(2 * self.n, cycles);
        let with = self.d2.hstack(&extra);
        with.rank() - self.d2.rank()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct HomologyBasis {
    /// `2g` cycles forming a Z-basis of `H₁`.
    #[serde(with = "crate::serde_int::vecvec")]
    pub classes: Vec<Chain>,
    pub gram: IntMatrix,
    #[serde(skip)]
    gram_inv_t: IntMatrix,
    pub holonomies: Vec<(i64, i64)>,
}

impl HomologyBasis {
    pub fn rank(&self) -> usize {
        self.classes.len()
    }

    /// Coordinates of a cycle, from its pairings with the basis.
    pub fn coordinates(&self, cc: &ChainComplex, x: &[BigInt]) -> Result<Vec<BigInt>> {
        if !cc.is_cycle(x) {
            return Err(Error::NotACycle);
        }
        let p: Vec<BigInt> = self.classes.iter().map(|e| cc.pairing_unchecked(x, e)).collect();
        Ok(self.gram_inv_t.mul_vec(&p))
    }

    /// The chain `Σ coords[k] · classes[k]`.
    pub fn chain_of(&self, coords: &[BigInt]) -> Chain {
        let len = self.classes.first().map_or(0, Vec::len);
        let mut out = vec![BigInt::zero(); len];
        for (c, e) in coords.iter().zip(&self.classes) {
            if !c.is_zero() {
                for (o, x) in out.iter_mut().zip(e) {
                    *o += c * x;
                }
            }
        }
        out
    }

    /// `2 × 2g` holonomy map on coordinates.
    pub fn holonomy_matrix(&self) -> IntMatrix {
        IntMatrix::from_fn(2, self.rank(), |r, k| {
            let (x, y) = self.holonomies[k];
            BigInt::from(if r == 0 { x } else { y })
        })
    }
}

/// Z-basis of `ker ∂₁ / im ∂₂` via two Smith normal forms.
pub fn h1_basis(cc: &ChainComplex) -> Result<HomologyBasis> {
    let m = cc.edge_count();
    let s1 = smith_normal_form(&cc.d1);
    let r = s1.rank;
    let all: Vec<usize> = (0..m).collect();
    let kcols: Vec<usize> = (r..m).collect();
    let kernel = s1.v.submatrix(&all, &kcols);
    let proj = s1.v_inv.submatrix(&kcols, &all);
    let b = &proj * &cc.d2;
    let s2 = smith_normal_form(&b);
    if s2.invariant_factors().iter().any(|d| !d.is_one()) {
        return Err(Error::InternalInvariantViolation("homology has torsion".into()));
    }
    let adapted = &kernel * &s2.u_inv;
    let classes: Vec<Chain> = (s2.rank..adapted.cols()).map(|j| adapted.col(j)).collect();
    if classes.len() != 2 * cc.genus() {
        return Err(Error::InternalInvariantViolation(format!(
            "rank {} for genus {}",
            classes.len(),
            cc.genus()
        )));
    }
    let gram = IntMatrix::from_fn(classes.len(), classes.len(), |i, j| {
        cc.pairing_unchecked(&classes[i], &classes[j])
    });
    let det = gram.determinant()?;
    if !det.abs().is_one() || !gram.is_skew_symmetric() {
        return Err(Error::InternalInvariantViolation(format!(
            "intersection form of the computed basis has determinant {det}"
        )));
    }
    let gram_inv_t = gram.inverse_unimodular()?.transpose();
    let holonomies = classes
        .iter()
        .map(|c| {
            let (x, y) = cc.holonomy(c);
            (i64::try_from(x).expect("holonomy fits"), i64::try_from(y).expect("holonomy fits"))
        })
        .collect();
    Ok(HomologyBasis { classes, gram, gram_inv_t, holonomies })
}

#[derive(Clone, Debug, Serialize)]
pub struct SplitBasis {
    /// Coordinates (columns) of the tautological classes `Σ bᵢ`, `Σ lᵢ`.
    pub tautological: IntMatrix,
    /// Coordinates (columns) of a Z-basis of the zero-holonomy sublattice.
    pub zero_holonomy: IntMatrix,
    /// Left inverse of `zero_holonomy` on that sublattice.
    #[serde(skip)]
    pub zero_holonomy_proj: IntMatrix,
    pub restricted_gram: IntMatrix,
}

pub fn split_zero_holonomy(cc: &ChainComplex, hb: &HomologyBasis) -> Result<SplitBasis> {
    let hol = hb.holonomy_matrix();
    if hol.rank() < 2 {
        return Err(Error::DegenerateSurface("holonomy map has rank < 2".into()));
    }
    let k = integer_kernel(&hol);
    let taut: Vec<Vec<BigInt>> = cc
        .tautological_chains()
        .iter()
        .map(|c| hb.coordinates(cc, c))
        .collect::<Result<_>>()?;
    let tautological = IntMatrix::from_columns(hb.rank(), &taut);
    let restricted_gram = k.basis.congruent(&hb.gram);
    if restricted_gram.rows() > 0 && restricted_gram.determinant()?.is_zero() {
        return Err(Error::DegenerateSurface("restricted form is degenerate".into()));
    }
    Ok(SplitBasis { tautological, zero_holonomy: k.basis, zero_holonomy_proj: k.proj, restricted_gram })
}

impl SplitBasis {
    pub fn dim(&self) -> usize {
        self.zero_holonomy.cols()
    }

    /// Zero-holonomy coordinates of a class given in basis coordinates.
    pub fn restrict_coordinates(&self, coords: &[BigInt]) -> Result<Vec<BigInt>> {
        let z = self.zero_holonomy_proj.mul_vec(coords);
        if self.zero_holonomy.mul_vec(&z) != coords {
            return Err(Error::DomainError("class has nonzero holonomy".into()));
        }
        Ok(z)
    }
}

/// Independent check of the rank of `H₁`: edges off a spanning tree of the
/// 1-skeleton and off a spanning tree of the dual graph (faces adjacent
/// across the remaining edges) number exactly `2g`.
pub fn tree_cotree_rank(cc: &ChainComplex) -> usize {
    let n = cc.n;
    let mut parent: Vec<usize> = (0..cc.vertex_count.max(n)).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    let endpoints = |e: usize| -> (usize, usize) {
        if e < n {
            (cc.vertex_of[e], cc.vertex_of[cc.h.apply0(e)])
        } else {
            (cc.vertex_of[e - n], cc.vertex_of[cc.v.apply0(e - n)])
        }
    };
    let mut in_tree = vec![false; 2 * n];
    for e in 0..2 * n {
        let (a, b) = endpoints(e);
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
            in_tree[e] = true;
        }
    }
    // faces on either side: b_i separates v⁻¹(i) and i; l_i separates h⁻¹(i) and i
    let (hi, vi) = (cc.h.inverse(), cc.v.inverse());
    let mut fparent: Vec<usize> = (0..n).collect();
    let mut leftover = 0;
    for e in 0..2 * n {
        if in_tree[e] {
            continue;
        }
        let (a, b) = if e < n { (vi.apply0(e), e) } else { (hi.apply0(e - n), e - n) };
        let (ra, rb) = (find(&mut fparent, a), find(&mut fparent, b));
        if ra != rb {
            fparent[ra] = rb;
        } else {
            leftover += 1;
        }
    }
    leftover
}

/// Rational matrix with the given cycles as columns, for exact solves.
pub fn chains_to_rational(chains: &[Chain]) -> RatMatrix {
    let rows = chains.first().map_or(0, Vec::len);
    IntMatrix::from_columns(rows, chains).to_rational()
}
