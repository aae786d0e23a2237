//! Action of the affine maps realizing T and S on homology.
//!
//! For a generator `g` the affine map with derivative `g` sends the tiling
//! of `X` onto the tiling of `g(X)` square by square; `edge_map` records the
//! induced map on edge chains. When `g(X)` is a relabeling of `X` by `ψ`,
//! composing with the relabeling gives a chain automorphism of `X`.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::homology::{h1_basis, split_zero_holonomy, ChainComplex, HomologyBasis, SplitBasis};
use crate::linalg::IntMatrix;
use crate::origami::{Origami, VeechGenerator};
use crate::perm::Permutation;

/// Chain map `C(X) → C(g(X))` on edges, as a `2n × 2n` matrix acting on
/// columns. Bottom edges come first, then left edges.
pub fn edge_map(o: &Origami, g: VeechGenerator) -> IntMatrix {
    let n = o.n();
    let mut m = IntMatrix::zeros(2 * n, 2 * n);
    let (b, l) = (|i: usize| i, |i: usize| n + i);
    let mut set = |row: usize, col: usize, x: i64| m[(row, col)] = BigInt::from(x);
    let (h, v) = (&o.h, &o.v);
    for i in 0..n {
        match g {
            VeechGenerator::T => {
                set(b(i), b(i), 1);
                set(b(i), l(i), 1);
                set(l(h.apply0(i)), l(i), 1);
            }
            VeechGenerator::TInv => {
                let j = h.inverse().apply0(i);
                set(b(i), b(i), 1);
                set(l(j), l(i), 1);
                set(b(j), l(i), -1);
            }
            VeechGenerator::S => {
                set(l(i), l(i), 1);
                set(l(i), b(i), 1);
                set(b(v.apply0(i)), b(i), 1);
            }
            VeechGenerator::SInv => {
                let j = v.inverse().apply0(i);
                set(l(i), l(i), 1);
                set(l(j), b(i), -1);
                set(b(j), b(i), 1);
            }
        }
    }
    m
}

/// Relabeling `C(Y) → C(X)` sending the edges of square `i` to those of
/// square `ψ(i)`.
pub fn relabel_map(psi: &Permutation) -> IntMatrix {
    let n = psi.degree();
    let mut m = IntMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        let j = psi.apply0(i);
        m[(j, i)] = BigInt::one();
        m[(n + j, n + i)] = BigInt::one();
    }
    m
}

/// Chain automorphism of `X` induced by the affine map with derivative `g`.
pub fn chain_automorphism(o: &Origami, g: VeechGenerator) -> Result<IntMatrix> {
    let psi = o.veech_conjugator(g).ok_or(Error::NotInVeechGroup(g.letter()))?;
    Ok(&relabel_map(&psi) * &edge_map(o, g))
}

#[derive(Clone, Debug, Serialize)]
pub struct MonodromyPair {
    pub full_t: IntMatrix,
    pub full_s: IntMatrix,
    pub restricted_t: IntMatrix,
    pub restricted_s: IntMatrix,
    pub basis: HomologyBasis,
    pub split: SplitBasis,
    #[serde(skip)]
    pub chain_t: IntMatrix,
    #[serde(skip)]
    pub chain_s: IntMatrix,
}

fn matrix_on_basis(cc: &ChainComplex, hb: &HomologyBasis, chain_map: &IntMatrix) -> Result<IntMatrix> {
    let cols: Vec<Vec<BigInt>> = hb
        .classes
        .iter()
        .map(|c| hb.coordinates(cc, &chain_map.mul_vec(c)))
        .collect::<Result<_>>()?;
    Ok(IntMatrix::from_columns(hb.rank(), &cols))
}

fn restrict(split: &SplitBasis, full: &IntMatrix) -> Result<IntMatrix> {
    let z = &split.zero_holonomy;
    let r = &(&split.zero_holonomy_proj * full) * z;
    if &(full * z) != &(z * &r) {
        return Err(Error::InternalInvariantViolation(
            "monodromy does not preserve the zero-holonomy sublattice".into(),
        ));
    }
    Ok(r)
}

/// Full and zero-holonomy monodromy of T and S on a surface whose Veech
/// group is all of SL(2,Z).
pub fn induced_matrices(o: &Origami) -> Result<MonodromyPair> {
    let cc = o.chain_complex();
    let basis = h1_basis(&cc)?;
    let split = split_zero_holonomy(&cc, &basis)?;
    let chain_t = chain_automorphism(o, VeechGenerator::T)?;
    let chain_s = chain_automorphism(o, VeechGenerator::S)?;
    let full_t = matrix_on_basis(&cc, &basis, &chain_t)?;
    let full_s = matrix_on_basis(&cc, &basis, &chain_s)?;
    let hol = basis.holonomy_matrix();
    for (m, g) in [(&full_t, VeechGenerator::T), (&full_s, VeechGenerator::S)] {
        let gm = g.matrix();
        let g2 = IntMatrix::from_i64_rows(&[&gm[0], &gm[1]]);
        if &hol * m != &g2 * &hol {
            return Err(Error::InternalInvariantViolation(format!(
                "holonomy is not equivariant under {}",
                g.letter()
            )));
        }
    }
    let restricted_t = restrict(&split, &full_t)?;
    let restricted_s = restrict(&split, &full_s)?;
    Ok(MonodromyPair { full_t, full_s, restricted_t, restricted_s, basis, split, chain_t, chain_s })
}

impl MonodromyPair {
    pub fn monodromy_of_word(&self, word: &str) -> Result<IntMatrix> {
        evaluate_word(word, &[('T', self.restricted_t.clone()), ('S', self.restricted_s.clone())])
    }

    pub fn full_monodromy_of_word(&self, word: &str) -> Result<IntMatrix> {
        evaluate_word(word, &[('T', self.full_t.clone()), ('S', self.full_s.clone())])
    }

    /// Action on the tautological plane in the basis `(Σ bᵢ, Σ lᵢ)`.
    pub fn tautological_block(&self, g: VeechGenerator) -> Result<IntMatrix> {
        let full = match g {
            VeechGenerator::T => self.full_t.clone(),
            VeechGenerator::S => self.full_s.clone(),
            VeechGenerator::TInv => self.full_t.inverse_unimodular()?,
            VeechGenerator::SInv => self.full_s.inverse_unimodular()?,
        };
        let tau = &self.split.tautological;
        let img = &full * tau;
        // tau has full column rank: solve tauᵗ tau x = tauᵗ img exactly
        let (tq, iq) = (tau.to_rational(), img.to_rational());
        let tt = tq.transpose();
        let x = (&tt * &tq).solve(&(&tt * &iq))?;
        if &tq * &x != iq {
            return Err(Error::InternalInvariantViolation("tautological plane not invariant".into()));
        }
        x.to_integer()
            .ok_or_else(|| Error::InternalInvariantViolation("non-integral tautological block".into()))
    }
}

/// Parses words like `"STST^20"` or `"ABabC^3a"`: letters from the
/// alphabet, lowercase for inverses, `^k` for powers, blanks ignored.
pub fn parse_word(word: &str, alphabet: &[char]) -> Result<Vec<(char, bool, u64)>> {
    let mut out: Vec<(char, bool, u64)> = Vec::new();
    let mut chars = word.chars().peekable();
    while let Some(c) = chars.next() {
        if c.is_whitespace() || c == '*' {
            continue;
        }
        if c == '^' {
            let mut digits = String::new();
            while let Some(&d) = chars.peek() {
                if d.is_ascii_digit() {
                    digits.push(d);
                    chars.next();
                } else {
                    break;
                }
            }
            let k: u64 = digits
                .parse()
                .map_err(|_| Error::MalformedWord(format!("bad exponent in {word:?}")))?;
            let last = out
                .last_mut()
                .ok_or_else(|| Error::MalformedWord(format!("exponent without letter in {word:?}")))?;
            if last.2 != 1 {
                return Err(Error::MalformedWord(format!("double exponent in {word:?}")));
            }
            last.2 = k;
            continue;
        }
        let upper = c.to_ascii_uppercase();
        if !alphabet.contains(&upper) {
            return Err(Error::MalformedWord(format!("unknown letter {c:?} in {word:?}")));
        }
        out.push((upper, c.is_ascii_lowercase(), 1));
    }
    Ok(out)
}

/// Product of the letters' matrices in the order written.
pub fn evaluate_word(word: &str, gens: &[(char, IntMatrix)]) -> Result<IntMatrix> {
    let alphabet: Vec<char> = gens.iter().map(|g| g.0).collect();
    let letters = parse_word(word, &alphabet)?;
    let dim = gens.first().map_or(0, |g| g.1.rows());
    let mut acc = IntMatrix::identity(dim);
    let mut inverses: Vec<Option<IntMatrix>> = vec![None; gens.len()];
    for (c, inv, k) in letters {
        let idx = alphabet.iter().position(|&a| a == c).expect("parsed letter");
        let m = if inv {
            if inverses[idx].is_none() {
                inverses[idx] = Some(gens[idx].1.inverse_unimodular()?);
            }
            inverses[idx].clone().unwrap()
        } else {
            gens[idx].1.clone()
        };
        acc = &acc * &m.pow(k);
    }
    Ok(acc)
}

/// Checks `Mᵗ · form · M = form`.
pub fn preserves_form(m: &IntMatrix, form: &IntMatrix) -> bool {
    m.congruent(form) == *form
}

pub fn is_zero_vec(v: &[BigInt]) -> bool {
    v.iter().all(Zero::is_zero)
}
