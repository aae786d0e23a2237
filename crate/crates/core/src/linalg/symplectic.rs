//! Normal form of integral skew-symmetric forms under unimodular change
//! of basis.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::matrix::IntMatrix;
use crate::error::{Error, Result};

#[derive(Clone, Debug, Serialize)]
pub struct SymplecticNormalForm {
    /// Columns are the new basis in old coordinates; `uᵗ·gram·u = form`.
    pub change_of_basis: IntMatrix,
    /// `[[0, D], [-D, 0]]` with `D = diag(divisors)`.
    pub form: IntMatrix,
    #[serde(with = "crate::serde_int::vec")]
    pub divisors: Vec<BigInt>,
}

/// Working state: `basis` columns in original coordinates, `g` the Gram
/// matrix of those columns. Every operation is a congruence.
struct Congruence {
    g: IntMatrix,
    basis: IntMatrix,
}

impl Congruence {
    /// e_dst += f · e_src
    fn add(&mut self, dst: usize, src: usize, f: &BigInt) {
        self.g.add_col_multiple(dst, src, f);
        self.g.add_row_multiple(dst, src, f);
        self.basis.add_col_multiple(dst, src, f);
    }

    fn swap(&mut self, a: usize, b: usize) {
        self.g.swap_cols(a, b);
        self.g.swap_rows(a, b);
        self.basis.swap_cols(a, b);
    }

    fn negate(&mut self, a: usize) {
        self.g.negate_col(a);
        self.g.negate_row(a);
        self.basis.negate_col(a);
    }

    fn smallest_from(&self, t: usize) -> Option<(usize, usize)> {
        let n = self.g.rows();
        let mut best: Option<(usize, usize, BigInt)> = None;
        for i in t..n {
            for j in t..n {
                let x = self.g[(i, j)].abs();
                if !x.is_zero() && best.as_ref().map_or(true, |b| x < b.2) {
                    best = Some((i, j, x));
                }
            }
        }
        best.map(|(i, j, _)| (i, j))
    }
}

/// Finds a unimodular `U` with `Uᵗ·gram·U = [[0, D], [-D, 0]]`,
/// `D = diag(d₁, …, d_g)`, `d₁ | d₂ | …`, all `dᵢ > 0`.
pub fn symplectic_normalize(gram: &IntMatrix) -> Result<SymplecticNormalForm> {
    if !gram.is_skew_symmetric() {
        return Err(Error::ShapeMismatch("form is not skew-symmetric".into()));
    }
    let n = gram.rows();
    if n % 2 == 1 {
        return Err(Error::DegenerateForm);
    }
    let mut w = Congruence { g: gram.clone(), basis: IntMatrix::identity(n) };
    let mut divisors = Vec::new();
    let mut t = 0;
    while t < n {
        let Some((i, j)) = w.smallest_from(t) else {
            return Err(Error::DegenerateForm);
        };
        // bring the pivot to (t, t+1)
        w.swap(t, i);
        let j = if j == t { i } else { j };
        w.swap(t + 1, j);
        if w.g[(t, t + 1)].is_negative() {
            w.negate(t + 1);
        }
        loop {
            let d = w.g[(t, t + 1)].clone();
            let mut improved = false;
            for k in t + 2..n {
                // <e_t, e_k> -= q d  via  e_k -= q e_{t+1}
                let q = w.g[(t, k)].div_floor(&d);
                if !q.is_zero() {
                    w.add(k, t + 1, &-q);
                }
                // <e_{t+1}, e_k> += q d  via  e_k += q e_t   (<e_{t+1}, e_t> = -d)
                let q = w.g[(t + 1, k)].div_floor(&d);
                if !q.is_zero() {
                    w.add(k, t, &q);
                }
                if !w.g[(t, k)].is_zero() || !w.g[(t + 1, k)].is_zero() {
                    improved = true;
                    let (a, b) = if !w.g[(t, k)].is_zero() { (t, k) } else { (t + 1, k) };
                    // smaller nonzero remainder becomes the new pivot
                    if a == t {
                        w.swap(t + 1, b);
                    } else {
                        w.swap(t, b);
                        w.swap(t, t + 1);
                    }
                    if w.g[(t, t + 1)].is_negative() {
                        w.negate(t + 1);
                    }
                    break;
                }
            }
            if improved {
                continue;
            }
            // rows t, t+1 are now clear; enforce divisibility on the rest
            let bad = (t + 2..n)
                .flat_map(|a| (t + 2..n).map(move |b| (a, b)))
                .find(|&(a, b)| !w.g[(a, b)].is_multiple_of(&d));
            match bad {
                Some((a, _)) => w.add(t, a, &BigInt::one()),
                None => break,
            }
        }
        divisors.push(w.g[(t, t + 1)].clone());
        t += 2;
    }
    // reorder (e1, f1, e2, f2, ...) into (e1, e2, ..., f1, f2, ...)
    let g = n / 2;
    let order: Vec<usize> = (0..g).map(|k| 2 * k).chain((0..g).map(|k| 2 * k + 1)).collect();
    let all: Vec<usize> = (0..n).collect();
    let change = w.basis.submatrix(&all, &order);
    let form = change.congruent(gram);
    debug_assert_eq!(form, standard_form(&divisors));
    Ok(SymplecticNormalForm { change_of_basis: change, form, divisors })
}

/// `[[0, D], [-D, 0]]` for `D = diag(divisors)`.
pub fn standard_form(divisors: &[BigInt]) -> IntMatrix {
    let g = divisors.len();
    let mut j = IntMatrix::zeros(2 * g, 2 * g);
    for (k, d) in divisors.iter().enumerate() {
        j[(k, g + k)] = d.clone();
        j[(g + k, k)] = -d.clone();
    }
    j
}

pub fn standard_symplectic(genus: usize) -> IntMatrix {
    standard_form(&vec![BigInt::one(); genus])
}

/// For divisors that are all perfect squares `sᵢ²`, the lattice obtained by
/// scaling each normal-form pair `(eᵢ, fᵢ)` by `1/sᵢ` carries the standard
/// unimodular form. When `gcd(k, sᵢ²) = sᵢ` for `k = lcm(sᵢ)` that lattice is
/// `L^# ∩ (1/k)L`, which every isometry of `L` preserves.
///
/// Returns the rational change of basis as (numerators, common denominator):
/// the new basis vectors are `columns / denominator` in the coordinates of
/// the normalized basis.
pub fn invariant_unimodular_overlattice(divisors: &[BigInt]) -> Result<(Vec<BigInt>, BigInt)> {
    let roots: Option<Vec<BigInt>> = divisors
        .iter()
        .map(|d| {
            let s = d.sqrt();
            (&s * &s == *d).then_some(s)
        })
        .collect();
    let not_ok = || Error::NotUnimodularizable(divisors.iter().map(ToString::to_string).collect());
    let roots = roots.ok_or_else(not_ok)?;
    let k = roots.iter().fold(BigInt::one(), |acc, s| acc.lcm(s));
    for (s, d) in roots.iter().zip(divisors) {
        if k.gcd(d) != *s {
            return Err(not_ok());
        }
    }
    Ok((roots, k))
}
