//! Reduction of the monodromy modulo 2 and exact closure of finite
//! matrix groups.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::symplectic::invariant_unimodular_overlattice;
use crate::linalg::{symplectic_normalize, IntMatrix, RatMatrix};
use crate::monodromy::preserves_form;

/// Order of `Sp(2g, F_q)`: `q^{g²} · Π_{i=1..g} (q^{2i} − 1)`.
pub fn symplectic_group_order(genus: u32, q: u64) -> BigInt {
    let q = BigInt::from(q);
    let mut acc = q.pow(genus * genus);
    for i in 1..=genus {
        acc *= q.pow(2 * i) - 1;
    }
    acc
}

/// Rewrites generators preserving a nondegenerate form on the invariant
/// unimodular overlattice; returns the generators and the standard form.
pub fn unimodular_model(generators: &[IntMatrix], gram: &IntMatrix) -> Result<(Vec<IntMatrix>, IntMatrix)> {
    let nf = symplectic_normalize(gram)?;
    let (roots, _) = invariant_unimodular_overlattice(&nf.divisors)?;
    let g = roots.len();
    let scale: Vec<BigRational> = (0..2 * g).map(|i| BigRational::from_integer(roots[i % g].clone())).collect();
    // B = U·diag(1/s), B⁻¹ = diag(s)·U⁻¹
    let u = nf.change_of_basis.to_rational();
    let b = RatMatrix::from_fn(2 * g, 2 * g, |i, j| &u[(i, j)] / &scale[j]);
    let b_inv = b.inverse()?;
    let form = (&(&b.transpose() * &gram.to_rational()) * &b).to_integer().ok_or_else(|| {
        Error::InternalInvariantViolation("overlattice form is not integral".into())
    })?;
    let gens = generators
        .iter()
        .map(|m| {
            (&(&b_inv * &m.to_rational()) * &b).to_integer().ok_or_else(|| {
                Error::InternalInvariantViolation("generator does not preserve the overlattice".into())
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((gens, form))
}

#[derive(Clone, Debug, Serialize)]
pub struct CongruenceImageReport {
    pub modulus: u64,
    #[serde(with = "crate::serde_int")]
    pub ambient_order: BigInt,
    pub image_order: u64,
    #[serde(with = "crate::serde_int")]
    pub index: BigInt,
    pub generator_count: usize,
}

/// `n × n` matrix over F₂ packed row-major, one byte per row (`n ≤ 8`).
type BitMatrix = u64;

fn pack_mod2(m: &IntMatrix) -> BitMatrix {
    let two = BigInt::from(2);
    let mut out = 0u64;
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let r = ((&m[(i, j)] % &two) + &two) % &two;
            if !r.is_zero() {
                out |= 1 << (8 * i + j);
            }
        }
    }
    out
}

fn bit_identity(n: usize) -> BitMatrix {
    (0..n).fold(0, |acc, i| acc | 1 << (9 * i))
}

fn bit_mul(a: BitMatrix, b: BitMatrix, n: usize) -> BitMatrix {
    let mut out = 0u64;
    for i in 0..n {
        let row = (a >> (8 * i)) & 0xff;
        let mut acc = 0u64;
        for j in 0..n {
            if row & (1 << j) != 0 {
                acc ^= (b >> (8 * j)) & 0xff;
            }
        }
        out |= acc << (8 * i);
    }
    out
}

/// Image of the group generated by `generators` in `Sp(2g, F₂)`; `gram`
/// must be unimodular (see [`unimodular_model`]).
pub fn congruence_image_mod2(generators: &[IntMatrix], gram: &IntMatrix) -> Result<CongruenceImageReport> {
    let n = gram.rows();
    if n % 2 != 0 || n > 8 || !gram.is_square() {
        return Err(Error::ShapeMismatch(format!("form of size {n} not supported")));
    }
    if !gram.determinant()?.is_one() || !gram.is_skew_symmetric() {
        return Err(Error::DomainError("form is not unimodular and skew".into()));
    }
    for m in generators {
        if m.rows() != n || !preserves_form(m, gram) {
            return Err(Error::FormViolation("generator does not preserve the form".into()));
        }
    }
    let ambient_order = symplectic_group_order((n / 2) as u32, 2);
    let limit = ambient_order.to_u64().expect("ambient order fits");
    let gens: Vec<BitMatrix> = generators.iter().map(pack_mod2).collect();
    let id = bit_identity(n);
    let mut seen: HashSet<BitMatrix> = HashSet::from([id]);
    let mut frontier = vec![id];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for &x in &frontier {
            for &g in &gens {
                let y = bit_mul(x, g, n);
                if seen.insert(y) {
                    next.push(y);
                }
            }
        }
        if seen.len() as u64 > limit {
            return Err(Error::InternalInvariantViolation("closure exceeds the ambient order".into()));
        }
        frontier = next;
    }
    let image_order = seen.len() as u64;
    let index = &ambient_order / image_order;
    if &index * image_order != ambient_order {
        return Err(Error::InternalInvariantViolation("image order does not divide the ambient order".into()));
    }
    Ok(CongruenceImageReport { modulus: 2, ambient_order, image_order, index, generator_count: generators.len() })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FiniteGroupResult {
    Finite { order: usize },
    BudgetExceeded { explored: usize },
}

/// Exact closure of the group generated by integer matrices.
pub fn detect_finite_group(generators: &[IntMatrix], element_budget: usize) -> Result<FiniteGroupResult> {
    let n = generators.first().map_or(0, |g| g.rows());
    if generators.iter().any(|g| !g.is_square() || g.rows() != n) {
        return Err(Error::ShapeMismatch("generators differ in size".into()));
    }
    let id = IntMatrix::identity(n);
    let key = |m: &IntMatrix| m.to_rows();
    let mut seen: HashSet<Vec<Vec<BigInt>>> = HashSet::from([key(&id)]);
    let mut frontier = vec![id];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for x in &frontier {
            for g in generators {
                let y = x * g;
                if seen.insert(key(&y)) {
                    if seen.len() > element_budget {
                        return Ok(FiniteGroupResult::BudgetExceeded { explored: seen.len() });
                    }
                    next.push(y);
                }
            }
        }
        frontier = next;
    }
    Ok(FiniteGroupResult::Finite { order: seen.len() })
}
