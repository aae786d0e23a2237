//! Dehn multitwists, their transvection shadows on a 3-space, and the
//! arithmeticity witness search.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::homology::{HomologyBasis, SplitBasis};
use crate::linalg::{IntMatrix, RatMatrix};
use crate::monodromy::{evaluate_word, MonodromyPair};
use crate::origami::Origami;

fn rat(x: &BigInt) -> BigRational {
    BigRational::from_integer(x.clone())
}

/// `xᵗ · form · y`.
pub fn pairing(x: &[BigInt], y: &[BigInt], form: &IntMatrix) -> BigInt {
    x.iter().zip(form.mul_vec(y)).map(|(a, b)| a * b).sum()
}

fn pairing_q(x: &[BigRational], y: &[BigRational], form: &IntMatrix) -> BigRational {
    let f = form.to_rational();
    x.iter().zip(f.mul_vec(y)).map(|(a, b)| a * b).sum()
}

/// `X ↦ X + Σ kᵢ⟨X, cᵢ⟩cᵢ`, as the matrix `I + Σ kᵢ cᵢ (form·cᵢ)ᵗ`.
pub fn multitwist_operator(waists: &[(Vec<BigInt>, BigInt)], form: &IntMatrix) -> Result<IntMatrix> {
    let n = form.rows();
    if !form.is_square() || waists.iter().any(|(c, _)| c.len() != n) {
        return Err(Error::ShapeMismatch("waist classes and form disagree in size".into()));
    }
    for (i, (a, _)) in waists.iter().enumerate() {
        for (b, _) in &waists[i + 1..] {
            if !pairing(a, b, form).is_zero() {
                return Err(Error::NotParallel);
            }
        }
    }
    let mut m = IntMatrix::identity(n);
    for (c, k) in waists {
        // ⟨X, c⟩ = Xᵗ·form·c
        let fc = form.mul_vec(c);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] += k * &c[i] * &fc[j];
            }
        }
    }
    Ok(m)
}

/// `e = −(⟨w3,w2⟩/⟨w1,w2⟩)·w1 − (⟨w3,w1⟩/⟨w2,w1⟩)·w2 + w3`, orthogonal to
/// `w1` and `w2`.
pub fn annihilator(w1: &[BigInt], w2: &[BigInt], w3: &[BigInt], form: &IntMatrix) -> Result<Vec<BigRational>> {
    let d12 = pairing(w1, w2, form);
    let d21 = pairing(w2, w1, form);
    if d12.is_zero() || d21.is_zero() {
        return Err(Error::DegenerateConfiguration("w1 and w2 pair to zero".into()));
    }
    let a = -BigRational::new(pairing(w3, w2, form), d12);
    let b = -BigRational::new(pairing(w3, w1, form), d21);
    Ok((0..w1.len()).map(|i| &a * rat(&w1[i]) + &b * rat(&w2[i]) + rat(&w3[i])).collect())
}

#[derive(Clone, Debug, Serialize)]
pub struct WaistGroup {
    /// Class in the coordinates of the ambient homology basis.
    #[serde(with = "crate::serde_int::vec")]
    pub class: Vec<BigInt>,
    pub circumference: u64,
    pub cylinders: usize,
    /// Sum of the twist numbers of the cylinders carrying this class.
    pub twist: u64,
}

/// Multitwist data in one rational direction with two waist classes.
#[derive(Clone, Debug, Serialize)]
pub struct TransvectionDatum {
    pub direction: (i64, i64),
    pub waists: Vec<WaistGroup>,
    /// `c_S·L − c_L·S` in zero-holonomy coordinates.
    #[serde(with = "crate::serde_int::vec")]
    pub w: Vec<BigInt>,
    /// The multitwist acts on zero holonomy as `X ↦ X + coefficient·⟨X,w⟩·w`.
    #[serde(serialize_with = "crate::serde_int::rational::serialize")]
    pub coefficient: BigRational,
}

/// Cylinder data in direction `(p, q)` and the rank-one action of its
/// multitwist on zero holonomy.
pub fn direction_datum(
    o: &Origami,
    basis: &HomologyBasis,
    split: &SplitBasis,
    direction: (i64, i64),
) -> Result<TransvectionDatum> {
    let cc = o.chain_complex();
    let dec = o.cylinders_in_direction(direction.0, direction.1)?;
    // twist numbers kᵢ = m·hᵢ/cᵢ for the least m making them integral
    let m = dec.cylinders.iter().fold(1u64, |acc, c| {
        let (ci, hi) = (c.circumference as u64, c.height as u64);
        acc.lcm(&(ci / ci.gcd(&hi)))
    });
    let mut groups: Vec<WaistGroup> = Vec::new();
    for cyl in &dec.cylinders {
        let class = basis.coordinates(&cc, &cyl.waist)?;
        let k = m * cyl.height as u64 / cyl.circumference as u64;
        match groups.iter_mut().find(|g| g.class == class) {
            Some(g) => {
                g.cylinders += 1;
                g.twist += k;
            }
            None => groups.push(WaistGroup {
                class,
                circumference: cyl.circumference as u64,
                cylinders: 1,
                twist: k,
            }),
        }
    }
    if groups.len() != 2 {
        return Err(Error::DegenerateConfiguration(format!(
            "direction {direction:?} has {} waist classes, expected 2",
            groups.len()
        )));
    }
    groups.sort_by(|a, b| b.circumference.cmp(&a.circumference));
    let (long, short) = (&groups[0], &groups[1]);
    let cl = BigInt::from(long.circumference);
    let cs = BigInt::from(short.circumference);
    let w_full: Vec<BigInt> = long.class.iter().zip(&short.class).map(|(l, s)| &cs * l - &cl * s).collect();
    let w = split.restrict_coordinates(&w_full)?;
    if w.iter().all(Zero::is_zero) {
        return Err(Error::DegenerateConfiguration(format!("direction {direction:?} has homologous waists")));
    }

    let twists: Vec<(Vec<BigInt>, BigInt)> = groups.iter().map(|g| (g.class.clone(), BigInt::from(g.twist))).collect();
    let full = multitwist_operator(&twists, &basis.gram)?;
    let z = &split.zero_holonomy;
    let restricted = &(&split.zero_holonomy_proj * &full) * z;
    let gram0 = &split.restricted_gram;
    let fw = gram0.mul_vec(&w);
    let delta = &restricted - &IntMatrix::identity(w.len());
    // delta = coefficient · w·(gram0·w)ᵗ, read off at a nonzero entry
    let (i, j) = (0..w.len())
        .flat_map(|i| (0..w.len()).map(move |j| (i, j)))
        .find(|&(i, j)| !(&w[i] * &fw[j]).is_zero())
        .ok_or_else(|| Error::DegenerateConfiguration("w is isotropic for every vector".into()))?;
    let coefficient = BigRational::new(delta[(i, j)].clone(), &w[i] * &fw[j]);
    for i in 0..w.len() {
        for j in 0..w.len() {
            if rat(&delta[(i, j)]) != &coefficient * rat(&(&w[i] * &fw[j])) {
                return Err(Error::InternalInvariantViolation(format!(
                    "multitwist in direction {direction:?} is not a rank-one transvection on zero holonomy"
                )));
            }
        }
    }
    Ok(TransvectionDatum { direction, waists: groups, w, coefficient })
}

/// Transvections `X ↦ X + λᵢ⟨X,wᵢ⟩wᵢ` in the basis `{w1, w3, e}`, where `e`
/// is the annihilator of `w1`, `w2` inside their span with `w3`.
pub fn transvection_matrices(
    ws: [&[BigInt]; 3],
    coefficients: [&BigRational; 3],
    form: &IntMatrix,
) -> Result<(Vec<BigRational>, [RatMatrix; 3])> {
    let e = annihilator(ws[0], ws[1], ws[2], form)?;
    let n = e.len();
    let wq: Vec<Vec<BigRational>> = ws.iter().map(|w| w.iter().map(rat).collect()).collect();
    let basis = RatMatrix::from_columns(n, &[wq[0].clone(), wq[2].clone(), e.clone()]);
    if basis.rank() < 3 {
        return Err(Error::DegenerateConfiguration("w1, w2, w3 do not span a 3-space".into()));
    }
    let mut out = Vec::new();
    for (w, lam) in wq.iter().zip(coefficients) {
        let images: Vec<Vec<BigRational>> = (0..3)
            .map(|k| {
                let x = basis.col(k);
                let s = lam * pairing_q(&x, w, form);
                x.iter().zip(w).map(|(a, b)| a + &s * b).collect()
            })
            .collect();
        let rhs = RatMatrix::from_columns(n, &images);
        out.push(basis.solve(&rhs)?);
    }
    let [a, b, c]: [RatMatrix; 3] = out.try_into().expect("three matrices");
    Ok((e, [a, b, c]))
}

/// Identity-free unipotent supported in the last row: `[[I,0],[r,1]]`, `r ≠ 0`.
pub fn is_witness(m: &IntMatrix) -> bool {
    let n = m.rows();
    if n == 0 || !m.is_square() {
        return false;
    }
    let mut last_row_nonzero = false;
    for i in 0..n {
        for j in 0..n {
            let expected = if i == j { BigInt::one() } else { BigInt::zero() };
            if i == n - 1 && j < n - 1 {
                last_row_nonzero |= !m[(i, j)].is_zero();
            } else if m[(i, j)] != expected {
                return false;
            }
        }
    }
    last_row_nonzero
}

#[derive(Clone, Debug, Serialize)]
pub struct ArithmeticityCertificate {
    pub data: Vec<TransvectionDatum>,
    #[serde(with = "crate::serde_int::vec")]
    pub w1: Vec<BigInt>,
    #[serde(with = "crate::serde_int::vec")]
    pub w2: Vec<BigInt>,
    #[serde(with = "crate::serde_int::vec")]
    pub w3: Vec<BigInt>,
    #[serde(with = "crate::serde_int::rational::vec")]
    pub e: Vec<BigRational>,
    /// `e` as a combination of `w1, w2, w3`.
    #[serde(with = "crate::serde_int::rational::vec")]
    pub e_combination: Vec<BigRational>,
    /// Matrices of the three transvections in the basis `{w1, w3, e}`.
    pub transvections: Vec<IntMatrix>,
    pub witness_word: String,
    pub witness_matrix: IntMatrix,
    /// Whether the witness came from the supplied word or from the search.
    pub searched: bool,
    pub verdict: bool,
}

/// Coefficients `(a, b, c)` with `v = a·w1 + b·w2 + c·w3`.
fn combination(v: &[BigRational], ws: [&[BigInt]; 3]) -> Result<Vec<BigRational>> {
    let n = v.len();
    let cols: Vec<Vec<BigRational>> = ws.iter().map(|w| w.iter().map(rat).collect()).collect();
    let m = RatMatrix::from_columns(n, &cols);
    let rhs = RatMatrix::from_columns(n, &[v.to_vec()]);
    Ok(m.solve(&rhs)?.col(0))
}

/// Builds the three transvections from `data` (with `form` the pairing on
/// the coordinates of the `w`s), tries `word` on them (letters `A`, `B`,
/// `C`), and otherwise searches words up to `search_depth` for a witness.
pub fn arithmeticity_certificate(
    data: &[TransvectionDatum; 3],
    form: &IntMatrix,
    word: Option<&str>,
    search_depth: usize,
) -> Result<ArithmeticityCertificate> {
    let ws = [&data[0].w[..], &data[1].w[..], &data[2].w[..]];
    let coefficients = [&data[0].coefficient, &data[1].coefficient, &data[2].coefficient];
    let (e, mats) = transvection_matrices(ws, coefficients, form)?;
    let transvections: Vec<IntMatrix> = mats
        .iter()
        .map(|m| {
            m.to_integer()
                .ok_or_else(|| Error::DegenerateConfiguration(format!("non-integral transvection {m}")))
        })
        .collect::<Result<_>>()?;
    let e_combination = combination(&e, ws)?;
    certify_with_matrices(data.to_vec(), ws, e, e_combination, transvections, word, search_depth)
}

/// As [`arithmeticity_certificate`] but with the transvection matrices given.
pub fn arithmeticity_from_matrices(
    transvections: &[IntMatrix; 3],
    word: Option<&str>,
    search_depth: usize,
) -> Result<(String, IntMatrix, bool)> {
    let gens: Vec<(char, IntMatrix)> = "ABC".chars().zip(transvections.iter().cloned()).collect();
    if let Some(word) = word {
        let m = evaluate_word(word, &gens)?;
        if is_witness(&m) {
            return Ok((word.to_string(), m, false));
        }
    }
    let (w, m) = search_witness(transvections, search_depth)?;
    Ok((w, m, true))
}

fn certify_with_matrices(
    data: Vec<TransvectionDatum>,
    ws: [&[BigInt]; 3],
    e: Vec<BigRational>,
    e_combination: Vec<BigRational>,
    transvections: Vec<IntMatrix>,
    word: Option<&str>,
    search_depth: usize,
) -> Result<ArithmeticityCertificate> {
    let arr: [IntMatrix; 3] = transvections.clone().try_into().expect("three matrices");
    let (witness_word, witness_matrix, searched) = arithmeticity_from_matrices(&arr, word, search_depth)?;
    let verdict = is_witness(&witness_matrix);
    Ok(ArithmeticityCertificate {
        data,
        w1: ws[0].to_vec(),
        w2: ws[1].to_vec(),
        w3: ws[2].to_vec(),
        e,
        e_combination,
        transvections,
        witness_word,
        witness_matrix,
        searched,
        verdict,
    })
}

/// Geometric pipeline: multitwists in three directions of `o`.
pub fn arithmeticity_for_origami(
    o: &Origami,
    mp: &MonodromyPair,
    directions: [(i64, i64); 3],
    word: Option<&str>,
    search_depth: usize,
) -> Result<ArithmeticityCertificate> {
    let data: Vec<TransvectionDatum> = directions
        .iter()
        .map(|&d| direction_datum(o, &mp.basis, &mp.split, d))
        .collect::<Result<_>>()?;
    let data: [TransvectionDatum; 3] = data.try_into().expect("three directions");
    arithmeticity_certificate(&data, &mp.split.restricted_gram, word, search_depth)
}

/// Inverse of a word over `A, B, C` with lowercase inverses.
fn invert_word(letters: &[u8]) -> Vec<u8> {
    letters.iter().rev().map(|&c| c ^ 0x20).collect()
}

fn compress(letters: &[u8]) -> String {
    let mut out = String::new();
    let mut i = 0;
    while i < letters.len() {
        let mut j = i;
        while j < letters.len() && letters[j] == letters[i] {
            j += 1;
        }
        out.push(letters[i] as char);
        if j - i > 1 {
            out.push_str(&format!("^{}", j - i));
        }
        i = j;
    }
    out
}

/// Meet-in-the-middle search. All three generators fix the last basis
/// vector, so they are `[[P,0],[r,1]]`; two words `u`, `v` with the same
/// `P` and different `r` give the witness `u·v⁻¹ = [[I,0],[(r_u−r_v)P⁻¹,1]]`.
fn search_witness(gens: &[IntMatrix; 3], depth: usize) -> Result<(String, IntMatrix)> {
    let n = gens[0].rows();
    let fixes_last = |m: &IntMatrix| (0..n).all(|i| m[(i, n - 1)] == if i == n - 1 { BigInt::one() } else { BigInt::zero() });
    if n < 2 || !gens.iter().all(fixes_last) {
        return Err(Error::NoWitnessFound { depth });
    }
    let mut letters: Vec<(u8, IntMatrix)> = Vec::new();
    for (k, g) in gens.iter().enumerate() {
        letters.push((b'A' + k as u8, g.clone()));
        letters.push((b'a' + k as u8, g.inverse_unimodular()?));
    }
    let key = |m: &IntMatrix| -> Vec<BigInt> {
        (0..n - 1).flat_map(|i| (0..n - 1).map(move |j| (i, j))).map(|(i, j)| m[(i, j)].clone()).collect()
    };
    let row = |m: &IntMatrix| -> Vec<BigInt> { (0..n - 1).map(|j| m[(n - 1, j)].clone()).collect() };
    let half = depth.div_ceil(2);
    // P → words with pairwise distinct r
    let mut table: HashMap<Vec<BigInt>, Vec<(Vec<u8>, IntMatrix)>> = HashMap::new();
    table.entry(key(&IntMatrix::identity(n))).or_default().push((Vec::new(), IntMatrix::identity(n)));
    let mut frontier: Vec<(Vec<u8>, IntMatrix)> = vec![(Vec::new(), IntMatrix::identity(n))];
    let mut best: Option<(Vec<u8>, IntMatrix)> = None;
    for _ in 0..half {
        let mut next = Vec::new();
        for (w, m) in &frontier {
            for (c, g) in &letters {
                if w.last().is_some_and(|&l| l == c ^ 0x20) {
                    continue;
                }
                let mut w2 = w.clone();
                w2.push(*c);
                let m2 = m * g;
                let bucket = table.entry(key(&m2)).or_default();
                let r2 = row(&m2);
                let mut fresh = true;
                for (v, mv) in bucket.iter() {
                    if row(mv) == r2 {
                        fresh = false;
                        continue;
                    }
                    if w2.len() + v.len() > depth {
                        continue;
                    }
                    let mut cand = w2.clone();
                    cand.extend(invert_word(v));
                    if best.as_ref().is_none_or(|(b, _)| cand.len() < b.len()) {
                        let prod = &m2 * &mv.inverse_unimodular()?;
                        best = Some((cand, prod));
                    }
                }
                if fresh {
                    bucket.push((w2.clone(), m2.clone()));
                    next.push((w2, m2));
                }
            }
        }
        if let Some((w, m)) = best {
            debug_assert!(is_witness(&m));
            return Ok((compress(&w), m));
        }
        frontier = next;
    }
    Err(Error::NoWitnessFound { depth })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monodromy::induced_matrices;

    fn v(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn flagship() -> Origami {
        Origami::from_cycles(
            "(1,2,3,4,5,6)(12,11,10,9,8,7)(13,14)(15,16)",
            "(12,2,16,14,10,6)(11,5,15,13,7,1)(3,9)(4,8)",
            None,
            None,
        )
        .unwrap()
    }

    #[test]
    fn multitwist_basics() {
        let j = IntMatrix::from_i64_rows(&[&[0, 1], &[-1, 0]]);
        assert!(multitwist_operator(&[], &j).unwrap().is_identity());
        let m = multitwist_operator(&[(v(&[1, 0]), BigInt::from(3))], &j).unwrap();
        assert_eq!(m, IntMatrix::from_i64_rows(&[&[1, -3], &[0, 1]]));
        let err = multitwist_operator(&[(v(&[1, 0]), BigInt::one()), (v(&[0, 1]), BigInt::one())], &j);
        assert_eq!(err.unwrap_err(), Error::NotParallel);
    }

    #[test]
    fn horizontal_multitwist_inverts_t6() {
        let o = flagship();
        let mp = induced_matrices(&o).unwrap();
        let cc = o.chain_complex();
        let dec = o.horizontal_cylinders();
        let waists: Vec<(Vec<BigInt>, BigInt)> = dec
            .cylinders
            .iter()
            .map(|c| (mp.basis.coordinates(&cc, &c.waist).unwrap(), BigInt::from(6 / c.circumference)))
            .collect();
        let m = multitwist_operator(&waists, &mp.basis.gram).unwrap();
        assert!((&m * &mp.full_t.pow(6)).is_identity());
    }

    #[test]
    fn annihilator_identities() {
        let omega0 = crate::fixtures::forms().omega0;
        let (w1, w2, w3) = (v(&[2, 0, 0, 0, 0, 0]), v(&[0, 0, -6, 0, 2, 0]), v(&[-6, 0, 12, 8, -4, 8]));
        let e = annihilator(&w1, &w2, &w3, &omega0).unwrap();
        let expected: Vec<BigRational> = (0..6).map(|i| rat(&(-&w1[i] + 2 * &w2[i] + &w3[i]))).collect();
        assert_eq!(e, expected);
        let w1q: Vec<BigRational> = w1.iter().map(rat).collect();
        assert!(pairing_q(&e, &w1q, &omega0).is_zero());
        assert!(annihilator(&w1, &w1, &w3, &omega0).is_err());
    }

    #[test]
    fn flagship_directions() {
        let o = flagship();
        let mp = induced_matrices(&o).unwrap();
        let d = direction_datum(&o, &mp.basis, &mp.split, (1, 0)).unwrap();
        assert_eq!(d.coefficient, BigRational::new(1.into(), 8.into()));
        assert_eq!(d.waists.iter().map(|g| (g.circumference, g.twist)).collect::<Vec<_>>(), vec![(6, 2), (2, 6)]);
        let cert = arithmeticity_for_origami(&o, &mp, [(1, 0), (0, 1), (1, 2)], Some("ABabC^3a"), 12).unwrap();
        assert!(cert.verdict);
        assert_eq!(cert.e_combination, vec![rat(&(-1).into()), rat(&2.into()), rat(&1.into())]);
    }

    #[test]
    fn printed_word_and_search() {
        let t = crate::fixtures::arithmeticity();
        let mats: [IntMatrix; 3] = t.transvections.clone().try_into().unwrap();
        let (w, m, searched) = arithmeticity_from_matrices(&mats, Some(&t.word), 12).unwrap();
        assert!(!searched);
        assert_eq!(w, t.word);
        assert_eq!(m, t.witness);
        let (w, m, searched) = arithmeticity_from_matrices(&mats, None, 12).unwrap();
        assert!(searched);
        assert!(is_witness(&m));
        let gens: Vec<(char, IntMatrix)> = "ABC".chars().zip(mats.iter().cloned()).collect();
        assert_eq!(evaluate_word(&w, &gens).unwrap(), m);
    }

    #[test]
    fn trivial_word_rejected() {
        assert!(!is_witness(&IntMatrix::identity(3)));
        let id = IntMatrix::identity(3);
        let gens = [id.clone(), id.clone(), id];
        assert!(matches!(arithmeticity_from_matrices(&gens, Some(""), 4), Err(Error::NoWitnessFound { .. })));
    }
}
