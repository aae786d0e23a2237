//! Randomized invariant checks shared by the property suite and the
//! acceptance run. Each check draws one case from the generator and
//! returns a description of the first violation.

#![allow(dead_code)]

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use origami_kz::certificates::transvection::{annihilator, multitwist_operator, pairing};
use origami_kz::fixtures;
use origami_kz::homology::h1_basis;
use origami_kz::linalg::{integer_kernel, standard_symplectic, IntMatrix, IntPolynomial};
use origami_kz::monodromy::{edge_map, induced_matrices, MonodromyPair};
use origami_kz::perm::is_transitive;
use origami_kz::{Origami, Permutation, VeechGenerator};

pub type Check = fn(&mut ChaCha8Rng) -> Result<(), String>;

pub const CHECKS: [(&str, Check); 6] = [
    ("chain map", chain_map),
    ("pairing well-defined", pairing_well_defined),
    ("symplecticity", symplecticity),
    ("annihilator orthogonality", annihilator_orthogonal),
    ("multitwist unipotency", multitwist_unipotent),
    ("reciprocal char polys", reciprocal_charpolys),
];

const GENERATORS: [VeechGenerator; 4] =
    [VeechGenerator::T, VeechGenerator::TInv, VeechGenerator::S, VeechGenerator::SInv];

pub fn flagship_monodromy() -> &'static MonodromyPair {
    static MP: OnceLock<MonodromyPair> = OnceLock::new();
    MP.get_or_init(|| induced_matrices(&fixtures::flagship().to_origami().unwrap()).unwrap())
}

fn label(o: &Origami) -> String {
    format!("h={} v={}", o.h, o.v)
}

fn random_perm(rng: &mut ChaCha8Rng, n: usize) -> Permutation {
    let mut images: Vec<u32> = (0..n as u32).collect();
    images.shuffle(rng);
    Permutation::from_images0(images).unwrap()
}

/// A connected origami with 1 to 8 squares.
pub fn random_origami(rng: &mut ChaCha8Rng) -> Origami {
    let n = rng.gen_range(1..=8);
    loop {
        let (h, v) = (random_perm(rng, n), random_perm(rng, n));
        if is_transitive(&h, &v).unwrap() {
            return Origami::new(h, v, None).unwrap();
        }
    }
}

fn random_vec(rng: &mut ChaCha8Rng, len: usize, bound: i64) -> Vec<BigInt> {
    (0..len).map(|_| BigInt::from(rng.gen_range(-bound..=bound))).collect()
}

fn combination(rng: &mut ChaCha8Rng, vectors: &[Vec<BigInt>]) -> Vec<BigInt> {
    let len = vectors.first().map_or(0, Vec::len);
    let mut out = vec![BigInt::zero(); len];
    for v in vectors {
        let k = BigInt::from(rng.gen_range(-3i64..=3));
        for (o, x) in out.iter_mut().zip(v) {
            *o += &k * x;
        }
    }
    out
}

fn random_word(rng: &mut ChaCha8Rng) -> String {
    let len = rng.gen_range(1..=8);
    let mut w = String::new();
    for _ in 0..len {
        w.push(*b"TSts".choose(rng).unwrap() as char);
        let e = rng.gen_range(1..=6);
        if e > 1 {
            w.push_str(&format!("^{e}"));
        }
    }
    w
}

/// Product of random transvections for the standard form of genus `g`.
fn random_symplectic(rng: &mut ChaCha8Rng, g: usize) -> IntMatrix {
    let j = standard_symplectic(g);
    let mut m = IntMatrix::identity(2 * g);
    for _ in 0..rng.gen_range(1..=6) {
        let u = random_vec(rng, 2 * g, 2);
        let k = BigInt::from(rng.gen_range(-2i64..=2));
        m = &multitwist_operator(&[(u, k)], &j).unwrap() * &m;
    }
    m
}

/// Edge maps of the generators send cycles to cycles and boundaries to
/// boundaries.
pub fn chain_map(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let o = random_origami(rng);
    let cc = o.chain_complex();
    let cycles = integer_kernel(&cc.d1).basis;
    for g in GENERATORS {
        let image = o.apply(g).chain_complex();
        let e = edge_map(&o, g);
        if !(&(&image.d1 * &e) * &cycles).is_zero() {
            return Err(format!("{g:?} on {}: cycle not sent to a cycle", label(&o)));
        }
        let moved = &e * &cc.d2;
        if image.d2.hstack(&moved).rank() != image.d2.rank() {
            return Err(format!("{g:?} on {}: boundary not sent to a boundary", label(&o)));
        }
    }
    Ok(())
}

/// The intersection pairing is antisymmetric and blind to boundaries.
pub fn pairing_well_defined(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let o = random_origami(rng);
    let cc = o.chain_complex();
    let hb = h1_basis(&cc).map_err(|e| e.to_string())?;
    let a = combination(rng, &hb.classes);
    let b = combination(rng, &hb.classes);
    let f = cc.face_boundary(rng.gen_range(0..o.n()));
    let k = BigInt::from(rng.gen_range(-3i64..=3));
    let shifted: Vec<BigInt> = a.iter().zip(&f).map(|(x, y)| x + &k * y).collect();
    let ab = cc.intersection_number(&a, &b).map_err(|e| e.to_string())?;
    let ba = cc.intersection_number(&b, &a).map_err(|e| e.to_string())?;
    let sb = cc.intersection_number(&shifted, &b).map_err(|e| e.to_string())?;
    if ab != -ba {
        return Err(format!("{}: pairing not antisymmetric", label(&o)));
    }
    if ab != sb {
        return Err(format!("{}: pairing changes by a boundary", label(&o)));
    }
    let ca = hb.coordinates(&cc, &a).map_err(|e| e.to_string())?;
    let cs = hb.coordinates(&cc, &shifted).map_err(|e| e.to_string())?;
    if ca != cs {
        return Err(format!("{}: coordinates change by a boundary", label(&o)));
    }
    Ok(())
}

/// Maps induced on homology by the generators, monodromy words, and
/// transvection products all preserve their forms.
pub fn symplecticity(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let o = random_origami(rng);
    let cc = o.chain_complex();
    let hb = h1_basis(&cc).map_err(|e| e.to_string())?;
    let g = *GENERATORS.choose(rng).unwrap();
    let target = o.apply(g);
    let tcc = target.chain_complex();
    let thb = h1_basis(&tcc).map_err(|e| e.to_string())?;
    let e = edge_map(&o, g);
    let cols: Vec<Vec<BigInt>> = hb
        .classes
        .iter()
        .map(|c| thb.coordinates(&tcc, &e.mul_vec(c)))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    let m = IntMatrix::from_columns(thb.rank(), &cols);
    if m.congruent(&thb.gram) != hb.gram {
        return Err(format!("{g:?} on {}: induced map not symplectic", label(&o)));
    }

    let mp = flagship_monodromy();
    let word = random_word(rng);
    let full = mp.full_monodromy_of_word(&word).map_err(|e| e.to_string())?;
    let restricted = mp.monodromy_of_word(&word).map_err(|e| e.to_string())?;
    if full.congruent(&mp.basis.gram) != mp.basis.gram {
        return Err(format!("{word}: full monodromy not symplectic"));
    }
    if restricted.congruent(&mp.split.restricted_gram) != mp.split.restricted_gram {
        return Err(format!("{word}: restricted monodromy not symplectic"));
    }

    let genus = rng.gen_range(1..=4);
    let s = random_symplectic(rng, genus);
    let j = standard_symplectic(genus);
    if s.congruent(&j) != j {
        return Err("transvection product not symplectic".into());
    }
    Ok(())
}

/// The annihilator pairs to zero with `w1` and `w2`.
pub fn annihilator_orthogonal(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let form = &flagship_monodromy().split.restricted_gram;
    let n = form.rows();
    loop {
        let w: Vec<Vec<BigInt>> = (0..3).map(|_| random_vec(rng, n, 6)).collect();
        let Ok(e) = annihilator(&w[0], &w[1], &w[2], form) else {
            continue;
        };
        let den: BigInt = e.iter().fold(BigInt::from(1), |acc, x| num_integer::lcm(acc, x.denom().clone()));
        let ez: Vec<BigInt> = e.iter().map(|x| (x * &den).to_integer()).collect();
        for (k, wk) in w[..2].iter().enumerate() {
            if !pairing(&ez, wk, form).is_zero() || !pairing(wk, &ez, form).is_zero() {
                return Err(format!("annihilator pairs nontrivially with w{}", k + 1));
            }
        }
        return Ok(());
    }
}

/// Multitwists along isotropic families are unipotent of step two and
/// preserve the form.
pub fn multitwist_unipotent(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let g = rng.gen_range(1..=4);
    let j = standard_symplectic(g);
    let s = random_symplectic(rng, g);
    let count = rng.gen_range(1..=3);
    let waists: Vec<(Vec<BigInt>, BigInt)> = (0..count)
        .map(|_| {
            let mut x = random_vec(rng, 2 * g, 3);
            for c in &mut x[g..] {
                *c = BigInt::zero();
            }
            (s.mul_vec(&x), BigInt::from(rng.gen_range(1i64..=6)))
        })
        .collect();
    let m = multitwist_operator(&waists, &j).map_err(|e| e.to_string())?;
    let d = &m - &IntMatrix::identity(2 * g);
    if !(&d * &d).is_zero() {
        return Err("multitwist minus identity does not square to zero".into());
    }
    if m.congruent(&j) != j {
        return Err("multitwist not symplectic".into());
    }
    Ok(())
}

/// Characteristic polynomials of symplectic matrices are reciprocal.
pub fn reciprocal_charpolys(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let mp = flagship_monodromy();
    let word = random_word(rng);
    let genus = rng.gen_range(1..=4);
    for m in [
        mp.full_monodromy_of_word(&word).map_err(|e| e.to_string())?,
        mp.monodromy_of_word(&word).map_err(|e| e.to_string())?,
        random_symplectic(rng, genus),
    ] {
        let p = IntPolynomial::char_poly(&m).map_err(|e| e.to_string())?;
        if !p.is_reciprocal() {
            return Err(format!("{word}: char poly {p:?} is not reciprocal"));
        }
    }
    Ok(())
}
