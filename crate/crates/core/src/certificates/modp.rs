//! Dense polynomials over the prime field `F_p`, low degree first.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::linalg::IntPolynomial;

pub type PolyP = Vec<u64>;

fn trim(mut a: PolyP) -> PolyP {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub fn reduce(f: &IntPolynomial, p: u64) -> PolyP {
    let pb = BigInt::from(p);
    let coeffs = f.coeffs().iter().map(|c| {
        let r = ((c % &pb) + &pb) % &pb;
        r.to_u64().expect("residue fits")
    });
    trim(coeffs.collect())
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

pub fn inv(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn mul(a: &[u64], b: &[u64], p: u64) -> PolyP {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    trim(out)
}

/// `(a div b, a mod b)`; `b` must be nonzero.
pub fn div_rem(a: &[u64], b: &[u64], p: u64) -> (PolyP, PolyP) {
    let b = trim(b.to_vec());
    assert!(!b.is_empty(), "division by zero polynomial");
    let mut r = trim(a.to_vec());
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let db = b.len() - 1;
    let li = inv(*b.last().unwrap(), p);
    let mut q = vec![0u64; r.len() - db];
    while r.len() > db && !r.is_empty() {
        let k = r.len() - 1 - db;
        let c = r.last().unwrap() * li % p;
        q[k] = c;
        for (i, &bc) in b.iter().enumerate() {
            r[k + i] = (r[k + i] + p - c * bc % p) % p;
        }
        r = trim(r);
    }
    (trim(q), r)
}

fn monic(a: PolyP, p: u64) -> PolyP {
    match a.last() {
        None => a,
        Some(&l) => {
            let li = inv(l, p);
            a.into_iter().map(|c| c * li % p).collect()
        }
    }
}

pub fn gcd(a: &[u64], b: &[u64], p: u64) -> PolyP {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let (_, r) = div_rem(&a, &b, p);
        a = b;
        b = r;
    }
    monic(a, p)
}

fn pow_mod_poly(base: &[u64], mut e: u64, m: &[u64], p: u64) -> PolyP {
    let mut acc: PolyP = vec![1];
    let mut b = div_rem(base, m, p).1;
    while e > 0 {
        if e & 1 == 1 {
            acc = div_rem(&mul(&acc, &b, p), m, p).1;
        }
        b = div_rem(&mul(&b, &b, p), m, p).1;
        e >>= 1;
    }
    acc
}

fn sub(a: &[u64], b: &[u64], p: u64) -> PolyP {
    let n = a.len().max(b.len());
    let out = (0..n).map(|i| {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        (x + p - y) % p
    });
    trim(out.collect())
}

/// Degrees of the irreducible factors of a squarefree polynomial over
/// `F_p` (distinct-degree factorization), descending.
pub fn factor_degrees(f: &[u64], p: u64) -> Vec<usize> {
    let mut f = monic(trim(f.to_vec()), p);
    let mut degrees = Vec::new();
    let x: PolyP = vec![0, 1];
    let mut xq = x.clone();
    let mut d = 1;
    while f.len() > 1 {
        if 2 * d > f.len() - 1 {
            degrees.push(f.len() - 1);
            break;
        }
        xq = pow_mod_poly(&xq, p, &f, p);
        let g = gcd(&f, &sub(&xq, &x, p), p);
        if g.len() > 1 {
            let k = (g.len() - 1) / d;
            degrees.extend(std::iter::repeat(d).take(k));
            f = div_rem(&f, &g, p).0;
            xq = div_rem(&xq, &f, p).1;
        }
        d += 1;
    }
    degrees.sort_unstable_by(|a, b| b.cmp(a));
    degrees
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Primes not dividing `bad`, in increasing order.
pub fn good_primes(bad: &BigInt) -> impl Iterator<Item = u64> + '_ {
    (2u64..).filter(|&p| is_prime(p)).filter(move |&p| (bad % BigInt::from(p)) != BigInt::from(0))
}
