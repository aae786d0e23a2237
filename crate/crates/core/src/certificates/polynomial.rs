//! Irreducibility over Z, real-root counting and Galois groups of
//! reciprocal sextics.

use std::collections::{BTreeSet, HashSet};
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::modp;
use crate::error::{Error, Result};
use crate::linalg::{IntPolynomial, Polynomial, RatPolynomial};

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum IrreducibilityWitness {
    /// Irreducible modulo a prime not dividing the leading coefficient or
    /// the discriminant.
    Prime { prime: u64 },
    /// A proper factor over Z.
    Factor { factor: IntPolynomial, cofactor: IntPolynomial },
    /// No factor of degree up to half the degree exists.
    ExhaustiveSearch { candidates_checked: u64 },
}

#[derive(Clone, Debug, Serialize)]
pub struct IrreducibilityReport {
    pub irreducible: bool,
    pub witness: IrreducibilityWitness,
    /// `(prime, factor degrees)` for every prime tried.
    pub primes_tried: Vec<(u64, Vec<usize>)>,
}

pub const DEFAULT_IRREDUCIBILITY_PRIMES: usize = 25;
pub const DEFAULT_GALOIS_PRIMES: usize = 100;

fn check_nonconstant(f: &IntPolynomial) -> Result<usize> {
    match f.degree() {
        None => Err(Error::DomainError("zero polynomial".into())),
        Some(0) => Err(Error::DomainError("constant polynomial".into())),
        Some(d) => Ok(d),
    }
}

pub fn is_irreducible_over_z(f: &IntPolynomial, prime_budget: usize) -> Result<IrreducibilityReport> {
    let d = check_nonconstant(f)?;
    if !f.content().is_one() {
        return Err(Error::DomainError("polynomial is not primitive".into()));
    }
    let mut primes_tried = Vec::new();
    if d == 1 {
        return Ok(IrreducibilityReport {
            irreducible: true,
            witness: IrreducibilityWitness::ExhaustiveSearch { candidates_checked: 0 },
            primes_tried,
        });
    }
    let disc = f.discriminant();
    if !disc.is_zero() {
        let bad = &disc * f.leading();
        for p in modp::good_primes(&bad).take(prime_budget) {
            let degs = modp::factor_degrees(&modp::reduce(f, p), p);
            let irreducible = degs.len() == 1;
            primes_tried.push((p, degs));
            if irreducible {
                return Ok(IrreducibilityReport {
                    irreducible: true,
                    witness: IrreducibilityWitness::Prime { prime: p },
                    primes_tried,
                });
            }
        }
    }
    let (factor, checked) = kronecker_factor(f)?;
    Ok(match factor {
        Some(g) => {
            let cofactor = f.exact_div(&g).expect("factor divides");
            IrreducibilityReport {
                irreducible: false,
                witness: IrreducibilityWitness::Factor { factor: g, cofactor },
                primes_tried,
            }
        }
        None => IrreducibilityReport {
            irreducible: true,
            witness: IrreducibilityWitness::ExhaustiveSearch { candidates_checked: checked },
            primes_tried,
        },
    })
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            let q = &n / &d;
            if q != d {
                large.push(q);
            }
            small.push(d.clone());
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

fn binomial(n: usize, k: usize) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

/// Lagrange interpolation through `(xs[i], ys[i])` over Q.
fn interpolate(xs: &[BigInt], ys: &[BigInt]) -> RatPolynomial {
    let mut acc = RatPolynomial::zero();
    for i in 0..xs.len() {
        let mut term = RatPolynomial::constant(BigRational::from_integer(ys[i].clone()));
        for j in 0..xs.len() {
            if i != j {
                let denom = BigRational::from_integer(&xs[i] - &xs[j]);
                let lin = Polynomial::new(vec![
                    BigRational::from_integer(-xs[j].clone()) / &denom,
                    BigRational::one() / &denom,
                ]);
                term = &term * &lin;
            }
        }
        acc = &acc + &term;
    }
    acc
}

/// Kronecker's method: a factor of degree `d` is pinned down by its values
/// at `d + 1` points, each of which divides the value of `f`. Candidates
/// are filtered by the Mignotte coefficient bound before trial division.
fn kronecker_factor(f: &IntPolynomial) -> Result<(Option<IntPolynomial>, u64)> {
    let deg = f.degree().unwrap();
    let norm = f.coeffs().iter().map(|c| c * c).sum::<BigInt>().sqrt() + BigInt::one();
    let mut checked = 0u64;
    let mut points: Vec<BigInt> = Vec::new();
    let mut values: Vec<BigInt> = Vec::new();
    let mut k = 0i64;
    while points.len() < deg / 2 + 1 {
        let x = BigInt::from(if k % 2 == 0 { k / 2 } else { -(k + 1) / 2 });
        k += 1;
        let y = f.eval(&x);
        if y.is_zero() {
            let g = IntPolynomial::new(vec![-x, BigInt::one()]);
            return Ok((Some(g), checked));
        }
        points.push(x);
        values.push(y);
    }
    for d in 1..=deg / 2 {
        let xs = &points[..=d];
        let divs: Vec<Vec<BigInt>> = values[..=d].iter().map(divisors).collect();
        let mut idx = vec![0usize; d + 1];
        let mut signs = vec![1i8; d + 1];
        loop {
            // the overall sign is fixed by taking the first value positive
            let ys: Vec<BigInt> = (0..=d)
                .map(|i| if signs[i] > 0 { divs[i][idx[i]].clone() } else { -divs[i][idx[i]].clone() })
                .collect();
            checked += 1;
            let g = interpolate(xs, &ys);
            if g.degree() == Some(d) {
                if let Some(gi) = g.to_integer() {
                    let bounded = gi
                        .coeffs()
                        .iter()
                        .enumerate()
                        .all(|(i, c)| c.abs() <= binomial(d, i) * &norm);
                    if bounded && f.exact_div(&gi).is_some() {
                        return Ok((Some(gi.primitive_part()), checked));
                    }
                }
            }
            // advance the mixed-radix counter over divisors and signs
            let mut pos = 0;
            loop {
                if pos > d {
                    break;
                }
                if pos > 0 && signs[pos] > 0 {
                    signs[pos] = -1;
                    break;
                }
                if pos > 0 {
                    signs[pos] = 1;
                }
                idx[pos] += 1;
                if idx[pos] < divs[pos].len() {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
            if pos > d {
                break;
            }
        }
    }
    Ok((None, checked))
}

#[derive(Clone, Debug, Serialize)]
pub struct SturmReport {
    pub real_roots: usize,
    pub sign_changes_at_neg_infinity: usize,
    pub sign_changes_at_pos_infinity: usize,
    /// The Sturm sequence of the squarefree part, as printed polynomials.
    pub sequence: Vec<String>,
}

fn sign_changes(signs: impl Iterator<Item = i32>) -> usize {
    let mut last = 0;
    let mut count = 0;
    for s in signs.filter(|&s| s != 0) {
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

/// Number of distinct real roots, by a Sturm sequence over Q.
pub fn count_real_roots(f: &IntPolynomial) -> Result<SturmReport> {
    if f.is_zero() {
        return Err(Error::DomainError("zero polynomial".into()));
    }
    let fq = f.to_rational();
    let g = fq.gcd(&fq.derivative());
    let sq = if g.degree().unwrap_or(0) > 0 { fq.div_rem(&g).0 } else { fq };
    let mut seq = vec![sq.clone(), sq.derivative()];
    while !seq.last().unwrap().is_zero() && seq.last().unwrap().degree().unwrap_or(0) > 0 {
        let n = seq.len();
        let (_, r) = seq[n - 2].div_rem(&seq[n - 1]);
        if r.is_zero() {
            break;
        }
        seq.push(-&r);
    }
    seq.retain(|p| !p.is_zero());
    let sign = |c: &BigRational| if c.is_positive() { 1 } else if c.is_negative() { -1 } else { 0 };
    let at_pos = sign_changes(seq.iter().map(|p| sign(&p.leading())));
    let at_neg = sign_changes(seq.iter().map(|p| {
        let s = sign(&p.leading());
        if p.degree().unwrap_or(0) % 2 == 1 {
            -s
        } else {
            s
        }
    }));
    Ok(SturmReport {
        real_roots: at_neg - at_pos,
        sign_changes_at_neg_infinity: at_neg,
        sign_changes_at_pos_infinity: at_pos,
        sequence: seq.iter().map(|p| rat_poly_string(p)).collect(),
    })
}

fn rat_poly_string(p: &RatPolynomial) -> String {
    // clear denominators for display
    let lcm = p.coeffs().iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p.coeffs().iter().map(|c| (c * &lcm).to_integer()).collect();
    let ip = IntPolynomial::new(ints);
    if lcm.is_one() {
        ip.to_string()
    } else {
        format!("({ip})/{lcm}")
    }
}

/// A permutation of the six roots `0..6`, where `i` and `i + 3` are the
/// reciprocal pairs.
type Perm6 = [u8; 6];

fn compose6(a: &Perm6, b: &Perm6) -> Perm6 {
    let mut out = [0u8; 6];
    for i in 0..6 {
        out[i] = a[b[i] as usize];
    }
    out
}

fn cycle_type6(p: &Perm6) -> Vec<usize> {
    let mut seen = [false; 6];
    let mut t = Vec::new();
    for s in 0..6 {
        if !seen[s] {
            let mut len = 0;
            let mut x = s;
            while !seen[x] {
                seen[x] = true;
                x = p[x] as usize;
                len += 1;
            }
            t.push(len);
        }
    }
    t.sort_unstable_by(|a, b| b.cmp(a));
    t
}

#[derive(Debug)]
pub struct HyperoctahedralTable {
    pub elements: Vec<Perm6>,
    /// `(order, transitive, cycle types)` of every subgroup.
    pub subgroups: Vec<(u64, bool, BTreeSet<Vec<usize>>)>,
}

/// The 48 signed permutations of three pairs and all their subgroups,
/// found as closures of generating sets of size at most three.
pub fn hyperoctahedral_table() -> &'static HyperoctahedralTable {
    static TABLE: OnceLock<HyperoctahedralTable> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut elements = Vec::new();
        let perms3 = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        for s in perms3 {
            for flips in 0..8u8 {
                let mut p = [0u8; 6];
                for i in 0..3 {
                    let f = (flips >> i) & 1;
                    p[i] = s[i] + 3 * f;
                    p[i + 3] = s[i] + 3 * (1 - f);
                }
                elements.push(p);
            }
        }
        let index = |p: &Perm6| elements.iter().position(|e| e == p).expect("closed under composition");
        let closure = |gens: &[usize]| -> u64 {
            let mut mask = 1u64 << index(&[0, 1, 2, 3, 4, 5]);
            let mut frontier = vec![index(&[0, 1, 2, 3, 4, 5])];
            while let Some(x) = frontier.pop() {
                for &g in gens {
                    let y = index(&compose6(&elements[x], &elements[g]));
                    if mask & (1 << y) == 0 {
                        mask |= 1 << y;
                        frontier.push(y);
                    }
                }
            }
            mask
        };
        let mut masks = HashSet::new();
        let n = elements.len();
        for a in 0..n {
            masks.insert(closure(&[a]));
            for b in a + 1..n {
                masks.insert(closure(&[a, b]));
                for c in b + 1..n {
                    masks.insert(closure(&[a, b, c]));
                }
            }
        }
        let mut subgroups: Vec<(u64, bool, BTreeSet<Vec<usize>>)> = masks
            .into_iter()
            .map(|mask| {
                let members: Vec<&Perm6> = (0..n).filter(|i| mask & (1 << i) != 0).map(|i| &elements[i]).collect();
                let mut orbit = 1u8 << 0;
                for _ in 0..6 {
                    for m in &members {
                        for x in 0..6 {
                            if orbit & (1 << x) != 0 {
                                orbit |= 1 << m[x];
                            }
                        }
                    }
                }
                let types = members.iter().map(|m| cycle_type6(m)).collect();
                (members.len() as u64, orbit == 0b111111, types)
            })
            .collect();
        subgroups.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.2.cmp(&b.2)));
        HyperoctahedralTable { elements, subgroups }
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GaloisStatus {
    /// Only the full group is compatible with the observed cycle types.
    CertifiedMaximal,
    /// Proper subgroups remain compatible; `order` is the smallest candidate.
    Undecided,
}

#[derive(Clone, Debug, Serialize)]
pub struct GaloisReport {
    pub order: u64,
    pub status: GaloisStatus,
    /// Orders of all transitive subgroups containing the observed types.
    pub candidate_orders: Vec<u64>,
    /// `(prime, cycle type of Frobenius)`.
    pub witnesses: Vec<(u64, Vec<usize>)>,
    pub primes_used: usize,
}

impl GaloisReport {
    pub fn is_certified(&self) -> bool {
        self.status == GaloisStatus::CertifiedMaximal
    }
}

/// Galois group order of an irreducible reciprocal sextic from Frobenius
/// cycle types (Dedekind) against the subgroup table of B₃.
pub fn galois_order_reciprocal_sextic(f: &IntPolynomial, prime_budget: usize) -> Result<GaloisReport> {
    if f.degree() != Some(6) {
        return Err(Error::DomainError("polynomial is not a sextic".into()));
    }
    if !f.is_reciprocal() {
        return Err(Error::DomainError("polynomial is not reciprocal".into()));
    }
    if !is_irreducible_over_z(f, DEFAULT_IRREDUCIBILITY_PRIMES)?.irreducible {
        return Err(Error::DomainError("polynomial is reducible".into()));
    }
    let table = hyperoctahedral_table();
    let transitive: Vec<&(u64, bool, BTreeSet<Vec<usize>>)> = table.subgroups.iter().filter(|s| s.1).collect();
    let bad = f.discriminant() * f.leading();
    let mut observed: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut witnesses = Vec::new();
    let mut candidates: Vec<&(u64, bool, BTreeSet<Vec<usize>>)> = transitive.clone();
    for p in modp::good_primes(&bad).take(prime_budget) {
        let degs = modp::factor_degrees(&modp::reduce(f, p), p);
        if observed.insert(degs.clone()) {
            witnesses.push((p, degs));
            candidates.retain(|s| observed.is_subset(&s.2));
        }
        if candidates.iter().all(|s| s.0 == 48) {
            break;
        }
    }
    let mut orders: Vec<u64> = candidates.iter().map(|s| s.0).collect();
    orders.sort_unstable();
    orders.dedup();
    let status = if orders == [48] { GaloisStatus::CertifiedMaximal } else { GaloisStatus::Undecided };
    let primes_used = witnesses.last().map_or(0, |w| {
        modp::good_primes(&bad).take_while(|&p| p <= w.0).count()
    });
    Ok(GaloisReport { order: orders[0], status, candidate_orders: orders, witnesses, primes_used })
}

#[derive(Clone, Debug, Serialize)]
pub struct GaloisPinchingReport {
    pub charpoly: IntPolynomial,
    pub reciprocal: bool,
    pub irreducible: IrreducibilityReport,
    pub real_roots: SturmReport,
    pub galois: Option<GaloisReport>,
    pub galois_order: Option<u64>,
    pub verdict: bool,
}

fn factorial(n: u64) -> u64 {
    (1..=n).product()
}

/// Galois-pinching test for a characteristic polynomial of even degree.
pub fn galois_pinching(charpoly: &IntPolynomial, prime_budget: usize) -> Result<GaloisPinchingReport> {
    let d = check_nonconstant(charpoly)?;
    let reciprocal = charpoly.is_reciprocal();
    let irreducible = is_irreducible_over_z(&charpoly.primitive_part(), DEFAULT_IRREDUCIBILITY_PRIMES)?;
    let real_roots = count_real_roots(charpoly)?;
    let galois = if d == 6 && reciprocal && irreducible.irreducible {
        Some(galois_order_reciprocal_sextic(charpoly, prime_budget)?)
    } else {
        None
    };
    let maximal = 2u64.pow((d / 2) as u32) * factorial((d / 2) as u64);
    let galois_order = galois.as_ref().map(|g| g.order);
    let verdict = reciprocal
        && irreducible.irreducible
        && real_roots.real_roots == d
        && galois.as_ref().is_some_and(|g| g.is_certified() && g.order == maximal);
    Ok(GaloisPinchingReport {
        charpoly: charpoly.clone(),
        reciprocal,
        irreducible,
        real_roots,
        galois,
        galois_order,
        verdict,
    })
}
