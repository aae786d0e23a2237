//! Univariate polynomials with exact coefficients, stored low degree first.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::matrix::IntMatrix;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial<T> {
    coeffs: Vec<T>,
}

pub type IntPolynomial = Polynomial<BigInt>;
pub type RatPolynomial = Polynomial<BigRational>;

impl<T: Clone + Zero + One + PartialEq + Neg<Output = T>> Polynomial<T> {
    /// Coefficients low degree first; trailing zeros are trimmed.
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Polynomial { coeffs: vec![T::one()] }
    }

    /// `x`
    pub fn x() -> Self {
        Polynomial { coeffs: vec![T::zero(), T::one()] }
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> T {
        self.coeffs.get(i).cloned().unwrap_or_else(T::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> T {
        self.coeffs.last().cloned().unwrap_or_else(T::zero)
    }

    pub fn eval(&self, x: &T) -> T {
        self.coeffs.iter().rev().fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn derivative(&self) -> Self {
        let mut out = Vec::new();
        let mut k = T::zero();
        for c in self.coeffs.iter() {
            out.push(c.clone() * k.clone());
            k = k + T::one();
        }
        if !out.is_empty() {
            out.remove(0);
        }
        Self::new(out)
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::new(self.coeffs.iter().map(|x| x.clone() * c.clone()).collect())
    }

    /// Palindromic coefficient vector.
    pub fn is_reciprocal(&self) -> bool {
        let n = self.coeffs.len();
        (0..n / 2).all(|i| self.coeffs[i] == self.coeffs[n - 1 - i])
    }

    /// Coefficients read backwards, i.e. `x^deg · f(1/x)`.
    pub fn reversed(&self) -> Self {
        let mut c = self.coeffs.clone();
        c.reverse();
        Self::new(c)
    }
}

impl<T: Clone + Zero + One + PartialEq + Neg<Output = T>> Add for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn add(self, rhs: &Polynomial<T>) -> Polynomial<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl<T: Clone + Zero + One + PartialEq + Neg<Output = T>> Sub for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn sub(self, rhs: &Polynomial<T>) -> Polynomial<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|i| self.coeff(i) + -rhs.coeff(i)).collect())
    }
}

impl<T: Clone + Zero + One + PartialEq + Neg<Output = T>> Mul for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn mul(self, rhs: &Polynomial<T>) -> Polynomial<T> {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Polynomial::new(out)
    }
}

impl<T: Clone + Zero + One + PartialEq + Neg<Output = T>> Neg for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn neg(self) -> Polynomial<T> {
        Polynomial::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

impl IntPolynomial {
    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Divides out the content and makes the leading coefficient positive.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut g = self.content();
        if self.leading().is_negative() {
            g = -g;
        }
        Self::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    pub fn to_rational(&self) -> RatPolynomial {
        Polynomial::new(self.coeffs.iter().map(|c| BigRational::from_integer(c.clone())).collect())
    }

    /// Exact quotient when `divisor` divides `self` in `Z[x]`.
    pub fn exact_div(&self, divisor: &IntPolynomial) -> Option<IntPolynomial> {
        let (q, r) = self.to_rational().div_rem(&divisor.to_rational());
        if !r.is_zero() {
            return None;
        }
        q.to_integer()
    }

    /// Discriminant via the resultant with the derivative.
    pub fn discriminant(&self) -> BigInt {
        let n = self.degree().unwrap_or(0);
        if n < 1 {
            return BigInt::zero();
        }
        let res = resultant(self, &self.derivative());
        let sign = if (n * (n - 1) / 2) % 2 == 0 { BigInt::one() } else { -BigInt::one() };
        sign * res / self.leading()
    }

    /// Exact characteristic polynomial `det(x·I − m)` by Faddeev–LeVerrier;
    /// every division is exact over the integers.
    pub fn char_poly(m: &IntMatrix) -> Result<IntPolynomial> {
        if !m.is_square() {
            return Err(Error::ShapeMismatch(format!("char_poly of {}x{}", m.rows(), m.cols())));
        }
        let n = m.rows();
        let mut coeffs = vec![BigInt::zero(); n + 1];
        coeffs[n] = BigInt::one();
        let mut mk = IntMatrix::zeros(n, n);
        for k in 1..=n {
            let mut next = m * &mk;
            for i in 0..n {
                next[(i, i)] += &coeffs[n - k + 1];
            }
            mk = next;
            let tr = (m * &mk).trace();
            coeffs[n - k] = -(tr / BigInt::from(k));
        }
        Ok(Polynomial::new(coeffs))
    }
}

impl RatPolynomial {
    pub fn div_rem(&self, d: &RatPolynomial) -> (RatPolynomial, RatPolynomial) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let dd = d.degree().unwrap();
        let lead = d.leading();
        let mut r = self.coeffs.clone();
        let mut q = vec![BigRational::zero(); r.len().saturating_sub(dd).max(1)];
        while r.len() > dd && !r.is_empty() {
            let k = r.len() - 1 - dd;
            let c = r.last().unwrap() / &lead;
            for (i, dc) in d.coeffs.iter().enumerate() {
                r[k + i] = &r[k + i] - &c * dc;
            }
            q[k] = c;
            r.pop();
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        (Polynomial::new(q), Polynomial::new(r))
    }

    pub fn to_integer(&self) -> Option<IntPolynomial> {
        self.coeffs
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect::<Option<Vec<_>>>()
            .map(Polynomial::new)
    }

    pub fn gcd(&self, other: &RatPolynomial) -> RatPolynomial {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            return a;
        }
        let l = a.leading();
        a.scale(&l.recip())
    }
}

/// Resultant via the determinant of the Sylvester matrix.
pub fn resultant(f: &IntPolynomial, g: &IntPolynomial) -> BigInt {
    let (Some(m), Some(n)) = (f.degree(), g.degree()) else {
        return BigInt::zero();
    };
    if m + n == 0 {
        return BigInt::one();
    }
    let size = m + n;
    let mut s = IntMatrix::zeros(size, size);
    for i in 0..n {
        for (k, c) in f.coeffs().iter().rev().enumerate() {
            s[(i, i + k)] = c.clone();
        }
    }
    for i in 0..m {
        for (k, c) in g.coeffs().iter().rev().enumerate() {
            s[(n + i, i + k)] = c.clone();
        }
    }
    s.determinant().expect("square Sylvester matrix")
}

impl<T: fmt::Display + Zero + One + PartialEq + Clone + Signed> fmt::Display for Polynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            let show_coeff = !a.is_one() || i == 0;
            if show_coeff {
                write!(f, "{a}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

impl<T: fmt::Display + Zero + One + PartialEq + Clone + Signed> fmt::Debug for Polynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for IntPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        crate::serde_int::vec::serialize(&self.coeffs, s)
    }
}

impl<'de> Deserialize<'de> for IntPolynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        crate::serde_int::vec::deserialize(d).map(Polynomial::new)
    }
}
