//! Exact scalar fields.
//!
//! Two fields are supported: the rationals (arbitrary precision) and prime
//! fields `F_p` with `p < 2^62`. Algorithms are written against the [`Field`]
//! trait; the field value itself is carried around (it is a zero-sized type for
//! `Q` and a single word for `F_p`).

use std::fmt;
use std::hash::Hash;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::matrix::{gauss_jordan, gauss_rank, DenseMatrix};
use super::modular::{is_prime_u64, mul_mod};
use crate::error::ParseError;

/// Runtime description of a field, as written in files and certificates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FieldDescriptor {
    Rational,
    Prime { p: u64 },
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldDescriptor::Rational => write!(f, "Q"),
            FieldDescriptor::Prime { p } => write!(f, "F_{p}"),
        }
    }
}

pub trait Field: Clone + fmt::Debug + PartialEq + Send + Sync + 'static {
    type Elem: Clone + PartialEq + Eq + Hash + fmt::Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn from_bigint(&self, v: &BigInt) -> Self::Elem;

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    /// 0 for the rationals.
    fn characteristic(&self) -> u64;
    fn descriptor(&self) -> FieldDescriptor;

    /// Image of `a` in `F_p`, when it is defined. For rationals this is the
    /// reduction of a `p`-integral value; for `F_q` only `p == q` is defined.
    fn reduce_mod(&self, a: &Self::Elem, p: u64) -> Option<u64>;

    /// A random element. For the rationals, an integer in `[-height, height]`;
    /// for prime fields, a uniform residue.
    fn random<R: Rng + ?Sized>(&self, rng: &mut R, height: i64) -> Self::Elem;

    fn format(&self, a: &Self::Elem) -> String;
    fn parse(&self, s: &str) -> Result<Self::Elem, ParseError>;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    fn pow(&self, a: &Self::Elem, mut e: u32) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    fn add_assign(&self, a: &mut Self::Elem, b: &Self::Elem) {
        *a = self.add(a, b);
    }

    /// `a += b * c`
    fn mul_add_assign(&self, a: &mut Self::Elem, b: &Self::Elem, c: &Self::Elem) {
        if self.is_zero(b) || self.is_zero(c) {
            return;
        }
        let t = self.mul(b, c);
        *a = self.add(a, &t);
    }

    fn dot(&self, a: &[Self::Elem], b: &[Self::Elem]) -> Self::Elem {
        let mut acc = self.zero();
        for (x, y) in a.iter().zip(b) {
            self.mul_add_assign(&mut acc, x, y);
        }
        acc
    }

    fn to_scalar(&self, a: &Self::Elem) -> FieldScalar;

    /// A primitive integer multiple of `row`; only defined for the rationals.
    fn integer_row(&self, _row: &[Self::Elem]) -> Option<Vec<BigInt>> {
        None
    }

    fn rank_of(m: &DenseMatrix<Self>) -> usize
    where
        Self: Sized,
    {
        gauss_rank(m)
    }

    fn rref_of(m: &DenseMatrix<Self>) -> (DenseMatrix<Self>, Vec<usize>)
    where
        Self: Sized,
    {
        gauss_jordan(m)
    }

    /// The unique solution of a system with more rows than columns, when the
    /// field has a faster route to it than elimination. `None` defers.
    fn solve_full_rank_of(_m: &DenseMatrix<Self>, _b: &[Self::Elem]) -> Option<Option<Vec<Self::Elem>>>
    where
        Self: Sized,
    {
        None
    }
}

/// The field of rational numbers.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }
    fn from_bigint(&self, v: &BigInt) -> BigRational {
        BigRational::from_integer(v.clone())
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor::Rational
    }
    fn reduce_mod(&self, a: &BigRational, p: u64) -> Option<u64> {
        reduce_rational(a, p)
    }
    fn random<R: Rng + ?Sized>(&self, rng: &mut R, height: i64) -> BigRational {
        self.from_i64(rng.gen_range(-height..=height))
    }
    fn format(&self, a: &BigRational) -> String {
        if a.is_integer() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }
    fn parse(&self, s: &str) -> Result<BigRational, ParseError> {
        parse_rational(s)
    }
    fn to_scalar(&self, a: &BigRational) -> FieldScalar {
        FieldScalar::Rational(a.clone())
    }
    fn integer_row(&self, row: &[BigRational]) -> Option<Vec<BigInt>> {
        Some(primitive_integer_row(row))
    }
    fn rank_of(m: &DenseMatrix<Self>) -> usize {
        super::matrix::rational_rank(m)
    }
    fn rref_of(m: &DenseMatrix<Self>) -> (DenseMatrix<Self>, Vec<usize>) {
        super::matrix::rational_rref(m)
    }
    fn solve_full_rank_of(m: &DenseMatrix<Self>, b: &[BigRational]) -> Option<Option<Vec<BigRational>>> {
        super::matrix::rational_solve_full_rank(m, b)
    }
}

/// The prime field `F_p`, `p < 2^62`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    /// Rejects non-primes and moduli of 2^62 or more.
    pub fn new(p: u64) -> Result<Self, ParseError> {
        if p >= 1 << 62 || !is_prime_u64(p) {
            return Err(ParseError::InvalidField(format!("{p} is not a prime below 2^62")));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }
}

impl Field for PrimeField {
    type Elem = u64;

    #[inline]
    fn zero(&self) -> u64 {
        0
    }
    #[inline]
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn from_i64(&self, v: i64) -> u64 {
        let r = (v as i128).rem_euclid(self.p as i128);
        r as u64
    }
    fn from_bigint(&self, v: &BigInt) -> u64 {
        let r = v.mod_floor(&BigInt::from(self.p));
        r.to_u64().expect("residue fits")
    }
    #[inline]
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    #[inline]
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    #[inline]
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        mul_mod(*a, *b, self.p)
    }
    #[inline]
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        super::modular::inv_mod(*a, self.p)
    }
    #[inline]
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn characteristic(&self) -> u64 {
        self.p
    }
    fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor::Prime { p: self.p }
    }
    fn reduce_mod(&self, a: &u64, p: u64) -> Option<u64> {
        (p == self.p).then_some(*a)
    }
    fn random<R: Rng + ?Sized>(&self, rng: &mut R, _height: i64) -> u64 {
        rng.gen_range(0..self.p)
    }
    fn format(&self, a: &u64) -> String {
        a.to_string()
    }
    fn parse(&self, s: &str) -> Result<u64, ParseError> {
        let s = s.trim();
        if let Ok(v) = s.parse::<i64>() {
            return Ok(self.from_i64(v));
        }
        let q = parse_rational(s)?;
        let r = reduce_rational(&q, self.p)
            .ok_or_else(|| ParseError::InvalidScalar(format!("{s}: denominator vanishes mod {}", self.p)))?;
        Ok(r)
    }
    fn to_scalar(&self, a: &u64) -> FieldScalar {
        FieldScalar::Modular { residue: *a, modulus: self.p }
    }
}

/// A self-describing field element, used at the file and FFI boundaries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FieldScalar {
    Rational(BigRational),
    Modular { residue: u64, modulus: u64 },
}

impl FieldScalar {
    pub fn descriptor(&self) -> FieldDescriptor {
        match self {
            FieldScalar::Rational(_) => FieldDescriptor::Rational,
            FieldScalar::Modular { modulus, .. } => FieldDescriptor::Prime { p: *modulus },
        }
    }
}

impl fmt::Display for FieldScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldScalar::Rational(q) => f.write_str(&Rationals.format(q)),
            FieldScalar::Modular { residue, .. } => write!(f, "{residue}"),
        }
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational, ParseError> {
    let s = s.trim();
    let bad = || ParseError::InvalidScalar(s.to_string());
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => {
            let n: BigInt = s.parse().map_err(|_| bad())?;
            Ok(BigRational::from_integer(n))
        }
    }
}

/// `n/d mod p`, or `None` when `p | d`.
pub fn reduce_rational(a: &BigRational, p: u64) -> Option<u64> {
    let pb = BigInt::from(p);
    let d = a.denom().mod_floor(&pb).to_u64()?;
    let dinv = super::modular::inv_mod(d, p)?;
    let n = a.numer().mod_floor(&pb).to_u64()?;
    Some(mul_mod(n, dinv, p))
}

/// Least common multiple of the denominators in `row`.
pub fn common_denominator(row: &[BigRational]) -> BigInt {
    row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// Scales a rational vector to a primitive integer vector (content removed,
/// sign preserved).
pub fn primitive_integer_row(row: &[BigRational]) -> Vec<BigInt> {
    let den = common_denominator(row);
    let ints: Vec<BigInt> = row.iter().map(|x| x.numer() * (&den / x.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() || g.is_one() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

pub fn bigint_bits(x: &BigInt) -> u64 {
    if x.sign() == Sign::NoSign {
        0
    } else {
        x.abs().bits()
    }
}
