//! Exact ground fields: prime fields `F_p` and the rationals.

use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::error::Error;

/// Default prime for computations when no field is requested.
pub const DEFAULT_PRIME: u32 = 32003;

/// An exact field. Elements are plain values; all arithmetic goes through the
/// field object so that runtime moduli are supported.
pub trait Field: Clone + Debug + PartialEq + Send + Sync + 'static {
    type Elem: Clone + Debug + PartialEq + Eq + Hash + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse. Panics on zero.
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    fn from_i64(&self, v: i64) -> Self::Elem;
    /// Parses an integer or `p/q` literal into the field.
    fn parse_elem(&self, s: &str) -> Result<Self::Elem, Error>;
    /// Canonical text form; `parse_elem(format_elem(a)) == a`.
    fn format_elem(&self, a: &Self::Elem) -> String;
    fn random_elem<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;
    /// Number of elements for finite fields.
    fn order(&self) -> Option<u64>;
    /// The `idx`-th element in a fixed enumeration (finite fields only).
    fn nth_elem(&self, idx: u64) -> Self::Elem;
    /// Short human-readable descriptor, e.g. `F_32003` or `Q`.
    fn descriptor(&self) -> String;

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    /// Whether `a` is best printed as `-(-a)`; only affects text output.
    fn prefers_negative_form(&self, _a: &Self::Elem) -> bool {
        false
    }
}

/// The prime field `Z/pZ` with `p < 2^31`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u32) -> Result<Self, Error> {
        if !(2..(1 << 31)).contains(&p) || !is_prime(p) {
            return Err(Error::Field(format!("{p} is not a supported prime")));
        }
        Ok(Self { p })
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    fn reduce_big(&self, v: &BigInt) -> u32 {
        let p = BigInt::from(self.p);
        let mut r = v % &p;
        if r.is_negative() {
            r += &p;
        }
        u32::try_from(r).expect("residue fits in u32")
    }
}

impl Default for PrimeField {
    fn default() -> Self {
        Self { p: DEFAULT_PRIME }
    }
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p as u64 {
        if (p as u64).is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Field for PrimeField {
    type Elem = u32;

    #[inline]
    fn zero(&self) -> u32 {
        0
    }
    #[inline]
    fn one(&self) -> u32 {
        1
    }
    #[inline]
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }
    #[inline]
    fn add(&self, a: &u32, b: &u32) -> u32 {
        let s = *a as u64 + *b as u64;
        (s % self.p as u64) as u32
    }
    #[inline]
    fn sub(&self, a: &u32, b: &u32) -> u32 {
        let s = *a as u64 + self.p as u64 - *b as u64;
        (s % self.p as u64) as u32
    }
    #[inline]
    fn neg(&self, a: &u32) -> u32 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    #[inline]
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 * *b as u64) % self.p as u64) as u32
    }
    fn inv(&self, a: &u32) -> u32 {
        assert!(*a != 0, "inverse of zero in F_{}", self.p);
        // Fermat: a^(p-2)
        let mut base = *a as u64;
        let mut exp = self.p as u64 - 2;
        let m = self.p as u64;
        let mut acc = 1u64;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % m;
            }
            base = base * base % m;
            exp >>= 1;
        }
        acc as u32
    }
    fn from_i64(&self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }
    fn parse_elem(&self, s: &str) -> Result<u32, Error> {
        let q = parse_rational(s)?;
        let den = self.reduce_big(q.denom());
        if den == 0 {
            return Err(Error::Field(format!(
                "denominator of {s} vanishes in F_{}",
                self.p
            )));
        }
        Ok(self.mul(&self.reduce_big(q.numer()), &self.inv(&den)))
    }
    fn format_elem(&self, a: &u32) -> String {
        a.to_string()
    }
    fn random_elem<R: Rng + ?Sized>(&self, rng: &mut R) -> u32 {
        rng.gen_range(0..self.p)
    }
    fn order(&self) -> Option<u64> {
        Some(self.p as u64)
    }
    fn nth_elem(&self, idx: u64) -> u32 {
        (idx % self.p as u64) as u32
    }
    fn descriptor(&self) -> String {
        format!("F_{}", self.p)
    }
    fn prefers_negative_form(&self, a: &u32) -> bool {
        *a > self.p / 2
    }
}

/// The field of rational numbers with arbitrary precision.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

/// Range of numerators drawn by [`Rationals::random_elem`].
const RATIONAL_SAMPLE_RANGE: i64 = 97;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        assert!(!a.is_zero(), "inverse of zero in Q");
        a.recip()
    }
    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }
    fn parse_elem(&self, s: &str) -> Result<BigRational, Error> {
        parse_rational(s)
    }
    fn format_elem(&self, a: &BigRational) -> String {
        if a.is_integer() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }
    fn random_elem<R: Rng + ?Sized>(&self, rng: &mut R) -> BigRational {
        self.from_i64(rng.gen_range(-RATIONAL_SAMPLE_RANGE..=RATIONAL_SAMPLE_RANGE))
    }
    fn order(&self) -> Option<u64> {
        None
    }
    fn nth_elem(&self, idx: u64) -> BigRational {
        self.from_i64(idx as i64)
    }
    fn descriptor(&self) -> String {
        "Q".to_string()
    }
    fn prefers_negative_form(&self, a: &BigRational) -> bool {
        a.is_negative()
    }
}

fn parse_rational(s: &str) -> Result<BigRational, Error> {
    let s = s.trim();
    let bad = || Error::Field(format!("malformed scalar `{s}`"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(Error::Field(format!("zero denominator in `{s}`")));
    }
    Ok(BigRational::new(num, den))
}

/// Field choice as given on the command line: a prime or `Q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldSpec {
    Prime(u32),
    Rationals,
}

impl Default for FieldSpec {
    fn default() -> Self {
        FieldSpec::Prime(DEFAULT_PRIME)
    }
}

impl std::str::FromStr for FieldSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.trim() {
            "Q" | "q" | "QQ" => Ok(FieldSpec::Rationals),
            other => {
                let p: u32 = other.parse().map_err(|_| {
                    Error::Field(format!("field must be a prime or Q, got `{other}`"))
                })?;
                PrimeField::new(p)?;
                Ok(FieldSpec::Prime(p))
            }
        }
    }
}

impl std::fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FieldSpec::Prime(p) => write!(f, "F_{p}"),
            FieldSpec::Rationals => write!(f, "Q"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_inverse() {
        let f = PrimeField::new(32003).unwrap();
        for a in [1u32, 2, 3, 17, 32002] {
            assert_eq!(f.mul(&a, &f.inv(&a)), 1);
        }
    }

    #[test]
    fn rejects_composites() {
        assert!(PrimeField::new(1).is_err());
        assert!(PrimeField::new(15).is_err());
        assert!(PrimeField::new(2).is_ok());
    }

    #[test]
    fn parse_fractions() {
        let f = PrimeField::new(7).unwrap();
        assert_eq!(f.parse_elem("1/2").unwrap(), 4);
        assert_eq!(f.parse_elem("-1").unwrap(), 6);
        assert!(f.parse_elem("1/7").is_err());
        let q = Rationals;
        let x = q.parse_elem("-6/4").unwrap();
        assert_eq!(q.format_elem(&x), "-3/2");
        assert_eq!(q.parse_elem(&q.format_elem(&x)).unwrap(), x);
    }

    #[test]
    fn field_spec_parsing() {
        assert_eq!("Q".parse::<FieldSpec>().unwrap(), FieldSpec::Rationals);
        assert_eq!("2".parse::<FieldSpec>().unwrap(), FieldSpec::Prime(2));
        assert!("4".parse::<FieldSpec>().is_err());
    }
}
