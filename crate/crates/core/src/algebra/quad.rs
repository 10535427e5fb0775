//! Exact scalars in a real quadratic field.
//!
//! A [`QuadNumber`] is `a + b*sqrt(d)` with rational `a`, `b` and a squarefree
//! discriminant `d`. Values whose irrational part vanishes are stored with
//! `d = 0`, so structural equality is value equality.
//!
//! The `std::ops` impls panic when two genuinely irrational operands live in
//! different fields; use the `checked_*` methods where the operands come from
//! untrusted input. Every space presentation validates that its parameters
//! share one discriminant, so downstream arithmetic never mixes fields.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadNumber {
    a: BigRational,
    b: BigRational,
    d: u64,
}

pub(crate) fn is_squarefree(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut m = n;
    let mut p = 2u64;
    while p * p <= m {
        if m.is_multiple_of(p) {
            m /= p;
            if m.is_multiple_of(p) {
                return false;
            }
        }
        p += 1;
    }
    true
}

impl QuadNumber {
    /// Builds `a + b*sqrt(d)`. `d` must be 0 or squarefree; `d = 0` forces `b = 0`.
    pub fn new(a: BigRational, b: BigRational, d: u64) -> Result<Self> {
        if d == 0 {
            if !b.is_zero() {
                return Err(Error::InvalidDiscriminant(0));
            }
            return Ok(Self::rational(a));
        }
        if !is_squarefree(d) {
            return Err(Error::InvalidDiscriminant(d));
        }
        Ok(Self::canonical(a, b, d))
    }

    fn canonical(a: BigRational, b: BigRational, d: u64) -> Self {
        if b.is_zero() {
            Self {
                a,
                b,
                d: 0,
            }
        } else {
            Self { a, b, d }
        }
    }

    pub fn rational(a: BigRational) -> Self {
        Self {
            a,
            b: BigRational::zero(),
            d: 0,
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_frac(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::rational(BigRational::new(
            BigInt::from(num),
            BigInt::from(den),
        )))
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// `sqrt(n)` with the square part pulled out, e.g. `sqrt(8) = 2*sqrt(2)`.
    pub fn sqrt(n: u64) -> Self {
        if n == 0 {
            return Self::zero();
        }
        let mut outside = 1u64;
        let mut inside = n;
        let mut p = 2u64;
        while p * p <= inside {
            while inside.is_multiple_of(p * p) {
                inside /= p * p;
                outside *= p;
            }
            p += 1;
        }
        let coeff = BigRational::from_integer(BigInt::from(outside));
        if inside == 1 {
            Self::rational(coeff)
        } else {
            Self::canonical(BigRational::zero(), coeff, inside)
        }
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    pub fn irrational_part(&self) -> &BigRational {
        &self.b
    }

    /// 0 for rational values.
    pub fn discriminant(&self) -> u64 {
        self.d
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.b.is_zero() && self.a.is_one()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.b.is_zero() && self.a.is_integer()
    }

    pub fn to_rational(&self) -> Option<&BigRational> {
        self.b.is_zero().then_some(&self.a)
    }

    fn common_d(&self, other: &Self) -> Result<u64> {
        match (self.d, other.d) {
            (0, d) | (d, 0) => Ok(d),
            (d, e) if d == e => Ok(d),
            (d, e) => Err(Error::MixedDiscriminants(d, e)),
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        let d = self.common_d(other)?;
        Ok(Self::canonical(&self.a + &other.a, &self.b + &other.b, d))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        let d = self.common_d(other)?;
        Ok(Self::canonical(&self.a - &other.a, &self.b - &other.b, d))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        let d = self.common_d(other)?;
        let dd = BigRational::from_integer(BigInt::from(d));
        let a = &self.a * &other.a + &self.b * &other.b * dd;
        let b = &self.a * &other.b + &self.b * &other.a;
        Ok(Self::canonical(a, b, d))
    }

    /// Field norm `a^2 - d b^2`.
    pub fn norm(&self) -> BigRational {
        let dd = BigRational::from_integer(BigInt::from(self.d));
        &self.a * &self.a - &self.b * &self.b * dd
    }

    pub fn conj(&self) -> Self {
        Self::canonical(self.a.clone(), -self.b.clone(), self.d)
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        // nonzero norm: d is not a square
        let n = self.norm();
        Ok(Self::canonical(&self.a / &n, -(&self.b / &n), self.d))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.checked_mul(&other.inv()?)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Exact sign: -1, 0 or 1.
    pub fn signum(&self) -> i32 {
        let sa = sign_of(&self.a);
        let sb = sign_of(&self.b);
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return sb;
        }
        let dd = BigRational::from_integer(BigInt::from(self.d));
        let a2 = &self.a * &self.a;
        let b2d = &self.b * &self.b * dd;
        if a2 > b2d {
            sa
        } else {
            sb
        }
    }

    pub fn cmp_value(&self, other: &Self) -> Result<Ordering> {
        Ok(match self.checked_sub(other)?.signum() {
            -1 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        })
    }

    /// Whether `self` lies in the additive subgroup `Z + theta*Z`.
    pub fn in_lattice(&self, theta: &QuadNumber) -> bool {
        if theta.b.is_zero() {
            return false;
        }
        if self.d != 0 && self.d != theta.d {
            return false;
        }
        let n = &self.b / &theta.b;
        if !n.is_integer() {
            return false;
        }
        (&self.a - &n * &theta.a).is_integer()
    }
}

fn sign_of(r: &BigRational) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for QuadNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return f.write_str(&fmt_rational(&self.a));
        }
        let mut out = String::new();
        if !self.a.is_zero() {
            out.push_str(&fmt_rational(&self.a));
            if self.b.is_positive() {
                out.push('+');
            }
        }
        let abs_b = self.b.abs();
        if self.b.is_negative() {
            out.push('-');
        }
        if !abs_b.is_one() {
            out.push_str(&fmt_rational(&abs_b));
            out.push('*');
        }
        out.push_str(&format!("sqrt({})", self.d));
        f.write_str(&out)
    }
}

impl fmt::Debug for QuadNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl serde::Serialize for QuadNumber {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl From<i64> for QuadNumber {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl From<BigRational> for QuadNumber {
    fn from(r: BigRational) -> Self {
        Self::rational(r)
    }
}

impl Default for QuadNumber {
    fn default() -> Self {
        Self::zero()
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl<'a> $trait<&'a QuadNumber> for &'a QuadNumber {
            type Output = QuadNumber;
            fn $method(self, rhs: &'a QuadNumber) -> QuadNumber {
                self.$checked(rhs).expect("QuadNumber arithmetic across different fields")
            }
        }
        impl $trait<QuadNumber> for QuadNumber {
            type Output = QuadNumber;
            fn $method(self, rhs: QuadNumber) -> QuadNumber {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $trait<&'a QuadNumber> for QuadNumber {
            type Output = QuadNumber;
            fn $method(self, rhs: &'a QuadNumber) -> QuadNumber {
                (&self).$method(rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);
forward_binop!(Div, div, checked_div);

impl Neg for QuadNumber {
    type Output = QuadNumber;
    fn neg(self) -> QuadNumber {
        QuadNumber::canonical(-self.a, -self.b, self.d)
    }
}

impl Neg for &QuadNumber {
    type Output = QuadNumber;
    fn neg(self) -> QuadNumber {
        -(self.clone())
    }
}

impl std::iter::Sum for QuadNumber {
    fn sum<I: Iterator<Item = QuadNumber>>(iter: I) -> Self {
        iter.fold(QuadNumber::zero(), |acc, x| acc + x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn q(a: i64, b: i64, d: u64) -> QuadNumber {
        QuadNumber::new(big(a), big(b), d).unwrap()
    }

    #[test]
    fn conjugate_sum_is_rational() {
        let s = q(1, 1, 2).checked_add(&q(2, -1, 2)).unwrap();
        assert_eq!(s, QuadNumber::from_int(3));
        assert_eq!(s.discriminant(), 0);
    }

    #[test]
    fn inverse_of_one_plus_sqrt2() {
        let x = q(1, 1, 2);
        let inv = x.inv().unwrap();
        assert_eq!(inv, q(-1, 1, 2));
        assert!((&x * &inv).is_one());
    }

    #[test]
    fn zero_absorbs() {
        let x = q(7, -3, 5);
        assert!((&QuadNumber::zero() * &x).is_zero());
    }

    #[test]
    fn errors() {
        assert_eq!(QuadNumber::zero().inv(), Err(Error::DivisionByZero));
        assert_eq!(
            q(0, 1, 2).checked_add(&q(0, 1, 3)),
            Err(Error::MixedDiscriminants(2, 3))
        );
        assert!(QuadNumber::new(big(1), big(1), 4).is_err());
        assert!(QuadNumber::new(big(1), big(1), 1).is_err());
        assert!(QuadNumber::new(big(1), big(1), 0).is_err());
    }

    #[test]
    fn sqrt_extracts_squares() {
        assert_eq!(QuadNumber::sqrt(8), q(0, 2, 2));
        assert_eq!(QuadNumber::sqrt(9), QuadNumber::from_int(3));
    }

    #[test]
    fn sign_is_exact() {
        assert_eq!(q(-1, 1, 2).signum(), 1);
        assert_eq!(q(2, -1, 2).signum(), 1);
        assert_eq!(q(1, -1, 2).signum(), -1);
        assert_eq!(q(-3, 2, 2).signum(), -1);
    }

    #[test]
    fn lattice_membership() {
        let theta = QuadNumber::sqrt(2);
        assert!(q(3, -2, 2).in_lattice(&theta));
        assert!(!QuadNumber::from_frac(1, 2).unwrap().in_lattice(&theta));
        assert!(!q(0, 1, 3).in_lattice(&theta));
    }

    #[test]
    fn display() {
        assert_eq!(q(1, 1, 2).to_string(), "1+sqrt(2)");
        assert_eq!(q(0, -3, 2).to_string(), "-3*sqrt(2)");
        assert_eq!(QuadNumber::from_frac(-1, 2).unwrap().to_string(), "-1/2");
    }
}
