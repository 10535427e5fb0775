//! Multivariate power series truncated at a fixed total degree.

use std::collections::BTreeMap;
use std::fmt;

use super::poly::{total_degree, Exponent, Poly};
use super::quad::QuadNumber;
use crate::error::{Error, Result};

/// A power series in `nvars` variables with every term of total degree above `order` dropped.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TruncSeries {
    order: u32,
    poly: Poly,
}

impl TruncSeries {
    pub fn zero(nvars: usize, order: u32) -> Self {
        Self {
            order,
            poly: Poly::zero(nvars),
        }
    }

    pub fn constant(nvars: usize, order: u32, c: QuadNumber) -> Self {
        Self::from_poly(Poly::constant(nvars, c), order)
    }

    pub fn one(nvars: usize, order: u32) -> Self {
        Self::constant(nvars, order, QuadNumber::one())
    }

    pub fn var(nvars: usize, order: u32, i: usize) -> Self {
        Self::from_poly(Poly::var(nvars, i), order)
    }

    /// Truncates `poly` to degree `order`.
    pub fn from_poly(poly: Poly, order: u32) -> Self {
        Self {
            order,
            poly: poly.truncate(order),
        }
    }

    pub fn from_terms(
        nvars: usize,
        order: u32,
        terms: impl IntoIterator<Item = (Exponent, QuadNumber)>,
    ) -> Self {
        Self::from_poly(Poly::from_terms(nvars, terms), order)
    }

    pub fn nvars(&self) -> usize {
        self.poly.nvars()
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeffs(&self) -> &BTreeMap<Exponent, QuadNumber> {
        self.poly.terms()
    }

    pub fn coeff(&self, e: &[u32]) -> QuadNumber {
        self.poly.coeff(e)
    }

    pub fn constant_term(&self) -> QuadNumber {
        self.poly.constant_term()
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn as_poly(&self) -> &Poly {
        &self.poly
    }

    /// Lowest total degree with a nonzero coefficient.
    pub fn valuation(&self) -> Option<u32> {
        self.poly.order()
    }

    pub fn truncate(&self, order: u32) -> Self {
        Self::from_poly(self.poly.clone(), order.min(self.order))
    }

    fn check_shape(&self, other: &Self) -> Result<()> {
        if self.nvars() != other.nvars() || self.order != other.order {
            return Err(Error::ShapeMismatch(format!(
                "series in {} variables at order {} vs {} variables at order {}",
                self.nvars(),
                self.order,
                other.nvars(),
                other.order
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        Ok(Self {
            order: self.order,
            poly: &self.poly + &other.poly,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        Ok(Self {
            order: self.order,
            poly: &self.poly - &other.poly,
        })
    }

    pub fn scale(&self, c: &QuadNumber) -> Self {
        Self {
            order: self.order,
            poly: self.poly.scale(c),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        series_mul(self, other)
    }

    /// Partial derivative in variable `i`; exact only up to degree `order - 1`, so the
    /// result carries that order.
    pub fn partial(&self, i: usize) -> Self {
        let order = self.order.saturating_sub(1);
        Self::from_poly(self.poly.derivative(i), order)
    }

    /// Coefficientwise evaluation of the linear part: the gradient at 0.
    pub fn linear_part(&self) -> Vec<QuadNumber> {
        (0..self.nvars())
            .map(|i| {
                let mut e = vec![0; self.nvars()];
                e[i] = 1;
                self.coeff(&e)
            })
            .collect()
    }

    /// Every exponent of total degree between `lo` and `hi` in `nvars` variables.
    pub fn monomials(nvars: usize, lo: u32, hi: u32) -> Vec<Exponent> {
        let mut out = Vec::new();
        let mut cur = vec![0u32; nvars];
        fn rec(i: usize, left: u32, cur: &mut Vec<u32>, lo: u32, hi: u32, out: &mut Vec<Exponent>) {
            if i == cur.len() {
                let d = total_degree(cur);
                if d >= lo && d <= hi {
                    out.push(cur.clone());
                }
                return;
            }
            for k in 0..=left {
                cur[i] = k;
                rec(i + 1, left - k, cur, lo, hi, out);
            }
            cur[i] = 0;
        }
        rec(0, hi, &mut cur, lo, hi, &mut out);
        out
    }
}

/// Cauchy product truncated at the shared order.
pub fn series_mul(a: &TruncSeries, b: &TruncSeries) -> Result<TruncSeries> {
    a.check_shape(b)?;
    Ok(TruncSeries {
        order: a.order,
        poly: a.poly.mul_truncated(&b.poly, Some(a.order))?,
    })
}

/// Formal substitution of `inners` into the variables of `outer`.
pub fn series_compose(outer: &TruncSeries, inners: &[TruncSeries]) -> Result<TruncSeries> {
    if inners.len() != outer.nvars() {
        return Err(Error::ShapeMismatch(format!(
            "outer series has {} variables but {} inner series were given",
            outer.nvars(),
            inners.len()
        )));
    }
    for (index, inner) in inners.iter().enumerate() {
        if inner.order != outer.order || inner.nvars() != inners[0].nvars() {
            return Err(Error::ShapeMismatch(format!(
                "inner series {index} has order {} in {} variables",
                inner.order,
                inner.nvars()
            )));
        }
        if !inner.constant_term().is_zero() {
            return Err(Error::NonzeroConstantTerm { index });
        }
    }
    if inners.is_empty() {
        return Ok(outer.clone());
    }
    let polys: Vec<Poly> = inners.iter().map(|s| s.poly.clone()).collect();
    Ok(TruncSeries {
        order: outer.order,
        poly: outer.poly.compose_truncated(&polys, Some(outer.order))?,
    })
}

impl fmt::Display for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + O({})", self.poly, self.order + 1)
    }
}

impl fmt::Debug for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> QuadNumber {
        QuadNumber::from_int(n)
    }

    fn uni(order: u32, coeffs: &[i64]) -> TruncSeries {
        let cs: Vec<QuadNumber> = coeffs.iter().map(|&c| q(c)).collect();
        TruncSeries::from_poly(Poly::univariate(&cs), order)
    }

    #[test]
    fn difference_of_squares() {
        let got = series_mul(&uni(3, &[1, 1]), &uni(3, &[1, -1])).unwrap();
        assert_eq!(got, uni(3, &[1, 0, -1]));
    }

    #[test]
    fn square_truncates_at_order_one() {
        let t = uni(1, &[0, 1]);
        assert!(series_mul(&t, &t).unwrap().is_zero());
    }

    #[test]
    fn square_of_quadratic_at_order_two() {
        let s = uni(2, &[1, 1, 1]);
        assert_eq!(series_mul(&s, &s).unwrap(), uni(2, &[1, 2, 3]));
    }

    #[test]
    fn compose_square_into_t_plus_t2() {
        let outer = uni(4, &[0, 0, 1]);
        let inner = uni(4, &[0, 1, 1]);
        assert_eq!(series_compose(&outer, &[inner]).unwrap(), uni(4, &[0, 0, 1, 2, 1]));
    }

    #[test]
    fn compose_identity_and_constant() {
        let s = uni(4, &[0, 1]);
        assert_eq!(series_compose(&s, std::slice::from_ref(&s)).unwrap(), s);
        let one = uni(4, &[1]);
        assert_eq!(series_compose(&one, &[uni(4, &[0, 3, 5])]).unwrap(), one);
    }

    #[test]
    fn compose_errors() {
        let outer = uni(4, &[0, 0, 1]);
        assert_eq!(
            series_compose(&outer, &[uni(4, &[1, 1])]),
            Err(Error::NonzeroConstantTerm { index: 0 })
        );
        assert!(matches!(
            series_compose(&outer, &[uni(3, &[0, 1])]),
            Err(Error::ShapeMismatch(_))
        ));
        assert!(matches!(series_mul(&uni(3, &[1]), &uni(4, &[1])), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn monomial_count() {
        // degree <= 3 in 3 variables: C(6,3) = 20
        assert_eq!(TruncSeries::monomials(3, 0, 3).len(), 20);
        assert_eq!(TruncSeries::monomials(2, 2, 2).len(), 3);
    }
}
