//! Multivariate polynomials over [`QuadNumber`], stored sparsely by exponent vector.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::quad::QuadNumber;
use crate::error::{Error, Result};

pub type Exponent = Vec<u32>;

/// A polynomial in `nvars` variables. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Exponent, QuadNumber>,
}

pub fn total_degree(e: &[u32]) -> u32 {
    e.iter().sum()
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Self {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: QuadNumber) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, QuadNumber::one())
    }

    /// The coordinate function `x_i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(e, QuadNumber::one())
    }

    pub fn monomial(exps: Exponent, c: QuadNumber) -> Self {
        let mut p = Self::zero(exps.len());
        p.add_term(exps, c);
        p
    }

    /// Builds a univariate polynomial from coefficients `c_0, c_1, ...`.
    pub fn univariate(coeffs: &[QuadNumber]) -> Self {
        let mut p = Self::zero(1);
        for (k, c) in coeffs.iter().enumerate() {
            p.add_term(vec![k as u32], c.clone());
        }
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Exponent, QuadNumber)>) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent length must equal nvars");
            p.add_term(e, c);
        }
        p
    }

    pub fn add_term(&mut self, e: Exponent, c: QuadNumber) {
        debug_assert_eq!(e.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(existing) => {
                let s = &*existing + &c;
                if s.is_zero() {
                    self.terms.remove(&e);
                } else {
                    *existing = s;
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Exponent, QuadNumber> {
        &self.terms
    }

    pub fn coeff(&self, e: &[u32]) -> QuadNumber {
        self.terms.get(e).cloned().unwrap_or_else(QuadNumber::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| total_degree(e) == 0)
    }

    pub fn constant_term(&self) -> QuadNumber {
        self.coeff(&vec![0; self.nvars])
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| total_degree(e)).max()
    }

    /// Lowest total degree carrying a nonzero coefficient.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(|e| total_degree(e)).min()
    }

    pub fn homogeneous_part(&self, deg: u32) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| total_degree(e) == deg)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn truncate(&self, order: u32) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| total_degree(e) <= order)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Indices of variables that occur with positive exponent.
    pub fn variables_used(&self) -> Vec<usize> {
        (0..self.nvars)
            .filter(|&i| self.terms.keys().any(|e| e[i] > 0))
            .collect()
    }

    pub fn scale(&self, c: &QuadNumber) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
        }
    }

    fn check_same(&self, other: &Poly) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::ShapeMismatch(format!(
                "polynomials in {} and {} variables",
                self.nvars, other.nvars
            )));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Poly) -> Result<Poly> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Poly) -> Result<Poly> {
        self.mul_truncated(other, None)
    }

    /// Product, dropping every term of total degree above `order` when given.
    pub fn mul_truncated(&self, other: &Poly, order: Option<u32>) -> Result<Poly> {
        self.check_same(other)?;
        let mut out = Poly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            let da = total_degree(ea);
            for (eb, cb) in &other.terms {
                if let Some(k) = order {
                    if da + total_degree(eb) > k {
                        continue;
                    }
                }
                let e: Exponent = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(e, ca * cb);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut acc = Poly::one(self.nvars);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn pow_truncated(&self, k: u32, order: Option<u32>) -> Poly {
        let mut acc = Poly::one(self.nvars).truncate(order.unwrap_or(u32::MAX));
        for _ in 0..k {
            acc = acc.mul_truncated(self, order).expect("same nvars");
        }
        acc
    }

    pub fn derivative(&self, i: usize) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[i] -= 1;
            out.add_term(e2, c * &QuadNumber::from_int(e[i] as i64));
        }
        out
    }

    /// `k`-th derivative in variable `i`.
    pub fn nth_derivative(&self, i: usize, k: u32) -> Poly {
        (0..k).fold(self.clone(), |p, _| p.derivative(i))
    }

    pub fn eval(&self, point: &[QuadNumber]) -> Result<QuadNumber> {
        if point.len() != self.nvars {
            return Err(Error::ShapeMismatch(format!(
                "evaluating a polynomial in {} variables at a point with {} coordinates",
                self.nvars,
                point.len()
            )));
        }
        let mut acc = QuadNumber::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (x, &k) in point.iter().zip(e) {
                if k > 0 {
                    term = term.checked_mul(&x.pow(k))?;
                }
            }
            acc = acc.checked_add(&term)?;
        }
        Ok(acc)
    }

    /// Substitutes `inners[i]` for variable `i`. All inners share one variable count.
    pub fn compose(&self, inners: &[Poly]) -> Result<Poly> {
        self.compose_truncated(inners, None)
    }

    pub fn compose_truncated(&self, inners: &[Poly], order: Option<u32>) -> Result<Poly> {
        if inners.len() != self.nvars {
            return Err(Error::ShapeMismatch(format!(
                "substituting {} polynomials into {} variables",
                inners.len(),
                self.nvars
            )));
        }
        let m = match inners.first() {
            Some(p) => p.nvars,
            None => return Ok(self.clone()),
        };
        if let Some(bad) = inners.iter().find(|p| p.nvars != m) {
            return Err(Error::ShapeMismatch(format!(
                "inner polynomials in {} and {} variables",
                m, bad.nvars
            )));
        }
        let mut powers: Vec<Vec<Poly>> = Vec::with_capacity(inners.len());
        for (i, inner) in inners.iter().enumerate() {
            let maxk = self.terms.keys().map(|e| e[i]).max().unwrap_or(0);
            let mut list = vec![Poly::one(m)];
            for k in 1..=maxk {
                let next = list[(k - 1) as usize].mul_truncated(inner, order)?;
                list.push(next);
            }
            powers.push(list);
        }
        let mut out = Poly::zero(m);
        for (e, c) in &self.terms {
            let mut term = Poly::constant(m, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    term = term.mul_truncated(&powers[i][k as usize], order)?;
                }
            }
            out = out.checked_add(&term)?;
        }
        Ok(out)
    }

    /// Reinterprets the polynomial in `total` variables, its own variables placed at `offset..`.
    pub fn embed(&self, total: usize, offset: usize) -> Poly {
        assert!(offset + self.nvars <= total);
        Poly {
            nvars: total,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut big = vec![0; total];
                    big[offset..offset + self.nvars].copy_from_slice(e);
                    (big, c.clone())
                })
                .collect(),
        }
    }

    /// `p(x + shift)`.
    pub fn shift(&self, shift: &[QuadNumber]) -> Result<Poly> {
        let inners: Vec<Poly> = (0..self.nvars)
            .map(|i| &Poly::var(self.nvars, i) + &Poly::constant(self.nvars, shift[i].clone()))
            .collect();
        self.compose(&inners)
    }

    /// `self / x_i^k`, defined when every term is divisible.
    pub fn div_var_power(&self, i: usize, k: u32) -> Option<Poly> {
        let mut out = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] < k {
                return None;
            }
            let mut e2 = e.clone();
            e2[i] -= k;
            out.add_term(e2, c.clone());
        }
        Some(out)
    }

    /// Coefficient of `x_i` in the linear part.
    pub fn linear_coeff(&self, i: usize) -> QuadNumber {
        let mut e = vec![0; self.nvars];
        e[i] = 1;
        self.coeff(&e)
    }

    pub fn coefficients(&self) -> impl Iterator<Item = &QuadNumber> {
        self.terms.values()
    }

    pub fn fmt_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (e, c)) in self.terms.iter().enumerate() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| {
                    if k == 1 {
                        names[i].clone()
                    } else {
                        format!("{}^{}", names[i], k)
                    }
                })
                .collect();
            let (neg, mag) = if c.is_rational() && c.signum() < 0 {
                (true, -c)
            } else {
                (false, c.clone())
            };
            if idx > 0 {
                out.push(if neg { '-' } else { '+' });
            } else if neg {
                out.push('-');
            }
            let coeff = if mag.is_rational() {
                mag.to_string()
            } else {
                format!("({mag})")
            };
            if mono.is_empty() {
                out.push_str(&coeff);
            } else {
                if !mag.is_one() {
                    out.push_str(&coeff);
                    out.push('*');
                }
                out.push_str(&mono.join("*"));
            }
        }
        out
    }
}

pub fn default_var_names(n: usize) -> Vec<String> {
    match n {
        1 => vec!["t".into()],
        2 => vec!["x".into(), "y".into()],
        3 => vec!["x".into(), "y".into(), "z".into()],
        _ => (1..=n).map(|i| format!("u{i}")).collect(),
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_with(&default_var_names(self.nvars)))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[{}]({})", self.nvars, self)
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &'a Poly) -> Poly {
        self.checked_add(rhs).expect("polynomial variable counts differ")
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &'a Poly) -> Poly {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &'a Poly) -> Poly {
        self.checked_mul(rhs).expect("polynomial variable counts differ")
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&QuadNumber::from_int(-1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t() -> Poly {
        Poly::var(1, 0)
    }

    fn c(n: i64) -> Poly {
        Poly::constant(1, QuadNumber::from_int(n))
    }

    #[test]
    fn composition_expands() {
        // (t + t^2)^2 = t^2 + 2t^3 + t^4
        let outer = Poly::var(1, 0).pow(2);
        let inner = &t() + &t().pow(2);
        let got = outer.compose(&[inner]).unwrap();
        let want = &(&t().pow(2) + &t().pow(3).scale(&QuadNumber::from_int(2))) + &t().pow(4);
        assert_eq!(got, want);
    }

    #[test]
    fn derivative_and_eval() {
        let p = &(&t().pow(3) + &c(2)) - &t();
        assert_eq!(p.derivative(0), &t().pow(2).scale(&QuadNumber::from_int(3)) - &c(1));
        assert_eq!(p.eval(&[QuadNumber::from_int(2)]).unwrap(), QuadNumber::from_int(8));
    }

    #[test]
    fn embed_and_variables_used() {
        let p = Poly::var(2, 1).embed(4, 1);
        assert_eq!(p.variables_used(), vec![2]);
    }

    #[test]
    fn shape_errors() {
        assert!(Poly::var(2, 0).checked_add(&Poly::var(1, 0)).is_err());
        assert!(Poly::var(2, 0).compose(&[t()]).is_err());
    }
}
