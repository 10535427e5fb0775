//! Exact linear algebra over [`QuadNumber`]: sparse row echelon forms, ranks,
//! quotient spaces with coset representatives, and small dense matrices.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use super::poly::Poly;
use super::quad::QuadNumber;
use crate::error::{Error, Result};

pub type SparseVec = BTreeMap<usize, QuadNumber>;

pub fn to_sparse(v: &[QuadNumber]) -> SparseVec {
    v.iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (i, c.clone()))
        .collect()
}

pub fn to_dense(v: &SparseVec, len: usize) -> Vec<QuadNumber> {
    let mut out = vec![QuadNumber::zero(); len];
    for (&i, c) in v {
        out[i] = c.clone();
    }
    out
}

pub fn unit(len: usize, i: usize) -> Vec<QuadNumber> {
    let mut v = vec![QuadNumber::zero(); len];
    v[i] = QuadNumber::one();
    v
}

/// `v -= c * w` in place, dropping cancelled entries.
fn axpy(v: &mut SparseVec, c: &QuadNumber, w: &SparseVec) {
    for (&i, x) in w {
        let delta = c * x;
        match v.get_mut(&i) {
            Some(entry) => {
                let s = &*entry - &delta;
                if s.is_zero() {
                    v.remove(&i);
                } else {
                    *entry = s;
                }
            }
            None => {
                v.insert(i, -delta);
            }
        }
    }
}

fn axpy_dense(v: &mut [QuadNumber], c: &QuadNumber, w: &[QuadNumber]) {
    for (a, b) in v.iter_mut().zip(w) {
        if !b.is_zero() {
            *a = &*a + &(c * b);
        }
    }
}

/// An incrementally built row echelon form. Each row has leading coefficient 1 at
/// its pivot and carries a tag vector: a linear combination that the row is known
/// to equal in some quotient (see [`Classifier`]).
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    tag_dim: usize,
    rows: BTreeMap<usize, (SparseVec, Vec<QuadNumber>)>,
}

impl Echelon {
    pub fn new(tag_dim: usize) -> Self {
        Self {
            tag_dim,
            rows: BTreeMap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the rows. Returns the residual and the accumulated tag
    /// `sum c_r tag_r` where `v = sum c_r row_r + residual`.
    pub fn reduce(&self, mut v: SparseVec) -> (SparseVec, Vec<QuadNumber>) {
        let mut tag = vec![QuadNumber::zero(); self.tag_dim];
        let mut cursor = 0usize;
        loop {
            let next = v
                .range(cursor..)
                .find(|(k, _)| self.rows.contains_key(k))
                .map(|(&k, c)| (k, c.clone()));
            let Some((k, c)) = next else { break };
            let (row, row_tag) = &self.rows[&k];
            axpy(&mut v, &c, row);
            axpy_dense(&mut tag, &c, row_tag);
            cursor = k + 1;
        }
        (v, tag)
    }

    pub fn contains(&self, v: SparseVec) -> bool {
        self.reduce(v).0.is_empty()
    }

    /// Inserts `v` with the given tag. Returns false (and changes nothing) when `v`
    /// is already in the span.
    pub fn insert(&mut self, v: SparseVec, tag: Vec<QuadNumber>) -> bool {
        debug_assert_eq!(tag.len(), self.tag_dim);
        let (mut residual, acc) = self.reduce(v);
        let Some((&pivot, lead)) = residual.iter().next() else {
            return false;
        };
        let inv = lead.inv().expect("stored entries are nonzero");
        let mut row_tag = tag;
        axpy_dense(&mut row_tag, &QuadNumber::one(), &acc.iter().map(|x| -x).collect::<Vec<_>>());
        for x in residual.values_mut() {
            *x = &*x * &inv;
        }
        for x in row_tag.iter_mut() {
            *x = &*x * &inv;
        }
        self.rows.insert(pivot, (residual, row_tag));
        true
    }
}

/// A finite spanning set in `QuadNumber^ambient_dim`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinSpace {
    ambient_dim: usize,
    spanning_vectors: Vec<Vec<QuadNumber>>,
}

impl LinSpace {
    pub fn new(ambient_dim: usize, spanning_vectors: Vec<Vec<QuadNumber>>) -> Result<Self> {
        if let Some(v) = spanning_vectors.iter().find(|v| v.len() != ambient_dim) {
            return Err(Error::ShapeMismatch(format!(
                "vector of length {} in an ambient space of dimension {ambient_dim}",
                v.len()
            )));
        }
        Ok(Self {
            ambient_dim,
            spanning_vectors,
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn spanning_vectors(&self) -> &[Vec<QuadNumber>] {
        &self.spanning_vectors
    }

    pub fn echelon(&self) -> Echelon {
        let mut e = Echelon::new(0);
        for v in &self.spanning_vectors {
            e.insert(to_sparse(v), Vec::new());
        }
        e
    }

    pub fn rank(&self) -> usize {
        self.echelon().rank()
    }

    pub fn contains(&self, v: &[QuadNumber]) -> bool {
        self.echelon().contains(to_sparse(v))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quotient {
    pub dim: usize,
    /// Indices into `big`'s spanning vectors whose classes form a basis of the quotient.
    pub coset_basis: Vec<usize>,
}

/// `span(big) / span(sub)`.
pub fn quotient_dim(big: &LinSpace, sub: &LinSpace) -> Result<Quotient> {
    if big.ambient_dim != sub.ambient_dim {
        return Err(Error::ShapeMismatch(format!(
            "quotient of a subspace of dimension-{} space by one in dimension {}",
            big.ambient_dim, sub.ambient_dim
        )));
    }
    let big_sparse: Vec<SparseVec> = big.spanning_vectors.iter().map(|v| to_sparse(v)).collect();
    let sub_sparse: Vec<SparseVec> = sub.spanning_vectors.iter().map(|v| to_sparse(v)).collect();
    let c = Classifier::build(&big_sparse, &sub_sparse)?;
    Ok(Quotient {
        dim: c.dim(),
        coset_basis: c.coset_basis().to_vec(),
    })
}

/// Presents `span(big) / span(sub)` and expresses vectors of `span(big)` in the basis
/// of coset representatives.
#[derive(Clone, Debug)]
pub struct Classifier {
    coset_basis: Vec<usize>,
    echelon: Echelon,
}

impl Classifier {
    pub fn build(big: &[SparseVec], sub: &[SparseVec]) -> Result<Self> {
        let mut span = Echelon::new(0);
        for v in big {
            span.insert(v.clone(), Vec::new());
        }
        if let Some(index) = sub.iter().position(|v| !span.contains(v.clone())) {
            return Err(Error::SubNotContained { index });
        }
        let mut rel = Echelon::new(0);
        for v in sub {
            rel.insert(v.clone(), Vec::new());
        }
        let mut coset_basis = Vec::new();
        for (i, v) in big.iter().enumerate() {
            if rel.insert(v.clone(), Vec::new()) {
                coset_basis.push(i);
            }
        }
        let dim = coset_basis.len();
        let mut echelon = Echelon::new(dim);
        for v in sub {
            echelon.insert(v.clone(), vec![QuadNumber::zero(); dim]);
        }
        for (j, &i) in coset_basis.iter().enumerate() {
            echelon.insert(big[i].clone(), unit(dim, j));
        }
        Ok(Self {
            coset_basis,
            echelon,
        })
    }

    pub fn dim(&self) -> usize {
        self.coset_basis.len()
    }

    pub fn coset_basis(&self) -> &[usize] {
        &self.coset_basis
    }

    /// Coordinates of the class of `v`, or `None` when `v` is outside `span(big)`.
    pub fn classify(&self, v: SparseVec) -> Option<Vec<QuadNumber>> {
        let (residual, tag) = self.echelon.reduce(v);
        residual.is_empty().then_some(tag)
    }
}

/// Solves `sum x_i columns[i] = target`, returning one solution if any exists.
pub fn solve(columns: &[SparseVec], target: &SparseVec) -> Option<Vec<QuadNumber>> {
    let c = Classifier::build(columns, &[]).expect("empty sub is always contained");
    let coords = c.classify(target.clone())?;
    let mut x = vec![QuadNumber::zero(); columns.len()];
    for (j, &i) in c.coset_basis().iter().enumerate() {
        x[i] = coords[j].clone();
    }
    Some(x)
}

/// A small dense matrix, allowed to have zero rows or zero columns.
#[derive(Clone, PartialEq, Eq, Serialize)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<QuadNumber>>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![vec![QuadNumber::zero(); cols]; rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i][i] = QuadNumber::one();
        }
        m
    }

    pub fn from_rows(cols: usize, data: Vec<Vec<QuadNumber>>) -> Result<Self> {
        if let Some(r) = data.iter().find(|r| r.len() != cols) {
            return Err(Error::ShapeMismatch(format!(
                "row of length {} in a matrix with {cols} columns",
                r.len()
            )));
        }
        Ok(Self {
            rows: data.len(),
            cols,
            data,
        })
    }

    pub fn from_columns(rows: usize, columns: Vec<Vec<QuadNumber>>) -> Result<Self> {
        if let Some(c) = columns.iter().find(|c| c.len() != rows) {
            return Err(Error::ShapeMismatch(format!(
                "column of length {} in a matrix with {rows} rows",
                c.len()
            )));
        }
        let data = (0..rows)
            .map(|i| columns.iter().map(|c| c[i].clone()).collect())
            .collect();
        Ok(Self {
            rows,
            cols: columns.len(),
            data,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &QuadNumber {
        &self.data[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: QuadNumber) {
        self.data[i][j] = v;
    }

    pub fn row(&self, i: usize) -> &[QuadNumber] {
        &self.data[i]
    }

    pub fn column(&self, j: usize) -> Vec<QuadNumber> {
        self.data.iter().map(|r| r[j].clone()).collect()
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[i][k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other.data[k][j];
                    if !b.is_zero() {
                        out.data[i][j] = &out.data[i][j] + &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, v: &[QuadNumber]) -> Result<Vec<QuadNumber>> {
        let col = Matrix::from_columns(v.len(), vec![v.to_vec()])?;
        Ok(self.mul(&col)?.column(0))
    }

    pub fn transpose(&self) -> Matrix {
        Matrix {
            rows: self.cols,
            cols: self.rows,
            data: (0..self.cols).map(|j| self.column(j)).collect(),
        }
    }

    pub fn rank(&self) -> usize {
        let mut e = Echelon::new(0);
        for r in &self.data {
            e.insert(to_sparse(r), Vec::new());
        }
        e.rank()
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == Matrix::identity(self.rows)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().flatten().all(QuadNumber::is_zero)
    }

    /// A square 0/1 matrix with exactly one 1 in every row and column.
    pub fn is_permutation(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        let ok_line = |line: Vec<&QuadNumber>| {
            line.iter().filter(|x| x.is_one()).count() == 1
                && line.iter().all(|x| x.is_one() || x.is_zero())
        };
        (0..self.rows).all(|i| ok_line(self.data[i].iter().collect()))
            && (0..self.cols).all(|j| ok_line(self.data.iter().map(|r| &r[j]).collect()))
    }

    pub fn to_strings(&self) -> Vec<Vec<String>> {
        self.data
            .iter()
            .map(|r| r.iter().map(|x| x.to_string()).collect())
            .collect()
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix{}x{}{:?}", self.rows, self.cols, self.data)
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rows == 0 || self.cols == 0 {
            return write!(f, "({}x{} empty)", self.rows, self.cols);
        }
        for (i, r) in self.data.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            let cells: Vec<String> = r.iter().map(|x| x.to_string()).collect();
            write!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

impl Matrix {
    /// The matrix applied to a vector of polynomials.
    pub fn apply_polys(&self, v: &[Poly]) -> Result<Vec<Poly>> {
        if v.len() != self.cols() {
            return Err(Error::ShapeMismatch(format!(
                "{} polynomials for a matrix with {} columns",
                v.len(),
                self.cols()
            )));
        }
        let nvars = v.first().map(Poly::nvars).unwrap_or(0);
        Ok((0..self.rows())
            .map(|i| {
                let mut acc = Poly::zero(nvars);
                for (j, p) in v.iter().enumerate() {
                    acc = &acc + &p.scale(self.get(i, j));
                }
                acc
            })
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> Vec<QuadNumber> {
        xs.iter().map(|&x| QuadNumber::from_int(x)).collect()
    }

    #[test]
    fn quotient_by_axis() {
        let big = LinSpace::new(3, vec![v(&[1, 0, 0]), v(&[0, 1, 0])]).unwrap();
        let sub = LinSpace::new(3, vec![v(&[1, 0, 0])]).unwrap();
        let q = quotient_dim(&big, &sub).unwrap();
        assert_eq!(q.dim, 1);
        assert_eq!(q.coset_basis, vec![1]);
    }

    #[test]
    fn quotient_by_nothing() {
        let big = LinSpace::new(3, vec![v(&[1, 0, 0]), v(&[1, 1, 0])]).unwrap();
        let sub = LinSpace::new(3, vec![]).unwrap();
        assert_eq!(quotient_dim(&big, &sub).unwrap().dim, 2);
    }

    #[test]
    fn sub_outside_is_rejected() {
        let big = LinSpace::new(2, vec![v(&[1, 0])]).unwrap();
        let sub = LinSpace::new(2, vec![v(&[0, 0]), v(&[0, 1])]).unwrap();
        assert_eq!(quotient_dim(&big, &sub), Err(Error::SubNotContained { index: 1 }));
    }

    #[test]
    fn classifier_expresses_modulo_relations() {
        // F = Q^3 on curves a, b, c with relation b = 2a; c independent.
        let big: Vec<SparseVec> = (0..3).map(|i| to_sparse(&unit(3, i))).collect();
        let rel = vec![to_sparse(&v(&[2, -1, 0]))];
        let c = Classifier::build(&big, &rel).unwrap();
        assert_eq!(c.dim(), 2);
        let coords = c.classify(to_sparse(&unit(3, 1))).unwrap();
        let a_pos = c.coset_basis().iter().position(|&i| i == 0);
        match a_pos {
            Some(p) => assert_eq!(coords[p], QuadNumber::from_int(2)),
            None => panic!("a should be a coset representative"),
        }
    }

    #[test]
    fn solve_finds_combination() {
        let cols = vec![to_sparse(&v(&[1, 0])), to_sparse(&v(&[1, 1]))];
        let x = solve(&cols, &to_sparse(&v(&[3, 2]))).unwrap();
        assert_eq!(x, v(&[1, 2]));
        assert!(solve(&cols[..1], &to_sparse(&v(&[0, 1]))).is_none());
    }

    #[test]
    fn empty_shapes_multiply() {
        let a = Matrix::zeros(0, 1);
        let b = Matrix::zeros(1, 0);
        assert_eq!(a.mul(&b).unwrap(), Matrix::zeros(0, 0));
        assert_eq!(b.mul(&a).unwrap(), Matrix::zeros(1, 1));
        assert!(Matrix::identity(0).is_identity());
    }
}
