//! First-order jets of polynomial maps between Euclidean spaces.

use super::linalg::Matrix;
use super::poly::Poly;
use super::quad::QuadNumber;
use crate::error::{Error, Result};

/// Value and derivative of a map at a point: `x0 + v  |->  base + linear * v + O(v^2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Jet1 {
    pub base: Vec<QuadNumber>,
    pub linear: Matrix,
}

impl Jet1 {
    pub fn new(base: Vec<QuadNumber>, linear: Matrix) -> Result<Self> {
        if linear.rows() != base.len() {
            return Err(Error::ShapeMismatch(format!(
                "jet base has {} entries but the linear part has {} rows",
                base.len(),
                linear.rows()
            )));
        }
        Ok(Self { base, linear })
    }

    /// The jet of the polynomial map `components` at `at`.
    pub fn of_polys(components: &[Poly], at: &[QuadNumber]) -> Result<Self> {
        let mut base = Vec::with_capacity(components.len());
        let mut rows = Vec::with_capacity(components.len());
        for p in components {
            if p.nvars() != at.len() {
                return Err(Error::ShapeMismatch(format!(
                    "component in {} variables evaluated at a point with {} coordinates",
                    p.nvars(),
                    at.len()
                )));
            }
            base.push(p.eval(at)?);
            let row = (0..at.len())
                .map(|i| p.derivative(i).eval(at))
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        Self::new(base, Matrix::from_rows(at.len(), rows)?)
    }

    pub fn target_dim(&self) -> usize {
        self.base.len()
    }

    pub fn source_dim(&self) -> usize {
        self.linear.cols()
    }

    /// Chain rule: the jet of `self ∘ inner`, with `self` taken at `inner.base`.
    pub fn compose(&self, inner: &Jet1) -> Result<Jet1> {
        if self.source_dim() != inner.target_dim() {
            return Err(Error::ShapeMismatch(format!(
                "cannot compose a jet on R^{} after a jet into R^{}",
                self.source_dim(),
                inner.target_dim()
            )));
        }
        Jet1::new(self.base.clone(), self.linear.mul(&inner.linear)?)
    }

    /// The tangent vector of a curve jet (single source variable).
    pub fn velocity(&self) -> Option<Vec<QuadNumber>> {
        (self.source_dim() == 1).then(|| self.linear.column(0))
    }
}
