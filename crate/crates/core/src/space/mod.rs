//! The catalog of finitely presented diffeological spaces.
//!
//! Every space is a subset or quotient of some coordinate space, and points and
//! plots are written in those ambient coordinates: a wedge of `j` lines lives on
//! the coordinate axes of `R^j`, the orbit space `R^n/O(n)` and the irrational
//! torus are handled through lifts to `R^n` and `R`.

mod plot;

use std::fmt;

pub use plot::{
    plot_check, plot_check_with, same_plot, Branch, MembershipReason, MembershipWitness,
    PlotCertificate, PolyPlot, Verdict,
};

use crate::algebra::QuadNumber;
use crate::error::{Error, Result};

/// Underlying set of a discrete or indiscrete space.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PointSet {
    /// `{0, 1, ..., k-1}`, as integers on the real line.
    Finite(u32),
    /// `R^n`.
    Real(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    Euclidean(usize),
    Discrete(PointSet),
    Indiscrete(PointSet),
    ContinuousLine,
    WedgeOfLines(usize),
    AxesSub(usize),
    LinesThroughOriginSub(Vec<[QuadNumber; 2]>),
    HalfLineSub,
    OrbitQuotient(usize),
    IrrationalTorus(QuadNumber),
    FineVector(usize),
    Generated { n: usize, k: usize },
    Product(Vec<Space>),
}

/// A validated space presentation.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Space {
    family: Family,
}

fn positive(name: &str, n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParameter(format!("{name} must be at least 1")));
    }
    Ok(())
}

impl Space {
    pub fn new(family: Family) -> Result<Self> {
        let family = match family {
            Family::Euclidean(n) => {
                positive("euclidean dimension", n)?;
                Family::Euclidean(n)
            }
            Family::FineVector(n) => {
                positive("vector space dimension", n)?;
                Family::FineVector(n)
            }
            Family::OrbitQuotient(n) => {
                positive("orbit space dimension", n)?;
                Family::OrbitQuotient(n)
            }
            Family::Discrete(s) | Family::Indiscrete(s)
                if matches!(s, PointSet::Finite(0) | PointSet::Real(0)) =>
            {
                return Err(Error::InvalidParameter("point set must be nonempty".into()));
            }
            Family::WedgeOfLines(j) | Family::AxesSub(j) if j < 2 => {
                return Err(Error::InvalidParameter(format!(
                    "a union of lines needs at least 2 lines, got {j}"
                )));
            }
            Family::LinesThroughOriginSub(dirs) => {
                validate_directions(&dirs)?;
                Family::LinesThroughOriginSub(dirs)
            }
            Family::IrrationalTorus(theta) => {
                if theta.is_rational() {
                    return Err(Error::InvalidParameter(format!(
                        "torus slope {theta} is rational"
                    )));
                }
                Family::IrrationalTorus(theta)
            }
            Family::Generated { n, k } => {
                positive("generated space dimension", n)?;
                positive("generating source dimension", k)?;
                Family::Generated { n, k }
            }
            Family::Product(factors) => {
                if factors.is_empty() {
                    return Err(Error::InvalidParameter("empty product".into()));
                }
                let mut flat = Vec::new();
                for f in factors {
                    match f.family {
                        Family::Product(inner) => flat.extend(inner),
                        _ => flat.push(f),
                    }
                }
                Family::Product(flat)
            }
            other => other,
        };
        let space = Self { family };
        space.field_discriminant()?;
        Ok(space)
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn euclidean(n: usize) -> Result<Self> {
        Self::new(Family::Euclidean(n))
    }

    pub fn wedge(j: usize) -> Result<Self> {
        Self::new(Family::WedgeOfLines(j))
    }

    pub fn axes_sub(j: usize) -> Result<Self> {
        Self::new(Family::AxesSub(j))
    }

    pub fn half_line() -> Self {
        Self {
            family: Family::HalfLineSub,
        }
    }

    pub fn orbit_quotient(n: usize) -> Result<Self> {
        Self::new(Family::OrbitQuotient(n))
    }

    pub fn irrational_torus(theta: QuadNumber) -> Result<Self> {
        Self::new(Family::IrrationalTorus(theta))
    }

    pub fn fine_vector(d: usize) -> Result<Self> {
        Self::new(Family::FineVector(d))
    }

    pub fn generated(n: usize, k: usize) -> Result<Self> {
        Self::new(Family::Generated { n, k })
    }

    pub fn lines_sub(dirs: Vec<[QuadNumber; 2]>) -> Result<Self> {
        Self::new(Family::LinesThroughOriginSub(dirs))
    }

    /// The flattened product of `factors`.
    pub fn product(factors: Vec<Space>) -> Result<Self> {
        Self::new(Family::Product(factors))
    }

    /// The factors of a product, or the space itself as a single factor.
    pub fn factors(&self) -> Vec<&Space> {
        match &self.family {
            Family::Product(fs) => fs.iter().collect(),
            _ => vec![self],
        }
    }

    /// The common discriminant of all irrational parameters (0 if all are rational).
    pub fn field_discriminant(&self) -> Result<u64> {
        let mut found = 0u64;
        let mut note = |q: &QuadNumber| -> Result<()> {
            let d = q.discriminant();
            if d != 0 {
                if found != 0 && found != d {
                    return Err(Error::MixedDiscriminants(found, d));
                }
                found = d;
            }
            Ok(())
        };
        let mut stack = vec![self];
        while let Some(s) = stack.pop() {
            match &s.family {
                Family::IrrationalTorus(t) => note(t)?,
                Family::LinesThroughOriginSub(dirs) => {
                    for d in dirs {
                        note(&d[0])?;
                        note(&d[1])?;
                    }
                }
                Family::Product(fs) => stack.extend(fs.iter()),
                _ => {}
            }
        }
        Ok(found)
    }

    /// Number of ambient coordinates used for points and plot components.
    pub fn ambient_dim(&self) -> usize {
        match &self.family {
            Family::Euclidean(n) | Family::FineVector(n) | Family::OrbitQuotient(n) => *n,
            Family::Discrete(s) | Family::Indiscrete(s) => match s {
                PointSet::Finite(_) => 1,
                PointSet::Real(n) => *n,
            },
            Family::ContinuousLine | Family::HalfLineSub | Family::IrrationalTorus(_) => 1,
            Family::WedgeOfLines(j) | Family::AxesSub(j) => *j,
            Family::LinesThroughOriginSub(_) => 2,
            Family::Generated { n, .. } => *n,
            Family::Product(fs) => fs.iter().map(Space::ambient_dim).sum(),
        }
    }

    /// Start offsets of each factor's coordinates inside the ambient coordinates.
    pub fn factor_offsets(&self) -> Vec<usize> {
        let mut offs = Vec::new();
        let mut acc = 0;
        for f in self.factors() {
            offs.push(acc);
            acc += f.ambient_dim();
        }
        offs
    }

    /// Splits ambient coordinates into per-factor slices.
    pub fn split<'a, T>(&self, coords: &'a [T]) -> Vec<&'a [T]> {
        let offs = self.factor_offsets();
        self.factors()
            .iter()
            .zip(offs)
            .map(|(f, o)| &coords[o..o + f.ambient_dim()])
            .collect()
    }

    pub fn origin(&self) -> Vec<QuadNumber> {
        vec![QuadNumber::zero(); self.ambient_dim()]
    }

    pub fn contains_point(&self, point: &[QuadNumber]) -> bool {
        if point.len() != self.ambient_dim() {
            return false;
        }
        match &self.family {
            Family::Discrete(PointSet::Finite(k)) | Family::Indiscrete(PointSet::Finite(k)) => {
                let x = &point[0];
                x.is_integer() && x.signum() >= 0 && x.cmp_value(&QuadNumber::from_int(*k as i64)).ok()
                    == Some(std::cmp::Ordering::Less)
            }
            Family::WedgeOfLines(_) | Family::AxesSub(_) => {
                point.iter().filter(|x| !x.is_zero()).count() <= 1
            }
            Family::LinesThroughOriginSub(dirs) => {
                dirs.iter().any(|d| on_line(d, &point[0], &point[1]))
            }
            Family::HalfLineSub => point[0].signum() >= 0,
            Family::Product(fs) => fs
                .iter()
                .zip(self.split(point))
                .all(|(f, p)| f.contains_point(p)),
            _ => true,
        }
    }

    pub fn check_point(&self, point: &[QuadNumber]) -> Result<()> {
        if self.contains_point(point) {
            Ok(())
        } else {
            Err(Error::PointNotInSpace {
                space: self.to_string(),
                point: format_point(point),
            })
        }
    }

    /// Whether `point` is the distinguished singular point of the family (the
    /// wedge point, the boundary of the half-line, the class of 0 in `R^n/O(n)`).
    pub fn is_singular_point(&self, point: &[QuadNumber]) -> bool {
        match &self.family {
            Family::WedgeOfLines(_)
            | Family::AxesSub(_)
            | Family::LinesThroughOriginSub(_)
            | Family::HalfLineSub
            | Family::OrbitQuotient(_) => point.iter().all(QuadNumber::is_zero),
            _ => false,
        }
    }

    /// For union-of-lines families at a point off the origin: the index of the line.
    pub fn line_through(&self, point: &[QuadNumber]) -> Option<usize> {
        match &self.family {
            Family::WedgeOfLines(_) | Family::AxesSub(_) => {
                let nz: Vec<usize> = (0..point.len()).filter(|&i| !point[i].is_zero()).collect();
                (nz.len() == 1).then(|| nz[0])
            }
            Family::LinesThroughOriginSub(dirs) => {
                if point.iter().all(QuadNumber::is_zero) {
                    return None;
                }
                dirs.iter().position(|d| on_line(d, &point[0], &point[1]))
            }
            _ => None,
        }
    }

    /// Number of lines in a union-of-lines family.
    pub fn line_count(&self) -> Option<usize> {
        match &self.family {
            Family::WedgeOfLines(j) | Family::AxesSub(j) => Some(*j),
            Family::LinesThroughOriginSub(d) => Some(d.len()),
            _ => None,
        }
    }

    /// Direction vector (in ambient coordinates) of line `i` of a union-of-lines family.
    pub fn line_direction(&self, i: usize) -> Option<Vec<QuadNumber>> {
        match &self.family {
            Family::WedgeOfLines(j) | Family::AxesSub(j) if i < *j => {
                Some(crate::algebra::linalg::unit(*j, i))
            }
            Family::LinesThroughOriginSub(d) => d.get(i).map(|v| v.to_vec()),
            _ => None,
        }
    }
}

pub(crate) fn on_line(d: &[QuadNumber; 2], x: &QuadNumber, y: &QuadNumber) -> bool {
    (&(&d[0] * y) - &(&d[1] * x)).is_zero()
}

fn validate_directions(dirs: &[[QuadNumber; 2]]) -> Result<()> {
    if dirs.len() < 2 {
        return Err(Error::InvalidParameter(format!(
            "need at least 2 lines, got {}",
            dirs.len()
        )));
    }
    for (i, d) in dirs.iter().enumerate() {
        if d[0].is_zero() && d[1].is_zero() {
            return Err(Error::InvalidParameter(format!("direction {i} is zero")));
        }
        for (k, e) in dirs.iter().enumerate().take(i) {
            let cross = d[0].checked_mul(&e[1])?.checked_sub(&d[1].checked_mul(&e[0])?)?;
            if cross.is_zero() {
                return Err(Error::InvalidParameter(format!(
                    "directions {k} and {i} are parallel"
                )));
            }
        }
    }
    Ok(())
}

pub fn format_point(point: &[QuadNumber]) -> String {
    let parts: Vec<String> = point.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(", "))
}

impl fmt::Display for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointSet::Finite(k) => write!(f, "finite({k})"),
            PointSet::Real(n) => write!(f, "real({n})"),
        }
    }
}

/// Renders the presentation in the workbench's expression syntax.
impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.family {
            Family::Euclidean(n) => write!(f, "euclidean({n})"),
            Family::Discrete(s) => write!(f, "discrete({s})"),
            Family::Indiscrete(s) => write!(f, "indiscrete({s})"),
            Family::ContinuousLine => write!(f, "continuous_line"),
            Family::WedgeOfLines(j) => write!(f, "wedge({j})"),
            Family::AxesSub(j) => write!(f, "axes_sub({j})"),
            Family::LinesThroughOriginSub(dirs) => {
                let parts: Vec<String> = dirs
                    .iter()
                    .map(|d| format!("({}, {})", d[0], d[1]))
                    .collect();
                write!(f, "lines_sub({})", parts.join(", "))
            }
            Family::HalfLineSub => write!(f, "half_line"),
            Family::OrbitQuotient(n) => write!(f, "orbit_quotient({n})"),
            Family::IrrationalTorus(t) => write!(f, "irrational_torus({t})"),
            Family::FineVector(d) => write!(f, "fine_vector({d})"),
            Family::Generated { n, k } => write!(f, "generated({n}, {k})"),
            Family::Product(fs) => {
                let parts: Vec<String> = fs.iter().map(|s| s.to_string()).collect();
                write!(f, "product[{}]", parts.join(", "))
            }
        }
    }
}

impl fmt::Debug for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Space({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> QuadNumber {
        QuadNumber::from_int(n)
    }

    #[test]
    fn validation_rejects_bad_parameters() {
        assert!(matches!(
            Space::irrational_torus(q(1)),
            Err(Error::InvalidParameter(_))
        ));
        assert!(Space::wedge(1).is_err());
        assert!(Space::lines_sub(vec![[q(1), q(0)], [q(2), q(0)]]).is_err());
        assert!(Space::lines_sub(vec![[q(0), q(0)], [q(1), q(0)]]).is_err());
        assert!(Space::product(vec![]).is_err());
        let mixed = Space::product(vec![
            Space::irrational_torus(QuadNumber::sqrt(2)).unwrap(),
            Space::irrational_torus(QuadNumber::sqrt(3)).unwrap(),
        ]);
        assert_eq!(mixed, Err(Error::MixedDiscriminants(3, 2)));
    }

    #[test]
    fn products_flatten() {
        let inner = Space::product(vec![Space::euclidean(1).unwrap(), Space::half_line()]).unwrap();
        let outer = Space::product(vec![inner, Space::wedge(2).unwrap()]).unwrap();
        assert_eq!(outer.factors().len(), 3);
        assert_eq!(outer.ambient_dim(), 4);
        assert_eq!(outer.to_string(), "product[euclidean(1), half_line, wedge(2)]");
    }

    #[test]
    fn points() {
        let w = Space::wedge(3).unwrap();
        assert!(w.contains_point(&[q(0), q(2), q(0)]));
        assert!(!w.contains_point(&[q(1), q(2), q(0)]));
        assert_eq!(w.line_through(&[q(0), q(2), q(0)]), Some(1));
        assert!(!Space::half_line().contains_point(&[q(-1)]));
        let lines =
            Space::lines_sub(vec![[q(1), q(0)], [q(0), q(1)], [q(1), q(1)]]).unwrap();
        assert_eq!(lines.line_through(&[q(3), q(3)]), Some(2));
        let fin = Space::new(Family::Discrete(PointSet::Finite(3))).unwrap();
        assert!(fin.contains_point(&[q(2)]));
        assert!(!fin.contains_point(&[q(3)]));
    }
}
