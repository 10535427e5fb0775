//! Plots of the tangent bundle under Hector's diffeology and the dvs diffeology.
//!
//! A candidate plot of `TX` is a base plot into `X` together with fibre
//! coordinates: chart coordinates over Euclidean-like factors, the lift
//! velocity over the irrational torus, and one coefficient per line over a
//! union of lines (the vector `sum a_i d_i`).

mod ops;

use serde::Serialize;

use crate::algebra::{Poly, QuadNumber};
use crate::error::{Error, Result};
use crate::space::{plot_check, Family, MembershipReason, MembershipWitness, PolyPlot, Space, Verdict};

pub use ops::{
    check_fibrewise_ops, fine_check, gamma_finite_discrete, group_trivialization,
    vandermonde_certificate, FineVerdict, GammaCertificate, OpVerdict, Operation,
    SmoothnessReport, TrivializationReport, VandermondeCertificate,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BundlePlotCandidate {
    pub src_dim: usize,
    pub base: PolyPlot,
    pub fibre: Vec<Poly>,
}

impl BundlePlotCandidate {
    pub fn new(base: PolyPlot, fibre: Vec<Poly>) -> Self {
        Self {
            src_dim: base.src_dim,
            base,
            fibre,
        }
    }

    pub fn zero_section(base: PolyPlot, fibre_dim: usize) -> Self {
        let src = base.src_dim;
        Self::new(base, vec![Poly::zero(src); fibre_dim])
    }

    pub fn is_constant(&self) -> bool {
        self.base.is_constant() && self.fibre.iter().all(Poly::is_constant)
    }

    /// Pointwise sum over a common base.
    pub fn sum(&self, other: &Self) -> Result<Self> {
        if self.base != other.base || self.fibre.len() != other.fibre.len() {
            return Err(Error::MalformedCandidate(
                "summands must share the base plot and fibre shape".into(),
            ));
        }
        Ok(Self::new(
            self.base.clone(),
            self.fibre.iter().zip(&other.fibre).map(|(a, b)| a + b).collect(),
        ))
    }

    /// `u |-> (base(u), r(u) v(u))` for a scalar polynomial `r`.
    pub fn scaled(&self, r: &Poly) -> Result<Self> {
        if r.nvars() != self.src_dim {
            return Err(Error::MalformedCandidate("scalar has the wrong source".into()));
        }
        Ok(Self::new(
            self.base.clone(),
            self.fibre.iter().map(|v| v * r).collect(),
        ))
    }

    /// `(s, u) |-> (base(u), s v(u))`, the scalar multiplication map applied to
    /// the plot `(s, u) |-> (s, self(u))` of `R x TX`; `s` is the last variable.
    pub fn scalar_sweep(&self) -> Self {
        let n = self.src_dim + 1;
        let s = Poly::var(n, self.src_dim);
        let lift = |p: &Poly| p.embed(n, 0);
        let base = PolyPlot {
            src_dim: n,
            components: self.base.components.iter().map(lift).collect(),
            branch: self.base.branch.clone(),
        };
        Self::new(base, self.fibre.iter().map(|v| &lift(v) * &s).collect())
    }

    /// The restriction to factor `i` of a product.
    pub fn factor(&self, space: &Space, i: usize) -> Result<Self> {
        let dims = space
            .factors()
            .iter()
            .map(|f| fibre_dim(f))
            .collect::<Result<Vec<_>>>()?;
        let start: usize = dims[..i].iter().sum();
        Ok(Self::new(
            self.base.factor(space, i),
            self.fibre[start..start + dims[i]].to_vec(),
        ))
    }

    /// Evaluates the fibre at a source point.
    pub fn fibre_at(&self, u: &[QuadNumber]) -> Result<Vec<QuadNumber>> {
        self.fibre.iter().map(|p| p.eval(u)).collect()
    }
}

impl std::fmt::Display for BundlePlotCandidate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let v: Vec<String> = self.fibre.iter().map(|p| p.to_string()).collect();
        write!(f, "({}, ({}))", self.base, v.join(", "))
    }
}

/// Number of fibre coordinates of a family.
pub fn fibre_dim(space: &Space) -> Result<usize> {
    match space.family() {
        Family::Euclidean(n) | Family::FineVector(n) => Ok(*n),
        Family::WedgeOfLines(j) | Family::AxesSub(j) => Ok(*j),
        Family::LinesThroughOriginSub(d) => Ok(d.len()),
        Family::IrrationalTorus(_) => Ok(1),
        Family::Product(fs) => fs.iter().map(fibre_dim).sum(),
        _ => Err(Error::UnsupportedFamily(format!(
            "tangent bundle plots of {space} are not modelled"
        ))),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecompositionTerm {
    /// The scalar coefficient `r_i(u)`.
    pub coefficient: String,
    /// The Hector plot `u |-> (base(u), d_line)`.
    pub line: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum BundleReason {
    BaseNotAPlot { base: MembershipWitness },
    Constant,
    /// The candidate is `T(chart) ∘ (base, fibre)`.
    ChartLift,
    /// The candidate is `T(quotient map) ∘ (lift, fibre)`.
    QuotientLift,
    /// The candidate is `T(branch inclusion) ∘ (coordinate, coefficient)`.
    BranchLift { line: usize },
    /// The fibre leaves the tangent line at base points off the origin.
    FibreOffTangentLine { line: usize, stray: Vec<usize> },
    /// Over the origin, a nonconstant fibre spreads over several lines.
    SeveralLines { lines: Vec<usize> },
    /// A finite combination of branch plots over the same base.
    Decomposition { terms: Vec<DecompositionTerm> },
    Componentwise { factors: Vec<BundleWitness> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BundleWitness {
    pub verdict: Verdict,
    pub reason: BundleReason,
}

impl BundleWitness {
    fn member(reason: BundleReason) -> Self {
        Self {
            verdict: Verdict::Member,
            reason,
        }
    }

    fn nonmember(reason: BundleReason) -> Self {
        Self {
            verdict: Verdict::Nonmember,
            reason,
        }
    }

    pub fn is_member(&self) -> bool {
        self.verdict == Verdict::Member
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Diffeology {
    Hector,
    Dvs,
}

fn validate(space: &Space, c: &BundlePlotCandidate) -> Result<()> {
    let want = fibre_dim(space)?;
    if c.fibre.len() != want {
        return Err(Error::MalformedCandidate(format!(
            "{} fibre coordinates for {space}, expected {want}",
            c.fibre.len()
        )));
    }
    if c.base.src_dim != c.src_dim || c.fibre.iter().any(|p| p.nvars() != c.src_dim) {
        return Err(Error::MalformedCandidate(
            "base and fibre must share the source dimension".into(),
        ));
    }
    if c.base.target_dim() != space.ambient_dim() {
        return Err(Error::MalformedCandidate(format!(
            "base has {} components, {space} has {} coordinates",
            c.base.target_dim(),
            space.ambient_dim()
        )));
    }
    Ok(())
}

pub fn hector_membership(space: &Space, c: &BundlePlotCandidate) -> Result<BundleWitness> {
    membership(space, c, Diffeology::Hector)
}

pub fn dvs_membership(space: &Space, c: &BundlePlotCandidate) -> Result<BundleWitness> {
    membership(space, c, Diffeology::Dvs)
}

pub fn membership(
    space: &Space,
    c: &BundlePlotCandidate,
    which: Diffeology,
) -> Result<BundleWitness> {
    validate(space, c)?;
    if let Family::Product(fs) = space.family() {
        let factors = (0..fs.len())
            .map(|i| membership(&fs[i], &c.factor(space, i)?, which))
            .collect::<Result<Vec<_>>>()?;
        let verdict = if factors.iter().all(BundleWitness::is_member) {
            Verdict::Member
        } else {
            Verdict::Nonmember
        };
        return Ok(BundleWitness {
            verdict,
            reason: BundleReason::Componentwise { factors },
        });
    }
    let base = plot_check(space, &c.base)?;
    if !base.is_member() {
        return Ok(BundleWitness::nonmember(BundleReason::BaseNotAPlot { base }));
    }
    match space.family() {
        Family::Euclidean(_) | Family::FineVector(_) => {
            Ok(BundleWitness::member(BundleReason::ChartLift))
        }
        Family::IrrationalTorus(_) => Ok(BundleWitness::member(BundleReason::QuotientLift)),
        _ => lines_membership(space, c, &base, which),
    }
}

fn lines_membership(
    space: &Space,
    c: &BundlePlotCandidate,
    base: &MembershipWitness,
    which: Diffeology,
) -> Result<BundleWitness> {
    let support: Vec<usize> = (0..c.fibre.len()).filter(|&i| !c.fibre[i].is_zero()).collect();
    let active = match &base.reason {
        MembershipReason::BranchCertificate { line, .. } => Some(*line),
        _ => space.line_through(&c.base.at_origin()),
    };
    if let Some(line) = active {
        let stray: Vec<usize> = support.iter().copied().filter(|&i| i != line).collect();
        return Ok(if stray.is_empty() {
            BundleWitness::member(BundleReason::BranchLift { line })
        } else {
            BundleWitness::nonmember(BundleReason::FibreOffTangentLine { line, stray })
        });
    }
    // The base is the constant origin, where every line contributes a direction.
    match (which, support.as_slice()) {
        (_, []) => Ok(BundleWitness::member(BundleReason::BranchLift { line: 0 })),
        (_, [line]) => Ok(BundleWitness::member(BundleReason::BranchLift { line: *line })),
        (Diffeology::Hector, _) if c.is_constant() => {
            Ok(BundleWitness::member(BundleReason::Constant))
        }
        (Diffeology::Hector, lines) => Ok(BundleWitness::nonmember(BundleReason::SeveralLines {
            lines: lines.to_vec(),
        })),
        (Diffeology::Dvs, lines) => Ok(BundleWitness::member(BundleReason::Decomposition {
            terms: lines
                .iter()
                .map(|&line| DecompositionTerm {
                    coefficient: c.fibre[line].to_string(),
                    line,
                })
                .collect(),
        })),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Poly {
        Poly::var(1, 0)
    }

    fn origin_plot(n: usize) -> PolyPlot {
        PolyPlot::constant(1, &vec![QuadNumber::zero(); n])
    }

    #[test]
    fn wedge_examples() {
        let w = Space::wedge(2).unwrap();
        let f = BundlePlotCandidate::new(origin_plot(2), vec![x(), Poly::zero(1)]);
        let h = BundlePlotCandidate::new(origin_plot(2), vec![x(), x()]);
        assert!(hector_membership(&w, &f).unwrap().is_member());
        assert!(!hector_membership(&w, &h).unwrap().is_member());
        let d = dvs_membership(&w, &h).unwrap();
        assert!(d.is_member());
        assert!(matches!(d.reason, BundleReason::Decomposition { ref terms } if terms.len() == 2));
        let along = PolyPlot::curve(vec![x(), Poly::zero(1)]).unwrap();
        let off = BundlePlotCandidate::new(along, vec![Poly::one(1), x()]);
        assert!(!dvs_membership(&w, &off).unwrap().is_member());
        let constant = BundlePlotCandidate::new(
            origin_plot(2),
            vec![Poly::one(1), Poly::one(1)],
        );
        assert!(hector_membership(&w, &constant).unwrap().is_member());
        assert!(!hector_membership(&w, &constant.scalar_sweep()).unwrap().is_member());
    }

    #[test]
    fn euclidean_candidates_are_members() {
        let e = Space::euclidean(2).unwrap();
        let base = PolyPlot::curve(vec![x().pow(3), &x() + &Poly::one(1)]).unwrap();
        let c = BundlePlotCandidate::new(base, vec![x().pow(2), Poly::one(1)]);
        assert!(hector_membership(&e, &c).unwrap().is_member());
        assert!(dvs_membership(&e, &c).unwrap().is_member());
    }

    #[test]
    fn malformed_candidates_are_rejected() {
        let w = Space::wedge(2).unwrap();
        let c = BundlePlotCandidate::new(origin_plot(2), vec![x()]);
        assert!(matches!(hector_membership(&w, &c), Err(Error::MalformedCandidate(_))));
        let h = Space::half_line();
        let c = BundlePlotCandidate::new(origin_plot(1), vec![x()]);
        assert!(matches!(hector_membership(&h, &c), Err(Error::UnsupportedFamily(_))));
    }
}
