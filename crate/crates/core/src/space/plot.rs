//! Polynomial plots and the per-family membership procedures.

use std::fmt;

use serde::Serialize;

use super::{Family, PointSet, Space};
use crate::algebra::{Poly, QuadNumber};
use crate::error::{Error, Result};

/// Which branch of the target a plot runs along.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Branch {
    /// Line `i` of a union-of-lines family.
    Line(usize),
    /// Per-factor tags for a plot into a product.
    Factors(Vec<Option<Branch>>),
}

/// A polynomial map `R^src_dim -> ambient coordinates of the target`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PolyPlot {
    pub src_dim: usize,
    pub components: Vec<Poly>,
    pub branch: Option<Branch>,
}

impl PolyPlot {
    pub fn new(src_dim: usize, components: Vec<Poly>) -> Result<Self> {
        if let Some(p) = components.iter().find(|p| p.nvars() != src_dim) {
            return Err(Error::ShapeMismatch(format!(
                "plot component in {} variables for a source of dimension {src_dim}",
                p.nvars()
            )));
        }
        Ok(Self {
            src_dim,
            components,
            branch: None,
        })
    }

    pub fn with_branch(mut self, branch: Branch) -> Self {
        self.branch = Some(branch);
        self
    }

    pub fn constant(src_dim: usize, point: &[QuadNumber]) -> Self {
        Self {
            src_dim,
            components: point.iter().map(|x| Poly::constant(src_dim, x.clone())).collect(),
            branch: None,
        }
    }

    /// A curve `t |-> point + t * v` plus higher terms given as polynomials in `t`.
    pub fn curve(components: Vec<Poly>) -> Result<Self> {
        Self::new(1, components)
    }

    pub fn target_dim(&self) -> usize {
        self.components.len()
    }

    pub fn is_constant(&self) -> bool {
        self.components.iter().all(Poly::is_constant)
    }

    pub fn at_origin(&self) -> Vec<QuadNumber> {
        self.components.iter().map(Poly::constant_term).collect()
    }

    pub fn eval(&self, u: &[QuadNumber]) -> Result<Vec<QuadNumber>> {
        self.components.iter().map(|p| p.eval(u)).collect()
    }

    /// `self ∘ f` for a polynomial map `f` given by its components.
    pub fn precompose(&self, f: &[Poly]) -> Result<PolyPlot> {
        let src = f.first().map(Poly::nvars).unwrap_or(0);
        Ok(PolyPlot {
            src_dim: src,
            components: self
                .components
                .iter()
                .map(|p| p.compose(f))
                .collect::<Result<_>>()?,
            branch: self.branch.clone(),
        })
    }

    /// The restriction to factor `i` of a product target.
    pub fn factor(&self, space: &Space, i: usize) -> PolyPlot {
        let offs = space.factor_offsets();
        let dim = space.factors()[i].ambient_dim();
        let branch = match &self.branch {
            Some(Branch::Factors(tags)) => tags.get(i).cloned().flatten(),
            _ => None,
        };
        PolyPlot {
            src_dim: self.src_dim,
            components: self.components[offs[i]..offs[i] + dim].to_vec(),
            branch,
        }
    }

    /// Concatenates plots into the factors of a product.
    pub fn pair(parts: &[PolyPlot]) -> Result<PolyPlot> {
        let src = parts.first().map(|p| p.src_dim).unwrap_or(0);
        if parts.iter().any(|p| p.src_dim != src) {
            return Err(Error::ShapeMismatch("factor plots have different sources".into()));
        }
        let tags: Vec<Option<Branch>> = parts.iter().map(|p| p.branch.clone()).collect();
        Ok(PolyPlot {
            src_dim: src,
            components: parts.iter().flat_map(|p| p.components.clone()).collect(),
            branch: tags.iter().any(Option::is_some).then_some(Branch::Factors(tags)),
        })
    }
}

impl fmt::Display for PolyPlot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.components.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", parts.join(", "))?;
        if let Some(b) = &self.branch {
            write!(f, " on {b:?}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for PolyPlot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PolyPlot[{}]{self}", self.src_dim)
    }
}

/// Extra evidence a caller may supply when the family rule alone cannot decide.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PlotCertificate {
    /// The half-line component equals the sum of squares of these polynomials.
    SumOfSquares(Vec<Poly>),
    /// The half-line component equals `sum w_i * q_i^2` for pairs `(w_i, q_i)`, where
    /// each weight is itself a half-line plot decided without a certificate.
    WeightedSquares(Vec<(Poly, Poly)>),
    /// The plot equals `outer ∘ inner` with `inner: R^src -> R^k`.
    Factorization { inner: Vec<Poly>, outer: Vec<Poly> },
    /// Per-factor certificates for a product target.
    Factors(Vec<Option<PlotCertificate>>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Member,
    Nonmember,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum MembershipReason {
    /// Constant maps into the space are always plots.
    Constant,
    /// The family admits every polynomial map into its ambient coordinates.
    FamilyRule { rule: String },
    /// The plot runs along a single line of a union of lines.
    BranchCertificate { line: usize, inferred: bool },
    /// Plots into quotients are presented by lifts.
    Lift,
    /// The half-line germ at 0 is nonnegative: positive value, or lowest term of
    /// even degree with positive coefficient.
    GermNonnegative { lowest_degree: u32 },
    /// The half-line component is a checked sum of squares.
    SumOfSquares { terms: usize },
    /// The plot factors through `R^k` by a checked polynomial factorization.
    Factorization { through: usize, automatic: bool },
    /// A polynomial identity the family requires fails.
    IdentityViolated { detail: String },
    Componentwise { factors: Vec<MembershipWitness> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MembershipWitness {
    pub verdict: Verdict,
    pub reason: MembershipReason,
}

impl MembershipWitness {
    fn member(reason: MembershipReason) -> Self {
        Self {
            verdict: Verdict::Member,
            reason,
        }
    }

    fn violated(detail: impl Into<String>) -> Self {
        Self {
            verdict: Verdict::Nonmember,
            reason: MembershipReason::IdentityViolated {
                detail: detail.into(),
            },
        }
    }

    pub fn is_member(&self) -> bool {
        self.verdict == Verdict::Member
    }
}

pub fn plot_check(space: &Space, p: &PolyPlot) -> Result<MembershipWitness> {
    plot_check_with(space, p, None)
}

/// Decides whether `p` is a plot of `space`, using `cert` where the family rule
/// needs outside evidence. Member verdicts are re-validated before returning.
pub fn plot_check_with(
    space: &Space,
    p: &PolyPlot,
    cert: Option<&PlotCertificate>,
) -> Result<MembershipWitness> {
    if p.target_dim() != space.ambient_dim() {
        return Err(Error::ShapeMismatch(format!(
            "plot has {} components but {space} has {} coordinates",
            p.target_dim(),
            space.ambient_dim()
        )));
    }
    if let Some(bad) = p.components.iter().find(|c| c.nvars() != p.src_dim) {
        return Err(Error::ShapeMismatch(format!(
            "component in {} variables on a source of dimension {}",
            bad.nvars(),
            p.src_dim
        )));
    }
    if let Family::Product(factors) = space.family() {
        let certs: Vec<Option<&PlotCertificate>> = match cert {
            Some(PlotCertificate::Factors(cs)) => cs.iter().map(Option::as_ref).collect(),
            _ => vec![None; factors.len()],
        };
        let mut witnesses = Vec::new();
        for (i, f) in factors.iter().enumerate() {
            witnesses.push(plot_check_with(f, &p.factor(space, i), certs.get(i).copied().flatten())?);
        }
        let verdict = if witnesses.iter().all(MembershipWitness::is_member) {
            Verdict::Member
        } else {
            Verdict::Nonmember
        };
        return Ok(MembershipWitness {
            verdict,
            reason: MembershipReason::Componentwise { factors: witnesses },
        });
    }
    if p.is_constant() {
        let value = p.at_origin();
        return Ok(if space.contains_point(&value) {
            MembershipWitness::member(MembershipReason::Constant)
        } else {
            MembershipWitness::violated(format!(
                "constant value {} is not a point of {space}",
                super::format_point(&value)
            ))
        });
    }
    let rule = |s: &str| Ok(MembershipWitness::member(MembershipReason::FamilyRule { rule: s.into() }));
    match space.family() {
        Family::Euclidean(_) => rule("every smooth map into a manifold is a plot"),
        Family::FineVector(_) => rule("polynomial maps factor through the finite-dimensional space itself"),
        Family::Indiscrete(PointSet::Real(_)) => rule("every map is a plot"),
        Family::ContinuousLine => rule("polynomial maps are continuous"),
        Family::Discrete(_) => Ok(MembershipWitness::violated("discrete plots are locally constant")),
        Family::Indiscrete(PointSet::Finite(_)) => Ok(MembershipWitness::violated(
            "a nonconstant polynomial does not land in a finite set",
        )),
        Family::OrbitQuotient(_) | Family::IrrationalTorus(_) => {
            Ok(MembershipWitness::member(MembershipReason::Lift))
        }
        Family::WedgeOfLines(_) | Family::AxesSub(_) | Family::LinesThroughOriginSub(_) => {
            lines_check(space, p)
        }
        Family::HalfLineSub => half_line_check(p, cert),
        Family::Generated { k, .. } => generated_check(*k, p, cert),
        Family::Product(_) => unreachable!("handled above"),
    }
}

fn lines_check(space: &Space, p: &PolyPlot) -> Result<MembershipWitness> {
    let count = space.line_count().expect("union-of-lines family");
    let runs_along = |i: usize| -> bool {
        match space.family() {
            Family::LinesThroughOriginSub(dirs) => {
                on_line_poly(&dirs[i], &p.components[0], &p.components[1])
            }
            _ => p
                .components
                .iter()
                .enumerate()
                .all(|(k, c)| k == i || c.is_zero()),
        }
    };
    if let Some(branch) = &p.branch {
        return Ok(match branch {
            Branch::Line(i) if *i < count && runs_along(*i) => {
                MembershipWitness::member(MembershipReason::BranchCertificate {
                    line: *i,
                    inferred: false,
                })
            }
            Branch::Line(i) if *i < count => {
                MembershipWitness::violated(format!("plot leaves its tagged line {i}"))
            }
            other => MembershipWitness::violated(format!("invalid branch tag {other:?}")),
        });
    }
    Ok(match (0..count).find(|&i| runs_along(i)) {
        Some(line) => MembershipWitness::member(MembershipReason::BranchCertificate {
            line,
            inferred: true,
        }),
        None => {
            let detail = match space.family() {
                Family::LinesThroughOriginSub(_) => {
                    "components are proportional to no direction".to_string()
                }
                _ => {
                    let nz: Vec<usize> = (0..p.target_dim())
                        .filter(|&i| !p.components[i].is_zero())
                        .collect();
                    format!(
                        "components {} and {} have a nonzero product",
                        nz[0], nz[1]
                    )
                }
            };
            MembershipWitness::violated(detail)
        }
    })
}

fn on_line_poly(d: &[QuadNumber; 2], x: &Poly, y: &Poly) -> bool {
    (&y.scale(&d[0]) - &x.scale(&d[1])).is_zero()
}

/// Sign of the germ at 0 of a univariate polynomial vanishing at 0:
/// `Some(degree)` when locally nonnegative.
fn univariate_germ_nonnegative(p: &Poly) -> Option<u32> {
    let lowest = p.order()?;
    let c = p.homogeneous_part(lowest).coefficients().next()?.clone();
    (lowest % 2 == 0 && c.signum() > 0).then_some(lowest)
}

fn half_line_check(p: &PolyPlot, cert: Option<&PlotCertificate>) -> Result<MembershipWitness> {
    let f = &p.components[0];
    match f.constant_term().signum() {
        1 => {
            return Ok(MembershipWitness::member(MembershipReason::GermNonnegative {
                lowest_degree: 0,
            }))
        }
        -1 => return Ok(MembershipWitness::violated("negative value at 0")),
        _ => {}
    }
    let weighted: Option<Vec<(Poly, Poly)>> = match cert {
        Some(PlotCertificate::SumOfSquares(qs)) => Some(
            qs.iter()
                .map(|q| (Poly::one(p.src_dim), q.clone()))
                .collect(),
        ),
        Some(PlotCertificate::WeightedSquares(pairs)) => Some(pairs.clone()),
        _ => None,
    };
    if let Some(pairs) = weighted {
        let mut sum = Poly::zero(p.src_dim);
        for (w, q) in &pairs {
            let weight = PolyPlot::new(p.src_dim, vec![w.clone()])?;
            if !half_line_check(&weight, None)?.is_member() {
                return Err(Error::UndecidableWithoutCertificate(format!(
                    "certificate weight {w} is not a nonnegative germ"
                )));
            }
            sum = sum.checked_add(&w.checked_mul(&q.checked_mul(q)?)?)?;
        }
        if &sum == f {
            return Ok(MembershipWitness::member(MembershipReason::SumOfSquares {
                terms: pairs.len(),
            }));
        }
        return Err(Error::UndecidableWithoutCertificate(
            "supplied sum of squares does not equal the plot".into(),
        ));
    }
    let used = f.variables_used();
    if used.len() == 1 {
        let v = used[0];
        let restricted = restrict_to_line(f, &crate::algebra::linalg::unit(p.src_dim, v))?;
        return Ok(match univariate_germ_nonnegative(&restricted) {
            Some(d) => MembershipWitness::member(MembershipReason::GermNonnegative { lowest_degree: d }),
            None => MembershipWitness::violated("germ takes negative values next to 0"),
        });
    }
    // Several variables: look for a line through 0 along which the germ goes negative.
    let n = p.src_dim;
    let mut directions: Vec<Vec<QuadNumber>> =
        (0..n).map(|i| crate::algebra::linalg::unit(n, i)).collect();
    directions.push(vec![QuadNumber::one(); n]);
    for i in 0..n {
        for k in (i + 1)..n {
            let mut d = vec![QuadNumber::zero(); n];
            d[i] = QuadNumber::one();
            d[k] = QuadNumber::from_int(-1);
            directions.push(d);
        }
    }
    for d in &directions {
        let r = restrict_to_line(f, d)?;
        if !r.is_zero() && univariate_germ_nonnegative(&r).is_none() {
            return Ok(MembershipWitness::violated(format!(
                "germ goes negative along direction {}",
                super::format_point(d)
            )));
        }
    }
    Err(Error::UndecidableWithoutCertificate(
        "nonnegativity of a multivariable half-line plot needs a sum-of-squares certificate".into(),
    ))
}

fn restrict_to_line(f: &Poly, d: &[QuadNumber]) -> Result<Poly> {
    let t = Poly::var(1, 0);
    let inner: Vec<Poly> = d.iter().map(|c| t.scale(c)).collect();
    f.compose(&inner)
}

fn generated_check(k: usize, p: &PolyPlot, cert: Option<&PlotCertificate>) -> Result<MembershipWitness> {
    if p.src_dim <= k {
        return Ok(MembershipWitness::member(MembershipReason::FamilyRule {
            rule: format!("maps out of R^{} are generating plots", p.src_dim),
        }));
    }
    let used: std::collections::BTreeSet<usize> =
        p.components.iter().flat_map(Poly::variables_used).collect();
    if used.len() <= k {
        return Ok(MembershipWitness::member(MembershipReason::Factorization {
            through: used.len(),
            automatic: true,
        }));
    }
    if let Some(witness_minor) = nonzero_minor(p, k + 1) {
        return Ok(MembershipWitness::violated(format!(
            "Jacobian has rank above {k}: minor {witness_minor} is not identically zero"
        )));
    }
    match cert {
        Some(PlotCertificate::Factorization { inner, outer }) => {
            let valid = inner.len() <= k
                && inner.iter().all(|q| q.nvars() == p.src_dim)
                && outer.len() == p.target_dim()
                && outer.iter().all(|q| q.nvars() == inner.len())
                && outer
                    .iter()
                    .zip(&p.components)
                    .all(|(o, c)| o.compose(inner).map(|x| &x == c).unwrap_or(false));
            if valid {
                Ok(MembershipWitness::member(MembershipReason::Factorization {
                    through: inner.len(),
                    automatic: false,
                }))
            } else {
                Err(Error::UndecidableWithoutCertificate(
                    "supplied factorization does not reproduce the plot".into(),
                ))
            }
        }
        _ => Err(Error::UndecidableWithoutCertificate(format!(
            "plot out of R^{} needs an explicit factorization through R^{k}",
            p.src_dim
        ))),
    }
}

/// A `size x size` minor of the Jacobian that is a nonzero polynomial, if any.
fn nonzero_minor(p: &PolyPlot, size: usize) -> Option<String> {
    let jac: Vec<Vec<Poly>> = p
        .components
        .iter()
        .map(|c| (0..p.src_dim).map(|j| c.derivative(j)).collect())
        .collect();
    if size > jac.len() || size > p.src_dim {
        return None;
    }
    let rows = combinations(jac.len(), size);
    let cols = combinations(p.src_dim, size);
    for r in &rows {
        for c in &cols {
            let m: Vec<Vec<Poly>> = r
                .iter()
                .map(|&i| c.iter().map(|&j| jac[i][j].clone()).collect())
                .collect();
            if !det(&m).is_zero() {
                return Some(format!("rows {r:?} cols {c:?}"));
            }
        }
    }
    None
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if k > n {
        return vec![];
    }
    let mut out = Vec::new();
    for mut rest in combinations(n - 1, k - 1) {
        rest.push(n - 1);
        out.push(rest);
    }
    out.extend(combinations(n - 1, k));
    out
}

/// Determinant by cofactor expansion; the matrices here are at most 4x4.
fn det(m: &[Vec<Poly>]) -> Poly {
    let n = m.len();
    let nv = m[0][0].nvars();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = Poly::zero(nv);
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<Poly>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(c, _)| *c != j)
                    .map(|(_, x)| x.clone())
                    .collect()
            })
            .collect();
        let term = &m[0][j] * &det(&minor);
        acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}

/// Whether two plots define the same map into `space`. Quotient families compare
/// through their lifts: torus lifts may differ by a constant in `Z + theta Z`,
/// orbit-space lifts by a pointwise orthogonal transformation (equal squared norms).
pub fn same_plot(space: &Space, a: &PolyPlot, b: &PolyPlot) -> Result<bool> {
    if a.target_dim() != space.ambient_dim() || b.target_dim() != space.ambient_dim() {
        return Err(Error::ShapeMismatch("plot does not match the space".into()));
    }
    if a.src_dim != b.src_dim {
        return Ok(false);
    }
    Ok(match space.family() {
        Family::IrrationalTorus(theta) => {
            let diff = &a.components[0] - &b.components[0];
            diff.is_constant() && diff.constant_term().in_lattice(theta)
        }
        Family::OrbitQuotient(_) => {
            let norm = |p: &PolyPlot| {
                p.components
                    .iter()
                    .fold(Poly::zero(p.src_dim), |acc, c| &acc + &(c * c))
            };
            norm(a) == norm(b)
        }
        Family::Product(fs) => {
            for (i, f) in fs.iter().enumerate() {
                if !same_plot(f, &a.factor(space, i), &b.factor(space, i))? {
                    return Ok(false);
                }
            }
            true
        }
        _ => a.components == b.components,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t() -> Poly {
        Poly::var(1, 0)
    }

    fn zero1() -> Poly {
        Poly::zero(1)
    }

    #[test]
    fn axes_membership() {
        let axes = Space::axes_sub(2).unwrap();
        let bad = PolyPlot::curve(vec![t(), t().pow(2)]).unwrap();
        assert!(!plot_check(&axes, &bad).unwrap().is_member());
        let good = PolyPlot::curve(vec![zero1(), t().pow(3)]).unwrap();
        assert!(plot_check(&axes, &good).unwrap().is_member());
    }

    #[test]
    fn wedge_diagonal_is_not_a_plot() {
        let wedge = Space::wedge(2).unwrap();
        let diag = PolyPlot::curve(vec![t(), t()]).unwrap();
        assert!(!plot_check(&wedge, &diag).unwrap().is_member());
        let tagged = PolyPlot::curve(vec![t(), zero1()]).unwrap().with_branch(Branch::Line(0));
        assert!(plot_check(&wedge, &tagged).unwrap().is_member());
        let mis = PolyPlot::curve(vec![t(), zero1()]).unwrap().with_branch(Branch::Line(1));
        assert!(!plot_check(&wedge, &mis).unwrap().is_member());
    }

    #[test]
    fn half_line_germs() {
        let h = Space::half_line();
        let sq = PolyPlot::curve(vec![t().pow(2)]).unwrap();
        assert!(plot_check(&h, &sq).unwrap().is_member());
        let cube = PolyPlot::curve(vec![t().pow(3)]).unwrap();
        assert!(!plot_check(&h, &cube).unwrap().is_member());
        let x = Poly::var(2, 0);
        let y = Poly::var(2, 1);
        let two = PolyPlot::new(2, vec![&(&x * &x) + &(&y * &y)]).unwrap();
        assert!(matches!(
            plot_check(&h, &two),
            Err(Error::UndecidableWithoutCertificate(_))
        ));
        let cert = PlotCertificate::SumOfSquares(vec![x.clone(), y.clone()]);
        assert!(plot_check_with(&h, &two, Some(&cert)).unwrap().is_member());
        let saddle = PolyPlot::new(2, vec![&x * &y]).unwrap();
        assert!(!plot_check(&h, &saddle).unwrap().is_member());
    }

    #[test]
    fn generated_rules() {
        let wire = Space::generated(2, 1).unwrap();
        let x = Poly::var(2, 0);
        let y = Poly::var(2, 1);
        let id = PolyPlot::new(2, vec![x.clone(), y.clone()]).unwrap();
        assert!(!plot_check(&wire, &id).unwrap().is_member());
        let s = &x + &y;
        let along = PolyPlot::new(2, vec![s.clone(), s.pow(2)]).unwrap();
        assert!(matches!(
            plot_check(&wire, &along),
            Err(Error::UndecidableWithoutCertificate(_))
        ));
        let cert = PlotCertificate::Factorization {
            inner: vec![s.clone()],
            outer: vec![t(), t().pow(2)],
        };
        assert!(plot_check_with(&wire, &along, Some(&cert)).unwrap().is_member());
    }

    #[test]
    fn product_componentwise() {
        let sp = Space::product(vec![Space::half_line(), Space::euclidean(1).unwrap()]).unwrap();
        let p = PolyPlot::curve(vec![t().pow(2), t()]).unwrap();
        assert!(plot_check(&sp, &p).unwrap().is_member());
    }

    #[test]
    fn torus_lifts_modulo_lattice() {
        let theta = QuadNumber::sqrt(2);
        let torus = Space::irrational_torus(theta.clone()).unwrap();
        let a = PolyPlot::curve(vec![t()]).unwrap();
        let shift = Poly::constant(1, &QuadNumber::from_int(3) + &theta);
        let b = PolyPlot::curve(vec![&t() + &shift]).unwrap();
        assert!(same_plot(&torus, &a, &b).unwrap());
        let c = PolyPlot::curve(vec![&t() + &Poly::constant(1, QuadNumber::from_frac(1, 2).unwrap())]).unwrap();
        assert!(!same_plot(&torus, &a, &c).unwrap());
    }
}
