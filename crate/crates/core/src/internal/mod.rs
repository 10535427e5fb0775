//! Internal tangent spaces `T_x(X)`.
//!
//! The space is presented as `F/R`: `F` is the free vector space on a list of
//! curves through `x`, and `R` is spanned by basic relations, each produced from
//! an explicit plot whose side conditions are re-checked when the relation is
//! recorded. Generating curves come first in the list, so the coset basis is
//! drawn from them whenever possible.

mod pushforward;

use std::fmt;

use serde::Serialize;

pub use pushforward::{
    derivative_claim_check, product_tangent_iso, pushforward, pushforward_with, ClaimReport,
    ProductIso, Pushforward, SmoothMap, three_lines_target,
};

use crate::algebra::linalg::{to_sparse, unit, Classifier};
use crate::algebra::{Matrix, Poly, QuadNumber};
use crate::error::{Error, Result};
use crate::space::{
    plot_check, plot_check_with, same_plot, Branch, Family, PlotCertificate, PointSet, PolyPlot,
    Space,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CurveRole {
    Generating,
    Supplied,
    Auxiliary,
}

/// A curve `R -> X` through the base point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveGerm {
    pub label: String,
    pub plot: PolyPlot,
    pub role: CurveRole,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RelationKind {
    /// The curve factors through another plot; its class is the pushforward of the
    /// corresponding Euclidean tangent vector.
    Factorization,
    /// An even curve equals its own reversal, so its class is its own negative.
    EvenCurve,
    /// A 2-plot `q`: the diagonal class is the sum of the two axis classes.
    DiagonalSplit,
    /// A factorization whose Euclidean tangent vector vanishes.
    FlatCurve,
    /// Every curve factors through `t^3`, so every class is zero.
    ReparametrizationAbsorption,
    /// In a quotient, the curve and its reversal are the same plot.
    NegationSymmetry,
}

/// A relation `sum coeff * [curve] = 0`, indices referring to the report's curve list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasicRelation {
    pub kind: RelationKind,
    pub terms: Vec<(usize, QuadNumber)>,
    pub note: String,
}

/// Caller-supplied data for the families that need it.
#[derive(Clone, Debug, Default)]
pub struct CurveOptions {
    /// Slopes `a` of the lines `x + t(1, a, 0, ...)` for wire spaces.
    pub slopes: Vec<QuadNumber>,
    /// Extra member curves to classify along with the generators.
    pub extra_curves: Vec<(String, PolyPlot)>,
}

impl CurveOptions {
    pub fn with_slopes(slopes: Vec<QuadNumber>) -> Self {
        Self {
            slopes,
            extra_curves: Vec::new(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct TangentSpaceReport {
    pub space: Space,
    pub point: Vec<QuadNumber>,
    pub dim: usize,
    pub basis: Vec<String>,
    pub basis_curves: Vec<usize>,
    pub curves: Vec<CurveGerm>,
    pub relations: Vec<BasicRelation>,
    /// `dim x curves.len()`: column `i` holds the coordinates of curve `i`.
    pub classify: Matrix,
    /// Indices of the caller's extra curves, in the order supplied.
    pub supplied: Vec<usize>,
}

impl TangentSpaceReport {
    pub fn coordinates(&self, curve: usize) -> Vec<QuadNumber> {
        self.classify.column(curve)
    }

    pub fn generating(&self) -> impl Iterator<Item = &CurveGerm> {
        self.curves.iter().filter(|c| c.role == CurveRole::Generating)
    }

    /// Image of a relation's coefficient vector under `classify`; zero for every
    /// recorded relation.
    pub fn relation_image(&self, rel: &BasicRelation) -> Vec<QuadNumber> {
        let mut v = vec![QuadNumber::zero(); self.curves.len()];
        for (i, c) in &rel.terms {
            v[*i] = &v[*i] + c;
        }
        self.classify.apply(&v).expect("relation vector has one entry per curve")
    }
}

impl fmt::Display for TangentSpaceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "T_x {} at {}: dim {} basis [{}]",
            self.space,
            crate::space::format_point(&self.point),
            self.dim,
            self.basis.join(", ")
        )
    }
}

pub fn internal_tangent(space: &Space, point: &[QuadNumber]) -> Result<TangentSpaceReport> {
    internal_tangent_with(space, point, &CurveOptions::default())
}

pub fn internal_tangent_with(
    space: &Space,
    point: &[QuadNumber],
    options: &CurveOptions,
) -> Result<TangentSpaceReport> {
    space.check_point(point)?;
    let mut h = Harvester::new(space, point);
    for c in generating_curves_with(space, point, options)? {
        h.push(c.label, c.plot, CurveRole::Generating)?;
    }
    let mut supplied = Vec::new();
    for (label, plot) in &options.extra_curves {
        supplied.push(h.push(label.clone(), plot.clone(), CurveRole::Supplied)?);
    }
    h.harvest()?;
    let Harvester {
        curves, relations, ..
    } = h;
    let m = curves.len();
    let units: Vec<_> = (0..m).map(|i| to_sparse(&unit(m, i))).collect();
    let rels: Vec<_> = relations
        .iter()
        .map(|r| {
            let mut v = vec![QuadNumber::zero(); m];
            for (i, c) in &r.terms {
                v[*i] = &v[*i] + c;
            }
            to_sparse(&v)
        })
        .collect();
    let classifier = Classifier::build(&units, &rels)?;
    let dim = classifier.dim();
    let columns: Vec<Vec<QuadNumber>> = units
        .into_iter()
        .map(|u| classifier.classify(u).expect("units span F"))
        .collect();
    let basis_curves = classifier.coset_basis().to_vec();
    Ok(TangentSpaceReport {
        space: space.clone(),
        point: point.to_vec(),
        dim,
        basis: basis_curves.iter().map(|&i| curves[i].label.clone()).collect(),
        basis_curves,
        classify: Matrix::from_columns(dim, columns)?,
        curves,
        relations,
        supplied,
    })
}

/// Coordinates of `curve` in the basis of `T_x(X)`.
pub fn classify_curve(
    space: &Space,
    point: &[QuadNumber],
    options: &CurveOptions,
    curve: &PolyPlot,
) -> Result<(TangentSpaceReport, Vec<QuadNumber>)> {
    let mut opts = options.clone();
    opts.extra_curves.push(("query".into(), curve.clone()));
    let report = internal_tangent_with(space, point, &opts)?;
    let idx = *report.supplied.last().expect("one supplied curve");
    let coords = report.coordinates(idx);
    Ok((report, coords))
}

pub fn generating_curves(space: &Space, point: &[QuadNumber]) -> Result<Vec<CurveGerm>> {
    generating_curves_with(space, point, &CurveOptions::default())
}

/// The finite generating set of curve classes at `point`.
pub fn generating_curves_with(
    space: &Space,
    point: &[QuadNumber],
    options: &CurveOptions,
) -> Result<Vec<CurveGerm>> {
    space.check_point(point)?;
    let mut out = Vec::new();
    let factors = space.factors();
    let points = space.split(point);
    let product = factors.len() > 1;
    for (j, (f, x)) in factors.iter().zip(points).enumerate() {
        for (label, plot) in factor_generators(f, x, options)? {
            let label = if product {
                format!("{}.{}", j + 1, label)
            } else {
                label
            };
            out.push(CurveGerm {
                label,
                plot: lift(space, point, j, &plot),
                role: CurveRole::Generating,
            });
        }
    }
    Ok(out)
}

fn t() -> Poly {
    Poly::var(1, 0)
}

/// The curve `x + t v`.
fn line_curve(x: &[QuadNumber], v: &[QuadNumber]) -> PolyPlot {
    let comps = x
        .iter()
        .zip(v)
        .map(|(a, b)| &Poly::constant(1, a.clone()) + &t().scale(b))
        .collect();
    PolyPlot::curve(comps).expect("one variable")
}

fn factor_generators(
    space: &Space,
    x: &[QuadNumber],
    options: &CurveOptions,
) -> Result<Vec<(String, PolyPlot)>> {
    let n = space.ambient_dim();
    let coords = |prefix: &str| -> Vec<(String, PolyPlot)> {
        (0..n)
            .map(|i| (format!("{prefix}{}", i + 1), line_curve(x, &unit(n, i))))
            .collect()
    };
    Ok(match space.family() {
        Family::Euclidean(_) | Family::FineVector(_) => coords("e"),
        Family::Generated { n, k } => {
            let mut out = Vec::new();
            if *k == 1 && *n >= 2 {
                for a in &options.slopes {
                    let mut v = unit(*n, 0);
                    v[1] = a.clone();
                    out.push((format!("slope({a})"), line_curve(x, &v)));
                }
            }
            out.extend(coords("e"));
            out
        }
        Family::WedgeOfLines(_) | Family::AxesSub(_) | Family::LinesThroughOriginSub(_) => {
            let name = if matches!(space.family(), Family::WedgeOfLines(_)) {
                "branch"
            } else {
                "line"
            };
            match space.line_through(x) {
                None => (0..space.line_count().expect("lines"))
                    .map(|i| {
                        let d = space.line_direction(i).expect("line exists");
                        let plot = line_curve(x, &d).with_branch(Branch::Line(i));
                        (format!("{name}{}", i + 1), plot)
                    })
                    .collect(),
                Some(i) => {
                    let d = space.line_direction(i).expect("line exists");
                    vec![(
                        format!("chart{}", i + 1),
                        line_curve(x, &d).with_branch(Branch::Line(i)),
                    )]
                }
            }
        }
        Family::HalfLineSub => {
            if x[0].is_zero() {
                vec![("t^2".into(), PolyPlot::curve(vec![t().pow(2)])?)]
            } else {
                vec![("chart".into(), line_curve(x, &[QuadNumber::one()]))]
            }
        }
        Family::OrbitQuotient(n) => {
            if space.is_singular_point(x) {
                vec![("[t*e1]".into(), line_curve(x, &unit(*n, 0)))]
            } else {
                vec![("[x(1+t)]".into(), line_curve(x, x))]
            }
        }
        Family::IrrationalTorus(_) => vec![("lift".into(), line_curve(x, &[QuadNumber::one()]))],
        Family::Discrete(_) | Family::Indiscrete(_) | Family::ContinuousLine => Vec::new(),
        Family::Product(_) => unreachable!("factors are never products"),
    })
}

/// Embeds a plot into factor `j` of `space`, holding the other factors at `point`.
fn lift(space: &Space, point: &[QuadNumber], j: usize, plot: &PolyPlot) -> PolyPlot {
    let factors = space.factors();
    if factors.len() == 1 {
        return plot.clone();
    }
    let points = space.split(point);
    let parts: Vec<PolyPlot> = (0..factors.len())
        .map(|k| {
            if k == j {
                plot.clone()
            } else {
                PolyPlot::constant(plot.src_dim, points[k])
            }
        })
        .collect();
    PolyPlot::pair(&parts).expect("parts share a source")
}

struct Harvester<'a> {
    space: &'a Space,
    point: Vec<QuadNumber>,
    curves: Vec<CurveGerm>,
    relations: Vec<BasicRelation>,
    aux: usize,
}

/// Where a family rule is being applied: factor `index` of the harvested space.
struct Ctx<'a> {
    space: &'a Space,
    point: &'a [QuadNumber],
    index: usize,
}

impl<'a> Harvester<'a> {
    fn new(space: &'a Space, point: &[QuadNumber]) -> Self {
        Self {
            space,
            point: point.to_vec(),
            curves: Vec::new(),
            relations: Vec::new(),
            aux: 0,
        }
    }

    /// Adds a curve after checking it is a plot through the base point; returns the
    /// index of an existing equal curve instead of duplicating it.
    fn push(&mut self, label: String, plot: PolyPlot, role: CurveRole) -> Result<usize> {
        if plot.src_dim != 1 {
            return Err(Error::UnsupportedCurve(format!(
                "{label} has a source of dimension {}",
                plot.src_dim
            )));
        }
        let verdict = plot_check(self.space, &plot);
        match verdict {
            Ok(w) if w.is_member() => {}
            Ok(_) | Err(Error::UndecidableWithoutCertificate(_)) => {
                return Err(Error::NotAMember(format!("{label} = {plot} is not a plot of {}", self.space)))
            }
            Err(e) => return Err(e),
        }
        let start = PolyPlot::constant(1, &plot.at_origin());
        let base = PolyPlot::constant(1, &self.point);
        if !same_plot(self.space, &start, &base)? {
            return Err(Error::NotAMember(format!(
                "{label} does not pass through {}",
                crate::space::format_point(&self.point)
            )));
        }
        for (i, c) in self.curves.iter().enumerate() {
            if same_plot(self.space, &c.plot, &plot)? {
                return Ok(i);
            }
        }
        self.curves.push(CurveGerm { label, plot, role });
        Ok(self.curves.len() - 1)
    }

    fn push_aux(&mut self, plot: PolyPlot) -> Result<usize> {
        self.aux += 1;
        let label = format!("aux{}", self.aux);
        self.push(label, plot, CurveRole::Auxiliary)
    }

    fn record(&mut self, kind: RelationKind, terms: Vec<(usize, QuadNumber)>, note: String) {
        let mut merged: Vec<(usize, QuadNumber)> = Vec::new();
        for (i, c) in terms {
            match merged.iter_mut().find(|(k, _)| *k == i) {
                Some(entry) => entry.1 = &entry.1 + &c,
                None => merged.push((i, c)),
            }
        }
        merged.retain(|(_, c)| !c.is_zero());
        if !merged.is_empty() {
            self.relations.push(BasicRelation {
                kind,
                terms: merged,
                note,
            });
        }
    }

    fn lift(&self, ctx: &Ctx, plot: &PolyPlot) -> PolyPlot {
        lift(self.space, &self.point, ctx.index, plot)
    }

    fn require_member(&self, plot: &PolyPlot, cert: Option<&PlotCertificate>) -> Result<()> {
        if plot_check_with(self.space, plot, cert)?.is_member() {
            Ok(())
        } else {
            Err(Error::NotAMember(format!("relation witness {plot} is not a plot")))
        }
    }

    /// `[c] = sum_j g_j'(0) [through ∘ (t e_j)]` for `c = through ∘ g`, `g(0) = 0`.
    fn factorization(&mut self, idx: usize, ctx: &Ctx, through: &PolyPlot, map: Vec<Poly>) -> Result<()> {
        let through = self.lift(ctx, through);
        self.require_member(&through, None)?;
        if map.iter().any(|g| !g.constant_term().is_zero()) {
            return Err(Error::UnsupportedCurve("factoring map must fix 0".into()));
        }
        let composite = through.precompose(&map)?;
        if !same_plot(self.space, &self.curves[idx].plot, &composite)? {
            return Err(Error::UnsupportedCurve(format!(
                "{} does not factor as claimed",
                self.curves[idx].label
            )));
        }
        let d = through.src_dim;
        let mut terms = vec![(idx, QuadNumber::one())];
        for (j, g) in map.iter().enumerate() {
            let v = g.linear_coeff(0);
            if v.is_zero() {
                continue;
            }
            let axis: Vec<Poly> = (0..d)
                .map(|k| if k == j { t() } else { Poly::zero(1) })
                .collect();
            let chart_curve = through.precompose(&axis)?;
            let k = self.push_aux(chart_curve)?;
            terms.push((k, -v));
        }
        let flat = terms.len() == 1;
        let kind = if flat && !self.curves[idx].plot.is_constant() {
            RelationKind::FlatCurve
        } else {
            RelationKind::Factorization
        };
        let note = if self.curves[idx].plot.is_constant() {
            "constant curve factors through a point".to_string()
        } else {
            format!("factors through {through}")
        };
        self.record(kind, terms, note);
        Ok(())
    }

    fn constant(&mut self, idx: usize) {
        self.record(
            RelationKind::Factorization,
            vec![(idx, QuadNumber::one())],
            "constant curve factors through a point".into(),
        );
    }

    /// `[q(t,t)] = [q(s,0)] + [q(0,t)]` for a 2-plot `q` in factor coordinates.
    fn diagonal_split(
        &mut self,
        idx: usize,
        ctx: &Ctx,
        q: &PolyPlot,
        cert: Option<PlotCertificate>,
    ) -> Result<(usize, usize)> {
        let q = self.lift(ctx, q);
        let cert = cert.map(|c| self.lift_certificate(ctx, c));
        self.require_member(&q, cert.as_ref())?;
        let diag = q.precompose(&[t(), t()])?;
        if !same_plot(self.space, &self.curves[idx].plot, &diag)? {
            return Err(Error::UnsupportedCurve("2-plot does not restrict to the curve".into()));
        }
        let a = self.push_aux(q.precompose(&[t(), Poly::zero(1)])?)?;
        let b = self.push_aux(q.precompose(&[Poly::zero(1), t()])?)?;
        let one = QuadNumber::one();
        self.record(
            RelationKind::DiagonalSplit,
            vec![(idx, one.clone()), (a, -&one), (b, -&one)],
            format!("2-plot {q}"),
        );
        Ok((a, b))
    }

    fn lift_certificate(&self, ctx: &Ctx, cert: PlotCertificate) -> PlotCertificate {
        let n = self.space.factors().len();
        if n == 1 {
            return cert;
        }
        let mut parts = vec![None; n];
        parts[ctx.index] = Some(cert);
        PlotCertificate::Factors(parts)
    }

    /// Records `2[c] = 0` when `c` and its reversal are the same plot.
    fn negation(&mut self, idx: usize, kind: RelationKind) -> Result<bool> {
        let c = &self.curves[idx].plot;
        let reversed = c.precompose(&[-&t()])?;
        if same_plot(self.space, c, &reversed)? {
            self.record(
                kind,
                vec![(idx, QuadNumber::from_int(2))],
                "curve equals its reversal".into(),
            );
            return Ok(true);
        }
        Ok(false)
    }

    fn harvest(&mut self) -> Result<()> {
        let mut i = 0;
        while i < self.curves.len() {
            self.relate(i)?;
            i += 1;
        }
        Ok(())
    }

    fn relate(&mut self, idx: usize) -> Result<()> {
        let space = self.space;
        let factors = space.factors();
        let plot = self.curves[idx].plot.clone();
        let point = self.point.clone();
        let points = space.split(&point);
        if factors.len() == 1 {
            let ctx = Ctx {
                space,
                point: &point,
                index: 0,
            };
            return self.relate_in(idx, &ctx, &plot);
        }
        let moving: Vec<usize> = (0..factors.len())
            .filter(|&j| !plot.factor(space, j).is_constant())
            .collect();
        match moving.as_slice() {
            [] => {
                self.constant(idx);
                Ok(())
            }
            [j] => {
                let ctx = Ctx {
                    space: factors[*j],
                    point: points[*j],
                    index: *j,
                };
                let fc = plot.factor(space, *j);
                self.relate_in(idx, &ctx, &fc)
            }
            [first, ..] => {
                let s = Poly::var(2, 0);
                let tt = Poly::var(2, 1);
                let parts: Vec<PolyPlot> = (0..factors.len())
                    .map(|k| {
                        let v = if k == *first { &s } else { &tt };
                        plot.factor(space, k).precompose(std::slice::from_ref(v))
                    })
                    .collect::<Result<_>>()?;
                let q = PolyPlot::pair(&parts)?;
                self.diagonal_split_product(idx, &q)
            }
        }
    }

    fn diagonal_split_product(&mut self, idx: usize, q: &PolyPlot) -> Result<()> {
        self.require_member(q, None)?;
        let diag = q.precompose(&[t(), t()])?;
        if !same_plot(self.space, &self.curves[idx].plot, &diag)? {
            return Err(Error::UnsupportedCurve("2-plot does not restrict to the curve".into()));
        }
        let a = self.push_aux(q.precompose(&[t(), Poly::zero(1)])?)?;
        let b = self.push_aux(q.precompose(&[Poly::zero(1), t()])?)?;
        let one = QuadNumber::one();
        self.record(
            RelationKind::DiagonalSplit,
            vec![(idx, one.clone()), (a, -&one), (b, -&one)],
            "product 2-plot separating the first moving factor".into(),
        );
        Ok(())
    }

    /// Applies the family rule of `ctx.space` to curve `idx`, whose factor part is `c`.
    fn relate_in(&mut self, idx: usize, ctx: &Ctx, c: &PolyPlot) -> Result<()> {
        if c.is_constant() {
            self.constant(idx);
            return Ok(());
        }
        let x = ctx.point;
        let n = ctx.space.ambient_dim();
        match ctx.space.family() {
            Family::Euclidean(_) | Family::FineVector(_) => {
                let through = chart(x, n);
                let map = shifted(c, x);
                self.factorization(idx, ctx, &through, map)
            }
            Family::Generated { k, .. } if *k >= 2 => self.relate_generated(idx, ctx, c),
            Family::Generated { .. } => self.relate_wire(idx, ctx, c),
            Family::WedgeOfLines(_) | Family::AxesSub(_) | Family::LinesThroughOriginSub(_) => {
                let line = match ctx.space.line_through(x) {
                    Some(i) => i,
                    None => (0..ctx.space.line_count().expect("lines"))
                        .find(|&i| {
                            let d = ctx.space.line_direction(i).expect("line");
                            ratio_along(c, x, &d).is_some()
                        })
                        .ok_or_else(|| Error::NotAMember(format!("{c} runs along no line")))?,
                };
                let d = ctx.space.line_direction(line).expect("line");
                let g = ratio_along(c, x, &d)
                    .ok_or_else(|| Error::NotAMember(format!("{c} leaves line {}", line + 1)))?;
                let through = line_curve(x, &d).with_branch(Branch::Line(line));
                self.factorization(idx, ctx, &through, vec![g])
            }
            Family::HalfLineSub => {
                if !x[0].is_zero() {
                    let through = chart(x, 1);
                    return self.factorization(idx, ctx, &through, shifted(c, x));
                }
                if self.negation(idx, RelationKind::EvenCurve)? {
                    return Ok(());
                }
                let p = &c.components[0];
                let r = p.div_var_power(0, 2).ok_or_else(|| {
                    Error::NotAMember(format!("{p} is not a nonnegative germ at 0"))
                })?;
                let s2 = Poly::var(2, 0);
                let t2 = Poly::var(2, 1);
                let r_s = r.compose(std::slice::from_ref(&s2))?;
                let q = PolyPlot::new(2, vec![&t2.pow(2) * &r_s])?;
                let cert = PlotCertificate::WeightedSquares(vec![(r_s, t2)]);
                self.diagonal_split(idx, ctx, &q, Some(cert))?;
                Ok(())
            }
            Family::OrbitQuotient(_) => {
                if self.negation(idx, RelationKind::NegationSymmetry)? {
                    return Ok(());
                }
                let basis = orthogonal_basis(x, n)?;
                let through = PolyPlot::new(
                    n,
                    (0..n)
                        .map(|i| {
                            basis.iter().enumerate().fold(
                                Poly::constant(n, x[i].clone()),
                                |acc, (j, u)| &acc + &Poly::var(n, j).scale(&u[i]),
                            )
                        })
                        .collect(),
                )?;
                if c.at_origin() != x {
                    return Err(Error::UnsupportedCurve(
                        "orbit-space curves must be lifted through the chosen representative".into(),
                    ));
                }
                let diff = shifted(c, x);
                let map = basis
                    .iter()
                    .map(|u| {
                        let norm: QuadNumber = u.iter().map(|a| a * a).sum();
                        let dot = diff
                            .iter()
                            .zip(u)
                            .fold(Poly::zero(1), |acc, (p, a)| &acc + &p.scale(a));
                        Ok(dot.scale(&norm.inv()?))
                    })
                    .collect::<Result<Vec<_>>>()?;
                self.factorization(idx, ctx, &through, map)
            }
            Family::IrrationalTorus(_) => {
                let through = chart(x, 1);
                let g = &c.components[0] - &Poly::constant(1, c.components[0].constant_term());
                self.factorization(idx, ctx, &through, vec![g])
            }
            Family::Indiscrete(PointSet::Real(_)) | Family::ContinuousLine => {
                self.record(
                    RelationKind::ReparametrizationAbsorption,
                    vec![(idx, QuadNumber::one())],
                    "curve factors through t^3".into(),
                );
                Ok(())
            }
            Family::Discrete(_) | Family::Indiscrete(PointSet::Finite(_)) => Err(Error::NotAMember(
                format!("{c} is not constant"),
            )),
            Family::Product(_) => unreachable!("factors are never products"),
        }
    }

    fn relate_generated(&mut self, idx: usize, ctx: &Ctx, c: &PolyPlot) -> Result<()> {
        let x = ctx.point;
        let n = x.len();
        let diff = shifted(c, x);
        let moving: Vec<usize> = (0..n).filter(|&i| !diff[i].is_zero()).collect();
        if let [i] = moving.as_slice() {
            let through = line_curve(x, &unit(n, *i));
            return self.factorization(idx, ctx, &through, vec![diff[*i].clone()]);
        }
        let v: Vec<QuadNumber> = diff.iter().map(|p| p.linear_coeff(0)).collect();
        let s2 = Poly::var(2, 0);
        let t2 = Poly::var(2, 1);
        let q = match v.iter().position(|a| !a.is_zero()) {
            None => (0..n)
                .map(|i| {
                    let h = diff[i].div_var_power(0, 2).expect("vanishing 1-jet");
                    let st = &s2 * &t2;
                    Ok(&Poly::constant(2, x[i].clone()) + &(&st * &h.compose(std::slice::from_ref(&t2))?))
                })
                .collect::<Result<Vec<_>>>()?,
            Some(i) => (0..n)
                .map(|k| {
                    let mut p = &Poly::constant(2, x[k].clone()) + &diff[k].compose(std::slice::from_ref(&t2))?;
                    if k == i {
                        p = &(&p + &s2.scale(&v[i])) - &t2.scale(&v[i]);
                    }
                    Ok(p)
                })
                .collect::<Result<Vec<_>>>()?,
        };
        let q = PolyPlot::new(2, q)?;
        self.diagonal_split(idx, ctx, &q, None)?;
        Ok(())
    }

    fn relate_wire(&mut self, idx: usize, ctx: &Ctx, c: &PolyPlot) -> Result<()> {
        let x = ctx.point;
        let diff = shifted(c, x);
        let lead = diff.iter().position(|p| !p.is_zero()).expect("nonconstant");
        let g = diff[lead].clone();
        let mut w = Vec::with_capacity(diff.len());
        for p in &diff {
            match proportional(p, &g) {
                Some(a) => w.push(a),
                None => {
                    return Err(Error::UnsupportedCurve(format!(
                        "{c}: only reparametrized lines are classified in the wire diffeology"
                    )))
                }
            }
        }
        let line = line_curve(x, &w);
        let lifted = self.lift(ctx, &line);
        self.push(format!("line{}", crate::space::format_point(&w)), lifted, CurveRole::Auxiliary)?;
        self.factorization(idx, ctx, &line, vec![g])
    }
}

/// `y |-> x + y` on `R^n`.
fn chart(x: &[QuadNumber], n: usize) -> PolyPlot {
    PolyPlot::new(
        n,
        (0..n)
            .map(|i| &Poly::constant(n, x[i].clone()) + &Poly::var(n, i))
            .collect(),
    )
    .expect("n variables")
}

fn shifted(c: &PolyPlot, x: &[QuadNumber]) -> Vec<Poly> {
    c.components
        .iter()
        .zip(x)
        .map(|(p, a)| p - &Poly::constant(1, a.clone()))
        .collect()
}

/// `a` with `p = a * g`, for a nonzero `g`.
fn proportional(p: &Poly, g: &Poly) -> Option<QuadNumber> {
    if p.is_zero() {
        return Some(QuadNumber::zero());
    }
    let (e, lead) = g.terms().iter().next()?;
    let a = p.coeff(e).checked_div(lead).ok()?;
    (&g.scale(&a) == p).then_some(a)
}

/// `g` with `c = x + g d`, if the curve runs along direction `d` from `x`.
fn ratio_along(c: &PolyPlot, x: &[QuadNumber], d: &[QuadNumber]) -> Option<Poly> {
    let diff = shifted(c, x);
    let m = d.iter().position(|a| !a.is_zero())?;
    let g = diff[m].scale(&d[m].inv().ok()?);
    diff.iter()
        .zip(d)
        .all(|(p, a)| *p == g.scale(a))
        .then_some(g)
}

/// `x` (or `e1` when `x = 0`) followed by an orthogonal basis of its complement.
fn orthogonal_basis(x: &[QuadNumber], n: usize) -> Result<Vec<Vec<QuadNumber>>> {
    let dot = |a: &[QuadNumber], b: &[QuadNumber]| -> QuadNumber {
        a.iter().zip(b).map(|(p, q)| p * q).sum()
    };
    let mut basis: Vec<Vec<QuadNumber>> = Vec::new();
    let mut candidates = Vec::new();
    if x.iter().any(|a| !a.is_zero()) {
        candidates.push(x.to_vec());
    }
    candidates.extend((0..n).map(|i| unit(n, i)));
    for mut v in candidates {
        for u in &basis {
            let coef = dot(&v, u).checked_div(&dot(u, u))?;
            for (a, b) in v.iter_mut().zip(u) {
                *a = &*a - &(&coef * b);
            }
        }
        if v.iter().any(|a| !a.is_zero()) {
            basis.push(v);
        }
        if basis.len() == n {
            break;
        }
    }
    Ok(basis)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> QuadNumber {
        QuadNumber::from_int(n)
    }

    fn origin(space: &Space) -> Vec<QuadNumber> {
        space.origin()
    }

    fn dim(space: &Space) -> usize {
        internal_tangent(space, &origin(space)).unwrap().dim
    }

    #[test]
    fn catalog_dimensions_at_origin() {
        assert_eq!(dim(&Space::euclidean(3).unwrap()), 3);
        assert_eq!(dim(&Space::wedge(2).unwrap()), 2);
        assert_eq!(dim(&Space::axes_sub(4).unwrap()), 4);
        assert_eq!(dim(&Space::half_line()), 0);
        assert_eq!(dim(&Space::orbit_quotient(3).unwrap()), 0);
        assert_eq!(dim(&Space::irrational_torus(QuadNumber::sqrt(2)).unwrap()), 1);
        assert_eq!(dim(&Space::fine_vector(5).unwrap()), 5);
        assert_eq!(dim(&Space::generated(3, 2).unwrap()), 3);
        assert_eq!(dim(&Space::new(Family::ContinuousLine).unwrap()), 0);
    }

    #[test]
    fn off_origin_points_are_one_dimensional() {
        let w = Space::wedge(3).unwrap();
        assert_eq!(internal_tangent(&w, &[q(0), q(2), q(0)]).unwrap().dim, 1);
        let o = Space::orbit_quotient(2).unwrap();
        assert_eq!(internal_tangent(&o, &[q(1), q(1)]).unwrap().dim, 1);
        assert_eq!(internal_tangent(&Space::half_line(), &[q(3)]).unwrap().dim, 1);
    }

    #[test]
    fn jet_linearity_in_the_line() {
        let e = Space::euclidean(1).unwrap();
        let two_t = PolyPlot::curve(vec![Poly::var(1, 0).scale(&q(2))]).unwrap();
        let (_, coords) = classify_curve(&e, &[q(0)], &CurveOptions::default(), &two_t).unwrap();
        assert_eq!(coords, vec![q(2)]);
    }

    #[test]
    fn half_line_curves_all_vanish() {
        let h = Space::half_line();
        let tt = Poly::var(1, 0);
        let c = PolyPlot::curve(vec![&tt.pow(2).scale(&q(3)) + &tt.pow(3)]).unwrap();
        let (report, coords) = classify_curve(&h, &[q(0)], &CurveOptions::default(), &c).unwrap();
        assert_eq!(report.dim, 0);
        assert!(coords.is_empty());
        assert!(report.relations.iter().any(|r| r.kind == RelationKind::DiagonalSplit));
    }

    #[test]
    fn relations_classify_to_zero() {
        let spaces = [Space::generated(3, 2).unwrap(),
            Space::product(vec![Space::wedge(2).unwrap(), Space::euclidean(1).unwrap()]).unwrap()];
        let tt = Poly::var(1, 0);
        let extras = vec![
            vec![(
                "c".to_string(),
                PolyPlot::curve(vec![&tt + &tt.pow(2), tt.pow(3), tt.scale(&q(2))]).unwrap(),
            )],
            vec![(
                "c".to_string(),
                PolyPlot::curve(vec![tt.clone(), Poly::zero(1), tt.pow(2)]).unwrap(),
            )],
        ];
        for (s, ex) in spaces.iter().zip(extras) {
            let opts = CurveOptions {
                slopes: vec![],
                extra_curves: ex,
            };
            let r = internal_tangent_with(s, &s.origin(), &opts).unwrap();
            for rel in &r.relations {
                assert!(r.relation_image(rel).iter().all(QuadNumber::is_zero));
            }
        }
    }

    #[test]
    fn wire_slopes_are_independent() {
        let wire = Space::generated(2, 1).unwrap();
        let slopes: Vec<QuadNumber> = (1..=5).map(q).collect();
        let r = internal_tangent_with(&wire, &[q(0), q(0)], &CurveOptions::with_slopes(slopes)).unwrap();
        assert_eq!(r.dim, 7);
    }

    #[test]
    fn discrete_rejects_moving_curves() {
        let d = Space::new(Family::Discrete(PointSet::Real(1))).unwrap();
        let opts = CurveOptions {
            slopes: vec![],
            extra_curves: vec![("c".into(), PolyPlot::curve(vec![Poly::var(1, 0)]).unwrap())],
        };
        assert!(matches!(
            internal_tangent_with(&d, &[q(0)], &opts),
            Err(Error::NotAMember(_))
        ));
    }
}
