//! External tangent spaces: derivations on presented germ algebras.
//!
//! A germ algebra is presented by finitely many generators in auxiliary
//! "presentation variables" together with monomial gluing relations. The
//! cotangent space `I/I²` is computed on truncated series, and its dual basis is
//! the basis of derivations.

mod comparison;

use std::collections::HashMap;
use std::fmt;

use crate::algebra::linalg::SparseVec;
use crate::algebra::poly::{default_var_names, Exponent};
use crate::algebra::{Classifier, Poly, QuadNumber};
use crate::error::{Error, Result};
use crate::space::{Family, PolyPlot, Space};

pub use comparison::{
    comparison_beta, comparison_beta_with, comparison_matrix, external_pushforward,
    naturality_check, BetaReport, NaturalityReport,
};

/// Truncation order used when the caller does not choose one.
pub const DEFAULT_ORDER: u32 = 4;

/// A presented algebra of germs of smooth functions at a point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GermAlgebraPresentation {
    /// The algebra of series in `generators`, themselves series without constant
    /// term in `nvars` presentation variables.
    FreeSeries { nvars: usize, generators: Vec<Poly> },
    /// `j`-tuples of one-variable series agreeing at 0.
    WedgeTuples(usize),
    /// Only constant germs.
    ConstantsOnly,
    /// Series in `generators` modulo the ideal spanned by `relations`. Products
    /// whose factors include a union of lines are presented this way, with the
    /// lines glued through the monomials `x_i x_k`.
    Glued {
        nvars: usize,
        generators: Vec<Poly>,
        relations: Vec<Poly>,
    },
}

impl GermAlgebraPresentation {
    pub fn nvars(&self) -> usize {
        match self {
            Self::FreeSeries { nvars, .. } | Self::Glued { nvars, .. } => *nvars,
            Self::WedgeTuples(j) => *j,
            Self::ConstantsOnly => 0,
        }
    }

    /// Generators of the maximal ideal as series in the presentation variables.
    pub fn generators(&self) -> Vec<Poly> {
        match self {
            Self::FreeSeries { generators, .. } | Self::Glued { generators, .. } => {
                generators.clone()
            }
            Self::WedgeTuples(j) => (0..*j).map(|i| Poly::var(*j, i)).collect(),
            Self::ConstantsOnly => Vec::new(),
        }
    }

    /// Spanning set of the gluing ideal; a wedge of `j` lines is the coordinate
    /// algebra of `R^j` modulo all mixed products `x_i x_k`.
    pub fn relations(&self) -> Vec<Poly> {
        match self {
            Self::Glued { relations, .. } => relations.clone(),
            Self::WedgeTuples(j) => mixed_products(*j, 0, *j),
            _ => Vec::new(),
        }
    }
}

fn mixed_products(nvars: usize, offset: usize, j: usize) -> Vec<Poly> {
    let mut out = Vec::new();
    for a in 0..j {
        for b in a + 1..j {
            let mut e = vec![0; nvars];
            e[offset + a] = 1;
            e[offset + b] = 1;
            out.push(Poly::monomial(e, QuadNumber::one()));
        }
    }
    out
}

impl fmt::Display for GermAlgebraPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |gens: &[Poly], n: usize| -> String {
            let names = default_var_names(n);
            gens.iter()
                .map(|g| g.fmt_with(&names))
                .collect::<Vec<_>>()
                .join(", ")
        };
        match self {
            Self::FreeSeries { nvars, generators } => {
                write!(f, "FreeSeries{{{}}}", list(generators, *nvars))
            }
            Self::WedgeTuples(j) => write!(f, "WedgeTuples({j})"),
            Self::ConstantsOnly => f.write_str("ConstantsOnly"),
            Self::Glued {
                nvars,
                generators,
                relations,
            } => write!(
                f,
                "Glued{{{} | {}}}",
                list(generators, *nvars),
                list(relations, *nvars)
            ),
        }
    }
}

/// How the presentation variables of one factor read off a plot into it.
#[derive(Clone, Debug)]
pub(crate) enum Block {
    /// Variables are ambient coordinates minus the base point.
    Shifted(Vec<QuadNumber>),
    /// One variable per line through the origin: the coordinate along that line.
    Lines(Vec<Vec<QuadNumber>>),
    /// A single variable: the coordinate along `dir` from `point`.
    AlongLine {
        point: Vec<QuadNumber>,
        dir: Vec<QuadNumber>,
    },
    /// A single variable `t` in which the ambient coordinate is `t^2`.
    Even,
    /// No variables.
    Constants,
}

impl Block {
    fn nvars(&self) -> usize {
        match self {
            Block::Shifted(p) => p.len(),
            Block::Lines(d) => d.len(),
            Block::AlongLine { .. } | Block::Even => 1,
            Block::Constants => 0,
        }
    }
}

/// A presentation together with the bookkeeping needed to pull germs back.
#[derive(Clone, Debug)]
pub(crate) struct GermAlgebra {
    pub presentation: GermAlgebraPresentation,
    /// One block per factor of the space.
    pub blocks: Vec<Block>,
}

impl GermAlgebra {
    pub fn offsets(&self) -> Vec<usize> {
        let mut acc = 0;
        self.blocks
            .iter()
            .map(|b| {
                let o = acc;
                acc += b.nvars();
                o
            })
            .collect()
    }
}

fn factor_block(space: &Space, point: &[QuadNumber]) -> Result<(Block, Vec<Poly>, bool)> {
    let n = point.len();
    let coords = |n: usize| (0..n).map(|i| Poly::var(n, i)).collect::<Vec<_>>();
    let lines = |space: &Space| -> Vec<Vec<QuadNumber>> {
        (0..space.line_count().unwrap_or(0))
            .filter_map(|i| space.line_direction(i))
            .collect()
    };
    Ok(match space.family() {
        Family::Euclidean(_) | Family::FineVector(_) | Family::Generated { .. } => {
            (Block::Shifted(point.to_vec()), coords(n), false)
        }
        Family::WedgeOfLines(_) | Family::AxesSub(_) | Family::LinesThroughOriginSub(_) => {
            if space.is_singular_point(point) {
                let dirs = lines(space);
                let j = dirs.len();
                (Block::Lines(dirs), coords(j), true)
            } else {
                let i = space
                    .line_through(point)
                    .ok_or_else(|| Error::NotAMember(format!("{point:?} is on no line")))?;
                let dir = space.line_direction(i).expect("line index in range");
                (
                    Block::AlongLine {
                        point: point.to_vec(),
                        dir,
                    },
                    coords(1),
                    false,
                )
            }
        }
        Family::HalfLineSub => {
            if point[0].is_zero() {
                (Block::Even, vec![Poly::var(1, 0).pow(2)], false)
            } else {
                (Block::Shifted(point.to_vec()), coords(1), false)
            }
        }
        Family::OrbitQuotient(_) => {
            // u = |p + y|^2 - |p|^2 = 2 p.y + |y|^2
            let mut u = Poly::zero(n);
            for (i, p) in point.iter().enumerate() {
                let y = Poly::var(n, i);
                u = &u + &(&y * &y);
                u = &u + &y.scale(&(p * &QuadNumber::from_int(2)));
            }
            (Block::Shifted(point.to_vec()), vec![u], false)
        }
        Family::IrrationalTorus(_)
        | Family::Indiscrete(_)
        | Family::ContinuousLine
        | Family::Discrete(_) => (Block::Constants, Vec::new(), false),
        Family::Product(_) => unreachable!("products are flattened"),
    })
}

pub(crate) fn germ_algebra_blocks(space: &Space, point: &[QuadNumber]) -> Result<GermAlgebra> {
    space.check_point(point)?;
    let factors = space.factors();
    let parts: Vec<_> = factors
        .iter()
        .zip(space.split(point))
        .map(|(f, p)| factor_block(f, p))
        .collect::<Result<_>>()?;
    let blocks: Vec<Block> = parts.iter().map(|(b, _, _)| b.clone()).collect();
    if let [(block, gens, glued)] = parts.as_slice() {
        let nvars = block.nvars();
        let presentation = if gens.is_empty() {
            GermAlgebraPresentation::ConstantsOnly
        } else if *glued {
            GermAlgebraPresentation::WedgeTuples(nvars)
        } else {
            GermAlgebraPresentation::FreeSeries {
                nvars,
                generators: gens.clone(),
            }
        };
        return Ok(GermAlgebra {
            presentation,
            blocks,
        });
    }
    let nvars: usize = blocks.iter().map(Block::nvars).sum();
    let mut generators = Vec::new();
    let mut relations = Vec::new();
    let mut offset = 0;
    for (block, gens, glued) in &parts {
        generators.extend(gens.iter().map(|g| g.embed(nvars, offset)));
        if *glued {
            relations.extend(mixed_products(nvars, offset, block.nvars()));
        }
        offset += block.nvars();
    }
    let presentation = if generators.is_empty() {
        GermAlgebraPresentation::ConstantsOnly
    } else if relations.is_empty() {
        GermAlgebraPresentation::FreeSeries { nvars, generators }
    } else {
        GermAlgebraPresentation::Glued {
            nvars,
            generators,
            relations,
        }
    };
    Ok(GermAlgebra {
        presentation,
        blocks,
    })
}

/// The presented germ algebra `G_x(X)`.
pub fn germ_algebra(space: &Space, point: &[QuadNumber]) -> Result<GermAlgebraPresentation> {
    Ok(germ_algebra_blocks(space, point)?.presentation)
}

/// `I/I²` of a presented germ algebra, truncated at a fixed order.
#[derive(Clone, Debug)]
pub struct CotangentSpace {
    pub order: u32,
    pub nvars: usize,
    pub dim: usize,
    pub generators: Vec<Poly>,
    /// Indices of the generators whose classes form the basis.
    pub representatives: Vec<usize>,
    monomials: HashMap<Exponent, usize>,
    classifier: Classifier,
}

struct MonomialIndex<'a> {
    order: u32,
    index: &'a mut HashMap<Exponent, usize>,
}

impl MonomialIndex<'_> {
    /// Coordinates of the positive-degree part of `p`, truncated.
    fn vector(&mut self, p: &Poly) -> SparseVec {
        let mut v = SparseVec::new();
        for (e, c) in p.terms() {
            let d: u32 = e.iter().sum();
            if d == 0 || d > self.order {
                continue;
            }
            let next = self.index.len();
            let i = *self.index.entry(e.clone()).or_insert(next);
            v.insert(i, c.clone());
        }
        v
    }
}

/// Every product `g^a` of generators with `|a| >= min_len` that survives truncation
/// at `order`, generators themselves first.
fn generator_monomials(gens: &[Poly], nvars: usize, order: u32, min_len: u32) -> Vec<Poly> {
    let vals: Vec<Option<u32>> = gens.iter().map(|g| g.truncate(order).order()).collect();
    let mut out = Vec::new();
    let mut stack: Vec<(usize, u32, u32, Poly)> = vec![(0, 0, 0, Poly::one(nvars))];
    while let Some((start, weight, len, acc)) = stack.pop() {
        if len >= min_len && len > 0 && !acc.is_zero() {
            out.push(acc.clone());
        }
        for i in start..gens.len() {
            let Some(v) = vals[i] else { continue };
            if v == 0 || weight + v > order {
                continue;
            }
            let next = acc
                .mul_truncated(&gens[i].truncate(order), Some(order))
                .expect("generators share the presentation variables");
            stack.push((i, weight + v, len + 1, next));
        }
    }
    out.sort_by_key(|p| p.order());
    out
}

/// `I/I²` at truncation order `order`.
pub fn cotangent_space(alg: &GermAlgebraPresentation, order: u32) -> Result<CotangentSpace> {
    if order < 2 {
        return Err(Error::InvalidParameter(format!(
            "truncation order must be at least 2, got {order}"
        )));
    }
    let nvars = alg.nvars();
    let generators = alg.generators();
    if let Some(g) = generators.iter().find(|g| !g.constant_term().is_zero()) {
        return Err(Error::InvalidParameter(format!(
            "generator {g} has a nonzero constant term"
        )));
    }
    let relations = alg.relations();
    let mut monomials = HashMap::new();
    let mut idx = MonomialIndex {
        order,
        index: &mut monomials,
    };
    // Generators come first so that the coset basis is made of generators.
    let mut big: Vec<SparseVec> = generators.iter().map(|g| idx.vector(g)).collect();
    let mut sub: Vec<SparseVec> = Vec::new();
    for p in generator_monomials(&generators, nvars, order, 2) {
        sub.push(idx.vector(&p));
    }
    for r in &relations {
        let room = order.saturating_sub(r.order().unwrap_or(order));
        for e in &crate::algebra::TruncSeries::monomials(nvars, 0, room) {
            let m = Poly::monomial(e.clone(), QuadNumber::one());
            let v = idx.vector(&r.mul_truncated(&m, Some(order))?);
            if !v.is_empty() {
                sub.push(v);
            }
        }
    }
    big.extend(sub.iter().cloned());
    let classifier = Classifier::build(&big, &sub)?;
    let representatives = classifier.coset_basis().to_vec();
    debug_assert!(representatives.iter().all(|&i| i < generators.len()));
    Ok(CotangentSpace {
        order,
        nvars,
        dim: classifier.dim(),
        generators,
        representatives,
        monomials,
        classifier,
    })
}

impl CotangentSpace {
    /// Values of the dual-basis derivations on a germ given as a series in the
    /// presentation variables, or `None` when the germ is not in the algebra (up
    /// to the truncation order).
    pub fn derivations(&self, germ: &Poly) -> Option<Vec<QuadNumber>> {
        let mut v = SparseVec::new();
        for (e, c) in germ.terms() {
            let d: u32 = e.iter().sum();
            if d == 0 || d > self.order {
                continue;
            }
            v.insert(*self.monomials.get(e)?, c.clone());
        }
        self.classifier.classify(v)
    }

    /// The `dim x generators` matrix of derivation values on the generators.
    pub fn derivation_basis(&self) -> Vec<Vec<QuadNumber>> {
        let cols: Vec<Vec<QuadNumber>> = self
            .generators
            .iter()
            .map(|g| self.derivations(g).expect("generators lie in the algebra"))
            .collect();
        (0..self.dim)
            .map(|i| cols.iter().map(|c| c[i].clone()).collect())
            .collect()
    }

    pub fn representative_germs(&self) -> Vec<Poly> {
        self.representatives
            .iter()
            .map(|&i| self.generators[i].clone())
            .collect()
    }
}

#[derive(Clone, Debug)]
pub struct ExternalTangentReport {
    pub space: Space,
    pub point: Vec<QuadNumber>,
    pub presentation: GermAlgebraPresentation,
    pub dim: usize,
    /// Row `i`: the values of derivation `D_i` on each generator.
    pub derivation_basis: Vec<Vec<QuadNumber>>,
    /// The generators dual to the derivation basis.
    pub representatives: Vec<Poly>,
    pub truncation_orders_checked: (u32, u32),
    pub cotangent: CotangentSpace,
}

impl PartialEq for ExternalTangentReport {
    /// Reports agree when they carry the same algebra, basis and orders; the
    /// space itself is not compared.
    fn eq(&self, other: &Self) -> bool {
        self.presentation == other.presentation
            && self.dim == other.dim
            && self.derivation_basis == other.derivation_basis
            && self.representatives == other.representatives
            && self.truncation_orders_checked == other.truncation_orders_checked
    }
}

impl fmt::Display for ExternalTangentReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "external tangent of {} at {}: dim {} from {} (orders {} and {})",
            self.space,
            crate::space::format_point(&self.point),
            self.dim,
            self.presentation,
            self.truncation_orders_checked.0,
            self.truncation_orders_checked.1
        )
    }
}

pub fn external_tangent(space: &Space, point: &[QuadNumber]) -> Result<ExternalTangentReport> {
    external_tangent_at_order(space, point, DEFAULT_ORDER)
}

/// Computes `I/I²` at `order` and `order + 1` and fails when the dimensions differ.
pub fn external_tangent_at_order(
    space: &Space,
    point: &[QuadNumber],
    order: u32,
) -> Result<ExternalTangentReport> {
    let presentation = germ_algebra(space, point)?;
    let at_k = cotangent_space(&presentation, order)?;
    let at_k1 = cotangent_space(&presentation, order + 1)?;
    if at_k.dim != at_k1.dim {
        return Err(Error::StabilizationFailure {
            k: order as usize,
            dim_k: at_k.dim,
            k1: order as usize + 1,
            dim_k1: at_k1.dim,
        });
    }
    Ok(ExternalTangentReport {
        space: space.clone(),
        point: point.to_vec(),
        presentation,
        dim: at_k.dim,
        derivation_basis: at_k.derivation_basis(),
        representatives: at_k.representative_germs(),
        truncation_orders_checked: (order, order + 1),
        cotangent: at_k,
    })
}

/// Presentation-variable values along a plot: substitution polynomials in the
/// plot's source variables, and which variables are even (the ambient value is
/// the square of the variable).
pub(crate) struct Substitution {
    pub values: Vec<Poly>,
    pub even: Vec<bool>,
}

impl Substitution {
    /// `germ ∘ plot` as a polynomial in the plot's source variables.
    pub fn pull_back(&self, germ: &Poly) -> Result<Poly> {
        let src = self.values.first().map(Poly::nvars);
        let Some(src) = src else {
            return Ok(Poly::constant(0, germ.constant_term()));
        };
        let mut out = Poly::zero(src);
        for (e, c) in germ.terms() {
            let mut term = Poly::constant(src, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let k = if self.even[i] {
                    if k % 2 == 1 {
                        return Err(Error::UnsupportedCurve(format!(
                            "germ {germ} is not even in its half-line variable"
                        )));
                    }
                    k / 2
                } else {
                    k
                };
                term = &term * &self.values[i].pow(k);
            }
            out = &out + &term;
        }
        Ok(out)
    }
}

fn block_values(block: &Block, plot: &PolyPlot) -> Result<(Vec<Poly>, bool)> {
    let src = plot.src_dim;
    let offset = |p: &[QuadNumber]| -> Vec<Poly> {
        plot.components
            .iter()
            .zip(p)
            .map(|(c, a)| c - &Poly::constant(src, a.clone()))
            .collect()
    };
    Ok(match block {
        Block::Shifted(p) => {
            if block_requires_start(plot, p) {
                return Err(Error::UnsupportedCurve(format!(
                    "plot {plot} does not start at the presentation point"
                )));
            }
            (offset(p), false)
        }
        Block::Lines(dirs) => {
            let mut vals = vec![Poly::zero(src); dirs.len()];
            if !plot.is_constant() {
                let (i, g) = dirs
                    .iter()
                    .enumerate()
                    .find_map(|(i, d)| along(&plot.components, d).map(|g| (i, g)))
                    .ok_or_else(|| {
                        Error::UnsupportedCurve(format!("plot {plot} runs along no single line"))
                    })?;
                vals[i] = g;
            }
            (vals, false)
        }
        Block::AlongLine { point, dir } => {
            let g = along(&offset(point), dir).ok_or_else(|| {
                Error::UnsupportedCurve(format!("plot {plot} leaves the line through {point:?}"))
            })?;
            (vec![g], false)
        }
        Block::Even => (plot.components.clone(), true),
        Block::Constants => (Vec::new(), false),
    })
}

fn block_requires_start(plot: &PolyPlot, p: &[QuadNumber]) -> bool {
    plot.at_origin().as_slice() != p
}

/// `g` with `v = g d` componentwise.
fn along(v: &[Poly], d: &[QuadNumber]) -> Option<Poly> {
    let m = d.iter().position(|a| !a.is_zero())?;
    let g = v[m].scale(&d[m].inv().ok()?);
    v.iter()
        .zip(d)
        .all(|(p, a)| *p == g.scale(a))
        .then_some(g)
}

/// Reads the presentation variables of `alg` along `plot`, which must start at
/// the presentation point (for orbit spaces: at the chosen representative).
pub(crate) fn substitution(
    space: &Space,
    alg: &GermAlgebra,
    plot: &PolyPlot,
) -> Result<Substitution> {
    let mut values = Vec::new();
    let mut even = Vec::new();
    for (i, block) in alg.blocks.iter().enumerate() {
        let part = if alg.blocks.len() == 1 {
            plot.clone()
        } else {
            plot.factor(space, i)
        };
        let (vals, ev) = block_values(block, &part)?;
        even.extend(std::iter::repeat_n(ev, vals.len()));
        values.extend(vals);
    }
    Ok(Substitution { values, even })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> QuadNumber {
        QuadNumber::from_int(n)
    }

    fn t_pow(k: u32) -> Poly {
        Poly::var(1, 0).pow(k)
    }

    #[test]
    fn presentation_examples() {
        let h = Space::half_line();
        assert_eq!(
            germ_algebra(&h, &[q(0)]).unwrap(),
            GermAlgebraPresentation::FreeSeries {
                nvars: 1,
                generators: vec![t_pow(2)]
            }
        );
        let torus = Space::irrational_torus(QuadNumber::sqrt(2)).unwrap();
        assert_eq!(
            germ_algebra(&torus, &[q(0)]).unwrap(),
            GermAlgebraPresentation::ConstantsOnly
        );
        let g = Space::generated(3, 1).unwrap();
        assert_eq!(
            germ_algebra(&g, &[q(0), q(0), q(0)]).unwrap(),
            GermAlgebraPresentation::FreeSeries {
                nvars: 3,
                generators: (0..3).map(|i| Poly::var(3, i)).collect()
            }
        );
        assert!(matches!(
            germ_algebra(&h, &[q(-1)]),
            Err(Error::PointNotInSpace { .. })
        ));
    }

    #[test]
    fn cotangent_examples() {
        let free = |gens: Vec<Poly>| GermAlgebraPresentation::FreeSeries {
            nvars: gens[0].nvars(),
            generators: gens,
        };
        assert_eq!(cotangent_space(&free(vec![t_pow(2)]), 5).unwrap().dim, 1);
        let xy = free(vec![Poly::var(2, 0), Poly::var(2, 1)]);
        assert_eq!(cotangent_space(&xy, 3).unwrap().dim, 2);
        assert_eq!(
            cotangent_space(&GermAlgebraPresentation::WedgeTuples(3), 3)
                .unwrap()
                .dim,
            3
        );
        let cusp = free(vec![t_pow(2), t_pow(3)]);
        assert_eq!(cotangent_space(&cusp, 6).unwrap().dim, 2);
        assert_eq!(cotangent_space(&cusp, 7).unwrap().dim, 2);
        assert_eq!(cotangent_space(&cusp, 2).unwrap().dim, 1);
        assert_eq!(
            cotangent_space(&GermAlgebraPresentation::ConstantsOnly, 4)
                .unwrap()
                .dim,
            0
        );
    }

    #[test]
    fn external_examples() {
        let orbit = Space::orbit_quotient(4).unwrap();
        assert_eq!(external_tangent(&orbit, &orbit.origin()).unwrap().dim, 1);
        let off = [q(1), q(2), q(0), q(0)];
        assert_eq!(external_tangent(&orbit, &off).unwrap().dim, 1);
        let w = Space::wedge(2).unwrap();
        assert_eq!(external_tangent(&w, &w.origin()).unwrap().dim, 2);
        let d = Space::new(Family::Discrete(crate::space::PointSet::Finite(3))).unwrap();
        assert_eq!(external_tangent(&d, &[q(1)]).unwrap().dim, 0);
    }

    #[test]
    fn products_glue_wedge_blocks() {
        let p = Space::product(vec![
            Space::wedge(2).unwrap(),
            Space::half_line(),
            Space::euclidean(1).unwrap(),
        ])
        .unwrap();
        let alg = germ_algebra(&p, &p.origin()).unwrap();
        assert!(matches!(alg, GermAlgebraPresentation::Glued { .. }));
        assert_eq!(external_tangent(&p, &p.origin()).unwrap().dim, 4);
    }

    #[test]
    fn derivations_vanish_on_constants_and_squares() {
        let e = external_tangent(&Space::euclidean(2).unwrap(), &[q(0), q(0)]).unwrap();
        let c = &e.cotangent;
        assert_eq!(c.derivations(&Poly::one(2)).unwrap(), vec![q(0), q(0)]);
        let x = Poly::var(2, 0);
        let y = Poly::var(2, 1);
        assert_eq!(c.derivations(&(&x * &y)).unwrap(), vec![q(0), q(0)]);
        assert_eq!(
            c.derivations(&(&x.scale(&q(3)) + &y)).unwrap(),
            vec![q(3), q(1)]
        );
        let h = external_tangent(&Space::half_line(), &[q(0)]).unwrap();
        assert!(h.cotangent.derivations(&t_pow(1)).is_none());
    }
}
