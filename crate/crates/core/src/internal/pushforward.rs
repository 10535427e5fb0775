//! Smooth maps between catalog spaces and their action on internal tangent spaces.

use crate::algebra::{Matrix, Poly, QuadNumber};
use crate::error::{Error, Result};
use crate::space::{plot_check, Branch, MembershipReason, PolyPlot, Space};

use super::{internal_tangent_with, CurveOptions, TangentSpaceReport};

/// A smooth map from the supported catalog.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SmoothMap {
    Identity(Space),
    /// A polynomial map `R^n -> R^m`.
    Polynomial {
        source: usize,
        components: Vec<Poly>,
    },
    /// A plot `R^d -> X`, read as a smooth map out of `R^d`. Covers chart and
    /// branch inclusions and the quotient maps onto the orbit space and the torus.
    Plot { target: Space, plot: PolyPlot },
    /// The identity on coordinates from the wedge to the axes with the sub-diffeology.
    WedgeToAxes(usize),
    /// Projection of a product onto the factors `start..end`.
    ProductProjection {
        product: Space,
        start: usize,
        end: usize,
    },
    /// Inclusion of the factors `start..end` into a product, the remaining
    /// coordinates held at `base`.
    ProductInclusion {
        product: Space,
        start: usize,
        end: usize,
        base: Vec<QuadNumber>,
    },
    /// `(x, y, z) |-> (x + z/sqrt2, y + z/sqrt2)` from the three axes of `R^3` onto
    /// the lines `y = 0`, `x = 0`, `x = y`, or its inverse.
    ThreeLines { inverse: bool },
    /// `outer ∘ inner`.
    Compose(Box<SmoothMap>, Box<SmoothMap>),
}

pub fn three_lines_target() -> Space {
    let q = QuadNumber::from_int;
    Space::lines_sub(vec![[q(1), q(0)], [q(0), q(1)], [q(1), q(1)]]).expect("valid directions")
}

fn sub_product(product: &Space, start: usize, end: usize) -> Result<Space> {
    let fs = product.factors();
    if start >= end || end > fs.len() {
        return Err(Error::UnsupportedMap(format!(
            "factor range {start}..{end} of a product with {} factors",
            fs.len()
        )));
    }
    if end - start == 1 {
        Ok(fs[start].clone())
    } else {
        Space::product(fs[start..end].iter().map(|s| (*s).clone()).collect())
    }
}

impl SmoothMap {
    /// `outer ∘ inner`, checking that the spaces match.
    pub fn compose(outer: SmoothMap, inner: SmoothMap) -> Result<SmoothMap> {
        if outer.source()? != inner.target()? {
            return Err(Error::UnsupportedMap(format!(
                "cannot compose: {} is not {}",
                inner.target()?,
                outer.source()?
            )));
        }
        Ok(SmoothMap::Compose(Box::new(outer), Box::new(inner)))
    }

    pub fn torus_projection(theta: QuadNumber) -> Result<SmoothMap> {
        Ok(SmoothMap::Plot {
            target: Space::irrational_torus(theta)?,
            plot: PolyPlot::new(1, vec![Poly::var(1, 0)])?,
        })
    }

    pub fn orbit_projection(n: usize) -> Result<SmoothMap> {
        Ok(SmoothMap::Plot {
            target: Space::orbit_quotient(n)?,
            plot: PolyPlot::new(n, (0..n).map(|i| Poly::var(n, i)).collect())?,
        })
    }

    /// `s |-> s d_i` into a union of lines.
    pub fn branch_inclusion(space: &Space, line: usize) -> Result<SmoothMap> {
        let d = space
            .line_direction(line)
            .ok_or_else(|| Error::UnsupportedMap(format!("{space} has no line {line}")))?;
        let s = Poly::var(1, 0);
        Ok(SmoothMap::Plot {
            target: space.clone(),
            plot: PolyPlot::new(1, d.iter().map(|a| s.scale(a)).collect())?,
        })
    }

    pub fn source(&self) -> Result<Space> {
        match self {
            SmoothMap::Identity(s) => Ok(s.clone()),
            SmoothMap::Polynomial { source, .. } => Space::euclidean(*source),
            SmoothMap::Plot { plot, .. } => Space::euclidean(plot.src_dim),
            SmoothMap::WedgeToAxes(j) => Space::wedge(*j),
            SmoothMap::ProductProjection { product, .. } => Ok(product.clone()),
            SmoothMap::ProductInclusion {
                product, start, end, ..
            } => sub_product(product, *start, *end),
            SmoothMap::ThreeLines { inverse: false } => Space::axes_sub(3),
            SmoothMap::ThreeLines { inverse: true } => Ok(three_lines_target()),
            SmoothMap::Compose(_, inner) => inner.source(),
        }
    }

    pub fn target(&self) -> Result<Space> {
        match self {
            SmoothMap::Identity(s) => Ok(s.clone()),
            SmoothMap::Polynomial { components, .. } => Space::euclidean(components.len()),
            SmoothMap::Plot { target, .. } => Ok(target.clone()),
            SmoothMap::WedgeToAxes(j) => Space::axes_sub(*j),
            SmoothMap::ProductProjection {
                product, start, end, ..
            } => sub_product(product, *start, *end),
            SmoothMap::ProductInclusion { product, .. } => Ok(product.clone()),
            SmoothMap::ThreeLines { inverse: false } => Ok(three_lines_target()),
            SmoothMap::ThreeLines { inverse: true } => Space::axes_sub(3),
            SmoothMap::Compose(outer, _) => outer.target(),
        }
    }

    /// `self ∘ p` for a plot `p` of the source.
    pub fn apply(&self, p: &PolyPlot) -> Result<PolyPlot> {
        match self {
            SmoothMap::Identity(_) | SmoothMap::WedgeToAxes(_) => Ok(PolyPlot {
                branch: None,
                ..p.clone()
            }),
            SmoothMap::Polynomial { components, source } => {
                if p.target_dim() != *source {
                    return Err(Error::ShapeMismatch("plot does not land in the source".into()));
                }
                PolyPlot::new(
                    p.src_dim,
                    components
                        .iter()
                        .map(|f| f.compose(&p.components))
                        .collect::<Result<_>>()?,
                )
            }
            SmoothMap::Plot { plot, .. } => {
                let mut out = plot.precompose(&p.components)?;
                out.src_dim = p.src_dim;
                Ok(out)
            }
            SmoothMap::ProductProjection {
                product, start, end, ..
            } => {
                let parts: Vec<PolyPlot> = (*start..*end).map(|j| p.factor(product, j)).collect();
                if parts.len() == 1 {
                    Ok(parts.into_iter().next().expect("one part"))
                } else {
                    PolyPlot::pair(&parts)
                }
            }
            SmoothMap::ProductInclusion {
                product,
                start,
                end,
                base,
            } => {
                let source = sub_product(product, *start, *end)?;
                let base_points = product.split(base);
                let mut parts = Vec::new();
                for (j, point) in base_points.iter().enumerate() {
                    if j == *start {
                        for k in 0..(end - start) {
                            parts.push(if end - start == 1 {
                                p.clone()
                            } else {
                                p.factor(&source, k)
                            });
                        }
                    } else if j < *start || j >= *end {
                        parts.push(PolyPlot::constant(p.src_dim, point));
                    }
                }
                PolyPlot::pair(&parts)
            }
            SmoothMap::ThreeLines { inverse: false } => {
                let r = QuadNumber::sqrt(2).inv()?;
                let [x, y, z] = [&p.components[0], &p.components[1], &p.components[2]];
                let zr = z.scale(&r);
                PolyPlot::new(p.src_dim, vec![x + &zr, y + &zr])
            }
            SmoothMap::ThreeLines { inverse: true } => {
                let line = branch_of(&three_lines_target(), p)?;
                let (u, v) = (&p.components[0], &p.components[1]);
                let zero = Poly::zero(p.src_dim);
                let comps = match line {
                    None => vec![zero.clone(), zero.clone(), zero],
                    Some(0) => vec![u.clone(), zero.clone(), zero],
                    Some(1) => vec![zero.clone(), v.clone(), zero],
                    Some(_) => vec![zero.clone(), zero, u.scale(&QuadNumber::sqrt(2))],
                };
                PolyPlot::new(p.src_dim, comps)
            }
            SmoothMap::Compose(outer, inner) => outer.apply(&inner.apply(p)?),
        }
    }

    pub fn map_point(&self, x: &[QuadNumber]) -> Result<Vec<QuadNumber>> {
        Ok(self.apply(&PolyPlot::constant(0, x))?.at_origin())
    }
}

/// The line a plot into a union of lines runs along (`None` for the constant origin).
fn branch_of(space: &Space, p: &PolyPlot) -> Result<Option<usize>> {
    let w = plot_check(space, p)?;
    match w.reason {
        MembershipReason::BranchCertificate { line, .. } => Ok(Some(line)),
        MembershipReason::Constant => Ok(space.line_through(&p.at_origin())),
        _ => Err(Error::NotAMember(format!("{p} is not a plot of {space}"))),
    }
}

#[derive(Clone, Debug)]
pub struct Pushforward {
    pub source: TangentSpaceReport,
    pub target: TangentSpaceReport,
    /// `target.dim x source.dim`.
    pub matrix: Matrix,
}

impl Pushforward {
    pub fn apply(&self, v: &[QuadNumber]) -> Result<Vec<QuadNumber>> {
        self.matrix.apply(v)
    }
}

pub fn pushforward(map: &SmoothMap, x: &[QuadNumber]) -> Result<Pushforward> {
    pushforward_with(map, x, &CurveOptions::default(), &CurveOptions::default())
}

/// The matrix of `T(f)` at `x`, computed by pushing each source basis curve
/// forward and classifying the image in the target.
pub fn pushforward_with(
    map: &SmoothMap,
    x: &[QuadNumber],
    source_options: &CurveOptions,
    target_options: &CurveOptions,
) -> Result<Pushforward> {
    let source_space = map.source()?;
    let source = internal_tangent_with(&source_space, x, source_options)?;
    let fx = map.map_point(x)?;
    let mut opts = target_options.clone();
    let first = opts.extra_curves.len();
    for (k, &b) in source.basis_curves.iter().enumerate() {
        let image = map.apply(&source.curves[b].plot)?;
        opts.extra_curves.push((format!("image{}", k + 1), image));
    }
    let target = internal_tangent_with(&map.target()?, &fx, &opts)?;
    let columns: Vec<Vec<QuadNumber>> = target.supplied[first..]
        .iter()
        .map(|&i| target.coordinates(i))
        .collect();
    let matrix = Matrix::from_columns(target.dim, columns)?;
    Ok(Pushforward {
        source,
        target,
        matrix,
    })
}

#[derive(Clone, Debug)]
pub struct ProductIso {
    pub dim_a: usize,
    pub dim_b: usize,
    pub dim_product: usize,
    /// `((pr_1)_*, (pr_2)_*)`, of shape `(dim_a + dim_b) x dim_product`.
    pub alpha: Matrix,
    /// `(i_1)_* + (i_2)_*`, of shape `dim_product x (dim_a + dim_b)`.
    pub beta: Matrix,
    pub alpha_beta_identity: bool,
    pub beta_alpha_identity: bool,
}

fn stack_rows(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    let rows: Vec<Vec<QuadNumber>> = (0..a.rows())
        .map(|i| a.row(i).to_vec())
        .chain((0..b.rows()).map(|i| b.row(i).to_vec()))
        .collect();
    Matrix::from_rows(a.cols(), rows)
}

/// Builds both comparison matrices between `T(A x B)` and `T(A) + T(B)` and checks
/// that they are mutually inverse.
pub fn product_tangent_iso(
    a: &Space,
    b: &Space,
    point_a: &[QuadNumber],
    point_b: &[QuadNumber],
) -> Result<ProductIso> {
    let p = Space::product(vec![a.clone(), b.clone()])?;
    let na = a.factors().len();
    let nb = b.factors().len();
    let point: Vec<QuadNumber> = point_a.iter().chain(point_b).cloned().collect();
    let pr1 = SmoothMap::ProductProjection {
        product: p.clone(),
        start: 0,
        end: na,
    };
    let pr2 = SmoothMap::ProductProjection {
        product: p.clone(),
        start: na,
        end: na + nb,
    };
    let i1 = SmoothMap::ProductInclusion {
        product: p.clone(),
        start: 0,
        end: na,
        base: point.clone(),
    };
    let i2 = SmoothMap::ProductInclusion {
        product: p.clone(),
        start: na,
        end: na + nb,
        base: point.clone(),
    };
    let m1 = pushforward(&pr1, &point)?;
    let m2 = pushforward(&pr2, &point)?;
    let j1 = pushforward(&i1, point_a)?;
    let j2 = pushforward(&i2, point_b)?;
    let alpha = stack_rows(&m1.matrix, &m2.matrix)?;
    let beta = stack_rows(&j1.matrix.transpose(), &j2.matrix.transpose())?.transpose();
    let alpha_beta_identity = alpha.mul(&beta)?.is_identity();
    let beta_alpha_identity = beta.mul(&alpha)?.is_identity();
    Ok(ProductIso {
        dim_a: m1.target.dim,
        dim_b: m2.target.dim,
        dim_product: m1.source.dim,
        alpha,
        beta,
        alpha_beta_identity,
        beta_alpha_identity,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClaimReport {
    pub line: Option<usize>,
    /// `p^(k)` stays in the three lines for each order `1..=k`.
    pub derivatives_in_target: bool,
    /// `(f ∘ p)^(k) = f(p^(k))` for each order `1..=k`.
    pub commutes: bool,
}

impl ClaimReport {
    pub fn holds(&self) -> bool {
        self.derivatives_in_target && self.commutes
    }
}

/// Checks, for a curve `p` into the three lines and the inverse map `f` onto the
/// axes, that every derivative `p^(j)`, `j <= k`, lies in the three lines and that
/// `(f ∘ p)^(j) = f(p^(j))` as polynomial identities.
pub fn derivative_claim_check(p: &PolyPlot, k: u32) -> Result<ClaimReport> {
    let b = three_lines_target();
    if p.src_dim != 1 {
        return Err(Error::ShapeMismatch("the claim concerns curves".into()));
    }
    let line = branch_of(&b, p)?;
    let f = SmoothMap::ThreeLines { inverse: true };
    let fp = f.apply(p)?;
    let mut in_target = true;
    let mut commutes = true;
    for j in 1..=k {
        let dp = PolyPlot::new(1, p.components.iter().map(|c| c.nth_derivative(0, j)).collect())?;
        let on_line = match line {
            None => dp.components.iter().all(Poly::is_zero),
            Some(i) => {
                let d = b.line_direction(i).expect("line");
                (&dp.components[1].scale(&d[0]) - &dp.components[0].scale(&d[1])).is_zero()
            }
        };
        in_target &= on_line && plot_check(&b, &dp)?.is_member();
        let lhs: Vec<Poly> = fp.components.iter().map(|c| c.nth_derivative(0, j)).collect();
        let tagged = match line {
            Some(i) => dp.clone().with_branch(Branch::Line(i)),
            None => dp.clone(),
        };
        let rhs = f.apply(&tagged)?;
        commutes &= lhs == rhs.components;
    }
    Ok(ClaimReport {
        line,
        derivatives_in_target: in_target,
        commutes,
    })
}
