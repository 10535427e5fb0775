//! The comparison map from internal to external tangent vectors, and the
//! action of smooth maps on external tangent spaces.

use crate::algebra::{Matrix, Poly, QuadNumber};
use crate::error::{Error, Result};
use crate::internal::{internal_tangent_with, pushforward_with, CurveOptions, SmoothMap, TangentSpaceReport};
use crate::space::{Branch, Family, PolyPlot, Space};

use super::{
    external_tangent_at_order, germ_algebra_blocks, substitution, Block, ExternalTangentReport,
    DEFAULT_ORDER,
};

#[derive(Clone, Debug)]
pub struct BetaReport {
    pub internal: TangentSpaceReport,
    pub external: ExternalTangentReport,
    /// `external.dim x internal.dim`.
    pub matrix: Matrix,
    pub rank: usize,
    pub injective: bool,
    pub surjective: bool,
    /// Whether every harvested curve, not only the basis curves, is sent to the
    /// functional predicted by its class. A failure would mean the map is not
    /// well defined on classes.
    pub consistent: bool,
}

pub fn comparison_beta(space: &Space, point: &[QuadNumber]) -> Result<BetaReport> {
    comparison_beta_with(space, point, &CurveOptions::default(), DEFAULT_ORDER)
}

pub fn comparison_beta_with(
    space: &Space,
    point: &[QuadNumber],
    options: &CurveOptions,
    order: u32,
) -> Result<BetaReport> {
    let internal = internal_tangent_with(space, point, options)?;
    let external = external_tangent_at_order(space, point, order)?;
    let matrix = comparison_matrix(&internal, &external)?;
    let mut consistent = true;
    for (i, c) in internal.curves.iter().enumerate() {
        let direct = functional(&internal, &external, &c.plot)?;
        if matrix.apply(&internal.coordinates(i))? != direct {
            consistent = false;
        }
    }
    let rank = matrix.rank();
    Ok(BetaReport {
        injective: rank == internal.dim,
        surjective: rank == external.dim,
        rank,
        matrix,
        internal,
        external,
        consistent,
    })
}

/// `f |-> d/dt f(c(t))` at `t = 0`, on each representative of `I/I²`.
fn functional(
    internal: &TangentSpaceReport,
    external: &ExternalTangentReport,
    curve: &PolyPlot,
) -> Result<Vec<QuadNumber>> {
    let alg = germ_algebra_blocks(&internal.space, &internal.point)?;
    let sub = substitution(&internal.space, &alg, curve)?;
    external
        .representatives
        .iter()
        .map(|r| Ok(sub.pull_back(r)?.linear_coeff(0)))
        .collect()
}

/// The matrix of the comparison map from the basis of `internal` to the
/// derivation basis of `external`, which must describe the same point.
pub fn comparison_matrix(
    internal: &TangentSpaceReport,
    external: &ExternalTangentReport,
) -> Result<Matrix> {
    if internal.space != external.space || internal.point != external.point {
        return Err(Error::ShapeMismatch(
            "internal and external reports describe different points".into(),
        ));
    }
    let columns = internal
        .basis_curves
        .iter()
        .map(|&j| functional(internal, external, &internal.curves[j].plot))
        .collect::<Result<Vec<_>>>()?;
    Matrix::from_columns(external.dim, columns)
}

/// A plot into the source through a subset of the presentation variables.
struct Probe {
    plot: PolyPlot,
    vars: Vec<usize>,
}

fn probes(space: &Space, point: &[QuadNumber]) -> Result<Vec<Probe>> {
    let alg = germ_algebra_blocks(space, point)?;
    let factors = space.factors();
    let points = space.split(point);
    let offsets = alg.offsets();
    let mut out = Vec::new();
    for (b, block) in alg.blocks.iter().enumerate() {
        let local: Vec<(PolyPlot, Vec<usize>)> = match block {
            Block::Shifted(p) if matches!(factors[b].family(), Family::OrbitQuotient(_)) => {
                let n = p.len();
                let comps = (0..n)
                    .map(|i| &Poly::constant(n, p[i].clone()) + &Poly::var(n, i))
                    .collect();
                vec![(PolyPlot::new(n, comps)?, (0..n).collect())]
            }
            Block::Shifted(p) => (0..p.len())
                .map(|i| {
                    let comps = (0..p.len())
                        .map(|k| {
                            let c = Poly::constant(1, p[k].clone());
                            if k == i {
                                &c + &Poly::var(1, 0)
                            } else {
                                c
                            }
                        })
                        .collect();
                    Ok((PolyPlot::curve(comps)?, vec![i]))
                })
                .collect::<Result<_>>()?,
            Block::Lines(dirs) => dirs
                .iter()
                .enumerate()
                .map(|(i, d)| {
                    let comps = d.iter().map(|a| Poly::var(1, 0).scale(a)).collect();
                    Ok((PolyPlot::curve(comps)?.with_branch(Branch::Line(i)), vec![i]))
                })
                .collect::<Result<_>>()?,
            Block::AlongLine { point, dir } => {
                let comps = point
                    .iter()
                    .zip(dir)
                    .map(|(a, d)| &Poly::constant(1, a.clone()) + &Poly::var(1, 0).scale(d))
                    .collect();
                vec![(PolyPlot::curve(comps)?, vec![0])]
            }
            Block::Even => vec![(PolyPlot::curve(vec![Poly::var(1, 0).pow(2)])?, vec![0])],
            Block::Constants => Vec::new(),
        };
        for (plot, vars) in local {
            let plot = if factors.len() == 1 {
                plot
            } else {
                let parts: Vec<PolyPlot> = (0..factors.len())
                    .map(|k| {
                        if k == b {
                            plot.clone()
                        } else {
                            PolyPlot::constant(plot.src_dim, points[k])
                        }
                    })
                    .collect();
                PolyPlot::pair(&parts)?
            };
            out.push(Probe {
                plot,
                vars: vars.iter().map(|v| v + offsets[b]).collect(),
            });
        }
    }
    Ok(out)
}

/// The matrix of `T̂(f)` at `x` in the derivation bases of the source and target,
/// computed as `D |-> (s |-> D(s ∘ f))` on the target representatives `s`.
pub fn external_pushforward(
    map: &SmoothMap,
    x: &[QuadNumber],
    order: u32,
) -> Result<(ExternalTangentReport, ExternalTangentReport, Matrix)> {
    let source_space = map.source()?;
    let target_space = map.target()?;
    let fx = map.map_point(x)?;
    let source = external_tangent_at_order(&source_space, x, order)?;
    let target = external_tangent_at_order(&target_space, &fx, order)?;
    let target_alg = germ_algebra_blocks(&target_space, &fx)?;
    let nvars = source.cotangent.nvars;
    let mut matrix = Matrix::zeros(target.dim, source.dim);
    let reps: Vec<Vec<usize>> = source
        .representatives
        .iter()
        .map(Poly::variables_used)
        .collect();
    for probe in probes(&source_space, x)? {
        let image = map.apply(&probe.plot)?;
        let sub = substitution(&target_space, &target_alg, &image)?;
        let covered: Vec<usize> = (0..source.dim)
            .filter(|&i| reps[i].iter().all(|v| probe.vars.contains(v)))
            .collect();
        if covered.is_empty() {
            continue;
        }
        let embed: Vec<Poly> = probe.vars.iter().map(|&v| Poly::var(nvars, v)).collect();
        for (k, s) in target.representatives.iter().enumerate() {
            let germ = sub.pull_back(s)?.compose(&embed)?;
            let values = source.cotangent.derivations(&germ).ok_or_else(|| {
                Error::UnsupportedMap(format!(
                    "pulled-back germ {germ} is not presented in the source algebra"
                ))
            })?;
            for &i in &covered {
                matrix.set(k, i, values[i].clone());
            }
        }
    }
    Ok((source, target, matrix))
}

#[derive(Clone, Debug)]
pub struct NaturalityReport {
    /// `beta_target * T(f)`.
    pub left: Matrix,
    /// `T̂(f) * beta_source`.
    pub right: Matrix,
}

impl NaturalityReport {
    pub fn holds(&self) -> bool {
        self.left == self.right
    }
}

/// Compares both routes around the square formed by the comparison maps and the
/// internal and external pushforwards of `map` at `x`.
pub fn naturality_check(
    map: &SmoothMap,
    x: &[QuadNumber],
    source_options: &CurveOptions,
    target_options: &CurveOptions,
) -> Result<NaturalityReport> {
    let push = pushforward_with(map, x, source_options, target_options)?;
    let (ext_source, ext_target, hat) = external_pushforward(map, x, DEFAULT_ORDER)?;
    let beta_source = comparison_matrix(&push.source, &ext_source)?;
    let beta_target = comparison_matrix(&push.target, &ext_target)?;
    Ok(NaturalityReport {
        left: beta_target.mul(&push.matrix)?,
        right: hat.mul(&beta_source)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> QuadNumber {
        QuadNumber::from_int(n)
    }

    #[test]
    fn beta_on_euclidean_is_identity() {
        for n in 1..=3 {
            let e = Space::euclidean(n).unwrap();
            let b = comparison_beta(&e, &e.origin()).unwrap();
            assert!(b.matrix.is_identity());
            assert!(b.consistent);
        }
    }

    #[test]
    fn beta_shapes_for_torus_and_orbit_space() {
        let t = Space::irrational_torus(QuadNumber::sqrt(2)).unwrap();
        let b = comparison_beta(&t, &[q(0)]).unwrap();
        assert_eq!((b.matrix.rows(), b.matrix.cols()), (0, 1));
        assert!(!b.injective && b.surjective);
        let o = Space::orbit_quotient(3).unwrap();
        let b = comparison_beta(&o, &o.origin()).unwrap();
        assert_eq!((b.matrix.rows(), b.matrix.cols()), (1, 0));
        assert!(b.injective && !b.surjective);
    }

    #[test]
    fn beta_on_the_wire_has_rank_two() {
        let g = Space::generated(2, 1).unwrap();
        let opts = CurveOptions::with_slopes(vec![q(1), q(2), q(-3)]);
        let b = comparison_beta_with(&g, &g.origin(), &opts, DEFAULT_ORDER).unwrap();
        assert_eq!(b.rank, 2);
        assert!(b.consistent);
    }

    #[test]
    fn naturality_for_a_projection() {
        let p = Space::product(vec![Space::wedge(2).unwrap(), Space::euclidean(1).unwrap()])
            .unwrap();
        let map = SmoothMap::ProductProjection {
            product: p.clone(),
            start: 0,
            end: 1,
        };
        let r = naturality_check(&map, &p.origin(), &CurveOptions::default(), &CurveOptions::default())
            .unwrap();
        assert!(r.holds());
    }

    fn natural(map: &SmoothMap, x: &[QuadNumber]) -> bool {
        naturality_check(map, x, &CurveOptions::default(), &CurveOptions::default())
            .unwrap()
            .holds()
    }

    #[test]
    fn naturality_for_chart_and_branch_inclusions() {
        let w = Space::wedge(3).unwrap();
        for line in 0..3 {
            assert!(natural(&SmoothMap::branch_inclusion(&w, line).unwrap(), &[q(0)]));
            assert!(natural(&SmoothMap::branch_inclusion(&w, line).unwrap(), &[q(2)]));
        }
        let chart = SmoothMap::Polynomial {
            source: 2,
            components: vec![
                &Poly::var(2, 0) * &Poly::var(2, 1),
                &Poly::var(2, 0) + &Poly::var(2, 1).pow(3),
                Poly::var(2, 1),
            ],
        };
        assert!(natural(&chart, &[q(1), q(-1)]));
        assert!(natural(&SmoothMap::orbit_projection(2).unwrap(), &[q(0), q(0)]));
        assert!(natural(&SmoothMap::orbit_projection(2).unwrap(), &[q(1), q(3)]));
        assert!(natural(&SmoothMap::ThreeLines { inverse: false }, &[q(0), q(0), q(0)]));
        assert!(natural(&SmoothMap::ThreeLines { inverse: true }, &[q(0), q(0)]));
        assert!(natural(&SmoothMap::WedgeToAxes(2), &[q(0), q(0)]));
    }

    #[test]
    fn naturality_for_product_inclusions() {
        let p = Space::product(vec![Space::half_line(), Space::wedge(2).unwrap()]).unwrap();
        for (start, end, x) in [(0, 1, vec![q(0)]), (1, 2, vec![q(0), q(0)]), (0, 1, vec![q(3)])] {
            let map = SmoothMap::ProductInclusion {
                product: p.clone(),
                start,
                end,
                base: p.origin(),
            };
            assert!(natural(&map, &x));
        }
    }
}
