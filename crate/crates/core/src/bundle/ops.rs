//! Fibrewise operations, group trivializations, fineness and the
//! function-space isomorphism over a finite discrete domain.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{dvs_membership, fibre_dim, hector_membership, BundlePlotCandidate};
use crate::algebra::{Jet1, Matrix, Poly, QuadNumber};
use crate::error::{Error, Result};
use crate::internal::internal_tangent;
use crate::space::{same_plot, Family, PolyPlot, Space};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Operation {
    Addition,
    ScalarMultiplication,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OpVerdict {
    SmoothOnCandidates,
    Counterexample,
    /// The inputs are not plots of this diffeology, so nothing was tested.
    NotApplicable,
}

#[derive(Clone, Debug)]
pub struct SmoothnessReport {
    pub operation: Operation,
    pub hector_verdict: OpVerdict,
    pub dvs_verdict: OpVerdict,
    /// The first output candidate that is not a Hector plot.
    pub witness: Option<BundlePlotCandidate>,
    pub tested: Vec<BundlePlotCandidate>,
}

/// Tests whether fibrewise addition and scalar multiplication send the given
/// plots of `TX` to plots.
///
/// Addition is tested on `f + g`. Scalar multiplication is tested on the sweeps
/// `(s, u) |-> s v(u)` of `f`, `g` and of the constant vector `f(1) + g(1)`.
pub fn check_fibrewise_ops(
    space: &Space,
    f: &BundlePlotCandidate,
    g: &BundlePlotCandidate,
) -> Result<Vec<SmoothnessReport>> {
    let sum = f.sum(g)?;
    for c in [f, g] {
        if !dvs_membership(space, c)?.is_member() {
            return Err(Error::NotMembers(format!("{c} is not a plot of T(X)")));
        }
    }
    let hector_inputs =
        hector_membership(space, f)?.is_member() && hector_membership(space, g)?.is_member();

    let ones = vec![QuadNumber::one(); f.src_dim];
    let point = f.base.eval(&ones)?;
    let vector: Vec<QuadNumber> = f
        .fibre_at(&ones)?
        .iter()
        .zip(g.fibre_at(&ones)?)
        .map(|(a, b)| a + &b)
        .collect();
    let constant = BundlePlotCandidate::new(
        PolyPlot::constant(f.src_dim, &point),
        vector
            .iter()
            .map(|a| Poly::constant(f.src_dim, a.clone()))
            .collect(),
    );

    let mut reports = Vec::new();
    let addition = vec![sum];
    let hector_add: Vec<&BundlePlotCandidate> = if hector_inputs {
        addition.iter().collect()
    } else {
        Vec::new()
    };
    reports.push(report(space, Operation::Addition, &addition, &hector_add)?);

    let mut inputs = vec![f.clone(), g.clone()];
    if dvs_membership(space, &constant)?.is_member() {
        inputs.push(constant);
    }
    let mut sweeps = Vec::new();
    let mut hector_sweeps = Vec::new();
    for c in &inputs {
        sweeps.push(c.scalar_sweep());
        if hector_membership(space, c)?.is_member() {
            hector_sweeps.push(sweeps.len() - 1);
        }
    }
    let hector_refs: Vec<&BundlePlotCandidate> = hector_sweeps.iter().map(|&i| &sweeps[i]).collect();
    reports.push(report(
        space,
        Operation::ScalarMultiplication,
        &sweeps,
        &hector_refs,
    )?);
    Ok(reports)
}

fn report(
    space: &Space,
    operation: Operation,
    outputs: &[BundlePlotCandidate],
    hector_outputs: &[&BundlePlotCandidate],
) -> Result<SmoothnessReport> {
    let mut witness = None;
    for c in hector_outputs {
        if !hector_membership(space, c)?.is_member() {
            witness = Some((*c).clone());
            break;
        }
    }
    let hector_verdict = if hector_outputs.is_empty() {
        OpVerdict::NotApplicable
    } else if witness.is_some() {
        OpVerdict::Counterexample
    } else {
        OpVerdict::SmoothOnCandidates
    };
    let mut dvs_verdict = OpVerdict::SmoothOnCandidates;
    for c in outputs {
        if !dvs_membership(space, c)?.is_member() {
            dvs_verdict = OpVerdict::Counterexample;
        }
    }
    if let Some(w) = &witness {
        debug_assert!(!hector_membership(space, w)?.is_member());
    }
    Ok(SmoothnessReport {
        operation,
        hector_verdict,
        dvs_verdict,
        witness,
        tested: outputs.to_vec(),
    })
}

fn random_poly(rng: &mut ChaCha8Rng, nvars: usize, degree: u32) -> Poly {
    let mut p = Poly::zero(nvars);
    for e in crate::algebra::TruncSeries::monomials(nvars, 0, degree) {
        if rng.gen_bool(0.5) {
            p.add_term(e, QuadNumber::from_int(rng.gen_range(-4..=4)));
        }
    }
    p
}

fn is_group(space: &Space) -> bool {
    match space.family() {
        Family::Euclidean(_) | Family::FineVector(_) | Family::IrrationalTorus(_) => true,
        Family::Product(fs) => fs.iter().all(is_group),
        _ => false,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TrivializationReport {
    pub space: String,
    pub fibre_dim: usize,
    pub battery: usize,
    /// Every left translation acts on tangent vectors by the identity matrix.
    pub translations_act_trivially: bool,
    /// `F(g, v) = (g, (L_g)_* v)` sends plots of `G x T_e(G)` to plots of `T(G)`.
    pub forward_preserves: bool,
    /// `F^{-1}` sends plots of `T(G)` to plots of `G x T_e(G)`.
    pub inverse_preserves: bool,
    pub hector_equals_dvs: bool,
    /// Lifts differing by a lattice constant give the same plot and the same
    /// trivialized candidate (torus factors only; vacuous otherwise).
    pub lifts_agree: bool,
}

impl TrivializationReport {
    pub fn holds(&self) -> bool {
        self.translations_act_trivially
            && self.forward_preserves
            && self.inverse_preserves
            && self.hector_equals_dvs
            && self.lifts_agree
    }
}

/// Verifies the trivialization `T(G) ≅ G x T_e(G)` on a battery of random plots.
pub fn group_trivialization(space: &Space) -> Result<TrivializationReport> {
    if !is_group(space) {
        return Err(Error::UnsupportedGroup(format!(
            "{space} is not one of the catalog groups"
        )));
    }
    let n = space.ambient_dim();
    let d = fibre_dim(space)?;
    let mut rng = ChaCha8Rng::seed_from_u64(0x7a11);
    let battery = 40;
    let mut report = TrivializationReport {
        space: space.to_string(),
        fibre_dim: d,
        battery,
        translations_act_trivially: true,
        forward_preserves: true,
        inverse_preserves: true,
        hector_equals_dvs: true,
        lifts_agree: true,
    };
    let x: Vec<Poly> = (0..n).map(|i| Poly::var(n, i)).collect();
    for _ in 0..battery {
        let src = rng.gen_range(1..=2);
        let base = PolyPlot::new(src, (0..n).map(|_| random_poly(&mut rng, src, 3)).collect())?;
        let v: Vec<Poly> = (0..d).map(|_| random_poly(&mut rng, src, 2)).collect();
        // Left translation by g(u) in ambient (lift) coordinates: x |-> g + x.
        let g = base.eval(&vec![QuadNumber::from_int(1); src])?;
        let translate: Vec<Poly> = x
            .iter()
            .zip(&g)
            .map(|(xi, gi)| xi + &Poly::constant(n, gi.clone()))
            .collect();
        let jet = Jet1::of_polys(&translate, &vec![QuadNumber::zero(); n])?;
        report.translations_act_trivially &= jet.linear.is_identity();
        let image = BundlePlotCandidate::new(base.clone(), jet.linear.apply_polys(&v)?);
        let hector = hector_membership(space, &image)?.is_member();
        let dvs = dvs_membership(space, &image)?.is_member();
        report.forward_preserves &= hector && dvs;
        report.hector_equals_dvs &= hector == dvs;
        // Going back: the base of a plot of T(G) is a plot of G and the fibre is
        // a polynomial map into T_e(G).
        let back = jet.linear.apply_polys(&image.fibre)?;
        report.inverse_preserves &=
            crate::space::plot_check(space, &image.base)?.is_member() && back == v;
        let mut shifted = base.clone();
        for (i, f) in space.factors().iter().enumerate() {
            if let Family::IrrationalTorus(theta) = f.family() {
                let at = space.factor_offsets()[i];
                let shift = Poly::constant(src, &QuadNumber::from_int(rng.gen_range(-3..=3)) + theta);
                shifted.components[at] = &shifted.components[at] + &shift;
            }
        }
        if shifted != base {
            let other = BundlePlotCandidate::new(shifted.clone(), v.clone());
            report.lifts_agree &= same_plot(space, &base, &shifted)?
                && hector_membership(space, &other)?.is_member() == hector;
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, Serialize)]
pub struct VandermondeCertificate {
    pub size: usize,
    pub nodes: Vec<QuadNumber>,
    pub rank: usize,
}

/// The vectors `(1, s, ..., s^(N-1))` for `N` distinct rationals `s`, with the
/// exact rank of the matrix they form.
pub fn vandermonde_certificate(size: usize) -> VandermondeCertificate {
    let nodes: Vec<QuadNumber> = (0..size)
        .map(|i| QuadNumber::from_frac(i as i64, 2).expect("nonzero denominator"))
        .collect();
    let rows = nodes
        .iter()
        .map(|s| (0..size as u32).map(|k| s.pow(k)).collect())
        .collect();
    let rank = Matrix::from_rows(size, rows).expect("square").rank();
    VandermondeCertificate { size, nodes, rank }
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum FineVerdict {
    Fine { reason: String },
    OutOfScope {
        reason: String,
        certificate: Option<VandermondeCertificate>,
    },
}

impl FineVerdict {
    pub fn is_fine(&self) -> bool {
        matches!(self, FineVerdict::Fine { .. })
    }
}

/// Whether the dvs diffeology on `T_x(X)` is the fine diffeology.
pub fn fine_check(space: &Space, point: &[QuadNumber]) -> Result<FineVerdict> {
    space.check_point(point)?;
    let fine = |r: &str| Ok(FineVerdict::Fine { reason: r.into() });
    if let Family::Product(fs) = space.family() {
        for (f, p) in fs.iter().zip(space.split(point)) {
            if let v @ FineVerdict::OutOfScope { .. } = fine_check(f, p)? {
                return Ok(v);
            }
        }
        return fine("a finite product of finite-dimensional fine spaces");
    }
    if let Family::Generated { n, k: 1 } = space.family() {
        if *n >= 2 {
            return Ok(FineVerdict::OutOfScope {
                reason: "the tangent space is infinite-dimensional; the certificate exhibits \
                         independent vectors of the kind that obstruct fineness"
                    .into(),
                certificate: Some(vandermonde_certificate(8)),
            });
        }
    }
    if internal_tangent(space, point)?.dim == 0 {
        return fine("the zero vector space carries only the fine diffeology");
    }
    match space.family() {
        Family::Euclidean(_) | Family::FineVector(_) => {
            fine("chart plots are injective on tangent directions")
        }
        Family::WedgeOfLines(_) => fine(
            "branch inclusions generate the diffeology and only constant maps compose with them \
             to a constant",
        ),
        Family::IrrationalTorus(_) => fine(
            "the quotient map generates the diffeology and its fibres are countable, so maps \
             into a fibre are locally constant",
        ),
        Family::AxesSub(_) => fine(
            "the inclusion into coordinate space induces a smooth linear bijection onto a fine space",
        ),
        Family::HalfLineSub | Family::OrbitQuotient(_) => {
            fine("away from the boundary the space is a manifold")
        }
        Family::LinesThroughOriginSub(d) if !space.is_singular_point(point) || d.len() <= 3 => {
            fine("the space is diffeomorphic near the point to lines in coordinate position")
        }
        _ => Ok(FineVerdict::OutOfScope {
            reason: format!("no generating set satisfying the fineness hypothesis is known for {space}"),
            certificate: None,
        }),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GammaCertificate {
    pub x_size: usize,
    pub n: usize,
    /// Sends the internal tangent basis of `(R^n)^X` to the coordinates
    /// `(component i, point x) -> i * x_size + x` of a map `X -> R^n`.
    pub matrix: Matrix,
    pub bijective: bool,
    pub permutation: bool,
    pub zero_section_to_zero: bool,
    pub battery: usize,
    pub membership_preserved: bool,
}

impl GammaCertificate {
    pub fn holds(&self) -> bool {
        self.bijective && self.zero_section_to_zero && self.membership_preserved
    }
}

/// The isomorphism `T(C^∞(X, R^n)) ≅ C^∞(X, T R^n)` for a discrete `X` with
/// `x_size` points, where `C^∞(X, R^n)` is the product of `x_size` copies of `R^n`.
pub fn gamma_finite_discrete(x_size: usize, n: usize) -> Result<GammaCertificate> {
    if x_size == 0 || n == 0 {
        return Err(Error::InvalidParameter("need at least one point and one dimension".into()));
    }
    let factors = (0..x_size)
        .map(|_| Space::euclidean(n))
        .collect::<Result<Vec<_>>>()?;
    let maps = if x_size == 1 {
        factors[0].clone()
    } else {
        Space::product(factors)?
    };
    let total = x_size * n;
    let reshuffle = |k: usize| (k % n) * x_size + k / n;
    let point: Vec<QuadNumber> = (0..total).map(|k| QuadNumber::from_int(k as i64 - 2)).collect();
    let t = internal_tangent(&maps, &point)?;
    let columns = t
        .basis_curves
        .iter()
        .map(|&c| {
            let velocity: Vec<QuadNumber> =
                t.curves[c].plot.components.iter().map(|p| p.linear_coeff(0)).collect();
            let mut col = vec![QuadNumber::zero(); total];
            for (k, v) in velocity.into_iter().enumerate() {
                col[reshuffle(k)] = v;
            }
            col
        })
        .collect();
    let matrix = Matrix::from_columns(total, columns)?;
    let bijective = matrix.rows() == matrix.cols() && matrix.rank() == total;

    let flat = Space::euclidean(total)?;
    let permute = |v: &[Poly]| -> Vec<Poly> {
        let mut out = v.to_vec();
        for (k, p) in v.iter().enumerate() {
            out[reshuffle(k)] = p.clone();
        }
        out
    };
    let mut rng = ChaCha8Rng::seed_from_u64(0x9a33);
    let battery = 30;
    let mut membership_preserved = true;
    let mut zero_section_to_zero = true;
    for _ in 0..battery {
        let src = rng.gen_range(1..=2);
        let base: Vec<Poly> = (0..total).map(|_| random_poly(&mut rng, src, 2)).collect();
        let fibre: Vec<Poly> = (0..total).map(|_| random_poly(&mut rng, src, 2)).collect();
        let c = BundlePlotCandidate::new(PolyPlot::new(src, base.clone())?, fibre.clone());
        let image = BundlePlotCandidate::new(PolyPlot::new(src, permute(&base))?, permute(&fibre));
        for which in [hector_membership, dvs_membership] {
            membership_preserved &= which(&maps, &c)?.is_member() == which(&flat, &image)?.is_member();
        }
        let zero = BundlePlotCandidate::zero_section(c.base.clone(), total);
        zero_section_to_zero &= permute(&zero.fibre).iter().all(Poly::is_zero);
    }
    Ok(GammaCertificate {
        x_size,
        n,
        permutation: matrix.is_permutation(),
        matrix,
        bijective,
        zero_section_to_zero,
        battery,
        membership_preserved,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Poly {
        Poly::var(1, 0)
    }

    fn at_origin(fibre: Vec<Poly>) -> BundlePlotCandidate {
        BundlePlotCandidate::new(
            PolyPlot::constant(1, &[QuadNumber::zero(), QuadNumber::zero()]),
            fibre,
        )
    }

    #[test]
    fn wedge_operations_fail_for_hector_only() {
        let w = Space::wedge(2).unwrap();
        let f = at_origin(vec![x(), Poly::zero(1)]);
        let g = at_origin(vec![Poly::zero(1), x()]);
        let reports = check_fibrewise_ops(&w, &f, &g).unwrap();
        for r in &reports {
            assert_eq!(r.hector_verdict, OpVerdict::Counterexample, "{:?}", r.operation);
            assert_eq!(r.dvs_verdict, OpVerdict::SmoothOnCandidates);
            let witness = r.witness.as_ref().unwrap();
            assert!(!hector_membership(&w, witness).unwrap().is_member());
        }
    }

    #[test]
    fn euclidean_operations_are_smooth() {
        let e = Space::euclidean(2).unwrap();
        let base = PolyPlot::curve(vec![x(), x().pow(2)]).unwrap();
        let f = BundlePlotCandidate::new(base.clone(), vec![x(), Poly::one(1)]);
        let g = BundlePlotCandidate::new(base, vec![x().pow(3), x()]);
        for r in check_fibrewise_ops(&e, &f, &g).unwrap() {
            assert_eq!(r.hector_verdict, OpVerdict::SmoothOnCandidates);
            assert_eq!(r.dvs_verdict, OpVerdict::SmoothOnCandidates);
        }
    }

    #[test]
    fn groups_trivialize() {
        for s in [
            Space::euclidean(2).unwrap(),
            Space::fine_vector(3).unwrap(),
            Space::irrational_torus(QuadNumber::sqrt(2)).unwrap(),
        ] {
            assert!(group_trivialization(&s).unwrap().holds(), "{s}");
        }
        assert!(matches!(
            group_trivialization(&Space::wedge(2).unwrap()),
            Err(Error::UnsupportedGroup(_))
        ));
    }

    #[test]
    fn fineness() {
        let w = Space::wedge(2).unwrap();
        assert!(fine_check(&w, &w.origin()).unwrap().is_fine());
        let t = Space::irrational_torus(QuadNumber::sqrt(2)).unwrap();
        assert!(fine_check(&t, &[QuadNumber::zero()]).unwrap().is_fine());
        let g = Space::generated(2, 1).unwrap();
        assert!(!fine_check(&g, &g.origin()).unwrap().is_fine());
        for size in [4, 8, 12] {
            assert_eq!(vandermonde_certificate(size).rank, size);
        }
    }

    #[test]
    fn gamma() {
        let one = gamma_finite_discrete(1, 3).unwrap();
        assert!(one.holds() && one.matrix.is_identity());
        let six = gamma_finite_discrete(3, 2).unwrap();
        assert!(six.holds() && six.permutation && !six.matrix.is_identity());
        assert_eq!((six.matrix.rows(), six.matrix.cols()), (6, 6));
    }
}
