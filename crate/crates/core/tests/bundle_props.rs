use diffeo_tangent::algebra::{Poly, QuadNumber};
use diffeo_tangent::bundle::{
    dvs_membership, fibre_dim, hector_membership, membership, BundlePlotCandidate, Diffeology,
};
use diffeo_tangent::internal::three_lines_target;
use diffeo_tangent::space::{plot_check, Branch, Family, PolyPlot, Space};
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = QuadNumber> {
    (-5i64..=5, 1i64..=3).prop_map(|(a, d)| QuadNumber::from_frac(a, d).unwrap())
}

fn poly1() -> impl Strategy<Value = Poly> {
    prop::collection::vec(rational(), 1..=4).prop_map(|c| Poly::univariate(&c))
}

/// Random data from which a candidate over any supported space is assembled.
#[derive(Clone, Debug)]
struct Raw {
    base_mode: u8,
    line: usize,
    scale: QuadNumber,
    along: Poly,
    curve: Vec<Poly>,
    fibre: Vec<Poly>,
    support: Vec<bool>,
}

fn raw() -> impl Strategy<Value = Raw> {
    (
        0u8..3,
        0usize..3,
        rational(),
        poly1(),
        prop::collection::vec(poly1(), 3),
        prop::collection::vec(poly1(), 3),
        prop::collection::vec(any::<bool>(), 3),
    )
        .prop_map(|(base_mode, line, scale, along, curve, fibre, support)| Raw {
            base_mode,
            line,
            scale,
            along: &along - &Poly::constant(1, along.constant_term()),
            curve,
            fibre,
            support,
        })
}

fn build(space: &Space, r: &Raw) -> BundlePlotCandidate {
    match space.family() {
        Family::Product(fs) => {
            let parts: Vec<BundlePlotCandidate> = fs.iter().map(|f| build(f, r)).collect();
            let bases: Vec<PolyPlot> = parts.iter().map(|p| p.base.clone()).collect();
            let fibre = parts.iter().flat_map(|p| p.fibre.clone()).collect();
            BundlePlotCandidate::new(PolyPlot::pair(&bases).unwrap(), fibre)
        }
        _ => match space.line_count() {
            Some(j) => {
                let line = r.line % j;
                let d = space.line_direction(line).unwrap();
                let base = match r.base_mode {
                    0 => PolyPlot::constant(1, &space.origin()),
                    1 => {
                        let s = if r.scale.is_zero() { QuadNumber::one() } else { r.scale.clone() };
                        let p: Vec<QuadNumber> = d.iter().map(|x| x * &s).collect();
                        PolyPlot::constant(1, &p)
                    }
                    _ => PolyPlot::curve(d.iter().map(|x| r.along.scale(x)).collect())
                        .unwrap()
                        .with_branch(Branch::Line(line)),
                };
                let fibre = (0..j)
                    .map(|k| if r.support[k % 3] { r.fibre[k % 3].clone() } else { Poly::zero(1) })
                    .collect();
                BundlePlotCandidate::new(base, fibre)
            }
            None => {
                let n = space.ambient_dim();
                let base = PolyPlot::curve(r.curve[..n].to_vec()).unwrap();
                BundlePlotCandidate::new(base, r.fibre[..fibre_dim(space).unwrap()].to_vec())
            }
        },
    }
}

fn leaf() -> impl Strategy<Value = Space> {
    prop_oneof![
        (1usize..=3).prop_map(|n| Space::euclidean(n).unwrap()),
        (1usize..=2).prop_map(|d| Space::fine_vector(d).unwrap()),
        Just(Space::irrational_torus(QuadNumber::sqrt(2)).unwrap()),
        (2usize..=3).prop_map(|j| Space::wedge(j).unwrap()),
        (2usize..=3).prop_map(|j| Space::axes_sub(j).unwrap()),
        Just(three_lines_target()),
    ]
}

fn supported() -> impl Strategy<Value = Space> {
    prop_oneof![
        3 => leaf(),
        1 => (leaf(), leaf()).prop_map(|(a, b)| Space::product(vec![a, b]).unwrap()),
    ]
}

fn group() -> impl Strategy<Value = Space> {
    let g = prop_oneof![
        (1usize..=3).prop_map(|n| Space::euclidean(n).unwrap()),
        (1usize..=2).prop_map(|d| Space::fine_vector(d).unwrap()),
        Just(Space::irrational_torus(QuadNumber::sqrt(2)).unwrap()),
    ];
    prop_oneof![
        2 => g.clone(),
        1 => (g.clone(), g).prop_map(|(a, b)| Space::product(vec![a, b]).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn hector_members_are_dvs_members(s in supported(), r in raw()) {
        let c = build(&s, &r);
        if hector_membership(&s, &c).unwrap().is_member() {
            prop_assert!(dvs_membership(&s, &c).unwrap().is_member(), "{} over {}", c, s);
        }
    }

    #[test]
    fn dvs_members_are_closed_under_sums_and_scaling(s in supported(), r in raw(), fibre in prop::collection::vec(poly1(), 3), support in prop::collection::vec(any::<bool>(), 3), scalar in poly1()) {
        let f = build(&s, &r);
        let g = build(&s, &Raw { fibre, support, ..r.clone() });
        prop_assume!(dvs_membership(&s, &f).unwrap().is_member());
        prop_assume!(dvs_membership(&s, &g).unwrap().is_member());
        let sum = f.sum(&g).unwrap();
        prop_assert!(dvs_membership(&s, &sum).unwrap().is_member(), "{} over {}", sum, s);
        let scaled = f.scaled(&scalar).unwrap();
        prop_assert!(dvs_membership(&s, &scaled).unwrap().is_member(), "{} over {}", scaled, s);
    }

    #[test]
    fn members_project_to_plots(s in supported(), r in raw()) {
        let c = build(&s, &r);
        for which in [Diffeology::Hector, Diffeology::Dvs] {
            if membership(&s, &c, which).unwrap().is_member() {
                prop_assert!(plot_check(&s, &c.base).unwrap().is_member());
            }
        }
    }

    #[test]
    fn zero_sections_are_members(s in supported(), r in raw()) {
        let base = build(&s, &r).base;
        prop_assume!(plot_check(&s, &base).unwrap().is_member());
        let z = BundlePlotCandidate::zero_section(base, fibre_dim(&s).unwrap());
        prop_assert!(hector_membership(&s, &z).unwrap().is_member());
        prop_assert!(dvs_membership(&s, &z).unwrap().is_member());
    }

    #[test]
    fn products_are_checked_factorwise(a in leaf(), b in leaf(), r in raw(), r2 in raw()) {
        let p = Space::product(vec![a.clone(), b.clone()]).unwrap();
        let ca = build(&a, &r);
        let cb = build(&b, &r2);
        let base = PolyPlot::pair(&[ca.base.clone(), cb.base.clone()]).unwrap();
        let c = BundlePlotCandidate::new(base, ca.fibre.iter().chain(&cb.fibre).cloned().collect());
        for which in [Diffeology::Hector, Diffeology::Dvs] {
            let whole = membership(&p, &c, which).unwrap().is_member();
            let parts = membership(&a, &c.factor(&p, 0).unwrap(), which).unwrap().is_member()
                && membership(&b, &c.factor(&p, 1).unwrap(), which).unwrap().is_member();
            prop_assert_eq!(whole, parts, "{} over {}", c, p);
        }
    }

    #[test]
    fn groups_have_one_bundle_diffeology(s in group(), r in raw()) {
        let c = build(&s, &r);
        prop_assert_eq!(
            hector_membership(&s, &c).unwrap().is_member(),
            dvs_membership(&s, &c).unwrap().is_member()
        );
    }
}
