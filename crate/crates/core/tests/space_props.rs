use diffeo_tangent::algebra::{Poly, QuadNumber};
use diffeo_tangent::dsl::{parse_space, render_space};
use diffeo_tangent::space::{plot_check, plot_check_with, Branch, PlotCertificate, Family, PointSet, PolyPlot, Space};
use proptest::prelude::*;

fn q(n: i64) -> QuadNumber {
    QuadNumber::from_int(n)
}

fn rational() -> impl Strategy<Value = QuadNumber> {
    (-6i64..=6, 1i64..=4).prop_map(|(a, d)| QuadNumber::from_frac(a, d).unwrap())
}

/// A univariate polynomial of degree at most 4.
fn poly1() -> impl Strategy<Value = Poly> {
    prop::collection::vec(rational(), 1..=5).prop_map(|c| Poly::univariate(&c))
}

fn vanishing_poly1() -> impl Strategy<Value = Poly> {
    poly1().prop_map(|p| &p - &Poly::constant(1, p.constant_term()))
}

fn leaf_space() -> impl Strategy<Value = Space> {
    prop_oneof![
        (1usize..=3).prop_map(|n| Space::euclidean(n).unwrap()),
        (2usize..=4).prop_map(|j| Space::wedge(j).unwrap()),
        (2usize..=4).prop_map(|j| Space::axes_sub(j).unwrap()),
        Just(Space::half_line()),
        (1usize..=3).prop_map(|n| Space::orbit_quotient(n).unwrap()),
        (1usize..=3).prop_map(|d| Space::fine_vector(d).unwrap()),
        (2usize..=3, 1usize..=2).prop_map(|(n, k)| Space::generated(n, k).unwrap()),
        (-3i64..=3, 1i64..=3).prop_map(|(a, b)| {
            let theta = &q(a) + &(&q(b) * &QuadNumber::sqrt(2));
            Space::irrational_torus(theta).unwrap()
        }),
        (1u32..=5).prop_map(|k| Space::new(Family::Discrete(PointSet::Finite(k))).unwrap()),
        (1usize..=2).prop_map(|n| Space::new(Family::Indiscrete(PointSet::Real(n))).unwrap()),
        Just(Space::new(Family::ContinuousLine).unwrap()),
        prop::collection::vec((rational(), rational()), 2..=4)
            .prop_filter_map("directions must be distinct lines", |ds| {
                Space::lines_sub(ds.into_iter().map(|(a, b)| [a, b]).collect()).ok()
            }),
    ]
}

fn any_space() -> impl Strategy<Value = Space> {
    prop_oneof![
        3 => leaf_space(),
        1 => prop::collection::vec(leaf_space(), 2..=3).prop_map(|fs| Space::product(fs).unwrap()),
    ]
}

/// A space with a plot known to be a member. Half-line plots come with the
/// polynomial they are the square of, which certifies nonnegativity after
/// precomposition with a multivariable map.
fn member_plot() -> impl Strategy<Value = (Space, PolyPlot, Option<Poly>)> {
    let plain = prop_oneof![
        (1usize..=3, prop::collection::vec(poly1(), 3)).prop_map(|(n, cs)| {
            (Space::euclidean(n).unwrap(), PolyPlot::curve(cs[..n].to_vec()).unwrap())
        }),
        (2usize..=4, 0usize..4, vanishing_poly1()).prop_map(|(j, i, c)| {
            let i = i % j;
            let comps = (0..j).map(|k| if k == i { c.clone() } else { Poly::zero(1) }).collect();
            (Space::wedge(j).unwrap(), PolyPlot::curve(comps).unwrap().with_branch(Branch::Line(i)))
        }),
        (2usize..=4, 0usize..4, poly1()).prop_map(|(j, i, c)| {
            let i = i % j;
            let comps = (0..j).map(|k| if k == i { c.clone() } else { Poly::zero(1) }).collect();
            (Space::axes_sub(j).unwrap(), PolyPlot::curve(comps).unwrap())
        }),
        (prop::collection::vec(poly1(), 2)).prop_map(|cs| {
            (Space::orbit_quotient(2).unwrap(), PolyPlot::curve(cs).unwrap())
        }),
        poly1().prop_map(|c| {
            (Space::irrational_torus(QuadNumber::sqrt(2)).unwrap(), PolyPlot::curve(vec![c]).unwrap())
        }),
        (0usize..3, vanishing_poly1()).prop_map(|(i, c)| {
            let three = diffeo_tangent::internal::three_lines_target();
            let d = three.line_direction(i).unwrap();
            let comps = d.iter().map(|x| c.scale(x)).collect();
            (three, PolyPlot::curve(comps).unwrap().with_branch(Branch::Line(i)))
        }),
    ];
    prop_oneof![
        6 => plain.prop_map(|(s, p)| (s, p, None)),
        1 => poly1().prop_map(|c| (Space::half_line(), PolyPlot::curve(vec![c.pow(2)]).unwrap(), Some(c))),
    ]
}

proptest! {
    #[test]
    fn constants_are_plots(s in any_space(), x in rational()) {
        // The origin with its first coordinate replaced, when that stays in the space.
        let mut point = s.origin();
        point[0] = x;
        if !s.contains_point(&point) {
            point = s.origin();
        }
        prop_assume!(s.contains_point(&point));
        for dim in 1..=2 {
            let w = plot_check(&s, &PolyPlot::constant(dim, &point));
            prop_assert!(matches!(w, Ok(ref w) if w.is_member()), "{} at {:?}: {:?}", s, point, w);
        }
    }

    #[test]
    fn precomposition_keeps_plots((s, p, root) in member_plot(), f in poly1(), g in poly1()) {
        prop_assert!(plot_check(&s, &p).unwrap().is_member(), "{} not a plot of {}", p, s);
        let x = Poly::var(2, 0);
        let y = Poly::var(2, 1);
        let inner = f.compose(&[&x + &y.pow(2)]).unwrap();
        let pulled = p.precompose(std::slice::from_ref(&inner)).unwrap();
        let cert = root.map(|r| PlotCertificate::SumOfSquares(vec![r.compose(&[inner]).unwrap()]));
        let w = plot_check_with(&s, &pulled, cert.as_ref()).unwrap();
        prop_assert!(w.is_member(), "{} not a plot of {}", pulled, s);
        let inner1 = g.compose(&[Poly::var(1, 0)]).unwrap();
        let pulled1 = p.precompose(&[inner1]).unwrap();
        prop_assert!(plot_check(&s, &pulled1).unwrap().is_member());
    }

    #[test]
    fn axes_members_have_disjoint_supports(cs in prop::collection::vec(vanishing_poly1(), 3), zero in prop::collection::vec(any::<bool>(), 3)) {
        let comps: Vec<Poly> = cs.into_iter().zip(zero).map(|(c, z)| if z { Poly::zero(1) } else { c }).collect();
        let s = Space::axes_sub(3).unwrap();
        let p = PolyPlot::curve(comps.clone()).unwrap();
        if plot_check(&s, &p).unwrap().is_member() {
            for i in 0..3 {
                for k in 0..i {
                    prop_assert!((&comps[i] * &comps[k]).is_zero());
                }
            }
        }
    }

    #[test]
    fn lines_on_the_axes_match_axes_sub(a in poly1(), b in poly1(), mode in 0u8..4) {
        let comps = match mode {
            0 => vec![a, Poly::zero(1)],
            1 => vec![Poly::zero(1), b],
            2 => vec![&a - &Poly::constant(1, a.constant_term()), &b - &Poly::constant(1, b.constant_term())],
            _ => vec![a, b],
        };
        let lines = Space::lines_sub(vec![[q(1), q(0)], [q(0), q(1)]]).unwrap();
        let axes = Space::axes_sub(2).unwrap();
        let p = PolyPlot::curve(comps).unwrap();
        prop_assert_eq!(
            plot_check(&lines, &p).unwrap().is_member(),
            plot_check(&axes, &p).unwrap().is_member()
        );
    }

    #[test]
    fn rendering_round_trips(s in any_space()) {
        let text = render_space(&s);
        let back = parse_space(&text).unwrap();
        prop_assert_eq!(&back, &s);
        prop_assert_eq!(render_space(&back), text);
    }
}
