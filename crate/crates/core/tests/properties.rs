use evs_core::families::{Hyperspace, RayProduct, SubspaceLattice};
use evs_core::linalg;
use evs_core::testing::is_member;
use evs_core::{Element, Evs, Field, Grid, Scalar};
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Scalar> {
    (-8i64..=8, 1i64..=4).prop_map(|(n, d)| Field::Rational.from_ratio(n, d))
}

fn nonneg() -> impl Strategy<Value = Scalar> {
    (0i64..=8, 1i64..=4).prop_map(|(n, d)| Field::Rational.from_ratio(n, d))
}

fn point_set() -> impl Strategy<Value = Element> {
    prop::collection::vec(rational(), 1..4).prop_map(|pts| Element::set(pts.into_iter().map(|p| vec![p]).collect()))
}

fn q_hyperspace() -> Hyperspace {
    Hyperspace { field: Field::Rational, dim: 1, bound: 3, with_theta: false, grid: Grid::default() }
}

proptest! {
    #[test]
    fn minkowski_subadditivity(a in point_set(), s in rational(), t in rational()) {
        let h = q_hyperspace();
        let lhs = h.scale(&s.add(&t), &a);
        let rhs = h.add(&h.scale(&s, &a), &h.scale(&t, &a));
        prop_assert!(h.leq(&lhs, &rhs));
    }

    #[test]
    fn hyperspace_rule_matches_translation_search(x in point_set(), z in point_set()) {
        let h = q_hyperspace();
        prop_assume!(x.as_set().len() >= 2);
        // Brute force: try every α, c mapping the first two points of x onto z.
        let xs = x.as_set();
        let mut brute = false;
        for zi in z.as_set() {
            for zj in z.as_set() {
                if zi == zj { continue; }
                let alpha = zj[0].sub(&zi[0]).div(&xs[1][0].sub(&xs[0][0])).unwrap();
                let c = zi[0].sub(&alpha.mul(&xs[0][0]));
                let img = Element::set(xs.iter().map(|p| vec![alpha.mul(&p[0]).add(&c)]).collect());
                brute |= h.leq(&img, &z);
            }
        }
        prop_assert_eq!(is_member(&h, &x, &z).unwrap(), brute);
    }

    #[test]
    fn ray_rule_is_support_inclusion(x in prop::collection::vec(nonneg(), 3), z in prop::collection::vec(nonneg(), 3)) {
        let r = RayProduct { n: 3, grid: Grid::default() };
        let (xe, ze) = (Element::Vector(x.clone()), Element::Vector(z.clone()));
        prop_assume!(!r.is_primitive(&xe));
        let support = x.iter().zip(&z).all(|(a, b)| a.is_zero() || !b.is_zero());
        prop_assert_eq!(is_member(&r, &xe, &ze).unwrap(), support);
    }

    #[test]
    fn lattice_sum_is_span_of_union(a in prop::collection::vec(prop::collection::vec(0u64..3, 3), 0..3),
                                    b in prop::collection::vec(prop::collection::vec(0u64..3, 3), 0..3)) {
        let f = Field::Gf { p: 3 };
        let rows = |v: &Vec<Vec<u64>>| v.iter().map(|r| r.iter().map(|&c| f.from_i64(c as i64)).collect::<Vec<Scalar>>()).collect::<Vec<_>>();
        let (ra, rb) = (rows(&a), rows(&b));
        let lat = SubspaceLattice { field: f, n: 3 };
        let sum = lat.add(&Element::span(f, &ra), &Element::span(f, &rb));
        let both: Vec<Vec<Scalar>> = ra.iter().chain(&rb).cloned().collect();
        prop_assert_eq!(&sum, &Element::span(f, &both));
        prop_assert!(lat.leq(&Element::span(f, &ra), &sum) && lat.leq(&Element::span(f, &rb), &sum));
        let Element::Subspace(basis) = &sum else { unreachable!() };
        prop_assert_eq!(basis.len(), linalg::rank(f, &both));
    }
}
