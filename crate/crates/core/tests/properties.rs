use proptest::prelude::*;

use singcurve_core::field::{Field, Fq};
use singcurve_core::invariants::{intersect_param, intersect_tree, Intersection};
use singcurve_core::milnor::{local_intersection, milnor_number};
use singcurve_core::poly::{reduced_check, BiPoly};
use singcurve_core::tree::build_tree;

type Terms = Vec<((u32, u32), i64)>;

fn prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3, 5, 7, 13])
}

/// A polynomial through the origin with a handful of low-degree terms.
fn curve() -> impl Strategy<Value = Terms> {
    prop::collection::vec(((0u32..6, 0u32..6), -4i64..5), 1..6)
        .prop_map(|ts| ts.into_iter().filter(|((i, j), c)| i + j > 0 && *c != 0).collect())
}

/// `x^a + s·y^b + higher terms` with `gcd(a, b) = 1`: a single branch.
fn branch() -> impl Strategy<Value = Terms> {
    (1u32..4, 1u32..7, prop::bool::ANY, prop::collection::vec(((0u32..6, 0u32..6), 1i64..4), 0..3))
        .prop_filter("coprime", |(a, b, _, _)| num_integer::gcd(*a, *b) == 1)
        .prop_map(|(a, b, neg, extra)| {
            let mut f = vec![((a, 0), 1), ((0, b), if neg { -1 } else { 1 })];
            f.extend(extra.into_iter().filter(|((i, j), _)| b * i + a * j > a * b));
            f
        })
}

fn poly(t: &Terms, k: &Fq) -> BiPoly<<Fq as Field>::Elem> {
    BiPoly::from_terms(k, t.iter().map(|&(e, c)| (e, k.from_i64(c))))
}

fn add(a: Intersection, b: Intersection) -> Intersection {
    match (a, b) {
        (Intersection::Finite(x), Intersection::Finite(y)) => Intersection::Finite(x + y),
        _ => Intersection::Infinite,
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, ..ProptestConfig::default() })]

    #[test]
    fn intersection_axioms(p in prime(), f in curve(), g in curve(), h in curve(), q in curve()) {
        let k = Fq::prime(p).unwrap();
        let (f, g, h, q) = (poly(&f, &k), poly(&g, &k), poly(&h, &k), poly(&q, &k));
        let i = |a: &BiPoly<_>, b: &BiPoly<_>| local_intersection(a, b, &k);
        prop_assert_eq!(i(&f, &g), i(&g, &f));
        prop_assert_eq!(i(&f, &g.mul(&h, &k)), add(i(&f, &g), i(&f, &h)));
        prop_assert_eq!(i(&f, &g.add(&f.mul(&q, &k), &k)), i(&f, &g));
        let x = BiPoly::x(&k);
        let y = BiPoly::y(&k);
        prop_assert_eq!(i(&x, &y), Intersection::Finite(1));
        // i(f, y) = ord_x f(x, 0)
        let want = f.restrict_y0(&k).order(&k).map_or(Intersection::Infinite, |o| Intersection::Finite(o as u128));
        prop_assert_eq!(i(&f, &y), want);
    }

    #[test]
    fn deligne_inequality(p in prime(), f in curve()) {
        let k = Fq::prime(p).unwrap();
        let f = poly(&f, &k);
        prop_assume!(!f.is_zero() && reduced_check(&f, &k).reduced);
        let m = build_tree(&f, &k).unwrap().tree.multiplicity();
        if let Intersection::Finite(mu) = milnor_number(&f, None, &k).unwrap() {
            prop_assert!(mu as i64 >= 1 - m, "mu = {} < 1 - M = {}", mu, 1 - m);
        }
    }

    #[test]
    fn three_ways_to_intersect_branches(p in prime(), f in branch(), g in branch()) {
        let k = Fq::prime(p).unwrap();
        let (f, g) = (poly(&f, &k), poly(&g, &k));
        let local = local_intersection(&f, &g, &k);
        let Intersection::Finite(n) = local else { return Ok(()) };
        prop_assert_eq!(intersect_tree(&f, &g, &k).unwrap(), local);
        prop_assert_eq!(intersect_param(&f, &g, 16, &k).unwrap() as u128, n);
    }
}
