use std::collections::BTreeSet;

use num_bigint::{BigInt, Sign};
use num_traits::{Signed, Zero};
use proptest::prelude::*;

use relent::conjugacy::{apply_homeo, are_conjugate, conjugate_orbit};
use relent::homeo::HomeoPiece;
use relent::interval::ClosedInterval;
use relent::orbits::orbit_census;
use relent::relation::Affine;
use relent::{AmbientInterval, Homeomorphism, Relation, Scalar, Segment};

/// Fixed-point oracle: `floor`-ish of `x · 10^30` to within a few units,
/// from integer square roots only.
fn approx(x: &Scalar) -> BigInt {
    let m = BigInt::from(10u32).pow(30);
    let (p, r) = (x.rational_part(), x.irrational_part());
    let rat = p.numer() * &m / p.denom();
    if r.is_zero() {
        return rat;
    }
    let d = BigInt::from(x.discriminant());
    let root = (r.numer() * r.numer() * &m * &m * d).sqrt() / r.denom();
    rat + if r.numer().sign() == Sign::Minus { -root } else { root }
}

fn units(k: i64) -> BigInt {
    BigInt::from(k)
}

fn scalar_in(d: u32) -> impl Strategy<Value = Scalar> {
    (-60i64..=60, 1i64..=24, -60i64..=60, 1i64..=24).prop_map(move |(p, q, r, s)| Scalar::new(p, q, r, s, d))
}

fn pair() -> impl Strategy<Value = (Scalar, Scalar)> {
    prop_oneof![Just(2u32), Just(3), Just(5), Just(7)].prop_flat_map(|d| (scalar_in(d), scalar_in(d)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn arithmetic_matches_fixed_point_oracle((x, y) in pair()) {
        let (ax, ay) = (approx(&x), approx(&y));
        let m = BigInt::from(10u32).pow(30);
        prop_assert!((approx(&(&x + &y)) - (&ax + &ay)).abs() <= units(8));
        prop_assert!((approx(&(&x - &y)) - (&ax - &ay)).abs() <= units(8));
        // |x|, |y| < 200, so the product error stays far below 10^5 units
        prop_assert!((approx(&(&x * &y)) - &ax * &ay / &m).abs() <= units(100_000));
        if ay.abs() > &m / 1000 {
            let q = &x / &y;
            prop_assert!((approx(&(&q * &y)) - &ax).abs() <= units(8 * 1000));
            prop_assert_eq!(&q * &y, x.clone());
        }
        let diff = &ax - &ay;
        if diff.abs() > units(8) {
            prop_assert_eq!(x > y, diff.is_positive());
        }
        prop_assert_eq!(x == y, (&x - &y).is_zero());
        prop_assert_eq!(x.to_string().parse::<Scalar>().unwrap(), x);
    }
}

fn coord() -> impl Strategy<Value = Scalar> {
    (0i64..=8).prop_map(|k| Scalar::rational(k, 8))
}

fn segment() -> impl Strategy<Value = Segment> {
    (coord(), coord(), coord(), coord()).prop_map(|(x0, y0, x1, y1)| Segment::between(&(x0, y0), &(x1, y1)))
}

fn segments() -> impl Strategy<Value = Relation> {
    prop::collection::vec(segment(), 1..5).prop_map(|s| Relation::segments(AmbientInterval::unit(), s).unwrap())
}

fn point_set() -> impl Strategy<Value = BTreeSet<(i64, i64)>> {
    prop::collection::btree_set((0i64..4, 0i64..4), 0..8)
}

fn points_of(s: &BTreeSet<(i64, i64)>) -> Relation {
    let pts = s.iter().map(|&(x, y)| (Scalar::rational(x, 3), Scalar::rational(y, 3))).collect();
    Relation::points(AmbientInterval::unit(), pts).unwrap()
}

/// An increasing or decreasing two-piece homeomorphism of [0, 1] onto [lo, hi].
fn homeo() -> impl Strategy<Value = Homeomorphism> {
    (1i64..8, 1i64..8, -3i64..3, 1i64..4, any::<bool>()).prop_map(|(c, v, lo, w, up)| {
        let (c, v) = (Scalar::rational(c, 8), Scalar::rational(v, 8));
        let (lo, hi) = (Scalar::from(lo), Scalar::from(lo + w));
        let width = &hi - &lo;
        let mid = &lo + &(&width * &v);
        let (start, end) = if up { (lo.clone(), hi.clone()) } else { (hi.clone(), lo.clone()) };
        let line = |x0: &Scalar, y0: &Scalar, x1: &Scalar, y1: &Scalar| {
            let slope = &(y1 - y0) / &(x1 - x0);
            Affine::new(slope.clone(), y0 - &(&slope * x0))
        };
        let (zero, one) = (Scalar::zero(), Scalar::one());
        let mid_y = if up { mid } else { &(&lo + &hi) - &mid };
        let pieces = vec![
            HomeoPiece { dom: ClosedInterval::new(zero.clone(), c.clone()), map: line(&zero, &start, &c, &mid_y) },
            HomeoPiece { dom: ClosedInterval::new(c.clone(), one.clone()), map: line(&c, &mid_y, &one, &end) },
        ];
        Homeomorphism::new(AmbientInterval::unit(), AmbientInterval::new(lo, hi).unwrap(), pieces).unwrap()
    })
}

fn orbit_keys(g: &Relation, max_period: usize) -> BTreeSet<(usize, Vec<Scalar>)> {
    orbit_census(g, max_period)
        .unwrap()
        .orbits
        .into_iter()
        .map(|o| {
            let mut p = o.points;
            p.sort();
            (o.period, p)
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn inverse_is_an_involution(g in segments()) {
        let inv = g.inverse();
        prop_assert_eq!(&inv.inverse(), &g);
        for s in g.pieces().unwrap() {
            let ((x0, y0), (x1, y1)) = s.endpoints();
            prop_assert!(inv.contains(&y0, &x0).unwrap() && inv.contains(&y1, &x1).unwrap());
        }
    }

    #[test]
    fn subset_is_a_partial_order(a in point_set(), b in point_set(), c in point_set()) {
        let (ra, rb, rc) = (points_of(&a), points_of(&b), points_of(&c));
        prop_assert!(ra.subset_of(&ra).unwrap());
        prop_assert_eq!(ra.subset_of(&rb).unwrap(), a.is_subset(&b));
        if ra.subset_of(&rb).unwrap() && rb.subset_of(&ra).unwrap() {
            prop_assert_eq!(&ra, &rb);
        }
        if ra.subset_of(&rb).unwrap() && rb.subset_of(&rc).unwrap() {
            prop_assert!(ra.subset_of(&rc).unwrap());
        }
        prop_assert!(ra.subset_of(&ra.union(&rb).unwrap()).unwrap());
    }

    #[test]
    fn sub_pieces_are_subsets(g in segments(), k in 0usize..4, lo in 0i64..4, len in 0i64..4) {
        let pieces = g.pieces().unwrap();
        let p = &pieces[k % pieces.len()];
        let range = p.param_range();
        let w = &range.hi - &range.lo;
        let a = &range.lo + &(&w * &Scalar::rational(lo, 8));
        let b = &a + &(&w * &Scalar::rational(len, 8));
        let part = Relation::segments(AmbientInterval::unit(), vec![p.sub(&ClosedInterval::new(a, b))]).unwrap();
        prop_assert!(part.subset_of(&g).unwrap());
    }

    #[test]
    fn conjugacy_round_trips(g in segments(), phi in homeo()) {
        let h = apply_homeo(&g, &phi).unwrap();
        prop_assert!(are_conjugate(&g, &h, &phi));
        prop_assert_eq!(apply_homeo(&h, &phi.inverse()).unwrap(), g.clone());
        let id = Homeomorphism::identity(AmbientInterval::unit());
        prop_assert_eq!(apply_homeo(&g, &id).unwrap(), g);
    }

    #[test]
    fn finite_orbits_transfer(a in point_set(), phi in homeo()) {
        prop_assume!(!a.is_empty());
        let g = points_of(&a);
        let h = apply_homeo(&g, &phi).unwrap();
        let census = orbit_census(&g, 4).unwrap();
        let mapped: BTreeSet<(usize, Vec<Scalar>)> = census
            .orbits
            .iter()
            .map(|o| {
                let mut p = conjugate_orbit(o, &phi, &h).unwrap().points;
                p.sort();
                (o.period, p)
            })
            .collect();
        prop_assert_eq!(mapped, orbit_keys(&h, 4));
    }
}
