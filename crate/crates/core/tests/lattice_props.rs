mod common;

use proptest::prelude::*;
use tdlc_core::lattice::ball;
use tdlc_core::{Lattice, Prime};

use common::{dim_and_prime, invertible, lattice};

fn det_val(l: &Lattice) -> i64 {
    l.basis().det().unwrap().val(l.prime()).finite().unwrap()
}

fn triple() -> impl Strategy<Value = (Lattice, Lattice, Lattice)> {
    dim_and_prime().prop_flat_map(|(n, p)| (lattice(p, n), lattice(p, n), lattice(p, n)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn metric_axioms((a, b, c) in triple()) {
        let ab = a.dist(&b).unwrap().units();
        prop_assert_eq!(ab, b.dist(&a).unwrap().units());
        prop_assert_eq!(ab == 0, a == b);
        prop_assert_eq!(a.dist(&a).unwrap().units(), 0);
        let bc = b.dist(&c).unwrap().units();
        let ac = a.dist(&c).unwrap().units();
        prop_assert!(ac <= ab + bc, "{} > {} + {}", ac, ab, bc);
    }

    #[test]
    fn index_identity((a, b, _) in triple()) {
        let meet = a.meet(&b).unwrap();
        // index of a sublattice = valuation of the determinant ratio
        let ia = det_val(&meet) - det_val(&a);
        let ib = det_val(&meet) - det_val(&b);
        prop_assert_eq!(a.index_over_meet(&b).unwrap() as i64, ia);
        prop_assert_eq!(b.index_over_meet(&a).unwrap() as i64, ib);
        prop_assert_eq!(a.dist(&b).unwrap().units() as i64, ia + ib);
        let d = a.rel_exponents(&b).unwrap();
        let split: i64 = d.iter().map(|x| x.max(&0)).sum::<i64>() + d.iter().map(|x| (-x).max(0)).sum::<i64>();
        prop_assert_eq!(split, ia + ib);
    }

    #[test]
    fn lattice_laws((a, b, c) in triple()) {
        let meet = a.meet(&b).unwrap();
        let join = a.join(&b).unwrap();
        prop_assert_eq!(&meet, &b.meet(&a).unwrap());
        prop_assert_eq!(&join, &b.join(&a).unwrap());
        prop_assert_eq!(meet.meet(&c).unwrap(), a.meet(&b.meet(&c).unwrap()).unwrap());
        prop_assert_eq!(join.join(&c).unwrap(), a.join(&b.join(&c).unwrap()).unwrap());
        prop_assert_eq!(a.meet(&join).unwrap(), a.clone());
        prop_assert_eq!(a.join(&meet).unwrap(), a.clone());
        prop_assert!(a.contains(&meet).unwrap() && b.contains(&meet).unwrap());
        prop_assert!(join.contains(&a).unwrap() && join.contains(&b).unwrap());
        prop_assert!(a.rel_exponents(&meet).unwrap().iter().all(|&d| d >= 0));
        prop_assert!(join.rel_exponents(&a).unwrap().iter().all(|&d| d >= 0));
    }

    #[test]
    fn action_is_isometric(
        (a, b, g) in dim_and_prime().prop_flat_map(|(n, p)| (lattice(p, n), lattice(p, n), invertible(p, n)))
    ) {
        let (ga, gb) = (a.apply(&g).unwrap(), b.apply(&g).unwrap());
        prop_assert_eq!(a.dist(&b).unwrap(), ga.dist(&gb).unwrap());
    }

    #[test]
    fn dual_is_an_involution((a, b, _) in triple()) {
        prop_assert_eq!(a.dual().dual(), a.clone());
        prop_assert_eq!(a.dist(&b).unwrap(), a.dual().dist(&b.dual()).unwrap());
    }

    #[test]
    fn neighbors_are_at_distance_one((a, _, _) in triple()) {
        let nb = a.neighbors();
        let n = a.dim() as u32;
        let p = a.prime().get();
        prop_assert_eq!(nb.len() as u64, 2 * (p.pow(n) - 1) / (p - 1));
        for m in &nb {
            prop_assert_eq!(a.dist(m).unwrap().units(), 1);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn ball_size_is_center_independent(
        (p, center) in prop_oneof![Just(2u64), Just(3u64)]
            .prop_map(|p| Prime::new(p).unwrap())
            .prop_flat_map(|p| (Just(p), lattice(p, 2))),
        r in 0u64..=3,
    ) {
        let here = ball(&center, r);
        let there = ball(&Lattice::standard(2, p), r);
        prop_assert_eq!(here.len(), there.len());
        prop_assert!(here.iter().all(|m| center.dist(m).unwrap().units() <= r));
    }
}

/// `1 + 2(p^n - 1)/(p - 1)` for `n = 2`.
#[test]
fn unit_balls_in_the_plane() {
    for (p, want) in [(2u64, 7usize), (3, 9), (5, 13)] {
        let p = Prime::new(p).unwrap();
        assert_eq!(ball(&Lattice::standard(2, p), 1).len(), want);
    }
}

#[test]
fn json_round_trip() {
    let p = Prime::new(3).unwrap();
    let l = Lattice::span(&tdlc_core::PMatrix::from_i64_rows(&[&[1, 1], &[0, 3]]), p).unwrap();
    let back = Lattice::from_json(&l.to_json()).unwrap();
    assert_eq!(back, l);
    let text = serde_json::to_string(&l).unwrap();
    assert_eq!(serde_json::from_str::<Lattice>(&text).unwrap(), l);
}
