mod common;

use proptest::prelude::*;
use tdlc_core::building::{
    chamber_min_displacement, monomial_bounded_class, tree_ball, tree_ball_layers, tree_dist, tree_orbit_counts,
    tree_translation_length, MonomialElement, TreeVertex,
};
use tdlc_core::flatgeom::{growth_degree, GenSet};
use tdlc_core::{PMatrix, Prime};

use common::invertible;

fn small_prime() -> impl Strategy<Value = Prime> {
    prop_oneof![Just(2u64), Just(3u64)].prop_map(|p| Prime::new(p).unwrap())
}

fn vertex_triple() -> impl Strategy<Value = (TreeVertex, TreeVertex, TreeVertex, PMatrix)> {
    small_prime().prop_flat_map(|p| {
        let pool = tree_ball(&TreeVertex::standard(p), 3);
        (
            prop::sample::select(pool.clone()),
            prop::sample::select(pool.clone()),
            prop::sample::select(pool),
            invertible(p, 2),
        )
    })
}

fn monomial(n: usize) -> impl Strategy<Value = MonomialElement> {
    (
        prop::collection::vec(-4i64..=4, n),
        Just((0..n).collect::<Vec<usize>>()).prop_shuffle(),
    )
        .prop_map(|(a, perm)| MonomialElement::new(a, perm))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn tree_metric_and_isometry((u, v, w, g) in vertex_triple()) {
        let uv = tree_dist(&u, &v).unwrap();
        prop_assert_eq!(uv, tree_dist(&v, &u).unwrap());
        prop_assert_eq!(uv == 0, u == v);
        prop_assert!(tree_dist(&u, &w).unwrap() <= uv + tree_dist(&v, &w).unwrap());
        let (gu, gv) = (u.apply(&g).unwrap(), v.apply(&g).unwrap());
        prop_assert_eq!(tree_dist(&gu, &gv).unwrap(), uv);
    }

    #[test]
    fn apartment_metric(p in small_prime(), k in -6i64..=6, l in -6i64..=6) {
        let (a, b) = (TreeVertex::apartment(p, k), TreeVertex::apartment(p, l));
        prop_assert_eq!(tree_dist(&a, &b).unwrap(), k.abs_diff(l));
        prop_assert_eq!(a.apartment_coordinate(), Some(k));
    }

    #[test]
    fn only_translations_have_bounded_classes(m in (2usize..=4).prop_flat_map(monomial)) {
        let verdict = monomial_bounded_class(&m, 6);
        prop_assert_eq!(verdict.is_bounded(), m.is_translation());
        if m.is_translation() {
            // conjugating by a twisted element keeps the origin displacement
            let c = MonomialElement::new(vec![3; m.dim()], (0..m.dim()).rev().collect());
            prop_assert_eq!(c.compose(&m).compose(&c.inverse()).origin_displacement(), m.origin_displacement());
        }
    }
}

/// Breadth-first layers agree with the closed-form distance, and every
/// vertex has `p + 1` distinct neighbors.
#[test]
fn ball_layers_match_the_metric() {
    for p in [2u64, 3] {
        let p = Prime::new(p).unwrap();
        let center = TreeVertex::standard(p);
        let layers = tree_ball_layers(&center, 3);
        let pp = p.get() as usize;
        let sizes: Vec<usize> = layers.iter().map(Vec::len).collect();
        assert_eq!(sizes, vec![1, pp + 1, (pp + 1) * pp, (pp + 1) * pp * pp]);
        for (k, layer) in layers.iter().enumerate() {
            for v in layer {
                assert_eq!(tree_dist(&center, v).unwrap(), k as u64);
                let nb = v.neighbors();
                assert_eq!(nb.len(), pp + 1);
                for (i, w) in nb.iter().enumerate() {
                    assert_eq!(tree_dist(v, w).unwrap(), 1);
                    assert!(!nb[..i].contains(w));
                }
            }
        }
    }
}

fn monomial_group(p: Prime) -> GenSet {
    GenSet::from_matrices(
        p,
        vec![
            ("t1", PMatrix::diag_p_powers(p, &[1, 0])),
            ("t2", PMatrix::diag_p_powers(p, &[0, 1])),
            ("w", PMatrix::from_i64_rows(&[&[0, 1], &[1, 0]])),
        ],
    )
    .unwrap()
}

#[test]
fn monomial_orbit_is_a_quasi_line() {
    let p = Prime::new(2).unwrap();
    let counts = tree_orbit_counts(&monomial_group(p), 10).unwrap();
    assert_eq!(growth_degree(&counts).unwrap().degree, 1);
    // the orbit is the whole apartment, 2r + 1 vertices by radius r
    assert_eq!(counts[4], (4, 9));
}

#[test]
fn hyperbolic_translation() {
    let p = Prime::new(2).unwrap();
    let g = PMatrix::diag_p_powers(p, &[1, -1]);
    let t = tree_translation_length(&g, p, 4).unwrap();
    assert_eq!(t.length, 2);
    assert!(t.attained_on_apartment);
    let c = chamber_min_displacement(&g, p, 4).unwrap();
    assert!(c.apartment_attains);
}
