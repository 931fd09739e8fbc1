mod common;

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tdlc_core::autoscale::{
    default_max_steps, displacement, forward_index, is_minimizing, scale_newton, tidy_for_cyclic, ScaleOracle,
};
use tdlc_core::lattice::ball;
use tdlc_core::{Automorphism, Lattice, Prime};

use common::{automorphism, dim_and_prime, matrix_from_codes};

/// Radius-2 balls around the standard lattice, built once per `(n, p)`.
fn pool(n: usize, p: Prime) -> Vec<Lattice> {
    static POOLS: OnceLock<Mutex<HashMap<(usize, u64), Vec<Lattice>>>> = OnceLock::new();
    let mut pools = POOLS.get_or_init(Default::default).lock().unwrap();
    pools
        .entry((n, p.get()))
        .or_insert_with(|| ball(&Lattice::standard(n, p), 2))
        .clone()
}

/// An automorphism together with a lattice from the radius-2 ball.
fn g_and_l() -> impl Strategy<Value = (Automorphism, Lattice)> {
    dim_and_prime().prop_flat_map(|(n, p)| {
        (automorphism(p, n), prop::sample::select(pool(n, p)))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn displacement_is_bounded_below_by_the_scales((g, l) in g_and_l()) {
        let s = scale_newton(&g).exponent + scale_newton(&g.inv()).exponent;
        let d = displacement(&g, &l).unwrap().units();
        prop_assert!(d >= s);
        // the definition, checked directly: both directions attain their scale
        let attains = forward_index(&g, &l).unwrap() == scale_newton(&g).exponent
            && forward_index(&g.inv(), &l).unwrap() == scale_newton(&g.inv()).exponent;
        prop_assert_eq!(d == s, attains);
        prop_assert_eq!(is_minimizing(&g, &l).unwrap(), attains);
    }

    #[test]
    fn forward_index_never_beats_the_scale((g, l) in g_and_l()) {
        prop_assert!(forward_index(&g, &l).unwrap() >= scale_newton(&g).exponent);
    }

    #[test]
    fn displacement_is_a_cocycle_bound(
        (g, h, l) in dim_and_prime().prop_flat_map(|(n, p)| {
            (automorphism(p, n), automorphism(p, n), prop::sample::select(pool(n, p)))
        })
    ) {
        let gh = g.compose(&h).unwrap();
        let lhs = displacement(&gh, &l).unwrap().units();
        let rhs = displacement(&g, &l).unwrap().units() + displacement(&h, &l).unwrap().units();
        prop_assert!(lhs <= rhs);
        prop_assert_eq!(displacement(&g.inv(), &l).unwrap(), displacement(&g, &l).unwrap());
    }

    #[test]
    fn scale_of_powers_is_linear(g in dim_and_prime().prop_flat_map(|(n, p)| automorphism(p, n)), k in 1i64..=4) {
        prop_assert_eq!(scale_newton(&g.pow(k)).exponent, k as u64 * scale_newton(&g).exponent);
    }

    #[test]
    fn scales_determine_the_determinant(g in dim_and_prime().prop_flat_map(|(n, p)| automorphism(p, n))) {
        let diff = scale_newton(&g).exponent as i64 - scale_newton(&g.inv()).exponent as i64;
        prop_assert_eq!(diff, -g.det_val());
    }

    #[test]
    fn certified_tidy_lattices_minimize(g in dim_and_prime().prop_flat_map(|(n, p)| automorphism(p, n))) {
        let cert = tidy_for_cyclic(&g, default_max_steps(&g)).unwrap();
        prop_assert_eq!(cert.fwd_index_exp, forward_index(&g, &cert.lattice).unwrap());
        prop_assert_eq!(cert.bwd_index_exp, forward_index(&g.inv(), &cert.lattice).unwrap());
        prop_assert_eq!(cert.certified, is_minimizing(&g, &cert.lattice).unwrap());
        if cert.certified {
            let s = scale_newton(&g).exponent + scale_newton(&g.inv()).exponent;
            prop_assert_eq!(displacement(&g, &cert.lattice).unwrap().units(), s);
        }
    }
}

/// Smaller cousin of the acceptance run: radius 3, a fixed seed.
#[test]
fn newton_scale_matches_the_ball_minimum() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for n in [2usize, 3] {
        for p in [2u64, 3, 5] {
            let p = Prime::new(p).unwrap();
            let oracle = ScaleOracle::new(n, p, 3);
            let mut done = 0;
            while done < 20 {
                let codes: Vec<u8> = (0..n * n).map(|_| rng.gen_range(0..7)).collect();
                let m = matrix_from_codes(p, n, &codes);
                let Ok(g) = Automorphism::new(m, p) else { continue };
                let witness = oracle.scale(&g).unwrap();
                assert_eq!(witness.scale, scale_newton(&g), "n={n} p={p} g={g}");
                assert_eq!(forward_index(&g, &witness.lattice).unwrap(), witness.scale.exponent);
                done += 1;
            }
        }
    }
}
