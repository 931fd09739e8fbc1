mod common;

use num_rational::Rational64;
use proptest::prelude::*;
use tdlc_core::exactnum::{echelon_localized, is_local_unit_matrix, newton_slopes, smith_exponents};
use tdlc_core::{PMatrix, PScalar, Prime, Valuation};

use common::{invertible, prime_strategy};

fn nonzero(p: Prime) -> impl Strategy<Value = PScalar> {
    (prop_oneof![-50i64..=-1, 1i64..=50], 1i64..=30, -3i64..=3)
        .prop_map(move |(a, b, k)| PScalar::from_ratio(a, b) * p.pow(k))
}

/// Integer matrices whose determinant is prime to `p`.
fn local_unit(p: Prime, n: usize) -> impl Strategy<Value = PMatrix> {
    prop::collection::vec(-3i64..=3, n * n)
        .prop_map(move |v| {
            let rows: Vec<&[i64]> = v.chunks(n).collect();
            PMatrix::from_i64_rows(&rows)
        })
        .prop_filter("not a local unit", move |m| is_local_unit_matrix(m, p))
}

fn poly_mul(a: &[PScalar], b: &[PScalar]) -> Vec<PScalar> {
    let mut out = vec![PScalar::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += &(x * y);
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn valuation_laws((p, x, y) in prime_strategy().prop_flat_map(|p| (Just(p), nonzero(p), nonzero(p)))) {
        let (vx, vy) = (x.val(p).finite().unwrap(), y.val(p).finite().unwrap());
        prop_assert_eq!((&x * &y).val(p), Valuation::Finite(vx + vy));
        let s = &x + &y;
        if s.is_zero() {
            prop_assert_eq!(vx, vy);
        } else if vx != vy {
            prop_assert_eq!(s.val(p), Valuation::Finite(vx.min(vy)));
        } else {
            prop_assert!(s.val(p) >= Valuation::Finite(vx));
        }
    }

    #[test]
    fn echelon_is_idempotent((p, m) in prime_strategy().prop_flat_map(|p| (Just(p), invertible(p, 3)))) {
        let (t, u) = echelon_localized(&m, p).unwrap();
        prop_assert_eq!(&(&m * &u), &t);
        prop_assert!(is_local_unit_matrix(&u, p));
        let (t2, _) = echelon_localized(&t, p).unwrap();
        prop_assert_eq!(t2, t);
    }

    #[test]
    fn echelon_ignores_change_of_basis(
        (p, m, u) in prime_strategy().prop_flat_map(|p| (Just(p), invertible(p, 3), local_unit(p, 3)))
    ) {
        let (t, _) = echelon_localized(&m, p).unwrap();
        let (t2, _) = echelon_localized(&(&m * &u), p).unwrap();
        prop_assert_eq!(t, t2);
    }

    #[test]
    fn smith_exponents_are_invariant(
        (p, m, a, b) in prime_strategy()
            .prop_flat_map(|p| (Just(p), invertible(p, 3), local_unit(p, 3), local_unit(p, 3)))
    ) {
        let d = smith_exponents(&m, p).unwrap();
        prop_assert_eq!(smith_exponents(&(&(&a * &m) * &b), p).unwrap(), d.clone());
        let det_val = m.det().unwrap().val(p).finite().unwrap();
        prop_assert_eq!(d.iter().sum::<i64>(), det_val);
    }

    #[test]
    fn newton_recovers_linear_factors(
        p in prime_strategy(),
        exps in prop::collection::vec(-3i64..=3, 1..=5),
        signs in prop::collection::vec(any::<bool>(), 5),
    ) {
        let mut poly = vec![PScalar::one()];
        for (e, s) in exps.iter().zip(&signs) {
            let root = if *s { p.pow(*e) } else { -p.pow(*e) };
            poly = poly_mul(&poly, &[-root, PScalar::one()]);
        }
        let mut got: Vec<i64> = newton_slopes(&poly, p)
            .unwrap()
            .into_iter()
            .flat_map(|(v, len)| {
                assert_eq!(*v.denom(), 1, "non-integral slope {v}");
                std::iter::repeat_n(*v.numer(), len)
            })
            .collect();
        let mut want = exps.clone();
        got.sort_unstable();
        want.sort_unstable();
        prop_assert_eq!(got, want);
    }
}

#[test]
fn newton_cubic_from_diagonal() {
    let p = Prime::new(2).unwrap();
    let coeffs = PMatrix::diag_p_powers(p, &[2, 1, 0]).char_poly();
    let r = Rational64::from_integer;
    assert_eq!(newton_slopes(&coeffs, p).unwrap(), vec![(r(2), 1), (r(1), 1), (r(0), 1)]);
}
