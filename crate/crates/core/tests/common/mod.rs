#![allow(dead_code)]

use proptest::prelude::*;
use tdlc_core::{Automorphism, Lattice, PMatrix, PScalar, Prime};

pub fn prime_strategy() -> impl Strategy<Value = Prime> {
    prop_oneof![Just(2u64), Just(3u64), Just(5u64)].prop_map(|p| Prime::new(p).unwrap())
}

/// One of `0, ±1, ±p, ±p^-1`.
pub fn entry(p: Prime, code: u8) -> PScalar {
    match code % 7 {
        0 => PScalar::zero(),
        1 => PScalar::one(),
        2 => -PScalar::one(),
        3 => p.pow(1),
        4 => -p.pow(1),
        5 => p.pow(-1),
        _ => -p.pow(-1),
    }
}

pub fn matrix_from_codes(p: Prime, n: usize, codes: &[u8]) -> PMatrix {
    let rows = (0..n)
        .map(|i| (0..n).map(|j| entry(p, codes[i * n + j])).collect())
        .collect();
    PMatrix::from_rows(rows).unwrap()
}

/// Invertible `n x n` matrix with entries in `0, ±1, ±p, ±p^-1`.
pub fn invertible(p: Prime, n: usize) -> impl Strategy<Value = PMatrix> {
    prop::collection::vec(0u8..7, n * n)
        .prop_map(move |codes| matrix_from_codes(p, n, &codes))
        .prop_filter("singular", |m| m.det().is_ok_and(|d| !d.is_zero()))
}

pub fn automorphism(p: Prime, n: usize) -> impl Strategy<Value = Automorphism> {
    invertible(p, n).prop_map(move |m| Automorphism::new(m, p).unwrap())
}

/// A lattice spanned by the columns of a random invertible matrix.
pub fn lattice(p: Prime, n: usize) -> impl Strategy<Value = Lattice> {
    invertible(p, n).prop_map(move |m| Lattice::canonicalize(&m, p).unwrap())
}

pub fn dim_and_prime() -> impl Strategy<Value = (usize, Prime)> {
    (2usize..=3, prime_strategy())
}
