//! Fixtures shared by the benchmarks.

use tdlc_core::flatgeom::GenSet;
use tdlc_core::{Automorphism, Lattice, PMatrix, PScalar, Prime};

pub fn prime(p: u64) -> Prime {
    Prime::new(p).expect("prime")
}

/// A dense automorphism: upper triangle with entries of mixed valuation
/// times a unipotent lower triangle.
pub fn mixed(n: usize, p: Prime) -> Automorphism {
    let entry = |e: i64| if e == 0 { PScalar::one() } else { p.pow(e) };
    let upper = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| match j.cmp(&i) {
                    std::cmp::Ordering::Less => PScalar::zero(),
                    std::cmp::Ordering::Equal => entry((i % 2) as i64),
                    std::cmp::Ordering::Greater => entry(if (i + j) % 2 == 0 { -1 } else { 0 }),
                })
                .collect()
        })
        .collect();
    let lower = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| match j.cmp(&i) {
                    std::cmp::Ordering::Less => p.pow(1),
                    std::cmp::Ordering::Equal => PScalar::one(),
                    std::cmp::Ordering::Greater => PScalar::zero(),
                })
                .collect()
        })
        .collect();
    let m = PMatrix::from_rows(upper)
        .and_then(|u| u.try_mul(&PMatrix::from_rows(lower)?))
        .expect("square");
    Automorphism::new(m, p).expect("triangular factors are invertible")
}

pub fn skew_lattice(n: usize, p: Prime) -> Lattice {
    Lattice::standard(n, p).apply(mixed(n, p).matrix()).expect("invertible")
}

pub fn dihedral(p: Prime) -> GenSet {
    let s1 = PMatrix::from_i64_rows(&[&[0, -1], &[1, 0]]);
    let s2 = PMatrix::from_rows(vec![vec![PScalar::zero(), -p.pow(-1)], vec![p.pow(1), PScalar::zero()]]).expect("square");
    GenSet::from_matrices(p, vec![("s1", s1), ("s2", s2)]).expect("invertible")
}
