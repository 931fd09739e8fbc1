//! Single automorphisms of `Q_p^n`: displacement, the scale (by the Newton
//! polygon and by direct minimization over a ball), and minimizing lattices.

mod oracle;
mod tidy;

use std::fmt;

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{newton_slopes, parse_matrix, PMatrix, Prime};
use crate::lattice::{DistanceUnits, Lattice};

pub use oracle::{scale_bruteforce, ScaleOracle, ScaleWitness};
pub use tidy::{default_max_steps, is_minimizing, tidy_for_cyclic, TidyCertificate};

/// An invertible matrix acting on `Q_p^n`, with its inverse cached.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Automorphism {
    p: Prime,
    matrix: PMatrix,
    inverse: PMatrix,
}

impl Automorphism {
    pub fn new(matrix: PMatrix, p: Prime) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch {
                expected: matrix.rows(),
                found: matrix.cols(),
            });
        }
        let inverse = matrix.inverse()?;
        Ok(Automorphism { p, matrix, inverse })
    }

    pub fn parse(s: &str, p: Prime, dim: Option<usize>) -> Result<Self> {
        Automorphism::new(parse_matrix(s, p, dim)?, p)
    }

    pub fn identity(n: usize, p: Prime) -> Self {
        Automorphism {
            p,
            matrix: PMatrix::identity(n),
            inverse: PMatrix::identity(n),
        }
    }

    pub fn matrix(&self) -> &PMatrix {
        &self.matrix
    }

    pub fn inverse_matrix(&self) -> &PMatrix {
        &self.inverse
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn is_identity(&self) -> bool {
        self.matrix.is_identity()
    }

    pub fn inv(&self) -> Automorphism {
        Automorphism {
            p: self.p,
            matrix: self.inverse.clone(),
            inverse: self.matrix.clone(),
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Automorphism) -> Result<Automorphism> {
        if self.p != other.p {
            return Err(Error::PrimeMismatch(self.p.get(), other.p.get()));
        }
        Ok(Automorphism {
            p: self.p,
            matrix: self.matrix.try_mul(&other.matrix)?,
            inverse: other.inverse.try_mul(&self.inverse)?,
        })
    }

    pub fn pow(&self, k: i64) -> Automorphism {
        let m = self.matrix.pow(k.unsigned_abs() as u32);
        let i = self.inverse.pow(k.unsigned_abs() as u32);
        let (matrix, inverse) = if k >= 0 { (m, i) } else { (i, m) };
        Automorphism {
            p: self.p,
            matrix,
            inverse,
        }
    }

    /// `self ∘ other ∘ self^-1`.
    pub fn conjugate(&self, other: &Automorphism) -> Result<Automorphism> {
        self.compose(other)?.compose(&self.inv())
    }

    pub fn apply(&self, l: &Lattice) -> Result<Lattice> {
        if l.prime() != self.p {
            return Err(Error::PrimeMismatch(self.p.get(), l.prime().get()));
        }
        l.apply(&self.matrix)
    }

    /// Smallest `k` in `1..=bound` with `g^k = 1`.
    pub fn finite_order(&self, bound: u32) -> Option<u32> {
        let mut acc = self.matrix.clone();
        for k in 1..=bound {
            if acc.is_identity() {
                return Some(k);
            }
            acc = &acc * &self.matrix;
        }
        None
    }

    /// Valuation of the determinant.
    pub fn det_val(&self) -> i64 {
        self.matrix
            .det()
            .expect("square")
            .val(self.p)
            .finite()
            .expect("invertible")
    }
}

impl fmt::Display for Automorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.matrix)
    }
}

impl Serialize for Automorphism {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = (0..self.dim())
            .map(|i| self.matrix.row(i).iter().map(ToString::to_string).collect())
            .collect();
        rows.serialize(s)
    }
}

/// `s(g) = p^exponent`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ScaleValue {
    pub exponent: u64,
}

impl ScaleValue {
    pub const ONE: ScaleValue = ScaleValue { exponent: 0 };

    pub fn new(exponent: u64) -> Self {
        ScaleValue { exponent }
    }

    pub fn is_one(self) -> bool {
        self.exponent == 0
    }
}

impl fmt::Display for ScaleValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p^{}", self.exponent)
    }
}

/// `dist(L, gL)`.
pub fn displacement(g: &Automorphism, l: &Lattice) -> Result<DistanceUnits> {
    l.dist(&g.apply(l)?)
}

/// Exponent of `[gL : gL ∩ L]`.
pub fn forward_index(g: &Automorphism, l: &Lattice) -> Result<u64> {
    g.apply(l)?.index_over_meet(l)
}

/// Scale from the eigenvalue valuations: the sum of `-v` over eigenvalues of
/// negative valuation `v`, with multiplicity.
pub fn scale_newton(g: &Automorphism) -> ScaleValue {
    let coeffs = g.matrix.char_poly();
    let slopes = newton_slopes(&coeffs, g.p).expect("invertible matrix has nonzero constant term");
    let mut total = num_rational::Rational64::zero();
    for (v, mult) in slopes {
        if v.is_negative() {
            total -= v * mult as i64;
        }
    }
    assert!(total.is_integer(), "expanding valuations sum to {total}");
    ScaleValue::new(total.to_integer() as u64)
}

/// Largest `|v|` over eigenvalue valuations, rounded up.
pub fn max_abs_eigen_valuation(g: &Automorphism) -> u64 {
    let coeffs = g.matrix.char_poly();
    newton_slopes(&coeffs, g.p)
        .expect("invertible")
        .iter()
        .map(|(v, _)| v.abs().ceil().to_integer() as u64)
        .max()
        .unwrap_or(0)
}
