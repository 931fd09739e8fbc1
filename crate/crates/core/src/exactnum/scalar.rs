use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A rational prime, the residue characteristic of every lattice and
/// automorphism in this crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Self> {
        if p < 2 || (2..).take_while(|d| d * d <= p).any(|d| p.is_multiple_of(d)) {
            return Err(Error::NotPrime(p));
        }
        Ok(Prime(p))
    }

    pub fn get(self) -> u64 {
        self.0
    }

    pub fn big(self) -> BigInt {
        BigInt::from(self.0)
    }

    /// `p^k` as an exact scalar; `k` may be negative.
    pub fn pow(self, k: i64) -> PScalar {
        let base = num_traits::pow(self.big(), k.unsigned_abs() as usize);
        if k >= 0 {
            PScalar::from(base)
        } else {
            PScalar(BigRational::new(BigInt::one(), base))
        }
    }
}

impl TryFrom<u64> for Prime {
    type Error = Error;
    fn try_from(p: u64) -> Result<Self> {
        Prime::new(p)
    }
}

impl From<Prime> for u64 {
    fn from(p: Prime) -> u64 {
        p.0
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// p-adic valuation. Zero gets its own variant so that it can never leak into
/// integer arithmetic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        self == Valuation::Infinite
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
            (Valuation::Finite(_), Valuation::Infinite) => Ordering::Less,
            (Valuation::Infinite, Valuation::Finite(_)) => Ordering::Greater,
            (Valuation::Infinite, Valuation::Infinite) => Ordering::Equal,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => write!(f, "+inf"),
        }
    }
}

/// Exponent of `p` in a nonzero integer.
pub(crate) fn int_val(n: &BigInt, p: &BigInt) -> i64 {
    debug_assert!(!n.is_zero());
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// An exact rational scalar, viewed inside `Q_p`.
///
/// Every matrix read from user input has entries in `Z[1/p]`, and every
/// canonical lattice basis stays there. Inverses of such matrices can pick up
/// denominators prime to `p`, so the underlying field is all of `Q`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PScalar(pub(crate) BigRational);

impl PScalar {
    pub fn zero() -> Self {
        PScalar(BigRational::zero())
    }

    pub fn one() -> Self {
        PScalar(BigRational::one())
    }

    pub fn from_ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Self {
        PScalar(BigRational::new(num.into(), den.into()))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn val(&self, p: Prime) -> Valuation {
        if self.is_zero() {
            return Valuation::Infinite;
        }
        let pb = p.big();
        Valuation::Finite(int_val(self.0.numer(), &pb) - int_val(self.0.denom(), &pb))
    }

    /// True when the value lies in `Z[1/p]`.
    pub fn is_p_rational(&self, p: Prime) -> bool {
        let mut d = self.0.denom().clone();
        let pb = p.big();
        while (&d % &pb).is_zero() {
            d /= &pb;
        }
        d.is_one()
    }

    /// Splits `x = p^v * w` with `w` a `p`-adic unit. Panics on zero.
    pub fn unit_part(&self, p: Prime) -> (i64, PScalar) {
        let v = self.val(p).finite().expect("unit_part of zero");
        (v, self * &p.pow(-v))
    }

    pub fn inv(&self) -> Option<PScalar> {
        (!self.is_zero()).then(|| PScalar(self.0.recip()))
    }

    pub fn abs(&self) -> PScalar {
        PScalar(self.0.abs())
    }

    pub fn to_i64(&self) -> Option<i64> {
        if self.0.is_integer() {
            self.0.numer().to_i64()
        } else {
            None
        }
    }

    /// Unique representative of `self` modulo `p^a Z_p` of the form
    /// `m / p^k` with `0 <= m < p^(a+k)` and `p` not dividing `m` unless
    /// `k = 0`.
    pub fn reduce_mod_p_power(&self, a: i64, p: Prime) -> PScalar {
        let v = match self.val(p) {
            Valuation::Infinite => return PScalar::zero(),
            Valuation::Finite(v) => v,
        };
        if v >= a {
            return PScalar::zero();
        }
        let k = (-v).max(0);
        // y = self * p^k lies in Z_(p)
        let y = self * &p.pow(k);
        let modulus = num_traits::pow(p.big(), (a + k) as usize);
        let den_inv = y
            .denom()
            .modinv(&modulus)
            .expect("denominator is a p-adic unit");
        let m = (y.numer() * den_inv).mod_floor(&modulus);
        PScalar(BigRational::new(m, num_traits::pow(p.big(), k as usize)))
    }
}

impl From<i64> for PScalar {
    fn from(n: i64) -> Self {
        PScalar(BigRational::from_integer(BigInt::from(n)))
    }
}

impl From<BigInt> for PScalar {
    fn from(n: BigInt) -> Self {
        PScalar(BigRational::from_integer(n))
    }
}

impl fmt::Display for PScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&PScalar> for &PScalar {
            type Output = PScalar;
            fn $method(self, rhs: &PScalar) -> PScalar {
                PScalar((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<PScalar> for PScalar {
            type Output = PScalar;
            fn $method(self, rhs: PScalar) -> PScalar {
                PScalar(self.0.$method(rhs.0))
            }
        }
        impl $trait<&PScalar> for PScalar {
            type Output = PScalar;
            fn $method(self, rhs: &PScalar) -> PScalar {
                PScalar(self.0.$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl AddAssign<&PScalar> for PScalar {
    fn add_assign(&mut self, rhs: &PScalar) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&PScalar> for PScalar {
    fn sub_assign(&mut self, rhs: &PScalar) {
        self.0 -= &rhs.0;
    }
}

impl Neg for PScalar {
    type Output = PScalar;
    fn neg(self) -> PScalar {
        PScalar(-self.0)
    }
}

impl Neg for &PScalar {
    type Output = PScalar;
    fn neg(self) -> PScalar {
        PScalar(-&self.0)
    }
}
