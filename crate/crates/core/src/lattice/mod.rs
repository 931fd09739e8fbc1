//! Full-rank `Z_p`-lattices in `Q_p^n`: the compact open subgroups of the
//! vector group, with the index metric.

mod ball;
pub mod local;

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{
    echelon_localized, hermite_columns, parse_grid, smith_exponents, PMatrix, PScalar, Prime,
};

pub use ball::{ball, ball_layers, projective_points};

/// Distance between lattices in units of `log p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DistanceUnits(pub u64);

impl DistanceUnits {
    pub fn units(self) -> u64 {
        self.0
    }

    /// The metric value `units * ln p`.
    pub fn as_log(self, p: Prime) -> f64 {
        self.0 as f64 * (p.get() as f64).ln()
    }
}

impl fmt::Display for DistanceUnits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A lattice, stored by its canonical basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Lattice {
    p: Prime,
    basis: PMatrix,
}

impl Lattice {
    /// `Z_p^n`.
    pub fn standard(n: usize, p: Prime) -> Self {
        Lattice {
            p,
            basis: PMatrix::identity(n),
        }
    }

    /// The lattice spanned over `Z_p` by the columns of `basis`.
    pub fn canonicalize(basis: &PMatrix, p: Prime) -> Result<Self> {
        let (t, _) = echelon_localized(basis, p)?;
        Ok(Lattice { p, basis: t })
    }

    /// `Z_p`-span of an arbitrary full-rank generating set (`n x m`, `m >= n`).
    pub fn span(gens: &PMatrix, p: Prime) -> Result<Self> {
        let (t, _) = hermite_columns(gens, p, false)?;
        Ok(Lattice { p, basis: t })
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn basis(&self) -> &PMatrix {
        &self.basis
    }

    /// Diagonal exponents `a_i` of the canonical basis.
    pub fn diagonal_exponents(&self) -> Vec<i64> {
        (0..self.dim())
            .map(|i| self.basis[(i, i)].val(self.p).finite().expect("invertible basis"))
            .collect()
    }

    pub fn is_standard(&self) -> bool {
        self.basis.is_identity()
    }

    /// Image `g L`.
    pub fn apply(&self, g: &PMatrix) -> Result<Lattice> {
        self.check_dim(g.rows())?;
        Lattice::canonicalize(&g.try_mul(&self.basis)?, self.p)
    }

    /// `p^k L`.
    pub fn scaled(&self, k: i64) -> Lattice {
        // off-diagonal residues scale together with their moduli, so the
        // scaled basis is already canonical
        Lattice {
            p: self.p,
            basis: self.basis.scale(&self.p.pow(k)),
        }
    }

    /// Dual lattice with respect to the standard pairing.
    pub fn dual(&self) -> Lattice {
        let inv_t = self.basis.inverse().expect("canonical basis is invertible").transpose();
        Lattice::canonicalize(&inv_t, self.p).expect("invertible")
    }

    fn check_dim(&self, n: usize) -> Result<()> {
        if n != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: n,
            });
        }
        Ok(())
    }

    fn check_compatible(&self, other: &Lattice) -> Result<()> {
        if self.p != other.p {
            return Err(Error::PrimeMismatch(self.p.get(), other.p.get()));
        }
        self.check_dim(other.dim())
    }

    /// Elementary-divisor exponents of `other` relative to `self`, sorted in
    /// decreasing order. `[L : L∧M] = p^Σmax(d_i,0)`, `[M : L∧M] = p^Σmax(-d_i,0)`.
    pub fn rel_exponents(&self, other: &Lattice) -> Result<Vec<i64>> {
        self.check_compatible(other)?;
        let rel = self.basis.inverse()?.try_mul(&other.basis)?;
        smith_exponents(&rel, self.p)
    }

    pub fn dist(&self, other: &Lattice) -> Result<DistanceUnits> {
        let d = self.rel_exponents(other)?;
        Ok(DistanceUnits(d.iter().map(|x| x.unsigned_abs()).sum()))
    }

    /// Exponent of the index `[self : self ∧ other]`.
    pub fn index_over_meet(&self, other: &Lattice) -> Result<u64> {
        let d = self.rel_exponents(other)?;
        Ok(d.iter().map(|&x| x.max(0) as u64).sum())
    }

    /// `L + M`.
    pub fn join(&self, other: &Lattice) -> Result<Lattice> {
        self.check_compatible(other)?;
        let n = self.dim();
        let mut cols = self.basis.columns();
        cols.extend(other.basis.columns());
        let gens = PMatrix::from_cols(&cols);
        debug_assert_eq!(gens.rows(), n);
        Lattice::span(&gens, self.p)
    }

    /// `L ∩ M`, computed as `(L* + M*)*`.
    pub fn meet(&self, other: &Lattice) -> Result<Lattice> {
        self.check_compatible(other)?;
        Ok(self.dual().join(&other.dual())?.dual())
    }

    /// True when `other ⊆ self`.
    pub fn contains(&self, other: &Lattice) -> Result<bool> {
        Ok(other.rel_exponents(self)?.iter().all(|&d| d <= 0))
    }

    /// Lattices at distance exactly one: index-`p` sublattices followed by
    /// index-`p` superlattices, `2 (p^n - 1) / (p - 1)` in total.
    pub fn neighbors(&self) -> Vec<Lattice> {
        let n = self.dim();
        let p = self.p;
        let b = self.basis.columns();
        let pp = PScalar::from(p.get() as i64);
        let inv_p = p.pow(-1);
        let lines = projective_points(n, p);
        let mut out = Vec::with_capacity(2 * lines.len());
        for f in &lines {
            // kernel of x -> Σ f_i x_i mod p
            let j = f.iter().position(|&c| c != 0).expect("nonzero");
            let cols: Vec<Vec<PScalar>> = (0..n)
                .map(|i| {
                    if i == j {
                        b[j].iter().map(|x| x * &pp).collect()
                    } else {
                        let fi = PScalar::from(f[i] as i64);
                        b[i].iter().zip(&b[j]).map(|(x, y)| x - &(&fi * y)).collect()
                    }
                })
                .collect();
            out.push(Lattice::canonicalize(&PMatrix::from_cols(&cols), p).expect("full rank"));
        }
        for c in &lines {
            let j = c.iter().position(|&x| x != 0).expect("nonzero");
            let mut v = vec![PScalar::zero(); n];
            for (i, &ci) in c.iter().enumerate() {
                if ci != 0 {
                    let ci = PScalar::from(ci as i64);
                    for r in 0..n {
                        v[r] += &(&ci * &b[i][r]);
                    }
                }
            }
            let mut cols = b.clone();
            cols[j] = v.iter().map(|x| x * &inv_p).collect();
            out.push(Lattice::canonicalize(&PMatrix::from_cols(&cols), p).expect("full rank"));
        }
        out
    }

    /// Canonical entry strings, row-major; the key for deterministic ordering.
    pub fn entry_strings(&self) -> Vec<Vec<String>> {
        (0..self.dim())
            .map(|i| self.basis.row(i).iter().map(ToString::to_string).collect())
            .collect()
    }

    pub fn to_json(&self) -> LatticeJson {
        LatticeJson {
            dim: self.dim(),
            p: self.p.get(),
            basis: self.entry_strings(),
        }
    }

    pub fn from_json(j: &LatticeJson) -> Result<Self> {
        let p = Prime::new(j.p)?;
        let m = parse_grid(&j.basis, p)?;
        if m.rows() != j.dim || !m.is_square() {
            return Err(Error::DimensionMismatch {
                expected: j.dim,
                found: m.rows(),
            });
        }
        Lattice::canonicalize(&m, p)
    }
}

impl PartialOrd for Lattice {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Lattice {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.p, self.dim())
            .cmp(&(other.p, other.dim()))
            .then_with(|| self.entry_strings().cmp(&other.entry_strings()))
    }
}

impl fmt::Display for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.basis)
    }
}

/// Serialized form: `{dim, p, basis}` with the canonical basis as entry
/// strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeJson {
    pub dim: usize,
    pub p: u64,
    pub basis: Vec<Vec<String>>,
}

impl Serialize for Lattice {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Lattice {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = LatticeJson::deserialize(d)?;
        Lattice::from_json(&j).map_err(serde::de::Error::custom)
    }
}
