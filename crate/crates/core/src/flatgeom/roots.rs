use num_integer::Integer;
use serde::Serialize;

use super::GenSet;
use crate::error::{Error, Result};

/// A primitive functional `ρ` on the generator-exponent lattice `Z^m`, with
/// weight `t_ρ = p^weight_exp`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Root {
    pub functional: Vec<i64>,
    pub weight_exp: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RootData {
    pub roots: Vec<Root>,
    /// rank of the common kernel of the roots
    pub kernel_rank: usize,
    pub rank: usize,
}

impl RootData {
    /// `Σ c_ρ |ρ(w)|` for an exponent vector `w`.
    pub fn norm(&self, w: &[i64]) -> u64 {
        self.roots
            .iter()
            .map(|r| {
                let v: i64 = r.functional.iter().zip(w).map(|(a, b)| a * b).sum();
                r.weight_exp as u64 * v.unsigned_abs()
            })
            .sum()
    }
}

/// Exponent matrix (`n x m`, column `j` = generator `j`) of a set of
/// diagonal generators. Unit factors on the diagonal are allowed.
pub fn diagonal_exponents(gens: &GenSet) -> Result<Vec<Vec<i64>>> {
    let n = gens.dim();
    let m = gens.generator_count();
    let mut e = vec![vec![0i64; m]; n];
    for j in 0..m {
        let g = gens.generator(j).matrix();
        if !g.is_diagonal() {
            return Err(Error::NonDiagonalInput(gens.generator_label(j).to_string()));
        }
        for (i, row) in e.iter_mut().enumerate() {
            row[j] = g[(i, i)].val(gens.prime()).finite().expect("invertible");
        }
    }
    Ok(e)
}

/// Roots and rank of a group of commuting diagonal automorphisms.
pub fn diagonal_roots(exponents: &[Vec<i64>]) -> RootData {
    let m = exponents.first().map_or(0, Vec::len);
    let mut roots: Vec<Root> = Vec::new();
    for row in exponents {
        let content = row.iter().fold(0i64, |g, &x| g.gcd(&x));
        if content == 0 {
            continue;
        }
        let functional: Vec<i64> = row.iter().map(|x| x / content).collect();
        match roots.iter_mut().find(|r| r.functional == functional) {
            Some(r) => r.weight_exp += content,
            None => roots.push(Root {
                functional,
                weight_exp: content,
            }),
        }
    }
    roots.sort_by(|a, b| b.functional.cmp(&a.functional));
    let rank = integer_rank(exponents);
    RootData {
        roots,
        kernel_rank: m - rank,
        rank,
    }
}

/// Rank over `Q` by fraction-free elimination.
fn integer_rank(rows: &[Vec<i64>]) -> usize {
    let mut a: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..a.len()).find(|&r| a[r][c] != 0) else {
            continue;
        };
        a.swap(rank, piv);
        for r in rank + 1..a.len() {
            if a[r][c] != 0 {
                let (x, y) = (a[rank][c], a[r][c]);
                for k in c..cols {
                    a[r][k] = a[r][k] * x - a[rank][k] * y;
                }
                let g = a[r].iter().fold(0i128, |g, &v| g.gcd(&v));
                if g > 1 {
                    a[r].iter_mut().for_each(|v| *v /= g);
                }
            }
        }
        rank += 1;
    }
    rank
}
