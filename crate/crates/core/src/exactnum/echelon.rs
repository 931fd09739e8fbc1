//! Column echelon and Smith forms over the local ring `Z_(p)`.

use super::matrix::PMatrix;
use super::scalar::{Prime, Valuation};
use crate::error::{Error, Result};

/// Column-reduces a full-row-rank `n x m` generating matrix to the canonical
/// upper-triangular basis of its `Z_p`-span. When `track` is set, the
/// returned transform `U` (`m x m`, invertible over `Z_(p)`) satisfies
/// `M * U = [0 | T]`.
pub(crate) fn hermite_columns(
    gens: &PMatrix,
    p: Prime,
    track: bool,
) -> Result<(PMatrix, Option<PMatrix>)> {
    let n = gens.rows();
    let m = gens.cols();
    if m < n {
        return Err(Error::SingularMatrix);
    }
    let offset = m - n;
    let mut a = gens.clone();
    let mut u = track.then(|| PMatrix::identity(m));

    for i in (0..n).rev() {
        let last = i + offset;
        // pivot: minimal valuation in row i among active columns
        let (piv, v) = (0..=last)
            .map(|j| (j, a[(i, j)].val(p)))
            .min_by_key(|&(j, v)| (v, j))
            .expect("at least one active column");
        let Valuation::Finite(v) = v else {
            return Err(Error::SingularMatrix);
        };
        a.swap_cols(piv, last);
        if let Some(u) = u.as_mut() {
            u.swap_cols(piv, last);
        }
        // normalize pivot to p^v
        let (_, unit) = a[(i, last)].unit_part(p);
        let unit_inv = unit.inv().expect("unit");
        a.scale_col(last, &unit_inv);
        if let Some(u) = u.as_mut() {
            u.scale_col(last, &unit_inv);
        }
        let pivot = p.pow(v);
        for j in 0..last {
            if a[(i, j)].is_zero() {
                continue;
            }
            let f = &a[(i, j)] / &pivot;
            a.col_axpy(j, &f, last);
            if let Some(u) = u.as_mut() {
                u.col_axpy(j, &f, last);
            }
        }
    }

    // reduce entries above the diagonal, bottom rows first
    for r in (0..n.saturating_sub(1)).rev() {
        let cr = r + offset;
        let ar = a[(r, cr)].val(p).finite().expect("nonzero pivot");
        let pivot = p.pow(ar);
        for c in r + 1..n {
            let cc = c + offset;
            let x = a[(r, cc)].clone();
            let rep = x.reduce_mod_p_power(ar, p);
            if rep == x {
                continue;
            }
            let q = &(&x - &rep) / &pivot;
            a.col_axpy(cc, &q, cr);
            if let Some(u) = u.as_mut() {
                u.col_axpy(cc, &q, cr);
            }
        }
    }

    let mut t = PMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            t[(i, j)] = a[(i, j + offset)].clone();
        }
    }
    Ok((t, u))
}

/// Canonical column echelon form `T = M U` with `U` invertible over `Z_(p)`.
///
/// `T` is upper triangular, has diagonal entries exactly `p^a_i`, and each
/// entry above the diagonal in row `i` is reduced modulo `p^a_i`. It depends
/// only on the `Z_p`-span of the columns of `M`.
pub fn echelon_localized(m: &PMatrix, p: Prime) -> Result<(PMatrix, PMatrix)> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch {
            expected: m.rows(),
            found: m.cols(),
        });
    }
    let (t, u) = hermite_columns(m, p, true)?;
    Ok((t, u.expect("tracked")))
}

/// Exponents `d_1 >= ... >= d_n` of the elementary divisors `p^d_i` of `M`
/// over `Z_(p)`.
pub fn smith_exponents(m: &PMatrix, p: Prime) -> Result<Vec<i64>> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch {
            expected: m.rows(),
            found: m.cols(),
        });
    }
    let n = m.rows();
    let mut a = m.clone();
    let mut out = Vec::with_capacity(n);
    for t in 0..n {
        let mut best = (Valuation::Infinite, t, t);
        for i in t..n {
            for j in t..n {
                let v = a[(i, j)].val(p);
                if v < best.0 {
                    best = (v, i, j);
                }
            }
        }
        let (Valuation::Finite(v), bi, bj) = best else {
            return Err(Error::SingularMatrix);
        };
        a.swap_rows(t, bi);
        a.swap_cols(t, bj);
        let pivot = a[(t, t)].clone();
        for i in t + 1..n {
            if !a[(i, t)].is_zero() {
                let f = &a[(i, t)] / &pivot;
                a.row_axpy(i, &f, t);
            }
        }
        for j in t + 1..n {
            if !a[(t, j)].is_zero() {
                let f = &a[(t, j)] / &pivot;
                a.col_axpy(j, &f, t);
            }
        }
        out.push(v);
    }
    out.sort_unstable_by(|x, y| y.cmp(x));
    Ok(out)
}

/// True when every entry lies in `Z_(p)` and the determinant is a unit.
pub fn is_local_unit_matrix(m: &PMatrix, p: Prime) -> bool {
    m.min_val(p) >= Valuation::Finite(0)
        && m.det().map(|d| d.val(p) == Valuation::Finite(0)).unwrap_or(false)
}
