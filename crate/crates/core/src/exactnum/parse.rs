//! Text format for matrix entries and matrices.
//!
//! Entries: a decimal integer (`-12`), a fraction whose denominator is a power
//! of `p` (`3/25`), or `a*p^k` / `p^k` / `-p` with `k` a possibly negative
//! integer. Matrices: `[[a,b],[c,d]]`, `diag(a,b,...)`, or `I` (identity of
//! the ambient dimension).

use num_bigint::BigInt;

use super::matrix::PMatrix;
use super::scalar::{PScalar, Prime};
use crate::error::{Error, Result};

pub fn parse_entry(s: &str, p: Prime) -> Result<PScalar> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err(Error::parse(s, "empty entry"));
    }
    if let Some((num, den)) = t.split_once('/') {
        let num = parse_int(num, s)?;
        let den = parse_int(den, s)?;
        if den == BigInt::from(0) {
            return Err(Error::parse(s, "zero denominator"));
        }
        let x = PScalar::from_ratio(num, den);
        if !x.is_p_rational(p) {
            return Err(Error::parse(s, format!("denominator is not a power of {p}")));
        }
        return Ok(x);
    }
    if let Some(idx) = t.find('p') {
        let (coef, rest) = t.split_at(idx);
        let coef = match coef {
            "" | "+" => PScalar::one(),
            "-" => -PScalar::one(),
            c => PScalar::from(parse_int(c.strip_suffix('*').ok_or_else(|| Error::parse(s, "expected `*` before p"))?, s)?),
        };
        let k = match &rest[1..] {
            "" => 1,
            e => e
                .strip_prefix('^')
                .ok_or_else(|| Error::parse(s, "expected `^` after p"))?
                .parse::<i64>()
                .map_err(|e| Error::parse(s, e.to_string()))?,
        };
        return Ok(coef * p.pow(k));
    }
    Ok(PScalar::from(parse_int(&t, s)?))
}

fn parse_int(t: &str, whole: &str) -> Result<BigInt> {
    t.parse::<BigInt>()
        .map_err(|_| Error::parse(whole, format!("`{t}` is not an integer")))
}

/// Splits on commas that are not nested inside brackets.
fn split_top(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '[' | '(' => depth += 1,
            ']' | ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

/// Parses a square matrix. `dim` is required for `I`.
pub fn parse_matrix(s: &str, p: Prime, dim: Option<usize>) -> Result<PMatrix> {
    let t = s.trim();
    if t == "I" || t == "id" {
        let n = dim.ok_or_else(|| Error::parse(s, "identity needs a dimension"))?;
        return Ok(PMatrix::identity(n));
    }
    let m = if let Some(inner) = t.strip_prefix("diag(").and_then(|r| r.strip_suffix(')')) {
        let entries = split_top(inner)
            .into_iter()
            .map(|e| parse_entry(e, p))
            .collect::<Result<Vec<_>>>()?;
        PMatrix::diag(&entries)
    } else if let Some(inner) = t.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
        let rows = split_top(inner)
            .into_iter()
            .map(|row| {
                let row = row.trim();
                let body = row
                    .strip_prefix('[')
                    .and_then(|r| r.strip_suffix(']'))
                    .ok_or_else(|| Error::parse(s, format!("row `{row}` is not bracketed")))?;
                split_top(body).into_iter().map(|e| parse_entry(e, p)).collect()
            })
            .collect::<Result<Vec<Vec<_>>>>()?;
        PMatrix::from_rows(rows)?
    } else {
        return Err(Error::parse(s, "expected `[[..],..]`, `diag(..)` or `I`"));
    };
    if !m.is_square() {
        return Err(Error::DimensionMismatch {
            expected: m.rows(),
            found: m.cols(),
        });
    }
    if let Some(n) = dim {
        if m.rows() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: m.rows(),
            });
        }
    }
    Ok(m)
}

/// Parses a matrix given as a grid of entry strings.
pub fn parse_grid(rows: &[Vec<String>], p: Prime) -> Result<PMatrix> {
    let rows = rows
        .iter()
        .map(|r| r.iter().map(|e| parse_entry(e, p)).collect())
        .collect::<Result<Vec<Vec<_>>>>()?;
    PMatrix::from_rows(rows)
}
