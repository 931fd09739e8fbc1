use num_rational::Rational64;
use serde::Serialize;

use super::scalar::{PScalar, Prime, Valuation};
use crate::error::{Error, Result};

/// One edge of the lower convex hull.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Segment {
    #[serde(serialize_with = "ser_ratio")]
    pub slope: Rational64,
    pub length: usize,
}

fn ser_ratio<S: serde::Serializer>(r: &Rational64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

/// Lower convex hull of the points `(i, v_p(c_i))` of a polynomial.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NewtonPolygon {
    pub points: Vec<(usize, i64)>,
    pub segments: Vec<Segment>,
}

impl NewtonPolygon {
    /// `coeffs` in ascending degree. Zero coefficients are skipped.
    pub fn new(coeffs: &[PScalar], p: Prime) -> Self {
        let points: Vec<(usize, i64)> = coeffs
            .iter()
            .enumerate()
            .filter_map(|(i, c)| match c.val(p) {
                Valuation::Finite(v) => Some((i, v)),
                Valuation::Infinite => None,
            })
            .collect();

        // monotone chain, lower hull; collinear points are dropped
        let mut hull: Vec<(usize, i64)> = Vec::new();
        for &pt in &points {
            while hull.len() >= 2 {
                let (x1, y1) = hull[hull.len() - 2];
                let (x2, y2) = hull[hull.len() - 1];
                let cross = (x2 as i64 - x1 as i64) * (pt.1 - y1) - (y2 - y1) * (pt.0 as i64 - x1 as i64);
                if cross <= 0 {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(pt);
        }
        let segments = hull
            .windows(2)
            .map(|w| {
                let dx = (w[1].0 - w[0].0) as i64;
                Segment {
                    slope: Rational64::new(w[1].1 - w[0].1, dx),
                    length: dx as usize,
                }
            })
            .collect();
        NewtonPolygon { points, segments }
    }
}

/// Valuations of the roots of a polynomial with nonzero constant term, with
/// multiplicities, ordered by increasing hull slope.
///
/// Root valuation is the negative of the slope.
pub fn newton_slopes(coeffs: &[PScalar], p: Prime) -> Result<Vec<(Rational64, usize)>> {
    match coeffs.first() {
        Some(c) if !c.is_zero() => {}
        _ => return Err(Error::ZeroConstantTerm),
    }
    let poly = NewtonPolygon::new(coeffs, p);
    let degree = poly.points.last().map_or(0, |pt| pt.0);
    debug_assert_eq!(poly.segments.iter().map(|s| s.length).sum::<usize>(), degree);
    Ok(poly.segments.iter().map(|s| (-s.slope, s.length)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::PMatrix;

    fn r(n: i64) -> Rational64 {
        Rational64::from_integer(n)
    }

    #[test]
    fn hyperbolic_quadratic() {
        let p = Prime::new(5).unwrap();
        let coeffs = vec![PScalar::one(), -(PScalar::from(5) + p.pow(-1)), PScalar::one()];
        assert_eq!(newton_slopes(&coeffs, p).unwrap(), vec![(r(1), 1), (r(-1), 1)]);
    }

    #[test]
    fn unit_quadratic() {
        let p = Prime::new(5).unwrap();
        let coeffs = vec![PScalar::one(), PScalar::zero(), PScalar::one()];
        assert_eq!(newton_slopes(&coeffs, p).unwrap(), vec![(r(0), 2)]);
    }

    #[test]
    fn cubic_with_three_slopes() {
        let p = Prime::new(3).unwrap();
        let coeffs = PMatrix::diag_p_powers(p, &[2, 1, 0]).char_poly();
        assert_eq!(
            newton_slopes(&coeffs, p).unwrap(),
            vec![(r(2), 1), (r(1), 1), (r(0), 1)]
        );
    }

    #[test]
    fn fractional_slope() {
        // x^2 - p has roots of valuation 1/2
        let p = Prime::new(2).unwrap();
        let coeffs = vec![-PScalar::from(2), PScalar::zero(), PScalar::one()];
        assert_eq!(
            newton_slopes(&coeffs, p).unwrap(),
            vec![(Rational64::new(1, 2), 2)]
        );
    }

    #[test]
    fn zero_constant_term_rejected() {
        let p = Prime::new(2).unwrap();
        let coeffs = vec![PScalar::zero(), PScalar::one()];
        assert_eq!(newton_slopes(&coeffs, p), Err(Error::ZeroConstantTerm));
    }
}
