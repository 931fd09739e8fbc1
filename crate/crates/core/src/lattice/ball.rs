use indexmap::IndexSet;

use super::Lattice;
use crate::exactnum::Prime;

/// Representatives of the points of `P^(n-1)(F_p)`: vectors whose first
/// nonzero coordinate is 1.
pub fn projective_points(n: usize, p: Prime) -> Vec<Vec<u64>> {
    let p = p.get();
    let mut out = Vec::new();
    for lead in 0..n {
        let free = n - lead - 1;
        let count = p.pow(free as u32);
        for mut code in 0..count {
            let mut v = vec![0u64; n];
            v[lead] = 1;
            for slot in v.iter_mut().skip(lead + 1) {
                *slot = code % p;
                code /= p;
            }
            out.push(v);
        }
    }
    out
}

/// Lattices grouped by distance from `center`, for distances `0..=r`.
///
/// Distance-one steps generate every sphere, so breadth-first search over
/// index-`p` neighbors with canonical-form deduplication reaches exactly the
/// ball.
pub fn ball_layers(center: &Lattice, r: u64) -> Vec<Vec<Lattice>> {
    let mut seen: IndexSet<Lattice> = IndexSet::new();
    seen.insert(center.clone());
    let mut layers = vec![vec![center.clone()]];
    for _ in 0..r {
        let mut next = Vec::new();
        for l in layers.last().expect("nonempty") {
            for m in l.neighbors() {
                if seen.insert(m.clone()) {
                    next.push(m);
                }
            }
        }
        layers.push(next);
    }
    layers
}

/// All lattices at distance at most `r` from `center`, in canonical order.
pub fn ball(center: &Lattice, r: u64) -> Vec<Lattice> {
    let mut all: Vec<Lattice> = ball_layers(center, r).into_iter().flatten().collect();
    all.sort();
    all
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::PMatrix;
    use crate::lattice::DistanceUnits;

    #[test]
    fn projective_point_counts() {
        let p = Prime::new(3).unwrap();
        assert_eq!(projective_points(2, p).len(), 4);
        assert_eq!(projective_points(3, p).len(), 13);
    }

    #[test]
    fn small_balls() {
        let two = Prime::new(2).unwrap();
        let three = Prime::new(3).unwrap();
        let std = Lattice::standard(2, two);
        assert_eq!(ball(&std, 0), vec![std.clone()]);
        assert_eq!(ball(&std, 1).len(), 7);
        assert_eq!(ball(&Lattice::standard(2, three), 1).len(), 9);
    }

    #[test]
    fn layers_are_spheres() {
        let p = Prime::new(2).unwrap();
        let c = Lattice::canonicalize(&PMatrix::from_i64_rows(&[&[2, 1], &[0, 1]]), p).unwrap();
        for (k, layer) in ball_layers(&c, 3).iter().enumerate() {
            for l in layer {
                assert_eq!(c.dist(l).unwrap(), DistanceUnits(k as u64));
            }
        }
    }
}
