//! The Bruhat-Tits tree of `SL_2(Q_p)`, with homothety classes of lattices in
//! `Q_p^2` as vertices, and the apartment `Z^n` with its monomial action.

mod monomial;

use std::fmt::{self, Write as _};

use indexmap::IndexMap;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{PMatrix, Prime};
use crate::flatgeom::GenSet;
use crate::lattice::Lattice;

pub use monomial::{monomial_bounded_class, MonomialElement, MonomialVerdict};

/// A homothety class of lattices in `Q_p^2`, represented by the lattice whose
/// canonical basis has first diagonal exponent 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct TreeVertex {
    rep: Lattice,
}

impl TreeVertex {
    pub fn new(l: &Lattice) -> Result<Self> {
        if l.dim() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: l.dim(),
            });
        }
        let a0 = l.diagonal_exponents()[0];
        Ok(TreeVertex { rep: l.scaled(-a0) })
    }

    pub fn standard(p: Prime) -> Self {
        TreeVertex {
            rep: Lattice::standard(2, p),
        }
    }

    /// Class of `diag(p^k, 1) Z_p^2`.
    pub fn apartment(p: Prime, k: i64) -> Self {
        let l = Lattice::canonicalize(&PMatrix::diag_p_powers(p, &[k, 0]), p).expect("invertible");
        TreeVertex::new(&l).expect("rank 2")
    }

    pub fn rep(&self) -> &Lattice {
        &self.rep
    }

    pub fn prime(&self) -> Prime {
        self.rep.prime()
    }

    /// On the diagonal apartment: the canonical basis is diagonal.
    pub fn is_apartment(&self) -> bool {
        self.rep.basis().is_diagonal()
    }

    /// `k` with `self = [diag(p^k, 1)]`, for apartment vertices.
    pub fn apartment_coordinate(&self) -> Option<i64> {
        self.is_apartment().then(|| {
            let a = self.rep.diagonal_exponents();
            a[0] - a[1]
        })
    }

    pub fn apply(&self, g: &PMatrix) -> Result<TreeVertex> {
        TreeVertex::new(&self.rep.apply(g)?)
    }

    /// The `p + 1` classes at distance one: index-`p` sublattices.
    pub fn neighbors(&self) -> Vec<TreeVertex> {
        let count = self.prime().get() as usize + 1;
        self.rep.neighbors()[..count]
            .iter()
            .map(|l| TreeVertex::new(l).expect("rank 2"))
            .collect()
    }
}

impl fmt::Display for TreeVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.rep)
    }
}

/// `max(d) - min(d)` over the relative exponents of representatives.
pub fn tree_dist(v: &TreeVertex, w: &TreeVertex) -> Result<u64> {
    let d = v.rep.rel_exponents(&w.rep)?;
    Ok((d[0] - d[1]).unsigned_abs())
}

/// Vertices grouped by distance `0..=r` from `center`.
pub fn tree_ball_layers(center: &TreeVertex, r: u64) -> Vec<Vec<TreeVertex>> {
    let mut seen: IndexMap<TreeVertex, ()> = IndexMap::new();
    seen.insert(center.clone(), ());
    let mut layers = vec![vec![center.clone()]];
    for _ in 0..r {
        let mut next = Vec::new();
        for v in layers.last().expect("nonempty") {
            for w in v.neighbors() {
                if seen.insert(w.clone(), ()).is_none() {
                    next.push(w);
                }
            }
        }
        layers.push(next);
    }
    layers
}

pub fn tree_ball(center: &TreeVertex, r: u64) -> Vec<TreeVertex> {
    tree_ball_layers(center, r).into_iter().flatten().collect()
}

fn check_rank_two(g: &PMatrix) -> Result<()> {
    if g.rows() != 2 || g.cols() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: g.rows(),
        });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TranslationLength {
    pub length: u64,
    /// vertices of the ball attaining the minimum
    pub attaining: Vec<TreeVertex>,
    pub attained_on_apartment: bool,
}

/// Minimum of `d(v, gv)` over the ball of the given radius around the
/// standard vertex.
pub fn tree_translation_length(g: &PMatrix, p: Prime, radius: u64) -> Result<TranslationLength> {
    check_rank_two(g)?;
    let mut best = u64::MAX;
    let mut attaining = Vec::new();
    for v in tree_ball(&TreeVertex::standard(p), radius) {
        let d = tree_dist(&v, &v.apply(g)?)?;
        if d < best {
            best = d;
            attaining.clear();
        }
        if d == best {
            attaining.push(v);
        }
    }
    let attained_on_apartment = attaining.iter().any(TreeVertex::is_apartment);
    Ok(TranslationLength {
        length: best,
        attaining,
        attained_on_apartment,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChamberDisplacement {
    pub min: u64,
    pub attaining: Vec<(TreeVertex, TreeVertex)>,
    pub apartment_attains: bool,
    pub edges_examined: usize,
}

/// Displacement of an edge `{v, w}`: the smaller of `d(v,gv) + d(w,gw)` and
/// `d(v,gw) + d(w,gv)`.
pub fn chamber_displacement(g: &PMatrix, v: &TreeVertex, w: &TreeVertex) -> Result<u64> {
    let (gv, gw) = (v.apply(g)?, w.apply(g)?);
    let straight = tree_dist(v, &gv)? + tree_dist(w, &gw)?;
    let crossed = tree_dist(v, &gw)? + tree_dist(w, &gv)?;
    Ok(straight.min(crossed))
}

/// Minimum chamber displacement over the edges inside the ball.
pub fn chamber_min_displacement(g: &PMatrix, p: Prime, radius: u64) -> Result<ChamberDisplacement> {
    check_rank_two(g)?;
    let layers = tree_ball_layers(&TreeVertex::standard(p), radius);
    let mut best = u64::MAX;
    let mut attaining = Vec::new();
    let mut edges_examined = 0;
    // every edge joins consecutive layers
    for pair in layers.windows(2) {
        let outer: IndexMap<&TreeVertex, ()> = pair[1].iter().map(|v| (v, ())).collect();
        for v in &pair[0] {
            for w in v.neighbors() {
                if !outer.contains_key(&w) {
                    continue;
                }
                edges_examined += 1;
                let d = chamber_displacement(g, v, &w)?;
                if d < best {
                    best = d;
                    attaining.clear();
                }
                if d == best {
                    attaining.push((v.clone(), w));
                }
            }
        }
    }
    let apartment_attains = attaining.iter().any(|(a, b)| a.is_apartment() && b.is_apartment());
    Ok(ChamberDisplacement {
        min: if edges_examined == 0 { 0 } else { best },
        attaining,
        apartment_attains,
        edges_examined,
    })
}

/// Cumulative sizes of the orbit of the standard vertex under words of
/// length `0..=depth`.
pub fn tree_orbit_counts(gens: &GenSet, depth: usize) -> Result<Vec<(u64, u64)>> {
    let mut seen: IndexMap<TreeVertex, usize> = IndexMap::new();
    seen.insert(TreeVertex::standard(gens.prime()), 0);
    let mut begin = 0;
    for d in 0..depth {
        let end = seen.len();
        for i in begin..end {
            let v = seen.get_index(i).expect("in range").0.clone();
            for letter in gens.letters() {
                let w = v.apply(letter.auto.matrix())?;
                seen.entry(w).or_insert(d + 1);
            }
        }
        begin = end;
    }
    let mut per = vec![0u64; depth + 1];
    for &d in seen.values() {
        per[d] += 1;
    }
    let mut acc = 0;
    Ok(per
        .iter()
        .enumerate()
        .map(|(r, c)| {
            acc += c;
            (r as u64, acc)
        })
        .collect())
}

/// DOT rendering of a tree ball; apartment vertices are filled.
pub fn tree_ball_dot(center: &TreeVertex, r: u64) -> String {
    let layers = tree_ball_layers(center, r);
    let all: Vec<&TreeVertex> = layers.iter().flatten().collect();
    let index: IndexMap<&TreeVertex, usize> = all.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    let mut s = String::from("graph tree {\n  node [shape=box, fontname=monospace];\n");
    for (i, v) in all.iter().enumerate() {
        let style = if v.is_apartment() {
            ", style=filled, fillcolor=lightblue"
        } else {
            ""
        };
        let _ = writeln!(s, "  t{i} [label=\"{v}\"{style}];");
    }
    for pair in layers.windows(2) {
        for v in &pair[0] {
            for w in v.neighbors() {
                if let Some(&j) = index.get(&w) {
                    if pair[1].contains(&w) {
                        let bold = if v.is_apartment() && w.is_apartment() {
                            " [penwidth=2]"
                        } else {
                            ""
                        };
                        let _ = writeln!(s, "  t{} -- t{j}{bold};", index[v]);
                    }
                }
            }
        }
    }
    s.push_str("}\n");
    s
}
