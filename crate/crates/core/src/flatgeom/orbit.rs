use std::fmt::Write as _;

use indexmap::IndexMap;
use serde::Serialize;

use super::GenSet;
use crate::autoscale::displacement;
use crate::error::{Error, Result};
use crate::lattice::{DistanceUnits, Lattice};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitVertex {
    pub lattice: Lattice,
    /// BFS word length
    pub depth: usize,
    pub word: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct OrbitEdge {
    pub a: usize,
    pub b: usize,
    pub dist: DistanceUnits,
}

/// The orbit of a base lattice under words of bounded length, with edges
/// between vertices at distance at most `threshold`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitGraph {
    pub base: Lattice,
    pub vertices: Vec<OrbitVertex>,
    pub edges: Vec<OrbitEdge>,
    pub threshold: DistanceUnits,
    pub depth: usize,
}

/// Least-squares fit of `log(count)` against `log(radius)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthFit {
    pub degree: u32,
    pub slope: f64,
    /// root-mean-square residual of the fit
    pub residual: f64,
    pub radii_used: Vec<u64>,
}

fn orbit_vertices(gens: &GenSet, base: &Lattice, depth: usize) -> Result<Vec<OrbitVertex>> {
    let mut seen: IndexMap<Lattice, (usize, Vec<usize>)> = IndexMap::new();
    seen.insert(base.clone(), (0, Vec::new()));
    let mut begin = 0;
    for d in 0..depth {
        let end = seen.len();
        for i in begin..end {
            let (l, (_, word)) = seen.get_index(i).expect("in range");
            let (l, word) = (l.clone(), word.clone());
            for (li, letter) in gens.letters().iter().enumerate() {
                let m = letter.auto.apply(&l)?;
                if !seen.contains_key(&m) {
                    let mut w = word.clone();
                    w.push(li);
                    seen.insert(m, (d + 1, w));
                }
            }
        }
        begin = end;
    }
    Ok(seen
        .into_iter()
        .map(|(lattice, (depth, word))| OrbitVertex {
            lattice,
            depth,
            word: gens.word_label(&word),
        })
        .collect())
}

/// Orbit ball with the threshold set to the largest generator displacement
/// at the base.
pub fn orbit_ball(gens: &GenSet, base: &Lattice, depth: usize) -> Result<OrbitGraph> {
    let mut threshold = DistanceUnits(0);
    for letter in gens.letters() {
        threshold = threshold.max(displacement(&letter.auto, base)?);
    }
    orbit_ball_with_threshold(gens, base, depth, threshold)
}

pub fn orbit_ball_with_threshold(
    gens: &GenSet,
    base: &Lattice,
    depth: usize,
    threshold: DistanceUnits,
) -> Result<OrbitGraph> {
    let vertices = orbit_vertices(gens, base, depth)?;
    let mut edges = Vec::new();
    for a in 0..vertices.len() {
        for b in a + 1..vertices.len() {
            let dist = vertices[a].lattice.dist(&vertices[b].lattice)?;
            if dist <= threshold {
                edges.push(OrbitEdge { a, b, dist });
            }
        }
    }
    Ok(OrbitGraph {
        base: base.clone(),
        vertices,
        edges,
        threshold,
        depth,
    })
}

/// Orbit points of words of length at most `depth`, breadth-first.
pub fn orbit_points(gens: &GenSet, base: &Lattice, depth: usize) -> Result<Vec<Lattice>> {
    Ok(orbit_vertices(gens, base, depth)?.into_iter().map(|v| v.lattice).collect())
}

/// Cumulative orbit sizes `|{w·base : |w| <= r}|` for `r = 0..=depth`.
pub fn orbit_counts(gens: &GenSet, base: &Lattice, depth: usize) -> Result<Vec<(u64, u64)>> {
    Ok(counts_from_depths(
        orbit_vertices(gens, base, depth)?.iter().map(|v| v.depth),
        depth,
    ))
}

fn counts_from_depths(depths: impl Iterator<Item = usize>, depth: usize) -> Vec<(u64, u64)> {
    let mut per = vec![0u64; depth + 1];
    for d in depths {
        per[d] += 1;
    }
    let mut acc = 0;
    per.iter()
        .enumerate()
        .map(|(r, c)| {
            acc += c;
            (r as u64, acc)
        })
        .collect()
}

impl OrbitGraph {
    pub fn counts_by_radius(&self) -> Vec<(u64, u64)> {
        counts_from_depths(self.vertices.iter().map(|v| v.depth), self.depth)
    }

    pub fn degree_fit(&self) -> Option<GrowthFit> {
        growth_degree(&self.counts_by_radius()).ok()
    }

    pub fn is_connected(&self) -> bool {
        let n = self.vertices.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut components = n;
        for e in &self.edges {
            let (a, b) = (find(&mut parent, e.a), find(&mut parent, e.b));
            if a != b {
                parent[a] = b;
                components -= 1;
            }
        }
        components <= 1
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph orbit {\n  node [shape=box, fontname=monospace];\n");
        for (i, v) in self.vertices.iter().enumerate() {
            let _ = writeln!(
                s,
                "  v{i} [label=\"{}\\ndepth {} ({})\"];",
                v.lattice, v.depth, v.word
            );
        }
        for e in &self.edges {
            let _ = writeln!(s, "  v{} -- v{} [label=\"{}\"];", e.a, e.b, e.dist);
        }
        s.push_str("}\n");
        s
    }

    /// `{vertices, edges, counts_by_radius, threshold, degree_fit}`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "vertices": self.vertices,
            "edges": self.edges,
            "counts_by_radius": self.counts_by_radius(),
            "threshold": self.threshold,
            "degree_fit": self.degree_fit(),
        })
    }
}

/// Polynomial growth degree from `(radius, count)` pairs, fitted on the upper
/// half of the radii (radius 0 is ignored).
pub fn growth_degree(counts: &[(u64, u64)]) -> Result<GrowthFit> {
    let mut pts: Vec<(u64, u64)> = counts.iter().copied().filter(|&(r, c)| r >= 1 && c >= 1).collect();
    pts.sort_unstable();
    if pts.len() < 4 {
        return Err(Error::InsufficientData {
            needed: 4,
            found: pts.len(),
        });
    }
    let upper = &pts[pts.len() / 2..];
    let xs: Vec<f64> = upper.iter().map(|&(r, _)| (r as f64).ln()).collect();
    let ys: Vec<f64> = upper.iter().map(|&(_, c)| (c as f64).ln()).collect();
    let m = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sq: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    Ok(GrowthFit {
        degree: slope.round().max(0.0) as u32,
        slope,
        residual: (sq / m).sqrt(),
        radii_used: upper.iter().map(|&(r, _)| r).collect(),
    })
}

/// Least `d` for which the set is `d`-connected: the longest edge of a
/// minimum spanning tree.
pub fn coarse_threshold(points: &[Lattice]) -> Result<DistanceUnits> {
    let n = points.len();
    if n <= 1 {
        return Ok(DistanceUnits(0));
    }
    let mut in_tree = vec![false; n];
    let mut best = vec![u64::MAX; n];
    best[0] = 0;
    let mut longest = 0;
    for _ in 0..n {
        let v = (0..n)
            .filter(|&i| !in_tree[i])
            .min_by_key(|&i| best[i])
            .expect("vertex left");
        in_tree[v] = true;
        longest = longest.max(best[v]);
        for w in 0..n {
            if !in_tree[w] {
                let d = points[v].dist(&points[w])?.units();
                best[w] = best[w].min(d);
            }
        }
    }
    Ok(DistanceUnits(longest))
}
