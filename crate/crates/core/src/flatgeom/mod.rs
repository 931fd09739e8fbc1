//! Finitely generated groups of automorphisms: words, orbit graphs and their
//! growth, flatness certificates, roots and rank, and bounded conjugacy
//! classes.

mod fc;
mod flat;
mod orbit;
mod roots;

use std::collections::HashSet;
use std::collections::VecDeque;

use serde::Serialize;

use crate::autoscale::Automorphism;
use crate::error::{Error, Result};
use crate::exactnum::{PMatrix, Prime};

pub use fc::{fc_membership, FcVerdict};
pub use flat::{
    certify_flat, fixed_lattice_from_bounded_orbit, scale_one_test, FlatFailure, FlatVerdict, TORSION_ORDER_BOUND,
    FlatnessReport, OrbitClosure, TorsionEvidence,
};
pub use orbit::{
    coarse_threshold, growth_degree, orbit_ball, orbit_ball_with_threshold, orbit_counts, orbit_points, GrowthFit,
    OrbitEdge, OrbitGraph, OrbitVertex,
};
pub use roots::{diagonal_exponents, diagonal_roots, Root, RootData};

/// One letter of the alphabet: a generator or an inverse of one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Letter {
    pub label: String,
    pub auto: Automorphism,
    /// index of the inverse letter
    pub inverse: usize,
    /// generator index and exponent sign
    pub generator: usize,
    pub sign: i64,
}

/// Labelled generators, closed under inverses.
///
/// Generator `i` is letter `i`; inverses that are not already present are
/// appended with the label `name^-1`.
#[derive(Debug, Clone)]
pub struct GenSet {
    p: Prime,
    n: usize,
    generators: usize,
    letters: Vec<Letter>,
}

/// A group element with one shortest word representing it.
#[derive(Debug, Clone)]
pub struct Element {
    pub word: Vec<usize>,
    pub auto: Automorphism,
}

impl GenSet {
    pub fn new(gens: Vec<(String, Automorphism)>) -> Result<Self> {
        let first = gens.first().ok_or_else(|| Error::parse("", "empty generating set"))?;
        let (p, n) = (first.1.prime(), first.1.dim());
        let mut labels = HashSet::new();
        for (label, g) in &gens {
            if !labels.insert(label.clone()) {
                return Err(Error::parse(label, "duplicate generator label"));
            }
            if g.prime() != p {
                return Err(Error::PrimeMismatch(p.get(), g.prime().get()));
            }
            if g.dim() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: g.dim(),
                });
            }
        }
        let generators = gens.len();
        let mut letters: Vec<Letter> = gens
            .into_iter()
            .enumerate()
            .map(|(i, (label, auto))| Letter {
                label,
                auto,
                inverse: usize::MAX,
                generator: i,
                sign: 1,
            })
            .collect();
        for i in 0..generators {
            let inv = letters[i].auto.inv();
            if inv == letters[i].auto {
                letters[i].inverse = i;
                continue;
            }
            let label = format!("{}^-1", letters[i].label);
            letters.push(Letter {
                label,
                auto: inv,
                inverse: i,
                generator: i,
                sign: -1,
            });
            let j = letters.len() - 1;
            letters[i].inverse = j;
        }
        Ok(GenSet {
            p,
            n,
            generators,
            letters,
        })
    }

    /// Convenience constructor from labelled matrices.
    pub fn from_matrices(p: Prime, gens: Vec<(&str, PMatrix)>) -> Result<Self> {
        let gens = gens
            .into_iter()
            .map(|(l, m)| Ok((l.to_string(), Automorphism::new(m, p)?)))
            .collect::<Result<Vec<_>>>()?;
        GenSet::new(gens)
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Number of generators, not counting added inverses.
    pub fn generator_count(&self) -> usize {
        self.generators
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn generator(&self, i: usize) -> &Automorphism {
        &self.letters[i].auto
    }

    pub fn generator_label(&self, i: usize) -> &str {
        &self.letters[i].label
    }

    /// Sub-generating set on the given generator indices.
    pub fn restrict(&self, indices: &[usize]) -> Result<GenSet> {
        GenSet::new(
            indices
                .iter()
                .map(|&i| (self.letters[i].label.clone(), self.letters[i].auto.clone()))
                .collect(),
        )
    }

    pub fn word_label(&self, word: &[usize]) -> String {
        if word.is_empty() {
            return "e".to_string();
        }
        word.iter()
            .map(|&l| self.letters[l].label.as_str())
            .collect::<Vec<_>>()
            .join("*")
    }

    /// Parses `a*b^-1*c`; `e` or the empty string is the identity.
    pub fn parse_word(&self, s: &str) -> Result<Vec<usize>> {
        let t = s.trim();
        if t.is_empty() || t == "e" {
            return Ok(Vec::new());
        }
        t.split('*')
            .map(|part| {
                let part = part.trim();
                if let Some(i) = self.letters.iter().position(|l| l.label == part) {
                    return Ok(i);
                }
                // `g^-1` of an involution resolves to `g`
                if let Some(base) = part.strip_suffix("^-1") {
                    if let Some(i) = self.letters.iter().position(|l| l.label == base) {
                        return Ok(self.letters[i].inverse);
                    }
                }
                Err(Error::parse(s, format!("unknown letter `{part}`")))
            })
            .collect()
    }

    pub fn evaluate(&self, word: &[usize]) -> Automorphism {
        word.iter().fold(Automorphism::identity(self.n, self.p), |acc, &l| {
            acc.compose(&self.letters[l].auto).expect("compatible")
        })
    }

    pub fn inverse_word(&self, word: &[usize]) -> Vec<usize> {
        word.iter().rev().map(|&l| self.letters[l].inverse).collect()
    }

    /// Signed generator counts of a word.
    pub fn exponent_vector(&self, word: &[usize]) -> Vec<i64> {
        let mut v = vec![0; self.generators];
        for &l in word {
            let letter = &self.letters[l];
            v[letter.generator] += letter.sign;
        }
        v
    }

    /// Freely reduced words of length at most `depth`, shortest first.
    pub fn reduced_words(&self, depth: usize) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new()];
        let mut frontier: Vec<Vec<usize>> = vec![Vec::new()];
        for _ in 0..depth {
            let mut next = Vec::new();
            for w in &frontier {
                for l in 0..self.letters.len() {
                    if let Some(&last) = w.last() {
                        if self.letters[last].inverse == l {
                            continue;
                        }
                    }
                    let mut v: Vec<usize> = w.clone();
                    v.push(l);
                    next.push(v);
                }
            }
            out.extend(next.iter().cloned());
            frontier = next;
        }
        out
    }

    /// Distinct elements of word length at most `depth`, breadth-first, each
    /// with a shortest word.
    pub fn elements(&self, depth: usize) -> Vec<Element> {
        let id = Automorphism::identity(self.n, self.p);
        let mut seen: HashSet<PMatrix> = HashSet::new();
        seen.insert(id.matrix().clone());
        let mut out = vec![Element {
            word: Vec::new(),
            auto: id,
        }];
        let mut queue: VecDeque<usize> = VecDeque::from([0]);
        while let Some(i) = queue.pop_front() {
            if out[i].word.len() >= depth {
                continue;
            }
            for (l, letter) in self.letters.iter().enumerate() {
                let g = out[i].auto.compose(&letter.auto).expect("compatible");
                if seen.insert(g.matrix().clone()) {
                    let mut word = out[i].word.clone();
                    word.push(l);
                    out.push(Element { word, auto: g });
                    queue.push_back(out.len() - 1);
                }
            }
        }
        out
    }
}

impl Serialize for GenSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Gen<'a> {
            label: &'a str,
            matrix: &'a Automorphism,
        }
        let gens: Vec<Gen> = self.letters[..self.generators]
            .iter()
            .map(|l| Gen {
                label: &l.label,
                matrix: &l.auto,
            })
            .collect();
        gens.serialize(s)
    }
}
