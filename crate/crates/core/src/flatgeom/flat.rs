use indexmap::IndexSet;
use serde::Serialize;

use super::{Element, GenSet};
use crate::autoscale::{default_max_steps, displacement, scale_newton, tidy_for_cyclic, Automorphism};
use crate::error::Result;
use crate::lattice::local::standard_ball;
use crate::lattice::Lattice;

/// Largest order tried when looking for torsion generators.
pub const TORSION_ORDER_BOUND: u32 = 24;
/// Balls with more lattices than this (by the branching bound) are not scanned.
pub const BALL_SCAN_LIMIT: u128 = 50_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FlatFailure {
    pub word: String,
    pub displacement_exp: u64,
    pub scale_sum_exp: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FlatVerdict {
    CertifiedToDepth { depth: usize },
    RefutedAtWord { word: String, reason: String },
    Inconclusive { reason: String },
}

/// Finite-order generators and a word of positive scale.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TorsionEvidence {
    /// `(label, order)`
    pub finite_order: Vec<(String, u32)>,
    pub witness_word: Option<String>,
    /// `(s(w), s(w^-1))` exponents
    pub witness_scales: Option<(u64, u64)>,
    /// the witness lies in the subgroup generated by the finite-order
    /// generators
    pub witness_in_torsion_subgroup: bool,
    /// lattices of the search ball fixed by every finite-order generator;
    /// `None` when the ball was too large to scan
    pub common_fixed_in_radius: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FlatnessReport {
    pub candidate: Option<Lattice>,
    pub candidate_source: Option<String>,
    pub depth: usize,
    pub search_radius: u32,
    /// distinct elements checked at the candidate, one shortest word each
    pub verified_words: usize,
    pub failures: Vec<FlatFailure>,
    pub verdict: FlatVerdict,
    pub torsion: Option<TorsionEvidence>,
}

/// True when `g` and `g^-1` both have scale 1.
pub fn scale_one_test(g: &Automorphism) -> bool {
    scale_newton(g).is_one() && scale_newton(&g.inv()).is_one()
}

fn scale_sum(g: &Automorphism) -> (u64, u64) {
    (scale_newton(g).exponent, scale_newton(&g.inv()).exponent)
}

/// Upper bound on `|ball(Z_p^n, r)|` from the branching of the neighbor graph.
fn ball_size_bound(n: usize, p: u64, r: u32) -> u128 {
    let deg = 2 * (0..n as u32).map(|k| (p as u128).pow(k)).sum::<u128>();
    let mut total = 1u128;
    let mut layer = deg;
    for _ in 0..r {
        total = total.saturating_add(layer);
        layer = layer.saturating_mul(deg.saturating_sub(1).max(1));
    }
    total
}

fn search_ball(gens: &GenSet, radius: u32) -> Option<Vec<Lattice>> {
    (ball_size_bound(gens.dim(), gens.prime().get(), radius) <= BALL_SCAN_LIMIT)
        .then(|| standard_ball(gens.dim(), gens.prime(), radius))
}

fn torsion_evidence(
    gens: &GenSet,
    elements: &[Element],
    depth: usize,
    ball: Option<&[Lattice]>,
) -> Result<Option<TorsionEvidence>> {
    let finite: Vec<(usize, u32)> = (0..gens.generator_count())
        .filter_map(|i| gens.generator(i).finite_order(TORSION_ORDER_BOUND).map(|k| (i, k)))
        .collect();
    if finite.is_empty() {
        return Ok(None);
    }
    let finite_order = finite
        .iter()
        .map(|&(i, k)| (gens.generator_label(i).to_string(), k))
        .collect();
    let idx: Vec<usize> = finite.iter().map(|&(i, _)| i).collect();
    let torsion = gens.restrict(&idx)?;

    let mut witness = None;
    let mut in_torsion = false;
    for e in torsion.elements(depth) {
        let s = scale_sum(&e.auto);
        if s != (0, 0) {
            witness = Some((torsion.word_label(&e.word), s));
            in_torsion = true;
            break;
        }
    }
    if witness.is_none() {
        witness = elements.iter().find_map(|e| {
            let s = scale_sum(&e.auto);
            (s != (0, 0)).then(|| (gens.word_label(&e.word), s))
        });
    }

    let common_fixed_in_radius = match ball {
        Some(ball) => {
            let mut count = 0;
            for l in ball {
                let mut fixed = true;
                for &i in &idx {
                    if gens.generator(i).apply(l)? != *l {
                        fixed = false;
                        break;
                    }
                }
                count += fixed as usize;
            }
            Some(count)
        }
        None => None,
    };

    Ok(Some(TorsionEvidence {
        finite_order,
        witness_word: witness.as_ref().map(|w| w.0.clone()),
        witness_scales: witness.map(|w| w.1),
        witness_in_torsion_subgroup: in_torsion,
        common_fixed_in_radius,
    }))
}

/// Candidates in order: the standard lattice, the cyclic tidy lattice of each
/// generator, pairwise meets and joins of those, then the search ball.
fn candidates(gens: &GenSet, ball: Option<&[Lattice]>) -> Result<Vec<(Lattice, String)>> {
    let std = Lattice::standard(gens.dim(), gens.prime());
    let mut seen: IndexSet<Lattice> = IndexSet::new();
    let mut out = Vec::new();
    let mut push = |l: Lattice, src: String, out: &mut Vec<(Lattice, String)>| {
        if seen.insert(l.clone()) {
            out.push((l, src));
        }
    };
    push(std, "standard".into(), &mut out);
    let mut tidy = Vec::new();
    for i in 0..gens.generator_count() {
        let g = gens.generator(i);
        let c = tidy_for_cyclic(g, default_max_steps(g))?;
        tidy.push((c.lattice.clone(), gens.generator_label(i).to_string()));
        push(c.lattice, format!("tidy({})", gens.generator_label(i)), &mut out);
    }
    for a in 0..tidy.len() {
        for b in a + 1..tidy.len() {
            let (la, na) = &tidy[a];
            let (lb, nb) = &tidy[b];
            push(la.meet(lb)?, format!("meet(tidy({na}),tidy({nb}))"), &mut out);
            push(la.join(lb)?, format!("join(tidy({na}),tidy({nb}))"), &mut out);
        }
    }
    if let Some(ball) = ball {
        for l in ball {
            push(l.clone(), "ball".into(), &mut out);
        }
    }
    Ok(out)
}

fn failures_at(gens: &GenSet, elements: &[(Element, (u64, u64))], l: &Lattice, stop_early: bool) -> Result<Vec<FlatFailure>> {
    let mut out = Vec::new();
    for (e, (sf, sb)) in elements {
        let d = displacement(&e.auto, l)?.units();
        if d != sf + sb {
            out.push(FlatFailure {
                word: gens.word_label(&e.word),
                displacement_exp: d,
                scale_sum_exp: sf + sb,
            });
            if stop_early {
                break;
            }
        }
    }
    Ok(out)
}

/// Looks for a lattice minimizing for every element of word length at most
/// `depth`.
///
/// Refutation is by torsion: finite-order elements have scale 1 both ways, so
/// they fix every lattice minimizing for the group. A word of positive scale
/// in the subgroup they generate therefore rules out flatness.
pub fn certify_flat(gens: &GenSet, depth: usize, search_radius: u32) -> Result<FlatnessReport> {
    let depth = depth.max(1);
    let elements: Vec<(Element, (u64, u64))> = gens
        .elements(depth)
        .into_iter()
        .map(|e| {
            let s = scale_sum(&e.auto);
            (e, s)
        })
        .collect();
    let plain: Vec<Element> = elements.iter().map(|(e, _)| e.clone()).collect();
    let ball = search_ball(gens, search_radius);
    let torsion = torsion_evidence(gens, &plain, depth, ball.as_deref())?;

    let mut report = FlatnessReport {
        candidate: None,
        candidate_source: None,
        depth,
        search_radius,
        verified_words: 0,
        failures: Vec::new(),
        verdict: FlatVerdict::Inconclusive {
            reason: String::new(),
        },
        torsion: torsion.clone(),
    };

    if let Some(t) = &torsion {
        if t.witness_in_torsion_subgroup {
            let labels: Vec<&str> = t.finite_order.iter().map(|(l, _)| l.as_str()).collect();
            let word = t.witness_word.clone().expect("witness present");
            let (sf, sb) = t.witness_scales.expect("witness present");
            report.verdict = FlatVerdict::RefutedAtWord {
                reason: format!(
                    "{} have finite order and so fix any minimizing lattice, but {} lies in the subgroup they generate and has scale exponents ({}, {})",
                    labels.join(", "),
                    word,
                    sf,
                    sb
                ),
                word,
            };
            return Ok(report);
        }
    }

    let generator_elements: Vec<(Element, (u64, u64))> = gens
        .letters()
        .iter()
        .enumerate()
        .map(|(i, l)| {
            (
                Element {
                    word: vec![i],
                    auto: l.auto.clone(),
                },
                scale_sum(&l.auto),
            )
        })
        .collect();

    let mut best: Option<(usize, Lattice, String)> = None;
    for (l, src) in candidates(gens, ball.as_deref())? {
        let gen_fail = failures_at(gens, &generator_elements, &l, false)?.len();
        if gen_fail == 0 {
            let fails = failures_at(gens, &elements, &l, false)?;
            if fails.is_empty() {
                report.candidate = Some(l);
                report.candidate_source = Some(src);
                report.verified_words = elements.len();
                report.verdict = FlatVerdict::CertifiedToDepth { depth };
                return Ok(report);
            }
        }
        if best.as_ref().is_none_or(|(b, _, _)| gen_fail < *b) {
            best = Some((gen_fail, l, src));
        }
    }

    let (_, l, src) = best.expect("standard lattice is always a candidate");
    report.failures = failures_at(gens, &elements, &l, false)?;
    report.verified_words = elements.len() - report.failures.len();
    report.candidate = Some(l);
    report.candidate_source = Some(src);
    let mut reason = format!(
        "no candidate minimizes every element of length <= {depth}; best candidate fails {} of {}",
        report.failures.len(),
        elements.len()
    );
    if ball.is_none() {
        reason.push_str("; search ball too large to scan");
    }
    if let Some(t) = &torsion {
        if t.common_fixed_in_radius == Some(0) && t.witness_word.is_some() {
            reason.push_str("; finite-order generators have no common fixed lattice in the search ball");
        }
    }
    report.verdict = FlatVerdict::Inconclusive { reason };
    Ok(report)
}

/// Result of closing up an orbit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum OrbitClosure {
    /// the orbit is finite; `lattice` is the meet of all of it
    Closed { lattice: Lattice, orbit_size: usize },
    NotClosed { visited: usize },
}

/// Meet of the orbit of `base`, if the orbit has at most `budget` points.
pub fn fixed_lattice_from_bounded_orbit(gens: &GenSet, base: &Lattice, budget: usize) -> Result<OrbitClosure> {
    let mut seen: IndexSet<Lattice> = IndexSet::new();
    seen.insert(base.clone());
    let mut i = 0;
    while i < seen.len() {
        if seen.len() > budget.max(1) {
            return Ok(OrbitClosure::NotClosed { visited: seen.len() });
        }
        let l = seen[i].clone();
        for letter in gens.letters() {
            seen.insert(letter.auto.apply(&l)?);
        }
        i += 1;
    }
    if seen.len() > budget.max(1) {
        return Ok(OrbitClosure::NotClosed { visited: seen.len() });
    }
    let mut meet = base.clone();
    for l in seen.iter().skip(1) {
        meet = meet.meet(l)?;
    }
    Ok(OrbitClosure::Closed {
        lattice: meet,
        orbit_size: seen.len(),
    })
}
