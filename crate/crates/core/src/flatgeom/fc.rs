use serde::Serialize;

use super::GenSet;
use crate::autoscale::{displacement, Automorphism};
use crate::error::Result;
use crate::lattice::Lattice;

/// Verdict on whether the conjugacy class of an element is bounded.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FcVerdict {
    /// the largest conjugate displacement stopped growing halfway through
    BoundedToDepth { depth: usize, max_displacement: u64 },
    /// `c^k φ c^-k` moves the base by at least `base + k * growth_lower_bound`
    Escaping {
        conjugator: String,
        base_displacement: u64,
        /// displacements for `k = 1, 2, ...`
        displacements: Vec<u64>,
        growth_lower_bound: u64,
    },
    Inconclusive { depth: usize, max_displacement: u64 },
}

impl FcVerdict {
    pub fn is_bounded(&self) -> bool {
        matches!(self, FcVerdict::BoundedToDepth { .. })
    }

    pub fn is_escaping(&self) -> bool {
        matches!(self, FcVerdict::Escaping { .. })
    }
}

/// Tests `φ^H` for boundedness at `base`.
///
/// Conjugates by every element of word length at most `depth` are measured.
/// Escape is only reported with a witness: a conjugator `c` of word length at
/// most 2 such that the displacement of `c^k φ c^-k` grows at least linearly
/// for `k = 1..=depth`.
pub fn fc_membership(phi: &Automorphism, gens: &GenSet, depth: usize, base: &Lattice) -> Result<FcVerdict> {
    let depth = depth.max(1);
    let elements = gens.elements(depth);
    let half = depth.div_ceil(2);
    let (mut max_all, mut max_half) = (0u64, 0u64);
    for e in &elements {
        let d = displacement(&e.auto.conjugate(phi)?, base)?.units();
        max_all = max_all.max(d);
        if e.word.len() <= half {
            max_half = max_half.max(d);
        }
    }

    let d0 = displacement(phi, base)?.units();
    let mut best: Option<(u64, String, Vec<u64>)> = None;
    for c in elements.iter().filter(|e| (1..=2).contains(&e.word.len())) {
        let mut power = Automorphism::identity(gens.dim(), gens.prime());
        let mut ds = Vec::with_capacity(depth);
        let mut slope = u64::MAX;
        for k in 1..=depth as u64 {
            power = power.compose(&c.auto)?;
            let d = displacement(&power.conjugate(phi)?, base)?.units();
            let prev = ds.last().copied().unwrap_or(d0);
            if d <= prev {
                slope = 0;
                break;
            }
            slope = slope.min((d - d0) / k);
            ds.push(d);
        }
        if slope >= 1 && best.as_ref().is_none_or(|(s, _, _)| slope > *s) {
            best = Some((slope, gens.word_label(&c.word), ds));
        }
    }

    Ok(match best {
        Some((growth_lower_bound, conjugator, displacements)) => FcVerdict::Escaping {
            conjugator,
            base_displacement: d0,
            displacements,
            growth_lower_bound,
        },
        None if max_all == max_half => FcVerdict::BoundedToDepth {
            depth,
            max_displacement: max_all,
        },
        None => FcVerdict::Inconclusive {
            depth,
            max_displacement: max_all,
        },
    })
}
