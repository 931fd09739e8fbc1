use serde::Serialize;

use super::{forward_index, Automorphism, ScaleValue};
use crate::error::{Error, Result};
use crate::exactnum::Prime;
use crate::lattice::local::LocalBall;
use crate::lattice::{ball_layers, Lattice};

/// Minimum of `[gL : gL ∩ L]` over a ball, with a lattice attaining it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScaleWitness {
    pub scale: ScaleValue,
    pub lattice: Lattice,
}

enum Engine {
    Local(LocalBall),
    Generic(Vec<Lattice>),
}

/// The ball `ball(Z_p^n, radius)`, enumerated once and reused across
/// automorphisms.
pub struct ScaleOracle {
    p: Prime,
    n: usize,
    radius: u32,
    engine: Engine,
}

impl ScaleOracle {
    pub fn new(n: usize, p: Prime, radius: u32) -> Self {
        let engine = match LocalBall::new(n, p, radius) {
            Some(b) => Engine::Local(b),
            None => Engine::Generic(
                ball_layers(&Lattice::standard(n, p), radius as u64)
                    .into_iter()
                    .flatten()
                    .collect(),
            ),
        };
        ScaleOracle { p, n, radius, engine }
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn len(&self) -> usize {
        match &self.engine {
            Engine::Local(b) => b.len(),
            Engine::Generic(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Minimizes `[gL : gL ∩ L]` over the ball. Lattices are visited from the
    /// center outwards and the first minimizer is returned.
    pub fn scale(&self, g: &Automorphism) -> Result<ScaleWitness> {
        if g.prime() != self.p {
            return Err(Error::PrimeMismatch(self.p.get(), g.prime().get()));
        }
        if g.dim() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: g.dim(),
            });
        }
        if let Engine::Local(b) = &self.engine {
            if let Some((exp, idx)) = b.min_forward_index(g.matrix()) {
                return Ok(ScaleWitness {
                    scale: ScaleValue::new(exp),
                    lattice: b.lattice(idx),
                });
            }
        }
        let floor = (-g.det_val()).max(0) as u64;
        let mut best: Option<(u64, Lattice)> = None;
        let mut consider = |l: Lattice| -> Result<bool> {
            let f = forward_index(g, &l)?;
            if best.as_ref().is_none_or(|(b, _)| f < *b) {
                best = Some((f, l));
            }
            Ok(f > floor)
        };
        match &self.engine {
            Engine::Local(b) => {
                for i in 0..b.len() {
                    if !consider(b.lattice(i))? {
                        break;
                    }
                }
            }
            Engine::Generic(v) => {
                for l in v {
                    if !consider(l.clone())? {
                        break;
                    }
                }
            }
        }
        let (exp, lattice) = best.expect("ball contains its center");
        Ok(ScaleWitness {
            scale: ScaleValue::new(exp),
            lattice,
        })
    }
}

impl std::fmt::Debug for ScaleOracle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ScaleOracle")
            .field("p", &self.p)
            .field("n", &self.n)
            .field("radius", &self.radius)
            .field("len", &self.len())
            .finish()
    }
}

/// Minimum of `[gL : gL ∩ L]` over `ball(Z_p^n, radius)`.
pub fn scale_bruteforce(g: &Automorphism, radius: u32) -> Result<ScaleWitness> {
    ScaleOracle::new(g.dim(), g.prime(), radius).scale(g)
}
