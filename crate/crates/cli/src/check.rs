//! Seeded property suites over random lattices and automorphisms.

use anyhow::Result;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use tdlc_core::autoscale::displacement;
use tdlc_core::{Automorphism, Lattice, PMatrix, PScalar, Prime};

const PRIMES: [u64; 3] = [2, 3, 5];
const MAX_EXAMPLES: usize = 5;

#[derive(Debug, Clone, Serialize)]
pub struct SuiteResult {
    pub name: &'static str,
    pub samples: usize,
    pub violations: usize,
    /// the first few counterexamples
    pub examples: Vec<String>,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub seed: u64,
    pub suites: Vec<SuiteResult>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(SuiteResult::passed)
    }
}

/// Random source of small instances: `n` in `{2, 3}`, `p` in `{2, 3, 5}`,
/// entries in `{0, ±1, ±p, ±p^-1}`.
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn setting(&mut self) -> (usize, Prime) {
        let n = self.rng.gen_range(2..=3);
        let p = *PRIMES.choose(&mut self.rng).expect("nonempty");
        (n, Prime::new(p).expect("prime"))
    }

    pub fn entry(&mut self, p: Prime) -> PScalar {
        match self.rng.gen_range(0..7) {
            0 => PScalar::zero(),
            1 => PScalar::one(),
            2 => -PScalar::one(),
            3 => p.pow(1),
            4 => -p.pow(1),
            5 => p.pow(-1),
            _ => -p.pow(-1),
        }
    }

    pub fn matrix(&mut self, n: usize, p: Prime) -> PMatrix {
        let rows = (0..n).map(|_| (0..n).map(|_| self.entry(p)).collect()).collect();
        PMatrix::from_rows(rows).expect("square")
    }

    pub fn automorphism(&mut self, n: usize, p: Prime) -> Automorphism {
        loop {
            if let Ok(g) = Automorphism::new(self.matrix(n, p), p) {
                return g;
            }
        }
    }

    /// The image of the standard lattice under a random automorphism.
    pub fn lattice(&mut self, n: usize, p: Prime) -> Lattice {
        let g = self.automorphism(n, p);
        Lattice::standard(n, p).apply(g.matrix()).expect("invertible")
    }

    /// A random word of length at most `max_len` in `gens` and their inverses.
    pub fn word(&mut self, gens: &[Automorphism], max_len: usize) -> Automorphism {
        let n = gens[0].dim();
        let p = gens[0].prime();
        let len = self.rng.gen_range(0..=max_len);
        let mut w = Automorphism::identity(n, p);
        for _ in 0..len {
            let g = gens.choose(&mut self.rng).expect("nonempty");
            let g = if self.rng.gen_bool(0.5) { g.clone() } else { g.inv() };
            w = w.compose(&g).expect("same setting");
        }
        w
    }
}

fn suite(
    name: &'static str,
    samples: usize,
    sampler: &mut Sampler,
    mut one: impl FnMut(&mut Sampler) -> Result<Option<String>>,
) -> Result<SuiteResult> {
    let mut violations = 0;
    let mut examples = Vec::new();
    for _ in 0..samples {
        if let Some(ex) = one(sampler)? {
            violations += 1;
            if examples.len() < MAX_EXAMPLES {
                examples.push(ex);
            }
        }
    }
    Ok(SuiteResult {
        name,
        samples,
        violations,
        examples,
    })
}

pub fn metric_axioms(s: &mut Sampler, samples: usize) -> Result<SuiteResult> {
    suite("metric axioms", samples, s, |s| {
        let (n, p) = s.setting();
        let (a, b, c) = (s.lattice(n, p), s.lattice(n, p), s.lattice(n, p));
        let ab = a.dist(&b)?.units();
        let ba = b.dist(&a)?.units();
        let bc = b.dist(&c)?.units();
        let ac = a.dist(&c)?.units();
        let ok = ab == ba && (ab == 0) == (a == b) && a.dist(&a)?.units() == 0 && ac <= ab + bc;
        Ok((!ok).then(|| format!("{a} | {b} | {c}: d(a,b)={ab} d(b,a)={ba} d(b,c)={bc} d(a,c)={ac}")))
    })
}

pub fn action_isometry(s: &mut Sampler, samples: usize) -> Result<SuiteResult> {
    suite("action isometry", samples, s, |s| {
        let (n, p) = s.setting();
        let g = s.automorphism(n, p);
        let (l, m) = (s.lattice(n, p), s.lattice(n, p));
        let before = l.dist(&m)?;
        let after = g.apply(&l)?.dist(&g.apply(&m)?)?;
        Ok((before != after).then(|| format!("g={g} L={l} M={m}: {before} vs {after}")))
    })
}

/// `|d(φO, ψO) − d(φO', ψO')| <= 2 d(O, O')` for words in two generators.
pub fn orbit_quasi_isometry(s: &mut Sampler, samples: usize) -> Result<SuiteResult> {
    suite("orbit quasi-isometry", samples, s, |s| {
        let (n, p) = s.setting();
        let gens = [s.automorphism(n, p), s.automorphism(n, p)];
        let (phi, psi) = (s.word(&gens, 4), s.word(&gens, 4));
        let (o, o2) = (s.lattice(n, p), s.lattice(n, p));
        let d = phi.apply(&o)?.dist(&psi.apply(&o)?)?.units();
        let d2 = phi.apply(&o2)?.dist(&psi.apply(&o2)?)?.units();
        let bound = 2 * o.dist(&o2)?.units();
        Ok((d.abs_diff(d2) > bound).then(|| format!("phi={phi} psi={psi} O={o} O'={o2}: |{d}-{d2}| > {bound}")))
    })
}

pub fn displacement_subadditivity(s: &mut Sampler, samples: usize) -> Result<SuiteResult> {
    suite("displacement subadditivity", samples, s, |s| {
        let (n, p) = s.setting();
        let (g, h) = (s.automorphism(n, p), s.automorphism(n, p));
        let l = s.lattice(n, p);
        let gh = displacement(&g.compose(&h)?, &l)?.units();
        let dg = displacement(&g, &l)?.units();
        let dh = displacement(&h, &l)?.units();
        let inv_ok = displacement(&g.inv(), &l)?.units() == dg;
        Ok((gh > dg + dh || !inv_ok).then(|| format!("g={g} h={h} L={l}: {gh} > {dg} + {dh}")))
    })
}

/// All four suites from one seed.
pub fn run_checks(seed: u64, samples: usize) -> Result<CheckReport> {
    let mut s = Sampler::new(seed);
    let suites = vec![
        metric_axioms(&mut s, samples)?,
        action_isometry(&mut s, samples)?,
        orbit_quasi_isometry(&mut s, samples)?,
        displacement_subadditivity(&mut s, samples)?,
    ];
    Ok(CheckReport { seed, suites })
}
