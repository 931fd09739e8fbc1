//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
//! failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::Rng;
use tdlc_cli::{run_checks, Sampler};
use tdlc_core::autoscale::{displacement, scale_newton, ScaleOracle};
use tdlc_core::building::{
    chamber_min_displacement, monomial_bounded_class, tree_orbit_counts, tree_translation_length, MonomialElement,
    MonomialVerdict,
};
use tdlc_core::flatgeom::{
    certify_flat, coarse_threshold, diagonal_exponents, diagonal_roots, fc_membership, growth_degree, orbit_counts,
    orbit_points, FcVerdict, FlatVerdict, GenSet,
};
use tdlc_core::lattice::ball;
use tdlc_core::{Automorphism, Lattice, PMatrix, PScalar, Prime};

const SEED: u64 = 20_240_601;

/// Orbit depth for the growth fit on diagonal groups. Relations among three
/// generators can be 20+ letters long, and the ball only looks like its
/// asymptotic shape well past that.
const DIAGONAL_ORBIT_DEPTH: usize = 32;

/// Outcome of one criterion: failures are human-readable reasons.
struct Outcome {
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome {
            failures: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn require(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.failures.push(what.into());
        }
    }

    fn note(&mut self, what: impl Into<String>) {
        self.notes.push(what.into());
    }
}

fn prime(p: u64) -> Prime {
    Prime::new(p).unwrap()
}

fn dihedral(p: Prime) -> GenSet {
    let s1 = PMatrix::from_i64_rows(&[&[0, -1], &[1, 0]]);
    let s2 = PMatrix::from_rows(vec![
        vec![PScalar::zero(), -p.pow(-1)],
        vec![p.pow(1), PScalar::zero()],
    ])
    .unwrap();
    GenSet::from_matrices(p, vec![("s1", s1), ("s2", s2)]).unwrap()
}

fn criterion_1() -> Outcome {
    let mut out = Outcome::new();
    for p in [2u64, 5] {
        let p = prime(p);
        let gens = dihedral(p);
        let std = Lattice::standard(2, p);

        // (a) orbit growth and coarse connectivity
        let counts = orbit_counts(&gens, &std, 8).unwrap();
        let fit = growth_degree(&counts).unwrap();
        out.require(fit.degree == 1, format!("p={p}: orbit growth degree {} != 1", fit.degree));
        let t = coarse_threshold(&orbit_points(&gens, &std, 8).unwrap()).unwrap().units();
        out.require(t == 2, format!("p={p}: coarse threshold {t} != 2"));

        // (b) flatness refuted by torsion
        let u = gens.evaluate(&gens.parse_word("s1^-1*s2").unwrap());
        out.require(scale_newton(&u).exponent == 1, format!("p={p}: u has scale exponent != 1"));
        let rep = certify_flat(&gens, 8, 4).unwrap();
        out.require(
            matches!(rep.verdict, FlatVerdict::RefutedAtWord { .. }),
            format!("p={p}: <s1,s2> verdict {:?}", rep.verdict),
        );
        match &rep.torsion {
            None => out.require(false, format!("p={p}: no torsion evidence")),
            Some(t) => {
                out.require(t.finite_order.len() == 2, format!("p={p}: finite-order generators {:?}", t.finite_order));
                out.require(
                    t.witness_scales.is_some_and(|(f, b)| f == 1 && b == 1),
                    format!("p={p}: witness scales {:?}", t.witness_scales),
                );
                out.require(
                    t.common_fixed_in_radius == Some(0),
                    format!("p={p}: common fixed lattices in radius 4: {:?}", t.common_fixed_in_radius),
                );
            }
        }

        // (c) <u> certified with rank 1 and norm 2|k|
        let ug = GenSet::new(vec![("u".into(), u.clone())]).unwrap();
        let rep = certify_flat(&ug, 8, 4).unwrap();
        out.require(
            rep.verdict == FlatVerdict::CertifiedToDepth { depth: 8 },
            format!("p={p}: <u> verdict {:?}", rep.verdict),
        );
        out.require(
            rep.candidate.as_ref().is_some_and(Lattice::is_standard),
            format!("p={p}: <u> certified away from the standard lattice"),
        );
        let roots = diagonal_roots(&diagonal_exponents(&ug).unwrap());
        out.require(roots.rank == 1, format!("p={p}: rank {} != 1", roots.rank));
        for k in -8i64..=8 {
            let d = displacement(&u.pow(k), &std).unwrap().units();
            out.require(d == 2 * k.unsigned_abs(), format!("p={p}: u^{k} displaces by {d}"));
            out.require(roots.norm(&[k]) == d, format!("p={p}: root norm at {k} is {}", roots.norm(&[k])));
        }

        // (d) s1 escapes with conjugate displacements 4|k|
        match fc_membership(gens.generator(0), &gens, 6, &std).unwrap() {
            FcVerdict::Escaping {
                displacements,
                base_displacement,
                ..
            } => {
                let want: Vec<u64> = (1..=6).map(|k| 4 * k).collect();
                out.require(
                    base_displacement == 0 && displacements == want,
                    format!("p={p}: s1 conjugate displacements {displacements:?}"),
                );
            }
            other => out.require(false, format!("p={p}: fc(s1) = {other:?}")),
        }
    }
    out
}

fn criterion_2() -> Outcome {
    let mut out = Outcome::new();
    let mut sampler = Sampler::new(SEED);
    let mut total = 0;
    let mut disagreements = 0;
    for n in [2usize, 3] {
        for p in [2u64, 3, 5] {
            let p = prime(p);
            let oracle = ScaleOracle::new(n, p, 4);
            for _ in 0..50 {
                let g = sampler.automorphism(n, p);
                let brute = oracle.scale(&g).unwrap().scale;
                let newton = scale_newton(&g);
                total += 1;
                if brute != newton {
                    disagreements += 1;
                    out.require(false, format!("n={n} p={p} g={g}: newton {newton} vs ball {brute}"));
                }
            }
        }
    }
    out.note(format!("{total} instances, {disagreements} disagreements"));
    out
}

fn random_diagonal(sampler: &mut Sampler) -> GenSet {
    let p = prime([2u64, 3, 5][sampler.rng().gen_range(0..3)]);
    let n = sampler.rng().gen_range(2..=4);
    let m = sampler.rng().gen_range(1..=3);
    let gens = (0..m)
        .map(|j| {
            let e: Vec<i64> = (0..n).map(|_| sampler.rng().gen_range(-3..=3)).collect();
            (["a", "b", "c"][j], PMatrix::diag_p_powers(p, &e))
        })
        .collect();
    GenSet::from_matrices(p, gens).unwrap()
}

fn criterion_3() -> Outcome {
    let mut out = Outcome::new();
    let mut sampler = Sampler::new(SEED + 3);
    let mut words = 0;
    for i in 0..20 {
        let gens = random_diagonal(&mut sampler);
        let roots = diagonal_roots(&diagonal_exponents(&gens).unwrap());
        let std = Lattice::standard(gens.dim(), gens.prime());
        for w in gens.reduced_words(4) {
            let d = displacement(&gens.evaluate(&w), &std).unwrap().units();
            let norm = roots.norm(&gens.exponent_vector(&w));
            words += 1;
            out.require(d == norm, format!("scenario {i}: {} displaces {d}, norm {norm}", gens.word_label(&w)));
        }
        let counts = orbit_counts(&gens, &std, DIAGONAL_ORBIT_DEPTH).unwrap();
        let fit = growth_degree(&counts).unwrap();
        out.require(
            fit.degree as usize == roots.rank,
            format!("scenario {i}: growth degree {} (slope {:.3}) but rank {}", fit.degree, fit.slope, roots.rank),
        );
    }
    out.note(format!("{words} words checked"));
    out
}

fn criterion_4() -> Outcome {
    let mut out = Outcome::new();
    let report = run_checks(SEED + 4, 200).unwrap();
    for s in &report.suites {
        out.require(s.passed(), format!("{}: {} violations, e.g. {:?}", s.name, s.violations, s.examples));
        out.note(format!("{} x{}", s.name, s.samples));
    }
    out
}

fn criterion_5() -> Outcome {
    let mut out = Outcome::new();
    let p = prime(2);
    let h = PMatrix::diag_p_powers(p, &[1, -1]);
    let t = tree_translation_length(&h, p, 4).unwrap();
    out.require(
        t.length == 2 && t.attained_on_apartment,
        format!("translation length {} on apartment {}", t.length, t.attained_on_apartment),
    );
    let c = chamber_min_displacement(&h, p, 4).unwrap();
    out.require(c.apartment_attains, format!("chamber minimum {} not attained on the apartment", c.min));

    let n_group = GenSet::from_matrices(
        p,
        vec![
            ("t1", PMatrix::diag_p_powers(p, &[1, 0])),
            ("t2", PMatrix::diag_p_powers(p, &[0, 1])),
            ("w", PMatrix::from_i64_rows(&[&[0, 1], &[1, 0]])),
        ],
    )
    .unwrap();
    let fit = growth_degree(&tree_orbit_counts(&n_group, 10).unwrap()).unwrap();
    out.require(fit.degree == 1, format!("N-orbit growth degree {}", fit.degree));

    let t1 = MonomialElement::translation(vec![1, 0]);
    let t2 = MonomialElement::translation(vec![0, 1]);
    let w = MonomialElement::permutation(vec![1, 0]);
    let elements = [
        t1.clone(),
        t2.clone(),
        w.clone(),
        t1.compose(&t2.inverse()),
        t1.compose(&w),
        w.compose(&t2),
        t1.compose(&t2),
        t1.compose(&w).compose(&t1),
    ];
    for m in &elements {
        let v = monomial_bounded_class(m, 6);
        out.require(v.is_bounded() == m.is_translation(), format!("{m:?}: {v:?}"));
        if let MonomialVerdict::Escaping { displacements, .. } = &v {
            for (k, d) in displacements.iter().enumerate() {
                out.require(*d >= 4 * (k as u64 + 1), format!("{m:?}: witness {k} moves only {d}"));
            }
        }
        // the matrix model agrees with the apartment model
        let g = Automorphism::new(m.to_matrix(p), p).unwrap();
        out.require(
            MonomialElement::from_matrix(g.matrix(), p).as_ref() == Some(m),
            format!("{m:?} does not round-trip through its matrix"),
        );
    }
    out.note(format!("{} monomial elements", elements.len()));
    out
}

fn criterion_6() -> Outcome {
    let mut out = Outcome::new();
    let mut sampler = Sampler::new(SEED + 6);
    for (p, unit) in [(2u64, 7usize), (3, 9)] {
        let p = prime(p);
        let std = Lattice::standard(2, p);
        let sizes: Vec<usize> = (0..=3).map(|r| ball(&std, r).len()).collect();
        out.require(sizes[1] == unit, format!("p={p}: |ball(1)| = {} != {unit}", sizes[1]));
        for _ in 0..5 {
            let center = sampler.lattice(2, p);
            for (r, &want) in sizes.iter().enumerate() {
                let got = ball(&center, r as u64).len();
                out.require(got == want, format!("p={p} r={r} center {center}: {got} != {want}"));
            }
        }
        out.note(format!("p={p}: sizes {sizes:?}"));
    }
    out
}

type Criterion = (&'static str, &'static str, fn() -> Outcome, Option<Duration>);

fn main() -> ExitCode {
    let criteria: [Criterion; 6] = [
        ("C1", "worked example, p in {2,5}", criterion_1, Some(Duration::from_secs(30))),
        ("C2", "scale oracle agreement", criterion_2, Some(Duration::from_secs(120))),
        ("C3", "norm identity and growth = rank", criterion_3, None),
        ("C4", "metric, isometry, quasi-isometry, subadditivity", criterion_4, None),
        ("C5", "tree proxy", criterion_5, Some(Duration::from_secs(30))),
        ("C6", "ball sizes", criterion_6, None),
    ];
    let mut all_ok = true;
    for (id, title, run, limit) in criteria {
        let start = Instant::now();
        let mut outcome = run();
        let elapsed = start.elapsed();
        if let Some(limit) = limit {
            outcome.require(elapsed < limit, format!("took {elapsed:.1?}, limit {limit:?}"));
        }
        let ok = outcome.failures.is_empty();
        all_ok &= ok;
        let notes = if outcome.notes.is_empty() {
            String::new()
        } else {
            format!(" [{}]", outcome.notes.join("; "))
        };
        println!("{} {id} {title} ({elapsed:.2?}){notes}", if ok { "PASS" } else { "FAIL" });
        for f in outcome.failures.iter().take(10) {
            println!("    {f}");
        }
    }
    if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
