//! Runs a scenario and collects everything into a deterministic report.

use anyhow::Result;
use serde::Serialize;
use tdlc_core::autoscale::{default_max_steps, displacement, is_minimizing, scale_newton, tidy_for_cyclic};
use tdlc_core::building::{
    chamber_min_displacement, monomial_bounded_class, tree_orbit_counts, tree_translation_length, MonomialElement,
    MonomialVerdict,
};
use tdlc_core::flatgeom::{
    certify_flat, coarse_threshold, diagonal_exponents, diagonal_roots, fc_membership, growth_degree, orbit_ball,
    orbit_counts, orbit_points, FcVerdict, FlatVerdict, FlatnessReport, GenSet, GrowthFit, RootData, TORSION_ORDER_BOUND,
};
use tdlc_core::lattice::Lattice;
use tdlc_core::{Automorphism, Prime};

use crate::scenario::{Expectation, FcExpect, FlatExpect, Scenario};

pub const SCHEMA_VERSION: u32 = 1;

/// Orbits larger than this skip the quadratic threshold computation.
pub const COARSE_THRESHOLD_LIMIT: usize = 1500;

/// Longest word used when checking the norm identity.
const NORM_WORD_LIMIT: usize = 4;

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub tool_version: &'static str,
    pub scenario: Scenario,
    pub base: Lattice,
    pub elements: Vec<ElementReport>,
    pub orbit: OrbitReport,
    pub group: GroupReport,
    pub subgroups: Vec<SubgroupReport>,
    pub fc: Vec<FcEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub building: Option<BuildingReport>,
    pub assertions: Vec<AssertionResult>,
    pub passed: bool,
}

/// Exponents are of `p`; distances are in `p`-units.
#[derive(Debug, Clone, Serialize)]
pub struct ElementReport {
    pub label: String,
    pub scale_exp: u64,
    pub inverse_scale_exp: u64,
    pub displacement_at_base: u64,
    pub minimizing_at_base: bool,
    pub finite_order: Option<u32>,
    pub tidy_lattice: Lattice,
    pub tidy_certified: bool,
    pub tidy_steps: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct OrbitReport {
    pub depth: usize,
    /// `(r, |{w·base : |w| <= r}|)`
    pub counts: Vec<(u64, u64)>,
    pub growth: Option<GrowthFit>,
    /// least `d` making the orbit ball `d`-connected
    pub coarse_threshold: Option<u64>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct GroupReport {
    pub flatness: FlatnessReport,
    pub roots: Option<RootData>,
    pub rank: Option<usize>,
    pub norm: Option<NormCheck>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct NormCheck {
    pub words_checked: usize,
    pub max_word_length: usize,
    /// `(word, displacement, root norm)`
    pub mismatches: Vec<(String, u64, u64)>,
    /// `(k, displacement of g^k)` for a cyclic group
    pub cyclic: Vec<(i64, u64)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SubgroupReport {
    pub name: String,
    pub generators: Vec<String>,
    pub group: GroupReport,
    pub orbit: OrbitReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct FcEntry {
    pub element: String,
    pub verdict: FcVerdict,
}

#[derive(Debug, Clone, Serialize)]
pub struct BuildingReport {
    pub model: &'static str,
    pub radius: u64,
    pub elements: Vec<TreeElementReport>,
    pub orbit_counts: Vec<(u64, u64)>,
    pub orbit_growth: Option<GrowthFit>,
    pub monomial: Option<MonomialSummary>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TreeElementReport {
    pub label: String,
    pub translation_length: u64,
    pub translation_attaining: usize,
    pub translation_on_apartment: bool,
    pub chamber_min: u64,
    pub chamber_attaining: usize,
    pub chamber_on_apartment: bool,
    pub monomial: Option<MonomialElement>,
    pub monomial_verdict: Option<MonomialVerdict>,
}

#[derive(Debug, Clone, Serialize)]
pub struct MonomialSummary {
    pub examined: usize,
    pub bounded: Vec<String>,
    pub translations: Vec<String>,
    pub bounded_is_translation: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct AssertionResult {
    pub expectation: Expectation,
    pub passed: bool,
    pub detail: String,
}

const TREE_MODEL: &str = "Bruhat-Tits tree of SL_2(Q_p): vertices are homothety classes of lattices; \
results describe the action on the tree, not indices in the group itself";

pub fn run_scenario(sc: &Scenario) -> Result<Report> {
    let p = sc.prime()?;
    let gens = sc.genset()?;
    let base = sc.base_lattice()?;
    let d = sc.depths;

    let named = sc.named_elements()?;
    let mut elements = Vec::with_capacity(named.len());
    for (label, g) in &named {
        elements.push(element_report(label, g, &base)?);
    }

    let orbit = orbit_report(&gens, &base, d.orbit_depth)?;
    let group = group_report(&gens, sc)?;

    let mut subgroups = Vec::new();
    for s in &sc.subgroups {
        let sub = sc.subgroup(&s.name)?;
        subgroups.push(SubgroupReport {
            name: s.name.clone(),
            generators: s.generators.clone(),
            group: group_report(&sub, sc)?,
            orbit: orbit_report(&sub, &base, d.orbit_depth)?,
        });
    }

    let mut fc = Vec::new();
    for (label, g) in &named {
        fc.push(FcEntry {
            element: label.clone(),
            verdict: fc_membership(g, &gens, d.fc_depth, &base)?,
        });
    }

    let building = if d.tree_radius > 0 && sc.dim == 2 {
        Some(building_report(&gens, &named, p, d.tree_radius, d.orbit_depth, d.fc_depth)?)
    } else {
        None
    };

    let mut report = Report {
        schema_version: SCHEMA_VERSION,
        tool_version: env!("CARGO_PKG_VERSION"),
        scenario: sc.clone(),
        base,
        elements,
        orbit,
        group,
        subgroups,
        fc,
        building,
        assertions: Vec::new(),
        passed: true,
    };
    report.assertions = sc.expectations.iter().map(|e| evaluate(e, &report, sc)).collect();
    report.passed = report.assertions.iter().all(|a| a.passed);
    Ok(report)
}

fn element_report(label: &str, g: &Automorphism, base: &Lattice) -> Result<ElementReport> {
    let tidy = tidy_for_cyclic(g, default_max_steps(g))?;
    Ok(ElementReport {
        label: label.to_string(),
        scale_exp: scale_newton(g).exponent,
        inverse_scale_exp: scale_newton(&g.inv()).exponent,
        displacement_at_base: displacement(g, base)?.units(),
        minimizing_at_base: is_minimizing(g, base)?,
        finite_order: g.finite_order(TORSION_ORDER_BOUND),
        tidy_lattice: tidy.lattice,
        tidy_certified: tidy.certified,
        tidy_steps: tidy.steps,
    })
}

fn orbit_report(gens: &GenSet, base: &Lattice, depth: usize) -> Result<OrbitReport> {
    let counts = orbit_counts(gens, base, depth)?;
    let mut notes = Vec::new();
    let growth = match growth_degree(&counts) {
        Ok(f) => Some(f),
        Err(e) => {
            notes.push(format!("no growth fit: {e}"));
            None
        }
    };
    let size = counts.last().map_or(0, |c| c.1) as usize;
    let coarse_threshold = if size <= COARSE_THRESHOLD_LIMIT {
        Some(coarse_threshold(&orbit_points(gens, base, depth)?)?.units())
    } else {
        notes.push(format!(
            "coarse threshold skipped: {size} orbit points exceed {COARSE_THRESHOLD_LIMIT}"
        ));
        None
    };
    Ok(OrbitReport {
        depth,
        counts,
        growth,
        coarse_threshold,
        notes,
    })
}

fn group_report(gens: &GenSet, sc: &Scenario) -> Result<GroupReport> {
    let flatness = certify_flat(gens, sc.depths.flat_depth, sc.depths.search_radius)?;
    let mut notes = Vec::new();
    let certified = matches!(flatness.verdict, FlatVerdict::CertifiedToDepth { .. });
    let (roots, rank) = match diagonal_exponents(gens) {
        Ok(e) => {
            let r = diagonal_roots(&e);
            let rank = r.rank;
            (Some(r), certified.then_some(rank))
        }
        Err(_) => {
            notes.push("roots are only computed for diagonal generators".to_string());
            (None, None)
        }
    };
    let norm = match (&flatness.candidate, certified) {
        (Some(o), true) => Some(norm_check(gens, o, roots.as_ref(), sc.depths.flat_depth)?),
        _ => None,
    };
    Ok(GroupReport {
        flatness,
        roots,
        rank,
        norm,
        notes,
    })
}

fn norm_check(gens: &GenSet, o: &Lattice, roots: Option<&RootData>, depth: usize) -> Result<NormCheck> {
    let max_word_length = depth.min(NORM_WORD_LIMIT);
    let mut words_checked = 0;
    let mut mismatches = Vec::new();
    if let Some(roots) = roots {
        for w in gens.reduced_words(max_word_length) {
            let d = displacement(&gens.evaluate(&w), o)?.units();
            let norm = roots.norm(&gens.exponent_vector(&w));
            words_checked += 1;
            if d != norm {
                mismatches.push((gens.word_label(&w), d, norm));
            }
        }
    }
    let mut cyclic = Vec::new();
    if gens.generator_count() == 1 {
        let g = gens.generator(0);
        for k in -(depth as i64)..=depth as i64 {
            cyclic.push((k, displacement(&g.pow(k), o)?.units()));
        }
    }
    Ok(NormCheck {
        words_checked,
        max_word_length,
        mismatches,
        cyclic,
    })
}

fn building_report(
    gens: &GenSet,
    named: &[(String, Automorphism)],
    p: Prime,
    radius: u64,
    orbit_depth: usize,
    conj_depth: usize,
) -> Result<BuildingReport> {
    let mut elements = Vec::new();
    for (label, g) in named {
        let t = tree_translation_length(g.matrix(), p, radius)?;
        let c = chamber_min_displacement(g.matrix(), p, radius)?;
        let monomial = MonomialElement::from_matrix(g.matrix(), p);
        let monomial_verdict = monomial.as_ref().map(|m| monomial_bounded_class(m, conj_depth));
        elements.push(TreeElementReport {
            label: label.clone(),
            translation_length: t.length,
            translation_attaining: t.attaining.len(),
            translation_on_apartment: t.attained_on_apartment,
            chamber_min: c.min,
            chamber_attaining: c.attaining.len(),
            chamber_on_apartment: c.apartment_attains,
            monomial,
            monomial_verdict,
        });
    }
    let monomial = {
        let mono: Vec<&TreeElementReport> = elements.iter().filter(|e| e.monomial.is_some()).collect();
        (!mono.is_empty()).then(|| {
            let pick = |f: &dyn Fn(&TreeElementReport) -> bool| -> Vec<String> {
                mono.iter().filter(|e| f(e)).map(|e| e.label.clone()).collect()
            };
            let bounded = pick(&|e| e.monomial_verdict.as_ref().is_some_and(MonomialVerdict::is_bounded));
            let translations = pick(&|e| e.monomial.as_ref().is_some_and(MonomialElement::is_translation));
            MonomialSummary {
                examined: mono.len(),
                bounded_is_translation: bounded == translations,
                bounded,
                translations,
            }
        })
    };
    let orbit_counts = tree_orbit_counts(gens, orbit_depth)?;
    Ok(BuildingReport {
        model: TREE_MODEL,
        radius,
        elements,
        orbit_growth: growth_degree(&orbit_counts).ok(),
        orbit_counts,
        monomial,
    })
}

fn group_for<'a>(report: &'a Report, subgroup: &Option<String>) -> Option<&'a GroupReport> {
    match subgroup {
        None => Some(&report.group),
        Some(name) => report.subgroups.iter().find(|s| &s.name == name).map(|s| &s.group),
    }
}

fn orbit_for<'a>(report: &'a Report, subgroup: &Option<String>) -> Option<&'a OrbitReport> {
    match subgroup {
        None => Some(&report.orbit),
        Some(name) => report.subgroups.iter().find(|s| &s.name == name).map(|s| &s.orbit),
    }
}

fn verdict_name(v: &FlatVerdict) -> FlatExpect {
    match v {
        FlatVerdict::CertifiedToDepth { .. } => FlatExpect::Certified,
        FlatVerdict::RefutedAtWord { .. } => FlatExpect::Refuted,
        FlatVerdict::Inconclusive { .. } => FlatExpect::Inconclusive,
    }
}

fn fc_name(v: &FcVerdict) -> FcExpect {
    match v {
        FcVerdict::BoundedToDepth { .. } => FcExpect::Bounded,
        FcVerdict::Escaping { .. } => FcExpect::Escaping,
        FcVerdict::Inconclusive { .. } => FcExpect::Inconclusive,
    }
}

fn evaluate(e: &Expectation, report: &Report, sc: &Scenario) -> AssertionResult {
    let (passed, detail) = check(e, report, sc);
    AssertionResult {
        expectation: e.clone(),
        passed,
        detail,
    }
}

fn missing(what: &str) -> (bool, String) {
    (false, format!("{what} not found in the report"))
}

fn check(e: &Expectation, report: &Report, sc: &Scenario) -> (bool, String) {
    match e {
        Expectation::GrowthDegree { equals, subgroup } => match orbit_for(report, subgroup) {
            None => missing("subgroup"),
            Some(o) => match &o.growth {
                None => (false, "no growth fit".into()),
                Some(f) => (f.degree == *equals, format!("degree {} (slope {:.3})", f.degree, f.slope)),
            },
        },
        Expectation::CoarseThreshold { equals } => match report.orbit.coarse_threshold {
            None => (false, "threshold not computed".into()),
            Some(t) => (t == *equals, format!("threshold {t}")),
        },
        Expectation::Flat { verdict, subgroup } => match group_for(report, subgroup) {
            None => missing("subgroup"),
            Some(g) => {
                let got = verdict_name(&g.flatness.verdict);
                (got == *verdict, format!("{:?}", g.flatness.verdict))
            }
        },
        Expectation::Rank { equals, subgroup } => match group_for(report, subgroup) {
            None => missing("subgroup"),
            Some(g) => match g.rank {
                None => (false, "rank unavailable (not certified flat or not diagonal)".into()),
                Some(r) => (r == *equals, format!("rank {r}")),
            },
        },
        Expectation::Roots { equals, subgroup } => match group_for(report, subgroup).and_then(|g| g.roots.as_ref()) {
            None => missing("roots"),
            Some(r) => {
                let mut got: Vec<Vec<i64>> = r.roots.iter().map(|x| x.functional.clone()).collect();
                let mut want = equals.clone();
                got.sort();
                want.sort();
                (got == want, format!("roots {got:?}"))
            }
        },
        Expectation::Norm {
            subgroup,
            cyclic_coefficient,
        } => match group_for(report, subgroup).and_then(|g| g.norm.as_ref()) {
            None => missing("certified norm data"),
            Some(n) => {
                let mut ok = n.mismatches.is_empty() && n.words_checked > 0;
                let mut detail = format!("{} words, {} mismatches", n.words_checked, n.mismatches.len());
                if let Some(c) = cyclic_coefficient {
                    let cyc_ok = !n.cyclic.is_empty() && n.cyclic.iter().all(|&(k, d)| d == c * k.unsigned_abs());
                    ok &= cyc_ok;
                    detail.push_str(&format!("; cyclic {:?}", n.cyclic));
                }
                (ok, detail)
            }
        },
        Expectation::Scale { element, equals } => match sc.resolve(element) {
            Err(err) => (false, err.to_string()),
            Ok(g) => {
                let s = scale_newton(&g).exponent;
                (s == *equals, format!("scale exponent {s}"))
            }
        },
        Expectation::Fc {
            element,
            verdict,
            linear_step,
        } => match report.fc.iter().find(|f| &f.element == element) {
            None => missing("fc entry"),
            Some(f) => {
                let mut ok = fc_name(&f.verdict) == *verdict;
                if let (
                    Some(step),
                    FcVerdict::Escaping {
                        base_displacement,
                        displacements,
                        ..
                    },
                ) = (linear_step, &f.verdict)
                {
                    ok &= displacements
                        .iter()
                        .enumerate()
                        .all(|(k, &d)| d == base_displacement + step * (k as u64 + 1));
                }
                (ok, format!("{:?}", f.verdict))
            }
        },
        Expectation::TranslationLength {
            element,
            equals,
            on_apartment,
        } => match tree_entry(report, element) {
            None => missing("tree entry"),
            Some(t) => {
                let ok = t.translation_length == *equals && on_apartment.is_none_or(|a| a == t.translation_on_apartment);
                (
                    ok,
                    format!("length {}, on apartment {}", t.translation_length, t.translation_on_apartment),
                )
            }
        },
        Expectation::ChamberOnApartment { element } => match tree_entry(report, element) {
            None => missing("tree entry"),
            Some(t) => (t.chamber_on_apartment, format!("min chamber displacement {}", t.chamber_min)),
        },
        Expectation::TreeGrowthDegree { equals } => {
            match report.building.as_ref().and_then(|b| b.orbit_growth.as_ref()) {
                None => missing("tree growth fit"),
                Some(f) => (f.degree == *equals, format!("degree {} (slope {:.3})", f.degree, f.slope)),
            }
        }
        Expectation::MonomialBoundedIsTranslation { count } => {
            match report.building.as_ref().and_then(|b| b.monomial.as_ref()) {
                None => missing("monomial summary"),
                Some(m) => {
                    let ok = m.bounded_is_translation && count.is_none_or(|c| c == m.examined);
                    (
                        ok,
                        format!(
                            "{} examined; bounded {:?}; translations {:?}",
                            m.examined, m.bounded, m.translations
                        ),
                    )
                }
            }
        }
    }
}

fn tree_entry<'a>(report: &'a Report, element: &str) -> Option<&'a TreeElementReport> {
    report.building.as_ref()?.elements.iter().find(|t| t.label == element)
}

/// DOT for the scenario's orbit ball.
pub fn orbit_dot(sc: &Scenario) -> Result<String> {
    let g = orbit_ball(&sc.genset()?, &sc.base_lattice()?, sc.depths.orbit_depth)?;
    Ok(g.to_dot())
}
