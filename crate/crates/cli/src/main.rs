use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use tdlc_cli::report::orbit_dot;
use tdlc_cli::{run_checks, run_scenario, Scenario};
use tdlc_core::autoscale::{default_max_steps, scale_bruteforce, scale_newton, tidy_for_cyclic};
use tdlc_core::building::{chamber_min_displacement, tree_ball_dot, tree_translation_length, TreeVertex};
use tdlc_core::exactnum::parse_matrix;
use tdlc_core::flatgeom::{certify_flat, fc_membership, orbit_ball, GenSet};
use tdlc_core::{Automorphism, Lattice, Prime};

#[derive(Parser)]
#[command(name = "tdlc", version, about = "Scale, flatness and growth for groups acting on p-adic lattices")]
struct Cli {
    /// Write the JSON result to this path
    #[arg(long, global = true, value_name = "PATH")]
    json: Option<PathBuf>,
    /// Write a DOT graph to this path
    #[arg(long, global = true, value_name = "PATH")]
    dot: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct Setting {
    /// The prime
    #[arg(long)]
    p: u64,
    /// Ambient dimension; needed for `I`, otherwise read off the matrices
    #[arg(long)]
    dim: Option<usize>,
}

impl Setting {
    fn prime(&self) -> Result<Prime> {
        Ok(Prime::new(self.p)?)
    }

    fn automorphism(&self, text: &str) -> Result<Automorphism> {
        let p = self.prime()?;
        Automorphism::new(parse_matrix(text, p, self.dim)?, p).with_context(|| format!("`{text}`"))
    }

    fn lattice(&self, text: &str) -> Result<Lattice> {
        let p = self.prime()?;
        Lattice::canonicalize(&parse_matrix(text, p, self.dim)?, p).with_context(|| format!("`{text}`"))
    }

    /// Generators written `label=MATRIX` or just `MATRIX`.
    fn genset(&self, specs: &[String]) -> Result<GenSet> {
        let mut gens = Vec::new();
        for (i, s) in specs.iter().enumerate() {
            let (label, m) = match s.split_once('=') {
                Some((l, m)) => (l.trim().to_string(), m),
                None => (format!("g{}", i + 1), s.as_str()),
            };
            gens.push((label, self.automorphism(m)?));
        }
        Ok(GenSet::new(gens)?)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Scale of an automorphism and of its inverse
    Scale {
        #[command(flatten)]
        setting: Setting,
        matrix: String,
        /// Also minimize over the ball of this radius
        #[arg(long)]
        radius: Option<u32>,
    },
    /// Distance between the lattices spanned by the columns of two matrices
    Distance {
        #[command(flatten)]
        setting: Setting,
        a: String,
        b: String,
    },
    /// Orbit of the standard lattice: growth and coarse connectivity
    Orbit {
        #[command(flatten)]
        setting: Setting,
        #[arg(long, default_value_t = 6)]
        depth: usize,
        #[arg(required = true)]
        generators: Vec<String>,
    },
    /// Search for a lattice minimizing for every word up to a depth
    Flat {
        #[command(flatten)]
        setting: Setting,
        #[arg(long, default_value_t = 4)]
        depth: usize,
        #[arg(long, default_value_t = 2)]
        radius: u32,
        #[arg(required = true)]
        generators: Vec<String>,
    },
    /// Whether the conjugacy class of an element is bounded
    Fc {
        #[command(flatten)]
        setting: Setting,
        #[arg(long, default_value_t = 4)]
        depth: usize,
        /// A word in the generator labels
        #[arg(long)]
        element: String,
        #[arg(required = true)]
        generators: Vec<String>,
    },
    /// Translation length and chamber displacement on the tree, or a ball
    Tree {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 3)]
        radius: u64,
        matrix: Option<String>,
    },
    #[command(subcommand)]
    Scenario(ScenarioCommand),
    /// Seeded property suites
    Check {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
}

#[derive(Subcommand)]
enum ScenarioCommand {
    /// Run a built-in scenario or a scenario file
    Run { scenario: String },
    /// List the built-in scenarios
    List,
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn emit<T: Serialize>(cli: &Cli, value: &T) -> Result<()> {
    if let Some(path) = &cli.json {
        write_json(path, value)?;
    }
    Ok(())
}

fn write_dot(path: &Path, dot: &str) -> Result<()> {
    fs::write(path, dot).with_context(|| format!("writing {}", path.display()))
}

fn run(cli: &Cli) -> Result<bool> {
    match &cli.command {
        Command::Scale {
            setting,
            matrix,
            radius,
        } => {
            let g = setting.automorphism(matrix)?;
            let fwd = scale_newton(&g);
            let bwd = scale_newton(&g.inv());
            let tidy = tidy_for_cyclic(&g, default_max_steps(&g))?;
            println!("scale exponent {}", fwd.exponent);
            println!("inverse scale exponent {}", bwd.exponent);
            println!(
                "tidy lattice {} ({})",
                tidy.lattice,
                if tidy.certified { "certified" } else { "not certified" }
            );
            let brute = match radius {
                Some(r) => {
                    let w = scale_bruteforce(&g, *r)?;
                    println!("ball minimum {} at {}", w.scale.exponent, w.lattice);
                    Some(w)
                }
                None => None,
            };
            emit(
                cli,
                &serde_json::json!({
                    "scale_exp": fwd.exponent,
                    "inverse_scale_exp": bwd.exponent,
                    "tidy": tidy,
                    "bruteforce": brute,
                }),
            )?;
            Ok(brute.is_none_or(|w| w.scale == fwd))
        }
        Command::Distance { setting, a, b } => {
            let (la, lb) = (setting.lattice(a)?, setting.lattice(b)?);
            let d = la.dist(&lb)?;
            let p = setting.prime()?;
            println!("{} units (= {:.6} as a log, derived)", d.units(), d.as_log(p));
            emit(
                cli,
                &serde_json::json!({
                    "a": la,
                    "b": lb,
                    "distance_units": d.units(),
                    "index_a_over_meet_exp": la.index_over_meet(&lb)?,
                    "index_b_over_meet_exp": lb.index_over_meet(&la)?,
                }),
            )?;
            Ok(true)
        }
        Command::Orbit {
            setting,
            depth,
            generators,
        } => {
            let gens = setting.genset(generators)?;
            let base = Lattice::standard(gens.dim(), gens.prime());
            let graph = orbit_ball(&gens, &base, *depth)?;
            let threshold = tdlc_core::flatgeom::coarse_threshold(
                &graph.vertices.iter().map(|v| v.lattice.clone()).collect::<Vec<_>>(),
            )?;
            for (r, c) in graph.counts_by_radius() {
                println!("r={r} count={c}");
            }
            match graph.degree_fit() {
                Some(f) => println!("growth degree {} (slope {:.3}, residual {:.3})", f.degree, f.slope, f.residual),
                None => println!("growth degree: too few radii"),
            }
            println!("coarse threshold {}", threshold.units());
            if let Some(path) = &cli.dot {
                write_dot(path, &graph.to_dot())?;
            }
            let mut json = graph.to_json();
            json["coarse_threshold"] = serde_json::json!(threshold.units());
            emit(cli, &json)?;
            Ok(true)
        }
        Command::Flat {
            setting,
            depth,
            radius,
            generators,
        } => {
            let gens = setting.genset(generators)?;
            let report = certify_flat(&gens, *depth, *radius)?;
            println!("{:?}", report.verdict);
            if let Some(l) = &report.candidate {
                println!(
                    "candidate {l} ({})",
                    report.candidate_source.as_deref().unwrap_or("unknown")
                );
            }
            for f in report.failures.iter().take(10) {
                println!(
                    "  {}: displacement {} but scales sum to {}",
                    f.word, f.displacement_exp, f.scale_sum_exp
                );
            }
            emit(cli, &report)?;
            Ok(true)
        }
        Command::Fc {
            setting,
            depth,
            element,
            generators,
        } => {
            let gens = setting.genset(generators)?;
            let phi = gens.evaluate(&gens.parse_word(element)?);
            let base = Lattice::standard(gens.dim(), gens.prime());
            let v = fc_membership(&phi, &gens, *depth, &base)?;
            println!("{v:?}");
            emit(cli, &v)?;
            Ok(true)
        }
        Command::Tree { p, radius, matrix } => {
            let p = Prime::new(*p)?;
            if let Some(path) = &cli.dot {
                write_dot(path, &tree_ball_dot(&TreeVertex::standard(p), *radius))?;
            }
            match matrix {
                None => {
                    let n = tdlc_core::building::tree_ball(&TreeVertex::standard(p), *radius).len();
                    println!("{n} vertices within distance {radius} of the standard vertex");
                    emit(cli, &serde_json::json!({ "radius": radius, "vertices": n }))?;
                }
                Some(m) => {
                    let g = parse_matrix(m, p, Some(2))?;
                    let t = tree_translation_length(&g, p, *radius)?;
                    let c = chamber_min_displacement(&g, p, *radius)?;
                    println!(
                        "translation length {} ({} vertices, on apartment: {})",
                        t.length,
                        t.attaining.len(),
                        t.attained_on_apartment
                    );
                    println!(
                        "min chamber displacement {} ({} edges, on apartment: {})",
                        c.min,
                        c.attaining.len(),
                        c.apartment_attains
                    );
                    emit(cli, &serde_json::json!({ "translation": t, "chamber": c }))?;
                }
            }
            Ok(true)
        }
        Command::Scenario(ScenarioCommand::List) => {
            for name in Scenario::builtin_names() {
                let sc = Scenario::builtin(name).expect("listed");
                println!("{name:16} {}", sc.description.unwrap_or_default());
            }
            Ok(true)
        }
        Command::Scenario(ScenarioCommand::Run { scenario }) => {
            let sc = Scenario::load(scenario)?;
            let report = run_scenario(&sc)?;
            match &cli.json {
                Some(path) => {
                    write_json(path, &report)?;
                    for a in &report.assertions {
                        println!("{} {:?}: {}", if a.passed { "ok  " } else { "FAIL" }, a.expectation, a.detail);
                    }
                }
                None => println!("{}", serde_json::to_string_pretty(&report)?),
            }
            if let Some(path) = &cli.dot {
                write_dot(path, &orbit_dot(&sc)?)?;
                if sc.depths.tree_radius > 0 && sc.dim == 2 {
                    let tree = path.with_extension("tree.dot");
                    write_dot(&tree, &tree_ball_dot(&TreeVertex::standard(sc.prime()?), sc.depths.tree_radius))?;
                }
            }
            for a in report.assertions.iter().filter(|a| !a.passed) {
                eprintln!("assertion failed: {:?}: {}", a.expectation, a.detail);
            }
            Ok(report.passed)
        }
        Command::Check { seed, samples } => {
            if *samples == 0 {
                bail!("--samples must be positive");
            }
            let report = run_checks(*seed, *samples)?;
            for s in &report.suites {
                println!("{:28} {} samples, {} violations", s.name, s.samples, s.violations);
                for ex in &s.examples {
                    println!("    {ex}");
                }
            }
            emit(cli, &report)?;
            Ok(report.passed())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
