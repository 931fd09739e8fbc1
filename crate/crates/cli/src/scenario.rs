//! Scenario files: a prime, labelled generators given as grids of entry
//! strings, optional named words and subgroups, depths, and assertions.

use std::path::Path;

use anyhow::{anyhow, bail, ensure, Context, Result};
use serde::{Deserialize, Serialize};
use tdlc_core::exactnum::parse_grid;
use tdlc_core::flatgeom::GenSet;
use tdlc_core::{Automorphism, Lattice, Prime};

const BUILTINS: [(&str, &str); 3] = [
    ("dihedral", include_str!("../scenarios/dihedral.toml")),
    ("torus-3", include_str!("../scenarios/torus-3.toml")),
    ("sl2-normalizer", include_str!("../scenarios/sl2-normalizer.toml")),
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub p: u64,
    pub dim: usize,
    #[serde(rename = "generator")]
    pub generators: Vec<GeneratorSpec>,
    #[serde(default, rename = "element", skip_serializing_if = "Vec::is_empty")]
    pub elements: Vec<ElementSpec>,
    #[serde(default, rename = "subgroup", skip_serializing_if = "Vec::is_empty")]
    pub subgroups: Vec<SubgroupSpec>,
    /// columns span the base lattice; the standard lattice when absent
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<Vec<Vec<String>>>,
    #[serde(default)]
    pub depths: Depths,
    #[serde(default, rename = "expect", skip_serializing_if = "Vec::is_empty")]
    pub expectations: Vec<Expectation>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorSpec {
    pub label: String,
    pub rows: Vec<Vec<String>>,
}

/// A named word in the generators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElementSpec {
    pub label: String,
    pub word: String,
}

/// A subgroup generated by generators or named elements.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubgroupSpec {
    pub name: String,
    pub generators: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Depths {
    pub orbit_depth: usize,
    pub flat_depth: usize,
    pub search_radius: u32,
    pub fc_depth: usize,
    /// 0 skips the tree analysis
    pub tree_radius: u64,
}

impl Default for Depths {
    fn default() -> Self {
        Depths {
            orbit_depth: 6,
            flat_depth: 4,
            search_radius: 2,
            fc_depth: 4,
            tree_radius: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FlatExpect {
    Certified,
    Refuted,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FcExpect {
    Bounded,
    Escaping,
    Inconclusive,
}

/// One assertion. `subgroup` defaults to the whole group.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "check", rename_all = "snake_case", deny_unknown_fields)]
pub enum Expectation {
    GrowthDegree {
        equals: u32,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        subgroup: Option<String>,
    },
    CoarseThreshold {
        equals: u64,
    },
    Flat {
        verdict: FlatExpect,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        subgroup: Option<String>,
    },
    Rank {
        equals: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        subgroup: Option<String>,
    },
    /// Coordinate functionals of the roots, as a set.
    Roots {
        equals: Vec<Vec<i64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        subgroup: Option<String>,
    },
    /// Displacement at the certified lattice equals the root norm on every
    /// checked word; for a cyclic group, optionally `coefficient * |k|`.
    Norm {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        subgroup: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        cyclic_coefficient: Option<u64>,
    },
    Scale {
        element: String,
        equals: u64,
    },
    Fc {
        element: String,
        verdict: FcExpect,
        /// conjugate displacements equal `base + linear_step * k`
        #[serde(default, skip_serializing_if = "Option::is_none")]
        linear_step: Option<u64>,
    },
    TranslationLength {
        element: String,
        equals: u64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        on_apartment: Option<bool>,
    },
    ChamberOnApartment {
        element: String,
    },
    TreeGrowthDegree {
        equals: u32,
    },
    /// Among the monomial elements, bounded classes are exactly the
    /// translations; `count` pins the number of elements examined.
    MonomialBoundedIsTranslation {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        count: Option<usize>,
    },
}

impl Scenario {
    pub fn from_toml(text: &str) -> Result<Self> {
        let sc: Scenario = toml::from_str(text).context("scenario does not parse")?;
        sc.validate()?;
        Ok(sc)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Scenario::from_toml(&text).with_context(|| format!("in {}", path.display()))
    }

    pub fn builtin(name: &str) -> Option<Self> {
        BUILTINS
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, text)| Scenario::from_toml(text).expect("built-in scenarios are valid"))
    }

    pub fn builtin_names() -> Vec<&'static str> {
        BUILTINS.iter().map(|(n, _)| *n).collect()
    }

    /// A built-in name, or else a path.
    pub fn load(name: &str) -> Result<Self> {
        match Scenario::builtin(name) {
            Some(sc) => Ok(sc),
            None => Scenario::from_file(Path::new(name)),
        }
    }

    pub fn prime(&self) -> Result<Prime> {
        Ok(Prime::new(self.p)?)
    }

    fn validate(&self) -> Result<()> {
        let p = self.prime()?;
        ensure!(self.dim >= 1, "dimension must be positive");
        ensure!(!self.generators.is_empty(), "at least one generator is required");
        let d = &self.depths;
        ensure!(
            d.orbit_depth > 0 && d.flat_depth > 0 && d.fc_depth > 0,
            "depths must be positive"
        );
        for g in &self.generators {
            let m = parse_grid(&g.rows, p).with_context(|| format!("generator {}", g.label))?;
            ensure!(
                m.rows() == self.dim && m.cols() == self.dim,
                "generator {} is {}x{}, expected {}x{}",
                g.label,
                m.rows(),
                m.cols(),
                self.dim,
                self.dim
            );
            Automorphism::new(m, p).with_context(|| format!("generator {} is not invertible", g.label))?;
        }
        self.base_lattice()?;
        let gens = self.genset()?;
        for e in &self.elements {
            ensure!(
                self.generators.iter().all(|g| g.label != e.label),
                "element {} shadows a generator",
                e.label
            );
            gens.parse_word(&e.word).with_context(|| format!("element {}", e.label))?;
        }
        for s in &self.subgroups {
            ensure!(!s.generators.is_empty(), "subgroup {} has no generators", s.name);
            for g in &s.generators {
                self.resolve(g).with_context(|| format!("subgroup {}", s.name))?;
            }
        }
        Ok(())
    }

    pub fn genset(&self) -> Result<GenSet> {
        let p = self.prime()?;
        let gens = self
            .generators
            .iter()
            .map(|g| Ok((g.label.clone(), Automorphism::new(parse_grid(&g.rows, p)?, p)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(GenSet::new(gens)?)
    }

    pub fn base_lattice(&self) -> Result<Lattice> {
        let p = self.prime()?;
        match &self.base {
            None => Ok(Lattice::standard(self.dim, p)),
            Some(rows) => {
                let m = parse_grid(rows, p).context("base lattice")?;
                ensure!(m.rows() == self.dim, "base lattice has the wrong dimension");
                Ok(Lattice::canonicalize(&m, p)?)
            }
        }
    }

    /// A generator label, a named element, or a word in the generators.
    pub fn resolve(&self, name: &str) -> Result<Automorphism> {
        let gens = self.genset()?;
        let word = match self.elements.iter().find(|e| e.label == name) {
            Some(e) => e.word.as_str(),
            None => name,
        };
        let w = gens
            .parse_word(word)
            .map_err(|e| anyhow!("`{name}` is neither a named element nor a word: {e}"))?;
        Ok(gens.evaluate(&w))
    }

    /// Generators followed by the named elements.
    pub fn named_elements(&self) -> Result<Vec<(String, Automorphism)>> {
        let gens = self.genset()?;
        let mut out: Vec<(String, Automorphism)> = (0..gens.generator_count())
            .map(|i| (gens.generator_label(i).to_string(), gens.generator(i).clone()))
            .collect();
        for e in &self.elements {
            out.push((e.label.clone(), self.resolve(&e.label)?));
        }
        Ok(out)
    }

    pub fn subgroup(&self, name: &str) -> Result<GenSet> {
        let Some(s) = self.subgroups.iter().find(|s| s.name == name) else {
            bail!("no subgroup named {name}");
        };
        let gens = s
            .generators
            .iter()
            .map(|g| Ok((g.clone(), self.resolve(g)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(GenSet::new(gens)?)
    }
}
