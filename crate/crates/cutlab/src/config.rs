//! Experiment configuration, read from TOML.
//!
//! ```toml
//! seed = 2024                 # root of every derived seed
//! p = [1, 2, 3, 4]            # layer counts
//! seeds = 3                   # seeded optimizer runs per cell
//! restarts = 4                # random starts per run
//! perturbations = ["base", "shadow:1", "shadow:2", "pendant", "delete"]
//! warm_start = true           # seed p-layer runs with the (p-1)-layer optimum
//! timing = false              # fill runtime_ms (makes the CSV non-reproducible)
//!
//! [optimizer]
//! initial_step = 0.3
//! xtol = 1e-6
//! max_iterations = 2000
//!
//! [[graph]]
//! id = "K4"
//! family = "complete"
//! n = 4
//! ```
//!
//! Graph entries take the same fields as `cutlab gen`: `family` plus
//! `n`, `q`, `height`, `arity`, `degree`, `leaves` and `seed` as the family
//! requires.

use std::collections::HashSet;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use cutlab_core::graph::{
    complete, cycle, empty, erdos_renyi, full_binary_tree, full_rary_tree, path, random_regular,
    star, Graph, PerturbationKind,
};
use cutlab_core::qaoa::{NelderMeadConfig, OptimizerConfig};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A member of one of the generator families.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    pub family: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub height: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arity: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub leaves: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl GraphSpec {
    pub fn new(family: &str) -> Self {
        Self {
            id: None,
            family: family.into(),
            n: None,
            q: None,
            height: None,
            arity: None,
            degree: None,
            leaves: None,
            seed: None,
        }
    }

    fn need<T: Copy>(&self, value: Option<T>, name: &str) -> Result<T> {
        value.ok_or_else(|| Error::Config(format!("family {} needs `{name}`", self.family)))
    }

    pub fn build(&self) -> Result<Graph> {
        let seed = self.seed.unwrap_or(0);
        Ok(match self.family.as_str() {
            "complete" => complete(self.need(self.n, "n")?),
            "erdos_renyi" => erdos_renyi(self.need(self.n, "n")?, self.need(self.q, "q")?, seed)?,
            "binary_tree" => full_binary_tree(self.need(self.height, "height")?),
            "rary_tree" => full_rary_tree(self.need(self.arity, "arity")?, self.need(self.n, "n")?)?,
            "regular" => random_regular(self.need(self.degree, "degree")?, self.need(self.n, "n")?, seed)?,
            "path" => path(self.need(self.n, "n")?),
            "cycle" => {
                let n = self.need(self.n, "n")?;
                if n < 3 {
                    return Err(Error::Config("cycle needs n >= 3".into()));
                }
                cycle(n)
            }
            "star" => star(self.need(self.leaves, "leaves")?),
            "empty" => empty(self.need(self.n, "n")?),
            other => return Err(Error::Config(format!("unknown family {other:?}"))),
        })
    }
}

/// One column of the experiment grid: the unperturbed graph or a
/// perturbation of it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    Base,
    Perturbed(PerturbationKind),
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Variant::Base => f.write_str("base"),
            Variant::Perturbed(k) => k.fmt(f),
        }
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "base" {
            return Ok(Variant::Base);
        }
        Ok(Variant::Perturbed(s.parse()?))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OptimizerSettings {
    pub initial_step: f64,
    pub xtol: f64,
    pub max_iterations: usize,
}

impl Default for OptimizerSettings {
    fn default() -> Self {
        let d = NelderMeadConfig::default();
        Self {
            initial_step: d.initial_step,
            xtol: d.xtol,
            max_iterations: d.max_iterations,
        }
    }
}

impl OptimizerSettings {
    pub fn to_core(&self) -> OptimizerConfig {
        OptimizerConfig {
            nelder_mead: NelderMeadConfig {
                initial_step: self.initial_step,
                xtol: self.xtol,
                max_iterations: self.max_iterations,
            },
        }
    }
}

fn default_seed() -> u64 {
    2024
}

fn default_p() -> Vec<usize> {
    (1..=8).collect()
}

fn default_seeds() -> usize {
    3
}

fn default_restarts() -> usize {
    4
}

fn default_true() -> bool {
    true
}

pub fn default_perturbations() -> Vec<String> {
    ["base", "shadow:1", "shadow:2", "pendant", "delete"]
        .map(String::from)
        .to_vec()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_p")]
    pub p: Vec<usize>,
    #[serde(default = "default_seeds")]
    pub seeds: usize,
    #[serde(default = "default_restarts")]
    pub restarts: usize,
    #[serde(default = "default_perturbations")]
    pub perturbations: Vec<String>,
    #[serde(default = "default_true")]
    pub warm_start: bool,
    #[serde(default)]
    pub timing: bool,
    #[serde(default)]
    pub optimizer: OptimizerSettings,
    #[serde(rename = "graph", default)]
    pub graphs: Vec<GraphSpec>,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?)
    }

    /// The built-in configuration, also shipped as `configs/default.toml`.
    pub fn default_config() -> Self {
        Self::from_toml(DEFAULT_CONFIG).expect("built-in config is valid")
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Config(m.into()));
        if self.graphs.is_empty() {
            return bad("at least one [[graph]] entry is required");
        }
        if self.p.is_empty() || self.p.contains(&0) {
            return bad("p must list layer counts >= 1");
        }
        if self.seeds == 0 {
            return bad("seeds must be >= 1");
        }
        if self.restarts == 0 {
            return bad("restarts must be >= 1");
        }
        let variants = self.variants()?;
        if variants.first() != Some(&Variant::Base) {
            return bad("perturbations must start with \"base\"");
        }
        let mut seen = HashSet::new();
        if !variants.iter().all(|v| seen.insert(*v)) {
            return bad("duplicate perturbation");
        }
        let mut ids = HashSet::new();
        for (i, g) in self.graphs.iter().enumerate() {
            if !ids.insert(self.graph_id(i)) {
                return Err(Error::Config(format!("duplicate graph id {:?}", self.graph_id(i))));
            }
            g.build()?;
        }
        Ok(())
    }

    pub fn variants(&self) -> Result<Vec<Variant>> {
        self.perturbations.iter().map(|s| s.parse()).collect()
    }

    /// Layer counts in increasing order, without repeats.
    pub fn layers(&self) -> Vec<usize> {
        let mut p = self.p.clone();
        p.sort_unstable();
        p.dedup();
        p
    }

    pub fn graph_id(&self, index: usize) -> String {
        let g = &self.graphs[index];
        g.id.clone().unwrap_or_else(|| format!("g{index}"))
    }
}

pub const DEFAULT_CONFIG: &str = include_str!("../../../configs/default.toml");
