use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::gsemo::GsemoConfig;
use crate::noise::NoiseModel;
use crate::nsga2::Nsga2Config;
use crate::objectives::ObjectiveId;

pub const DEFAULT_RUNS: usize = 50;
pub const DEFAULT_SEED: u64 = 1;

/// `10 n^3` fitness evaluations.
pub fn default_budget(n: usize) -> u64 {
    10 * (n as u64).pow(3)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AlgorithmKind {
    Nsga2,
    Gsemo,
}

impl AlgorithmKind {
    pub fn name(self) -> &'static str {
        match self {
            AlgorithmKind::Nsga2 => "nsga2",
            AlgorithmKind::Gsemo => "gsemo",
        }
    }
}

impl fmt::Display for AlgorithmKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AlgorithmKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "nsga2" | "nsga-ii" | "nsgaii" => Ok(AlgorithmKind::Nsga2),
            "gsemo" => Ok(AlgorithmKind::Gsemo),
            _ => Err(Error::InvalidConfig(format!("unknown algorithm {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "lowercase")]
pub enum AlgorithmConfig {
    Nsga2(Nsga2Config),
    Gsemo(GsemoConfig),
}

impl AlgorithmConfig {
    /// Defaults for problem size `n`.
    pub fn default_for(kind: AlgorithmKind, n: usize) -> Self {
        match kind {
            AlgorithmKind::Nsga2 => AlgorithmConfig::Nsga2(Nsga2Config::for_problem_size(n)),
            AlgorithmKind::Gsemo => AlgorithmConfig::Gsemo(GsemoConfig::default()),
        }
    }

    pub fn kind(&self) -> AlgorithmKind {
        match self {
            AlgorithmConfig::Nsga2(_) => AlgorithmKind::Nsga2,
            AlgorithmConfig::Gsemo(_) => AlgorithmKind::Gsemo,
        }
    }

    pub fn mu(&self) -> Option<usize> {
        match self {
            AlgorithmConfig::Nsga2(c) => Some(c.mu),
            AlgorithmConfig::Gsemo(_) => None,
        }
    }

    pub fn p_c(&self) -> f64 {
        match self {
            AlgorithmConfig::Nsga2(c) => c.p_c,
            AlgorithmConfig::Gsemo(c) => c.p_c,
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            AlgorithmConfig::Nsga2(c) => c.validate(),
            AlgorithmConfig::Gsemo(c) => c.validate(),
        }
    }
}

/// One experiment cell: an algorithm on an objective under a noise model,
/// repeated `runs` times.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub algorithm: AlgorithmConfig,
    pub objective: ObjectiveId,
    pub n: usize,
    pub noise: NoiseModel,
    pub runs: usize,
    /// Runs stop once more than this many fitness evaluations were spent.
    pub budget: u64,
    /// Base seed; the cell seed is derived from it and the cell coordinates.
    pub seed: u64,
    /// Record per-generation coverage.
    pub trace: bool,
}

impl ExperimentConfig {
    /// Defaults: `10 n^3` budget, 50 runs, `mu = 9(n+1)`, `p_c = 0.9`,
    /// one-point crossover, rate `1/n`.
    pub fn new(kind: AlgorithmKind, objective: ObjectiveId, n: usize, noise: NoiseModel) -> Self {
        Self {
            algorithm: AlgorithmConfig::default_for(kind, n),
            objective,
            n,
            noise,
            runs: DEFAULT_RUNS,
            budget: default_budget(n),
            seed: DEFAULT_SEED,
            trace: false,
        }
    }

    pub fn with_runs(mut self, runs: usize) -> Self {
        self.runs = runs;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_trace(mut self, trace: bool) -> Self {
        self.trace = trace;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidConfig(
                "problem size must be at least 1".into(),
            ));
        }
        if self.runs == 0 {
            return Err(Error::InvalidConfig("runs must be at least 1".into()));
        }
        if self.budget == 0 {
            return Err(Error::InvalidConfig("budget must be at least 1".into()));
        }
        self.noise.validate()?;
        self.algorithm.validate()
    }

    /// Seed of this cell: a hash of the base seed and every coordinate that
    /// distinguishes the cell, so cells of a sweep are independent and a
    /// cell reproduces outside the sweep that contained it.
    pub fn cell_seed(&self) -> u64 {
        #[derive(Serialize)]
        struct Coordinates<'a> {
            algorithm: &'a AlgorithmConfig,
            objective: ObjectiveId,
            n: usize,
            noise: &'a NoiseModel,
            budget: u64,
        }
        let coords = serde_json::to_string(&Coordinates {
            algorithm: &self.algorithm,
            objective: self.objective,
            n: self.n,
            noise: &self.noise,
            budget: self.budget,
        })
        .expect("coordinates serialise");
        derive_seed(self.seed, coords.as_bytes())
    }

    pub fn run_seed(&self, run_index: usize) -> u64 {
        derive_seed(self.cell_seed(), &(run_index as u64).to_le_bytes())
    }
}

/// First eight bytes of `SHA-256(seed || data)`, little endian.
pub fn derive_seed(seed: u64, data: &[u8]) -> u64 {
    let mut h = Sha256::new();
    h.update(seed.to_le_bytes());
    h.update(data);
    let digest = h.finalize();
    u64::from_le_bytes(digest[..8].try_into().expect("digest has 32 bytes"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let c = ExperimentConfig::new(
            AlgorithmKind::Nsga2,
            ObjectiveId::Lotz,
            20,
            NoiseModel::None,
        );
        assert_eq!(c.budget, 80_000);
        assert_eq!(c.algorithm.mu(), Some(189));
        assert_eq!(c.algorithm.p_c(), 0.9);
        assert_eq!(c.runs, 50);
        assert!(c.validate().is_ok());
    }

    #[test]
    fn validation_rejects_degenerate_cells() {
        let base =
            ExperimentConfig::new(AlgorithmKind::Gsemo, ObjectiveId::Omm, 5, NoiseModel::None);
        assert!(base.clone().with_runs(0).validate().is_err());
        let mut c = base.clone();
        c.budget = 0;
        assert!(c.validate().is_err());
        let mut c = base;
        c.noise = NoiseModel::Bernoulli { delta: 6.0, p: 2.0 };
        assert!(c.validate().is_err());
    }

    #[test]
    fn seeds_depend_on_every_coordinate() {
        let a = ExperimentConfig::new(
            AlgorithmKind::Nsga2,
            ObjectiveId::Lotz,
            20,
            NoiseModel::None,
        );
        let mut seeds = vec![a.cell_seed()];
        seeds.push(a.clone().with_seed(2).cell_seed());
        let mut b = a.clone();
        b.objective = ObjectiveId::Omm;
        seeds.push(b.cell_seed());
        let mut b = a.clone();
        b.noise = NoiseModel::Bernoulli {
            delta: 21.0,
            p: 0.25,
        };
        seeds.push(b.cell_seed());
        let mut b = a.clone();
        b.noise = NoiseModel::Bernoulli {
            delta: 21.0,
            p: 0.5,
        };
        seeds.push(b.cell_seed());
        seeds.push(a.run_seed(0));
        seeds.push(a.run_seed(1));
        let mut uniq = seeds.clone();
        uniq.sort();
        uniq.dedup();
        assert_eq!(uniq.len(), seeds.len());
        // Trace and run count are not coordinates.
        assert_eq!(
            a.clone().with_trace(true).with_runs(3).cell_seed(),
            a.cell_seed()
        );
    }

    #[test]
    fn parse_algorithm() {
        assert_eq!(
            "NSGA2".parse::<AlgorithmKind>().unwrap(),
            AlgorithmKind::Nsga2
        );
        assert_eq!(
            "gsemo".parse::<AlgorithmKind>().unwrap(),
            AlgorithmKind::Gsemo
        );
        assert!("semo".parse::<AlgorithmKind>().is_err());
    }
}
