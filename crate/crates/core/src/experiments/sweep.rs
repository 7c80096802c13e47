use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{
    default_budget, AlgorithmConfig, AlgorithmKind, ExperimentConfig, DEFAULT_RUNS, DEFAULT_SEED,
};
use super::report::AggregateReport;
use super::runner::run_single;
use crate::error::{Error, Result};
use crate::noise::NoiseModel;
use crate::objectives::ObjectiveId;
use crate::variation::CrossoverKind;

/// Noise axis of a sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NoiseGrid {
    None,
    /// Bernoulli noise at each `p`; strength `delta`, or `n + 1` when absent.
    Bernoulli {
        ps: Vec<f64>,
        delta: Option<f64>,
    },
    /// Gaussian noise with absolute standard deviations.
    Gaussian {
        sigmas: Vec<f64>,
    },
    /// Gaussian noise with `sigma = n * q` for each `q`.
    GaussianScaled {
        qs: Vec<f64>,
    },
}

impl NoiseGrid {
    fn models(&self, n: usize) -> Vec<NoiseModel> {
        match self {
            NoiseGrid::None => vec![NoiseModel::None],
            NoiseGrid::Bernoulli { ps, delta } => {
                let delta = delta.unwrap_or((n + 1) as f64);
                ps.iter()
                    .map(|&p| NoiseModel::Bernoulli { delta, p })
                    .collect()
            }
            NoiseGrid::Gaussian { sigmas } => sigmas
                .iter()
                .map(|&sigma| NoiseModel::Gaussian { sigma })
                .collect(),
            NoiseGrid::GaussianScaled { qs } => qs
                .iter()
                .map(|&q| NoiseModel::Gaussian {
                    sigma: n as f64 * q,
                })
                .collect(),
        }
    }

    fn is_empty(&self) -> bool {
        match self {
            NoiseGrid::None => false,
            NoiseGrid::Bernoulli { ps, .. } => ps.is_empty(),
            NoiseGrid::Gaussian { sigmas } => sigmas.is_empty(),
            NoiseGrid::GaussianScaled { qs } => qs.is_empty(),
        }
    }
}

/// Cartesian product of objectives, problem sizes and noise settings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepGrid {
    pub algorithm: AlgorithmKind,
    pub objectives: Vec<ObjectiveId>,
    pub ns: Vec<usize>,
    pub noise: NoiseGrid,
    pub runs: usize,
    pub seed: u64,
    /// Fixed budget, or `10 n^3` per cell when absent.
    pub budget: Option<u64>,
    /// NSGA-II population size, or `9(n+1)` per cell when absent.
    pub mu: Option<usize>,
    pub p_c: f64,
    pub crossover: CrossoverKind,
    pub trace: bool,
}

/// `{2^-2, ..., 2^-6} ∪ {0.4, 0.5, 0.6} ∪ {1 - 2^-5, ..., 1 - 2^-2}`, ordered
/// as the rows of the Bernoulli results table.
pub fn bernoulli_p_grid() -> Vec<f64> {
    vec![
        2f64.powi(-6),
        2f64.powi(-5),
        2f64.powi(-4),
        2f64.powi(-3),
        2f64.powi(-2),
        0.4,
        0.5,
        0.6,
        1.0 - 2f64.powi(-2),
        1.0 - 2f64.powi(-3),
        1.0 - 2f64.powi(-4),
        1.0 - 2f64.powi(-5),
    ]
}

/// Multipliers `q` for `sigma = n q`: `2^-4, 2^-3, 2^-2, 2^-1, 1`.
pub fn gaussian_q_grid() -> Vec<f64> {
    vec![
        2f64.powi(-4),
        2f64.powi(-3),
        2f64.powi(-2),
        2f64.powi(-1),
        1.0,
    ]
}

impl SweepGrid {
    pub fn new(
        algorithm: AlgorithmKind,
        objectives: Vec<ObjectiveId>,
        ns: Vec<usize>,
        noise: NoiseGrid,
    ) -> Self {
        Self {
            algorithm,
            objectives,
            ns,
            noise,
            runs: DEFAULT_RUNS,
            seed: DEFAULT_SEED,
            budget: None,
            mu: None,
            p_c: 0.9,
            crossover: CrossoverKind::OnePoint,
            trace: false,
        }
    }

    /// NSGA-II, LOTZ and OneMinMax, `n ∈ {20, 30, 40}`, Bernoulli `(n+1, p)`
    /// over [`bernoulli_p_grid`].
    pub fn bernoulli_table() -> Self {
        Self::new(
            AlgorithmKind::Nsga2,
            ObjectiveId::ALL.to_vec(),
            vec![20, 30, 40],
            NoiseGrid::Bernoulli {
                ps: bernoulli_p_grid(),
                delta: None,
            },
        )
    }

    /// NSGA-II, LOTZ and OneMinMax, `n ∈ {20, 30, 40}`, Gaussian `sigma = n q`
    /// over [`gaussian_q_grid`].
    pub fn gaussian_table() -> Self {
        Self::new(
            AlgorithmKind::Nsga2,
            ObjectiveId::ALL.to_vec(),
            vec![20, 30, 40],
            NoiseGrid::GaussianScaled {
                qs: gaussian_q_grid(),
            },
        )
    }

    pub fn validate(&self) -> Result<()> {
        if self.objectives.is_empty() {
            return Err(Error::InvalidConfig(
                "sweep needs at least one objective".into(),
            ));
        }
        if self.ns.is_empty() {
            return Err(Error::InvalidConfig(
                "sweep needs at least one problem size".into(),
            ));
        }
        if self.noise.is_empty() {
            return Err(Error::InvalidConfig("sweep noise list is empty".into()));
        }
        Ok(())
    }

    /// Cells in objective, size, noise order.
    pub fn cells(&self) -> Result<Vec<ExperimentConfig>> {
        self.validate()?;
        let mut cells = Vec::new();
        for &objective in &self.objectives {
            for &n in &self.ns {
                for noise in self.noise.models(n) {
                    let mut algorithm = AlgorithmConfig::default_for(self.algorithm, n);
                    match &mut algorithm {
                        AlgorithmConfig::Nsga2(c) => {
                            if let Some(mu) = self.mu {
                                c.mu = mu;
                            }
                            c.p_c = self.p_c;
                            c.crossover = self.crossover;
                        }
                        AlgorithmConfig::Gsemo(c) => {
                            c.p_c = self.p_c;
                            c.crossover = self.crossover;
                        }
                    }
                    let cell = ExperimentConfig {
                        algorithm,
                        objective,
                        n,
                        noise,
                        runs: self.runs,
                        budget: self.budget.unwrap_or_else(|| default_budget(n)),
                        seed: self.seed,
                        trace: self.trace,
                    };
                    cell.validate()?;
                    cells.push(cell);
                }
            }
        }
        Ok(cells)
    }
}

/// Run every cell of `grid`. All `(cell, run)` pairs are scheduled together;
/// results are regrouped by cell in grid order.
pub fn sweep(grid: &SweepGrid) -> Result<Vec<AggregateReport>> {
    let cells = grid.cells()?;
    run_cells(&cells)
}

pub fn run_cells(cells: &[ExperimentConfig]) -> Result<Vec<AggregateReport>> {
    for c in cells {
        c.validate()?;
    }
    let jobs: Vec<(usize, usize)> = cells
        .iter()
        .enumerate()
        .flat_map(|(c, cell)| (0..cell.runs).map(move |r| (c, r)))
        .collect();
    let mut records = jobs
        .par_iter()
        .map(|&(c, r)| run_single(&cells[c], r))
        .collect::<Result<Vec<_>>>()?
        .into_iter();
    Ok(cells
        .iter()
        .map(|cell| AggregateReport::new(cell.clone(), records.by_ref().take(cell.runs).collect()))
        .collect())
}
