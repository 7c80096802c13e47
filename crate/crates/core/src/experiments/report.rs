use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use super::runner::{Outcome, RunRecord};

/// Statistics over every run of a cell. Runs that hit the budget contribute
/// their (capped) evaluation counts.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub success_rate: f64,
    pub mean_evals: f64,
    pub median_evals: f64,
    /// Sample standard deviation; 0 for a single run.
    pub stddev_evals: f64,
    pub mean_generations: f64,
    pub max_population_size: usize,
}

impl Summary {
    pub fn from_runs(runs: &[RunRecord]) -> Self {
        let evals: Vec<f64> = runs.iter().map(|r| r.evaluations_used as f64).collect();
        let gens: Vec<f64> = runs.iter().map(|r| r.generations_used as f64).collect();
        let covered = runs
            .iter()
            .filter(|r| r.outcome == Outcome::Covered)
            .count();
        Self {
            success_rate: if runs.is_empty() {
                0.0
            } else {
                covered as f64 / runs.len() as f64
            },
            mean_evals: mean(&evals),
            median_evals: median(&evals),
            stddev_evals: sample_stddev(&evals),
            mean_generations: mean(&gens),
            max_population_size: runs
                .iter()
                .map(|r| r.max_population_size)
                .max()
                .unwrap_or(0),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AggregateReport {
    pub cell: ExperimentConfig,
    pub cell_seed: u64,
    pub aggregate: Summary,
    pub runs: Vec<RunRecord>,
}

impl AggregateReport {
    pub fn new(cell: ExperimentConfig, runs: Vec<RunRecord>) -> Self {
        Self {
            cell_seed: cell.cell_seed(),
            aggregate: Summary::from_runs(&runs),
            cell,
            runs,
        }
    }

    pub fn success_rate(&self) -> f64 {
        self.aggregate.success_rate
    }

    pub fn mean_evals(&self) -> f64 {
        self.aggregate.mean_evals
    }
}

fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn median(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    if v.len() % 2 == 1 {
        v[mid]
    } else {
        (v[mid - 1] + v[mid]) / 2.0
    }
}

fn sample_stddev(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    let ss: f64 = xs.iter().map(|x| (x - m).powi(2)).sum();
    (ss / (xs.len() - 1) as f64).sqrt()
}
