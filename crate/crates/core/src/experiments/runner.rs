use rand::SeedableRng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{AlgorithmConfig, ExperimentConfig};
use super::report::AggregateReport;
use crate::algorithm::{Optimizer, RunRng};
use crate::error::Result;
use crate::gsemo::Gsemo;
use crate::nsga2::Nsga2;
use crate::pareto::pareto_front_oracle;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Covered,
    BudgetExhausted,
}

/// State after a completed generation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TracePoint {
    pub generation: u64,
    pub evaluations: u64,
    pub coverage_count: usize,
    pub population_size: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub run_index: usize,
    pub seed: u64,
    pub outcome: Outcome,
    pub evaluations_used: u64,
    pub generations_used: u64,
    pub final_coverage_count: usize,
    pub max_population_size: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<TracePoint>>,
}

fn build_optimizer(config: &ExperimentConfig, rng: &mut RunRng) -> Result<Box<dyn Optimizer>> {
    Ok(match &config.algorithm {
        AlgorithmConfig::Nsga2(c) => Box::new(Nsga2::new(
            config.objective,
            config.n,
            config.noise,
            c.clone(),
            rng,
        )?),
        AlgorithmConfig::Gsemo(c) => Box::new(Gsemo::new(
            config.objective,
            config.n,
            config.noise,
            c.clone(),
            rng,
        )?),
    })
}

/// One independent run, seeded from the cell seed and `run_index`.
///
/// Coverage of the true Pareto front is checked after initialisation and
/// after every generation; the run stops when the front is covered or when
/// more than `budget` evaluations have been spent.
pub fn run_single(config: &ExperimentConfig, run_index: usize) -> Result<RunRecord> {
    config.validate()?;
    let seed = config.run_seed(run_index);
    let mut rng = RunRng::seed_from_u64(seed);
    let mut alg = build_optimizer(config, &mut rng)?;
    let front = pareto_front_oracle(config.objective, config.n);

    let mut trace = config.trace.then(Vec::new);
    let mut max_population_size = 0;
    loop {
        let coverage = front.coverage(alg.true_fitness());
        max_population_size = max_population_size.max(alg.population_size());
        if let Some(t) = trace.as_mut() {
            t.push(TracePoint {
                generation: alg.generation(),
                evaluations: alg.evaluations(),
                coverage_count: coverage,
                population_size: alg.population_size(),
            });
        }
        let outcome = if coverage == front.len() {
            Some(Outcome::Covered)
        } else if alg.evaluations() > config.budget {
            Some(Outcome::BudgetExhausted)
        } else {
            None
        };
        if let Some(outcome) = outcome {
            return Ok(RunRecord {
                run_index,
                seed,
                outcome,
                evaluations_used: alg.evaluations(),
                generations_used: alg.generation(),
                final_coverage_count: coverage,
                max_population_size,
                trace,
            });
        }
        alg.step(&mut rng);
    }
}

/// All runs of a cell, in run-index order regardless of scheduling.
pub fn run_batch(config: &ExperimentConfig) -> Result<AggregateReport> {
    config.validate()?;
    let runs = (0..config.runs)
        .into_par_iter()
        .map(|i| run_single(config, i))
        .collect::<Result<Vec<_>>>()?;
    Ok(AggregateReport::new(config.clone(), runs))
}
