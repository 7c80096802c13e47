//! NSGA-II on noisy fitness.
//!
//! All selection decisions (sorting, crowding, tournaments, truncation) use
//! the noisy fitness drawn in the current generation. True fitness is carried
//! along only so callers can measure front coverage.
//!
//! Random stream order within one generation:
//! 1. one noise draw per parent, in population order;
//! 2. `ceil(mu / 2)` offspring pairs, each consuming tournament 1, tournament 2
//!    (two index draws plus a coin flip on exact ties), the crossover uniform,
//!    the crossover's own draws when applied, then `n` mutation uniforms per
//!    child;
//! 3. one noise draw per offspring, in creation order;
//! 4. a Fisher-Yates shuffle of `R_t` that breaks exact sort ties.

mod selection;
mod sorting;

pub use selection::binary_tournament;
pub use sorting::{crowding_distances, non_dominated_sort};

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algorithm::{Optimizer, RunRng};
use crate::bitstring::BitString;
use crate::error::{Error, Result};
use crate::fitness::FitnessVector;
use crate::noise::{NoiseCache, NoiseModel, NoisyEvaluation};
use crate::objectives::{evaluate_true, ObjectiveId};
use crate::variation::{bitwise_mutation, CrossoverKind};

/// A population member.
#[derive(Clone, Debug, PartialEq)]
pub struct Individual {
    pub genotype: BitString,
    pub eval: NoisyEvaluation,
    /// Index of the non-dominated layer, starting at 1. Valid for `eval.generation` only.
    pub rank: usize,
    pub crowding: f64,
}

impl Individual {
    pub fn new(genotype: BitString, eval: NoisyEvaluation) -> Self {
        Self {
            genotype,
            eval,
            rank: 0,
            crowding: 0.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Nsga2Config {
    /// Population size, at least 2. For odd sizes the last offspring pair
    /// keeps only its first child.
    pub mu: usize,
    /// Crossover probability.
    pub p_c: f64,
    pub crossover: CrossoverKind,
    /// Per-bit flip probability; `None` means `1/n`.
    pub mutation_rate: Option<f64>,
}

impl Nsga2Config {
    /// `mu = 9(n+1)`, `p_c = 0.9`, one-point crossover, rate `1/n`.
    pub fn for_problem_size(n: usize) -> Self {
        Self {
            mu: 9 * (n + 1),
            p_c: 0.9,
            crossover: CrossoverKind::OnePoint,
            mutation_rate: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.mu < 2 {
            return Err(Error::InvalidConfig(format!(
                "NSGA-II population size must be at least 2, got {}",
                self.mu
            )));
        }
        if !(0.0..=1.0).contains(&self.p_c) {
            return Err(Error::InvalidConfig(format!(
                "crossover probability must lie in [0,1], got {}",
                self.p_c
            )));
        }
        if let Some(rate) = self.mutation_rate {
            if !(0.0..=1.0).contains(&rate) {
                return Err(Error::InvalidConfig(format!(
                    "mutation rate must lie in [0,1], got {rate}"
                )));
            }
        }
        Ok(())
    }

    pub fn rate(&self, n: usize) -> f64 {
        self.mutation_rate.unwrap_or(1.0 / n as f64)
    }
}

/// Set `rank` and `crowding` on every individual from its noisy fitness.
/// Returns the layers as index lists.
pub fn rank_and_crowd(pop: &mut [Individual]) -> Vec<Vec<usize>> {
    let layers = {
        let fitness: Vec<_> = pop.iter().map(|i| &i.eval.noisy_fitness).collect();
        non_dominated_sort(&fitness)
    };
    for (r, layer) in layers.iter().enumerate() {
        let dist = {
            let members: Vec<_> = layer.iter().map(|&i| &pop[i].eval.noisy_fitness).collect();
            crowding_distances(&members)
        };
        for (&i, c) in layer.iter().zip(dist) {
            pop[i].rank = r + 1;
            pop[i].crowding = c;
        }
    }
    layers
}

/// Offspring genotypes (`mu` of them, unevaluated) from tournament
/// selection, crossover with probability `p_c`, and bitwise mutation.
pub fn make_offspring<R: Rng + ?Sized>(
    pop: &[Individual],
    config: &Nsga2Config,
    n: usize,
    rng: &mut R,
) -> Vec<BitString> {
    let rate = config.rate(n);
    let mut offspring = Vec::with_capacity(config.mu);
    for _ in 0..config.mu.div_ceil(2) {
        let p1 = &pop[binary_tournament(pop, rng)].genotype;
        let p2 = &pop[binary_tournament(pop, rng)].genotype;
        let (s1, s2) = if rng.random::<f64>() < config.p_c {
            config.crossover.apply(p1, p2, rng)
        } else {
            (p1.clone(), p2.clone())
        };
        offspring.push(bitwise_mutation(&s1, rate, rng));
        if offspring.len() < config.mu {
            offspring.push(bitwise_mutation(&s2, rate, rng));
        }
    }
    offspring
}

/// Rank and crowd `joint`, sort by (rank ascending, crowding descending)
/// with uniformly random order among exact ties, and keep the first `mu`.
pub fn survival_select<R: Rng + ?Sized>(
    mut joint: Vec<Individual>,
    mu: usize,
    rng: &mut R,
) -> Vec<Individual> {
    assert!(
        joint.len() >= mu,
        "survival selection needs at least {mu} candidates, got {}",
        joint.len()
    );
    rank_and_crowd(&mut joint);
    sort_for_survival(&mut joint, rng);
    joint.truncate(mu);
    joint
}

fn sort_for_survival<R: Rng + ?Sized>(joint: &mut [Individual], rng: &mut R) {
    joint.shuffle(rng);
    joint.sort_by(|a, b| sorting::crowded_cmp(a.rank, a.crowding, b.rank, b.crowding));
}

/// NSGA-II run state.
#[derive(Clone, Debug)]
pub struct Nsga2 {
    objective: ObjectiveId,
    n: usize,
    config: Nsga2Config,
    cache: NoiseCache,
    population: Vec<Individual>,
}

impl Nsga2 {
    /// Uniform random initial population, evaluated in generation 0.
    pub fn new<R: Rng + ?Sized>(
        objective: ObjectiveId,
        n: usize,
        noise: NoiseModel,
        config: Nsga2Config,
        rng: &mut R,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidConfig(
                "problem size must be at least 1".into(),
            ));
        }
        config.validate()?;
        noise.validate()?;
        let genotypes: Vec<BitString> = (0..config.mu).map(|_| BitString::random(n, rng)).collect();
        Ok(Self::from_genotypes(
            objective, n, noise, config, genotypes, rng,
        ))
    }

    /// Start from the given genotypes (evaluated in generation 0).
    pub fn from_genotypes<R: Rng + ?Sized>(
        objective: ObjectiveId,
        n: usize,
        noise: NoiseModel,
        config: Nsga2Config,
        genotypes: Vec<BitString>,
        rng: &mut R,
    ) -> Self {
        assert_eq!(
            genotypes.len(),
            config.mu,
            "initial population must have mu members"
        );
        let mut cache = NoiseCache::new(noise);
        let mut population: Vec<Individual> = genotypes
            .into_iter()
            .map(|g| {
                let eval = cache.evaluate(evaluate_true(objective, &g), rng);
                Individual::new(g, eval)
            })
            .collect();
        rank_and_crowd(&mut population);
        Self {
            objective,
            n,
            config,
            cache,
            population,
        }
    }

    pub fn config(&self) -> &Nsga2Config {
        &self.config
    }

    pub fn population(&self) -> &[Individual] {
        &self.population
    }

    /// One generation. `observe` sees the ranked and crowded `R_t`, sorted
    /// for survival, before truncation to `mu`.
    pub fn step_observed<R, F>(&mut self, rng: &mut R, mut observe: F)
    where
        R: Rng + ?Sized,
        F: FnMut(&[Individual]),
    {
        let next = self.cache.generation() + 1;
        self.cache
            .stamp_generation(next)
            .expect("generation counter only moves forward");

        for ind in &mut self.population {
            self.cache
                .query(&mut ind.eval, rng)
                .expect("parents are never stamped ahead of the cache");
        }
        rank_and_crowd(&mut self.population);

        let offspring = make_offspring(&self.population, &self.config, self.n, rng);

        let mut joint = std::mem::take(&mut self.population);
        joint.reserve(offspring.len());
        for g in offspring {
            let eval = self.cache.evaluate(evaluate_true(self.objective, &g), rng);
            joint.push(Individual::new(g, eval));
        }

        rank_and_crowd(&mut joint);
        sort_for_survival(&mut joint, rng);
        observe(&joint);
        joint.truncate(self.config.mu);
        self.population = joint;
    }
}

impl Optimizer for Nsga2 {
    fn step(&mut self, rng: &mut RunRng) {
        self.step_observed(rng, |_| {});
    }

    fn generation(&self) -> u64 {
        self.cache.generation()
    }

    fn evaluations(&self) -> u64 {
        self.cache.evaluations()
    }

    fn generation_cost(&self) -> u64 {
        2 * self.config.mu as u64
    }

    fn population_size(&self) -> usize {
        self.population.len()
    }

    fn true_fitness(&self) -> Vec<&FitnessVector> {
        self.population
            .iter()
            .map(|i| &i.eval.true_fitness)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noise::draw_noisy_fitness;
    use rand::SeedableRng;

    fn individual(genotype: &str, noisy: (f64, f64), rank: usize, crowding: f64) -> Individual {
        let g: BitString = genotype.parse().unwrap();
        let mut eval = draw_noisy_fitness(
            &NoiseModel::None,
            evaluate_true(ObjectiveId::Omm, &g),
            0,
            &mut RunRng::seed_from_u64(0),
        );
        eval.noisy_fitness = FitnessVector::from([noisy.0, noisy.1]);
        Individual {
            genotype: g,
            eval,
            rank,
            crowding,
        }
    }

    #[test]
    fn config_validation() {
        let mut c = Nsga2Config::for_problem_size(20);
        assert_eq!(c.mu, 189);
        assert!(c.validate().is_ok());
        c.p_c = 1.2;
        assert!(c.validate().is_err());
        let c = Nsga2Config {
            mu: 0,
            ..Nsga2Config::for_problem_size(3)
        };
        assert!(c.validate().is_err());
    }

    #[test]
    fn offspring_count_and_crossover_switch() {
        let mut rng = RunRng::seed_from_u64(1);
        let n = 16;
        let mut pop: Vec<Individual> = (0..10)
            .map(|_| {
                let g = BitString::random(n, &mut rng);
                let e = draw_noisy_fitness(
                    &NoiseModel::None,
                    evaluate_true(ObjectiveId::Lotz, &g),
                    0,
                    &mut rng,
                );
                Individual::new(g, e)
            })
            .collect();
        rank_and_crowd(&mut pop);

        // Without crossover and mutation every child is a copy of a parent.
        let config = Nsga2Config {
            mu: 10,
            p_c: 0.0,
            crossover: CrossoverKind::OnePoint,
            mutation_rate: Some(0.0),
        };
        let kids = make_offspring(&pop, &config, n, &mut rng);
        assert_eq!(kids.len(), 10);
        assert!(kids.iter().all(|k| pop.iter().any(|p| &p.genotype == k)));

        // With certain crossover and no mutation, pairs conserve bits per position.
        let config = Nsga2Config { p_c: 1.0, ..config };
        let kids = make_offspring(&pop, &config, n, &mut rng);
        assert_eq!(kids.len(), 10);

        let odd = Nsga2Config { mu: 7, ..config };
        assert_eq!(make_offspring(&pop, &odd, n, &mut rng).len(), 7);
    }

    #[test]
    fn survival_keeps_top_crowding_in_a_single_layer() {
        let mut rng = RunRng::seed_from_u64(2);
        // Anti-diagonal points: one layer; interior distances differ by spacing.
        let xs = [0.0, 1.0, 3.0, 6.0, 10.0, 15.0, 21.0, 28.0];
        let joint: Vec<Individual> = xs
            .iter()
            .map(|&x| individual("0", (x, 28.0 - x), 0, 0.0))
            .collect();
        let mut scored = joint.clone();
        rank_and_crowd(&mut scored);
        let mut by_crowd: Vec<f64> = scored.iter().map(|i| i.crowding).collect();
        by_crowd.sort_by(|a, b| b.total_cmp(a));
        let kept = survival_select(joint, 4, &mut rng);
        let mut got: Vec<f64> = kept.iter().map(|i| i.crowding).collect();
        got.sort_by(|a, b| b.total_cmp(a));
        assert_eq!(got, by_crowd[..4].to_vec());
    }

    #[test]
    fn exact_ties_at_the_boundary_are_broken_uniformly() {
        let mut rng = RunRng::seed_from_u64(3);
        // Layer 1: one point. Layer 2: five identical points, two of them
        // endpoints with infinite crowding and three interior ties at 0.
        // Keeping 4 = 1 + 2 endpoints + 1 of the 3 interior points.
        let mut joint = vec![individual("1", (5.0, 5.0), 0, 0.0)];
        for _ in 0..5 {
            joint.push(individual("0", (1.0, 1.0), 0, 0.0));
        }
        let trials = 30_000;
        let mut wins = [0usize; 6];
        for _ in 0..trials {
            let mut tagged = joint.clone();
            for (k, t) in tagged.iter_mut().enumerate() {
                t.eval.generation = k as u64;
            }
            for survivor in survival_select(tagged, 4, &mut rng) {
                wins[survivor.eval.generation as usize] += 1;
            }
        }
        assert_eq!(wins[0], trials);
        assert_eq!(wins[1], trials);
        assert_eq!(wins[5], trials);
        for &w in &wins[2..5] {
            let f = w as f64 / trials as f64;
            assert!((f - 1.0 / 3.0).abs() < 0.02, "{wins:?}");
        }
    }

    #[test]
    fn noisy_points_survive_when_delta_exceeds_the_range() {
        let mut rng = RunRng::seed_from_u64(4);
        let n = 10;
        let model = NoiseModel::Bernoulli {
            delta: (n + 1) as f64,
            p: 0.5,
        };
        for _ in 0..200 {
            let mut joint = Vec::new();
            while joint.len() < 16 {
                let g = BitString::random(n, &mut rng);
                let e =
                    draw_noisy_fitness(&model, evaluate_true(ObjectiveId::Lotz, &g), 0, &mut rng);
                let noisy_so_far = joint
                    .iter()
                    .filter(|i: &&Individual| i.eval.was_noisy)
                    .count();
                if e.was_noisy && noisy_so_far < 4
                    || !e.was_noisy && joint.len() - noisy_so_far < 12
                {
                    joint.push(Individual::new(g, e));
                }
            }
            let kept = survival_select(joint, 8, &mut rng);
            assert_eq!(kept.iter().filter(|i| i.eval.was_noisy).count(), 4);
        }
    }

    #[test]
    fn boundary_points_of_the_first_layer_outrank_worse_layers() {
        let mut rng = RunRng::seed_from_u64(5);
        for _ in 0..100 {
            let joint: Vec<Individual> = (0..12)
                .map(|_| {
                    let g = BitString::random(6, &mut rng);
                    let e = draw_noisy_fitness(
                        &NoiseModel::Gaussian { sigma: 1.0 },
                        evaluate_true(ObjectiveId::Lotz, &g),
                        0,
                        &mut rng,
                    );
                    Individual::new(g, e)
                })
                .collect();
            let mut ranked = joint.clone();
            rank_and_crowd(&mut ranked);
            let protected = ranked
                .iter()
                .filter(|i| i.rank == 1 && i.crowding.is_infinite())
                .count();
            let kept = survival_select(joint, 6, &mut rng);
            if kept.iter().any(|i| i.rank > 1) {
                let kept_protected = kept
                    .iter()
                    .filter(|i| i.rank == 1 && i.crowding.is_infinite())
                    .count();
                assert_eq!(kept_protected, protected);
            }
        }
    }

    #[test]
    fn generation_accounting_and_determinism() {
        let run = |seed: u64| {
            let mut rng = RunRng::seed_from_u64(seed);
            let config = Nsga2Config {
                mu: 12,
                ..Nsga2Config::for_problem_size(8)
            };
            let noise = NoiseModel::Bernoulli { delta: 9.0, p: 0.3 };
            let mut alg = Nsga2::new(ObjectiveId::Lotz, 8, noise, config, &mut rng).unwrap();
            assert_eq!(alg.evaluations(), 12);
            let mut trace = Vec::new();
            for g in 1..=30 {
                let before = alg.evaluations();
                alg.step(&mut rng);
                assert_eq!(alg.evaluations() - before, 24);
                assert_eq!(alg.generation(), g);
                assert_eq!(alg.population_size(), 12);
                trace.push(
                    alg.population()
                        .iter()
                        .map(|i| i.genotype.to_string())
                        .collect::<Vec<_>>(),
                );
            }
            trace
        };
        assert_eq!(run(9), run(9));
        assert_ne!(run(9), run(10));
    }

    #[test]
    fn best_lotz_sum_never_decreases_without_noise() {
        let n = 12;
        let mut rng = RunRng::seed_from_u64(6);
        let config = Nsga2Config {
            mu: 4 * (n + 1),
            ..Nsga2Config::for_problem_size(n)
        };
        let mut alg = Nsga2::new(ObjectiveId::Lotz, n, NoiseModel::None, config, &mut rng).unwrap();
        let best = |a: &Nsga2| {
            a.true_fitness()
                .iter()
                .map(|f| f.get(0) + f.get(1))
                .max()
                .unwrap()
        };
        let mut prev = best(&alg);
        for _ in 0..200 {
            alg.step(&mut rng);
            let cur = best(&alg);
            assert!(cur >= prev);
            prev = cur;
        }
    }
}
