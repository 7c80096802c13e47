//! GSEMO: a single offspring per generation and an unbounded archive of
//! mutually non-dominated points, compared by noisy fitness.
//!
//! Random stream order within one generation: one noise draw per member in
//! archive order, the first parent index, the crossover uniform, the second
//! parent index and crossover draws (only when crossing), `n` mutation
//! uniforms, and the offspring's noise draw.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algorithm::{Optimizer, RunRng};
use crate::bitstring::BitString;
use crate::error::{Error, Result};
use crate::fitness::FitnessVector;
use crate::noise::{NoiseCache, NoiseModel, NoisyEvaluation};
use crate::objectives::{evaluate_true, ObjectiveId};
use crate::variation::{bitwise_mutation, CrossoverKind};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GsemoConfig {
    pub p_c: f64,
    pub crossover: CrossoverKind,
    /// Per-bit flip probability; `None` means `1/n`.
    pub mutation_rate: Option<f64>,
}

impl Default for GsemoConfig {
    fn default() -> Self {
        Self {
            p_c: 0.9,
            crossover: CrossoverKind::OnePoint,
            mutation_rate: None,
        }
    }
}

impl GsemoConfig {
    pub fn validate(&self) -> Result<()> {
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

#[derive(Clone, Debug, PartialEq)]
pub struct Member {
    pub genotype: BitString,
    pub eval: NoisyEvaluation,
}

/// What happened in one generation, for probes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StepRecord {
    pub size_before: usize,
    pub size_after: usize,
    /// Members whose draw this generation was noisy.
    pub noisy_parents: usize,
    pub offspring_noisy: bool,
    pub offspring_accepted: bool,
}

/// A uniform random genotype, the single initial archive member.
pub fn gsemo_init<R: Rng + ?Sized>(n: usize, rng: &mut R) -> BitString {
    BitString::random(n, rng)
}

#[derive(Clone, Debug)]
pub struct Gsemo {
    objective: ObjectiveId,
    n: usize,
    config: GsemoConfig,
    cache: NoiseCache,
    population: Vec<Member>,
}

impl Gsemo {
    pub fn new<R: Rng + ?Sized>(
        objective: ObjectiveId,
        n: usize,
        noise: NoiseModel,
        config: GsemoConfig,
        rng: &mut R,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidConfig(
                "problem size must be at least 1".into(),
            ));
        }
        config.validate()?;
        noise.validate()?;
        let s = gsemo_init(n, rng);
        Ok(Self::from_genotypes(
            objective,
            n,
            noise,
            config,
            vec![s],
            rng,
        ))
    }

    /// Start from an arbitrary archive (evaluated in generation 0, no
    /// filtering applied).
    pub fn from_genotypes<R: Rng + ?Sized>(
        objective: ObjectiveId,
        n: usize,
        noise: NoiseModel,
        config: GsemoConfig,
        genotypes: Vec<BitString>,
        rng: &mut R,
    ) -> Self {
        assert!(!genotypes.is_empty(), "GSEMO needs a nonempty population");
        let mut cache = NoiseCache::new(noise);
        let population = genotypes
            .into_iter()
            .map(|g| Member {
                eval: cache.evaluate(evaluate_true(objective, &g), rng),
                genotype: g,
            })
            .collect();
        Self {
            objective,
            n,
            config,
            cache,
            population,
        }
    }

    pub fn population(&self) -> &[Member] {
        &self.population
    }

    /// Archive update: unless some member strictly dominates `candidate`,
    /// drop every member it weakly dominates and add it. Returns whether it
    /// was added.
    pub fn offer(&mut self, candidate: Member) -> bool {
        let f = &candidate.eval.noisy_fitness;
        if self
            .population
            .iter()
            .any(|m| m.eval.noisy_fitness.dominates(f))
        {
            return false;
        }
        self.population
            .retain(|m| !f.weakly_dominates(&m.eval.noisy_fitness));
        self.population.push(candidate);
        true
    }

    pub fn step_observed<R: Rng + ?Sized>(&mut self, rng: &mut R) -> StepRecord {
        let next = self.cache.generation() + 1;
        self.cache
            .stamp_generation(next)
            .expect("generation counter only moves forward");
        for m in &mut self.population {
            self.cache
                .query(&mut m.eval, rng)
                .expect("members are never stamped ahead of the cache");
        }
        let size_before = self.population.len();
        let noisy_parents = self.population.iter().filter(|m| m.eval.was_noisy).count();

        let p1 = &self.population[rng.random_range(0..size_before)].genotype;
        let child = if rng.random::<f64>() < self.config.p_c {
            let p2 = &self.population[rng.random_range(0..size_before)].genotype;
            self.config.crossover.apply(p1, p2, rng).0
        } else {
            p1.clone()
        };
        let child = bitwise_mutation(&child, self.config.rate(self.n), rng);
        let eval = self
            .cache
            .evaluate(evaluate_true(self.objective, &child), rng);

        let offspring_noisy = eval.was_noisy;
        let accepted = self.offer(Member {
            genotype: child,
            eval,
        });
        StepRecord {
            size_before,
            size_after: self.population.len(),
            noisy_parents,
            offspring_noisy,
            offspring_accepted: accepted,
        }
    }
}

impl Optimizer for Gsemo {
    fn step(&mut self, rng: &mut RunRng) {
        self.step_observed(rng);
    }

    fn generation(&self) -> u64 {
        self.cache.generation()
    }

    fn evaluations(&self) -> u64 {
        self.cache.evaluations()
    }

    fn generation_cost(&self) -> u64 {
        1 + self.population.len() as u64
    }

    fn population_size(&self) -> usize {
        self.population.len()
    }

    fn true_fitness(&self) -> Vec<&FitnessVector> {
        self.population
            .iter()
            .map(|m| &m.eval.true_fitness)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    fn no_crossover() -> GsemoConfig {
        GsemoConfig {
            p_c: 0.0,
            ..GsemoConfig::default()
        }
    }

    #[test]
    fn init_is_a_single_uniform_point() {
        let mut rng = RunRng::seed_from_u64(1);
        let g = Gsemo::new(
            ObjectiveId::Lotz,
            1,
            NoiseModel::None,
            GsemoConfig::default(),
            &mut rng,
        )
        .unwrap();
        assert_eq!(g.population_size(), 1);
        assert_eq!(g.evaluations(), 1);

        let n = 16;
        let trials = 10_000;
        let mut ones = vec![0usize; n];
        for _ in 0..trials {
            let x = gsemo_init(n, &mut rng);
            for (i, c) in ones.iter_mut().enumerate() {
                *c += x.get(i) as usize;
            }
        }
        for c in ones {
            assert!((c as f64 / trials as f64 - 0.5).abs() <= 0.02);
        }
    }

    fn member(genotype: &str) -> Member {
        let g = bs(genotype);
        let eval = crate::noise::draw_noisy_fitness(
            &NoiseModel::None,
            evaluate_true(ObjectiveId::Lotz, &g),
            0,
            &mut RunRng::seed_from_u64(0),
        );
        Member { genotype: g, eval }
    }

    #[test]
    fn archive_update_rules() {
        let mut rng = RunRng::seed_from_u64(2);
        // 1010 -> (1,1), 1100 -> (2,2).
        let mut g = Gsemo::from_genotypes(
            ObjectiveId::Lotz,
            4,
            NoiseModel::None,
            no_crossover(),
            vec![bs("1010")],
            &mut rng,
        );
        assert!(g.offer(member("1100")));
        assert_eq!(g.population().len(), 1);
        assert_eq!(
            g.population()[0].eval.true_fitness,
            FitnessVector::from([2, 2])
        );
        // A dominated candidate is rejected.
        assert!(!g.offer(member("1010")));
        // An equal-fitness candidate replaces the old copy.
        assert!(g.offer(member("1100")));
        assert_eq!(g.population().len(), 1);
        // 1110 -> (3,1) is incomparable to (2,2).
        assert!(g.offer(member("1110")));
        assert_eq!(g.population().len(), 2);
    }

    #[test]
    fn cloning_offspring_replaces_its_parent() {
        let mut rng = RunRng::seed_from_u64(3);
        let mut g = Gsemo::from_genotypes(
            ObjectiveId::Lotz,
            4,
            NoiseModel::None,
            GsemoConfig {
                mutation_rate: Some(0.0),
                ..no_crossover()
            },
            vec![bs("1000")],
            &mut rng,
        );
        let rec = g.step_observed(&mut rng);
        assert!(rec.offspring_accepted);
        assert_eq!(g.population_size(), 1);
    }

    #[test]
    fn dominating_offspring_displaces_its_parent() {
        let mut rng = RunRng::seed_from_u64(3);
        // LOTZ n=4: 0001 has (0,0). Flip-all gives 1110 with (3,1).
        let mut g = Gsemo::from_genotypes(
            ObjectiveId::Lotz,
            4,
            NoiseModel::None,
            GsemoConfig {
                mutation_rate: Some(1.0),
                ..no_crossover()
            },
            vec![bs("0001")],
            &mut rng,
        );
        g.step_observed(&mut rng);
        assert_eq!(g.population().len(), 1);
        assert_eq!(
            g.population()[0].eval.true_fitness,
            FitnessVector::from([3, 1])
        );
    }

    #[test]
    fn incomparable_offspring_grows_the_archive() {
        let mut rng = RunRng::seed_from_u64(4);
        // OMM n=4: 1000 -> (1,3); complement 0111 -> (3,1); incomparable.
        let mut g = Gsemo::from_genotypes(
            ObjectiveId::Omm,
            4,
            NoiseModel::None,
            GsemoConfig {
                mutation_rate: Some(1.0),
                ..no_crossover()
            },
            vec![bs("1000")],
            &mut rng,
        );
        let rec = g.step_observed(&mut rng);
        assert_eq!((rec.size_before, rec.size_after), (1, 2));
    }

    #[test]
    fn noisy_offspring_keeps_only_noisy_parents() {
        let n = 12;
        let model = NoiseModel::Bernoulli {
            delta: (n + 1) as f64,
            p: 0.5,
        };
        let mut rng = RunRng::seed_from_u64(5);
        let mut seen = 0;
        for _ in 0..400 {
            // Distinct front points: mutually incomparable noise-free.
            let archive: Vec<BitString> = (0..=n).map(|i| BitString::prefix_ones(n, i)).collect();
            let mut g = Gsemo::from_genotypes(
                ObjectiveId::Lotz,
                n,
                model,
                no_crossover(),
                archive,
                &mut rng,
            );
            let rec = g.step_observed(&mut rng);
            if rec.offspring_noisy && rec.offspring_accepted {
                seen += 1;
                let pop = g.population();
                let child = pop.last().unwrap();
                assert!(pop.iter().all(|m| m.eval.was_noisy));
                // Noisy parents survive unless the child weakly dominates
                // them in true fitness (same noise shift on both sides).
                assert!(rec.noisy_parents + 1 - rec.size_after <= 1);
                let on_front =
                    child.eval.true_fitness.get(0) + child.eval.true_fitness.get(1) == n as i64;
                if !on_front {
                    assert_eq!(rec.size_after, rec.noisy_parents + 1);
                }
            }
        }
        assert!(seen > 50);
    }

    #[test]
    fn noise_free_archive_is_an_antichain_and_bounded() {
        for (seed, id) in [(6, ObjectiveId::Lotz), (7, ObjectiveId::Omm)] {
            let mut rng = RunRng::seed_from_u64(seed);
            let n = 10;
            let mut g =
                Gsemo::new(id, n, NoiseModel::None, GsemoConfig::default(), &mut rng).unwrap();
            for _ in 0..3_000 {
                let before = g.evaluations();
                let cost = g.generation_cost();
                g.step(&mut rng);
                assert_eq!(g.evaluations() - before, cost);
                let pop = g.population();
                assert!(pop.len() <= n + 1);
                for (i, a) in pop.iter().enumerate() {
                    for (j, b) in pop.iter().enumerate() {
                        if i != j {
                            assert!(!a.eval.noisy_fitness.weakly_dominates(&b.eval.noisy_fitness));
                        }
                    }
                }
            }
        }
    }
}
