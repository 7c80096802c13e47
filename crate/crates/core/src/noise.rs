//! Posterior noise models and the per-generation evaluation cache.
//!
//! Noise is applied after evaluating the true objective: a single scalar is
//! drawn per evaluation and added to every objective. Within a generation an
//! individual's first draw is reused; once the generation advances, every
//! cached draw is stale and the next query draws afresh.
//!
//! Random stream usage per fresh draw is fixed: Bernoulli consumes one `f64`
//! uniform in `[0, 1)` (noisy iff `u < p`, also when `p` is 0 or 1);
//! Gaussian consumes one standard normal variate from `rand_distr`'s
//! ziggurat sampler, scaled by `sigma` (also when `sigma` is 0); `None`
//! consumes nothing.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fitness::{FitnessVector, NoisyFitness};

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum NoiseModel {
    #[default]
    None,
    /// With probability `p`, add `delta` to every objective.
    Bernoulli { delta: f64, p: f64 },
    /// Always add one `N(0, sigma^2)` draw to every objective.
    Gaussian { sigma: f64 },
}

impl NoiseModel {
    pub fn validate(&self) -> Result<()> {
        match *self {
            NoiseModel::None => Ok(()),
            NoiseModel::Bernoulli { delta, p } => {
                if !(0.0..=1.0).contains(&p) {
                    return Err(Error::InvalidConfig(format!(
                        "noise probability must lie in [0,1], got {p}"
                    )));
                }
                if !delta.is_finite() {
                    return Err(Error::InvalidConfig(format!(
                        "noise strength must be finite, got {delta}"
                    )));
                }
                Ok(())
            }
            NoiseModel::Gaussian { sigma } => {
                if !(sigma >= 0.0 && sigma.is_finite()) {
                    return Err(Error::InvalidConfig(format!(
                        "noise standard deviation must be finite and >= 0, got {sigma}"
                    )));
                }
                Ok(())
            }
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            NoiseModel::None => "none",
            NoiseModel::Bernoulli { .. } => "bernoulli",
            NoiseModel::Gaussian { .. } => "gaussian",
        }
    }

    /// The `(-delta, 1 - p)` model, which behaves identically to `(delta, p)`
    /// up to a translation when `|delta| > f_max - f_min`.
    pub fn mirrored(&self) -> Self {
        match *self {
            NoiseModel::Bernoulli { delta, p } => NoiseModel::Bernoulli {
                delta: -delta,
                p: 1.0 - p,
            },
            other => other,
        }
    }
}

/// One draw of the noisy fitness of an individual.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoisyEvaluation {
    pub true_fitness: FitnessVector,
    pub noisy_fitness: NoisyFitness,
    /// Whether the Bernoulli noise fired. Always false for other models.
    pub was_noisy: bool,
    /// Generation in which this draw was made.
    pub generation: u64,
}

impl NoisyEvaluation {
    /// The scalar added to every objective.
    pub fn offset(&self) -> f64 {
        self.noisy_fitness.get(0) - self.true_fitness.get(0) as f64
    }
}

/// Draw a noisy evaluation of `true_fitness` stamped with `generation`.
pub fn draw_noisy_fitness<R: Rng + ?Sized>(
    model: &NoiseModel,
    true_fitness: FitnessVector,
    generation: u64,
    rng: &mut R,
) -> NoisyEvaluation {
    let (shift, was_noisy) = match *model {
        NoiseModel::None => (0.0, false),
        NoiseModel::Bernoulli { delta, p } => {
            let u: f64 = rng.random();
            if u < p {
                (delta, true)
            } else {
                (0.0, false)
            }
        }
        NoiseModel::Gaussian { sigma } => {
            let z: f64 = rng.sample(StandardNormal);
            (sigma * z, false)
        }
    };
    NoisyEvaluation {
        noisy_fitness: true_fitness.shifted(shift),
        true_fitness,
        was_noisy,
        generation,
    }
}

/// Generation-scoped cache of noisy draws for a single run.
///
/// Every fresh draw counts as one fitness evaluation; cached queries are free.
#[derive(Clone, Debug)]
pub struct NoiseCache {
    model: NoiseModel,
    generation: u64,
    draws: u64,
}

impl NoiseCache {
    pub fn new(model: NoiseModel) -> Self {
        Self {
            model,
            generation: 0,
            draws: 0,
        }
    }

    pub fn model(&self) -> &NoiseModel {
        &self.model
    }

    pub fn generation(&self) -> u64 {
        self.generation
    }

    /// Fresh draws made so far.
    pub fn evaluations(&self) -> u64 {
        self.draws
    }

    /// Enter `generation`, invalidating every draw made earlier.
    pub fn stamp_generation(&mut self, generation: u64) -> Result<()> {
        if generation <= self.generation {
            return Err(Error::NonIncreasingGeneration {
                current: self.generation,
                requested: generation,
            });
        }
        self.generation = generation;
        Ok(())
    }

    /// Fresh draw for a newly created individual.
    pub fn evaluate<R: Rng + ?Sized>(
        &mut self,
        true_fitness: FitnessVector,
        rng: &mut R,
    ) -> NoisyEvaluation {
        self.draws += 1;
        draw_noisy_fitness(&self.model, true_fitness, self.generation, rng)
    }

    /// Make `eval` current: keep it if it was drawn this generation,
    /// otherwise redraw. A stamp from a later generation is rejected.
    pub fn query<R: Rng + ?Sized>(
        &mut self,
        eval: &mut NoisyEvaluation,
        rng: &mut R,
    ) -> Result<()> {
        if eval.generation > self.generation {
            return Err(Error::StaleGeneration {
                current: self.generation,
                stamp: eval.generation,
            });
        }
        if eval.generation < self.generation {
            *eval = self.evaluate(eval.true_fitness.clone(), rng);
        }
        Ok(())
    }
}
