//! Interface shared by the optimisers driven by the experiment runner.

use rand_chacha::ChaCha8Rng;

use crate::fitness::FitnessVector;

/// Random stream owned by a single run. Noise, variation and selection all
/// draw from it.
pub type RunRng = ChaCha8Rng;

pub trait Optimizer: Send {
    /// Advance by one generation.
    fn step(&mut self, rng: &mut RunRng);

    /// Index of the last completed generation (0 right after initialisation).
    fn generation(&self) -> u64;

    /// Fresh fitness draws so far, including initialisation.
    fn evaluations(&self) -> u64;

    /// Fitness draws one generation costs at the current population size.
    fn generation_cost(&self) -> u64;

    fn population_size(&self) -> usize;

    /// True fitness of every population member, duplicates included.
    fn true_fitness(&self) -> Vec<&FitnessVector>;
}
