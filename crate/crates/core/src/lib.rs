//! Noisy evolutionary multi-objective optimisation.
//!
//! NSGA-II and GSEMO on the bi-objective benchmarks LOTZ and OneMinMax under
//! posterior noise (Bernoulli or Gaussian), together with exact Pareto
//! oracles, statistical probes of the algorithms' population dynamics, and a
//! reproducible batch runner that writes CSV and JSON results.

pub mod algorithm;
pub mod bitstring;
pub mod error;
pub mod experiments;
pub mod fitness;
pub mod gsemo;
pub mod noise;
pub mod nsga2;
pub mod objectives;
pub mod pareto;
pub mod probe;
pub mod variation;

pub use algorithm::{Optimizer, RunRng};
pub use bitstring::BitString;
pub use error::{Error, Result};
pub use fitness::{FitnessVector, NoisyFitness};
pub use gsemo::{Gsemo, GsemoConfig};
pub use noise::{NoiseCache, NoiseModel, NoisyEvaluation};
pub use nsga2::{Individual, Nsga2, Nsga2Config};
pub use objectives::{ObjectiveId, ObjectiveMeta};
pub use pareto::{pareto_front_oracle, ParetoFront};
pub use variation::CrossoverKind;
