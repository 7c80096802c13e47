//! Bi-objective pseudo-Boolean benchmarks.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bitstring::BitString;
use crate::error::{Error, Result};
use crate::fitness::FitnessVector;

/// Summary of an objective at a given problem size.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObjectiveMeta {
    pub name: String,
    pub n: usize,
    /// Smallest value any objective takes over `{0,1}^n`.
    pub f_min: i64,
    /// Largest value any objective takes over `{0,1}^n`.
    pub f_max: i64,
    /// Number of distinct Pareto-optimal fitness vectors.
    pub pareto_front_size: usize,
}

/// A deterministic multi-objective fitness function on bit strings.
pub trait Objective: Send + Sync {
    fn name(&self) -> &'static str;

    fn evaluate(&self, x: &BitString) -> FitnessVector;

    /// Closed-form Pareto front of the noise-free function.
    fn pareto_front(&self, n: usize) -> Vec<FitnessVector>;

    fn meta(&self, n: usize) -> ObjectiveMeta;
}

/// Length of the longest all-ones prefix.
#[inline]
pub fn leading_ones(x: &BitString) -> usize {
    x.leading_ones()
}

/// Length of the longest all-zeros suffix.
#[inline]
pub fn trailing_zeros(x: &BitString) -> usize {
    x.trailing_zeros()
}

/// LeadingOnesTrailingZeros: `(LO(x), TZ(x))`.
#[derive(Clone, Copy, Debug, Default)]
pub struct Lotz;

/// OneMinMax: `(|x|_1, |x|_0)`.
#[derive(Clone, Copy, Debug, Default)]
pub struct OneMinMax;

/// `{(i, n - i) : i in 0..=n}`, the front shared by both shipped objectives.
fn diagonal_front(n: usize) -> Vec<FitnessVector> {
    (0..=n as i64)
        .map(|i| FitnessVector::from([i, n as i64 - i]))
        .collect()
}

impl Objective for Lotz {
    fn name(&self) -> &'static str {
        "lotz"
    }

    fn evaluate(&self, x: &BitString) -> FitnessVector {
        FitnessVector::from([leading_ones(x) as i64, trailing_zeros(x) as i64])
    }

    fn pareto_front(&self, n: usize) -> Vec<FitnessVector> {
        diagonal_front(n)
    }

    fn meta(&self, n: usize) -> ObjectiveMeta {
        ObjectiveMeta {
            name: self.name().into(),
            n,
            f_min: 0,
            f_max: n as i64,
            pareto_front_size: n + 1,
        }
    }
}

impl Objective for OneMinMax {
    fn name(&self) -> &'static str {
        "omm"
    }

    fn evaluate(&self, x: &BitString) -> FitnessVector {
        let ones = x.count_ones() as i64;
        FitnessVector::from([ones, x.len() as i64 - ones])
    }

    fn pareto_front(&self, n: usize) -> Vec<FitnessVector> {
        diagonal_front(n)
    }

    fn meta(&self, n: usize) -> ObjectiveMeta {
        ObjectiveMeta {
            name: self.name().into(),
            n,
            f_min: 0,
            f_max: n as i64,
            pareto_front_size: n + 1,
        }
    }
}

/// Selector for the registered objectives.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ObjectiveId {
    Lotz,
    Omm,
}

static LOTZ: Lotz = Lotz;
static OMM: OneMinMax = OneMinMax;

impl ObjectiveId {
    pub const ALL: [ObjectiveId; 2] = [ObjectiveId::Lotz, ObjectiveId::Omm];

    pub fn objective(self) -> &'static dyn Objective {
        match self {
            ObjectiveId::Lotz => &LOTZ,
            ObjectiveId::Omm => &OMM,
        }
    }

    pub fn name(self) -> &'static str {
        self.objective().name()
    }
}

impl fmt::Display for ObjectiveId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ObjectiveId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "lotz" => Ok(ObjectiveId::Lotz),
            "omm" | "oneminmax" => Ok(ObjectiveId::Omm),
            _ => Err(Error::UnknownObjective(s.to_string())),
        }
    }
}

/// True (noise-free) fitness of `x`.
pub fn evaluate_true(objective: ObjectiveId, x: &BitString) -> FitnessVector {
    objective.objective().evaluate(x)
}

pub fn objective_meta(objective: ObjectiveId, n: usize) -> ObjectiveMeta {
    assert!(n >= 1, "problem size must be at least 1");
    objective.objective().meta(n)
}
