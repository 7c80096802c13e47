//! Exact Pareto fronts of the true objectives and front coverage.

use std::collections::{BTreeSet, HashSet};

use crate::bitstring::BitString;
use crate::error::{Error, Result};
use crate::fitness::FitnessVector;
use crate::objectives::{evaluate_true, ObjectiveId};

/// Largest problem size accepted by [`enumerate_pareto_front`].
pub const MAX_ENUMERATION_N: usize = 20;

/// The Pareto front of the noise-free objective, in closed form.
#[derive(Clone, Debug)]
pub struct ParetoFront {
    points: BTreeSet<FitnessVector>,
    lookup: HashSet<FitnessVector>,
}

impl ParetoFront {
    pub fn new(points: impl IntoIterator<Item = FitnessVector>) -> Self {
        let points: BTreeSet<_> = points.into_iter().collect();
        let lookup = points.iter().cloned().collect();
        Self { points, lookup }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, f: &FitnessVector) -> bool {
        self.lookup.contains(f)
    }

    /// Points in lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = &FitnessVector> {
        self.points.iter()
    }

    /// Number of distinct front vectors present among `population`.
    pub fn coverage<'a>(&self, population: impl IntoIterator<Item = &'a FitnessVector>) -> usize {
        let mut seen: HashSet<&FitnessVector> = HashSet::new();
        for f in population {
            if self.lookup.contains(f) {
                seen.insert(f);
            }
        }
        seen.len()
    }

    pub fn is_covered<'a>(&self, population: impl IntoIterator<Item = &'a FitnessVector>) -> bool {
        self.coverage(population) == self.len()
    }
}

/// Closed-form front of `objective` at size `n`.
pub fn pareto_front_oracle(objective: ObjectiveId, n: usize) -> ParetoFront {
    assert!(n >= 1, "problem size must be at least 1");
    ParetoFront::new(objective.objective().pareto_front(n))
}

/// Front obtained by enumerating all of `{0,1}^n`; only for `n <= 20`.
pub fn enumerate_pareto_front(objective: ObjectiveId, n: usize) -> Result<ParetoFront> {
    if n == 0 || n > MAX_ENUMERATION_N {
        return Err(Error::InvalidConfig(format!(
            "enumeration needs 1 <= n <= {MAX_ENUMERATION_N}, got {n}"
        )));
    }
    let values: BTreeSet<FitnessVector> = (0..1u64 << n)
        .map(|idx| evaluate_true(objective, &BitString::from_index(n, idx)))
        .collect();
    let front = values
        .iter()
        .filter(|f| !values.iter().any(|g| g.dominates(f)))
        .cloned();
    Ok(ParetoFront::new(front))
}

/// Number of `front` vectors present in a multiset of true fitness vectors.
pub fn coverage_count<'a>(
    population_true_fitness: impl IntoIterator<Item = &'a FitnessVector>,
    front: &ParetoFront,
) -> usize {
    front.coverage(population_true_fitness)
}
