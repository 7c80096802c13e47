//! Fitness vectors and the (weak) dominance relations for maximisation.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Scalar type of an objective value.
///
/// True fitness is integral; noisy fitness is real because the noise strength
/// and Gaussian draws are real.
pub trait FitnessValue:
    Copy + PartialOrd + fmt::Debug + fmt::Display + Send + Sync + 'static
{
    fn to_f64(self) -> f64;

    /// Total order used when sorting by a single objective.
    fn total_cmp(&self, other: &Self) -> Ordering;
}

impl FitnessValue for i64 {
    #[inline]
    fn to_f64(self) -> f64 {
        self as f64
    }

    #[inline]
    fn total_cmp(&self, other: &Self) -> Ordering {
        self.cmp(other)
    }
}

impl FitnessValue for f64 {
    #[inline]
    fn to_f64(self) -> f64 {
        self
    }

    #[inline]
    fn total_cmp(&self, other: &Self) -> Ordering {
        f64::total_cmp(self, other)
    }
}

/// A `d`-tuple of objective values, all maximised.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FitnessVector<T = i64> {
    values: Vec<T>,
}

/// Fitness as seen by the algorithms after noise is applied.
pub type NoisyFitness = FitnessVector<f64>;

impl<T: FitnessValue> FitnessVector<T> {
    pub fn new(values: Vec<T>) -> Self {
        assert!(
            !values.is_empty(),
            "fitness vector needs at least one objective"
        );
        Self { values }
    }

    /// Number of objectives.
    #[inline]
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    #[inline]
    pub fn values(&self) -> &[T] {
        &self.values
    }

    #[inline]
    pub fn get(&self, k: usize) -> T {
        self.values[k]
    }

    /// `a_i >= b_i` for every objective. Panics on a dimension mismatch.
    #[inline]
    pub fn weakly_dominates(&self, other: &Self) -> bool {
        self.check_dim(other);
        self.values.iter().zip(&other.values).all(|(a, b)| a >= b)
    }

    /// Weak dominance with at least one strict inequality. Panics on a
    /// dimension mismatch.
    #[inline]
    pub fn dominates(&self, other: &Self) -> bool {
        self.check_dim(other);
        let mut strict = false;
        for (a, b) in self.values.iter().zip(&other.values) {
            if a < b {
                return false;
            }
            strict |= a > b;
        }
        strict
    }

    pub fn try_weakly_dominates(&self, other: &Self) -> Result<bool> {
        self.ensure_dim(other)?;
        Ok(self.weakly_dominates(other))
    }

    pub fn try_dominates(&self, other: &Self) -> Result<bool> {
        self.ensure_dim(other)?;
        Ok(self.dominates(other))
    }

    /// `self + shift * 1`, as a real vector.
    pub fn shifted(&self, shift: f64) -> NoisyFitness {
        FitnessVector {
            values: self.values.iter().map(|v| v.to_f64() + shift).collect(),
        }
    }

    pub fn to_real(&self) -> NoisyFitness {
        self.shifted(0.0)
    }

    fn ensure_dim(&self, other: &Self) -> Result<()> {
        if self.dim() == other.dim() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch(self.dim(), other.dim()))
        }
    }

    #[inline]
    fn check_dim(&self, other: &Self) {
        assert_eq!(
            self.dim(),
            other.dim(),
            "dominance between fitness vectors of different dimension"
        );
    }
}

impl<T: FitnessValue> From<Vec<T>> for FitnessVector<T> {
    fn from(values: Vec<T>) -> Self {
        Self::new(values)
    }
}

impl<T: FitnessValue, const D: usize> From<[T; D]> for FitnessVector<T> {
    fn from(values: [T; D]) -> Self {
        Self::new(values.to_vec())
    }
}

impl<T: FitnessValue> fmt::Debug for FitnessVector<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<T: FitnessValue> fmt::Display for FitnessVector<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (k, v) in self.values.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str(")")
    }
}
