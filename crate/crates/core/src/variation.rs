//! Crossover and mutation on bit strings.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bitstring::BitString;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CrossoverKind {
    #[default]
    OnePoint,
    Uniform,
}

impl CrossoverKind {
    pub fn name(self) -> &'static str {
        match self {
            CrossoverKind::OnePoint => "onepoint",
            CrossoverKind::Uniform => "uniform",
        }
    }

    pub fn apply<R: Rng + ?Sized>(
        self,
        a: &BitString,
        b: &BitString,
        rng: &mut R,
    ) -> (BitString, BitString) {
        match self {
            CrossoverKind::OnePoint => one_point_crossover(a, b, rng),
            CrossoverKind::Uniform => uniform_crossover(a, b, rng),
        }
    }
}

impl fmt::Display for CrossoverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CrossoverKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "onepoint" | "one-point" | "one_point" => Ok(CrossoverKind::OnePoint),
            "uniform" => Ok(CrossoverKind::Uniform),
            _ => Err(Error::InvalidConfig(format!("unknown crossover {s:?}"))),
        }
    }
}

/// Cut after position `c`, drawn uniformly from `1..=n-1`, and exchange tails.
/// With `n = 1` there is no interior cut and both children are copies.
pub fn one_point_crossover<R: Rng + ?Sized>(
    a: &BitString,
    b: &BitString,
    rng: &mut R,
) -> (BitString, BitString) {
    assert_eq!(a.len(), b.len(), "crossover parents differ in length");
    let n = a.len();
    if n < 2 {
        return (a.clone(), b.clone());
    }
    let cut = rng.random_range(1..n);
    one_point_crossover_at(a, b, cut)
}

/// Children `(a[..cut] b[cut..], b[..cut] a[cut..])`.
pub fn one_point_crossover_at(a: &BitString, b: &BitString, cut: usize) -> (BitString, BitString) {
    assert_eq!(a.len(), b.len(), "crossover parents differ in length");
    assert!(cut <= a.len());
    (a.splice(b, cut), b.splice(a, cut))
}

/// Each position independently taken from either parent with probability 1/2;
/// the second child receives the other parent's bit.
pub fn uniform_crossover<R: Rng + ?Sized>(
    a: &BitString,
    b: &BitString,
    rng: &mut R,
) -> (BitString, BitString) {
    assert_eq!(a.len(), b.len(), "crossover parents differ in length");
    let mask = BitString::random(a.len(), rng);
    (a.select(b, &mask), b.select(a, &mask))
}

/// Flip each bit independently with probability `rate`.
///
/// Draws exactly one uniform per position.
pub fn bitwise_mutation<R: Rng + ?Sized>(x: &BitString, rate: f64, rng: &mut R) -> BitString {
    assert!(
        (0.0..=1.0).contains(&rate),
        "mutation rate {rate} outside [0,1]"
    );
    let mut y = x.clone();
    for i in 0..y.len() {
        if rng.random::<f64>() < rate {
            y.flip(i);
        }
    }
    y
}
