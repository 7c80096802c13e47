use std::cmp::Ordering;

use rand::Rng;

use super::sorting::crowded_cmp;
use super::Individual;

/// Binary tournament with replacement on (rank, crowding).
///
/// Draws two indices uniformly; the lower rank wins, then the larger crowding
/// distance, and a fair coin decides exact ties. Returns the winner's index.
pub fn binary_tournament<R: Rng + ?Sized>(pop: &[Individual], rng: &mut R) -> usize {
    assert!(!pop.is_empty(), "tournament on an empty population");
    let a = rng.random_range(0..pop.len());
    let b = rng.random_range(0..pop.len());
    match crowded_cmp(pop[a].rank, pop[a].crowding, pop[b].rank, pop[b].crowding) {
        Ordering::Less => a,
        Ordering::Greater => b,
        Ordering::Equal => {
            if rng.random_bool(0.5) {
                a
            } else {
                b
            }
        }
    }
}
