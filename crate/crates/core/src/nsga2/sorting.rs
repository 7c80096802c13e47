//! Non-dominated sorting and crowding distance.

use std::cmp::Ordering;

use crate::fitness::{FitnessValue, FitnessVector};

/// Partition `points` into non-dominated layers.
///
/// Returns the indices of each layer, layers in rank order and indices in
/// ascending order within a layer. Bi-objective input is sorted in
/// `O(N log N)`; other dimensions use the `O(N^2 d)` dominance-count method.
pub fn non_dominated_sort<T: FitnessValue>(points: &[&FitnessVector<T>]) -> Vec<Vec<usize>> {
    if points.is_empty() {
        return Vec::new();
    }
    let d = points[0].dim();
    assert!(
        points.iter().all(|p| p.dim() == d),
        "non-dominated sort over vectors of different dimension"
    );
    let mut layers = if d == 2 {
        sort_bi_objective(points)
    } else {
        sort_dominance_count(points)
    };
    layers.iter_mut().for_each(|l| l.sort_unstable());
    layers
}

/// Processes points by decreasing first objective (ties: decreasing second).
/// Every potential dominator of a point is processed before it. Within a
/// layer the second objective is non-decreasing in processing order, so the
/// most recently added member dominates a point iff any member does, and the
/// set of layers dominating a point is a prefix.
fn sort_bi_objective<T: FitnessValue>(points: &[&FitnessVector<T>]) -> Vec<Vec<usize>> {
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| {
        let (pa, pb) = (points[a], points[b]);
        pb.get(0)
            .total_cmp(&pa.get(0))
            .then_with(|| pb.get(1).total_cmp(&pa.get(1)))
    });

    let mut layers: Vec<Vec<usize>> = Vec::new();
    let mut tails: Vec<usize> = Vec::new();
    for idx in order {
        let p = points[idx];
        let k = tails.partition_point(|&t| points[t].dominates(p));
        if k == layers.len() {
            layers.push(vec![idx]);
            tails.push(idx);
        } else {
            layers[k].push(idx);
            tails[k] = idx;
        }
    }
    layers
}

fn sort_dominance_count<T: FitnessValue>(points: &[&FitnessVector<T>]) -> Vec<Vec<usize>> {
    let n = points.len();
    let mut dominated_by_count = vec![0usize; n];
    let mut dominates: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        for j in (i + 1)..n {
            if points[i].dominates(points[j]) {
                dominates[i].push(j);
                dominated_by_count[j] += 1;
            } else if points[j].dominates(points[i]) {
                dominates[j].push(i);
                dominated_by_count[i] += 1;
            }
        }
    }
    let mut layers = Vec::new();
    let mut current: Vec<usize> = (0..n).filter(|&i| dominated_by_count[i] == 0).collect();
    while !current.is_empty() {
        let mut next = Vec::new();
        for &i in &current {
            for &j in &dominates[i] {
                dominated_by_count[j] -= 1;
                if dominated_by_count[j] == 0 {
                    next.push(j);
                }
            }
        }
        layers.push(current);
        current = next;
    }
    layers
}

/// Crowding distance of every member of one layer, in layer order.
///
/// For each objective the layer is sorted by decreasing value (stable, so
/// equal values keep layer order). The first and last member get infinity;
/// an interior member gets `(value above - value below) / (first - last)`,
/// or 0 when the objective is constant over the layer. Per-objective
/// contributions are summed.
pub fn crowding_distances<T: FitnessValue>(layer: &[&FitnessVector<T>]) -> Vec<f64> {
    let m = layer.len();
    if m <= 2 {
        return vec![f64::INFINITY; m];
    }
    let d = layer[0].dim();
    let mut dist = vec![0.0; m];
    let mut order: Vec<usize> = (0..m).collect();
    for k in 0..d {
        order.sort_by(|&a, &b| layer[b].get(k).total_cmp(&layer[a].get(k)));
        let value = |pos: usize| layer[order[pos]].get(k).to_f64();
        dist[order[0]] = f64::INFINITY;
        dist[order[m - 1]] = f64::INFINITY;
        let span = value(0) - value(m - 1);
        if span > 0.0 {
            for pos in 1..m - 1 {
                dist[order[pos]] += (value(pos - 1) - value(pos + 1)) / span;
            }
        }
    }
    dist
}

/// Orders by rank ascending, then crowding descending.
#[inline]
pub(crate) fn crowded_cmp(rank_a: usize, crowd_a: f64, rank_b: usize, crowd_b: f64) -> Ordering {
    rank_a
        .cmp(&rank_b)
        .then_with(|| crowd_b.total_cmp(&crowd_a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn real(points: &[(f64, f64)]) -> Vec<FitnessVector<f64>> {
        points
            .iter()
            .map(|&(a, b)| FitnessVector::from([a, b]))
            .collect()
    }

    fn refs<T: FitnessValue>(v: &[FitnessVector<T>]) -> Vec<&FitnessVector<T>> {
        v.iter().collect()
    }

    /// Peels off the non-dominated set repeatedly, checking all pairs.
    fn brute_force_layers<T: FitnessValue>(points: &[FitnessVector<T>]) -> Vec<Vec<usize>> {
        let mut remaining: Vec<usize> = (0..points.len()).collect();
        let mut layers = Vec::new();
        while !remaining.is_empty() {
            let layer: Vec<usize> = remaining
                .iter()
                .copied()
                .filter(|&i| !remaining.iter().any(|&j| points[j].dominates(&points[i])))
                .collect();
            remaining.retain(|i| !layer.contains(i));
            layers.push(layer);
        }
        layers
    }

    #[test]
    fn sorting_examples() {
        let chain = real(&[(2.0, 2.0), (1.0, 1.0)]);
        assert_eq!(non_dominated_sort(&refs(&chain)), vec![vec![0], vec![1]]);
        let flat = real(&[(2.0, 1.0), (1.0, 2.0)]);
        assert_eq!(non_dominated_sort(&refs(&flat)), vec![vec![0, 1]]);
        let empty: Vec<&FitnessVector<f64>> = Vec::new();
        assert!(non_dominated_sort(&empty).is_empty());
    }

    #[test]
    fn duplicates_share_a_layer() {
        let pts = real(&[(1.0, 1.0), (3.0, 0.0), (1.0, 1.0), (0.0, 0.0), (3.0, 0.0)]);
        assert_eq!(
            non_dominated_sort(&refs(&pts)),
            vec![vec![0, 1, 2, 4], vec![3]]
        );
    }

    #[test]
    fn crowding_fixture() {
        let layer = real(&[(0.0, 4.0), (1.0, 2.0), (3.0, 0.0)]);
        let d = crowding_distances(&refs(&layer));
        assert!(d[0].is_infinite() && d[2].is_infinite());
        assert!((d[1] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn tiny_layers_are_all_boundary() {
        let one = real(&[(1.0, 1.0)]);
        assert_eq!(crowding_distances(&refs(&one)), vec![f64::INFINITY]);
        let two = real(&[(1.0, 1.0), (0.0, 2.0)]);
        assert_eq!(crowding_distances(&refs(&two)), vec![f64::INFINITY; 2]);
    }

    #[test]
    fn identical_members_have_zero_interior_distance() {
        let layer = real(&[(2.0, 2.0); 6]);
        let d = crowding_distances(&refs(&layer));
        assert!(d[0].is_infinite() && d[5].is_infinite());
        assert!(d[1..5].iter().all(|&x| x == 0.0));
    }

    fn int_points(max_len: usize, d: usize) -> impl Strategy<Value = Vec<FitnessVector>> {
        prop::collection::vec(
            prop::collection::vec(0i64..6, d).prop_map(FitnessVector::new),
            0..max_len,
        )
    }

    proptest! {
        #[test]
        fn bi_objective_sort_matches_brute_force(points in int_points(64, 2)) {
            prop_assert_eq!(non_dominated_sort(&refs(&points)), brute_force_layers(&points));
        }

        #[test]
        fn general_sort_matches_brute_force(points in int_points(40, 3)) {
            prop_assert_eq!(non_dominated_sort(&refs(&points)), brute_force_layers(&points));
        }

        #[test]
        fn every_distinct_vector_keeps_a_positive_distance(points in int_points(40, 2)) {
            for layer in non_dominated_sort(&refs(&points)) {
                let members: Vec<&FitnessVector> = layer.iter().map(|&i| &points[i]).collect();
                let dist = crowding_distances(&members);
                prop_assert!(dist.iter().all(|&x| x >= 0.0));
                let mut distinct: Vec<&FitnessVector> = members.clone();
                distinct.sort();
                distinct.dedup();
                if distinct.len() >= 2 {
                    for v in distinct {
                        prop_assert!(members.iter().zip(&dist).any(|(m, &c)| *m == v && c > 0.0));
                    }
                }
            }
        }

        #[test]
        fn finite_contributions_are_normalised(values in prop::collection::btree_set(0i64..1000, 3..30)) {
            // Distinct first objective on an anti-diagonal: a single layer.
            let layer: Vec<FitnessVector> = values.iter().map(|&v| FitnessVector::from([v, 1000 - v])).collect();
            let one_obj: Vec<FitnessVector> = values.iter().map(|&v| FitnessVector::from(vec![v])).collect();
            let dist = crowding_distances(&refs(&one_obj));
            for &c in &dist {
                prop_assert!(c.is_infinite() || (0.0..=1.0).contains(&c));
            }
            let two = crowding_distances(&refs(&layer));
            for &c in &two {
                prop_assert!(c.is_infinite() || (0.0..=2.0).contains(&c));
            }
        }
    }
}
