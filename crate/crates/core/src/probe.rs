//! Statistical probes of the quantities behind the runtime bounds: the
//! `(C,D)`-separation of noisy populations, the number of individuals with
//! positive crowding distance, the probability that mutation lands on the
//! Pareto set, and GSEMO's shrinking steps.
//!
//! Every trial draws from its own generator derived from the probe seed, so
//! reports do not depend on the number of worker threads.

use rand::SeedableRng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algorithm::RunRng;
use crate::bitstring::BitString;
use crate::error::{Error, Result};
use crate::experiments::{derive_seed, run_batch, AlgorithmKind, ExperimentConfig};
use crate::fitness::FitnessVector;
use crate::gsemo::{Gsemo, GsemoConfig, StepRecord};
use crate::noise::NoiseModel;
use crate::nsga2::{Individual, Nsga2, Nsga2Config};
use crate::objectives::ObjectiveId;
use crate::variation::bitwise_mutation;

/// Two-sided 99% normal quantile.
pub const Z_99: f64 = 2.5758;

/// Absolute slack of the statistical thresholds.
pub const SLACK: f64 = 0.02;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProbeStatus {
    Pass,
    /// Bound exceeded by less than [`SLACK`].
    Warn,
    Fail,
    /// Too little data for a verdict.
    Inconclusive,
    /// Degenerate parameters; numbers are reported without a verdict.
    Descriptive,
    Skipped,
}

/// Wilson score interval for `successes` out of `trials`.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let phat = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (phat + z2 / (2.0 * n)) / denom;
    let half = z * (phat * (1.0 - phat) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

/// Verdict for a one-sided upper bound checked on the upper CI limit.
fn upper_bound_status(ci_high: f64, bound: f64) -> ProbeStatus {
    if ci_high <= bound {
        ProbeStatus::Pass
    } else if ci_high <= bound + SLACK {
        ProbeStatus::Warn
    } else {
        ProbeStatus::Fail
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CdClassification {
    pub c: i64,
    pub d: i64,
    pub cd_points: usize,
    pub superior_points: usize,
    pub other_points: usize,
}

impl CdClassification {
    pub fn is_separated(&self) -> bool {
        self.other_points == 0
    }

    pub fn total(&self) -> usize {
        self.cd_points + self.superior_points + self.other_points
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CdClass {
    CdPoint,
    Superior,
    Other,
}

/// `(v1, v2)` is a `(C,D)`-point if both values lie in `[C, C+D]`, superior
/// if both exceed `C+D`, and other otherwise.
pub fn cd_class(v: &FitnessVector<f64>, c: i64, d: i64) -> CdClass {
    assert_eq!(v.dim(), 2, "(C,D) classes are defined for two objectives");
    let (lo, hi) = (c as f64, (c + d) as f64);
    let (a, b) = (v.get(0), v.get(1));
    if (lo..=hi).contains(&a) && (lo..=hi).contains(&b) {
        CdClass::CdPoint
    } else if a > hi && b > hi {
        CdClass::Superior
    } else {
        CdClass::Other
    }
}

pub fn classify_cd<'a>(
    population: impl IntoIterator<Item = &'a FitnessVector<f64>>,
    c: i64,
    d: i64,
) -> CdClassification {
    let mut out = CdClassification {
        c,
        d,
        cd_points: 0,
        superior_points: 0,
        other_points: 0,
    };
    for v in population {
        match cd_class(v, c, d) {
            CdClass::CdPoint => out.cd_points += 1,
            CdClass::Superior => out.superior_points += 1,
            CdClass::Other => out.other_points += 1,
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrowdingBoundReport {
    /// Layers made up only of `(C,D)`-points.
    pub layers_checked: usize,
    pub max_positive_crowding: usize,
    /// `4(D+1)`.
    pub bound: usize,
    pub passed: bool,
}

/// Count members with positive crowding distance in every layer made up only
/// of `(C,D)`-points. `fitness`, `ranks` and `crowding` are parallel slices;
/// the population must be `(C,D)`-separated.
pub fn check_lemma1_bound(
    fitness: &[&FitnessVector<f64>],
    ranks: &[usize],
    crowding: &[f64],
    c: i64,
    d: i64,
) -> Result<CrowdingBoundReport> {
    assert_eq!(fitness.len(), ranks.len());
    assert_eq!(fitness.len(), crowding.len());
    let class = classify_cd(fitness.iter().copied(), c, d);
    if !class.is_separated() {
        return Err(Error::NotSeparated {
            c,
            d,
            others: class.other_points,
        });
    }
    let layers = ranks.iter().copied().max().unwrap_or(0);
    let mut cd_only = vec![true; layers + 1];
    let mut positive = vec![0usize; layers + 1];
    for ((f, &r), &cr) in fitness.iter().zip(ranks).zip(crowding) {
        if cd_class(f, c, d) != CdClass::CdPoint {
            cd_only[r] = false;
        }
        if cr > 0.0 {
            positive[r] += 1;
        }
    }
    let mut present = vec![false; layers + 1];
    for &r in ranks {
        present[r] = true;
    }
    let checked: Vec<usize> = (0..=layers).filter(|&r| present[r] && cd_only[r]).collect();
    let max_positive = checked.iter().map(|&r| positive[r]).max().unwrap_or(0);
    let bound = 4 * (d as usize + 1);
    Ok(CrowdingBoundReport {
        layers_checked: checked.len(),
        max_positive_crowding: max_positive,
        bound,
        passed: max_positive <= bound,
    })
}

/// [`check_lemma1_bound`] on a ranked and crowded NSGA-II population.
pub fn check_lemma1_population(pop: &[Individual], c: i64, d: i64) -> Result<CrowdingBoundReport> {
    let fitness: Vec<&FitnessVector<f64>> = pop.iter().map(|i| &i.eval.noisy_fitness).collect();
    let ranks: Vec<usize> = pop.iter().map(|i| i.rank).collect();
    let crowding: Vec<f64> = pop.iter().map(|i| i.crowding).collect();
    check_lemma1_bound(&fitness, &ranks, &crowding, c, d)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrowdingProbeReport {
    pub objective: ObjectiveId,
    pub n: usize,
    pub p: f64,
    pub runs: usize,
    pub sampled_generations: usize,
    pub layers_checked: usize,
    pub max_positive_crowding: usize,
    pub bound: usize,
    /// Sampled generations whose joint population was not `(0,n)`-separated.
    pub unseparated_generations: usize,
    pub violations: usize,
    pub status: ProbeStatus,
}

/// NSGA-II (`mu = 9(n+1)`) under Bernoulli `(n+1, p)` noise; every joint
/// population `R_t` of the first `generations` generations of each run is
/// checked with `C = 0`, `D = n`.
pub fn crowding_bound_probe(
    objective: ObjectiveId,
    n: usize,
    p: f64,
    runs: usize,
    generations: usize,
    seed: u64,
) -> Result<CrowdingProbeReport> {
    let noise = NoiseModel::Bernoulli {
        delta: (n + 1) as f64,
        p,
    };
    noise.validate()?;
    if n == 0 || runs == 0 {
        return Err(Error::InvalidConfig(
            "crowding probe needs n >= 1 and runs >= 1".into(),
        ));
    }
    let per_run: Vec<(usize, usize, usize, usize)> = (0..runs)
        .into_par_iter()
        .map(|run| {
            let mut rng = trial_rng(seed, "crowding", run as u64);
            let mut alg = Nsga2::new(
                objective,
                n,
                noise,
                Nsga2Config::for_problem_size(n),
                &mut rng,
            )?;
            let (mut layers, mut max_pos, mut unseparated, mut violations) = (0, 0, 0, 0);
            for _ in 0..generations {
                alg.step_observed(&mut rng, |joint| {
                    match check_lemma1_population(joint, 0, n as i64) {
                        Ok(r) => {
                            layers += r.layers_checked;
                            max_pos = max_pos.max(r.max_positive_crowding);
                            violations += usize::from(!r.passed);
                        }
                        Err(_) => unseparated += 1,
                    }
                });
            }
            Ok((layers, max_pos, unseparated, violations))
        })
        .collect::<Result<_>>()?;
    let layers_checked = per_run.iter().map(|r| r.0).sum();
    let max_positive_crowding = per_run.iter().map(|r| r.1).max().unwrap_or(0);
    let unseparated_generations = per_run.iter().map(|r| r.2).sum();
    let violations = per_run.iter().map(|r| r.3).sum();
    let status = if unseparated_generations > 0 || violations > 0 {
        ProbeStatus::Fail
    } else {
        ProbeStatus::Pass
    };
    Ok(CrowdingProbeReport {
        objective,
        n,
        p,
        runs,
        sampled_generations: runs * generations,
        layers_checked,
        max_positive_crowding,
        bound: 4 * (n + 1),
        unseparated_generations,
        violations,
        status,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParentClass {
    /// Uniform over `1^i 0^(n-i)`.
    OnFront,
    /// Uniform over all other bit strings.
    OffFront,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MutationProbeReport {
    pub n: usize,
    pub parent_class: ParentClass,
    pub trials: u64,
    pub hits: u64,
    pub estimate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    /// `1/e + 3/n` on the front, `3/n` off it.
    pub bound: f64,
    pub status: ProbeStatus,
}

pub const MIN_MUTATION_TRIALS: usize = 10_000;
const CHUNK: usize = 10_000;

fn trial_rng(seed: u64, label: &str, index: u64) -> RunRng {
    let mut data = label.as_bytes().to_vec();
    data.extend_from_slice(&index.to_le_bytes());
    RunRng::seed_from_u64(derive_seed(seed, &data))
}

/// Count successes of `trial` over `trials` independent draws, split into
/// fixed-size chunks with their own generators.
fn parallel_count<F>(trials: usize, seed: u64, label: &str, trial: F) -> u64
where
    F: Fn(&mut RunRng) -> bool + Sync,
{
    let chunks = trials.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = trial_rng(seed, label, c as u64);
            let len = CHUNK.min(trials - c * CHUNK);
            (0..len).filter(|_| trial(&mut rng)).count() as u64
        })
        .sum()
}

/// Probability that standard bit mutation (rate `1/n`) of a parent of the
/// given class produces a member of the LOTZ Pareto set `{1^i 0^(n-i)}`.
pub fn estimate_mutation_to_front(
    n: usize,
    parent_class: ParentClass,
    trials: usize,
    seed: u64,
) -> Result<MutationProbeReport> {
    if trials < MIN_MUTATION_TRIALS {
        return Err(Error::InvalidConfig(format!(
            "mutation probe needs at least {MIN_MUTATION_TRIALS} trials"
        )));
    }
    let bound = match parent_class {
        ParentClass::OnFront => (-1f64).exp() + 3.0 / n as f64,
        ParentClass::OffFront => 3.0 / n as f64,
    };
    if n < 3 {
        return Ok(MutationProbeReport {
            n,
            parent_class,
            trials: 0,
            hits: 0,
            estimate: 0.0,
            ci_low: 0.0,
            ci_high: 1.0,
            bound,
            status: ProbeStatus::Skipped,
        });
    }
    let rate = 1.0 / n as f64;
    let label = match parent_class {
        ParentClass::OnFront => "mutation-on",
        ParentClass::OffFront => "mutation-off",
    };
    let hits = parallel_count(trials, seed, label, |rng| {
        let parent = match parent_class {
            ParentClass::OnFront => {
                use rand::Rng;
                BitString::prefix_ones(n, rng.random_range(0..=n))
            }
            ParentClass::OffFront => loop {
                let x = BitString::random(n, rng);
                if !x.is_prefix_ones() {
                    break x;
                }
            },
        };
        bitwise_mutation(&parent, rate, rng).is_prefix_ones()
    });
    let (ci_low, ci_high) = wilson_interval(hits, trials as u64, Z_99);
    Ok(MutationProbeReport {
        n,
        parent_class,
        trials: trials as u64,
        hits,
        estimate: hits as f64 / trials as f64,
        ci_low,
        ci_high,
        bound,
        status: upper_bound_status(ci_high, bound),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CloneProbeReport {
    pub n: usize,
    pub trials: u64,
    pub estimate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    /// `(1 - 1/n)^n`.
    pub exact: f64,
    pub status: ProbeStatus,
}

/// Probability that mutation of `1^n` returns `1^n`, against its exact value.
pub fn estimate_clone_probability(n: usize, trials: usize, seed: u64) -> Result<CloneProbeReport> {
    if n == 0 || trials == 0 {
        return Err(Error::InvalidConfig(
            "clone probe needs n >= 1 and trials >= 1".into(),
        ));
    }
    let parent = BitString::ones(n);
    let rate = 1.0 / n as f64;
    let hits = parallel_count(trials, seed, "clone", |rng| {
        bitwise_mutation(&parent, rate, rng) == parent
    });
    let (ci_low, ci_high) = wilson_interval(hits, trials as u64, Z_99);
    let exact = (1.0 - rate).powi(n as i32);
    Ok(CloneProbeReport {
        n,
        trials: trials as u64,
        estimate: hits as f64 / trials as f64,
        ci_low,
        ci_high,
        exact,
        status: if (ci_low..=ci_high).contains(&exact) {
            ProbeStatus::Pass
        } else {
            ProbeStatus::Fail
        },
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShrinkingReport {
    pub p: f64,
    pub alpha: usize,
    /// `ceil(p alpha) + 1`.
    pub threshold: usize,
    /// Steps starting from at least `threshold` members.
    pub qualifying_steps: u64,
    /// Qualifying steps ending with at most `threshold` members.
    pub shrinking_steps: u64,
    pub frequency: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    /// `p/2 - 0.02`.
    pub required: f64,
    pub status: ProbeStatus,
}

pub const MIN_SHRINKING_STEPS: u64 = 1_000;

/// Frequency of shrinking steps among GSEMO steps that start from a
/// population of at least `ceil(p alpha) + 1` members.
pub fn shrinking_step_stats(steps: &[StepRecord], p: f64, alpha: usize) -> ShrinkingReport {
    let threshold = (p * alpha as f64).ceil() as usize + 1;
    let qualifying: Vec<&StepRecord> = steps
        .iter()
        .filter(|s| s.size_before >= threshold)
        .collect();
    let shrinking = qualifying
        .iter()
        .filter(|s| s.size_after <= threshold)
        .count() as u64;
    let q = qualifying.len() as u64;
    let (ci_low, ci_high) = wilson_interval(shrinking, q, Z_99);
    let required = p / 2.0 - SLACK;
    let status = if p <= 0.0 || p >= 1.0 {
        ProbeStatus::Descriptive
    } else if q < MIN_SHRINKING_STEPS {
        ProbeStatus::Inconclusive
    } else if ci_low >= required {
        ProbeStatus::Pass
    } else {
        ProbeStatus::Fail
    };
    ShrinkingReport {
        p,
        alpha,
        threshold,
        qualifying_steps: q,
        shrinking_steps: shrinking,
        frequency: if q == 0 {
            0.0
        } else {
            shrinking as f64 / q as f64
        },
        ci_low,
        ci_high,
        required,
        status,
    }
}

/// Steps recorded per trial of [`shrinking_probe`].
pub const SHRINKING_STEPS_PER_TRIAL: usize = 10;

/// GSEMO under Bernoulli `(n+1, p)` noise with `alpha = n+1`. Each trial
/// starts from `s` noise-free Pareto-optimal members `1^i 0^(n-i)`, with `s`
/// uniform in `[ceil(p alpha) + 1, alpha - 1]`, and records
/// [`SHRINKING_STEPS_PER_TRIAL`] steps.
pub fn shrinking_probe(
    objective: ObjectiveId,
    n: usize,
    p: f64,
    trials: usize,
    seed: u64,
) -> Result<ShrinkingReport> {
    use rand::seq::index::sample;
    use rand::Rng;

    let noise = NoiseModel::Bernoulli {
        delta: (n + 1) as f64,
        p,
    };
    noise.validate()?;
    let alpha = n + 1;
    let threshold = (p * alpha as f64).ceil() as usize + 1;
    if n == 0 || trials == 0 || threshold > alpha - 1 {
        return Err(Error::InvalidConfig(format!(
            "shrinking probe needs trials >= 1 and ceil(p (n+1)) + 1 <= n, got n = {n}, p = {p}"
        )));
    }
    let steps: Vec<StepRecord> = (0..trials)
        .into_par_iter()
        .flat_map_iter(|t| {
            let mut rng = trial_rng(seed, "shrinking", t as u64);
            let size = rng.random_range(threshold..=alpha - 1);
            let start = sample(&mut rng, alpha, size)
                .into_iter()
                .map(|i| BitString::prefix_ones(n, i))
                .collect();
            let mut alg =
                Gsemo::from_genotypes(objective, n, noise, GsemoConfig::default(), start, &mut rng);
            (0..SHRINKING_STEPS_PER_TRIAL)
                .map(|_| alg.step_observed(&mut rng))
                .collect::<Vec<_>>()
        })
        .collect();
    Ok(shrinking_step_stats(&steps, p, alpha))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MaxPopulationReport {
    pub objective: ObjectiveId,
    pub n: usize,
    pub noise: NoiseModel,
    pub budget: u64,
    pub front_size: usize,
    pub per_run_max: Vec<usize>,
    pub max: usize,
    pub covered_runs: usize,
}

/// Largest GSEMO population seen in each of `runs` runs.
pub fn max_population_probe(
    objective: ObjectiveId,
    n: usize,
    noise: NoiseModel,
    budget: u64,
    runs: usize,
    seed: u64,
) -> Result<MaxPopulationReport> {
    let mut cell = ExperimentConfig::new(AlgorithmKind::Gsemo, objective, n, noise)
        .with_runs(runs)
        .with_seed(seed);
    cell.budget = budget;
    let report = run_batch(&cell)?;
    let per_run_max: Vec<usize> = report.runs.iter().map(|r| r.max_population_size).collect();
    Ok(MaxPopulationReport {
        objective,
        n,
        noise,
        budget,
        front_size: n + 1,
        max: per_run_max.iter().copied().max().unwrap_or(0),
        per_run_max,
        covered_runs: report
            .runs
            .iter()
            .filter(|r| r.outcome == crate::experiments::Outcome::Covered)
            .count(),
    })
}

/// Results of the probe suite, for serialisation.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ProbeSuite {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub mutation: Vec<MutationProbeReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub clone: Option<CloneProbeReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub crowding: Option<CrowdingProbeReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shrinking: Option<ShrinkingReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_population: Option<MaxPopulationReport>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nsga2::crowding_distances;
    use proptest::prelude::*;

    fn fv(a: f64, b: f64) -> FitnessVector<f64> {
        FitnessVector::new(vec![a, b])
    }

    #[test]
    fn cd_examples() {
        assert_eq!(cd_class(&fv(0.0, 0.0), 0, 5), CdClass::CdPoint);
        assert_eq!(cd_class(&fv(3.0, 3.0), 3, 4), CdClass::CdPoint);
        assert_eq!(cd_class(&fv(8.0, 8.0), 3, 4), CdClass::Superior);
        assert_eq!(cd_class(&fv(8.0, 3.0), 3, 4), CdClass::Other);
        assert_eq!(cd_class(&fv(2.0, 3.0), 3, 4), CdClass::Other);
        let c = classify_cd(&[fv(0.0, 0.0), fv(6.0, 6.0), fv(6.0, 0.0)], 0, 5);
        assert_eq!((c.cd_points, c.superior_points, c.other_points), (1, 1, 1));
        assert!(!c.is_separated());
    }

    proptest! {
        #[test]
        fn classification_partitions(
            pts in prop::collection::vec((-5i64..20, -5i64..20), 0..40),
            c in -3i64..5,
            d in 0i64..10,
        ) {
            let pop: Vec<_> = pts.iter().map(|&(a, b)| fv(a as f64, b as f64)).collect();
            let cls = classify_cd(&pop, c, d);
            prop_assert_eq!(cls.total(), pop.len());
        }

        #[test]
        fn wilson_contains_point_estimate(k in 0u64..500, extra in 0u64..500) {
            let n = k + extra + 1;
            let (lo, hi) = wilson_interval(k, n, Z_99);
            let phat = k as f64 / n as f64;
            prop_assert!(lo <= phat + 1e-12 && phat <= hi + 1e-12);
            prop_assert!((0.0..=1.0).contains(&lo) && (0.0..=1.0).contains(&hi));
        }
    }

    #[test]
    fn duplicated_layer_has_few_positive_crowding_members() {
        let v = fv(3.0, 4.0);
        let layer: Vec<&FitnessVector<f64>> = vec![&v; 100];
        let crowd = crowding_distances(&layer);
        let report = check_lemma1_bound(&layer, &[1; 100], &crowd, 0, 10).unwrap();
        assert!(report.max_positive_crowding <= 4);
        assert!(report.passed);
        assert_eq!(report.layers_checked, 1);
    }

    #[test]
    fn unseparated_population_is_rejected() {
        let a = fv(0.0, 0.0);
        let b = fv(11.0, 0.0);
        let err = check_lemma1_bound(&[&a, &b], &[1, 1], &[1.0, 1.0], 0, 10).unwrap_err();
        assert!(matches!(err, Error::NotSeparated { others: 1, .. }));
    }

    #[test]
    fn superior_layers_are_not_checked() {
        let a = fv(0.0, 1.0);
        let b = fv(12.0, 12.0);
        let r = check_lemma1_bound(&[&a, &b], &[2, 1], &[f64::INFINITY; 2], 0, 10).unwrap();
        assert_eq!(r.layers_checked, 1);
        assert_eq!(r.max_positive_crowding, 1);
    }

    #[test]
    fn bernoulli_populations_are_separated() {
        let mut rng = RunRng::seed_from_u64(5);
        for objective in ObjectiveId::ALL {
            let n = 12;
            let noise = NoiseModel::Bernoulli {
                delta: 13.0,
                p: 0.3,
            };
            let mut alg = Nsga2::new(
                objective,
                n,
                noise,
                Nsga2Config::for_problem_size(n),
                &mut rng,
            )
            .unwrap();
            for _ in 0..20 {
                alg.step_observed(&mut rng, |joint| {
                    let f: Vec<_> = joint.iter().map(|i| &i.eval.noisy_fitness).collect();
                    let cls = classify_cd(f, 0, n as i64);
                    assert!(cls.is_separated());
                    assert!(check_lemma1_population(joint, 0, n as i64).unwrap().passed);
                });
            }
        }
    }

    #[test]
    fn crowding_probe_passes_small() {
        let r = crowding_bound_probe(ObjectiveId::Lotz, 10, 0.25, 2, 20, 1).unwrap();
        assert_eq!(r.status, ProbeStatus::Pass);
        assert_eq!(r.sampled_generations, 40);
        assert!(r.max_positive_crowding <= r.bound);
    }

    #[test]
    fn mutation_probe_bounds_and_clone_band() {
        let on = estimate_mutation_to_front(20, ParentClass::OnFront, 50_000, 3).unwrap();
        assert_eq!(on.status, ProbeStatus::Pass);
        // Cloning alone lands on the front.
        let clone = (1.0 - 1.0 / 20.0f64).powi(20);
        assert!(on.estimate >= clone - (on.ci_high - on.ci_low));
        let off = estimate_mutation_to_front(20, ParentClass::OffFront, 50_000, 3).unwrap();
        assert_eq!(off.status, ProbeStatus::Pass);
        assert!(off.estimate < 0.075);
    }

    #[test]
    fn mutation_probe_preconditions() {
        assert!(estimate_mutation_to_front(20, ParentClass::OnFront, 100, 0).is_err());
        let r = estimate_mutation_to_front(2, ParentClass::OffFront, 10_000, 0).unwrap();
        assert_eq!(r.status, ProbeStatus::Skipped);
    }

    #[test]
    fn probes_are_deterministic() {
        let a = estimate_mutation_to_front(15, ParentClass::OnFront, 25_000, 9).unwrap();
        let b = estimate_mutation_to_front(15, ParentClass::OnFront, 25_000, 9).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn clone_probability_matches_exact() {
        let r = estimate_clone_probability(10, 200_000, 4).unwrap();
        assert_eq!(r.status, ProbeStatus::Pass, "{r:?}");
    }

    fn step(before: usize, after: usize) -> StepRecord {
        StepRecord {
            size_before: before,
            size_after: after,
            noisy_parents: 0,
            offspring_noisy: false,
            offspring_accepted: true,
        }
    }

    #[test]
    fn shrinking_stats_verdicts() {
        // p = 0.25, alpha = 21: threshold 7.
        let steps: Vec<_> = (0..2000)
            .map(|i| {
                if i % 4 == 0 {
                    step(10, 3)
                } else {
                    step(10, 11)
                }
            })
            .chain((0..500).map(|_| step(5, 6)))
            .collect();
        let r = shrinking_step_stats(&steps, 0.25, 21);
        assert_eq!(r.threshold, 7);
        assert_eq!(r.qualifying_steps, 2000);
        assert_eq!(r.shrinking_steps, 500);
        assert_eq!(r.status, ProbeStatus::Pass);
        let r = shrinking_step_stats(&steps[..100], 0.25, 21);
        assert_eq!(r.status, ProbeStatus::Inconclusive);
        let r = shrinking_step_stats(&steps, 0.0, 21);
        assert_eq!(r.status, ProbeStatus::Descriptive);
        let r = shrinking_step_stats(&steps, 1.0, 21);
        assert_eq!(r.status, ProbeStatus::Descriptive);
        let never: Vec<_> = (0..2000).map(|_| step(10, 11)).collect();
        assert_eq!(
            shrinking_step_stats(&never, 0.25, 21).status,
            ProbeStatus::Fail
        );
    }

    #[test]
    fn shrinking_probe_small() {
        let r = shrinking_probe(ObjectiveId::Omm, 12, 0.25, 300, 2).unwrap();
        assert!(r.qualifying_steps >= 300);
        assert!(r.frequency >= 0.105, "{r:?}");
    }

    #[test]
    fn noise_free_gsemo_fills_the_front() {
        let r =
            max_population_probe(ObjectiveId::Lotz, 10, NoiseModel::None, 100_000, 3, 1).unwrap();
        assert_eq!(r.covered_runs, 3);
        assert_eq!(r.max, 11);
    }
}
