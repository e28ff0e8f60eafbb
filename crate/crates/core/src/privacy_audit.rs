//! Empirical differential-privacy auditing.
//!
//! The audit runs a mechanism many times on two neighboring datasets,
//! histograms the outputs (with tail cells and a dedicated no-reply cell),
//! and checks the defining inequality p1(B) <= e^eps p2(B) + delta in both
//! directions with a 3-sigma binomial slack per bin. Empirical auditing can
//! refute privacy, never certify it: a passing report means "no violation
//! detected at stated power", nothing stronger. The slack carries no
//! multiplicity correction; this is a regression tripwire, not a calibrated
//! hypothesis test.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{DplocError, Result};
use crate::median_dp::{
    ptr_prepare, ptr_release_with_noise, smooth_prepare, smooth_release_with_noise, PrivacyBudget,
    PtrRelease, ReleaseOutcome, SmoothRelease,
};
use crate::noise::NoiseSource;
use crate::sample::{left_median_index, Sample, SortedSample};

/// How a neighboring dataset is generated from a base sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NeighborStrategy {
    /// Replace a uniformly chosen coordinate by a fresh value in the data range.
    RandomReplace,
    /// Replace the most extreme coordinate by a value six orders of magnitude
    /// away; stresses sensitivity calibration.
    OutlierSwap,
    /// Perturb a coordinate adjacent to the median; stresses the breakdown
    /// statistic of the propose-test-release mechanism.
    MedianStraddle,
}

pub const ALL_STRATEGIES: [NeighborStrategy; 3] = [
    NeighborStrategy::RandomReplace,
    NeighborStrategy::OutlierSwap,
    NeighborStrategy::MedianStraddle,
];

/// Two datasets at Hamming distance exactly 1.
#[derive(Debug, Clone)]
pub struct NeighborPair {
    pub x: Sample,
    pub x_prime: Sample,
    pub strategy: NeighborStrategy,
}

/// Generate `count` neighbor pairs from a base sample, cycling through the
/// given strategies.
pub fn make_neighbor_pairs(
    base: &Sample,
    strategies: &[NeighborStrategy],
    count: usize,
    rng: &mut NoiseSource,
) -> Result<Vec<NeighborPair>> {
    if count == 0 {
        return Err(DplocError::invalid("pair count must be at least 1"));
    }
    if strategies.is_empty() {
        return Err(DplocError::invalid("at least one strategy is required"));
    }
    (0..count)
        .map(|i| make_neighbor_pair(base, strategies[i % strategies.len()], rng))
        .collect()
}

fn make_neighbor_pair(
    base: &Sample,
    strategy: NeighborStrategy,
    rng: &mut NoiseSource,
) -> Result<NeighborPair> {
    let values = base.values();
    let n = values.len();
    let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let spread = (hi - lo).max(1.0);

    let (index, replacement) = match strategy {
        NeighborStrategy::RandomReplace => {
            let index = rng.random_range(0..n);
            let mut replacement = lo - spread + rng.random_range(0.0..3.0 * spread);
            while replacement == values[index] {
                replacement += spread * 1e-3;
            }
            (index, replacement)
        }
        NeighborStrategy::OutlierSwap => {
            let index = values
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
                .map(|(i, _)| i)
                .expect("sample is non-empty");
            let magnitude = 1e6 * hi.abs().max(lo.abs()).max(1.0);
            let sign = if rng.random_range(0..2u32) == 0 { 1.0 } else { -1.0 };
            (index, sign * magnitude)
        }
        NeighborStrategy::MedianStraddle => {
            let sorted = SortedSample::from_sample(base);
            let ell = left_median_index(n)?;
            let median = sorted.as_slice()[ell - 1];
            // move a point from one side of the median just across it
            let index = values
                .iter()
                .enumerate()
                .min_by(|a, b| {
                    (a.1 - median).abs().total_cmp(&(b.1 - median).abs())
                })
                .map(|(i, _)| i)
                .expect("sample is non-empty");
            let offset = (rng.uniform_open01() - 0.5) * 0.1 * spread;
            let mut replacement = median + offset;
            while replacement == values[index] {
                replacement += spread * 1e-4;
            }
            (index, replacement)
        }
    };

    let mut perturbed = values.to_vec();
    perturbed[index] = replacement;
    let pair = NeighborPair {
        x: base.clone(),
        x_prime: Sample::new(perturbed)?,
        strategy,
    };
    debug_assert_eq!(pair.x.hamming_distance(&pair.x_prime)?, 1);
    Ok(pair)
}

// ---------------------------------------------------------------------------
// Mechanisms under audit
// ---------------------------------------------------------------------------

/// The mechanisms the audit knows how to drive. The private mechanisms reuse
/// the exact release paths of `median_dp`; the last two exist to demonstrate
/// audit power (a blatantly non-private release) and audit sanity (pure,
/// data-independent noise).
#[derive(Debug, Clone)]
pub enum AuditMechanism {
    SmoothMedian { t: f64, budget: PrivacyBudget },
    PtrMedian { eta: f64, budget: PrivacyBudget },
    /// Release the sample minimum exactly. Not private; must fail the audit.
    ReleaseMin,
    /// Release a standard Laplace draw, ignoring the data entirely.
    PureLaplace,
}

enum Prepared {
    Smooth(SmoothRelease),
    Ptr(PtrRelease),
    Constant(f64),
    PureLaplace,
}

impl AuditMechanism {
    fn prepare(&self, x: &Sample) -> Result<Prepared> {
        Ok(match self {
            Self::SmoothMedian { t, budget } => Prepared::Smooth(smooth_prepare(x, *t, budget)?),
            Self::PtrMedian { eta, budget } => Prepared::Ptr(ptr_prepare(x, *eta, budget)?),
            Self::ReleaseMin => Prepared::Constant(
                x.values().iter().cloned().fold(f64::INFINITY, f64::min),
            ),
            Self::PureLaplace => Prepared::PureLaplace,
        })
    }
}

impl Prepared {
    fn draw(&self, rng: &mut NoiseSource) -> ReleaseOutcome {
        match self {
            Self::Smooth(release) => {
                ReleaseOutcome::Value(smooth_release_with_noise(release, rng.standard_laplace()))
            }
            Self::Ptr(release) => {
                let z1 = rng.standard_laplace();
                let z2 = rng.standard_laplace();
                ptr_release_with_noise(release, z1, z2)
            }
            Self::Constant(v) => ReleaseOutcome::Value(*v),
            Self::PureLaplace => ReleaseOutcome::Value(rng.standard_laplace()),
        }
    }
}

// ---------------------------------------------------------------------------
// Audit report
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct BinStat {
    /// Human-readable bin label: a half-open interval, a tail, or "NOREPLY".
    pub label: String,
    pub count_x: usize,
    pub count_x_prime: usize,
    pub p_x: f64,
    pub p_x_prime: f64,
    /// p_x - e^eps p_x_prime (forward direction).
    pub violation_forward: f64,
    /// p_x_prime - e^eps p_x (mirror direction).
    pub violation_reverse: f64,
    pub slack_forward: f64,
    pub slack_reverse: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AuditVerdict {
    /// No violation detected at stated power. Not a certification.
    Pass,
    Fail,
}

#[derive(Debug, Clone, Serialize)]
pub struct AuditReport {
    pub strategy: NeighborStrategy,
    pub epsilon: f64,
    pub delta: f64,
    pub trials_per_dataset: usize,
    pub bins: Vec<BinStat>,
    pub max_violation_forward: f64,
    pub max_violation_reverse: f64,
    /// Slack at the bin attaining the worst forward violation.
    pub slack_at_max_forward: f64,
    pub slack_at_max_reverse: f64,
    pub verdict: AuditVerdict,
}

/// Run `trials` releases of the mechanism on each side of a neighbor pair and
/// test the privacy inequality at the declared budget in both directions.
///
/// Outputs are binned into `bins` equal-width cells over the pooled central
/// range (0.5%..99.5% quantiles of all real outputs), two tail cells, and a
/// no-reply cell, so heavy-tailed outputs cannot dilute the comparison and
/// no-reply is tested like any other event.
pub fn audit_mechanism(
    mechanism: &AuditMechanism,
    pair: &NeighborPair,
    declared: &PrivacyBudget,
    bins: usize,
    trials: usize,
    rng: &mut NoiseSource,
) -> Result<AuditReport> {
    if trials < 10_000 {
        return Err(DplocError::invalid(format!(
            "audit needs at least 10000 trials per dataset, got {trials}"
        )));
    }
    if bins < 2 {
        return Err(DplocError::invalid(format!(
            "audit needs at least 2 central bins, got {bins}"
        )));
    }

    let prepared_x = mechanism.prepare(&pair.x)?;
    let prepared_x_prime = mechanism.prepare(&pair.x_prime)?;
    let mut rng_x = NoiseSource::derived(rng.next_u64(), 0);
    let mut rng_x_prime = NoiseSource::derived(rng.next_u64(), 1);

    let outcomes_x: Vec<ReleaseOutcome> =
        (0..trials).map(|_| prepared_x.draw(&mut rng_x)).collect();
    let outcomes_x_prime: Vec<ReleaseOutcome> = (0..trials)
        .map(|_| prepared_x_prime.draw(&mut rng_x_prime))
        .collect();

    // pooled central range over the real-valued outputs of both runs
    let mut pooled: Vec<f64> = outcomes_x
        .iter()
        .chain(outcomes_x_prime.iter())
        .filter_map(ReleaseOutcome::value)
        .collect();
    pooled.sort_unstable_by(f64::total_cmp);
    let (range_lo, range_hi) = if pooled.is_empty() {
        (0.0, 1.0)
    } else {
        let q = |p: f64| pooled[(((p * pooled.len() as f64).ceil() as usize).max(1) - 1).min(pooled.len() - 1)];
        (q(0.005), q(0.995))
    };
    let width = if range_hi > range_lo {
        (range_hi - range_lo) / bins as f64
    } else {
        1.0
    };

    // cells: 0 = left tail, 1..=bins = central, bins+1 = right tail, bins+2 = no reply
    let n_cells = bins + 3;
    let cell_of = |outcome: &ReleaseOutcome| -> usize {
        match outcome.value() {
            None => n_cells - 1,
            Some(v) => {
                if v < range_lo {
                    0
                } else if v > range_hi {
                    bins + 1
                } else {
                    let idx = ((v - range_lo) / width) as usize;
                    1 + idx.min(bins - 1)
                }
            }
        }
    };

    let mut count_x = vec![0usize; n_cells];
    let mut count_x_prime = vec![0usize; n_cells];
    for o in &outcomes_x {
        count_x[cell_of(o)] += 1;
    }
    for o in &outcomes_x_prime {
        count_x_prime[cell_of(o)] += 1;
    }

    let e_eps = declared.epsilon().exp();
    let delta = declared.delta();
    let tf = trials as f64;
    let mut stats = Vec::with_capacity(n_cells);
    let mut verdict = AuditVerdict::Pass;
    let (mut max_fwd, mut max_rev) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    let (mut slack_fwd_at_max, mut slack_rev_at_max) = (0.0, 0.0);
    for cell in 0..n_cells {
        let p1 = count_x[cell] as f64 / tf;
        let p2 = count_x_prime[cell] as f64 / tf;
        let sd1 = (p1 * (1.0 - p1) / tf).sqrt();
        let sd2 = (p2 * (1.0 - p2) / tf).sqrt();
        let slack_forward = 3.0 * sd1 + 3.0 * e_eps * sd2;
        let slack_reverse = 3.0 * sd2 + 3.0 * e_eps * sd1;
        let violation_forward = p1 - e_eps * p2;
        let violation_reverse = p2 - e_eps * p1;
        if violation_forward > delta + slack_forward || violation_reverse > delta + slack_reverse {
            verdict = AuditVerdict::Fail;
        }
        if violation_forward > max_fwd {
            max_fwd = violation_forward;
            slack_fwd_at_max = slack_forward;
        }
        if violation_reverse > max_rev {
            max_rev = violation_reverse;
            slack_rev_at_max = slack_reverse;
        }
        let label = if cell == n_cells - 1 {
            "NOREPLY".to_string()
        } else if cell == 0 {
            format!("(-inf, {range_lo:.6})")
        } else if cell == bins + 1 {
            format!("({range_hi:.6}, +inf)")
        } else {
            let lo = range_lo + (cell - 1) as f64 * width;
            format!("[{lo:.6}, {:.6})", lo + width)
        };
        stats.push(BinStat {
            label,
            count_x: count_x[cell],
            count_x_prime: count_x_prime[cell],
            p_x: p1,
            p_x_prime: p2,
            violation_forward,
            violation_reverse,
            slack_forward,
            slack_reverse,
        });
    }

    Ok(AuditReport {
        strategy: pair.strategy,
        epsilon: declared.epsilon(),
        delta,
        trials_per_dataset: trials,
        bins: stats,
        max_violation_forward: max_fwd,
        max_violation_reverse: max_rev,
        slack_at_max_forward: slack_fwd_at_max,
        slack_at_max_reverse: slack_rev_at_max,
        verdict,
    })
}

// ---------------------------------------------------------------------------
// Structural check: the breakdown statistic moves by at most one
// ---------------------------------------------------------------------------

/// Over `trials` random (sample, eta, strategy) triples, count neighbor pairs
/// with |a_hat(x) - a_hat(x')| > 1. The contract is zero violations.
pub fn check_a_hat_sensitivity(trials: usize, rng: &mut NoiseSource) -> usize {
    let mut violations = 0usize;
    for trial in 0..trials {
        let n = rng.random_range(5..48usize);
        let scale = 10f64.powf(rng.random_range(-1.0..2.0));
        let heavy = trial % 3 == 0;
        let values: Vec<f64> = (0..n)
            .map(|_| {
                let v = scale * (rng.uniform_open01() - 0.5) * 2.0;
                if heavy {
                    // occasional heavy-tailed coordinates
                    v / (rng.uniform_open01().powf(0.8))
                } else {
                    v
                }
            })
            .collect();
        let base = Sample::new(values).expect("generated values are finite");
        let strategy = ALL_STRATEGIES[trial % ALL_STRATEGIES.len()];
        let pair = make_neighbor_pair(&base, strategy, rng).expect("pair construction");
        let eta = scale * 10f64.powf(rng.random_range(-2.5..0.5));
        let a = crate::median_dp::a_hat(&SortedSample::from_sample(&pair.x), eta)
            .expect("a_hat on valid sample");
        let b = crate::median_dp::a_hat(&SortedSample::from_sample(&pair.x_prime), eta)
            .expect("a_hat on valid sample");
        if a.abs_diff(b) > 1 {
            violations += 1;
        }
    }
    violations
}

#[cfg(test)]
mod tests {
    use super::*;

    fn budget(eps: f64, delta: f64) -> PrivacyBudget {
        PrivacyBudget::new(eps, delta).unwrap()
    }

    fn uniform_sample(n: usize, seed: u64) -> Sample {
        let mut rng = NoiseSource::new(seed);
        Sample::new((0..n).map(|_| rng.uniform_open01()).collect()).unwrap()
    }

    #[test]
    fn neighbor_pairs_differ_in_exactly_one_coordinate() {
        let base = uniform_sample(30, 1);
        let mut rng = NoiseSource::new(2);
        let pairs = make_neighbor_pairs(&base, &ALL_STRATEGIES, 9, &mut rng).unwrap();
        assert_eq!(pairs.len(), 9);
        for pair in &pairs {
            assert_eq!(pair.x.hamming_distance(&pair.x_prime).unwrap(), 1);
        }
        assert!(make_neighbor_pairs(&base, &ALL_STRATEGIES, 0, &mut rng).is_err());
        assert!(make_neighbor_pairs(&base, &[], 3, &mut rng).is_err());
    }

    #[test]
    fn outlier_swap_replaces_the_extreme() {
        let base = Sample::new(vec![1.0, 2.0, 3.0]).unwrap();
        let mut rng = NoiseSource::new(3);
        let pair = make_neighbor_pair(&base, NeighborStrategy::OutlierSwap, &mut rng).unwrap();
        let changed: Vec<usize> = (0..3)
            .filter(|&i| base.values()[i] != pair.x_prime.values()[i])
            .collect();
        assert_eq!(changed, vec![2]);
        assert!(pair.x_prime.values()[2].abs() >= 1e6);
    }

    #[test]
    fn pure_noise_mechanism_passes() {
        let base = uniform_sample(20, 4);
        let mut rng = NoiseSource::new(5);
        let pair = make_neighbor_pair(&base, NeighborStrategy::RandomReplace, &mut rng).unwrap();
        let report = audit_mechanism(
            &AuditMechanism::PureLaplace,
            &pair,
            &budget(1.0, 0.01),
            10,
            20_000,
            &mut rng,
        )
        .unwrap();
        assert_eq!(report.verdict, AuditVerdict::Pass);
        // identical distributions: worst statistic within slack in every bin
        for bin in &report.bins {
            assert!(bin.violation_forward <= bin.slack_forward + 0.01);
        }
    }

    #[test]
    fn identical_pair_passes_trivially() {
        let base = uniform_sample(20, 6);
        let pair = NeighborPair {
            x: base.clone(),
            x_prime: base.clone(),
            strategy: NeighborStrategy::RandomReplace,
        };
        let mut rng = NoiseSource::new(7);
        let report = audit_mechanism(
            &AuditMechanism::SmoothMedian {
                t: 2.0,
                budget: budget(1.0, 0.01),
            },
            &pair,
            &budget(1.0, 0.01),
            10,
            10_000,
            &mut rng,
        )
        .unwrap();
        assert_eq!(report.verdict, AuditVerdict::Pass);
    }

    #[test]
    fn non_private_release_fails_deterministically() {
        // outlier swap at the minimum: release-the-minimum separates the two
        // datasets into disjoint bins with probability one
        let base = Sample::new(vec![-3.0, 0.5, 1.0, 2.0]).unwrap();
        let mut perturbed = base.values().to_vec();
        perturbed[0] = -1e6;
        let pair = NeighborPair {
            x: base.clone(),
            x_prime: Sample::new(perturbed).unwrap(),
            strategy: NeighborStrategy::OutlierSwap,
        };
        let mut rng = NoiseSource::new(8);
        let report = audit_mechanism(
            &AuditMechanism::ReleaseMin,
            &pair,
            &budget(1.0, 0.01),
            10,
            10_000,
            &mut rng,
        )
        .unwrap();
        assert_eq!(report.verdict, AuditVerdict::Fail);
        // one bin has all the mass of x and none of x'
        assert!(report
            .bins
            .iter()
            .any(|b| b.p_x == 1.0 && b.p_x_prime == 0.0));
        assert!(report.max_violation_forward > 0.99);
    }

    #[test]
    fn audit_rejects_undersized_runs() {
        let base = uniform_sample(10, 9);
        let mut rng = NoiseSource::new(10);
        let pair = make_neighbor_pair(&base, NeighborStrategy::RandomReplace, &mut rng).unwrap();
        assert!(audit_mechanism(
            &AuditMechanism::PureLaplace,
            &pair,
            &budget(1.0, 0.01),
            10,
            100,
            &mut rng
        )
        .is_err());
        assert!(audit_mechanism(
            &AuditMechanism::PureLaplace,
            &pair,
            &budget(1.0, 0.01),
            1,
            10_000,
            &mut rng
        )
        .is_err());
    }

    #[test]
    fn probabilities_sum_to_one_per_dataset() {
        let base = uniform_sample(40, 11);
        let mut rng = NoiseSource::new(12);
        let pair = make_neighbor_pair(&base, NeighborStrategy::MedianStraddle, &mut rng).unwrap();
        let report = audit_mechanism(
            &AuditMechanism::PtrMedian {
                eta: 0.05,
                budget: budget(1.0, 0.01),
            },
            &pair,
            &budget(2.0, 0.01),
            8,
            10_000,
            &mut rng,
        )
        .unwrap();
        let sum_x: f64 = report.bins.iter().map(|b| b.p_x).sum();
        let sum_x_prime: f64 = report.bins.iter().map(|b| b.p_x_prime).sum();
        assert!((sum_x - 1.0).abs() < 1e-12);
        assert!((sum_x_prime - 1.0).abs() < 1e-12);
        // the no-reply cell is part of the test
        assert_eq!(report.bins.last().unwrap().label, "NOREPLY");
    }

    #[test]
    fn a_hat_sensitivity_spot_pair() {
        let s1 = SortedSample::from_sample(&Sample::new(vec![1.0, 2.0, 3.0, 10.0]).unwrap());
        let s2 = SortedSample::from_sample(&Sample::new(vec![1.0, 2.0, 3.0, 0.5]).unwrap());
        let a = crate::median_dp::a_hat(&s1, 0.5).unwrap();
        let b = crate::median_dp::a_hat(&s2, 0.5).unwrap();
        assert!(a.abs_diff(b) <= 1, "a = {a}, b = {b}");
    }

    #[test]
    fn a_hat_sensitivity_randomized_small_run() {
        let mut rng = NoiseSource::new(13);
        assert_eq!(check_a_hat_sensitivity(2_000, &mut rng), 0);
    }
}
