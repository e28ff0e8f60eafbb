//! Monte-Carlo deviation experiments and the mean-estimation negative result.
//!
//! Every trial owns two derived noise streams (data and mechanism noise)
//! keyed by (base seed, trial index), so results are byte-identical across
//! worker-thread counts and runs. Bound preconditions are validated before
//! the first trial so a misconfigured run fails immediately with the exact
//! range that was violated.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{
    empirical_median_bound, mom_bound, ptr_median_bound, smooth_median_bound, RegularityProfile,
};
use crate::error::{DplocError, Result};
use crate::harness::distributions::{generate_sample, regularity_profile, DistributionSpec};
use crate::mean_estimators::{
    blocks_for_alpha, dp_mom_prepare, dp_mom_release_with_noise, median_of_means,
    partition_blocks, truncated_mom, BlockPartition,
};
use crate::median_dp::{
    calibrate_eta, ptr_median, smooth_dp_median, PrivacyBudget, ReleaseOutcome,
};
use crate::noise::NoiseSource;
use crate::sample::empirical_median;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Smooth,
    Ptr,
    EmpMedian,
    Mom,
    DpMom,
    TruncMom,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Smooth => "smooth",
            Self::Ptr => "ptr",
            Self::EmpMedian => "emp_median",
            Self::Mom => "mom",
            Self::DpMom => "dp_mom",
            Self::TruncMom => "trunc_mom",
        }
    }

    fn needs_budget(&self) -> bool {
        matches!(self, Self::Smooth | Self::Ptr | Self::DpMom)
    }

    fn is_mean_method(&self) -> bool {
        matches!(self, Self::Mom | Self::DpMom | Self::TruncMom)
    }
}

/// One Monte-Carlo experiment: a distribution, a sample size, a method, and
/// the confidence level its deviation bound is evaluated at.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub distribution: DistributionSpec,
    pub n: usize,
    pub trials: usize,
    pub method: Method,
    pub alpha: f64,
    pub base_seed: u64,
    #[serde(default)]
    pub epsilon: Option<f64>,
    #[serde(default)]
    pub delta: Option<f64>,
    /// Truncation level; defaults to sqrt(n) for the mean methods.
    #[serde(default)]
    pub t: Option<f64>,
    /// Block count for the mean methods; defaults to ceil(8 ln(2/alpha)).
    #[serde(default)]
    pub n_blocks: Option<usize>,
    /// Median-neighborhood radius for the regularity profile (median methods).
    #[serde(default)]
    pub r: Option<f64>,
    /// Overrides the calibrated eta (ptr only).
    #[serde(default)]
    pub eta: Option<f64>,
    /// Worker threads; defaults to one per logical CPU.
    #[serde(default)]
    pub threads: Option<usize>,
}

impl ExperimentConfig {
    fn budget(&self) -> Result<PrivacyBudget> {
        match (self.epsilon, self.delta) {
            (Some(e), Some(d)) => PrivacyBudget::new(e, d),
            _ => Err(DplocError::config(format!(
                "method {} requires epsilon and delta",
                self.method.name()
            ))),
        }
    }

    fn radius(&self) -> Result<f64> {
        self.r.ok_or_else(|| {
            DplocError::config(format!(
                "method {} requires the profile radius r",
                self.method.name()
            ))
        })
    }
}

/// Outcome of one trial.
#[derive(Debug, Clone, Serialize)]
pub struct TrialRecord {
    pub trial_index: usize,
    /// Derived per-trial data seed.
    pub seed: u64,
    pub estimate: ReleaseOutcome,
    pub abs_error: Option<f64>,
    pub within_bound: Option<bool>,
}

/// Aggregated Monte-Carlo results against the analytic bound.
#[derive(Debug, Clone, Serialize)]
pub struct DeviationReport {
    pub method: &'static str,
    pub n: usize,
    pub trials: usize,
    pub alpha: f64,
    pub epsilon: Option<f64>,
    pub delta: Option<f64>,
    pub base_seed: u64,
    /// Analytic bound the errors are compared against.
    pub bound_value: f64,
    /// True location parameter (median or mean, per method).
    pub target: f64,
    pub no_reply_count: usize,
    pub no_reply_rate: f64,
    /// Fraction of all trials with |estimate - target| <= bound; no-reply
    /// trials count as not covered.
    pub coverage: f64,
    /// Empirical (1 - alpha)-quantile of the absolute errors over replied
    /// trials; absent if every trial answered no-reply.
    pub error_quantile: Option<f64>,
    pub eta_used: Option<f64>,
    pub t_used: Option<f64>,
    pub n_blocks_used: Option<usize>,
    pub runtime_seconds: f64,
    #[serde(skip_serializing)]
    pub records_internal: Vec<TrialRecord>,
}

impl DeviationReport {
    pub fn records(&self) -> &[TrialRecord] {
        &self.records_internal
    }
}

/// Empirical q-quantile of unsorted values (smallest value v with at least
/// ceil(q * len) observations <= v).
pub fn empirical_quantile(values: &[f64], q: f64) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut sorted = values.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    let rank = ((q * sorted.len() as f64).ceil() as usize).clamp(1, sorted.len());
    Some(sorted[rank - 1])
}

fn install_pool<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        None => Ok(f()),
        Some(k) => {
            if k == 0 {
                return Err(DplocError::config("threads must be at least 1"));
            }
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(k)
                .build()
                .map_err(|e| DplocError::config(format!("thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

/// Run the configured Monte-Carlo experiment and compare per-trial errors to
/// the matching analytic bound.
pub fn run_deviation_experiment(cfg: &ExperimentConfig) -> Result<DeviationReport> {
    cfg.distribution.validate()?;
    if cfg.trials < 100 {
        return Err(DplocError::config(format!(
            "at least 100 trials are required, got {}",
            cfg.trials
        )));
    }
    if !(cfg.alpha > 0.0 && cfg.alpha < 1.0) {
        return Err(DplocError::config(format!(
            "alpha must lie in (0, 1), got {}",
            cfg.alpha
        )));
    }

    // resolve the per-method plan and validate bound preconditions up front
    enum Plan {
        Smooth {
            budget: PrivacyBudget,
            t: f64,
        },
        Ptr {
            budget: PrivacyBudget,
            eta: f64,
        },
        EmpMedian,
        Mean {
            partition: BlockPartition,
            t: Option<f64>,
            budget: Option<PrivacyBudget>,
        },
    }

    let mut eta_used = None;
    let mut t_used = cfg.t;
    let mut n_blocks_used = None;
    let (plan, bound_value, target) = match cfg.method {
        Method::Smooth => {
            let budget = cfg.budget()?;
            let radius = cfg.radius()?;
            let t = cfg
                .t
                .ok_or_else(|| DplocError::config("smooth requires the truncation level t"))?;
            let profile = regularity_profile(&cfg.distribution, radius)?;
            let bound = smooth_median_bound(cfg.n, &profile, t, &budget, cfg.alpha)?;
            (
                Plan::Smooth { budget, t },
                bound.total,
                cfg.distribution.population_median(),
            )
        }
        Method::Ptr => {
            let budget = cfg.budget()?;
            let radius = cfg.radius()?;
            let profile = regularity_profile(&cfg.distribution, radius)?;
            let eta = match cfg.eta {
                Some(eta) => eta,
                None => {
                    calibrate_eta(cfg.n, &budget, cfg.alpha, profile.density_floor, radius)?.eta
                }
            };
            eta_used = Some(eta);
            let bound = ptr_median_bound(cfg.n, &profile, &budget, cfg.alpha)?;
            (
                Plan::Ptr { budget, eta },
                bound.total,
                cfg.distribution.population_median(),
            )
        }
        Method::EmpMedian => {
            let radius = cfg.radius()?;
            let profile = regularity_profile(&cfg.distribution, radius)?;
            let bound =
                empirical_median_bound(cfg.n, profile.density_floor, radius, cfg.alpha)?;
            (Plan::EmpMedian, bound, cfg.distribution.population_median())
        }
        Method::Mom | Method::TruncMom | Method::DpMom => {
            let variance = cfg.distribution.variance().ok_or_else(|| {
                DplocError::config(format!(
                    "{} requires two finite moments, but {:?} has none",
                    cfg.method.name(),
                    cfg.distribution
                ))
            })?;
            let mean = cfg
                .distribution
                .population_mean()
                .expect("finite variance implies finite mean");
            let n_blocks = match cfg.n_blocks {
                Some(k) => k,
                None => blocks_for_alpha(cfg.alpha)?,
            };
            n_blocks_used = Some(n_blocks);
            let partition = partition_blocks(cfg.n, n_blocks)?;
            let bound = mom_bound(variance.sqrt(), cfg.n, cfg.alpha)?;
            let t = if cfg.method == Method::Mom {
                None
            } else {
                Some(cfg.t.unwrap_or_else(|| (cfg.n as f64).sqrt()))
            };
            t_used = t;
            let budget = if cfg.method == Method::DpMom {
                Some(cfg.budget()?)
            } else {
                None
            };
            (
                Plan::Mean {
                    partition,
                    t,
                    budget,
                },
                bound,
                mean,
            )
        }
    };

    let started = std::time::Instant::now();
    let records: Result<Vec<TrialRecord>> = install_pool(cfg.threads, || {
        (0..cfg.trials)
            .into_par_iter()
            .map(|trial| -> Result<TrialRecord> {
                let mut data_rng = NoiseSource::derived(cfg.base_seed, 2 * trial as u64);
                let mut noise_rng = NoiseSource::derived(cfg.base_seed, 2 * trial as u64 + 1);
                let seed = data_rng.seed();
                let x = generate_sample(&cfg.distribution, cfg.n, &mut data_rng)?;
                let estimate = match &plan {
                    Plan::Smooth { budget, t } => {
                        ReleaseOutcome::Value(smooth_dp_median(&x, *t, budget, &mut noise_rng)?)
                    }
                    Plan::Ptr { budget, eta } => ptr_median(&x, *eta, budget, &mut noise_rng)?,
                    Plan::EmpMedian => ReleaseOutcome::Value(empirical_median(&x)?),
                    Plan::Mean {
                        partition,
                        t,
                        budget,
                    } => ReleaseOutcome::Value(match (t, budget) {
                        (None, _) => median_of_means(&x, partition)?,
                        (Some(t), None) => truncated_mom(&x, partition, *t)?,
                        (Some(t), Some(budget)) => {
                            let release = dp_mom_prepare(&x, partition, *t, budget)?;
                            dp_mom_release_with_noise(&release, noise_rng.standard_laplace())
                        }
                    }),
                };
                let abs_error = estimate.value().map(|v| (v - target).abs());
                let within_bound = abs_error.map(|e| e <= bound_value);
                Ok(TrialRecord {
                    trial_index: trial,
                    seed,
                    estimate,
                    abs_error,
                    within_bound,
                })
            })
            .collect()
    })?;
    let records = records?;
    let runtime_seconds = started.elapsed().as_secs_f64();

    let no_reply_count = records.iter().filter(|r| r.estimate.is_no_reply()).count();
    let covered = records
        .iter()
        .filter(|r| r.within_bound == Some(true))
        .count();
    let errors: Vec<f64> = records.iter().filter_map(|r| r.abs_error).collect();
    Ok(DeviationReport {
        method: cfg.method.name(),
        n: cfg.n,
        trials: cfg.trials,
        alpha: cfg.alpha,
        epsilon: cfg.epsilon,
        delta: cfg.delta,
        base_seed: cfg.base_seed,
        bound_value,
        target,
        no_reply_count,
        no_reply_rate: no_reply_count as f64 / cfg.trials as f64,
        coverage: covered as f64 / cfg.trials as f64,
        error_quantile: empirical_quantile(&errors, 1.0 - cfg.alpha),
        eta_used,
        t_used,
        n_blocks_used,
        runtime_seconds,
        records_internal: records,
    })
}

// ---------------------------------------------------------------------------
// Negative result: privatizing the median of means ruins its deviations
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NegativeResultConfig {
    /// Must have finite variance (the median-of-means bound needs two moments).
    pub distribution: DistributionSpec,
    pub n: usize,
    pub epsilon: f64,
    pub delta: f64,
    pub alpha: f64,
    pub repetitions: usize,
    pub trials_per_rep: usize,
    pub base_seed: u64,
    #[serde(default)]
    pub n_blocks: Option<usize>,
    #[serde(default)]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RepetitionSummary {
    pub repetition: usize,
    /// (1 - alpha)-quantile of |median_of_means - mean| in this repetition.
    pub mom_error_quantile: f64,
    /// (1 - alpha)-quantile of |dp_mom_smooth - mean| in this repetition.
    pub dp_error_quantile: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct NegativeResultReport {
    pub reps: Vec<RepetitionSummary>,
    pub all_ratios_above_one: bool,
    /// Trials where the block-mean smooth sensitivity fell below the
    /// deterministic floor 2T e^{-beta N}; must be zero.
    pub noise_floor_violations: usize,
    pub trials_total: usize,
    /// Configured n; the sample is trimmed to the largest multiple of the
    /// block count before partitioning.
    pub n_configured: usize,
    pub n_used: usize,
    pub n_blocks: usize,
    pub t_used: f64,
    /// 2T e^{-beta N}: the deterministic lower bound on the sensitivity.
    pub noise_floor: f64,
    /// Median over trials of the added noise scale (2/eps) S^(beta).
    pub dp_noise_scale_median: f64,
    /// The non-private error scale 2 sigma sqrt(ln(2/alpha)/n) it dwarfs.
    pub nonprivate_error_scale: f64,
}

/// Paired trials of median-of-means vs its smooth-sensitivity privatization
/// at identical data seeds, with T = sqrt(n).
pub fn run_negative_result_experiment(cfg: &NegativeResultConfig) -> Result<NegativeResultReport> {
    cfg.distribution.validate()?;
    let variance = cfg.distribution.variance().ok_or_else(|| {
        DplocError::config(format!(
            "the negative-result experiment requires two finite moments, but {:?} has none",
            cfg.distribution
        ))
    })?;
    let mean = cfg
        .distribution
        .population_mean()
        .expect("finite variance implies finite mean");
    if cfg.repetitions == 0 {
        return Err(DplocError::config("at least one repetition is required"));
    }
    if cfg.trials_per_rep < 100 {
        return Err(DplocError::config(format!(
            "at least 100 trials per repetition are required, got {}",
            cfg.trials_per_rep
        )));
    }
    let budget = PrivacyBudget::new(cfg.epsilon, cfg.delta)?;
    let n_blocks = match cfg.n_blocks {
        Some(k) => k,
        None => blocks_for_alpha(cfg.alpha)?,
    };
    if n_blocks < 2 {
        return Err(DplocError::config(
            "the median of a single block mean is not the studied estimator; use at least 2 blocks",
        ));
    }
    if cfg.n < n_blocks {
        return Err(DplocError::config(format!(
            "n = {} is smaller than the block count {n_blocks}",
            cfg.n
        )));
    }
    let n_used = (cfg.n / n_blocks) * n_blocks;
    let partition = partition_blocks(n_used, n_blocks)?;
    let t = (cfg.n as f64).sqrt();
    let beta = budget.beta().value();
    let noise_floor = 2.0 * t * (-beta * n_blocks as f64).exp();
    let nonprivate_error_scale = mom_bound(variance.sqrt(), cfg.n, cfg.alpha)?;

    struct TrialOut {
        mom_error: f64,
        dp_error: f64,
        sensitivity: f64,
        noise_scale: f64,
    }

    let total = cfg.repetitions * cfg.trials_per_rep;
    let outcomes: Result<Vec<TrialOut>> = install_pool(cfg.threads, || {
        (0..total)
            .into_par_iter()
            .map(|global| -> Result<TrialOut> {
                let mut data_rng = NoiseSource::derived(cfg.base_seed, 2 * global as u64);
                let mut noise_rng = NoiseSource::derived(cfg.base_seed, 2 * global as u64 + 1);
                let x = generate_sample(&cfg.distribution, n_used, &mut data_rng)?;
                let mom = median_of_means(&x, &partition)?;
                let release = dp_mom_prepare(&x, &partition, t, &budget)?;
                let dp = dp_mom_release_with_noise(&release, noise_rng.standard_laplace());
                Ok(TrialOut {
                    mom_error: (mom - mean).abs(),
                    dp_error: (dp - mean).abs(),
                    sensitivity: release.sensitivity,
                    noise_scale: release.noise_scale,
                })
            })
            .collect()
    })?;
    let outcomes = outcomes?;

    let noise_floor_violations = outcomes
        .iter()
        .filter(|o| o.sensitivity < noise_floor - 1e-9)
        .count();
    let mut reps = Vec::with_capacity(cfg.repetitions);
    for rep in 0..cfg.repetitions {
        let chunk = &outcomes[rep * cfg.trials_per_rep..(rep + 1) * cfg.trials_per_rep];
        let mom_q = empirical_quantile(
            &chunk.iter().map(|o| o.mom_error).collect::<Vec<_>>(),
            1.0 - cfg.alpha,
        )
        .expect("non-empty repetition");
        let dp_q = empirical_quantile(
            &chunk.iter().map(|o| o.dp_error).collect::<Vec<_>>(),
            1.0 - cfg.alpha,
        )
        .expect("non-empty repetition");
        reps.push(RepetitionSummary {
            repetition: rep,
            mom_error_quantile: mom_q,
            dp_error_quantile: dp_q,
            ratio: dp_q / mom_q,
        });
    }
    let all_ratios_above_one = reps.iter().all(|r| r.ratio > 1.0);
    let dp_noise_scale_median = empirical_quantile(
        &outcomes.iter().map(|o| o.noise_scale).collect::<Vec<_>>(),
        0.5,
    )
    .expect("non-empty run");

    Ok(NegativeResultReport {
        reps,
        all_ratios_above_one,
        noise_floor_violations,
        trials_total: total,
        n_configured: cfg.n,
        n_used,
        n_blocks,
        t_used: t,
        noise_floor,
        dp_noise_scale_median,
        nonprivate_error_scale,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uniform() -> DistributionSpec {
        DistributionSpec::Uniform { lo: 0.0, hi: 1.0 }
    }

    fn base_cfg(method: Method) -> ExperimentConfig {
        ExperimentConfig {
            distribution: uniform(),
            n: 200,
            trials: 100,
            method,
            alpha: 0.05,
            base_seed: 7,
            epsilon: Some(1.0),
            delta: Some(1e-6),
            t: Some(2.0),
            n_blocks: None,
            r: Some(0.4),
            eta: None,
            threads: Some(2),
        }
    }

    #[test]
    fn emp_median_small_run_covers() {
        let mut cfg = base_cfg(Method::EmpMedian);
        cfg.n = 500;
        let report = run_deviation_experiment(&cfg).unwrap();
        assert_eq!(report.records().len(), 100);
        assert!(report.coverage > 0.9, "coverage {}", report.coverage);
        assert_eq!(report.no_reply_count, 0);
    }

    #[test]
    fn precondition_failures_are_immediate() {
        // too few trials
        let mut cfg = base_cfg(Method::EmpMedian);
        cfg.trials = 10;
        assert!(run_deviation_experiment(&cfg).is_err());
        // missing budget for a private method
        let mut cfg = base_cfg(Method::Smooth);
        cfg.epsilon = None;
        assert!(run_deviation_experiment(&cfg).is_err());
        // mom on a distribution with no variance
        let mut cfg = base_cfg(Method::Mom);
        cfg.distribution = DistributionSpec::Cauchy {
            location: 0.0,
            scale: 1.0,
        };
        assert!(run_deviation_experiment(&cfg).is_err());
        // indivisible block count
        let mut cfg = base_cfg(Method::Mom);
        cfg.n = 205;
        cfg.n_blocks = Some(30);
        assert!(matches!(
            run_deviation_experiment(&cfg),
            Err(DplocError::NotDivisible { .. })
        ));
        // smooth bound precondition T > R + r violated
        let mut cfg = base_cfg(Method::Smooth);
        cfg.t = Some(0.5);
        assert!(run_deviation_experiment(&cfg).is_err());
    }

    #[test]
    fn trial_records_are_deterministic_across_thread_counts() {
        let mut cfg = base_cfg(Method::Ptr);
        cfg.n = 400;
        cfg.eta = Some(0.05);
        cfg.threads = Some(1);
        let a = run_deviation_experiment(&cfg).unwrap();
        cfg.threads = Some(8);
        let b = run_deviation_experiment(&cfg).unwrap();
        for (ra, rb) in a.records().iter().zip(b.records()) {
            assert_eq!(ra.seed, rb.seed);
            assert_eq!(ra.estimate, rb.estimate);
        }
    }

    #[test]
    fn quantile_convention() {
        let vals = [5.0, 1.0, 3.0, 2.0, 4.0];
        assert_eq!(empirical_quantile(&vals, 0.5), Some(3.0));
        assert_eq!(empirical_quantile(&vals, 1.0), Some(5.0));
        assert_eq!(empirical_quantile(&vals, 0.0), Some(1.0));
        assert_eq!(empirical_quantile(&[], 0.5), None);
    }

    #[test]
    fn negative_result_rejects_bad_configs() {
        let cfg = NegativeResultConfig {
            distribution: DistributionSpec::Cauchy {
                location: 0.0,
                scale: 1.0,
            },
            n: 1000,
            epsilon: 1.0,
            delta: 1e-6,
            alpha: 0.05,
            repetitions: 2,
            trials_per_rep: 100,
            base_seed: 1,
            n_blocks: None,
            threads: Some(2),
        };
        assert!(run_negative_result_experiment(&cfg).is_err());
        let degenerate = NegativeResultConfig {
            distribution: DistributionSpec::Pareto {
                shape: 2.1,
                scale: 1.0,
            },
            n: 1000,
            epsilon: 1.0,
            delta: 1e-6,
            alpha: 0.05,
            repetitions: 2,
            trials_per_rep: 100,
            base_seed: 1,
            n_blocks: Some(1),
            threads: Some(2),
        };
        assert!(run_negative_result_experiment(&degenerate).is_err());
    }

    #[test]
    fn negative_result_trims_to_block_multiple() {
        let cfg = NegativeResultConfig {
            distribution: DistributionSpec::Pareto {
                shape: 2.1,
                scale: 1.0,
            },
            n: 400,
            epsilon: 1.0,
            delta: 1e-6,
            alpha: 0.05,
            repetitions: 2,
            trials_per_rep: 100,
            base_seed: 3,
            n_blocks: Some(30),
            threads: Some(2),
        };
        let report = run_negative_result_experiment(&cfg).unwrap();
        assert_eq!(report.n_used, 390);
        assert_eq!(report.noise_floor_violations, 0);
        assert!(report.all_ratios_above_one);
    }

    #[test]
    fn huge_epsilon_restores_truncated_mom_accuracy() {
        // as eps grows the added noise vanishes and dp_mom converges to
        // trunc_mom, whose error here matches mom (T = sqrt(n) clamps nothing)
        let mut cfg = NegativeResultConfig {
            distribution: DistributionSpec::Pareto {
                shape: 2.1,
                scale: 1.0,
            },
            n: 600,
            epsilon: 1e9,
            delta: 1e-6,
            alpha: 0.05,
            repetitions: 1,
            trials_per_rep: 200,
            base_seed: 11,
            n_blocks: Some(30),
            threads: Some(2),
        };
        let loose = run_negative_result_experiment(&cfg).unwrap();
        assert!(
            (loose.reps[0].ratio - 1.0).abs() < 1e-3,
            "ratio {}",
            loose.reps[0].ratio
        );
        cfg.epsilon = 1.0;
        cfg.base_seed = 11;
        let tight = run_negative_result_experiment(&cfg).unwrap();
        assert!(tight.reps[0].ratio > 10.0, "ratio {}", tight.reps[0].ratio);
    }
}
