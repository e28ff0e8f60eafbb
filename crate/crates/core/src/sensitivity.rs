//! Local, global, and beta-smooth sensitivity of the truncated median and the
//! truncated median-of-means, plus a brute-force oracle for verification.
//!
//! The central quantity is the beta-smooth sensitivity
//! S_h^(beta)(x) = sup_{x'} e^{-beta d_H(x, x')} LS_h(x'), the smooth upper
//! envelope of local sensitivity that makes Laplace noise calibration valid
//! for statistics whose local sensitivity alone is too small to protect
//! neighboring datasets.

use crate::error::{DplocError, Result};
use crate::sample::{left_median_index, Padding, Sample, SortedSample};

/// Smoothing parameter beta > 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Beta(f64);

impl Beta {
    pub fn new(beta: f64) -> Result<Self> {
        if !(beta > 0.0) || !beta.is_finite() {
            return Err(DplocError::invalid(format!(
                "smoothing parameter beta must be positive and finite, got {beta}"
            )));
        }
        Ok(Self(beta))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Which log appears in the denominator of beta = eps / (2 log(..)).
/// `TwoOverDelta` is the default used by the smooth-sensitivity median
/// mechanism; `OneOverDelta` is the looser alternative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BetaConvention {
    #[default]
    TwoOverDelta,
    OneOverDelta,
}

/// beta = eps / (2 ln(2/delta)), the smoothing parameter matched to an
/// (eps, delta) budget.
pub fn beta_from_budget(epsilon: f64, delta: f64) -> Result<Beta> {
    beta_from_budget_with(epsilon, delta, BetaConvention::TwoOverDelta)
}

pub fn beta_from_budget_with(epsilon: f64, delta: f64, convention: BetaConvention) -> Result<Beta> {
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(DplocError::invalid(format!(
            "epsilon must be positive and finite, got {epsilon}"
        )));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(DplocError::invalid(format!(
            "delta must lie in (0, 1), got {delta}"
        )));
    }
    let denom = match convention {
        BetaConvention::TwoOverDelta => (2.0 / delta).ln(),
        BetaConvention::OneOverDelta => (1.0 / delta).ln(),
    };
    Beta::new(epsilon / (2.0 * denom))
}

/// Local sensitivity of the (untruncated) empirical median:
/// max(x_(l+1) - x_(l), x_(l) - x_(l-1)) under plain-infinity padding.
/// Returns +inf when the median sits at the boundary of the sample, which is
/// exactly why this quantity cannot be used for noise calibration directly.
pub fn local_sensitivity_median(s: &SortedSample) -> Result<f64> {
    let ell = left_median_index(s.len())? as i64;
    let at = |k: i64| s.order_stat(k, Padding::PlainInfinity);
    Ok((at(ell + 1) - at(ell)).max(at(ell) - at(ell - 1)))
}

/// Local sensitivity of the truncated empirical mean:
/// n^-1 max(T - f_T(x_(1)), f_T(x_(n)) + T). Always in [T/n, 2T/n].
pub fn local_sensitivity_truncated_mean(s: &SortedSample, t: f64) -> Result<f64> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(DplocError::invalid(format!(
            "truncation level T must be positive and finite, got {t}"
        )));
    }
    if s.is_empty() {
        return Err(DplocError::TooFewPoints { needed: 1, got: 0 });
    }
    let n = s.len() as f64;
    let lo = s.as_slice()[0].clamp(-t, t);
    let hi = s.as_slice()[s.len() - 1].clamp(-t, t);
    Ok((t - lo).max(hi + t) / n)
}

/// Beta-smooth sensitivity of the truncated empirical median, evaluated by
/// the closed-form order-statistic scan
///
///   S(x) = max_{k>=0} e^{-beta k} max_{t=0..k+1} (y_(l+t) - y_(l+t-k-1)),
///
/// where y is the sorted truncated sample and out-of-range order statistics
/// clamp to -T / +T. Only k = 0..n is scanned: the inner maximum saturates at
/// exactly 2T from k = n on (both sentinels are reached), so every k > n term
/// is strictly dominated by the k = n term.
pub fn smooth_sensitivity_truncated_median(x: &Sample, t: f64, beta: Beta) -> Result<f64> {
    let y = SortedSample::from_sample(x).truncated(t)?;
    let ell = left_median_index(y.len())?;
    Ok(smooth_scan(y.as_slice(), ell, t, beta.value(), y.len(), true))
}

/// Same scan with an explicit k range and no early exit; used to document
/// that truncating the scan at k = n loses nothing.
pub(crate) fn smooth_sensitivity_scan_to(x: &Sample, t: f64, beta: Beta, k_max: usize) -> Result<f64> {
    let y = SortedSample::from_sample(x).truncated(t)?;
    let ell = left_median_index(y.len())?;
    Ok(smooth_scan(y.as_slice(), ell, t, beta.value(), k_max, false))
}

/// Beta-smooth sensitivity of the truncated median-of-means, evaluated on the
/// sorted raw block means:
///
///   S = max_{0<=j<=N} e^{-beta j} max_{t=0..j+1} (f_T(m_(l+t)) - f_T(m_(l+t-j-1)))
///
/// with out-of-range block means reading as +/-inf, which clamp to +/-T. The
/// j = N term always pairs +T against -T, so S >= 2T e^{-beta N} on every
/// input; that deterministic noise floor is what makes the naively privatized
/// median-of-means inaccurate. For a single block the median index clamps to
/// 1 and the scan degenerates to the noised truncated mean case.
pub fn smooth_sensitivity_mom(block_means: &SortedSample, t: f64, beta: Beta) -> Result<f64> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(DplocError::invalid(format!(
            "truncation level T must be positive and finite, got {t}"
        )));
    }
    let n_blocks = block_means.len();
    if n_blocks == 0 {
        return Err(DplocError::TooFewPoints { needed: 1, got: 0 });
    }
    let ell = (n_blocks / 2).max(1);
    let truncated = block_means.truncated(t)?;
    Ok(smooth_scan(
        truncated.as_slice(),
        ell,
        t,
        beta.value(),
        n_blocks,
        false,
    ))
}

/// Shared inner scan over truncated, sorted values with +/-T padding.
/// `values` must already be clamped to [-T, T] and sorted; `ell` is 1-indexed.
///
/// When `early_exit` is set, the scan stops once e^{-beta k} * 2T can no
/// longer beat the running maximum; the inner maximum never exceeds 2T, so
/// the cutoff is exact.
fn smooth_scan(values: &[f64], ell: usize, t: f64, beta: f64, k_max: usize, early_exit: bool) -> f64 {
    let n = values.len() as i64;
    let ell = ell as i64;
    let at = |k: i64| -> f64 {
        if k < 1 {
            -t
        } else if k > n {
            t
        } else {
            values[(k - 1) as usize]
        }
    };
    let mut best = 0.0_f64;
    for k in 0..=(k_max as i64) {
        let weight = (-beta * k as f64).exp();
        if early_exit && weight * 2.0 * t <= best {
            break;
        }
        let mut inner = f64::NEG_INFINITY;
        for offset in 0..=(k + 1) {
            inner = inner.max(at(ell + offset) - at(ell + offset - k - 1));
        }
        best = best.max(weight * inner);
    }
    best
}

/// Brute-force beta-smooth sensitivity of the truncated median, computed from
/// the definition: enumerate every dataset reachable by replacing up to n
/// coordinates, take e^{-beta k} times its brute-forced local sensitivity,
/// and maximize. Verification oracle only; refuses n > 8.
///
/// Replacement values are drawn from {-T, +T} plus the truncated data values:
/// the truncated median of any modified sample is one of those values, and
/// moving a replacement to the nearest candidate never decreases the local
/// sensitivity, so the restricted sup equals the full sup over R^n.
pub fn brute_force_smooth_sensitivity(x: &Sample, t: f64, beta: Beta) -> Result<f64> {
    let n = x.len();
    if n > 8 {
        return Err(DplocError::OracleLimit(format!(
            "brute-force smooth sensitivity is limited to n <= 8, got {n}"
        )));
    }
    if !(t > 0.0) || !t.is_finite() {
        return Err(DplocError::invalid(format!(
            "truncation level T must be positive and finite, got {t}"
        )));
    }
    let base = SortedSample::from_sample(x).truncated(t)?;
    let base = base.as_slice().to_vec();
    let ell = left_median_index(n)?;

    let mut candidates: Vec<f64> = base.clone();
    candidates.push(-t);
    candidates.push(t);
    candidates.sort_unstable_by(f64::total_cmp);
    candidates.dedup();

    let beta = beta.value();
    let mut best = 0.0_f64;
    let mut drop_idx: Vec<usize> = Vec::with_capacity(n);
    let mut repl: Vec<f64> = Vec::with_capacity(n);
    for k in 0..=n {
        let weight = (-beta * k as f64).exp();
        // weight * 2T bounds every remaining term, same cutoff as the scan
        if weight * 2.0 * t <= best {
            break;
        }
        let mut local_best = 0.0_f64;
        enumerate_drops(&mut drop_idx, 0, k, n, &mut |drops| {
            enumerate_replacements(&mut repl, k, &candidates, &mut |replacement| {
                let modified = replace_multiset(&base, drops, replacement);
                local_best = local_best.max(brute_force_local_sensitivity(
                    &modified,
                    ell,
                    &candidates,
                ));
            });
        });
        best = best.max(weight * local_best);
    }
    Ok(best)
}

/// Brute-force local sensitivity of the truncated median at a sorted,
/// truncated dataset: maximize |median after one replacement - median| over
/// every position and every candidate replacement value.
fn brute_force_local_sensitivity(sorted: &[f64], ell: usize, candidates: &[f64]) -> f64 {
    let center = sorted[ell - 1];
    let mut worst = 0.0_f64;
    for j in 0..sorted.len() {
        for &c in candidates {
            let m = median_after_replacement(sorted, j, c, ell);
            worst = worst.max((m - center).abs());
        }
    }
    worst
}

/// ell-th smallest value of the multiset `sorted` with the element at `j`
/// replaced by `c`, without materializing the modified array.
fn median_after_replacement(sorted: &[f64], j: usize, c: f64, ell: usize) -> f64 {
    // rank of c among the n-1 kept elements
    let mut less = sorted.partition_point(|&v| v < c);
    if sorted[j] < c {
        less -= 1;
    }
    let target = ell - 1; // 0-based position in the modified multiset
    let kept = |i: usize| -> f64 {
        if i < j {
            sorted[i]
        } else {
            sorted[i + 1]
        }
    };
    match target.cmp(&less) {
        std::cmp::Ordering::Less => kept(target),
        std::cmp::Ordering::Equal => c,
        std::cmp::Ordering::Greater => kept(target - 1),
    }
}

/// Sorted multiset `base` minus the elements at `drops` (sorted indices)
/// plus the nondecreasing `replacement` values.
fn replace_multiset(base: &[f64], drops: &[usize], replacement: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(base.len());
    let mut drop_iter = drops.iter().peekable();
    let mut kept_then_merged: Vec<f64> = Vec::with_capacity(base.len() - drops.len());
    for (i, &v) in base.iter().enumerate() {
        if drop_iter.peek() == Some(&&i) {
            drop_iter.next();
        } else {
            kept_then_merged.push(v);
        }
    }
    // merge two sorted runs
    let (mut a, mut b) = (0, 0);
    while a < kept_then_merged.len() && b < replacement.len() {
        if kept_then_merged[a] <= replacement[b] {
            out.push(kept_then_merged[a]);
            a += 1;
        } else {
            out.push(replacement[b]);
            b += 1;
        }
    }
    out.extend_from_slice(&kept_then_merged[a..]);
    out.extend_from_slice(&replacement[b..]);
    out
}

/// All index combinations of size `k` from `0..n`, in lexicographic order.
fn enumerate_drops(buf: &mut Vec<usize>, start: usize, k: usize, n: usize, f: &mut impl FnMut(&[usize])) {
    if k == 0 {
        f(buf);
        return;
    }
    for i in start..=(n - k) {
        buf.push(i);
        enumerate_drops(buf, i + 1, k - 1, n, f);
        buf.pop();
    }
}

/// All nondecreasing value tuples of length `k` from `candidates`
/// (combinations with repetition; order inside a replacement is irrelevant
/// because the median only sees the multiset).
fn enumerate_replacements(buf: &mut Vec<f64>, k: usize, candidates: &[f64], f: &mut impl FnMut(&[f64])) {
    fn rec(buf: &mut Vec<f64>, remaining: usize, from: usize, candidates: &[f64], f: &mut impl FnMut(&[f64])) {
        if remaining == 0 {
            f(buf);
            return;
        }
        for i in from..candidates.len() {
            buf.push(candidates[i]);
            rec(buf, remaining - 1, i, candidates, f);
            buf.pop();
        }
    }
    rec(buf, k, 0, candidates, f);
}
