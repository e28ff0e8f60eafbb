//! The two differentially private median estimators.
//!
//! The smooth-sensitivity estimator truncates the data and releases
//! m_T(x) + (2Z/eps) * S^(beta)(x). The propose-test-release estimator avoids
//! truncation: it privately tests how many records would have to change
//! before the median could move by more than eta, answers "no reply" when the
//! data configuration is too fragile, and otherwise releases the median plus
//! (eta/eps)-scaled Laplace noise.

use serde::{Deserialize, Serialize, Serializer};

use crate::error::{DplocError, Result};
use crate::noise::NoiseSource;
use crate::sample::{left_median_index, Padding, Sample, SortedSample};
use crate::sensitivity::{beta_from_budget, smooth_sensitivity_truncated_median, Beta};

/// An (epsilon, delta) differential-privacy budget.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrivacyBudget {
    epsilon: f64,
    delta: f64,
}

impl PrivacyBudget {
    pub fn new(epsilon: f64, delta: f64) -> Result<Self> {
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
        Ok(Self { epsilon, delta })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Matched smoothing parameter eps / (2 ln(2/delta)).
    pub fn beta(&self) -> Beta {
        beta_from_budget(self.epsilon, self.delta).expect("validated at construction")
    }
}

/// A released value, or the distinguished "no reply" outcome of the
/// propose-test-release mechanism. Never silently coerced to NaN.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ReleaseOutcome {
    Value(f64),
    NoReply,
}

impl ReleaseOutcome {
    pub fn value(&self) -> Option<f64> {
        match self {
            Self::Value(v) => Some(*v),
            Self::NoReply => None,
        }
    }

    pub fn is_no_reply(&self) -> bool {
        matches!(self, Self::NoReply)
    }
}

impl Serialize for ReleaseOutcome {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Self::Value(v) => serializer.serialize_f64(*v),
            Self::NoReply => serializer.serialize_str("NOREPLY"),
        }
    }
}

// ---------------------------------------------------------------------------
// Smooth-sensitivity release
// ---------------------------------------------------------------------------

/// Deterministic part of the smooth-sensitivity release: the truncated median
/// and the noise scale 2 S^(beta)(x) / eps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothRelease {
    pub center: f64,
    pub noise_scale: f64,
    pub sensitivity: f64,
    pub beta: f64,
}

pub fn smooth_prepare(x: &Sample, t: f64, budget: &PrivacyBudget) -> Result<SmoothRelease> {
    let beta = budget.beta();
    let sensitivity = smooth_sensitivity_truncated_median(x, t, beta)?;
    let center = crate::sample::truncated_median(x, t)?;
    Ok(SmoothRelease {
        center,
        noise_scale: 2.0 * sensitivity / budget.epsilon(),
        sensitivity,
        beta: beta.value(),
    })
}

/// Release with an explicit standard-Laplace value; deterministic entry point
/// for tests and replays.
pub fn smooth_release_with_noise(release: &SmoothRelease, z: f64) -> f64 {
    release.center + release.noise_scale * z
}

/// (eps, delta)-differentially private truncated median:
/// m_T(x) + (2Z/eps) * S^(beta)(x) with beta = eps / (2 ln(2/delta)).
pub fn smooth_dp_median(
    x: &Sample,
    t: f64,
    budget: &PrivacyBudget,
    rng: &mut NoiseSource,
) -> Result<f64> {
    let release = smooth_prepare(x, t, budget)?;
    Ok(smooth_release_with_noise(&release, rng.standard_laplace()))
}

// ---------------------------------------------------------------------------
// Propose-test-release
// ---------------------------------------------------------------------------

/// Minimum number of coordinate changes after which the empirical median can
/// move by more than `eta`.
///
/// With k changes the reachable medians are exactly the interval
/// [x_(l-k), x_(l+k)] (send k points to -inf or +inf to attain the ends), so
/// this is the smallest k >= 1 with
/// max(x_(l+k) - x_(l), x_(l) - x_(l-k)) > eta under plain-infinity padding.
/// The criterion is nondecreasing in k, so a binary search finds it in
/// O(log n) once the sample is sorted. Always finite: k = min(l, n+1-l)
/// reaches a sentinel.
pub fn a_hat(s: &SortedSample, eta: f64) -> Result<usize> {
    if !(eta > 0.0) || !eta.is_finite() {
        return Err(DplocError::invalid(format!(
            "eta must be positive and finite, got {eta}"
        )));
    }
    let n = s.len();
    let ell = left_median_index(n)?;
    let center = s.order_stat(ell as i64, Padding::PlainInfinity);
    let exceeds = |k: usize| -> bool {
        let up = s.order_stat((ell + k) as i64, Padding::PlainInfinity) - center;
        let down = center - s.order_stat(ell as i64 - k as i64, Padding::PlainInfinity);
        up.max(down) > eta
    };
    let mut lo = 1usize;
    let mut hi = ell.min(n + 1 - ell);
    debug_assert!(exceeds(hi));
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if exceeds(mid) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(lo)
}

/// The span-(k+1) variant of the breakdown statistic that appears in the
/// complexity analysis: min k >= 1 with
/// max_{t=0..k+1} (x_(l+t) - x_(l+t-k-1)) > eta.
///
/// Shipped for cross-checking only. Every window in the inner maximum
/// straddles the median position, so this value never exceeds [`a_hat`]; on
/// some inputs it is strictly smaller.
pub fn a_hat_paper_formula(s: &SortedSample, eta: f64) -> Result<usize> {
    if !(eta > 0.0) || !eta.is_finite() {
        return Err(DplocError::invalid(format!(
            "eta must be positive and finite, got {eta}"
        )));
    }
    let n = s.len();
    let ell = left_median_index(n)? as i64;
    let at = |k: i64| s.order_stat(k, Padding::PlainInfinity);
    for k in 1..=(n as i64) {
        let mut inner = f64::NEG_INFINITY;
        for t in 0..=(k + 1) {
            inner = inner.max(at(ell + t) - at(ell + t - k - 1));
        }
        if inner > eta {
            return Ok(k as usize);
        }
    }
    // unreachable: at k = l the t = 0 window hits the -inf sentinel
    unreachable!("span criterion must trigger by k = l");
}

/// Deterministic part of the propose-test-release estimator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PtrRelease {
    pub a_hat: usize,
    pub median: f64,
    /// No-reply threshold 1 + ln(2/delta)/eps on the noised statistic.
    pub threshold: f64,
    /// Laplace scale eta/eps on the released median.
    pub noise_scale: f64,
    pub epsilon: f64,
}

pub fn ptr_prepare(x: &Sample, eta: f64, budget: &PrivacyBudget) -> Result<PtrRelease> {
    let sorted = SortedSample::from_sample(x);
    let a = a_hat(&sorted, eta)?;
    let median = sorted.empirical_median()?;
    let eps = budget.epsilon();
    Ok(PtrRelease {
        a_hat: a,
        median,
        threshold: 1.0 + (2.0 / budget.delta()).ln() / eps,
        noise_scale: eta / eps,
        epsilon: eps,
    })
}

/// Apply the test-then-release rule with explicit standard-Laplace draws.
/// Ties at the threshold answer "no reply" (the comparison is `<=`), a
/// measure-zero event for continuous noise.
pub fn ptr_release_with_noise(release: &PtrRelease, z1: f64, z2: f64) -> ReleaseOutcome {
    let a_tilde = release.a_hat as f64 + z1 / release.epsilon;
    if a_tilde <= release.threshold {
        ReleaseOutcome::NoReply
    } else {
        ReleaseOutcome::Value(release.median + release.noise_scale * z2)
    }
}

/// Propose-test-release median. Draws Z1, Z2 independent standard Laplace,
/// answers "no reply" when a_hat + Z1/eps <= 1 + ln(2/delta)/eps, and
/// otherwise releases m(x) + (eta/eps) Z2. Consumes a total budget of
/// (2 eps, delta). Cost is O(n log n): sort plus a binary-searched a_hat.
pub fn ptr_median(
    x: &Sample,
    eta: f64,
    budget: &PrivacyBudget,
    rng: &mut NoiseSource,
) -> Result<ReleaseOutcome> {
    let release = ptr_prepare(x, eta, budget)?;
    let z1 = rng.standard_laplace();
    let z2 = rng.standard_laplace();
    Ok(ptr_release_with_noise(&release, z1, z2))
}

// ---------------------------------------------------------------------------
// eta calibration
// ---------------------------------------------------------------------------

/// Calibrated propose-test-release threshold together with the inputs that
/// produced it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PtrCalibration {
    pub eta: f64,
    pub c_const: f64,
    pub n: usize,
    pub epsilon: f64,
    pub delta: f64,
    pub alpha: f64,
    /// No-reply probability component; alpha/4 for the standard calibration.
    pub tau1: f64,
    pub density_floor: f64,
    pub radius: f64,
}

/// eta = C ln(n)/(eps n) * (ln(2/delta) + ln(8/alpha) + eps) with
/// C = L^-1 (1 + ln(4/alpha)/ln(L r n / 2)).
///
/// Valid for alpha in [8 e^{-L^2 r^2 n / 2}, 1]; the lower end is where the
/// density-floor assumption stops controlling the relevant order statistics.
pub fn calibrate_eta(
    n: usize,
    budget: &PrivacyBudget,
    alpha: f64,
    density_floor: f64,
    radius: f64,
) -> Result<PtrCalibration> {
    let alpha_min = 8.0 * (-density_floor * density_floor * radius * radius * n as f64 / 2.0).exp();
    if !(alpha >= alpha_min && alpha <= 1.0) {
        return Err(DplocError::out_of_range(format!(
            "alpha = {alpha} outside the admissible range [8 e^(-L^2 r^2 n / 2), 1] = \
             [{alpha_min:.3e}, 1] for L = {density_floor}, r = {radius}, n = {n}"
        )));
    }
    calibrate_eta_inner(n, budget, alpha, alpha / 4.0, density_floor, radius)
}

/// Generalized calibration with the no-reply component tau1 supplied
/// directly; the standard calibration is the specialization tau1 = alpha/4.
/// Valid for tau1 in (0, 1] and alpha in (2 e^{-L^2 r^2 n / 2}, 1].
pub fn calibrate_eta_with_tau1(
    n: usize,
    budget: &PrivacyBudget,
    alpha: f64,
    tau1: f64,
    density_floor: f64,
    radius: f64,
) -> Result<PtrCalibration> {
    if !(tau1 > 0.0 && tau1 <= 1.0) {
        return Err(DplocError::out_of_range(format!(
            "tau1 = {tau1} outside (0, 1]"
        )));
    }
    let alpha_min = 2.0 * (-density_floor * density_floor * radius * radius * n as f64 / 2.0).exp();
    if !(alpha > alpha_min && alpha <= 1.0) {
        return Err(DplocError::out_of_range(format!(
            "alpha = {alpha} outside the admissible range (2 e^(-L^2 r^2 n / 2), 1] = \
             ({alpha_min:.3e}, 1] for L = {density_floor}, r = {radius}, n = {n}"
        )));
    }
    calibrate_eta_inner(n, budget, alpha, tau1, density_floor, radius)
}

fn calibrate_eta_inner(
    n: usize,
    budget: &PrivacyBudget,
    alpha: f64,
    tau1: f64,
    density_floor: f64,
    radius: f64,
) -> Result<PtrCalibration> {
    if !(density_floor > 0.0) || !(radius > 0.0) {
        return Err(DplocError::invalid(format!(
            "density floor L = {density_floor} and radius r = {radius} must be positive"
        )));
    }
    let half_lrn = density_floor * radius * n as f64 / 2.0;
    if half_lrn <= 1.0 {
        return Err(DplocError::invalid(format!(
            "L r n / 2 = {half_lrn} must exceed 1 so its logarithm is positive"
        )));
    }
    let eps = budget.epsilon();
    let c_const = (1.0 + (4.0 / alpha).ln() / half_lrn.ln()) / density_floor;
    let eta = c_const * (n as f64).ln() / (eps * n as f64)
        * ((2.0 / budget.delta()).ln() + (2.0 / tau1).ln() + eps);
    Ok(PtrCalibration {
        eta,
        c_const,
        n,
        epsilon: eps,
        delta: budget.delta(),
        alpha,
        tau1,
        density_floor,
        radius,
    })
}
