//! Closed-form deviation bounds used as coverage targets by the harness.
//!
//! All logarithms are natural. Out-of-range confidence levels are hard
//! errors, never clamped: each bound is only stated on an alpha range tied to
//! how far the density floor reaches around the median, and silently flooring
//! alpha would fake a guarantee the assumptions cannot deliver.

use serde::Serialize;

use crate::error::{DplocError, Result};
use crate::median_dp::PrivacyBudget;

/// Distributional constants around the population median: a density lower
/// bound L on [m-r, m+r] and a magnitude bound |m| <= R.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegularityProfile {
    pub median: f64,
    pub density_floor: f64,
    pub radius: f64,
    pub median_bound: f64,
}

impl RegularityProfile {
    pub fn new(median: f64, density_floor: f64, radius: f64, median_bound: f64) -> Result<Self> {
        if !(density_floor > 0.0) || !density_floor.is_finite() {
            return Err(DplocError::invalid(format!(
                "density floor L must be positive, got {density_floor}"
            )));
        }
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(DplocError::invalid(format!(
                "radius r must be positive, got {radius}"
            )));
        }
        if median.abs() > median_bound {
            return Err(DplocError::invalid(format!(
                "|median| = {} exceeds the stated bound R = {median_bound}",
                median.abs()
            )));
        }
        // the density floor holds on an interval of mass <= 1
        if 2.0 * density_floor * radius > 1.0 + 1e-12 {
            return Err(DplocError::invalid(format!(
                "2 L r = {} exceeds 1; no density can be that large on [m-r, m+r]",
                2.0 * density_floor * radius
            )));
        }
        Ok(Self {
            median,
            density_floor,
            radius,
            median_bound,
        })
    }
}

/// A named additive term of a deviation bound.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundTerm {
    pub name: &'static str,
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// A deviation bound together with its term decomposition; the total is the
/// exact sum of the terms.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundValue {
    pub total: f64,
    pub terms: Vec<BoundTerm>,
}

impl BoundValue {
    fn from_terms(terms: Vec<BoundTerm>) -> Self {
        let total = terms.iter().map(|t| t.value).sum();
        Self { total, terms }
    }
}

fn check_alpha_open(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(DplocError::out_of_range(format!(
            "alpha must lie in (0, 1), got {alpha}"
        )));
    }
    Ok(())
}

/// sqrt(2 sigma^2 ln(2/alpha) / n): the deviation of the empirical mean of n
/// sub-Gaussian observations at confidence 1 - alpha.
pub fn subgaussian_mean_bound(sigma: f64, n: usize, alpha: f64) -> Result<f64> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(DplocError::invalid(format!(
            "sigma must be positive, got {sigma}"
        )));
    }
    if n < 1 {
        return Err(DplocError::invalid("n must be at least 1"));
    }
    check_alpha_open(alpha)?;
    Ok((2.0 * sigma * sigma * (2.0 / alpha).ln() / n as f64).sqrt())
}

/// sqrt(2 ln(2/alpha) / (n L^2)): deviation of the empirical (truncated)
/// median under a density floor L on [m-r, m+r]. Stated only for
/// alpha >= 2 e^{-n L^2 r^2 / 2}; below that the deviation would have to
/// leave the r-neighborhood the density floor controls.
pub fn empirical_median_bound(n: usize, density_floor: f64, radius: f64, alpha: f64) -> Result<f64> {
    if !(density_floor > 0.0) || !(radius > 0.0) {
        return Err(DplocError::invalid(format!(
            "density floor L = {density_floor} and radius r = {radius} must be positive"
        )));
    }
    if n < 1 {
        return Err(DplocError::invalid("n must be at least 1"));
    }
    let alpha_min =
        2.0 * (-(n as f64) * density_floor * density_floor * radius * radius / 2.0).exp();
    if !(alpha >= alpha_min && alpha <= 1.0) {
        return Err(DplocError::out_of_range(format!(
            "alpha = {alpha} outside [2 e^(-n L^2 r^2 / 2), 1] = [{alpha_min:.3e}, 1]; \
             the density floor only controls deviations within radius r = {radius}"
        )));
    }
    Ok((2.0 * (2.0 / alpha).ln() / (n as f64 * density_floor * density_floor)).sqrt())
}

/// Three-term deviation bound for the smooth-sensitivity truncated median:
/// a sub-Gaussian term, a privacy term, and an exponentially small
/// truncation term. Requires T > R + r and alpha >= 8 e^{-n L^2 r^2 / 4}.
pub fn smooth_median_bound(
    n: usize,
    profile: &RegularityProfile,
    t: f64,
    budget: &PrivacyBudget,
    alpha: f64,
) -> Result<BoundValue> {
    let l = profile.density_floor;
    let r = profile.radius;
    if t <= profile.median_bound + r {
        return Err(DplocError::invalid(format!(
            "truncation level T = {t} must exceed R + r = {}",
            profile.median_bound + r
        )));
    }
    let alpha_min = 8.0 * (-(n as f64) * l * l * r * r / 4.0).exp();
    if !(alpha >= alpha_min && alpha <= 1.0) {
        return Err(DplocError::out_of_range(format!(
            "alpha = {alpha} outside [8 e^(-n L^2 r^2 / 4), 1] = [{alpha_min:.3e}, 1] \
             for L = {l}, r = {r}, n = {n}"
        )));
    }
    let nf = n as f64;
    let eps = budget.epsilon();
    let ln8a = (8.0 / alpha).ln();
    let ln4a = (4.0 / alpha).ln();
    let ln2d = (2.0 / budget.delta()).ln();
    let k0 = (l * r * nf / 2.0).floor();
    let subgaussian = (2.0 * ln8a / (nf * l * l)).sqrt();
    let privacy =
        4.0 * ln8a * ln2d / (std::f64::consts::E * l * eps * eps * nf) * (k0.ln() + ln4a);
    let truncation = 4.0 * t * ln4a / eps * (-eps * l * r * nf / (4.0 * ln2d)).exp();
    Ok(BoundValue::from_terms(vec![
        BoundTerm {
            name: "subgaussian",
            value: subgaussian,
            note: None,
        },
        BoundTerm {
            name: "privacy",
            value: privacy,
            note: Some(format!("uses ln(floor(L r n / 2)) with floor = {k0}")),
        },
        BoundTerm {
            name: "truncation",
            value: truncation,
            note: None,
        },
    ]))
}

/// Two-term deviation bound for the propose-test-release median with the
/// calibrated eta: the same sub-Gaussian term plus a subexponential privacy
/// term (its ln(8/alpha) sits outside any square root).
pub fn ptr_median_bound(
    n: usize,
    profile: &RegularityProfile,
    budget: &PrivacyBudget,
    alpha: f64,
) -> Result<BoundValue> {
    let l = profile.density_floor;
    let r = profile.radius;
    let nf = n as f64;
    let alpha_min = 8.0 * (-l * l * r * r * nf / 2.0).exp();
    if !(alpha >= alpha_min && alpha <= 1.0) {
        return Err(DplocError::out_of_range(format!(
            "alpha = {alpha} outside [8 e^(-L^2 r^2 n / 2), 1] = [{alpha_min:.3e}, 1] \
             for L = {l}, r = {r}, n = {n}"
        )));
    }
    let half_lrn = l * r * nf / 2.0;
    if half_lrn <= 1.0 {
        return Err(DplocError::invalid(format!(
            "L r n / 2 = {half_lrn} must exceed 1 so its logarithm is positive"
        )));
    }
    let eps = budget.epsilon();
    let ln8a = (8.0 / alpha).ln();
    let c_const = (1.0 + (4.0 / alpha).ln() / half_lrn.ln()) / l;
    let subgaussian = (2.0 * ln8a / (nf * l * l)).sqrt();
    let privacy =
        c_const * nf.ln() * ((2.0 / budget.delta()).ln() + ln8a + eps) * ln8a / (eps * eps * nf);
    Ok(BoundValue::from_terms(vec![
        BoundTerm {
            name: "subgaussian",
            value: subgaussian,
            note: None,
        },
        BoundTerm {
            name: "privacy",
            value: privacy,
            note: Some(format!("C = {c_const}")),
        },
    ]))
}

/// 2 sigma sqrt(ln(2/alpha) / n): deviation of the median of means with
/// ceil(8 ln(2/alpha)) blocks, needing only two finite moments.
pub fn mom_bound(sigma: f64, n: usize, alpha: f64) -> Result<f64> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(DplocError::invalid(format!(
            "sigma must be positive, got {sigma}"
        )));
    }
    check_alpha_open(alpha)?;
    let needed = crate::mean_estimators::blocks_for_alpha(alpha)?;
    if n < needed {
        return Err(DplocError::out_of_range(format!(
            "n = {n} below the {needed} blocks required at alpha = {alpha}"
        )));
    }
    Ok(2.0 * sigma * ((2.0 / alpha).ln() / n as f64).sqrt())
}
