//! Data-generating distributions with known population constants.
//!
//! Each family knows its analytic median, mean, and variance (where finite)
//! so experiments can measure true estimation error, and its closed-form
//! density so regularity profiles (density floor on a median neighborhood)
//! come from the distribution itself rather than from estimation.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal, StudentT as StudentTSampler};
use serde::{Deserialize, Serialize};
use statrs::distribution::Continuous;

use crate::bounds::RegularityProfile;
use crate::error::{DplocError, Result};
use crate::noise::NoiseSource;
use crate::sample::Sample;

/// A sampling family with explicit parameters. Draws are inverse-CDF where a
/// closed form exists (uniform, cauchy, pareto; lognormal through a gaussian
/// draw) and standard transforms otherwise, so a fixed seed reproduces the
/// sample bit-for-bit on any thread count.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum DistributionSpec {
    Uniform { lo: f64, hi: f64 },
    Gaussian { mean: f64, sd: f64 },
    StudentT { dof: f64 },
    Cauchy { location: f64, scale: f64 },
    Pareto { shape: f64, scale: f64 },
    Lognormal { mu: f64, sigma: f64 },
}

impl DistributionSpec {
    pub fn validate(&self) -> Result<()> {
        let ok = match self {
            Self::Uniform { lo, hi } => lo.is_finite() && hi.is_finite() && lo < hi,
            Self::Gaussian { mean, sd } => mean.is_finite() && *sd > 0.0 && sd.is_finite(),
            Self::StudentT { dof } => *dof > 0.0 && dof.is_finite(),
            Self::Cauchy { location, scale } => {
                location.is_finite() && *scale > 0.0 && scale.is_finite()
            }
            Self::Pareto { shape, scale } => {
                *shape > 0.0 && shape.is_finite() && *scale > 0.0 && scale.is_finite()
            }
            Self::Lognormal { mu, sigma } => mu.is_finite() && *sigma > 0.0 && sigma.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(DplocError::invalid(format!(
                "invalid distribution parameters: {self:?}"
            )))
        }
    }

    /// Analytic population median.
    pub fn population_median(&self) -> f64 {
        match self {
            Self::Uniform { lo, hi } => 0.5 * (lo + hi),
            Self::Gaussian { mean, .. } => *mean,
            Self::StudentT { .. } => 0.0,
            Self::Cauchy { location, .. } => *location,
            Self::Pareto { shape, scale } => scale * 2f64.powf(1.0 / shape),
            Self::Lognormal { mu, .. } => mu.exp(),
        }
    }

    /// Analytic population mean, when it exists.
    pub fn population_mean(&self) -> Option<f64> {
        match self {
            Self::Uniform { lo, hi } => Some(0.5 * (lo + hi)),
            Self::Gaussian { mean, .. } => Some(*mean),
            Self::StudentT { dof } => (*dof > 1.0).then_some(0.0),
            Self::Cauchy { .. } => None,
            Self::Pareto { shape, scale } => {
                (*shape > 1.0).then(|| shape * scale / (shape - 1.0))
            }
            Self::Lognormal { mu, sigma } => Some((mu + sigma * sigma / 2.0).exp()),
        }
    }

    /// Analytic population variance, when finite.
    pub fn variance(&self) -> Option<f64> {
        match self {
            Self::Uniform { lo, hi } => Some((hi - lo) * (hi - lo) / 12.0),
            Self::Gaussian { sd, .. } => Some(sd * sd),
            Self::StudentT { dof } => (*dof > 2.0).then(|| dof / (dof - 2.0)),
            Self::Cauchy { .. } => None,
            Self::Pareto { shape, scale } => (*shape > 2.0).then(|| {
                shape * scale * scale / ((shape - 1.0) * (shape - 1.0) * (shape - 2.0))
            }),
            Self::Lognormal { mu, sigma } => {
                let s2 = sigma * sigma;
                Some((s2.exp() - 1.0) * (2.0 * mu + s2).exp())
            }
        }
    }

    /// Density at `u`.
    pub fn pdf(&self, u: f64) -> f64 {
        match self {
            Self::Uniform { lo, hi } => {
                if u >= *lo && u <= *hi {
                    1.0 / (hi - lo)
                } else {
                    0.0
                }
            }
            Self::Gaussian { mean, sd } => statrs::distribution::Normal::new(*mean, *sd)
                .expect("validated")
                .pdf(u),
            Self::StudentT { dof } => statrs::distribution::StudentsT::new(0.0, 1.0, *dof)
                .expect("validated")
                .pdf(u),
            Self::Cauchy { location, scale } => statrs::distribution::Cauchy::new(*location, *scale)
                .expect("validated")
                .pdf(u),
            Self::Pareto { shape, scale } => statrs::distribution::Pareto::new(*scale, *shape)
                .expect("validated")
                .pdf(u),
            Self::Lognormal { mu, sigma } => statrs::distribution::LogNormal::new(*mu, *sigma)
                .expect("validated")
                .pdf(u),
        }
    }

    fn draw(&self, rng: &mut NoiseSource) -> f64 {
        match self {
            Self::Uniform { lo, hi } => lo + (hi - lo) * rng.uniform_open01(),
            Self::Gaussian { mean, sd } => {
                let z: f64 = StandardNormal.sample(rng);
                mean + sd * z
            }
            Self::StudentT { dof } => StudentTSampler::new(*dof).expect("validated").sample(rng),
            Self::Cauchy { location, scale } => {
                location + scale * (std::f64::consts::PI * (rng.uniform_open01() - 0.5)).tan()
            }
            Self::Pareto { shape, scale } => scale * rng.uniform_open01().powf(-1.0 / shape),
            Self::Lognormal { mu, sigma } => {
                let z: f64 = StandardNormal.sample(rng);
                (mu + sigma * z).exp()
            }
        }
    }
}

/// Draw an i.i.d. sample of size `n`. Deterministic per seed.
pub fn generate_sample(spec: &DistributionSpec, n: usize, rng: &mut NoiseSource) -> Result<Sample> {
    spec.validate()?;
    if n < 2 {
        return Err(DplocError::TooFewPoints { needed: 2, got: n });
    }
    let mut values = Vec::with_capacity(n);
    for _ in 0..n {
        let mut v = spec.draw(rng);
        // astronomically rare tail draws can overflow to infinity (e.g. a
        // cauchy at u ~ 2^-53); redraw rather than poison the sample
        while !v.is_finite() {
            v = spec.draw(rng);
        }
        values.push(v);
    }
    Sample::new(values)
}

/// Regularity constants of a family around its median: the density floor on
/// [m - r, m + r] (closed-form; the minimum of a unimodal density over an
/// interval sits at an endpoint) and R = |m|.
pub fn regularity_profile(spec: &DistributionSpec, radius: f64) -> Result<RegularityProfile> {
    spec.validate()?;
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(DplocError::invalid(format!(
            "radius r must be positive, got {radius}"
        )));
    }
    let median = spec.population_median();
    let support_ok = match spec {
        DistributionSpec::Uniform { lo, hi } => median - radius >= *lo && median + radius <= *hi,
        DistributionSpec::Pareto { scale, .. } => median - radius >= *scale,
        DistributionSpec::Lognormal { .. } => median - radius > 0.0,
        _ => true,
    };
    if !support_ok {
        return Err(DplocError::invalid(format!(
            "density is zero somewhere on [m - r, m + r] = [{}, {}] for {spec:?}",
            median - radius,
            median + radius
        )));
    }
    let density_floor = spec.pdf(median - radius).min(spec.pdf(median + radius));
    if !(density_floor > 0.0) {
        return Err(DplocError::invalid(format!(
            "density floor vanishes on [m - r, m + r] for {spec:?}"
        )));
    }
    RegularityProfile::new(median, density_floor, radius, median.abs())
}
