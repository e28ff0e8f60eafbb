//! Samples, order statistics with sentinel padding, truncation, and the left
//! empirical median.
//!
//! Order statistics are 1-indexed throughout; storage is 0-indexed internally.
//! Out-of-range indices resolve to sentinels chosen by a [`Padding`] mode: the
//! plain extended-real infinities, or the truncation bounds -T / +T.

use crate::error::{DplocError, Result};

/// Clamp `u` to the interval [-T, T].
///
/// Errors if `t` is not strictly positive.
pub fn truncate(u: f64, t: f64) -> Result<f64> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(DplocError::invalid(format!(
            "truncation level T must be positive and finite, got {t}"
        )));
    }
    Ok(u.clamp(-t, t))
}

/// A finite real sample of length >= 2. NaN and infinite entries are rejected
/// here so the estimators never have to deal with them.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    values: Vec<f64>,
}

impl Sample {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(DplocError::TooFewPoints {
                needed: 2,
                got: values.len(),
            });
        }
        for (index, &value) in values.iter().enumerate() {
            if !value.is_finite() {
                return Err(DplocError::NonFinite { index, value });
            }
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Count of coordinates at which `self` and `other` differ (position-wise).
    pub fn hamming_distance(&self, other: &Sample) -> Result<usize> {
        hamming_distance(self, other)
    }
}

/// Position-wise Hamming distance between two equal-length samples.
pub fn hamming_distance(x: &Sample, x_prime: &Sample) -> Result<usize> {
    if x.len() != x_prime.len() {
        return Err(DplocError::LengthMismatch {
            left: x.len(),
            right: x_prime.len(),
        });
    }
    Ok(x.values()
        .iter()
        .zip(x_prime.values())
        .filter(|(a, b)| a != b)
        .count())
}

/// Sentinel convention for out-of-range order statistics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Padding {
    /// Indices below 1 resolve to -inf, above n to +inf.
    PlainInfinity,
    /// Indices below 1 resolve to -T, above n to +T.
    Truncated(f64),
}

/// The nondecreasing rearrangement of a sample.
#[derive(Debug, Clone, PartialEq)]
pub struct SortedSample {
    ordered: Vec<f64>,
}

impl SortedSample {
    pub fn from_sample(sample: &Sample) -> Self {
        let mut ordered = sample.values().to_vec();
        ordered.sort_unstable_by(f64::total_cmp);
        Self { ordered }
    }

    /// Sort an arbitrary finite vector (used for block means, which may form
    /// sequences shorter than a `Sample` allows).
    pub fn from_values(mut values: Vec<f64>) -> Self {
        values.sort_unstable_by(f64::total_cmp);
        Self { ordered: values }
    }

    pub(crate) fn from_sorted_unchecked(ordered: Vec<f64>) -> Self {
        debug_assert!(ordered.windows(2).all(|w| w[0] <= w[1]));
        Self { ordered }
    }

    pub fn len(&self) -> usize {
        self.ordered.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ordered.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.ordered
    }

    /// 1-indexed order statistic with sentinel padding for out-of-range `k`.
    pub fn order_stat(&self, k: i64, padding: Padding) -> f64 {
        let n = self.ordered.len() as i64;
        if k < 1 {
            match padding {
                Padding::PlainInfinity => f64::NEG_INFINITY,
                Padding::Truncated(t) => -t,
            }
        } else if k > n {
            match padding {
                Padding::PlainInfinity => f64::INFINITY,
                Padding::Truncated(t) => t,
            }
        } else {
            self.ordered[(k - 1) as usize]
        }
    }

    /// The left empirical median x_(floor(n/2)).
    pub fn empirical_median(&self) -> Result<f64> {
        let ell = left_median_index(self.len())?;
        Ok(self.ordered[ell - 1])
    }

    /// Copy with every entry clamped to [-T, T]; clamping is monotone, so the
    /// result is still sorted.
    pub fn truncated(&self, t: f64) -> Result<SortedSample> {
        if !(t > 0.0) || !t.is_finite() {
            return Err(DplocError::invalid(format!(
                "truncation level T must be positive and finite, got {t}"
            )));
        }
        Ok(SortedSample {
            ordered: self.ordered.iter().map(|&v| v.clamp(-t, t)).collect(),
        })
    }
}

/// 1-indexed position of the left median: floor(n/2). Applied literally for
/// odd n as well, so the "median" of (1,2,3) is 1.
pub fn left_median_index(n: usize) -> Result<usize> {
    if n < 2 {
        return Err(DplocError::TooFewPoints { needed: 2, got: n });
    }
    Ok(n / 2)
}

/// Sort a sample into nondecreasing order.
pub fn sort_sample(x: &Sample) -> SortedSample {
    SortedSample::from_sample(x)
}

/// Left median of the raw sample.
pub fn empirical_median(x: &Sample) -> Result<f64> {
    SortedSample::from_sample(x).empirical_median()
}

/// Left median after clamping every entry to [-T, T]. Clamping preserves
/// order, so this equals the clamped raw median.
pub fn truncated_median(x: &Sample, t: f64) -> Result<f64> {
    truncate(empirical_median(x)?, t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn truncate_clamps_and_is_identity_inside() {
        assert_eq!(truncate(3.0, 2.0).unwrap(), 2.0);
        assert_eq!(truncate(-5.0, 2.0).unwrap(), -2.0);
        assert_eq!(truncate(1.5, 2.0).unwrap(), 1.5);
        assert!(truncate(1.0, 0.0).is_err());
        assert!(truncate(1.0, -1.0).is_err());
    }

    #[test]
    fn sample_rejects_short_and_non_finite() {
        assert!(matches!(
            Sample::new(vec![1.0]),
            Err(DplocError::TooFewPoints { .. })
        ));
        assert!(matches!(
            Sample::new(vec![1.0, f64::NAN]),
            Err(DplocError::NonFinite { index: 1, .. })
        ));
        assert!(Sample::new(vec![1.0, f64::INFINITY]).is_err());
    }

    #[test]
    fn sorting_and_ties() {
        let s = SortedSample::from_sample(&Sample::new(vec![3.0, 1.0, 2.0]).unwrap());
        assert_eq!(s.as_slice(), &[1.0, 2.0, 3.0]);
        let t = SortedSample::from_sample(&Sample::new(vec![7.0, 7.0]).unwrap());
        assert_eq!(t.as_slice(), &[7.0, 7.0]);
    }

    #[test]
    fn order_stat_padding() {
        let s = SortedSample::from_values(vec![1.0, 2.0, 3.0]);
        assert_eq!(s.order_stat(2, Padding::PlainInfinity), 2.0);
        assert_eq!(s.order_stat(0, Padding::Truncated(5.0)), -5.0);
        assert_eq!(s.order_stat(9, Padding::PlainInfinity), f64::INFINITY);
        assert_eq!(s.order_stat(-3, Padding::PlainInfinity), f64::NEG_INFINITY);
        assert_eq!(s.order_stat(4, Padding::Truncated(5.0)), 5.0);
    }

    #[test]
    fn hamming_examples() {
        let a = Sample::new(vec![1.0, 2.0, 3.0]).unwrap();
        let b = Sample::new(vec![1.0, 9.0, 3.0]).unwrap();
        let c = Sample::new(vec![2.0, 1.0]).unwrap();
        let d = Sample::new(vec![1.0, 2.0]).unwrap();
        assert_eq!(hamming_distance(&a, &a).unwrap(), 0);
        assert_eq!(hamming_distance(&a, &b).unwrap(), 1);
        assert_eq!(hamming_distance(&c, &d).unwrap(), 2);
        assert!(hamming_distance(&a, &c).is_err());
    }

    #[test]
    fn left_median_positions() {
        assert_eq!(left_median_index(4).unwrap(), 2);
        assert_eq!(left_median_index(100).unwrap(), 50);
        assert_eq!(left_median_index(5).unwrap(), 2);
        assert!(left_median_index(1).is_err());
    }

    #[test]
    fn empirical_median_examples() {
        let m = |v: Vec<f64>| empirical_median(&Sample::new(v).unwrap()).unwrap();
        assert_eq!(m(vec![1.0, 2.0, 3.0, 4.0]), 2.0);
        assert_eq!(m(vec![7.0, 7.0]), 7.0);
        // floor(3/2) = 1 makes the left median of an odd sample its minimum.
        assert_eq!(m(vec![1.0, 2.0, 3.0]), 1.0);
    }

    #[test]
    fn truncated_median_matches_clamped_median() {
        let x = Sample::new(vec![-9.0, 0.5, 4.0, 12.0]).unwrap();
        assert_eq!(truncated_median(&x, 2.0).unwrap(), 0.5);
        let y = Sample::new(vec![5.0, 9.0]).unwrap();
        assert_eq!(truncated_median(&y, 2.0).unwrap(), 2.0);
    }
}
