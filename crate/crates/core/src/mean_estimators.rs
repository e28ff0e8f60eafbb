//! Median-of-means and its truncated / privatized variants.
//!
//! These are the mean-estimation demonstrators: the smooth-sensitivity noise
//! attached to the truncated median-of-means never drops below
//! (2/eps) * 2T e^{-beta N}, which swamps the non-private error scale when T
//! has to grow like sqrt(n). `dp_mom_smooth` exists to measure that effect,
//! not to be used.

use crate::error::{DplocError, Result};
use crate::median_dp::PrivacyBudget;
use crate::noise::NoiseSource;
use crate::sample::{truncate, Sample, SortedSample};
use crate::sensitivity::smooth_sensitivity_mom;

/// A partition of {1..n} into `num_blocks` contiguous blocks of equal size.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockPartition {
    n: usize,
    num_blocks: usize,
    block_size: usize,
}

impl BlockPartition {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_blocks(&self) -> usize {
        self.num_blocks
    }

    pub fn block_size(&self) -> usize {
        self.block_size
    }

    /// 0-based index range of block `j` (0-based).
    pub fn block_range(&self, j: usize) -> std::ops::Range<usize> {
        debug_assert!(j < self.num_blocks);
        j * self.block_size..(j + 1) * self.block_size
    }

    /// Block index of data coordinate `i` (0-based).
    pub fn assignment(&self, i: usize) -> usize {
        debug_assert!(i < self.n);
        i / self.block_size
    }
}

/// Split n data points into `num_blocks` contiguous equal blocks. The block
/// count must divide n; callers with indivisible samples should trim first.
pub fn partition_blocks(n: usize, num_blocks: usize) -> Result<BlockPartition> {
    if num_blocks == 0 || num_blocks > n {
        return Err(DplocError::invalid(format!(
            "block count must satisfy 1 <= N <= n, got N = {num_blocks}, n = {n}"
        )));
    }
    if n % num_blocks != 0 {
        return Err(DplocError::NotDivisible {
            n,
            blocks: num_blocks,
        });
    }
    Ok(BlockPartition {
        n,
        num_blocks,
        block_size: n / num_blocks,
    })
}

/// Block count ceil(8 ln(2/alpha)) that makes the median-of-means deviation
/// bound hold at confidence 1 - alpha.
pub fn blocks_for_alpha(alpha: f64) -> Result<usize> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(DplocError::invalid(format!(
            "alpha must lie in (0, 1), got {alpha}"
        )));
    }
    Ok((8.0 * (2.0 / alpha).ln()).ceil() as usize)
}

/// Per-block empirical means, in block order.
pub fn block_means(x: &Sample, partition: &BlockPartition) -> Result<Vec<f64>> {
    if x.len() != partition.n() {
        return Err(DplocError::LengthMismatch {
            left: x.len(),
            right: partition.n(),
        });
    }
    let values = x.values();
    Ok((0..partition.num_blocks())
        .map(|j| {
            let range = partition.block_range(j);
            values[range].iter().sum::<f64>() / partition.block_size() as f64
        })
        .collect())
}

fn mom_median_of(sorted_means: &SortedSample) -> f64 {
    // left median over blocks; a single block degenerates to the plain mean
    let n_blocks = sorted_means.len();
    let ell = (n_blocks / 2).max(1);
    sorted_means.as_slice()[ell - 1]
}

/// Median of the block means (left median over blocks).
pub fn median_of_means(x: &Sample, partition: &BlockPartition) -> Result<f64> {
    let means = SortedSample::from_values(block_means(x, partition)?);
    Ok(mom_median_of(&means))
}

/// Median of means clamped to [-T, T].
pub fn truncated_mom(x: &Sample, partition: &BlockPartition, t: f64) -> Result<f64> {
    truncate(median_of_means(x, partition)?, t)
}

/// Deterministic part of the privatized truncated median-of-means.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomRelease {
    pub center: f64,
    pub noise_scale: f64,
    pub sensitivity: f64,
    pub beta: f64,
}

pub fn dp_mom_prepare(
    x: &Sample,
    partition: &BlockPartition,
    t: f64,
    budget: &PrivacyBudget,
) -> Result<MomRelease> {
    let means = SortedSample::from_values(block_means(x, partition)?);
    let beta = budget.beta();
    // one data change alters exactly one block mean, so the block-level
    // smooth sensitivity calibrates noise for the whole-sample neighborhood
    let sensitivity = smooth_sensitivity_mom(&means, t, beta)?;
    Ok(MomRelease {
        center: truncate(mom_median_of(&means), t)?,
        noise_scale: 2.0 * sensitivity / budget.epsilon(),
        sensitivity,
        beta: beta.value(),
    })
}

pub fn dp_mom_release_with_noise(release: &MomRelease, z: f64) -> f64 {
    release.center + release.noise_scale * z
}

/// Truncated median-of-means plus (2Z/eps) * S^(beta) noise computed on the
/// block means. The negative-result demonstrator.
pub fn dp_mom_smooth(
    x: &Sample,
    partition: &BlockPartition,
    t: f64,
    budget: &PrivacyBudget,
    rng: &mut NoiseSource,
) -> Result<f64> {
    let release = dp_mom_prepare(x, partition, t, budget)?;
    Ok(dp_mom_release_with_noise(&release, rng.standard_laplace()))
}

/// Minimum gap between consecutive sorted block means. Diagnostic probe for
/// how tightly packed the block means are (small gaps force tiny eta, hence
/// frequent no-replies, in any propose-test-release variant over blocks).
pub fn min_block_gap(x: &Sample, partition: &BlockPartition) -> Result<f64> {
    if partition.num_blocks() < 2 {
        return Err(DplocError::invalid(format!(
            "min_block_gap needs at least 2 blocks, got {}",
            partition.num_blocks()
        )));
    }
    let means = SortedSample::from_values(block_means(x, partition)?);
    Ok(means
        .as_slice()
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::INFINITY, f64::min))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(values: &[f64]) -> Sample {
        Sample::new(values.to_vec()).unwrap()
    }

    #[test]
    fn partition_examples() {
        let p = partition_blocks(4, 2).unwrap();
        assert_eq!(p.block_range(0), 0..2);
        assert_eq!(p.block_range(1), 2..4);
        assert_eq!(p.assignment(2), 1);
        let whole = partition_blocks(6, 1).unwrap();
        assert_eq!(whole.block_size(), 6);
        assert!(matches!(
            partition_blocks(5, 2),
            Err(DplocError::NotDivisible { n: 5, blocks: 2 })
        ));
        assert!(partition_blocks(4, 0).is_err());
        assert!(partition_blocks(4, 5).is_err());
    }

    #[test]
    fn blocks_for_alpha_values() {
        assert_eq!(blocks_for_alpha(2.0 / std::f64::consts::E).unwrap(), 8);
        assert_eq!(blocks_for_alpha(0.05).unwrap(), 30);
        assert_eq!(blocks_for_alpha(0.01).unwrap(), 43);
        assert!(blocks_for_alpha(0.0).is_err());
        assert!(blocks_for_alpha(1.0).is_err());
    }

    #[test]
    fn median_of_means_examples() {
        let x = sample(&[1.0, 2.0, 3.0, 4.0]);
        let p = partition_blocks(4, 2).unwrap();
        assert_eq!(median_of_means(&x, &p).unwrap(), 1.5);

        let c = sample(&[7.0; 6]);
        assert_eq!(
            median_of_means(&c, &partition_blocks(6, 3).unwrap()).unwrap(),
            7.0
        );

        // single block: the plain empirical mean
        let p1 = partition_blocks(4, 1).unwrap();
        assert_eq!(median_of_means(&x, &p1).unwrap(), 2.5);
    }

    #[test]
    fn mom_translation_equivariance_and_block_permutation_invariance() {
        let values: Vec<f64> = (0..12).map(|i| ((i * 37) % 11) as f64 - 5.0).collect();
        let x = sample(&values);
        let p = partition_blocks(12, 4).unwrap();
        let m = median_of_means(&x, &p).unwrap();
        let shifted = sample(&values.iter().map(|v| v + 3.25).collect::<Vec<_>>());
        assert!((median_of_means(&shifted, &p).unwrap() - (m + 3.25)).abs() < 1e-12);
        // permuting within a block leaves every block mean unchanged
        let mut permuted = values.clone();
        permuted.swap(0, 2);
        permuted.swap(9, 11);
        assert_eq!(median_of_means(&sample(&permuted), &p).unwrap(), m);
    }

    #[test]
    fn truncated_mom_examples() {
        let p = partition_blocks(2, 2).unwrap();
        assert_eq!(truncated_mom(&sample(&[5.0, 7.0]), &p, 2.0).unwrap(), 2.0);
        assert_eq!(truncated_mom(&sample(&[1.5, 9.0]), &p, 2.0).unwrap(), 1.5);
        assert_eq!(truncated_mom(&sample(&[-9.0, 4.0]), &p, 4.0).unwrap(), -4.0);
    }

    #[test]
    fn dp_mom_zero_noise_is_truncated_mom() {
        let x = sample(&[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        let p = partition_blocks(6, 3).unwrap();
        let budget = PrivacyBudget::new(1.0, 0.01).unwrap();
        let release = dp_mom_prepare(&x, &p, 2.0, &budget).unwrap();
        assert_eq!(
            dp_mom_release_with_noise(&release, 0.0),
            truncated_mom(&x, &p, 2.0).unwrap()
        );
    }

    #[test]
    fn dp_mom_noise_floor() {
        let x = sample(&[0.5, 0.5, 0.5, 0.5, 0.5, 0.5]);
        let p = partition_blocks(6, 3).unwrap();
        let budget = PrivacyBudget::new(1.0, 0.01).unwrap();
        let release = dp_mom_prepare(&x, &p, 2.0, &budget).unwrap();
        let floor = 2.0 * 2.0 * (-release.beta * 3.0).exp();
        assert!(release.noise_scale >= 2.0 * floor / budget.epsilon() - 1e-12);
    }

    #[test]
    fn single_block_reduces_to_noised_truncated_mean() {
        let x = sample(&[0.0, 1.0, 2.0, 9.0]);
        let p = partition_blocks(4, 1).unwrap();
        let budget = PrivacyBudget::new(1.0, 0.01).unwrap();
        let release = dp_mom_prepare(&x, &p, 2.0, &budget).unwrap();
        assert_eq!(release.center, 2.0); // mean 3 clamps to T = 2
        let mut rng = NoiseSource::new(1);
        let out = dp_mom_smooth(&x, &p, 2.0, &budget, &mut rng).unwrap();
        assert!(out.is_finite());
    }

    #[test]
    fn min_block_gap_examples() {
        let x = sample(&[1.0, 2.0, 3.0, 4.0]);
        let p = partition_blocks(4, 2).unwrap();
        assert_eq!(min_block_gap(&x, &p).unwrap(), 2.0);
        let tied = sample(&[1.0, 3.0, 3.0, 1.0]);
        assert_eq!(min_block_gap(&tied, &p).unwrap(), 0.0);
        assert!(min_block_gap(&x, &partition_blocks(4, 1).unwrap()).is_err());
    }
}
