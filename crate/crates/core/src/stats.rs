//! Small statistical helpers for the Monte Carlo diagnostics.

use crate::exec::pairwise_sum;

/// Sample mean and standard error of the mean.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanSe {
    pub mean: f64,
    pub se: f64,
    pub n: usize,
}

pub fn mean_se(samples: &[f64]) -> MeanSe {
    let n = samples.len();
    if n == 0 {
        return MeanSe { mean: f64::NAN, se: f64::NAN, n: 0 };
    }
    let mean = pairwise_sum(samples) / n as f64;
    if n == 1 {
        return MeanSe { mean, se: 0.0, n };
    }
    let sq: Vec<f64> = samples.iter().map(|&x| (x - mean) * (x - mean)).collect();
    let var = pairwise_sum(&sq) / (n as f64 - 1.0);
    MeanSe { mean, se: (var / n as f64).sqrt(), n }
}

/// Standardized skewness and excess kurtosis with their null thresholds.
#[derive(Debug, Clone, Copy)]
pub struct MomentTest {
    pub skewness: f64,
    pub excess_kurtosis: f64,
    pub skew_threshold: f64,
    pub kurt_threshold: f64,
    pub pass: bool,
}

/// Gaussianity spot check: under the null, |skew| <= 3 sqrt(6/R) and
/// |excess kurtosis| <= 3 sqrt(24/R).
pub fn moment_test(samples: &[f64]) -> MomentTest {
    let n = samples.len() as f64;
    let mean = pairwise_sum(samples) / n;
    let centered: Vec<f64> = samples.iter().map(|&x| x - mean).collect();
    let m2 = pairwise_sum(&centered.iter().map(|&d| d * d).collect::<Vec<_>>()) / n;
    let m3 = pairwise_sum(&centered.iter().map(|&d| d * d * d).collect::<Vec<_>>()) / n;
    let m4 = pairwise_sum(&centered.iter().map(|&d| d * d * d * d).collect::<Vec<_>>()) / n;
    let skewness = m3 / m2.powf(1.5);
    let excess_kurtosis = m4 / (m2 * m2) - 3.0;
    let skew_threshold = 3.0 * (6.0 / n).sqrt();
    let kurt_threshold = 3.0 * (24.0 / n).sqrt();
    let pass = skewness.abs() <= skew_threshold && excess_kurtosis.abs() <= kurt_threshold;
    MomentTest { skewness, excess_kurtosis, skew_threshold, kurt_threshold, pass }
}

fn ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut r = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        // average ranks over ties
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            r[k] = avg;
        }
        i = j + 1;
    }
    r
}

fn pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = pairwise_sum(x) / n;
    let my = pairwise_sum(y) / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (&a, &b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    sxy / (sxx * syy).sqrt()
}

/// Spearman rank correlation.
pub fn spearman(x: &[f64], y: &[f64]) -> f64 {
    assert_eq!(x.len(), y.len());
    pearson(&ranks(x), &ranks(y))
}

/// Permutation test for a positive Spearman correlation: p-value is the
/// fraction of seeded shuffles of `y` with correlation at least the observed.
pub fn spearman_permutation_pvalue(x: &[f64], y: &[f64], permutations: usize, seed: u64) -> f64 {
    use rand::seq::SliceRandom;
    let observed = spearman(x, y);
    let mut rng = crate::rng::stream_rng(seed, "permutation", 0);
    let mut shuffled = y.to_vec();
    let mut at_least = 1usize; // the identity permutation counts
    for _ in 0..permutations {
        shuffled.shuffle(&mut rng);
        if spearman(x, &shuffled) >= observed {
            at_least += 1;
        }
    }
    at_least as f64 / (permutations + 1) as f64
}
