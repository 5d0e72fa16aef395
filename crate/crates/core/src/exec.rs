//! Deterministic data-parallel helpers.
//!
//! Every parallel loop in the crate routes through [`map_collect`]: tasks are
//! indexed, outputs are collected in index order, and reductions happen
//! sequentially over the collected vector. Results are therefore bit-identical
//! across thread counts and identical to the sequential build
//! (`--no-default-features`).

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Map `f` over `0..n`, collecting results in index order.
#[cfg(feature = "parallel")]
pub fn map_collect<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..n).into_par_iter().map(f).collect()
}

/// Map `f` over `0..n`, collecting results in index order.
#[cfg(not(feature = "parallel"))]
pub fn map_collect<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..n).map(f).collect()
}

/// Sequential reference version of [`map_collect`], available in every build.
/// The bench suite uses it as the single-threaded baseline.
pub fn map_collect_seq<T, F>(n: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..n).map(f).collect()
}

/// Pairwise summation. Deterministic for a given slice and more accurate than
/// a running sum on long vectors; used for all large reductions so aggregate
/// outputs do not depend on how work was scheduled.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    if values.len() <= 32 {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// True when this build dispatches [`map_collect`] through rayon.
pub fn parallel_enabled() -> bool {
    cfg!(feature = "parallel")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parallel_and_sequential_agree_bitwise() {
        let f = |i: usize| (i as f64).sin() * (i as f64 + 0.5).sqrt();
        let a = map_collect(1000, f);
        let b = map_collect_seq(1000, f);
        assert_eq!(a, b);
    }

    #[test]
    fn pairwise_sum_matches_exact_on_integers() {
        let v: Vec<f64> = (0..1025).map(|i| i as f64).collect();
        assert_eq!(pairwise_sum(&v), 1024.0 * 1025.0 / 2.0);
    }
}
