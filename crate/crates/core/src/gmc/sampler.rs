//! Stationary Gaussian band sampling by circulant embedding on a padded torus.
//!
//! The torus covariance row is the periodization of the band covariance:
//! summing the closed-form `C_n` over image shifts makes the circulant
//! eigenvalues a sampled (nonnegative) spectral density, so the embedding is
//! positive semidefinite by construction. The price is an exponentially small
//! wrap-around bias on the window covariance, bounded analytically at build
//! time; builds whose bound exceeds `MAX_WRAP_BIAS_REL` of the band variance
//! are rejected with instructions to enlarge the padding factor.

use std::sync::Arc;

use rand_distr::{Distribution, StandardNormal};
use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use super::{BandSample, FieldStack};
use crate::error::{Error, Result};
use crate::exec;
use crate::grid::{GridSpec, ScalarGrid};
use crate::kernels::{self, CutoffSequence, KernelConfig};
use crate::rng::{derive_seed, stream_rng};

/// Reject embeddings whose wrap bias bound exceeds this fraction of the band
/// diagonal variance.
const MAX_WRAP_BIAS_REL: f64 = 0.01;

/// Clamp tiny negative eigenvalues up to this fraction of the largest; reject
/// anything more negative.
const PSD_CLAMP_REL: f64 = 1e-7;

/// `C_band(d) <= K0(m c_{band-1} d) <= sqrt(pi / (2x)) e^{-x}` with
/// `x = m c_{band-1} d`.
fn cov_decay_bound(d: f64, band: usize, cuts: &CutoffSequence, cfg: &KernelConfig) -> f64 {
    let (c_lo, _) = cuts.band_bounds(band).expect("validated band");
    let x = cfg.mass * c_lo * d;
    if x <= 0.0 {
        return f64::INFINITY;
    }
    (std::f64::consts::PI / (2.0 * x)).sqrt() * (-x).exp()
}

/// Image-ring tail starting at `from_ring`, with all `8 * ring` images of
/// ring `ring` taken at their crude minimum distance `ring * period - reach`.
fn ring_tail_bound(
    from_ring: usize,
    period: f64,
    reach: f64,
    band: usize,
    cuts: &CutoffSequence,
    cfg: &KernelConfig,
) -> f64 {
    let mut total = 0.0;
    for ring in from_ring..(from_ring + 64) {
        let d = ring as f64 * period - reach;
        if d <= 0.0 {
            return f64::INFINITY;
        }
        let term = 8.0 * ring as f64 * cov_decay_bound(d, band, cuts, cfg);
        total += term;
        if term < 1e-18 * total.max(1e-300) {
            break;
        }
    }
    total
}

/// Bound on the covariance periodization bias over window lags
/// (|lag| <= (side, side) componentwise). Ring 1 dominates and is split into
/// its four axis images, at distance >= period - side, and four diagonal
/// images, at distance >= sqrt(2) (period - side); outer rings use the crude
/// ring bound.
fn wrap_bias_bound(period: f64, side: f64, band: usize, cuts: &CutoffSequence, cfg: &KernelConfig) -> f64 {
    if period <= side {
        return f64::INFINITY;
    }
    let axis = period - side;
    let ring1 = 4.0 * cov_decay_bound(axis, band, cuts, cfg)
        + 4.0 * cov_decay_bound(std::f64::consts::SQRT_2 * axis, band, cuts, cfg);
    let outer = ring_tail_bound(2, period, std::f64::consts::SQRT_2 * side, band, cuts, cfg);
    kernels::KAPPA * (ring1 + outer)
}

fn fft2_in_place(buf: &mut [Complex<f64>], m: usize, fft: &Arc<dyn Fft<f64>>) {
    let mut scratch = vec![Complex::default(); fft.get_inplace_scratch_len()];
    for row in buf.chunks_exact_mut(m) {
        fft.process_with_scratch(row, &mut scratch);
    }
    transpose_square(buf, m);
    for row in buf.chunks_exact_mut(m) {
        fft.process_with_scratch(row, &mut scratch);
    }
    transpose_square(buf, m);
}

fn transpose_square(buf: &mut [Complex<f64>], m: usize) {
    for i in 0..m {
        for j in (i + 1)..m {
            buf.swap(i * m + j, j * m + i);
        }
    }
}

/// Prepared embedding of one band on one grid; reusable across draws.
#[derive(Clone)]
pub struct BandSampler {
    grid: GridSpec,
    band: usize,
    diagonal_variance: f64,
    torus_size: usize,
    /// sqrt(eigenvalue) / torus_size, the per-mode amplitude.
    amplitude: Vec<f64>,
    fft: Arc<dyn Fft<f64>>,
    min_eig_ratio: f64,
    wrap_bias_bound: f64,
}

impl BandSampler {
    pub fn new(
        grid: GridSpec,
        band: usize,
        cuts: &CutoffSequence,
        cfg: &KernelConfig,
    ) -> Result<Self> {
        cuts.band_bounds(band)?;
        let gap = cuts.log_gap(band)?;
        let m = grid.cells_per_side * grid.padding_factor;
        let h = grid.cell_width();
        let period = m as f64 * h;

        let wrap_bias_bound = wrap_bias_bound(period, grid.side, band, cuts, cfg);
        if !(wrap_bias_bound / gap <= MAX_WRAP_BIAS_REL) {
            return Err(Error::EmbeddingRejected {
                min_eig_ratio: f64::NAN,
                wrap_bias: wrap_bias_bound / gap,
                padding_factor: grid.padding_factor,
            });
        }

        // Image rings to include in the periodized row: enough that the
        // truncation cannot disturb eigenvalue positivity.
        let reach = period / std::f64::consts::SQRT_2;
        let mut images = 1usize;
        while images < 6 {
            let tail = kernels::KAPPA * ring_tail_bound(images + 1, period, reach, band, cuts, cfg);
            if tail <= 1e-9 * gap {
                break;
            }
            images += 1;
        }

        // Periodized covariance row.
        let row: Vec<f64> = {
            let rows = exec::map_collect(m, |iy| {
                let dy = iy.min(m - iy) as f64 * h;
                let mut out = Vec::with_capacity(m);
                for ix in 0..m {
                    let dx = ix.min(m - ix) as f64 * h;
                    let mut sum = 0.0;
                    for jx in -(images as i64)..=(images as i64) {
                        for jy in -(images as i64)..=(images as i64) {
                            let ddx = dx + jx as f64 * period;
                            let ddy = dy + jy as f64 * period;
                            let d = (ddx * ddx + ddy * ddy).sqrt();
                            sum += kernels::band_covariance(d, band, cuts, cfg)
                                .expect("validated band");
                        }
                    }
                    out.push(sum);
                }
                out
            });
            rows.into_iter().flatten().collect()
        };

        // Circulant eigenvalues are the 2D DFT of the row.
        let fft: Arc<dyn Fft<f64>> = FftPlanner::new().plan_fft_forward(m);
        let mut buf: Vec<Complex<f64>> = row.iter().map(|&v| Complex::new(v, 0.0)).collect();
        fft2_in_place(&mut buf, m, &fft);

        let max_eig = buf.iter().map(|c| c.re).fold(f64::NEG_INFINITY, f64::max);
        let min_eig = buf.iter().map(|c| c.re).fold(f64::INFINITY, f64::min);
        let min_eig_ratio = min_eig / max_eig;
        if !(max_eig > 0.0) || min_eig < -PSD_CLAMP_REL * max_eig {
            return Err(Error::EmbeddingRejected {
                min_eig_ratio,
                wrap_bias: wrap_bias_bound / gap,
                padding_factor: grid.padding_factor,
            });
        }

        let scale = 1.0 / m as f64;
        let amplitude: Vec<f64> = buf.iter().map(|c| c.re.max(0.0).sqrt() * scale).collect();

        Ok(BandSampler {
            grid,
            band,
            diagonal_variance: gap,
            torus_size: m,
            amplitude,
            fft,
            min_eig_ratio,
            wrap_bias_bound,
        })
    }

    pub fn band(&self) -> usize {
        self.band
    }

    /// Smallest circulant eigenvalue over the largest, before clamping.
    pub fn min_eig_ratio(&self) -> f64 {
        self.min_eig_ratio
    }

    /// Analytic bound on the covariance periodization bias over window lags.
    pub fn wrap_bias_bound(&self) -> f64 {
        self.wrap_bias_bound
    }

    /// Draw one band field. Equal seeds give bit-identical grids.
    pub fn sample(&self, seed: u64) -> BandSample {
        let m = self.torus_size;
        let mut rng = stream_rng(seed, "band-field", self.band as u64);
        let mut buf: Vec<Complex<f64>> = Vec::with_capacity(m * m);
        for amp in &self.amplitude {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            buf.push(Complex::new(re * amp, im * amp));
        }
        fft2_in_place(&mut buf, m, &self.fft);

        let n = self.grid.cells_per_side;
        let mut values = Vec::with_capacity(n * n);
        for iy in 0..n {
            for ix in 0..n {
                values.push(buf[iy * m + ix].re);
            }
        }
        let grid = ScalarGrid::from_values(n, values).expect("sizes match by construction");
        BandSample {
            band: self.band,
            values: grid,
            diagonal_variance: self.diagonal_variance,
            seed,
        }
    }
}

/// One-shot band draw; prefer [`FieldSampler`] when drawing repeatedly.
pub fn sample_band(
    grid: GridSpec,
    band: usize,
    cuts: &CutoffSequence,
    cfg: &KernelConfig,
    seed: u64,
) -> Result<BandSample> {
    Ok(BandSampler::new(grid, band, cuts, cfg)?.sample(seed))
}

/// Prepared embeddings for bands `1..=levels` of one grid.
pub struct FieldSampler {
    grid: GridSpec,
    samplers: Vec<BandSampler>,
}

impl FieldSampler {
    pub fn new(
        grid: GridSpec,
        cuts: CutoffSequence,
        cfg: KernelConfig,
        levels: usize,
    ) -> Result<Self> {
        if levels == 0 || levels > cuts.num_bands() {
            return Err(Error::InvalidParameter(format!(
                "levels must lie in 1..={}, got {levels}",
                cuts.num_bands()
            )));
        }
        let samplers = exec::map_collect(levels, |i| BandSampler::new(grid, i + 1, &cuts, &cfg))
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
        Ok(FieldSampler { grid, samplers })
    }

    pub fn max_levels(&self) -> usize {
        self.samplers.len()
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn band_sampler(&self, band: usize) -> Option<&BandSampler> {
        self.samplers.get(band - 1)
    }

    /// Band seed for (`master_seed`, `band`): a pure function, so stacks at
    /// different levels built from one master seed are nested.
    pub fn band_seed(master_seed: u64, band: usize) -> u64 {
        derive_seed(master_seed, "band", band as u64)
    }

    /// Sample a stack of the first `levels` bands under `master_seed`.
    pub fn sample_stack(&self, master_seed: u64, levels: usize) -> Result<FieldStack> {
        if levels > self.samplers.len() {
            return Err(Error::InvalidParameter(format!(
                "requested {levels} levels from a sampler prepared for {}",
                self.samplers.len()
            )));
        }
        let bands = exec::map_collect(levels, |i| {
            self.samplers[i].sample(Self::band_seed(master_seed, i + 1))
        });
        let mut stack = FieldStack::new(self.grid, master_seed);
        for band in bands {
            stack = stack.accumulate(band)?;
        }
        Ok(stack)
    }
}
