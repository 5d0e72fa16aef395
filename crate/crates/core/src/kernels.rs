//! Massive Green function, its band decomposition and the Brownian resolvent
//! kernel.
//!
//! The seed kernel is
//!
//! ```text
//! k_m(z) = 1/2 * int_0^inf exp(-m^2 |z|^2 / (2s) - s/2) ds
//! ```
//!
//! and the massive Green function of separation r admits the two
//! representations
//!
//! ```text
//! G(r) = int_0^inf exp(-m^2 s / 2 - r^2 / (2s)) ds / (2s)
//!      = int_1^inf k_m(s r) / s ds.
//! ```
//!
//! Splitting the second representation along an increasing cutoff sequence
//! c_0 = 1 < c_1 < ... gives the per-band covariances
//! `C_n(r) = int_{c_{n-1}}^{c_n} k_m(s r) / s ds` with `C_n(0) = log(c_n / c_{n-1})`.
//!
//! The resolvent kernel of planar Brownian motion at rate 1 is the Laplace
//! transform of the heat kernel,
//! `r1(r) = int_0^inf e^{-t} (2 pi t)^{-1} exp(-r^2 / (2t)) dt`.
//!
//! Every evaluation has two routes: adaptive quadrature of the defining
//! integral (after the exact substitution s = e^u, which removes the endpoint
//! singularities) and a closed form in terms of the modified Bessel functions
//! (`k_m(z) = m|z| K1(m|z|)`, `G(r) = K0(m r)`, `r1(r) = K0(sqrt(2) r) / pi`).
//! The quadrature route is the source of truth; [`oracle_gate`] checks the
//! closed forms against it and is run by the test suite and the
//! `kernels-check` subcommand before anything downstream trusts them.

use serde::{Deserialize, Serialize};

use crate::bessel;
use crate::error::{Error, Result};
use crate::quad;

/// Envelope constant: `x K1(x) <= KAPPA * exp(-x/2)` for all x >= 0
/// (the supremum of `x K1(x) e^{x/2}` is about 1.0673, attained near x = 0.38).
pub(crate) const KAPPA: f64 = 1.1;

/// Mass parameter and quadrature budget shared by all kernel evaluations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelConfig {
    pub mass: f64,
    pub quad_rel_tol: f64,
    pub quad_max_subdiv: u32,
}

impl KernelConfig {
    pub const DEFAULT_REL_TOL: f64 = 1e-10;
    pub const DEFAULT_MAX_SUBDIV: u32 = 2000;

    pub fn new(mass: f64) -> Result<Self> {
        Self::with_quad(mass, Self::DEFAULT_REL_TOL, Self::DEFAULT_MAX_SUBDIV)
    }

    pub fn with_quad(mass: f64, quad_rel_tol: f64, quad_max_subdiv: u32) -> Result<Self> {
        if !(mass > 0.0) || !mass.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "mass must be a positive real, got {mass}"
            )));
        }
        if !(quad_rel_tol > 0.0 && quad_rel_tol <= 1e-4) {
            return Err(Error::InvalidParameter(format!(
                "quad_rel_tol must lie in (0, 1e-4], got {quad_rel_tol}"
            )));
        }
        if quad_max_subdiv == 0 {
            return Err(Error::InvalidParameter("quad_max_subdiv must be positive".into()));
        }
        Ok(KernelConfig { mass, quad_rel_tol, quad_max_subdiv })
    }
}

/// How a cutoff sequence was generated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum CutoffGrowth {
    /// `c_n = exp(n * log_ratio)`.
    Geometric { log_ratio: f64 },
    Explicit,
}

/// The band boundaries `c_0 = 1 < c_1 < ... < c_N` slicing `[1, inf)`.
///
/// `N` truncates an intentionally unbounded sequence; band `n` (1-based)
/// covers `[c_{n-1}, c_n]`. Diagonal band variances `log(c_n / c_{n-1})` are
/// stored exactly so a geometric sequence with unit log-ratio yields exactly
/// 1.0 per band.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CutoffSequence {
    values: Vec<f64>,
    log_gaps: Vec<f64>,
    growth: CutoffGrowth,
}

impl CutoffSequence {
    /// Geometric cutoffs `c_n = exp(n * log_ratio)` with `bands` bands.
    pub fn geometric(log_ratio: f64, bands: usize) -> Result<Self> {
        if !(log_ratio > 0.0) || !log_ratio.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "log_ratio must be positive, got {log_ratio}"
            )));
        }
        if bands == 0 {
            return Err(Error::InvalidParameter("need at least one band".into()));
        }
        let values = (0..=bands).map(|n| (n as f64 * log_ratio).exp()).collect();
        let log_gaps = vec![log_ratio; bands];
        Ok(CutoffSequence { values, log_gaps, growth: CutoffGrowth::Geometric { log_ratio } })
    }

    /// Default truncation: eight unit-variance bands, `c_n = e^n`.
    pub fn default_geometric() -> Self {
        Self::geometric(1.0, 8).expect("static arguments are valid")
    }

    /// Explicit boundaries; must start at 1 and increase strictly.
    pub fn explicit(values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::InvalidParameter(
                "cutoff sequence needs at least c_0 and c_1".into(),
            ));
        }
        if values[0] != 1.0 {
            return Err(Error::InvalidParameter(format!(
                "cutoff sequence must start at c_0 = 1, got {}",
                values[0]
            )));
        }
        for w in values.windows(2) {
            if !(w[1] > w[0]) || !w[1].is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "cutoff sequence not strictly increasing at {} -> {}",
                    w[0], w[1]
                )));
            }
        }
        let log_gaps = values.windows(2).map(|w| (w[1] / w[0]).ln()).collect();
        Ok(CutoffSequence { values, log_gaps, growth: CutoffGrowth::Explicit })
    }

    pub fn num_bands(&self) -> usize {
        self.log_gaps.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn growth(&self) -> &CutoffGrowth {
        &self.growth
    }

    /// Integration bounds `[c_{n-1}, c_n]` of band `n` (1-based).
    pub fn band_bounds(&self, band: usize) -> Result<(f64, f64)> {
        self.check_band(band)?;
        Ok((self.values[band - 1], self.values[band]))
    }

    /// Diagonal variance `C_n(0) = log(c_n / c_{n-1})`, exact by construction.
    pub fn log_gap(&self, band: usize) -> Result<f64> {
        self.check_band(band)?;
        Ok(self.log_gaps[band - 1])
    }

    fn check_band(&self, band: usize) -> Result<()> {
        if band == 0 || band > self.num_bands() {
            return Err(Error::BandIndexOutOfRange { index: band, max: self.num_bands() });
        }
        Ok(())
    }
}

fn norm(z: [f64; 2]) -> f64 {
    (z[0] * z[0] + z[1] * z[1]).sqrt()
}

/// `log_+(1/sep) = max(log(1/sep), 0)`.
pub fn log_plus_inv(sep: f64) -> f64 {
    (-sep.ln()).max(0.0)
}

/// Seed kernel `k_m(z)`, closed form `m |z| K1(m |z|)`; radial, k_m(0) = 1.
pub fn seed_kernel(z: [f64; 2], cfg: &KernelConfig) -> f64 {
    let x = cfg.mass * norm(z);
    if x == 0.0 {
        return 1.0;
    }
    x * bessel::k1(x)
}

/// Seed kernel by adaptive quadrature of the defining integral.
pub fn seed_kernel_quad(z: [f64; 2], cfg: &KernelConfig) -> Result<f64> {
    let x = cfg.mass * norm(z);
    // integral of exp(-a e^{-u} - b e^u + u) du over the real line, halved
    let a = 0.5 * x * x;
    let b = 0.5;
    if 2.0 * (a * b).sqrt() > 1400.0 {
        return Ok(0.0); // below the double-precision floor
    }
    let u_hi = (1600.0 / b).ln();
    let u_lo = if a > 0.0 { (a / 1600.0).ln().min(-45.0) } else { -45.0 };
    let r = quad::adaptive(
        |u| (-a * (-u).exp() - b * u.exp() + u).exp(),
        u_lo,
        u_hi,
        cfg.quad_rel_tol,
        0.0,
        cfg.quad_max_subdiv,
    )?;
    Ok(0.5 * r.value)
}

/// Massive Green function `G(r)`, closed form `K0(m r)`; infinite on the diagonal.
pub fn massive_green(r: f64, cfg: &KernelConfig) -> f64 {
    if r == 0.0 {
        return f64::INFINITY;
    }
    bessel::k0(cfg.mass * r)
}

/// Massive Green function by adaptive quadrature of the defining integral.
pub fn massive_green_quad(r: f64, cfg: &KernelConfig) -> Result<f64> {
    if r < 0.0 {
        return Err(Error::InvalidParameter(format!("separation must be >= 0, got {r}")));
    }
    if r == 0.0 {
        return Ok(f64::INFINITY);
    }
    let a = 0.5 * r * r;
    let b = 0.5 * cfg.mass * cfg.mass;
    if 2.0 * (a * b).sqrt() > 1400.0 {
        return Ok(0.0);
    }
    let u_hi = (1600.0 / b).ln();
    let u_lo = (a / 1600.0).ln();
    let r = quad::adaptive(
        |u| (-a * (-u).exp() - b * u.exp()).exp(),
        u_lo,
        u_hi,
        cfg.quad_rel_tol,
        0.0,
        cfg.quad_max_subdiv,
    )?;
    Ok(0.5 * r.value)
}

/// Band covariance `C_n(r)`, closed form `K0(m r c_{n-1}) - K0(m r c_n)`;
/// exactly `log(c_n / c_{n-1})` at r = 0.
pub fn band_covariance(
    r: f64,
    band: usize,
    cuts: &CutoffSequence,
    cfg: &KernelConfig,
) -> Result<f64> {
    let (lo, hi) = cuts.band_bounds(band)?;
    if r < 0.0 {
        return Err(Error::InvalidParameter(format!("separation must be >= 0, got {r}")));
    }
    if r == 0.0 {
        return cuts.log_gap(band);
    }
    let v = bessel::k0(cfg.mass * r * lo) - bessel::k0(cfg.mass * r * hi);
    // difference of decreasing positive terms; clamp fp residue on underflow
    Ok(v.max(0.0))
}

/// Band covariance by adaptive quadrature over `[c_{n-1}, c_n]`.
pub fn band_covariance_quad(
    r: f64,
    band: usize,
    cuts: &CutoffSequence,
    cfg: &KernelConfig,
) -> Result<f64> {
    let (lo, hi) = cuts.band_bounds(band)?;
    if r < 0.0 {
        return Err(Error::InvalidParameter(format!("separation must be >= 0, got {r}")));
    }
    let res = quad::adaptive(
        |s| seed_kernel([s * r, 0.0], cfg) / s,
        lo,
        hi,
        cfg.quad_rel_tol,
        0.0,
        cfg.quad_max_subdiv,
    )?;
    Ok(res.value)
}

/// Analytic bound on the truncated tail `int_{c_N}^inf k_m(s r)/s ds`.
///
/// Uses `k_m(z) <= KAPPA exp(-m z / 2)` and `E1(x) <= e^{-x} log(1 + 1/x)`,
/// so the bound is `KAPPA e^{-x} log(1 + 1/x)` with `x = m c_N r / 2`.
pub fn band_tail_bound(r: f64, cuts: &CutoffSequence, cfg: &KernelConfig) -> f64 {
    if r <= 0.0 {
        return f64::INFINITY;
    }
    let c_last = *cuts.values().last().expect("sequence is nonempty");
    let x = 0.5 * cfg.mass * c_last * r;
    KAPPA * (-x).exp() * (1.0 / x).ln_1p()
}

/// Resolvent kernel `r1(r)` of planar Brownian motion at rate 1,
/// closed form `K0(sqrt(2) r) / pi`. Diverges logarithmically as r -> 0.
pub fn resolvent_kernel(r: f64) -> Result<f64> {
    if r == 0.0 {
        return Err(Error::SingularSeparation);
    }
    if !(r > 0.0) {
        return Err(Error::InvalidParameter(format!("separation must be > 0, got {r}")));
    }
    Ok(bessel::k0(std::f64::consts::SQRT_2 * r) / std::f64::consts::PI)
}

/// Resolvent kernel by Laplace-transform quadrature of the heat kernel.
pub fn resolvent_kernel_quad(r: f64, cfg: &KernelConfig) -> Result<f64> {
    if r == 0.0 {
        return Err(Error::SingularSeparation);
    }
    if !(r > 0.0) {
        return Err(Error::InvalidParameter(format!("separation must be > 0, got {r}")));
    }
    let a = 0.5 * r * r;
    let b = 1.0;
    if 2.0 * (a * b).sqrt() > 1400.0 {
        return Ok(0.0);
    }
    let u_hi = (1600.0 / b).ln();
    let u_lo = (a / 1600.0).ln();
    let res = quad::adaptive(
        |u| (-a * (-u).exp() - b * u.exp()).exp(),
        u_lo,
        u_hi,
        cfg.quad_rel_tol,
        0.0,
        cfg.quad_max_subdiv,
    )?;
    Ok(res.value / (2.0 * std::f64::consts::PI))
}

/// Certificate that `r1(r) <= c1 log_+(1/r) + c2` on a set of radii.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LogBoundCertificate {
    pub c1: f64,
    pub c2: f64,
    /// True when the slack is nonnegative at every input radius.
    pub verified: bool,
    pub radii: Vec<f64>,
    /// `c1 log_+(1/r) + c2 - r1(r)` per radius.
    pub slack: Vec<f64>,
}

/// Fit `(c1, c2)` from the resolvent kernel on the given radii and verify the
/// logarithmic bound pointwise.
///
/// `c2` is the supremum of `r1` over radii >= 1 (which the decreasing kernel
/// caps at `r1(1)`); `c1` is the largest required ratio
/// `(r1(r) - c2) / log(1/r)` over radii < 1. The ratio decreases in r, so the
/// fitted `c1` also covers every separation above the smallest input radius.
/// When no radius below 1 is supplied (or all ratios are nonpositive) the
/// slope falls back to the ratio at an internal anchor of 1e-8.
pub fn resolvent_log_bound(radii: &[f64]) -> Result<LogBoundCertificate> {
    if radii.is_empty() {
        return Err(Error::InvalidParameter("radii list is empty".into()));
    }
    for &r in radii {
        if !(r > 0.0) || !r.is_finite() {
            return Err(Error::InvalidParameter(format!("radii must be positive, got {r}")));
        }
    }

    let mut c2 = resolvent_kernel(1.0)?;
    for &r in radii.iter().filter(|&&r| r >= 1.0) {
        c2 = c2.max(resolvent_kernel(r)?);
    }

    let mut c1 = f64::NEG_INFINITY;
    for &r in radii.iter().filter(|&&r| r < 1.0) {
        let ratio = (resolvent_kernel(r)? - c2) / (1.0 / r).ln();
        c1 = c1.max(ratio);
    }
    if !c1.is_finite() || c1 <= 0.0 {
        let anchor = 1e-8;
        c1 = (resolvent_kernel(anchor)? - c2) / (1.0 / anchor).ln();
    }

    let mut slack = Vec::with_capacity(radii.len());
    let mut verified = true;
    for &r in radii {
        let s = c1 * log_plus_inv(r) + c2 - resolvent_kernel(r)?;
        verified &= s >= 0.0;
        slack.push(s);
    }

    Ok(LogBoundCertificate { c1, c2, verified, radii: radii.to_vec(), slack })
}

/// Logarithmically spaced separations, endpoints included.
pub fn separation_log_grid(min: f64, max: f64, count: usize) -> Vec<f64> {
    assert!(min > 0.0 && max > min && count >= 2);
    let (lmin, lmax) = (min.ln(), max.ln());
    (0..count)
        .map(|i| (lmin + (lmax - lmin) * i as f64 / (count - 1) as f64).exp())
        .collect()
}

/// One row of the closed-form vs quadrature comparison.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct GateRow {
    pub r: f64,
    pub seed_rel: f64,
    pub green_rel: f64,
    pub resolvent_rel: f64,
}

/// Result of gating every closed form against its defining integral.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OracleGateReport {
    pub rows: Vec<GateRow>,
    pub max_rel: f64,
}

impl OracleGateReport {
    pub fn passes(&self, threshold: f64) -> bool {
        self.max_rel <= threshold
    }
}

fn rel_err(reference: f64, candidate: f64) -> f64 {
    if reference == 0.0 {
        candidate.abs()
    } else {
        (candidate - reference).abs() / reference.abs()
    }
}

/// Compare the closed forms of `k_m`, `G` and `r1` against adaptive
/// quadrature of the defining integrals on the given radii.
pub fn oracle_gate(cfg: &KernelConfig, radii: &[f64]) -> Result<OracleGateReport> {
    let rows = crate::exec::map_collect(radii.len(), |i| {
        let r = radii[i];
        let seed = rel_err(seed_kernel_quad([r, 0.0], cfg)?, seed_kernel([r, 0.0], cfg));
        let green = rel_err(massive_green_quad(r, cfg)?, massive_green(r, cfg));
        let resolvent = rel_err(resolvent_kernel_quad(r, cfg)?, resolvent_kernel(r)?);
        Ok(GateRow { r, seed_rel: seed, green_rel: green, resolvent_rel: resolvent })
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let max_rel = rows
        .iter()
        .flat_map(|row| [row.seed_rel, row.green_rel, row.resolvent_rel])
        .fold(0.0f64, f64::max);
    Ok(OracleGateReport { rows, max_rel })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn cfg() -> KernelConfig {
        KernelConfig::new(1.0).unwrap()
    }

    #[test]
    fn seed_kernel_is_one_at_zero() {
        let c = cfg();
        assert_eq!(seed_kernel([0.0, 0.0], &c), 1.0);
        let q = seed_kernel_quad([0.0, 0.0], &c).unwrap();
        assert_relative_eq!(q, 1.0, max_relative = 1e-10);
    }

    #[test]
    fn seed_kernel_matches_quadrature_at_unit_argument() {
        // frozen from the quadrature oracle: k_1((1,0)) = K1(1)
        let c = cfg();
        let q = seed_kernel_quad([1.0, 0.0], &c).unwrap();
        assert_relative_eq!(q, 0.601_907_230_197_234_6, max_relative = 1e-9);
        assert_relative_eq!(seed_kernel([1.0, 0.0], &c), q, max_relative = 1e-9);
    }

    #[test]
    fn seed_kernel_is_radial_and_bounded() {
        let c = cfg();
        for &(a, b) in &[(0.3, 0.4), (1.0, 0.0), (5.0, 12.0)] {
            let v1 = seed_kernel([a, b], &c);
            let v2 = seed_kernel([b, a], &c);
            let v3 = seed_kernel([-a, -b], &c);
            assert_eq!(v1, v2);
            assert_eq!(v1, v3);
            assert!(v1 >= 0.0 && v1 <= 1.0);
        }
    }

    #[test]
    fn seed_kernel_exponential_envelope() {
        let c = cfg();
        for &r in separation_log_grid(10.0, 100.0, 25).iter() {
            let v = seed_kernel([r, 0.0], &c);
            assert!(v <= (-0.5 * r).exp(), "envelope fails at m|z| = {r}");
        }
        // the global KAPPA envelope
        for &r in separation_log_grid(1e-3, 100.0, 60).iter() {
            let v = seed_kernel([r, 0.0], &c);
            assert!(v <= KAPPA * (-0.5 * r).exp());
            assert!(v <= 1.0);
        }
    }

    #[test]
    fn green_diagonal_and_monotonicity() {
        let c = cfg();
        assert!(massive_green(0.0, &c).is_infinite());
        assert!(massive_green_quad(0.0, &c).unwrap().is_infinite());
        let grid = separation_log_grid(1e-3, 10.0, 50);
        for w in grid.windows(2) {
            assert!(massive_green(w[0], &c) > massive_green(w[1], &c));
        }
    }

    #[test]
    fn green_closed_form_matches_quadrature() {
        let c = cfg();
        for &r in &[1e-3, 0.1, 1.0, 5.0] {
            let q = massive_green_quad(r, &c).unwrap();
            assert_relative_eq!(massive_green(r, &c), q, max_relative = 1e-9);
        }
        // frozen from the quadrature oracle: G(1) = K0(1)
        assert_relative_eq!(
            massive_green_quad(1.0, &c).unwrap(),
            0.421_024_438_240_708_2,
            max_relative = 1e-9
        );
    }

    #[test]
    fn band_covariance_diagonal_is_exact() {
        let c = cfg();
        let cuts = CutoffSequence::geometric(1.0, 6).unwrap();
        for band in 1..=6 {
            assert_eq!(band_covariance(0.0, band, &cuts, &c).unwrap(), 1.0);
        }
    }

    #[test]
    fn band_covariance_bounds_and_range_errors() {
        let c = cfg();
        let cuts = CutoffSequence::geometric(1.0, 4).unwrap();
        assert!(matches!(
            band_covariance(0.5, 0, &cuts, &c),
            Err(Error::BandIndexOutOfRange { .. })
        ));
        assert!(matches!(
            band_covariance(0.5, 5, &cuts, &c),
            Err(Error::BandIndexOutOfRange { .. })
        ));
        for band in 1..=4 {
            for &r in separation_log_grid(1e-3, 10.0, 20).iter() {
                let v = band_covariance(r, band, &cuts, &c).unwrap();
                let v0 = cuts.log_gap(band).unwrap();
                assert!(v >= 0.0 && v <= v0, "band {band} r {r}: {v} not in [0, {v0}]");
            }
        }
    }

    #[test]
    fn band_covariance_quadrature_agreement() {
        let c = cfg();
        let cuts = CutoffSequence::geometric(1.0, 4).unwrap();
        for band in 1..=4 {
            for &r in &[0.0, 0.01, 0.3, 2.0] {
                let cf = band_covariance(r, band, &cuts, &c).unwrap();
                let q = band_covariance_quad(r, band, &cuts, &c).unwrap();
                assert_relative_eq!(cf, q, max_relative = 1e-8, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn band_partial_sums_increase_to_green_within_tail_bound() {
        let c = cfg();
        let cuts = CutoffSequence::geometric(1.0, 8).unwrap();
        for &r in &[0.01, 0.1, 1.0] {
            let g = massive_green(r, &c);
            let mut partial = 0.0;
            for band in 1..=8 {
                let next = partial + band_covariance(r, band, &cuts, &c).unwrap();
                assert!(next >= partial);
                assert!(next <= g * (1.0 + 1e-12));
                partial = next;
            }
            let gap = g - partial;
            let tail = band_tail_bound(r, &cuts, &c);
            assert!(gap >= -1e-12 * g);
            assert!(gap <= tail, "r = {r}: gap {gap} exceeds tail bound {tail}");
        }
    }

    #[test]
    fn resolvent_kernel_value_and_errors() {
        let c = cfg();
        assert!(matches!(resolvent_kernel(0.0), Err(Error::SingularSeparation)));
        assert!(resolvent_kernel(-1.0).is_err());
        // frozen from the Laplace-transform quadrature oracle:
        // r1(1) = K0(sqrt(2)) / pi
        let q = resolvent_kernel_quad(1.0, &c).unwrap();
        assert_relative_eq!(q, 0.076_121_329_877_958_97, max_relative = 1e-9);
        assert_relative_eq!(resolvent_kernel(1.0).unwrap(), q, max_relative = 1e-9);
        // decreasing, with exponential envelope for large separations
        let grid = separation_log_grid(1e-4, 30.0, 60);
        for w in grid.windows(2) {
            assert!(resolvent_kernel(w[0]).unwrap() > resolvent_kernel(w[1]).unwrap());
        }
        for &r in separation_log_grid(10.0, 30.0, 10).iter() {
            assert!(resolvent_kernel(r).unwrap() <= (-r).exp());
        }
    }

    #[test]
    fn log_bound_certificate_on_log_grid() {
        let radii = separation_log_grid(1e-6, 10.0, 120);
        let cert = resolvent_log_bound(&radii).unwrap();
        assert!(cert.verified);
        assert!(cert.c1 > 0.0 && cert.c1.is_finite());
        assert!(cert.c2 > 0.0 && cert.c2.is_finite());
        assert!(cert.slack.iter().all(|&s| s >= 0.0));
    }

    #[test]
    fn log_bound_at_unit_radius_reduces_to_c2() {
        let cert = resolvent_log_bound(&[1.0]).unwrap();
        assert!(cert.verified);
        // log_+(1/1) = 0, so the bound is r1(1) <= c2
        assert!(cert.c2 >= resolvent_kernel(1.0).unwrap());
        assert!(cert.c1 > 0.0);
    }

    #[test]
    fn oracle_gate_passes_at_1e8() {
        let c = cfg();
        let radii = separation_log_grid(1e-3, 10.0, 40);
        let report = oracle_gate(&c, &radii).unwrap();
        assert!(report.passes(1e-8), "max rel err {}", report.max_rel);
    }

    #[test]
    fn config_validation() {
        assert!(KernelConfig::new(0.0).is_err());
        assert!(KernelConfig::new(-1.0).is_err());
        assert!(KernelConfig::with_quad(1.0, 1e-3, 100).is_err());
        assert!(KernelConfig::with_quad(1.0, 0.0, 100).is_err());
        assert!(CutoffSequence::explicit(vec![1.0, 0.5]).is_err());
        assert!(CutoffSequence::explicit(vec![2.0, 3.0]).is_err());
        assert!(CutoffSequence::geometric(0.0, 3).is_err());
    }

    #[test]
    fn covariance_matrices_are_positive_semidefinite() {
        use nalgebra::DMatrix;
        let c = cfg();
        let cuts = CutoffSequence::geometric(1.0, 4).unwrap();
        // 8x8 grid of points in the unit square
        let pts: Vec<[f64; 2]> = (0..8)
            .flat_map(|i| (0..8).map(move |j| [i as f64 / 8.0, j as f64 / 8.0]))
            .collect();
        for band in 1..=4 {
            let n = pts.len();
            let mat = DMatrix::from_fn(n, n, |p, q| {
                let d = ((pts[p][0] - pts[q][0]).powi(2) + (pts[p][1] - pts[q][1]).powi(2)).sqrt();
                band_covariance(d, band, &cuts, &c).unwrap()
            });
            let trace = mat.trace();
            let eigs = mat.symmetric_eigenvalues();
            let min_eig = eigs.iter().cloned().fold(f64::INFINITY, f64::min);
            assert!(
                min_eig >= -1e-8 * (trace / n as f64),
                "band {band}: min eigenvalue {min_eig}"
            );
        }
    }
}
