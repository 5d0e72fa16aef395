//! Level-to-level convergence monitoring of the chaos approximation.
//!
//! Measures at consecutive levels built from nested band samples form a
//! martingale in the level: on every probe set both levels estimate the same
//! mean (the Lebesgue volume), and the increments shrink as the level grows
//! for square-integrable couplings.

use serde::{Deserialize, Serialize};

use super::ChaosMeasure;
use crate::error::{Error, Result};
use crate::grid::CellSet;
use crate::stats::{mean_se, MeanSe};

/// Measures at levels n and n+1 sharing the band samples of the first n bands.
#[derive(Debug, Clone)]
pub struct NestedMeasurePair {
    pub coarse: ChaosMeasure,
    pub fine: ChaosMeasure,
}

impl NestedMeasurePair {
    pub fn new(coarse: ChaosMeasure, fine: ChaosMeasure) -> Result<Self> {
        if fine.level() != coarse.level() + 1 {
            return Err(Error::NotNested(format!(
                "levels must be consecutive, got {} and {}",
                coarse.level(),
                fine.level()
            )));
        }
        if coarse.grid() != fine.grid() {
            return Err(Error::NotNested("grids differ".into()));
        }
        if coarse.gamma() != fine.gamma() {
            return Err(Error::NotNested("couplings differ".into()));
        }
        if !fine.seed_record().extends(coarse.seed_record()) {
            return Err(Error::NotNested(
                "seed records differ on the shared bands".into(),
            ));
        }
        Ok(NestedMeasurePair { coarse, fine })
    }
}

/// Per-probe-set statistics across replicas.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProbeReport {
    pub cells: usize,
    pub mass_coarse_mean: f64,
    pub mass_coarse_se: f64,
    pub mass_fine_mean: f64,
    pub mass_fine_se: f64,
    /// Paired increment fine - coarse.
    pub increment_mean: f64,
    pub increment_se: f64,
    pub increment_sd: f64,
    /// |increment mean| in units of its standard error (paired samples carry
    /// the combined uncertainty of both levels).
    pub drift_sigma: f64,
    pub drift_flag: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub level_coarse: usize,
    pub level_fine: usize,
    pub replicas: usize,
    pub probes: Vec<ProbeReport>,
    pub low_replica_warning: bool,
}

fn probe_stats(pairs: &[NestedMeasurePair], probe: &CellSet) -> ProbeReport {
    let coarse: Vec<f64> = pairs.iter().map(|p| p.coarse.mass_in(probe)).collect();
    let fine: Vec<f64> = pairs.iter().map(|p| p.fine.mass_in(probe)).collect();
    let increments: Vec<f64> = coarse.iter().zip(&fine).map(|(c, f)| f - c).collect();
    let (mc, mf, mi): (MeanSe, MeanSe, MeanSe) =
        (mean_se(&coarse), mean_se(&fine), mean_se(&increments));
    let drift_sigma = if mi.se > 0.0 { mi.mean.abs() / mi.se } else { 0.0 };
    ProbeReport {
        cells: probe.len(),
        mass_coarse_mean: mc.mean,
        mass_coarse_se: mc.se,
        mass_fine_mean: mf.mean,
        mass_fine_se: mf.se,
        increment_mean: mi.mean,
        increment_se: mi.se,
        increment_sd: mi.se * (mi.n as f64).sqrt(),
        drift_sigma,
        drift_flag: drift_sigma > 3.0,
    }
}

/// Compare chaos masses across one nesting step on a family of probe sets.
pub fn convergence_diagnostic(
    pairs: &[NestedMeasurePair],
    probes: &[CellSet],
) -> Result<ConvergenceReport> {
    let first = pairs
        .first()
        .ok_or_else(|| Error::InvalidParameter("need at least one replica pair".into()))?;
    let (lo, hi) = (first.coarse.level(), first.fine.level());
    for p in pairs {
        if p.coarse.level() != lo || p.fine.level() != hi {
            return Err(Error::NotNested("replica pairs are at mixed levels".into()));
        }
    }
    let probes = probes
        .iter()
        .map(|probe| probe_stats(pairs, probe))
        .collect();
    Ok(ConvergenceReport {
        level_coarse: lo,
        level_fine: hi,
        replicas: pairs.len(),
        probes,
        low_replica_warning: pairs.len() < 2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gmc::{build_measure, FieldSampler, Gamma};
    use crate::grid::GridSpec;
    use crate::kernels::{CutoffSequence, KernelConfig};

    fn nested_pairs(replicas: usize, lo: usize, gamma: Gamma) -> Vec<NestedMeasurePair> {
        let grid = GridSpec::unit(16).unwrap();
        let cuts = CutoffSequence::geometric(1.0, 6).unwrap();
        let cfg = KernelConfig::new(1.0).unwrap();
        let sampler = FieldSampler::new(grid, cuts, cfg, lo + 1).unwrap();
        (0..replicas)
            .map(|r| {
                let coarse = sampler.sample_stack(r as u64, lo).unwrap();
                let fine = sampler.sample_stack(r as u64, lo + 1).unwrap();
                NestedMeasurePair::new(
                    build_measure(&coarse, gamma).unwrap(),
                    build_measure(&fine, gamma).unwrap(),
                )
                .unwrap()
            })
            .collect()
    }

    #[test]
    fn nested_means_agree_on_probe_sets() {
        let gamma = Gamma::new(0.5).unwrap();
        let pairs = nested_pairs(150, 2, gamma);
        let grid = *pairs[0].coarse.grid();
        let probes = vec![
            CellSet::full(&grid),
            CellSet::from_rect(&grid, &crate::grid::Rect::new(0.25, 0.25, 0.75, 0.75).unwrap()),
        ];
        let report = convergence_diagnostic(&pairs, &probes).unwrap();
        assert!(!report.low_replica_warning);
        for probe in &report.probes {
            assert!(
                !probe.drift_flag,
                "martingale drift {} sigma on {} cells",
                probe.drift_sigma, probe.cells
            );
        }
    }

    #[test]
    fn increment_spread_decreases_with_level() {
        let gamma = Gamma::new(0.5).unwrap();
        let grid = GridSpec::unit(16).unwrap();
        let probes = vec![CellSet::full(&grid)];
        let early = convergence_diagnostic(&nested_pairs(200, 1, gamma), &probes).unwrap();
        let late = convergence_diagnostic(&nested_pairs(200, 4, gamma), &probes).unwrap();
        assert!(
            late.probes[0].increment_sd < early.probes[0].increment_sd,
            "increment sd grew: {} -> {}",
            early.probes[0].increment_sd,
            late.probes[0].increment_sd
        );
    }

    #[test]
    fn single_replica_degenerates_with_warning() {
        let gamma = Gamma::new(0.5).unwrap();
        let pairs = nested_pairs(1, 2, gamma);
        let grid = *pairs[0].coarse.grid();
        let report = convergence_diagnostic(&pairs, &[CellSet::full(&grid)]).unwrap();
        assert!(report.low_replica_warning);
        assert_eq!(report.probes[0].increment_se, 0.0);
        assert!(!report.probes[0].drift_flag);
    }

    #[test]
    fn non_nested_inputs_are_rejected() {
        let grid = GridSpec::unit(16).unwrap();
        let cuts = CutoffSequence::geometric(1.0, 6).unwrap();
        let cfg = KernelConfig::new(1.0).unwrap();
        let gamma = Gamma::new(0.5).unwrap();
        let sampler = FieldSampler::new(grid, cuts, cfg, 3).unwrap();
        let coarse = build_measure(&sampler.sample_stack(1, 2).unwrap(), gamma).unwrap();
        let fine_other_seed = build_measure(&sampler.sample_stack(2, 3).unwrap(), gamma).unwrap();
        assert!(matches!(
            NestedMeasurePair::new(coarse.clone(), fine_other_seed),
            Err(Error::NotNested(_))
        ));
        let fine_same = build_measure(&sampler.sample_stack(1, 3).unwrap(), gamma).unwrap();
        assert!(NestedMeasurePair::new(coarse, fine_same).is_ok());
    }
}
