//! Ball-mass scaling of a chaos measure around a point.
//!
//! Reports masses of discretized balls and finite-difference log-log slopes.
//! No target exponent is asserted; the slopes are observables.

use serde::{Deserialize, Serialize};

use super::ChaosMeasure;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct BallMassPoint {
    pub radius: f64,
    pub mass: f64,
    /// Log-log slope towards the next (smaller) radius; `None` on the last entry.
    pub slope: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BallScalingReport {
    pub center: [f64; 2],
    pub points: Vec<BallMassPoint>,
}

/// Masses of the balls `B(center, r)` for a strictly decreasing radius list.
///
/// A ball is discretized as the union of cells whose centres lie within `r`.
/// Radii must stay at or above two cell widths and the largest ball must fit
/// inside the window. Implemented by sorting cells by distance once and
/// prefix-summing; tests cross-check against direct per-radius summation.
pub fn ball_mass_scaling(
    measure: &ChaosMeasure,
    center: [f64; 2],
    radii: &[f64],
) -> Result<BallScalingReport> {
    if radii.is_empty() {
        return Err(Error::InvalidParameter("radii list is empty".into()));
    }
    for w in radii.windows(2) {
        if !(w[1] < w[0]) {
            return Err(Error::InvalidParameter(format!(
                "radii must decrease strictly, got {} then {}",
                w[0], w[1]
            )));
        }
    }
    let grid = measure.grid();
    let min_radius = 2.0 * grid.cell_width();
    let smallest = *radii.last().expect("nonempty");
    if smallest < min_radius {
        return Err(Error::RadiusBelowResolution { radius: smallest, min_radius });
    }
    let largest = radii[0];
    let window = grid.window_rect();
    let inside = center[0] - largest >= window.x0
        && center[0] + largest <= window.x1
        && center[1] - largest >= window.y0
        && center[1] + largest <= window.y1;
    if !inside {
        return Err(Error::BallOutsideWindow { radius: largest, x: center[0], y: center[1] });
    }

    // Fast path: cells ordered by distance from the centre, masses prefix-summed.
    let mut by_distance: Vec<(f64, usize)> = (0..grid.num_cells())
        .map(|i| {
            let c = grid.center_of(i);
            let d = ((c[0] - center[0]).powi(2) + (c[1] - center[1]).powi(2)).sqrt();
            (d, i)
        })
        .collect();
    by_distance.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let mut prefix = Vec::with_capacity(by_distance.len());
    let mut acc = 0.0;
    for &(_, idx) in &by_distance {
        acc += measure.cell_masses()[idx];
        prefix.push(acc);
    }

    let masses: Vec<f64> = radii
        .iter()
        .map(|&r| {
            let count = by_distance.partition_point(|&(d, _)| d <= r);
            if count == 0 {
                0.0
            } else {
                prefix[count - 1]
            }
        })
        .collect();

    let mut points = Vec::with_capacity(radii.len());
    for i in 0..radii.len() {
        let slope = if i + 1 < radii.len() && masses[i] > 0.0 && masses[i + 1] > 0.0 {
            Some((masses[i].ln() - masses[i + 1].ln()) / (radii[i].ln() - radii[i + 1].ln()))
        } else {
            None
        };
        points.push(BallMassPoint { radius: radii[i], mass: masses[i], slope });
    }
    Ok(BallScalingReport { center, points })
}
