//! Adaptive Gauss-Kronrod quadrature.
//!
//! The 15-point Kronrod extension of the 7-point Gauss rule, with the usual
//! QUADPACK error rescaling, driven by a worst-interval-first subdivision
//! loop. This is the workhorse behind the defining-integral route of the
//! kernel evaluations and behind the test oracles.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

/// Kronrod abscissae for the interval [-1, 1], descending; XGK[7] = 0.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_33,
    0.949_107_912_342_758_524_526_189_684_047_85,
    0.864_864_423_359_769_072_789_712_788_640_93,
    0.741_531_185_599_394_439_863_864_773_280_79,
    0.586_087_235_467_691_130_294_144_838_258_73,
    0.405_845_151_377_397_166_906_606_412_076_96,
    0.207_784_955_007_898_467_600_689_403_773_24,
    0.0,
];

/// Kronrod weights matching `XGK`.
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_97,
    0.063_092_092_629_978_553_290_700_663_189_21,
    0.104_790_010_322_250_183_839_876_322_541_52,
    0.140_653_259_715_525_918_745_189_590_510_24,
    0.169_004_726_639_267_902_826_583_426_598_55,
    0.190_350_578_064_785_409_913_256_402_421_01,
    0.204_432_940_075_298_892_414_161_999_234_65,
    0.209_482_141_084_727_828_012_999_174_891_71,
];

/// 7-point Gauss weights; WG[0..3] pair with XGK[1], XGK[3], XGK[5], WG[3] is the centre.
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_08,
    0.279_705_391_489_276_667_901_467_771_423_78,
    0.381_830_050_505_118_944_950_369_775_488_98,
    0.417_959_183_673_469_387_755_102_040_816_33,
];

/// Outcome of an adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: f64,
    pub abs_error: f64,
    pub subdivisions: u32,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn rescale_error(err: f64, resabs: f64, resasc: f64) -> f64 {
    let mut scaled = err.abs();
    if resasc != 0.0 && scaled != 0.0 {
        let scale = (200.0 * scaled / resasc).powf(1.5);
        scaled = if scale < 1.0 { resasc * scale } else { resasc };
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        scaled = scaled.max(50.0 * f64::EPSILON * resabs);
    }
    scaled
}

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Panel {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);

    let mut fv = [0.0_f64; 15];
    fv[14] = fc;
    let mut gauss = WG[3] * fc;
    let mut kronrod = WGK[7] * fc;
    let mut resabs = kronrod.abs();

    for j in 0..3 {
        let x = half * XGK[2 * j + 1];
        let f1 = f(center - x);
        let f2 = f(center + x);
        fv[2 * j + 1] = f1;
        fv[8 + 2 * j] = f2;
        gauss += WG[j] * (f1 + f2);
        kronrod += WGK[2 * j + 1] * (f1 + f2);
        resabs += WGK[2 * j + 1] * (f1.abs() + f2.abs());
    }
    for j in 0..4 {
        let x = half * XGK[2 * j];
        let f1 = f(center - x);
        let f2 = f(center + x);
        fv[2 * j] = f1;
        fv[7 + 2 * j] = f2;
        kronrod += WGK[2 * j] * (f1 + f2);
        resabs += WGK[2 * j] * (f1.abs() + f2.abs());
    }

    let mean = 0.5 * kronrod;
    let mut resasc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        resasc += WGK[j] * ((fv[j] - mean).abs() + (fv[7 + j] - mean).abs());
    }

    let value = kronrod * half;
    let error = rescale_error((kronrod - gauss) * half, resabs * half.abs(), resasc * half.abs());
    Panel { a, b, value, error }
}

/// Integrate `f` over `[a, b]`, subdividing the worst panel until the summed
/// error estimate drops below `max(abs_tol, rel_tol * |integral|)`.
pub fn adaptive<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_tol: f64,
    max_subdiv: u32,
) -> Result<QuadResult> {
    if !(a < b) {
        if a == b {
            return Ok(QuadResult { value: 0.0, abs_error: 0.0, subdivisions: 0 });
        }
        return Err(Error::InvalidParameter(format!(
            "quadrature interval [{a}, {b}] is inverted"
        )));
    }

    let mut heap = BinaryHeap::new();
    let first = gk15(&f, a, b);
    let mut total_value = first.value;
    let mut total_error = first.error;
    heap.push(first);

    let mut subdivisions = 0u32;
    loop {
        let tol = abs_tol.max(rel_tol * total_value.abs());
        if total_error <= tol {
            return Ok(QuadResult { value: total_value, abs_error: total_error, subdivisions });
        }
        if subdivisions >= max_subdiv {
            let achieved = if total_value == 0.0 {
                total_error
            } else {
                total_error / total_value.abs()
            };
            return Err(Error::QuadratureNonConvergence {
                achieved,
                target: rel_tol,
                subdivisions,
            });
        }
        let worst = heap.pop().expect("heap holds at least one panel");
        let mid = 0.5 * (worst.a + worst.b);
        if !(worst.a < mid && mid < worst.b) {
            // Panel is at floating point resolution; nothing more to gain.
            heap.push(worst);
            let achieved = if total_value == 0.0 {
                total_error
            } else {
                total_error / total_value.abs()
            };
            return Err(Error::QuadratureNonConvergence {
                achieved,
                target: rel_tol,
                subdivisions,
            });
        }
        let left = gk15(&f, worst.a, mid);
        let right = gk15(&f, mid, worst.b);
        total_value += left.value + right.value - worst.value;
        total_error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        subdivisions += 1;
    }
}

/// Iterated 2D integration of `f` over the rectangle `[x0,x1] x [y0,y1]`.
///
/// The inner (y) integral runs at a tenth of the requested tolerance so the
/// outer pass sees a smooth integrand. Intended for smooth integrands; route
/// singular parts through analytic corrections before calling this.
pub fn tensor2d<F: Fn(f64, f64) -> f64>(
    f: F,
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
    rel_tol: f64,
    max_subdiv: u32,
) -> Result<QuadResult> {
    let inner_failed = std::cell::Cell::new(false);
    let outer = adaptive(
        |x| {
            match adaptive(|y| f(x, y), y0, y1, rel_tol * 0.1, 0.0, max_subdiv) {
                Ok(r) => r.value,
                Err(_) => {
                    inner_failed.set(true);
                    f64::NAN
                }
            }
        },
        x0,
        x1,
        rel_tol,
        0.0,
        max_subdiv,
    )?;
    if inner_failed.get() || outer.value.is_nan() {
        return Err(Error::QuadratureNonConvergence {
            achieved: f64::NAN,
            target: rel_tol,
            subdivisions: outer.subdivisions,
        });
    }
    Ok(outer)
}

/// 8-point Gauss-Legendre abscissae on [-1, 1] (positive half; mirror for the rest).
pub const GL8_NODES: [f64; 4] = [
    0.183_434_642_495_649_805,
    0.525_532_409_916_328_986,
    0.796_666_477_413_626_740,
    0.960_289_856_497_536_232,
];

/// Weights matching `GL8_NODES`.
pub const GL8_WEIGHTS: [f64; 4] = [
    0.362_683_783_378_361_983,
    0.313_706_645_877_887_287,
    0.222_381_034_453_374_471,
    0.101_228_536_290_376_259,
];

/// The full 8 nodes/weights of the GL8 rule on [-1, 1], ascending.
pub fn gl8() -> ([f64; 8], [f64; 8]) {
    let mut nodes = [0.0; 8];
    let mut weights = [0.0; 8];
    for i in 0..4 {
        nodes[i] = -GL8_NODES[3 - i];
        nodes[4 + i] = GL8_NODES[i];
        weights[i] = GL8_WEIGHTS[3 - i];
        weights[4 + i] = GL8_WEIGHTS[i];
    }
    (nodes, weights)
}
