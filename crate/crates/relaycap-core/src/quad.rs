#![allow(clippy::excessive_precision)]
//! Globally adaptive Gauss-Kronrod (7/15) quadrature.

use alloc::collections::BinaryHeap;
use core::cmp::Ordering;

use crate::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_838_258_730,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
    pub max_subdivisions: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            rel: 1e-10,
            abs: 1e-14,
            max_subdivisions: 2000,
        }
    }
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// One 15-point Kronrod panel with the QUADPACK error heuristic.
fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut gauss = fc * WG[3];
    let mut kron = fc * WGK[7];
    let mut res_abs = kron.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let x = h * XGK[j];
        let f1 = f(c - x);
        let f2 = f(c + x);
        fv1[j] = f1;
        fv2[j] = f2;
        kron += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * kron;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = kron * h;
    let res_abs = res_abs * h.abs();
    let res_asc = res_asc * h.abs();
    let mut err = ((kron - gauss) * h).abs();
    if res_asc != 0.0 && err != 0.0 {
        let r = libm::pow(200.0 * err / res_asc, 1.5);
        err = res_asc * r.min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    (value, err)
}

/// A single 15-point Kronrod panel, for integrands already known to be
/// smooth on `[a, b]`.
pub fn kronrod15<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64) -> f64 {
    gk15(&mut f, a, b).0
}

/// Integrate `f` over `[a, b]`, bisecting the worst panel until the summed
/// error estimate is below `max(tol.abs, tol.rel * |value|)`.
pub fn integrate<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    tol: Tolerance,
) -> Result<QuadResult> {
    let (v0, e0) = gk15(&mut f, a, b);
    let mut evaluations = 15;
    let mut heap = BinaryHeap::new();
    heap.push(Segment {
        a,
        b,
        value: v0,
        error: e0,
    });
    let mut total = v0;
    let mut total_err = e0;
    let mut splits = 0;
    loop {
        if !total.is_finite() || !total_err.is_finite() {
            return Err(Error::Quadrature {
                estimate: total,
                error: total_err,
            });
        }
        if total_err <= tol.abs.max(tol.rel * total.abs()) {
            break;
        }
        if splits >= tol.max_subdivisions {
            return Err(Error::Quadrature {
                estimate: total,
                error: total_err,
            });
        }
        let worst = heap.pop().expect("heap never empty");
        let mid = 0.5 * (worst.a + worst.b);
        let (vl, el) = gk15(&mut f, worst.a, mid);
        let (vr, er) = gk15(&mut f, mid, worst.b);
        evaluations += 30;
        splits += 1;
        total += vl + vr - worst.value;
        total_err += el + er - worst.error;
        heap.push(Segment {
            a: worst.a,
            b: mid,
            value: vl,
            error: el,
        });
        heap.push(Segment {
            a: mid,
            b: worst.b,
            value: vr,
            error: er,
        });
    }
    // re-sum to shed the drift of incremental updates
    let value = heap.iter().map(|s| s.value).sum();
    let error = heap.iter().map(|s| s.error).sum();
    Ok(QuadResult {
        value,
        error,
        evaluations,
    })
}

/// Integrate a decaying `f` over `[0, ∞)` by panels `[0, s], [s, 2s], [2s, 4s], ...`
/// until a panel contributes less than `1e-3 * tol.rel` of the running total
/// twice in a row (and at least to `16 s`).
pub fn integrate_to_infinity<F: FnMut(f64) -> f64>(
    mut f: F,
    scale: f64,
    tol: Tolerance,
) -> Result<QuadResult> {
    let mut lo = 0.0;
    let mut hi = scale;
    let mut value = 0.0;
    let mut error = 0.0;
    let mut evaluations = 0;
    let mut quiet = 0;
    for _ in 0..200 {
        let r = integrate(&mut f, lo, hi, tol)?;
        value += r.value;
        error += r.error;
        evaluations += r.evaluations;
        if r.value.abs() <= 1e-3 * tol.rel * value.abs() && hi >= 16.0 * scale {
            quiet += 1;
            if quiet >= 2 {
                return Ok(QuadResult {
                    value,
                    error,
                    evaluations,
                });
            }
        } else {
            quiet = 0;
        }
        lo = hi;
        hi *= 2.0;
    }
    Err(Error::Quadrature {
        estimate: value,
        error,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exact() {
        let r = integrate(
            |x| x * x * x - 2.0 * x + 1.0,
            0.0,
            2.0,
            Tolerance::default(),
        )
        .unwrap();
        assert!((r.value - 2.0).abs() < 1e-14);
    }

    #[test]
    fn log_singularity() {
        let r = integrate(libm::log, 0.0, 1.0, Tolerance::default()).unwrap();
        assert!((r.value + 1.0).abs() < 1e-10);
    }

    #[test]
    fn semi_infinite_gamma() {
        let r = integrate_to_infinity(|x| x * x * x * libm::exp(-x), 1.0, Tolerance::default())
            .unwrap();
        assert!((r.value - 6.0).abs() < 1e-10);
        let r = integrate_to_infinity(|x| libm::exp(-x / 1e4), 1.0, Tolerance::default()).unwrap();
        assert!((r.value / 1e4 - 1.0).abs() < 1e-9);
    }

    #[test]
    fn budget_exhaustion_reports_estimate() {
        let tol = Tolerance {
            rel: 1e-15,
            abs: 0.0,
            max_subdivisions: 3,
        };
        match integrate(|x| libm::sin(1.0 / x), 1e-6, 1.0, tol) {
            Err(Error::Quadrature { estimate, error }) => {
                assert!(estimate.is_finite() && error > 0.0)
            }
            other => panic!("expected failure, got {other:?}"),
        }
    }
}
