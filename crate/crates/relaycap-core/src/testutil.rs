//! Independent numerical oracles for unit tests.
//!
//! Double-exponential and trapezoid rules, deliberately unrelated to the
//! Gauss-Kronrod integrator the library uses.

use core::f64::consts::FRAC_PI_2;

pub fn rel_err(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs().max(1e-300)
}

/// Trapezoid rule for an even, analytic integrand on `[0, ∞)` decaying
/// double-exponentially (geometric convergence in the step).
pub fn trapezoid_decaying<F: Fn(f64) -> f64>(f: F, h0: f64) -> f64 {
    let sweep = |h: f64| {
        let mut s = 0.5 * f(0.0);
        let mut k = 1.0;
        loop {
            let v = f(k * h);
            s += v;
            if v.abs() <= 1e-19 * s.abs() || k * h > 60.0 {
                break;
            }
            k += 1.0;
        }
        s * h
    };
    let mut h = 0.5;
    let mut prev = sweep(h);
    while h > h0 {
        h *= 0.5;
        let cur = sweep(h);
        if (cur - prev).abs() <= 1e-15 * cur.abs() {
            return cur;
        }
        prev = cur;
    }
    prev
}

/// Tanh-sinh quadrature on `[a, b]`; tolerates integrable endpoint singularities.
pub fn tanh_sinh<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> f64 {
    let d = 0.5 * (b - a);
    let level = |h: f64, odd_only: bool| {
        let mut s = 0.0;
        let mut k: i64 = if odd_only { 1 } else { 0 };
        loop {
            let t = k as f64 * h;
            let u = FRAC_PI_2 * libm::sinh(t);
            let e = libm::exp(-2.0 * u.abs());
            // distance from the nearer endpoint, computed without cancellation
            let gap = 2.0 * d * e / (1.0 + e);
            let ch = libm::cosh(u);
            let w = d * FRAC_PI_2 * libm::cosh(t) / (ch * ch);
            if gap <= 0.0 || !w.is_finite() || w < 1e-300 {
                break;
            }
            let term = if k == 0 {
                w * f(a + d)
            } else {
                w * (f(a + gap) + f(b - gap))
            };
            s += term;
            if k > 0 && term.abs() < 1e-20 * s.abs() {
                break;
            }
            k += if odd_only { 2 } else { 1 };
        }
        s
    };
    let mut h = 0.5;
    let mut sum = level(h, false);
    let mut prev = sum * h;
    for _ in 0..10 {
        h *= 0.5;
        sum += level(h, true);
        let cur = sum * h;
        if (cur - prev).abs() <= 1e-14 * cur.abs() {
            return cur;
        }
        prev = cur;
    }
    prev
}

/// Exp-sinh quadrature on `[a, ∞)` for exponentially decaying integrands.
pub fn exp_sinh<F: Fn(f64) -> f64>(f: F, a: f64) -> f64 {
    let level = |h: f64, odd_only: bool| {
        let mut s = 0.0;
        let step: i64 = if odd_only { 2 } else { 1 };
        let start: i64 = if odd_only { 1 } else { 0 };
        // positive t
        let mut k = start;
        loop {
            let t = k as f64 * h;
            let e = libm::exp(FRAC_PI_2 * libm::sinh(t));
            let w = FRAC_PI_2 * libm::cosh(t) * e;
            let v = f(a + e);
            let term = w * v;
            if !term.is_finite() || e > 1e6 {
                break;
            }
            s += term;
            if k > 3 && term.abs() < 1e-20 * s.abs() {
                break;
            }
            k += step;
        }
        // negative t
        let mut k: i64 = -1;
        loop {
            let t = k as f64 * h;
            let e = libm::exp(FRAC_PI_2 * libm::sinh(t));
            let w = FRAC_PI_2 * libm::cosh(t) * e;
            if e < 1e-300 {
                break;
            }
            let term = w * f(a + e);
            s += term;
            if term.abs() < 1e-20 * s.abs() {
                break;
            }
            k -= step;
        }
        s
    };
    let mut h = 0.5;
    let mut sum = level(h, false);
    let mut prev = sum * h;
    for _ in 0..10 {
        h *= 0.5;
        sum += level(h, true);
        let cur = sum * h;
        if (cur - prev).abs() <= 1e-14 * cur.abs() {
            return cur;
        }
        prev = cur;
    }
    prev
}

#[test]
fn oracles_self_check() {
    let v = tanh_sinh(libm::log, 0.0, 1.0);
    assert!((v + 1.0).abs() < 1e-13);
    let v = exp_sinh(|x| libm::exp(-x) * x * x, 0.0);
    assert!((v - 2.0).abs() < 1e-13);
    let v = trapezoid_decaying(|t| libm::exp(-t * t), 1e-3);
    assert!((v - 0.5 * libm::sqrt(core::f64::consts::PI)).abs() < 1e-14);
}
