use crate::{Error, Result};

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// `ln Γ(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain("ln_gamma requires x > 0"));
    }
    Ok(libm::lgamma_r(x).0)
}

/// `ln n!`, exact up to rounding for n ≤ 170.
pub fn ln_factorial(n: u32) -> f64 {
    if n < 2 {
        return 0.0;
    }
    if n <= 30 {
        let mut f = 1.0f64;
        for k in 2..=n {
            f *= f64::from(k);
        }
        return libm::log(f);
    }
    libm::lgamma_r(f64::from(n) + 1.0).0
}

/// `ln C(n, k)`; `-inf` when `k > n`.
pub fn ln_binomial(n: u32, k: u32) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

/// Digamma function `ψ(x)` for `x > 0`.
pub fn digamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain("digamma requires x > 0"));
    }
    if x == libm::floor(x) && x <= 64.0 {
        // harmonic sum is exact enough and cheaper
        let n = x as u32;
        let mut h = 0.0;
        for k in (1..n).rev() {
            h += 1.0 / f64::from(k);
        }
        return Ok(h - EULER_GAMMA);
    }
    let mut acc = 0.0;
    let mut z = x;
    while z < 10.0 {
        acc -= 1.0 / z;
        z += 1.0;
    }
    let f = 1.0 / (z * z);
    // Bernoulli tail: -Σ B_{2k} / (2k z^{2k})
    let tail = f
        * (-1.0 / 12.0
            + f * (1.0 / 120.0
                + f * (-1.0 / 252.0
                    + f * (1.0 / 240.0
                        + f * (-1.0 / 132.0 + f * (691.0 / 32760.0 + f * (-1.0 / 12.0)))))));
    Ok(acc + libm::log(z) - 0.5 / z + tail)
}
