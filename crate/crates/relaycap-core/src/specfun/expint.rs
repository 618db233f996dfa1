//! Generalized exponential integrals `E_n(x)`, scaled by `e^x`.

use super::gamma::EULER_GAMMA;
use crate::{Error, Result};

const EPS: f64 = 1e-16;
const MAX_ITER: usize = 100_000;
const TINY: f64 = 1e-300;

/// `e^x E_n(x)` for `n ≥ 1`, `x > 0`.
///
/// Lentz continued fraction for `x > 1`, power series otherwise.
pub fn expint_scaled(n: u32, x: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("expint order must be >= 1"));
    }
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain("expint requires x > 0"));
    }
    let nf = f64::from(n);
    if x > 1.0 {
        let mut b = x + nf;
        let mut c = 1.0 / TINY;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..MAX_ITER {
            let fi = i as f64;
            let an = -fi * (nf - 1.0 + fi);
            b += 2.0;
            d = 1.0 / (an * d + b);
            c = b + an / c;
            let del = c * d;
            h *= del;
            if (del - 1.0).abs() < EPS {
                return Ok(h);
            }
        }
        return Err(Error::NoConvergence("expint continued fraction"));
    }
    let nm1 = n - 1;
    let mut ans = if nm1 != 0 {
        1.0 / f64::from(nm1)
    } else {
        -libm::log(x) - EULER_GAMMA
    };
    let mut fact = 1.0;
    for i in 1..MAX_ITER {
        let fi = i as f64;
        fact *= -x / fi;
        let del = if i as u32 != nm1 {
            -fact / (fi - f64::from(nm1))
        } else {
            let mut psi = -EULER_GAMMA;
            for ii in 1..=nm1 {
                psi += 1.0 / f64::from(ii);
            }
            fact * (-libm::log(x) + psi)
        };
        ans += del;
        if del.abs() < ans.abs() * EPS {
            return Ok(ans * libm::exp(x));
        }
    }
    Err(Error::NoConvergence("expint series"))
}

/// `g_l(x) = e^x E_{l+1}(x)`.
pub fn g(l: u32, x: f64) -> Result<f64> {
    expint_scaled(l + 1, x)
}

/// `Σ_{l=0}^{n-1} g_l(x)`.
pub fn g_sum(n: u32, x: f64) -> Result<f64> {
    let mut s = 0.0;
    for l in 0..n {
        s += g(l, x)?;
    }
    Ok(s)
}
