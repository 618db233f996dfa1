//! Modified Bessel functions of the second kind, integer order.

use super::gamma::EULER_GAMMA;
use crate::{Error, Result};

const EPS: f64 = 1e-16;
const MAX_ITER: usize = 10_000;

/// `(e^x K_0(x), e^x K_1(x))` for `x > 0`.
pub fn k01_scaled(x: f64) -> Result<(f64, f64)> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain("bessel K requires x > 0"));
    }
    if x <= 2.0 {
        let (k0, k1) = k01_series(x);
        let ex = libm::exp(x);
        Ok((k0 * ex, k1 * ex))
    } else {
        k01_steed(x)
    }
}

// Power series (A&S 9.6.13 / 9.6.11 with n = 1).
fn k01_series(x: f64) -> (f64, f64) {
    let y = 0.25 * x * x;
    let lnh = libm::log(0.5 * x);

    // K0 = Σ y^k/(k!)^2 (ψ(k+1) - ln(x/2))
    // K1 = 1/x + ln(x/2) I1 - (x/4) Σ y^k/(k!(k+1)!) (ψ(k+1) + ψ(k+2))
    let mut t0 = 1.0; // y^k/(k!)^2
    let mut t1 = 1.0; // y^k/(k!(k+1)!)
    let mut psi = -EULER_GAMMA; // ψ(k+1)
    let mut k0 = psi - lnh;
    let mut i1 = 1.0;
    let mut s1 = psi + (psi + 1.0);
    let mut k = 0.0;
    loop {
        k += 1.0;
        t0 *= y / (k * k);
        t1 *= y / (k * (k + 1.0));
        psi += 1.0 / k;
        let d0 = t0 * (psi - lnh);
        let d1 = t1 * (2.0 * psi + 1.0 / (k + 1.0));
        k0 += d0;
        i1 += t1;
        s1 += d1;
        if d0.abs() < EPS * k0.abs() && d1.abs() < EPS * s1.abs() {
            break;
        }
    }
    let i1 = 0.5 * x * i1;
    let k1 = 1.0 / x + lnh * i1 - 0.25 * x * s1;
    (k0, k1)
}

// Steed's continued fraction (Temme's CF2) for order 0 and its neighbour.
fn k01_steed(x: f64) -> Result<(f64, f64)> {
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut h = d;
    let mut delh = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let a1 = 0.25;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    let mut converged = false;
    for i in 2..MAX_ITER {
        let fi = i as f64;
        a -= 2.0 * (fi - 1.0);
        c = -a * c / fi;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh *= b * d - 1.0;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < EPS {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence("bessel K continued fraction"));
    }
    h *= a1;
    let k0 = libm::sqrt(core::f64::consts::PI / (2.0 * x)) / s;
    let k1 = k0 * (x + 0.5 - h) / x;
    Ok((k0, k1))
}

/// `e^x K_ν(x)` for integer `ν ≥ 0`, via upward recurrence from orders 0, 1.
pub fn bessel_k_scaled(nu: u32, x: f64) -> Result<f64> {
    let (mut km, mut k) = k01_scaled(x)?;
    if nu == 0 {
        return Ok(km);
    }
    for j in 1..nu {
        let next = km + 2.0 * f64::from(j) / x * k;
        km = k;
        k = next;
    }
    Ok(k)
}

/// Fills `out[ν] = ln K_ν(x)` for `ν = 0..out.len()`.
///
/// Works through the ratios `r_ν = K_ν / K_{ν-1}`, which obey
/// `r_{ν+1} = 1/r_ν + 2ν/x`, so neither overflow at small `x` and high order
/// nor underflow at large `x` can occur.
pub fn ln_bessel_k_orders(x: f64, out: &mut [f64]) -> Result<()> {
    if out.is_empty() {
        return Ok(());
    }
    let (k0, k1) = k01_scaled(x)?;
    out[0] = libm::log(k0) - x;
    if out.len() == 1 {
        return Ok(());
    }
    let mut r = k1 / k0;
    out[1] = out[0] + libm::log(r);
    for nu in 2..out.len() {
        r = 1.0 / r + 2.0 * (nu - 1) as f64 / x;
        out[nu] = out[nu - 1] + libm::log(r);
    }
    Ok(())
}
