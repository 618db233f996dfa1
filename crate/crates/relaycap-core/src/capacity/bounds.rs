use core::f64::consts::LN_2;

use super::{CapacityPoint, Method};
use crate::eigenstats::{
    expected_det_rayleigh_product, expected_det_scaled, expected_logdet,
    expected_logdet_rayleigh_product, SystemConfig,
};
use crate::specfun::{digamma, expint_scaled, g_sum};
use crate::{Error, Result};

fn half_log2_scaled(x: crate::LogScaledReal) -> f64 {
    0.5 * x.log_magnitude / LN_2
}

/// `C_U = ½ log2 E det(I + (ρa/n_s) H̃₁† L H̃₁)`.
pub fn upper_bound(cfg: &SystemConfig) -> Result<CapacityPoint> {
    if cfg.rho == 0.0 {
        return Ok(CapacityPoint::analytic(0.0, 0.0, Method::Upper));
    }
    let a = cfg.a();
    let det = expected_det_scaled(cfg.dims(), a, cfg.rho * a / f64::from(cfg.n_s))?;
    Ok(CapacityPoint::analytic(
        cfg.rho,
        half_log2_scaled(det),
        Method::Upper,
    ))
}

fn check_nr1(n_s: u32, n_d: u32, alpha: f64, rho: f64) -> Result<()> {
    if n_s == 0 || n_d == 0 || !(alpha > 0.0) || !(rho >= 0.0) || !rho.is_finite() {
        return Err(Error::Domain("need n_s, n_d >= 1, alpha > 0, rho >= 0"));
    }
    Ok(())
}

/// Single relay antenna: `½ log2(1 + ρ n_d e^x E_{n_d+1}(x))`, `x = (1+ρ)/α`.
pub fn upper_bound_nr1(n_s: u32, n_d: u32, alpha: f64, rho: f64) -> Result<CapacityPoint> {
    check_nr1(n_s, n_d, alpha, rho)?;
    let x = (1.0 + rho) / alpha;
    let v = 0.5 * libm::log1p(rho * f64::from(n_d) * expint_scaled(n_d + 1, x)?) / LN_2;
    Ok(CapacityPoint::analytic(rho, v, Method::Upper))
}

/// `ρ → ∞` at fixed `α`: `½ log2(𝒦 det Ξ̃)`.
pub fn upper_bound_highsnr(cfg: &SystemConfig) -> Result<CapacityPoint> {
    let c = cfg.alpha / f64::from(cfg.n_s * cfg.n_r);
    let det = expected_det_rayleigh_product(cfg.dims(), c)?;
    Ok(CapacityPoint::analytic(
        f64::INFINITY,
        half_log2_scaled(det),
        Method::Upper,
    ))
}

/// `(s/2) log2(1 + k exp(E ln det Φ / s))`.
fn lower_from_logdet(s: u32, k: f64, elogdet: f64) -> f64 {
    let s = f64::from(s);
    0.5 * s * libm::log1p(k * libm::exp(elogdet / s)) / LN_2
}

/// `C_L = (s/2) log2(1 + (ρa/n_s) exp(E ln det Φ / s))`.
pub fn lower_bound(cfg: &SystemConfig) -> Result<CapacityPoint> {
    if cfg.rho == 0.0 {
        return Ok(CapacityPoint::analytic(0.0, 0.0, Method::Lower));
    }
    let k = cfg.rho * cfg.a() / f64::from(cfg.n_s);
    let v = lower_from_logdet(cfg.s(), k, expected_logdet(cfg)?);
    Ok(CapacityPoint::analytic(cfg.rho, v, Method::Lower))
}

/// Single relay antenna:
/// `½ log2(1 + ρα/(n_s(1+ρ)) exp(ψ(n_s) + ψ(n_d) - Σ_{l<n_d} g_l((1+ρ)/α)))`.
pub fn lower_bound_nr1(n_s: u32, n_d: u32, alpha: f64, rho: f64) -> Result<CapacityPoint> {
    check_nr1(n_s, n_d, alpha, rho)?;
    let x = (1.0 + rho) / alpha;
    let e = digamma(f64::from(n_s))? + digamma(f64::from(n_d))? - g_sum(n_d, x)?;
    let k = rho * alpha / (f64::from(n_s) * (1.0 + rho));
    Ok(CapacityPoint::analytic(
        rho,
        lower_from_logdet(1, k, e),
        Method::Lower,
    ))
}

/// `ρ → ∞` at fixed `α`: `(s/2) log2(1 + (α/(n_r n_s)) exp((𝒦/s) Σ_k det W̃_k))`.
pub fn lower_bound_highsnr(cfg: &SystemConfig) -> Result<CapacityPoint> {
    let k = cfg.alpha / f64::from(cfg.n_s * cfg.n_r);
    let v = lower_from_logdet(cfg.s(), k, expected_logdet_rayleigh_product(cfg.dims())?);
    Ok(CapacityPoint::analytic(f64::INFINITY, v, Method::Lower))
}
