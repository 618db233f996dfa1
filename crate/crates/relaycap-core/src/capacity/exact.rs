use core::f64::consts::LN_2;

use super::{CapacityPoint, Method, QuadratureSpec, Transform};
use crate::eigenstats::{rayleigh_product_pdf, unordered_pdf, BesselTermSeries, SystemConfig};
use crate::quad::{integrate_to_infinity, Tolerance};
use crate::{Error, Result};

/// `(s/2) ∫ log2(1 + cλ) f(λ) dλ`.
fn log_moment(series: &BesselTermSeries, s: u32, c: f64, quad: QuadratureSpec) -> Result<f64> {
    quad.validate()?;
    let tol = Tolerance {
        rel: quad.rel_tol,
        abs: quad.abs_tol,
        max_subdivisions: quad.max_subdivisions,
    };
    let r = match quad.transform {
        Transform::SqrtSubstitution => {
            series.integrate_weighted(|lam| libm::log1p(c * lam), tol)?
        }
        Transform::None => {
            let mut failure = None;
            let scale = series.u_scale();
            let r = integrate_to_infinity(
                |lam| {
                    if lam <= 0.0 {
                        return 0.0;
                    }
                    match series.eval(lam) {
                        Ok(f) => f * libm::log1p(c * lam),
                        Err(e) => {
                            failure.get_or_insert(e);
                            0.0
                        }
                    }
                },
                scale * scale,
                tol,
            );
            if let Some(e) = failure {
                return Err(e);
            }
            r?
        }
    };
    let bound = quad.abs_tol.max(quad.rel_tol * r.value.abs());
    if r.error > bound {
        return Err(Error::Quadrature {
            estimate: r.value,
            error: r.error,
        });
    }
    Ok(0.5 * f64::from(s) * r.value / LN_2)
}

/// `C(ρ) = (s/2) ∫ log2(1 + ρaλ/n_s) f_λ(λ) dλ`.
pub fn exact_capacity(cfg: &SystemConfig, quad: QuadratureSpec) -> Result<CapacityPoint> {
    if cfg.rho == 0.0 {
        return Ok(CapacityPoint::analytic(0.0, 0.0, Method::Exact));
    }
    let c = cfg.rho * cfg.a() / f64::from(cfg.n_s);
    let v = log_moment(&unordered_pdf(cfg), cfg.s(), c, quad)?;
    Ok(CapacityPoint::analytic(cfg.rho, v, Method::Exact))
}

/// `lim_{ρ→∞} C(ρ)` at fixed `α`: the density tends to the Rayleigh-product
/// one and `ρa/n_s → α/(n_r n_s)`.
pub fn fixed_alpha_limit(cfg: &SystemConfig) -> Result<CapacityPoint> {
    let series = rayleigh_product_pdf(cfg.n_s, cfg.q(), cfg.p())?;
    let c = cfg.alpha / f64::from(cfg.n_r * cfg.n_s);
    let v = log_moment(&series, cfg.s(), c, QuadratureSpec::default())?;
    Ok(CapacityPoint::analytic(
        f64::INFINITY,
        v,
        Method::FixedAlphaLimit,
    ))
}
