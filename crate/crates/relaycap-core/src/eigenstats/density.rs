use alloc::vec::Vec;

use super::config::{Dims, SystemConfig};
use super::series::BesselTermSeries;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::exact::ExactSetup;
use crate::matrixcore::ScaledMatrix;
use crate::specfun::exact::binomial;
use crate::specfun::{coeff_a, ln_factorial, LogScaledReal, SignedSum};
use crate::{Error, Result};

/// Minimum spacing between conditioning eigenvalues.
pub const MIN_BETA_GAP: f64 = 1e-9;

pub(crate) fn check_betas(betas: &[f64]) -> Result<()> {
    if betas.is_empty() {
        return Err(Error::Domain("at least one beta required"));
    }
    if betas.iter().any(|b| !(*b > 0.0) || !b.is_finite()) {
        return Err(Error::Domain("betas must be positive and finite"));
    }
    for w in betas.windows(2) {
        let gap = w[1] - w[0];
        if !(gap >= MIN_BETA_GAP) {
            return Err(Error::DegenerateSpectrum { gap });
        }
    }
    Ok(())
}

/// Unordered density of the `s` nonzero eigenvalues of the cascade
/// `H̃₁† L H̃₁`.
pub fn unordered_pdf(cfg: &SystemConfig) -> BesselTermSeries {
    unordered_pdf_at(cfg.dims(), cfg.a())
}

/// `2𝒦 / (s (n_s-q+k-1)!)`.
fn lead_factor(e: &ExactSetup, k: u32) -> BigRational {
    let d = e.d;
    let two = BigRational::from_integer(BigInt::from(2));
    two * e.k_const()
        / (BigRational::from_integer(BigInt::from(d.s())) * e.fact(d.n_s + k - 1 - d.q))
}

/// [`unordered_pdf`] for explicit dimensions and gain `a > 0`.
///
/// The moment matrix is close to singular once `a` is moderately large, so
/// its cofactors and the series coefficients are formed in exact arithmetic
/// (with `a` read as the exact value of the `f64`).
pub fn unordered_pdf_at(d: Dims, a: f64) -> BesselTermSeries {
    assert!(a > 0.0 && a.is_finite(), "a must be positive");
    let (n_s, q, p, s) = (d.n_s, d.q, d.p, d.s());
    let e = ExactSetup::new(d, a);
    let cof = e.moment_matrix().cofactors();
    let qn = q as usize;
    let mut terms: Vec<(BigRational, u32, u32)> = Vec::new();
    for k in q - s + 1..=q {
        let lead = lead_factor(&e, k);
        // both the power of λ and the Bessel order depend only on (k, i)
        for i in 0..q + n_s {
            let mut c = BigRational::zero();
            for l in 1..=q {
                let ex = q + n_s - l;
                if i > ex {
                    continue;
                }
                let b = BigRational::from_integer(binomial(ex, i));
                c += b * &e.apow[(ex - i) as usize] * &cof[(l as usize - 1) * qn + k as usize - 1];
            }
            if c.is_zero() {
                continue;
            }
            terms.push((
                c * &lead,
                2 * n_s + 2 * k + p - q - i - 3,
                (i64::from(p + q) - i64::from(i) - 1).unsigned_abs() as u32,
            ));
        }
    }
    BesselTermSeries::from_exact(a, &terms)
}

/// Unordered eigenvalue density of the Rayleigh-product channel, the
/// `a → 0` limit of [`unordered_pdf`].
pub fn rayleigh_product_pdf(n_s: u32, q: u32, p: u32) -> Result<BesselTermSeries> {
    let d = Dims::new(n_s, q, p)?;
    let s = d.s();
    let e = ExactSetup::without_gain(d);
    let cof = e.gamma_matrix().cofactors();
    let qn = q as usize;
    let mut terms: Vec<(BigRational, u32, u32)> = Vec::new();
    for k in q - s + 1..=q {
        let lead = lead_factor(&e, k);
        for l in 1..=q {
            terms.push((
                &cof[(l as usize - 1) * qn + k as usize - 1] * &lead,
                n_s + 2 * k + p + l - 2 * q - 3,
                (i64::from(p + l) - i64::from(n_s) - 1).unsigned_abs() as u32,
            ));
        }
    }
    Ok(BesselTermSeries::from_exact(0.0, &terms))
}

/// Density of one unordered diagonal entry `β = λ²/(1 + aλ²)` of `L`.
pub fn unordered_beta_pdf(beta: f64, cfg: &SystemConfig) -> Result<f64> {
    unordered_beta_pdf_at(beta, cfg.q(), cfg.p(), cfg.a())
}

pub fn unordered_beta_pdf_at(beta: f64, q: u32, p: u32, a: f64) -> Result<f64> {
    if !(beta >= 0.0) {
        return Err(Error::Domain("beta must be nonnegative"));
    }
    if !(a > 0.0) {
        return Err(Error::Domain("a must be positive"));
    }
    let w = 1.0 - a * beta;
    if w <= 0.0 {
        return Ok(0.0);
    }
    let t = beta / w;
    let (lb, lw) = (libm::log(beta), libm::log(w));
    let mut s = SignedSum::new();
    for i in 0..q {
        for j in 0..=i {
            for l in 0..=2 * j {
                let dd = p - q + l;
                let c = coeff_a(i, j, l, p, q)?;
                let pw = if dd == 0 { 0.0 } else { f64::from(dd) * lb };
                let ln = pw - f64::from(dd + 2) * lw - t - ln_factorial(l);
                s.push(LogScaledReal::from_f64(c).scale_ln(ln));
            }
        }
    }
    Ok((s.value().to_f64() / f64::from(q)).max(0.0))
}

/// Unordered density of the nonzero eigenvalues of `H̃₁† L H̃₁` given the
/// diagonal of `L` (`betas`, strictly increasing).
pub fn conditional_unordered_pdf(betas: &[f64], n_s: u32, lambda: f64) -> Result<f64> {
    check_betas(betas)?;
    if n_s == 0 {
        return Err(Error::Domain("n_s must be positive"));
    }
    if !(lambda > 0.0) {
        return Err(Error::Domain("lambda must be positive"));
    }
    let q = betas.len() as u32;
    let s = n_s.min(q);
    let v = vandermonde_matrix(betas);
    let ll = libm::log(lambda);
    let mut sum = SignedSum::new();
    for k in q - s + 1..=q {
        let lg = ln_factorial(n_s + k - 1 - q);
        let pw = f64::from(n_s + k) - f64::from(q) - 1.0;
        for (l, &b) in betas.iter().enumerate() {
            let lb = libm::log(b);
            let ln = pw * ll - lambda / b + (f64::from(q) - f64::from(n_s) - 1.0) * lb - lg;
            sum.push(v.cofactor(l + 1, k as usize).scale_ln(ln));
        }
    }
    let vand = crate::matrixcore::vandermonde_product(betas);
    let r = sum.value() / vand;
    Ok(r.to_f64().max(0.0) / f64::from(s))
}

/// `V_{m,n} = β_m^{n-1}`.
pub(crate) fn vandermonde_matrix(betas: &[f64]) -> ScaledMatrix {
    ScaledMatrix::from_fn(betas.len(), |m, n| {
        LogScaledReal::from_f64(betas[m]).powi(n as i32)
    })
}
