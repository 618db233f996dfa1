use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::config::{Dims, SystemConfig};
use super::density::{check_betas, vandermonde_matrix};
use super::exact::{digamma_form, ExactSetup, TranscendentalForm};
use crate::matrixcore::{vandermonde_product, RationalMatrix, ScaledMatrix};
use crate::specfun::exact::{
    binomial, coeff_a_exact, rational_from_f64, rational_to_f64, rational_to_scaled,
};
use crate::specfun::{digamma, LogScaledReal, SignedSum};
use crate::{Error, Result};

/// `Σ_{k=1}^s ψ(n_s - s + k)`.
pub fn digamma_sum(n_s: u32, s: u32) -> f64 {
    (1..=s)
        .map(|k| digamma(f64::from(n_s - s + k)).expect("positive integer"))
        .sum()
}

fn digamma_sum_form(n_s: u32, s: u32) -> TranscendentalForm {
    let mut f = TranscendentalForm::zero();
    for k in 1..=s {
        f.add_scaled(&digamma_form(n_s - s + k), &BigRational::one());
    }
    f
}

/// Exact `1/a` and its nearest double.
fn reciprocal(e: &ExactSetup) -> (BigRational, f64) {
    let x = e.a.recip();
    let xf = rational_to_f64(&x);
    (x, xf)
}

/// `E det(I + (ρa/n_s) H̃₁† L H̃₁)`.
pub fn expected_det(cfg: &SystemConfig) -> Result<f64> {
    let a = cfg.a();
    expected_det_at(cfg.dims(), a, cfg.rho * a / f64::from(cfg.n_s))
}

/// Expected determinant with gain `a` and `c = ρa/n_s` given separately.
pub fn expected_det_at(d: Dims, a: f64, c: f64) -> Result<f64> {
    expected_det_scaled(d, a, c).map(LogScaledReal::to_f64)
}

pub(crate) fn expected_det_scaled(d: Dims, a: f64, c: f64) -> Result<LogScaledReal> {
    if !(a > 0.0) || !a.is_finite() || !(c >= 0.0) || !c.is_finite() {
        return Err(Error::Domain("need a > 0 and c >= 0"));
    }
    let (n_s, q, p) = (d.n_s, d.q, d.p);
    let e = ExactSetup::new(d, a);
    let cr = rational_from_f64(c);
    let mut xi = e.moment_matrix();
    // every entry but (q, q) is a finite moment sum; the corner needs
    // ∫ t^{p+q-1} (1+at)^{-1} e^{-t} dt = (p+q-1)! g_{p+q-1}(1/a) / a
    if !cr.is_zero() {
        for m in 1..=q {
            for n in 1..=q {
                if n + n_s <= q || m + n == 2 * q {
                    continue;
                }
                let tau = p - q + m + n;
                let w = &cr * BigRational::from_integer(BigInt::from(n_s + n - q));
                let (i, j) = (m as usize - 1, n as usize - 1);
                let v = xi.get(i, j) + w * e.moment(tau - 1, 2 * q - m - n - 1);
                xi.set(i, j, v);
            }
        }
    }
    let kk = e.k_const();
    let mut form = TranscendentalForm::zero();
    form.rational = xi.det() * &kk;
    if !cr.is_zero() {
        let corner = if q == 1 {
            BigRational::one()
        } else {
            xi.minor(q as usize - 1, q as usize - 1).det()
        };
        let w = &cr * BigRational::from_integer(BigInt::from(n_s)) * e.fact(p + q - 1) / &e.a;
        form.add_g(p + q - 1, corner * w * kk);
    }
    let (x, xf) = reciprocal(&e);
    form.eval(&x, xf)
}

/// `a → 0` limit of [`expected_det_at`] with `c` held fixed:
/// `𝒦 det Ξ̃`, `Ξ̃_{m,n} = Γ(τ-1)(1 + c(n_s-q+n)(τ-1))` for `n > q - n_s`
/// and `Γ(τ-1)` otherwise, `τ = p-q+m+n`.
pub fn expected_det_rayleigh_product(d: Dims, c: f64) -> Result<LogScaledReal> {
    if !(c >= 0.0) || !c.is_finite() {
        return Err(Error::Domain("need c >= 0"));
    }
    let (n_s, q, p) = (d.n_s, d.q, d.p);
    let e = ExactSetup::without_gain(d);
    let cr = rational_from_f64(c);
    let xi = RationalMatrix::from_fn(q as usize, |i, j| {
        let (m, n) = (i as u32 + 1, j as u32 + 1);
        let tau = p - q + m + n;
        let g = e.fact(tau - 2);
        if n + n_s <= q {
            g
        } else {
            let k = BigRational::from_integer(BigInt::from((n_s + n - q) * (tau - 1)));
            g * (BigRational::one() + &cr * k)
        }
    });
    Ok(rational_to_scaled(&(xi.det() * e.k_const())))
}

/// `a → 0` limit of [`expected_logdet_at`]: `𝒦 Σ_k det W̃_k` where column
/// `k` of `W̃_k` is `Γ(τ-1)[ψ(n_s-q+k) + ψ(τ-1)]` and the rest is `Ḡ`.
pub fn expected_logdet_rayleigh_product(d: Dims) -> Result<f64> {
    let (n_s, q, p, s) = (d.n_s, d.q, d.p, d.s());
    let e = ExactSetup::without_gain(d);
    let cof = e.gamma_matrix().cofactors();
    let kk = e.k_const();
    let qn = q as usize;
    let mut total = TranscendentalForm::zero();
    for k in q - s + 1..=q {
        for m in 1..=q {
            let tau = p - q + m + k;
            let mut entry = digamma_form(n_s + k - q);
            entry.add_scaled(&digamma_form(tau - 1), &BigRational::one());
            let w = &cof[(m as usize - 1) * qn + k as usize - 1] * &kk * e.fact(tau - 2);
            total.add_scaled(&entry, &w);
        }
    }
    Ok(total.eval(&BigRational::one(), 1.0)?.to_f64())
}

/// `E{det(I + c H̃₁† L H̃₁) | L}` for `L = diag(betas)`.
pub fn conditional_expected_det(betas: &[f64], n_s: u32, c: f64) -> Result<f64> {
    check_betas(betas)?;
    if n_s == 0 || !(c >= 0.0) {
        return Err(Error::Domain("need n_s >= 1 and c >= 0"));
    }
    let q = betas.len() as i64;
    let delta = ScaledMatrix::from_fn(betas.len(), |m, n| {
        let b = betas[m];
        let base = LogScaledReal::from_f64(b).powi(n as i32);
        let col = n as i64 + 1;
        if col <= q - i64::from(n_s) {
            base
        } else {
            let f = 1.0 + c * b * (i64::from(n_s) - q + col) as f64;
            base * LogScaledReal::from_f64(f)
        }
    });
    Ok((delta.det() / vandermonde_product(betas)).to_f64())
}

/// `Φ = H̃₁† L H̃₁` when `q ≥ n_s`, else `L H̃₁ H̃₁†`; returns `E ln det Φ`.
pub fn expected_logdet(cfg: &SystemConfig) -> Result<f64> {
    expected_logdet_at(cfg.dims(), cfg.a())
}

/// `ς_t = ∫ t^{p-q+t-2} (1+at)^{2q-t} e^{-t} ln(t/(1+at)) dt` as a form.
fn varsigma_form(e: &ExactSetup, t: u32) -> TranscendentalForm {
    let (q, p) = (e.d.q, e.d.p);
    let ex = 2 * q - t;
    let mut f = TranscendentalForm::zero();
    for i in 0..=ex {
        let m = p + q - i - 1;
        let w =
            BigRational::from_integer(binomial(ex, i)) * &e.apow[(ex - i) as usize] * e.fact(m - 1);
        let mut inner = digamma_form(m);
        for l in 0..m {
            inner.add_g(l, -BigRational::one());
        }
        f.add_scaled(&inner, &w);
    }
    f
}

pub fn expected_logdet_at(d: Dims, a: f64) -> Result<f64> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::Domain("a must be positive"));
    }
    let (q, s) = (d.q, d.s());
    let e = ExactSetup::new(d, a);
    let cof = e.moment_matrix().cofactors();
    let kk = e.k_const();
    let qn = q as usize;
    // det W_k expands along its replaced column k
    let mut total = digamma_sum_form(d.n_s, s);
    let sig: Vec<TranscendentalForm> = (2..=2 * q).map(|t| varsigma_form(&e, t)).collect();
    for k in q - s + 1..=q {
        for m in 1..=q {
            let c = &cof[(m as usize - 1) * qn + k as usize - 1] * &kk;
            total.add_scaled(&sig[(m + k - 2) as usize], &c);
        }
    }
    let (x, xf) = reciprocal(&e);
    Ok(total.eval(&x, xf)?.to_f64())
}

/// Single-sum form valid when `q = s`, via `E ln det Φ = Σψ + q·E ln β`.
pub fn expected_logdet_q_eq_s(d: Dims, a: f64) -> Result<f64> {
    let (q, p, s) = (d.q, d.p, d.s());
    if q != s {
        return Err(Error::Regime("single-sum log-determinant form needs q = s"));
    }
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::Domain("a must be positive"));
    }
    let e = ExactSetup::new(d, a);
    let mut total = digamma_sum_form(d.n_s, s);
    for i in 0..q {
        for j in 0..=i {
            for l in 0..=2 * j {
                let dd = p - q + l;
                let mut inner = digamma_form(dd + 1);
                for m in 0..=dd {
                    inner.add_g(m, -BigRational::one());
                }
                let w = coeff_a_exact(i, j, l, p, q, &e.fact) * e.fact(dd) / e.fact(l);
                total.add_scaled(&inner, &w);
            }
        }
    }
    let (x, xf) = reciprocal(&e);
    Ok(total.eval(&x, xf)?.to_f64())
}

/// `E{ln det Φ | L}` for `L = diag(betas)`.
pub fn conditional_expected_logdet(betas: &[f64], n_s: u32) -> Result<f64> {
    check_betas(betas)?;
    if n_s == 0 {
        return Err(Error::Domain("n_s must be positive"));
    }
    let q = betas.len() as u32;
    let s = n_s.min(q);
    let head = digamma_sum(n_s, s);
    if q == s {
        return Ok(head + betas.iter().map(|b| libm::log(*b)).sum::<f64>());
    }
    let v = vandermonde_matrix(betas);
    let mut sum = SignedSum::new();
    for k in q - s + 1..=q {
        let mut y = v.clone();
        for (m, &b) in betas.iter().enumerate() {
            let j = k as usize - 1;
            y.set(m, j, y.get(m, j) * LogScaledReal::from_f64(libm::log(b)));
        }
        sum.push(y.det());
    }
    Ok(head + (sum.value() / vandermonde_product(betas)).to_f64())
}

/// General determinant sum evaluated even when `q = s` (for cross-checks).
#[cfg(test)]
fn conditional_expected_logdet_general(betas: &[f64], n_s: u32) -> f64 {
    let q = betas.len() as u32;
    let s = n_s.min(q);
    let v = vandermonde_matrix(betas);
    let mut sum = SignedSum::new();
    for k in q - s + 1..=q {
        let mut y = v.clone();
        for (m, &b) in betas.iter().enumerate() {
            let j = k as usize - 1;
            y.set(m, j, y.get(m, j) * LogScaledReal::from_f64(libm::log(b)));
        }
        sum.push(y.det());
    }
    digamma_sum(n_s, s) + (sum.value() / vandermonde_product(betas)).to_f64()
}
