use core::f64::consts::LN_2;

use super::{CapacityPoint, Method};
use crate::eigenstats::{expected_logdet_at, expected_logdet_q_eq_s, Dims};
use crate::specfun::g;
use crate::{Error, Result};

/// Decibels in one 3-dB unit, `10 log10 2`.
pub const DB_PER_3DB: f64 = 3.010_299_956_639_812;

/// High-SNR slope and power offset at a fixed ratio `β = α/ρ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HighSnrChar {
    /// Bits/s/Hz per 3 dB; always `s/2`.
    pub slope: f64,
    /// Power offset in 3-dB units.
    pub offset_3db: f64,
    pub beta: f64,
}

impl HighSnrChar {
    pub fn offset_db(&self) -> f64 {
        self.offset_3db * DB_PER_3DB
    }
}

/// As `ρ → ∞` with `α = βρ`, `a → β/n_r` and
/// `C = (s/2)(log2 ρ - ℒ)`, `ℒ = log2(n_s n_r/β) - E ln det Φ / (s ln 2)`.
pub fn high_snr_char(n_s: u32, n_r: u32, n_d: u32, beta: f64) -> Result<HighSnrChar> {
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(Error::Domain("beta must be positive"));
    }
    let d = Dims::from_antennas(n_s, n_r, n_d)?;
    let s = d.s();
    let a = beta / f64::from(n_r);
    let e = expected_logdet_at(d, a)?;
    if d.q == s {
        let alt = expected_logdet_q_eq_s(d, a)?;
        assert!(
            (alt - e).abs() <= 1e-6 * e.abs().max(1.0),
            "log-determinant forms disagree: {e} vs {alt}"
        );
    }
    let offset = libm::log2(f64::from(n_s * n_r) / beta) - e / (f64::from(s) * LN_2);
    Ok(HighSnrChar {
        slope: 0.5 * f64::from(s),
        offset_3db: offset,
        beta,
    })
}

/// `S_∞ (log2 ρ - ℒ_∞)`, floored at zero.
pub fn high_snr_affine(ch: &HighSnrChar, rho: f64) -> CapacityPoint {
    let v = if rho > 0.0 {
        ch.slope * (libm::log2(rho) - ch.offset_3db)
    } else {
        0.0
    };
    CapacityPoint::analytic(rho, v, Method::HighSnrAffine)
}

/// Change of the `(1, 1, n_d)` power offset when `k` destination antennas
/// are added, in dB:
/// `-(1/ln 2) Σ_{l=n_d}^{n_d+k-1} (1/l - g_l(1/β))`.
pub fn offset_shift(n_d: u32, k: u32, beta: f64) -> Result<f64> {
    if n_d == 0 || k == 0 || !(beta > 0.0) {
        return Err(Error::Domain("need n_d, k >= 1 and beta > 0"));
    }
    let x = 1.0 / beta;
    let mut sum = 0.0;
    for l in n_d..n_d + k {
        sum += 1.0 / f64::from(l) - g(l, x)?;
    }
    Ok(-sum / LN_2 * DB_PER_3DB)
}
