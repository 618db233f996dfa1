//! Combinatorial coefficients and finite moment sums.

use super::expint::g;
use super::gamma::{digamma, ln_binomial, ln_factorial, ln_gamma};
use super::scaled::{LogScaledReal, SignedSum};
use crate::{Error, Result};

/// Coefficient `𝒜(i, j, l, κ1, κ2)` of the Laguerre-product expansion of the
/// unordered Wishart eigenvalue density:
///
/// `(-1)^l C(2i-2j, i-j) C(2j+2κ1-2κ2, 2j-l) (2j)! / (2^{2i-l} (κ1-κ2+j)! j!)`.
///
/// This is the coefficient exactly as stated; the density needs an extra
/// `1/l!` (see [`crate::eigenstats::unordered_beta_pdf`]).
pub fn coeff_a(i: u32, j: u32, l: u32, kappa1: u32, kappa2: u32) -> Result<f64> {
    if j > i || l > 2 * j || kappa1 < kappa2 {
        return Err(Error::Domain("coeff_a index bounds"));
    }
    let d = kappa1 - kappa2;
    let ln = ln_binomial(2 * i - 2 * j, i - j)
        + ln_binomial(2 * j + 2 * d, 2 * j - l)
        + ln_factorial(2 * j)
        - f64::from(2 * i - l) * core::f64::consts::LN_2
        - ln_factorial(d + j)
        - ln_factorial(j);
    let v = libm::exp(ln);
    Ok(if l % 2 == 0 { v } else { -v })
}

/// `∫_0^∞ t^d (1+at)^e e^{-t} dt = Σ_{i=0}^{e} C(e,i) a^i Γ(d+i+1)`.
pub fn moment_integral(d: u32, e: u32, a: f64) -> LogScaledReal {
    assert!(a > 0.0, "moment_integral requires a > 0");
    let la = libm::log(a);
    let mut s = SignedSum::new();
    for i in 0..=e {
        let ln = ln_binomial(e, i) + f64::from(i) * la + ln_factorial(d + i);
        s.push(LogScaledReal::from_ln(ln));
    }
    s.value()
}

/// `∫_0^∞ t^d (1+at)^{-1} e^{-t} dt = d! g_d(1/a) / a`.
///
/// Needed where the binomial exponent of [`moment_integral`] drops to -1.
pub fn moment_integral_reciprocal(d: u32, a: f64) -> Result<LogScaledReal> {
    if !(a > 0.0) {
        return Err(Error::Domain("moment integral requires a > 0"));
    }
    let gd = g(d, 1.0 / a)?;
    Ok(LogScaledReal::from_ln(
        ln_factorial(d) + libm::log(gd) - libm::log(a),
    ))
}

/// `ς_t(a)` for a `q×q` problem with `p ≥ q`:
///
/// `Σ_{i=0}^{2q-t} a^{2q-t-i} Γ(p+q-i-1) C(2q-t, i) (ψ(p+q-i-1) - Σ_{l=0}^{p+q-i-2} g_l(1/a))`,
///
/// which equals `∫_0^∞ t^{p-q+t-2} (1+at)^{2q-t} e^{-t} ln(t/(1+at)) dt`.
pub fn varsigma_scaled(t: u32, p: u32, q: u32, a: f64) -> Result<LogScaledReal> {
    if !(a > 0.0) {
        return Err(Error::Domain("varsigma requires a > 0"));
    }
    if q == 0 || p < q || t > 2 * q || p + q < 2 * q - t + 2 {
        return Err(Error::Domain("varsigma index bounds"));
    }
    let e = 2 * q - t;
    let x = 1.0 / a;
    let la = libm::log(a);
    // g_l(1/a) for l = 0..=p+q-2
    let top = p + q - 1;
    let mut gs = alloc::vec::Vec::with_capacity(top as usize);
    for l in 0..top {
        gs.push(g(l, x)?);
    }
    let mut s = SignedSum::new();
    for i in 0..=e {
        let m = p + q - i - 1; // Γ/ψ argument
        let mut inner = digamma(f64::from(m))?;
        // Σ_{l=0}^{m-1} g_l, summed smallest first
        let mut gsum = 0.0;
        for l in (0..m).rev() {
            gsum += gs[l as usize];
        }
        inner -= gsum;
        let ln = f64::from(e - i) * la + ln_gamma(f64::from(m))? + ln_binomial(e, i);
        s.push(LogScaledReal::from_f64(inner).scale_ln(ln));
    }
    Ok(s.value())
}

/// Plain-real form of [`varsigma_scaled`].
pub fn varsigma(t: u32, p: u32, q: u32, a: f64) -> Result<f64> {
    varsigma_scaled(t, p, q, a).map(LogScaledReal::to_f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::gamma::EULER_GAMMA;
    use crate::testutil::{exp_sinh, rel_err, tanh_sinh};
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use num_traits::{One, ToPrimitive};

    fn fact(n: u32) -> BigInt {
        (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
    }

    fn binom(n: u32, k: u32) -> BigInt {
        fact(n) / (fact(k) * fact(n - k))
    }

    fn coeff_a_exact(i: u32, j: u32, l: u32, k1: u32, k2: u32) -> BigRational {
        let d = k1 - k2;
        let num = binom(2 * i - 2 * j, i - j) * binom(2 * j + 2 * d, 2 * j - l) * fact(2 * j);
        let den = (BigInt::one() << (2 * i - l) as usize) * fact(d + j) * fact(j);
        let v = BigRational::new(num, den);
        if l % 2 == 1 {
            -v
        } else {
            v
        }
    }

    #[test]
    fn coeff_a_examples() {
        for (p, q) in [(1u32, 1u32), (3, 2), (7, 3)] {
            let want = 1.0 / libm::exp(ln_factorial(p - q));
            assert!(rel_err(coeff_a(0, 0, 0, p, q).unwrap(), want) < 1e-15);
        }
        assert!((coeff_a(1, 0, 0, 2, 1).unwrap() - 0.5).abs() < 1e-15);
        assert!(coeff_a(0, 1, 0, 2, 1).is_err());
        assert!(coeff_a(1, 1, 3, 2, 1).is_err());
        assert!(coeff_a(1, 1, 0, 1, 2).is_err());
    }

    #[test]
    fn coeff_a_matches_exact_rationals() {
        for i in 0..7u32 {
            for j in 0..=i {
                for l in 0..=2 * j {
                    for (k1, k2) in [(4u32, 3u32), (9, 2), (5, 5)] {
                        let want = coeff_a_exact(i, j, l, k1, k2).to_f64().unwrap();
                        let got = coeff_a(i, j, l, k1, k2).unwrap();
                        assert!(rel_err(got, want) < 1e-13, "{i} {j} {l} {k1} {k2}");
                    }
                }
            }
        }
    }

    #[test]
    fn moment_integral_small_cases() {
        for &a in &[1e-3, 0.5, 7.0] {
            assert!((moment_integral(0, 0, a).to_f64() - 1.0).abs() < 1e-15);
            assert!(rel_err(moment_integral(0, 1, a).to_f64(), 1.0 + a) < 1e-14);
            assert!(rel_err(moment_integral(5, 0, a).to_f64(), 120.0) < 1e-14);
        }
    }

    #[test]
    fn moment_integral_matches_quadrature() {
        for &a in &[1e-3, 0.1, 1.0, 30.0, 1e3] {
            for &(d, e) in &[
                (0u32, 1u32),
                (3, 2),
                (7, 0),
                (2, 9),
                (12, 12),
                (30, 30),
                (1, 30),
            ] {
                let got = moment_integral(d, e, a);
                // integrate t^d (1+at)^e e^{-t} scaled by the known magnitude
                let shift = got.log_magnitude;
                let f = |t: f64| {
                    if t == 0.0 {
                        return 0.0;
                    }
                    libm::exp(
                        f64::from(d) * libm::log(t) + f64::from(e) * libm::log1p(a * t) - t - shift,
                    )
                };
                let ratio = exp_sinh(f, 0.0);
                assert!((ratio - 1.0).abs() < 1e-10, "d={d} e={e} a={a}: {ratio}");
            }
        }
    }

    #[test]
    fn reciprocal_moment_matches_quadrature() {
        for &a in &[1e-3, 0.2, 1.0, 40.0, 3e4] {
            for d in [0u32, 1, 4, 11] {
                let got = moment_integral_reciprocal(d, a).unwrap().to_f64();
                let want = exp_sinh(
                    |t| libm::pow(t, f64::from(d)) * libm::exp(-t) / (1.0 + a * t),
                    0.0,
                );
                assert!(rel_err(got, want) < 1e-11, "d={d} a={a}");
            }
        }
    }

    #[test]
    fn varsigma_scalar_case() {
        let v = varsigma(2, 1, 1, 1.0).unwrap();
        let want = -EULER_GAMMA - libm::exp(1.0) * 0.219_383_934_395_520_3;
        assert!((v - want).abs() < 1e-13);
        assert!((v + 1.173_56).abs() < 1e-5);
    }

    #[test]
    fn varsigma_matches_log_moment_quadrature() {
        for &(t, p, q) in &[
            (2u32, 1u32, 1u32),
            (2, 3, 2),
            (3, 3, 2),
            (4, 3, 2),
            (5, 6, 3),
            (2, 4, 4),
            (8, 5, 4),
        ] {
            for &a in &[0.01, 0.3, 1.0, 5.0] {
                let got = varsigma(t, p, q, a).unwrap();
                let pw = f64::from(p + t) - f64::from(q) - 2.0;
                let ex = -f64::from(p + q);
                let f = |u: f64| {
                    let w = 1.0 - a * u;
                    if w <= 0.0 {
                        return 0.0;
                    }
                    let lu = libm::log(u);
                    libm::exp(pw * lu + ex * libm::log(w) - u / w) * lu
                };
                let want = tanh_sinh(f, 0.0, 1.0 / a);
                assert!(
                    (got - want).abs() <= 1e-8 * want.abs().max(1e-3),
                    "t={t} p={p} q={q} a={a}: {got} vs {want}"
                );
            }
        }
    }

    #[test]
    fn varsigma_domain() {
        assert!(varsigma(5, 1, 2, 1.0).is_err());
        assert!(varsigma(2, 1, 1, 0.0).is_err());
    }
}
