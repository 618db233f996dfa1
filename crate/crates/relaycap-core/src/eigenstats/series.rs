use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::quad::{integrate, integrate_to_infinity, kronrod15, QuadResult, Tolerance};
use crate::specfun::exact::{factorials, rational_to_scaled};
use crate::specfun::{ln_bessel_k_orders, LogScaledReal, SignedSum, EULER_GAMMA};
use crate::{Error, Result};

/// One term `coeff · λ^{half_power/2} · K_{bessel_order}(2√λ)` of a
/// [`BesselTermSeries`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselTerm {
    pub coeff: LogScaledReal,
    pub half_power: u32,
    pub bessel_order: u32,
}

/// `e^{-aλ} Σ_t c_t λ^{h_t/2} K_{ν_t}(2√λ)` with `a = decay_rate`.
///
/// Near the origin the Bessel terms grow like `λ^{(h-ν)/2}` while the
/// density itself vanishes to higher order, so the plain sum loses every
/// digit there. Series built from exact coefficients also carry the
/// power-log expansion of the bracket, used wherever it cancels less.
#[derive(Debug, Clone, PartialEq)]
pub struct BesselTermSeries {
    pub decay_rate: f64,
    pub terms: Vec<BesselTerm>,
    pub near_zero: Option<NearZeroExpansion>,
}

/// `Σ_m (plain_m + log_m ln λ) λ^m`, complete through the last index.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct NearZeroExpansion {
    pub plain: Vec<LogScaledReal>,
    pub log: Vec<LogScaledReal>,
}

/// Orders of the Bessel ascending series kept beyond the singular part.
const EXPANSION_ORDERS: u32 = 60;

impl NearZeroExpansion {
    /// Expands `Σ_t c_t λ^{h_t/2} K_{ν_t}(2√λ)` using
    ///
    /// `λ^{n/2} K_n(2√λ) = ½ Σ_{k<n} (n-k-1)!/k! (-λ)^k
    ///   + (-1)^{n+1} ½ ln λ Σ_k λ^{n+k}/(k!(n+k)!)
    ///   + (-1)^n ½ Σ_k (ψ(k+1) + ψ(n+k+1)) λ^{n+k}/(k!(n+k)!)`.
    ///
    /// Returns `None` if some `h_t - ν_t` is odd or negative.
    pub(crate) fn from_exact(terms: &[(BigRational, u32, u32)]) -> Option<Self> {
        let big_m = EXPANSION_ORDERS;
        let mut top = u32::MAX;
        let mut nmax = 0;
        for (_, h, nu) in terms {
            if h < nu || (h - nu) % 2 == 1 {
                return None;
            }
            top = top.min((h - nu) / 2 + nu + big_m);
            nmax = nmax.max(*nu);
        }
        if terms.is_empty() {
            return Some(Self::default());
        }
        let fact = factorials(nmax + big_m + 1);
        let harm: Vec<BigRational> = {
            let mut v = vec![BigRational::zero()];
            for k in 1..=nmax + big_m {
                let next =
                    v.last().expect("nonempty") + BigRational::new(BigInt::one(), BigInt::from(k));
                v.push(next);
            }
            v
        };
        let len = top as usize + 1;
        let (mut ra, mut rg, mut rl) = (
            vec![BigRational::zero(); len],
            vec![BigRational::zero(); len],
            vec![BigRational::zero(); len],
        );
        let fr = |n: u32| BigRational::from_integer(fact[n as usize].clone());
        for (c, h, n) in terms {
            let (j, n) = ((h - n) / 2, *n);
            let half = c / BigRational::from_integer(BigInt::from(2));
            for k in 0..n {
                let idx = (j + k) as usize;
                if idx < len {
                    let v = &half * fr(n - k - 1) / fr(k);
                    if k % 2 == 0 {
                        ra[idx] += v;
                    } else {
                        ra[idx] -= v;
                    }
                }
            }
            for k in 0..=big_m {
                let idx = (j + n + k) as usize;
                if idx >= len {
                    break;
                }
                let w = &half / (fr(k) * fr(n + k));
                let w = if n % 2 == 0 { w } else { -w };
                rl[idx] -= &w;
                ra[idx] += &w * (&harm[k as usize] + &harm[(n + k) as usize]);
                rg[idx] -= &w * BigRational::from_integer(BigInt::from(2));
            }
        }
        let gamma = LogScaledReal::from_f64(EULER_GAMMA);
        let plain = ra
            .iter()
            .zip(&rg)
            .map(|(x, y)| {
                let mut s = SignedSum::new();
                s.push(rational_to_scaled(x));
                s.push(rational_to_scaled(y) * gamma);
                s.value()
            })
            .collect();
        let log = rl.iter().map(rational_to_scaled).collect();
        Some(Self { plain, log })
    }

    /// The sum and its largest term, or `None` if the truncation is not
    /// negligible at `lambda`.
    fn sum_at(&self, lambda: f64) -> Option<(SignedSum, LogScaledReal)> {
        let ll = libm::log(lambda);
        let lml = LogScaledReal::from_f64(ll);
        let mut s = SignedSum::new();
        let mut last = LogScaledReal::ZERO;
        for (m, (a, b)) in self.plain.iter().zip(&self.log).enumerate() {
            let pw = m as f64 * ll;
            let t1 = a.scale_ln(pw);
            let t2 = (*b * lml).scale_ln(pw);
            s.push(t1);
            s.push(t2);
            last = if t1.cmp_magnitude(&t2).is_ge() {
                t1
            } else {
                t2
            };
        }
        let big = s.largest_term();
        if big.is_zero() || last.log_magnitude - big.log_magnitude > -40.0 {
            return None;
        }
        Some((s, big))
    }
}

impl BesselTermSeries {
    /// Builds the series, with its expansion at the origin, from exact
    /// coefficients `(c, h, ν)`.
    pub(crate) fn from_exact(decay_rate: f64, exact: &[(BigRational, u32, u32)]) -> Self {
        let terms = exact
            .iter()
            .map(|(c, h, nu)| BesselTerm {
                coeff: rational_to_scaled(c),
                half_power: *h,
                bessel_order: *nu,
            })
            .collect();
        Self {
            decay_rate,
            terms,
            near_zero: NearZeroExpansion::from_exact(exact),
        }
    }

    pub fn max_order(&self) -> u32 {
        self.terms.iter().map(|t| t.bessel_order).max().unwrap_or(0)
    }

    pub fn max_half_power(&self) -> u32 {
        self.terms.iter().map(|t| t.half_power).max().unwrap_or(0)
    }

    /// Rough location of the bulk in `u = √λ`, used to size integration
    /// panels.
    pub fn u_scale(&self) -> f64 {
        (0.25 * f64::from(self.max_half_power() + 2)).max(1.0)
    }

    /// The signed sum and its largest term, both log-scaled.
    fn sum_at(&self, lambda: f64, kbuf: &mut Vec<f64>) -> Result<(LogScaledReal, LogScaledReal)> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::Domain(
                "density argument must be positive and finite",
            ));
        }
        kbuf.resize(self.max_order() as usize + 1, 0.0);
        ln_bessel_k_orders(2.0 * libm::sqrt(lambda), kbuf)?;
        let ll = libm::log(lambda);
        let base = -self.decay_rate * lambda;
        let mut s = SignedSum::new();
        for t in &self.terms {
            let pw = if t.half_power == 0 {
                0.0
            } else {
                0.5 * f64::from(t.half_power) * ll
            };
            s.push(t.coeff.scale_ln(base + pw + kbuf[t.bessel_order as usize]));
        }
        let mut best = (s.value(), s.largest_term());
        if lambda < NEAR_ZERO_LIMIT {
            if let Some((z, big)) = self.near_zero.as_ref().and_then(|e| e.sum_at(lambda)) {
                let (v, big) = (z.value().scale_ln(base), big.scale_ln(base));
                if ratio(v, big) < ratio(best.0, best.1) {
                    best = (v, big);
                }
            }
        }
        Ok(best)
    }

    /// Pointwise value. Negative round-off is clamped to zero when it is
    /// within `1e-12` absolute or `1e-9` of the largest term; anything
    /// beyond that is reported as [`Error::NegativeDensity`].
    pub fn eval(&self, lambda: f64) -> Result<f64> {
        let mut kbuf = Vec::new();
        self.eval_with(lambda, &mut kbuf)
    }

    fn eval_with(&self, lambda: f64, kbuf: &mut Vec<f64>) -> Result<f64> {
        let (v, big) = self.sum_at(lambda, kbuf)?;
        let v = v.to_f64();
        if v >= 0.0 {
            return Ok(v);
        }
        if v >= -1e-12 || -v <= 1e-9 * big.to_f64() {
            Ok(0.0)
        } else {
            Err(Error::NegativeDensity { lambda, value: v })
        }
    }

    /// `∫_0^∞ w(λ) f(λ) dλ` with `λ = u²`.
    pub fn integrate_weighted<W: FnMut(f64) -> f64>(
        &self,
        mut w: W,
        tol: Tolerance,
    ) -> Result<QuadResult> {
        let mut kbuf = Vec::new();
        let mut failure = None;
        let r = integrate_to_infinity(
            |u| {
                if u <= 0.0 {
                    return 0.0;
                }
                let lam = u * u;
                match self.eval_with(lam, &mut kbuf) {
                    Ok(0.0) => 0.0,
                    Ok(f) => 2.0 * u * f * w(lam),
                    Err(e) => {
                        failure.get_or_insert(e);
                        0.0
                    }
                }
            },
            self.u_scale(),
            tol,
        );
        if let Some(e) = failure {
            return Err(e);
        }
        r
    }

    /// `∫_0^∞ f`; 1 for a density.
    pub fn total_mass(&self) -> Result<f64> {
        self.integrate_weighted(|_| 1.0, Tolerance::default())
            .map(|r| r.value)
    }

    /// `∫_0^x f`.
    pub fn cdf(&self, x: f64) -> Result<f64> {
        if x <= 0.0 {
            return Ok(0.0);
        }
        let mut kbuf = Vec::new();
        let r = integrate(
            |u| {
                if u <= 0.0 {
                    return 0.0;
                }
                self.eval_with(u * u, &mut kbuf)
                    .map(|f| 2.0 * u * f)
                    .unwrap_or(f64::NAN)
            },
            0.0,
            libm::sqrt(x),
            Tolerance::default(),
        )?;
        Ok(r.value)
    }

    /// Tabulates the CDF for fast repeated evaluation (KS tests over many
    /// samples).
    pub fn cdf_table(&self, points: usize) -> Result<CdfTable> {
        // find where the tail mass is negligible
        let mut u_max = 4.0 * self.u_scale();
        let mut kbuf = Vec::new();
        let peak = (1..=200)
            .map(|j| {
                let u = u_max * f64::from(j) / 200.0;
                self.eval_with(u * u, &mut kbuf)
                    .map(|f| 2.0 * u * f)
                    .unwrap_or(0.0)
            })
            .fold(0.0, f64::max);
        loop {
            let d = self.eval_with(u_max * u_max, &mut kbuf)? * 2.0 * u_max;
            if d <= 1e-16 * peak.max(1e-300) || u_max > 1e4 {
                break;
            }
            u_max *= 1.25;
        }
        let n = points.max(16);
        let h = u_max / n as f64;
        // geometric knots toward the origin, where the density in u may
        // behave like u ln u
        let mut u: Vec<f64> = (1..=GEOMETRIC_KNOTS)
            .rev()
            .map(|k| h * libm::ldexp(1.0, -(k as i32)))
            .collect();
        u.insert(0, 0.0);
        u.extend((1..=n).map(|j| h * j as f64));
        let mut cdf = vec![0.0; u.len()];
        let tol = Tolerance {
            rel: 1e-12,
            abs: 1e-15,
            max_subdivisions: 200,
        };
        for j in 1..u.len() {
            let seg = integrate(
                |x| {
                    if x <= 0.0 {
                        0.0
                    } else {
                        self.eval_with(x * x, &mut kbuf)
                            .map(|f| 2.0 * x * f)
                            .unwrap_or(f64::NAN)
                    }
                },
                u[j - 1],
                u[j],
                tol,
            )?;
            cdf[j] = cdf[j - 1] + seg.value;
        }
        Ok(CdfTable {
            series: self.clone(),
            u,
            cdf,
        })
    }
}

const GEOMETRIC_KNOTS: usize = 40;

/// Beyond this the expansion at the origin is never competitive.
const NEAR_ZERO_LIMIT: f64 = 40.0;

fn ratio(v: LogScaledReal, big: LogScaledReal) -> f64 {
    if big.is_zero() {
        f64::NEG_INFINITY
    } else if v.is_zero() {
        f64::INFINITY
    } else {
        big.log_magnitude - v.log_magnitude
    }
}

/// CDF tabulated at knots in `u = √λ`; in between, one Kronrod panel from
/// the nearest knot below.
#[derive(Debug, Clone)]
pub struct CdfTable {
    series: BesselTermSeries,
    u: Vec<f64>,
    cdf: Vec<f64>,
}

impl CdfTable {
    pub fn eval(&self, lambda: f64) -> f64 {
        if lambda <= 0.0 {
            return 0.0;
        }
        let u = libm::sqrt(lambda);
        let n = self.u.len() - 1;
        if u >= self.u[n] {
            return self.cdf[n].min(1.0);
        }
        let j = self.u.partition_point(|&x| x <= u) - 1;
        let (y0, y1) = (self.cdf[j], self.cdf[j + 1]);
        if j == 0 {
            // the first cell is far below double resolution of any cdf value
            return y0 + (y1 - y0) * (u / self.u[1]);
        }
        let mut kbuf = Vec::new();
        let part = kronrod15(
            |x| {
                self.series
                    .eval_with(x * x, &mut kbuf)
                    .map(|f| 2.0 * x * f)
                    .unwrap_or(0.0)
            },
            self.u[j],
            u,
        );
        (y0 + part).clamp(y0.min(y1), y0.max(y1))
    }

    pub fn total(&self) -> f64 {
        *self.cdf.last().expect("table nonempty")
    }
}

/// Evaluates a series at `lambda`; see [`BesselTermSeries::eval`].
pub fn pdf_eval(series: &BesselTermSeries, lambda: f64) -> Result<f64> {
    series.eval(lambda)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::bessel_k_scaled;

    fn k0_series() -> BesselTermSeries {
        BesselTermSeries {
            decay_rate: 0.0,
            terms: vec![BesselTerm {
                coeff: LogScaledReal::from_f64(2.0),
                half_power: 0,
                bessel_order: 0,
            }],
            near_zero: None,
        }
    }

    #[test]
    fn single_term_matches_bessel() {
        let s = k0_series();
        for &x in &[1e-6, 0.3, 1.0, 25.0, 400.0] {
            let y = 2.0 * libm::sqrt(x);
            let want = 2.0 * bessel_k_scaled(0, y).unwrap() * libm::exp(-y);
            let got = s.eval(x).unwrap();
            assert!((got - want).abs() <= 1e-14 * want, "{x}");
        }
        assert!(s.eval(0.0).is_err());
        assert!(s.eval(f64::NAN).is_err());
    }

    #[test]
    fn k0_density_is_normalized() {
        // ∫ 2 K_0(2√λ) dλ = 1
        let s = k0_series();
        assert!((s.total_mass().unwrap() - 1.0).abs() < 1e-10);
        let t = s.cdf_table(400).unwrap();
        assert!((t.total() - 1.0).abs() < 1e-10);
        for &x in &[0.01, 0.5, 2.0, 9.0] {
            let want = s.cdf(x).unwrap();
            assert!((t.eval(x) - want).abs() < 1e-7, "{x}: {} {want}", t.eval(x));
        }
    }

    #[test]
    fn negative_excursion_is_reported() {
        let s = BesselTermSeries {
            decay_rate: 0.0,
            terms: vec![BesselTerm {
                coeff: LogScaledReal::from_f64(-1.0),
                half_power: 2,
                bessel_order: 1,
            }],
            near_zero: None,
        };
        assert!(matches!(s.eval(1.0), Err(Error::NegativeDensity { .. })));
    }

    #[test]
    fn cancellation_noise_is_clamped() {
        // two terms that cancel to round-off
        let c = LogScaledReal::from_f64(1.0);
        let s = BesselTermSeries {
            decay_rate: 0.0,
            terms: vec![
                BesselTerm {
                    coeff: c,
                    half_power: 1,
                    bessel_order: 2,
                },
                BesselTerm {
                    coeff: -c.scale_ln(1e-15),
                    half_power: 1,
                    bessel_order: 2,
                },
            ],
            near_zero: None,
        };
        assert_eq!(s.eval(0.7).unwrap(), 0.0);
    }
}
