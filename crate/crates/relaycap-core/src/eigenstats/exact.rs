//! Exact assembly shared by the densities and the determinant moments.
//!
//! Everything that goes through a cofactor of the moment matrix is built over
//! `BigRational`. Results that involve `γ` or `g_l(1/a) = e^{1/a} E_{l+1}(1/a)`
//! are kept as [`TranscendentalForm`]s and only collapsed to floating point
//! at the end.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::config::Dims;
use crate::matrixcore::RationalMatrix;
use crate::specfun::exact::{
    factorials, moment_integral_exact, powers, rational_from_f64, rational_to_scaled,
};
use crate::specfun::{g, LogScaledReal, SignedSum, EULER_GAMMA};
use crate::Result;

/// Exact tables for one `(dims, a)` pair.
pub(crate) struct ExactSetup {
    pub d: Dims,
    pub a: BigRational,
    pub apow: Vec<BigRational>,
    pub fact: Vec<BigInt>,
}

impl ExactSetup {
    pub fn new(d: Dims, a: f64) -> Self {
        let a = rational_from_f64(a);
        let apow = powers(&a, 2 * d.q + d.n_s);
        let fact = factorials(2 * (d.p + d.q + d.n_s) + 2);
        Self { d, a, apow, fact }
    }

    /// Factorials only, for the `a → 0` limit.
    pub fn without_gain(d: Dims) -> Self {
        Self {
            d,
            a: BigRational::zero(),
            apow: vec![BigRational::one()],
            fact: factorials(2 * (d.p + d.q + d.n_s) + 2),
        }
    }

    pub fn fact(&self, n: u32) -> BigRational {
        BigRational::from_integer(self.fact[n as usize].clone())
    }

    /// `∫ t^d (1+at)^e e^{-t} dt`.
    pub fn moment(&self, d: u32, e: u32) -> BigRational {
        moment_integral_exact(d, e, &self.apow, &self.fact)
    }

    /// `G_{m,n} = M(p-q+m+n-2, 2q-m-n)`.
    pub fn moment_matrix(&self) -> RationalMatrix {
        let (q, p) = (self.d.q, self.d.p);
        RationalMatrix::from_fn(q as usize, |i, j| {
            let (m, n) = (i as u32 + 1, j as u32 + 1);
            self.moment(p - q + m + n - 2, 2 * q - m - n)
        })
    }

    /// `Ḡ_{m,n} = (p-q+m+n-2)!`.
    pub fn gamma_matrix(&self) -> RationalMatrix {
        let (q, p) = (self.d.q, self.d.p);
        RationalMatrix::from_fn(q as usize, |i, j| self.fact(p - q + i as u32 + j as u32))
    }

    /// The normalizer `𝒦 = 1 / Π_{j<q} j! (p-q+j)!`.
    pub fn k_const(&self) -> BigRational {
        let (q, p) = (self.d.q, self.d.p);
        let mut den = BigInt::one();
        for j in 0..q {
            den *= &self.fact[j as usize] * &self.fact[(p - q + j) as usize];
        }
        BigRational::new(BigInt::one(), den)
    }
}

/// `r + c_γ γ + Σ_l c_l g_l(x)` with exact coefficients.
#[derive(Debug, Clone, Default)]
pub(crate) struct TranscendentalForm {
    pub rational: BigRational,
    pub gamma: BigRational,
    pub g: Vec<BigRational>,
}

impl TranscendentalForm {
    pub fn zero() -> Self {
        Self {
            rational: BigRational::zero(),
            gamma: BigRational::zero(),
            g: Vec::new(),
        }
    }

    pub fn add_g(&mut self, l: u32, c: BigRational) {
        let l = l as usize;
        if self.g.len() <= l {
            self.g.resize(l + 1, BigRational::zero());
        }
        self.g[l] += c;
    }

    /// `self += c · other`.
    pub fn add_scaled(&mut self, other: &Self, c: &BigRational) {
        self.rational += &other.rational * c;
        self.gamma += &other.gamma * c;
        for (l, v) in other.g.iter().enumerate() {
            if !v.is_zero() {
                self.add_g(l as u32, v * c);
            }
        }
    }

    /// Value at `x`; `x_f64` is `x` rounded.
    ///
    /// Through `g_{l+1} = (1 - x g_l)/(l+1)` every `g_l` is an exact affine
    /// function of any single `g_m`. Rewriting the form in each such basis
    /// leaves at most three floating terms; the representation with the least
    /// cancellation is used.
    pub fn eval(&self, x: &BigRational, x_f64: f64) -> Result<LogScaledReal> {
        let top = self.g.iter().rposition(|c| !c.is_zero());
        let gamma_term = rational_to_scaled(&self.gamma) * LogScaledReal::from_f64(EULER_GAMMA);
        let Some(top) = top else {
            let mut s = SignedSum::new();
            s.push(rational_to_scaled(&self.rational));
            s.push(gamma_term);
            return Ok(s.value());
        };
        let gv: Vec<f64> = (0..=top as u32)
            .map(|l| g(l, x_f64))
            .collect::<Result<_>>()?;

        let mut best = {
            let mut s = SignedSum::new();
            s.push(rational_to_scaled(&self.rational));
            s.push(gamma_term);
            for (c, v) in self.g.iter().zip(&gv) {
                s.push(rational_to_scaled(c) * LogScaledReal::from_f64(*v));
            }
            s
        };
        let xinv = x.recip();
        for m in 0..=top {
            // g_l = p[l] + q[l] g_m
            let mut pc = vec![BigRational::zero(); top + 1];
            let mut qc = vec![BigRational::zero(); top + 1];
            qc[m] = BigRational::one();
            for l in m..top {
                let k = BigRational::from_integer(BigInt::from(l + 1));
                pc[l + 1] = (BigRational::one() - x * &pc[l]) / &k;
                qc[l + 1] = -(x * &qc[l]) / &k;
            }
            for l in (1..=m).rev() {
                let k = BigRational::from_integer(BigInt::from(l));
                pc[l - 1] = (BigRational::one() - &k * &pc[l]) * &xinv;
                qc[l - 1] = -(&k * &qc[l]) * &xinv;
            }
            let mut r = self.rational.clone();
            let mut sg = BigRational::zero();
            for (l, c) in self.g.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                r += c * &pc[l];
                sg += c * &qc[l];
            }
            let mut s = SignedSum::new();
            s.push(rational_to_scaled(&r));
            s.push(gamma_term);
            s.push(rational_to_scaled(&sg) * LogScaledReal::from_f64(gv[m]));
            if cancellation(&s) < cancellation(&best) {
                best = s;
            }
        }
        Ok(best.value())
    }
}

/// `ln(largest term / |sum|)`.
fn cancellation(s: &SignedSum) -> f64 {
    let v = s.value();
    if s.largest_term().is_zero() {
        return f64::NEG_INFINITY;
    }
    if v.is_zero() {
        return f64::INFINITY;
    }
    s.largest_term().log_magnitude - v.log_magnitude
}

/// `ψ(n) = H_{n-1} - γ` as a form.
pub(crate) fn digamma_form(n: u32) -> TranscendentalForm {
    let mut f = TranscendentalForm::zero();
    f.rational = crate::specfun::exact::harmonic(n - 1);
    f.gamma = -BigRational::one();
    f
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::{digamma, expint_scaled};

    #[test]
    fn normalizer_matches_log_form() {
        let d = Dims::new(3, 4, 6).unwrap();
        let e = ExactSetup::new(d, 0.5);
        let k = rational_to_scaled(&e.k_const());
        assert!((k.log_magnitude - d.ln_k()).abs() < 1e-12 * d.ln_k().abs());
    }

    #[test]
    fn folded_evaluation_matches_direct() {
        // 3 g_0 - 2 g_2 + 1/7 - γ at several x, all representations must agree
        for &x in &[0.01, 0.7, 3.0, 250.0] {
            let mut f = digamma_form(1);
            f.rational += BigRational::new(1.into(), 7.into());
            f.add_g(0, BigRational::from_integer(3.into()));
            f.add_g(2, BigRational::from_integer((-2).into()));
            let want = 1.0 / 7.0 + digamma(1.0).unwrap() + 3.0 * expint_scaled(1, x).unwrap()
                - 2.0 * expint_scaled(3, x).unwrap();
            let got = f.eval(&rational_from_f64(x), x).unwrap().to_f64();
            assert!(
                (got - want).abs() < 1e-13 * want.abs().max(1.0),
                "x={x}: {got} {want}"
            );
        }
    }

    #[test]
    fn folding_removes_cancellation() {
        // 1 - x g_0 - g_1 = 0 exactly
        let x = 1e-4;
        let xr = rational_from_f64(x);
        let mut f = TranscendentalForm::zero();
        f.rational = BigRational::one();
        f.add_g(0, -xr.clone());
        f.add_g(1, -BigRational::one());
        let v = f.eval(&xr, x).unwrap();
        assert!(v.to_f64().abs() < 1e-300);
    }
}
