use crate::specfun::ln_factorial;
use crate::{Error, Result};

/// Antenna dimensions reduced to the three integers the closed forms use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Dims {
    pub n_s: u32,
    pub q: u32,
    pub p: u32,
}

impl Dims {
    pub fn new(n_s: u32, q: u32, p: u32) -> Result<Self> {
        if n_s == 0 || q == 0 || p < q {
            return Err(Error::Domain("dimensions need n_s >= 1 and 1 <= q <= p"));
        }
        if n_s > 64 || p > 64 {
            return Err(Error::Domain("antenna counts above 64 are not supported"));
        }
        Ok(Self { n_s, q, p })
    }

    pub fn from_antennas(n_s: u32, n_r: u32, n_d: u32) -> Result<Self> {
        if n_r == 0 || n_d == 0 {
            return Err(Error::Domain("antenna counts must be positive"));
        }
        Self::new(n_s, n_r.min(n_d), n_r.max(n_d))
    }

    pub fn s(self) -> u32 {
        self.n_s.min(self.q)
    }

    /// `ln 𝒦 = -Σ_{j=0}^{q-1} [ln j! + ln (p-q+j)!]`.
    pub fn ln_k(self) -> f64 {
        -(0..self.q)
            .map(|j| ln_factorial(j) + ln_factorial(self.p - self.q + j))
            .sum::<f64>()
    }
}

/// A dual-hop configuration: source, relay and destination antenna counts,
/// relay gain `alpha` and per-hop SNR `rho` (linear).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemConfig {
    pub n_s: u32,
    pub n_r: u32,
    pub n_d: u32,
    pub alpha: f64,
    pub rho: f64,
}

impl SystemConfig {
    pub fn new(n_s: u32, n_r: u32, n_d: u32, alpha: f64, rho: f64) -> Result<Self> {
        Dims::from_antennas(n_s, n_r, n_d)?;
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::Domain("alpha must be positive and finite"));
        }
        if !(rho >= 0.0) || !rho.is_finite() {
            return Err(Error::Domain("rho must be nonnegative and finite"));
        }
        Ok(Self {
            n_s,
            n_r,
            n_d,
            alpha,
            rho,
        })
    }

    pub fn with_rho(self, rho: f64) -> Result<Self> {
        Self::new(self.n_s, self.n_r, self.n_d, self.alpha, rho)
    }

    pub fn dims(&self) -> Dims {
        Dims {
            n_s: self.n_s,
            q: self.q(),
            p: self.p(),
        }
    }

    pub fn q(&self) -> u32 {
        self.n_r.min(self.n_d)
    }

    pub fn p(&self) -> u32 {
        self.n_r.max(self.n_d)
    }

    pub fn s(&self) -> u32 {
        self.n_s.min(self.q())
    }

    /// `a = α / (n_r (1 + ρ))`.
    pub fn a(&self) -> f64 {
        self.alpha / (f64::from(self.n_r) * (1.0 + self.rho))
    }

    pub fn ln_k(&self) -> f64 {
        self.dims().ln_k()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_scalars() {
        let c = SystemConfig::new(2, 3, 4, 2.0, 1.0).unwrap();
        assert_eq!((c.q(), c.p(), c.s()), (3, 4, 2));
        assert!((c.a() - 1.0 / 3.0).abs() < 1e-16);
        // 1/𝒦 = (0! 1! 2!)(1! 2! 3!) = 2 * 12
        assert!((c.ln_k() + libm::log(24.0)).abs() < 1e-14);
        let c = SystemConfig::new(4, 2, 3, 1.0, 0.0).unwrap();
        assert_eq!((c.q(), c.p(), c.s()), (2, 3, 2));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(SystemConfig::new(0, 1, 1, 1.0, 1.0).is_err());
        assert!(SystemConfig::new(1, 0, 1, 1.0, 1.0).is_err());
        assert!(SystemConfig::new(1, 1, 1, 0.0, 1.0).is_err());
        assert!(SystemConfig::new(1, 1, 1, 1.0, -1.0).is_err());
        assert!(SystemConfig::new(1, 1, 1, f64::NAN, 1.0).is_err());
        assert!(Dims::new(2, 3, 2).is_err());
    }
}
