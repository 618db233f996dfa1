use core::cmp::Ordering;
use core::ops::{Div, Mul, Neg};

/// A real number stored as `sign * exp(log_magnitude)`.
///
/// Products of Gamma functions and cofactors overflow `f64` long before the
/// quantities built from them do, so most of the closed forms are assembled
/// in this representation and converted back only at the end.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogScaledReal {
    pub log_magnitude: f64,
    pub sign: i8,
}

impl LogScaledReal {
    pub const ZERO: Self = Self {
        log_magnitude: f64::NEG_INFINITY,
        sign: 0,
    };
    pub const ONE: Self = Self {
        log_magnitude: 0.0,
        sign: 1,
    };

    /// Positive value `exp(ln)`.
    pub fn from_ln(ln: f64) -> Self {
        if ln == f64::NEG_INFINITY {
            Self::ZERO
        } else {
            Self {
                log_magnitude: ln,
                sign: 1,
            }
        }
    }

    pub fn from_f64(x: f64) -> Self {
        if x == 0.0 {
            Self::ZERO
        } else {
            Self {
                log_magnitude: libm::log(x.abs()),
                sign: if x > 0.0 { 1 } else { -1 },
            }
        }
    }

    pub fn to_f64(self) -> f64 {
        match self.sign {
            0 => 0.0,
            s => f64::from(s) * libm::exp(self.log_magnitude),
        }
    }

    pub fn is_zero(self) -> bool {
        self.sign == 0
    }

    pub fn abs(self) -> Self {
        Self {
            log_magnitude: self.log_magnitude,
            sign: self.sign.abs(),
        }
    }

    pub fn recip(self) -> Self {
        assert!(self.sign != 0, "reciprocal of zero");
        Self {
            log_magnitude: -self.log_magnitude,
            sign: self.sign,
        }
    }

    pub fn powi(self, n: i32) -> Self {
        if n == 0 {
            return Self::ONE;
        }
        if self.sign == 0 {
            return Self::ZERO;
        }
        let sign = if self.sign < 0 && n % 2 != 0 { -1 } else { 1 };
        Self {
            log_magnitude: self.log_magnitude * f64::from(n),
            sign,
        }
    }

    /// Multiply by `exp(ln)`.
    pub fn scale_ln(self, ln: f64) -> Self {
        if self.sign == 0 {
            self
        } else {
            Self {
                log_magnitude: self.log_magnitude + ln,
                sign: self.sign,
            }
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add(self, other: Self) -> Self {
        let mut s = SignedSum::new();
        s.push(self);
        s.push(other);
        s.value()
    }

    /// Ordering by magnitude (zero is smallest).
    pub fn cmp_magnitude(&self, other: &Self) -> Ordering {
        match (self.sign == 0, other.sign == 0) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Less,
            (false, true) => Ordering::Greater,
            _ => self
                .log_magnitude
                .partial_cmp(&other.log_magnitude)
                .unwrap_or(Ordering::Equal),
        }
    }
}

impl Mul for LogScaledReal {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        if self.sign == 0 || rhs.sign == 0 {
            return Self::ZERO;
        }
        Self {
            log_magnitude: self.log_magnitude + rhs.log_magnitude,
            sign: self.sign * rhs.sign,
        }
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl Div for LogScaledReal {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        self * rhs.recip()
    }
}

impl Neg for LogScaledReal {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            log_magnitude: self.log_magnitude,
            sign: -self.sign,
        }
    }
}

impl From<f64> for LogScaledReal {
    fn from(x: f64) -> Self {
        Self::from_f64(x)
    }
}

/// Compensated sum of signed log-scaled terms.
///
/// The running total is held relative to the largest magnitude seen so far;
/// a larger incoming term rescales the accumulator. Neumaier compensation
/// keeps the cancellation error at a few ulps of the largest term.
#[derive(Debug, Clone, Copy)]
pub struct SignedSum {
    scale: f64,
    sum: f64,
    comp: f64,
    max_abs: f64,
}

impl Default for SignedSum {
    fn default() -> Self {
        Self::new()
    }
}

impl SignedSum {
    pub fn new() -> Self {
        Self {
            scale: f64::NEG_INFINITY,
            sum: 0.0,
            comp: 0.0,
            max_abs: 0.0,
        }
    }

    pub fn push(&mut self, term: LogScaledReal) {
        if term.sign == 0 {
            return;
        }
        if term.log_magnitude > self.scale {
            let r = if self.scale == f64::NEG_INFINITY {
                0.0
            } else {
                libm::exp(self.scale - term.log_magnitude)
            };
            self.sum *= r;
            self.comp *= r;
            self.max_abs *= r;
            self.scale = term.log_magnitude;
        }
        let x = f64::from(term.sign) * libm::exp(term.log_magnitude - self.scale);
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
        self.max_abs = self.max_abs.max(x.abs());
    }

    pub fn push_f64(&mut self, x: f64) {
        self.push(LogScaledReal::from_f64(x));
    }

    pub fn value(&self) -> LogScaledReal {
        if self.scale == f64::NEG_INFINITY {
            return LogScaledReal::ZERO;
        }
        LogScaledReal::from_f64(self.sum + self.comp).scale_ln(self.scale)
    }

    /// Largest absolute term pushed so far, log-scaled.
    pub fn largest_term(&self) -> LogScaledReal {
        if self.scale == f64::NEG_INFINITY {
            LogScaledReal::ZERO
        } else {
            LogScaledReal::from_f64(self.max_abs).scale_ln(self.scale)
        }
    }
}

impl Extend<LogScaledReal> for SignedSum {
    fn extend<I: IntoIterator<Item = LogScaledReal>>(&mut self, iter: I) {
        for t in iter {
            self.push(t);
        }
    }
}

impl FromIterator<LogScaledReal> for SignedSum {
    fn from_iter<I: IntoIterator<Item = LogScaledReal>>(iter: I) -> Self {
        let mut s = Self::new();
        s.extend(iter);
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn zero_iff_sign_zero() {
        assert!(LogScaledReal::from_f64(0.0).is_zero());
        assert_eq!(LogScaledReal::from_f64(-0.0).sign, 0);
        assert_eq!(LogScaledReal::from_f64(-2.0).sign, -1);
        assert_eq!((LogScaledReal::ZERO * LogScaledReal::ONE).sign, 0);
    }

    #[test]
    fn huge_products_stay_finite() {
        let big = LogScaledReal::from_ln(600.0);
        let p = big * big * big;
        assert_eq!(p.log_magnitude, 1800.0);
        let back = p / big / big / big;
        assert!((back.to_f64() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cancellation_across_scales() {
        // 1e300 * (1 + 1e-10) - 1e300 = 1e290 at scale ln(1e300) + ...
        let a = LogScaledReal::from_ln(700.0 * 2.0);
        let mut s = SignedSum::new();
        s.push(a);
        s.push(a.scale_ln(libm::log(1e-10)));
        s.push(-a);
        let v = s.value();
        assert!((v.log_magnitude - (1400.0 + libm::log(1e-10))).abs() < 1e-5);
        assert_eq!(v.sign, 1);
    }

    proptest! {
        #[test]
        fn product_matches_f64(x in -1e3f64..1e3, y in -1e3f64..1e3) {
            let p = (LogScaledReal::from_f64(x) * LogScaledReal::from_f64(y)).to_f64();
            prop_assert!((p - x * y).abs() <= 1e-12 * (x * y).abs().max(1e-300));
        }

        #[test]
        fn sum_matches_f64(v in proptest::collection::vec(-1e6f64..1e6, 1..40)) {
            let s: SignedSum = v.iter().map(|&x| LogScaledReal::from_f64(x)).collect();
            let direct: f64 = v.iter().sum();
            let scale: f64 = v.iter().map(|x| x.abs()).sum();
            prop_assert!((s.value().to_f64() - direct).abs() <= 1e-12 * scale.max(1.0));
        }
    }
}
