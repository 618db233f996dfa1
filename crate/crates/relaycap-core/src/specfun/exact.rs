//! Exact rational arithmetic for the closed-form coefficients.
//!
//! Moment matrices of the cascade spectrum become nearly singular as the
//! relay gain grows (entries agree to 60+ digits at `a ≈ 3e4`), so the
//! determinant algebra runs over `BigRational`, with `a` taken as the exact
//! dyadic value of its `f64`. Only a handful of transcendental constants are
//! brought in at the very end.

use alloc::vec::Vec;

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::scaled::LogScaledReal;

/// Exact value of a finite `f64`.
pub fn rational_from_f64(x: f64) -> BigRational {
    assert!(x.is_finite(), "finite input required");
    if x == 0.0 {
        return BigRational::zero();
    }
    let bits = x.to_bits();
    let neg = bits >> 63 == 1;
    let exp = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    let (mant, e) = if exp == 0 {
        (frac, -1074)
    } else {
        (frac | (1u64 << 52), exp - 1075)
    };
    let m = BigInt::from(mant);
    let m = if neg { -m } else { m };
    if e >= 0 {
        BigRational::from_integer(m << e as usize)
    } else {
        BigRational::new(m, BigInt::one() << (-e) as usize)
    }
}

/// Nearest log-scaled value.
pub fn rational_to_scaled(r: &BigRational) -> LogScaledReal {
    if r.is_zero() {
        return LogScaledReal::ZERO;
    }
    let n = r.numer().abs();
    let d = r.denom();
    // integer quotient with 64 significant bits, then undo the shift
    let k = 64 + d.bits() as i64 - n.bits() as i64;
    let q = if k >= 0 {
        (n << k as usize) / d
    } else {
        n / (d << (-k) as usize)
    };
    let ln = libm::log(q.to_f64().expect("64-bit quotient")) - k as f64 * core::f64::consts::LN_2;
    let v = LogScaledReal::from_ln(ln);
    if r.numer().sign() == Sign::Minus {
        -v
    } else {
        v
    }
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    rational_to_scaled(r).to_f64()
}

/// `0!, 1!, ..., n!`.
pub fn factorials(n: u32) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(n as usize + 1);
    out.push(BigInt::one());
    for k in 1..=n {
        let next = out.last().expect("nonempty") * BigInt::from(k);
        out.push(next);
    }
    out
}

pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for j in 0..k {
        acc = acc * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    acc
}

/// `H_n = Σ_{j=1}^n 1/j`, so that `ψ(n+1) = H_n - γ`.
pub fn harmonic(n: u32) -> BigRational {
    (1..=n).fold(BigRational::zero(), |acc, j| {
        acc + BigRational::new(BigInt::one(), BigInt::from(j))
    })
}

/// Powers `a^0, ..., a^n`.
pub fn powers(a: &BigRational, n: u32) -> Vec<BigRational> {
    let mut out = Vec::with_capacity(n as usize + 1);
    out.push(BigRational::one());
    for _ in 0..n {
        let next = out.last().expect("nonempty") * a;
        out.push(next);
    }
    out
}

/// Exact `Σ_{i=0}^{e} C(e,i) a^i (d+i)!` given the tables.
pub fn moment_integral_exact(d: u32, e: u32, apow: &[BigRational], fact: &[BigInt]) -> BigRational {
    let mut acc = BigRational::zero();
    for i in 0..=e {
        let c = binomial(e, i) * &fact[(d + i) as usize];
        acc += &apow[i as usize] * BigRational::from_integer(c);
    }
    acc
}

/// Exact `𝒜(i, j, l, κ1, κ2)`; see [`super::coeff_a`]. `fact` must reach
/// `2j + 2(κ1-κ2)`.
pub fn coeff_a_exact(
    i: u32,
    j: u32,
    l: u32,
    kappa1: u32,
    kappa2: u32,
    fact: &[BigInt],
) -> BigRational {
    let d = kappa1 - kappa2;
    let num =
        binomial(2 * i - 2 * j, i - j) * binomial(2 * j + 2 * d, 2 * j - l) * &fact[2 * j as usize];
    let den = (BigInt::one() << (2 * i - l) as usize) * &fact[(d + j) as usize] * &fact[j as usize];
    let v = BigRational::new(num, den);
    if l % 2 == 1 {
        -v
    } else {
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::moment_integral;
    use crate::testutil::rel_err;

    #[test]
    fn float_round_trip() {
        for &x in &[1.0, -0.1, 3e4, 2.0 / 3.0, 1e-300, 5e-324, -7.25e200] {
            let r = rational_from_f64(x);
            assert_eq!(r.to_f64().unwrap_or(f64::NAN).to_bits(), x.to_bits(), "{x}");
            if x.abs() > 1e-300 {
                assert!(rel_err(rational_to_f64(&r), x) < 1e-14);
            }
        }
        assert!(rational_from_f64(0.0).is_zero());
    }

    #[test]
    fn huge_rationals_convert() {
        let f = factorials(300);
        let r = BigRational::new(f[300].clone(), f[10].clone());
        let want = crate::specfun::ln_factorial(300) - crate::specfun::ln_factorial(10);
        assert!((rational_to_scaled(&r).log_magnitude - want).abs() < 1e-12 * want);
        assert_eq!(rational_to_scaled(&-r).sign, -1);
    }

    #[test]
    fn combinatorics() {
        assert_eq!(binomial(10, 3), BigInt::from(120));
        assert_eq!(binomial(3, 5), BigInt::zero());
        assert_eq!(
            harmonic(3),
            BigRational::new(BigInt::from(11), BigInt::from(6))
        );
        assert_eq!(factorials(5)[5], BigInt::from(120));
    }

    #[test]
    fn exact_moment_matches_float() {
        let f = factorials(80);
        for &a in &[1e-3, 0.5, 3e4] {
            let ap = powers(&rational_from_f64(a), 40);
            for &(d, e) in &[(0u32, 0u32), (3, 5), (20, 30), (1, 40)] {
                let x = rational_to_scaled(&moment_integral_exact(d, e, &ap, &f));
                let y = moment_integral(d, e, a);
                assert!(
                    (x.log_magnitude - y.log_magnitude).abs()
                        < 1e-13 * y.log_magnitude.abs().max(1.0)
                );
            }
        }
    }
}
