//! Scalar special functions and the finite sums built from them.

mod bessel;
mod coeffs;
pub mod exact;
mod expint;
mod gamma;
mod scaled;

pub use bessel::{bessel_k_scaled, k01_scaled, ln_bessel_k_orders};
pub use coeffs::{coeff_a, moment_integral, moment_integral_reciprocal, varsigma, varsigma_scaled};
pub use expint::{expint_scaled, g, g_sum};
pub use gamma::{digamma, ln_binomial, ln_factorial, ln_gamma, EULER_GAMMA};
pub use scaled::{LogScaledReal, SignedSum};
