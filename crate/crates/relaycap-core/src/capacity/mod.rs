//! Ergodic capacity: exact evaluation by quadrature over the eigenvalue
//! density, the high-SNR affine expansion, Jensen-type bounds, the
//! fixed-gain limit and the single-hop analogies.

mod analogy;
mod bounds;
mod exact;
mod highsnr;

pub use analogy::{
    af_side_is_simulated, analogy_check, analogy_target, single_hop_point, Regime, SingleHopTarget,
    ANALYTIC_MAX_Q, LARGE_DIMENSION, LARGE_GAIN,
};
pub use bounds::{
    lower_bound, lower_bound_highsnr, lower_bound_nr1, upper_bound, upper_bound_highsnr,
    upper_bound_nr1,
};
pub use exact::{exact_capacity, fixed_alpha_limit};
pub use highsnr::{high_snr_affine, high_snr_char, offset_shift, HighSnrChar, DB_PER_3DB};

/// How a capacity value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Exact,
    Upper,
    Lower,
    HighSnrAffine,
    FixedAlphaLimit,
    MonteCarlo,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::Upper => "upper",
            Method::Lower => "lower",
            Method::HighSnrAffine => "high_snr_affine",
            Method::FixedAlphaLimit => "fixed_alpha_limit",
            Method::MonteCarlo => "monte_carlo",
        }
    }
}

/// A capacity value in bits/s/Hz at linear SNR `rho`.
///
/// `rho` is infinite for the `ρ → ∞` limits. `stderr` is set exactly when
/// `method` is [`Method::MonteCarlo`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapacityPoint {
    pub rho: f64,
    pub value: f64,
    pub method: Method,
    pub stderr: Option<f64>,
}

impl CapacityPoint {
    pub(crate) fn analytic(rho: f64, value: f64, method: Method) -> Self {
        debug_assert!(method != Method::MonteCarlo);
        Self {
            rho,
            value: value.max(0.0),
            method,
            stderr: None,
        }
    }

    pub fn monte_carlo(rho: f64, value: f64, stderr: f64) -> Self {
        Self {
            rho,
            value: value.max(0.0),
            method: Method::MonteCarlo,
            stderr: Some(stderr),
        }
    }
}

/// Variable used for the capacity integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Transform {
    /// Integrate in `u = √λ`; the integrand then decays like `e^{-2u}`.
    SqrtSubstitution,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    pub transform: Transform,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            rel_tol: 1e-9,
            abs_tol: 1e-12,
            max_subdivisions: 2000,
            transform: Transform::SqrtSubstitution,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> crate::Result<()> {
        if !(self.rel_tol > 0.0) || !(self.abs_tol > 0.0) || self.max_subdivisions == 0 {
            return Err(crate::Error::Domain(
                "quadrature tolerances must be positive",
            ));
        }
        Ok(())
    }
}
