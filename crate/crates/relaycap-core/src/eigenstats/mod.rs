//! Eigenvalue densities and random-determinant expectations of the
//! cascade `H̃₁† L H̃₁`, where `L = diag(λ_i²/(1 + aλ_i²))` collects the
//! squared singular values `λ_i²` of the second hop.

mod config;
mod density;
mod exact;
mod moments;
pub(crate) use moments::expected_det_scaled;
mod series;

pub use config::{Dims, SystemConfig};
pub use density::{
    conditional_unordered_pdf, rayleigh_product_pdf, unordered_beta_pdf, unordered_beta_pdf_at,
    unordered_pdf, unordered_pdf_at, MIN_BETA_GAP,
};
pub use moments::{
    conditional_expected_det, conditional_expected_logdet, digamma_sum, expected_det,
    expected_det_at, expected_det_rayleigh_product, expected_logdet, expected_logdet_at,
    expected_logdet_q_eq_s, expected_logdet_rayleigh_product,
};
pub use series::{pdf_eval, BesselTerm, BesselTermSeries, CdfTable, NearZeroExpansion};
