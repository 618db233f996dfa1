//! Eigenvalue statistics and ergodic capacity of amplify-and-forward (AF)
//! MIMO dual-hop channels under Rayleigh fading.
//!
//! The crate is `no_std` (it needs `alloc`). Modules, bottom-up:
//!
//! - [`specfun`]: log-gamma, digamma, scaled `K_n` and `E_n`, and the finite
//!   moment sums the closed forms are built from.
//! - [`matrixcore`]: log-scaled determinants and cofactors, plus small dense
//!   complex matrices with a Jacobi Hermitian eigensolver.
//! - [`eigenstats`]: the unordered-eigenvalue density of the cascaded channel,
//!   and expected determinants and log-determinants.
//! - [`capacity`]: exact ergodic capacity by quadrature, the high-SNR affine
//!   expansion, Jensen-type bounds and the single-hop analogies.
//! - [`mcoracle`]: a reproducible Monte Carlo simulator of the channel model.
#![no_std]
// `!(x > 0.0)` is used on purpose: it also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod capacity;
pub mod eigenstats;
mod error;
pub mod matrixcore;
pub mod mcoracle;
pub mod quad;
pub mod specfun;

pub use error::{Error, Result};
pub use specfun::LogScaledReal;

#[cfg(test)]
pub(crate) mod testutil;
