//! Energy-constrained quantum and private capacities of bosonic Gaussian
//! channels.
//!
//! The crate is organised bottom-up:
//!
//! - [`gaussian_core`]: covariance matrices, symplectic eigenvalues, the `g`
//!   function and Gaussian entropies.
//! - [`gaussian_channels`]: `(X, Y, d)` channels, the pure-loss and
//!   quantum-limited amplifier families with explicit one-mode dilations.
//! - [`capacities`]: closed-form capacities, coherent information, thermal
//!   optimality scans, sweeps and broadband evaluation.
//! - [`allocation`]: energy allocation across heterogeneous parallel channels.
//! - [`code_conversion`]: parameter arithmetic for converting between code
//!   types and the resulting capacity ordering.
//! - [`fock_oracle`]: an independent truncated Fock-space engine used to
//!   cross-check every Gaussian result.

// `!(x >= 0.0)` is used on purpose so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod allocation;
pub mod capacities;
pub mod code_conversion;
mod error;
pub mod fock_oracle;
pub mod gaussian_channels;
pub mod gaussian_core;

pub use error::{Error, Result};
pub use gaussian_channels::{ChannelKind, Family, GaussianChannel};
pub use gaussian_core::{EnergyObservable, GaussianState};
