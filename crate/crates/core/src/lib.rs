//! Exponential–Generalized-Gamma (EGG) turbulence fading toolkit.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod channel;
pub mod em;
pub mod error;
pub mod gof;
pub mod montecarlo;
pub mod performance;
pub mod scalar;
pub mod special;

pub use error::{Error, Result};
pub use scalar::Real;

/// Double-precision aliases for the common parameter and link types.
pub type Egg = channel::EggParams<f64>;
pub type Eg = channel::EgParams<f64>;
pub type ExpLognormal = channel::ExpLognormalParams<f64>;
pub type Model = channel::MixtureModel<f64>;
pub type Link = performance::LinkBudget<f64>;

/// Single-precision aliases.
pub type Egg32 = channel::EggParams<f32>;
pub type Eg32 = channel::EgParams<f32>;
pub type ExpLognormal32 = channel::ExpLognormalParams<f32>;
pub type Model32 = channel::MixtureModel<f32>;
pub type Link32 = performance::LinkBudget<f32>;
