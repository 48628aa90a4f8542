//! Heavy- and light-tailed distribution models built by mixing a central
//! distribution with separate tail components.
//!
//! Two model families are provided. [`CdfMixtureModel`] glues truncated
//! component cdfs together with smooth cosine blending zones around implicit
//! thresholds (the thresholds solve a density-crossing equation instead of
//! being user-chosen). [`TransformModel`] reshapes the tails of a centred
//! normal by warping its argument with a power map beyond a threshold.
//!
//! On top of the models sit maximum-likelihood estimation
//! ([`estimate::fit`]), distribution diagnostics ([`diagnostics`]) and a
//! seeded Monte Carlo study harness ([`study`]).
//!
//! The crate is `no_std` (with `alloc`); IO, file formats and the command
//! line front end live in the companion `tailmix` crate.

#![no_std]
#![warn(missing_docs)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod diagnostics;
pub mod distributions;
mod error;
pub mod estimate;
pub mod mixture;
pub mod model;
mod nelder_mead;
mod random;
mod roots;
pub mod special;
pub mod study;
pub mod transform;

pub use error::{Error, Result};
pub use mixture::CdfMixtureModel;
pub use model::Model;
pub use transform::TransformModel;
