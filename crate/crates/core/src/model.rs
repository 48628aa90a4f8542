//! Common interface over every distribution shape in this crate.

use alloc::vec::Vec;

use rand_core::RngCore;

use crate::distributions::FamilyParams;
use crate::error::Result;
use crate::mixture::CdfMixtureModel;
use crate::random::open01;

/// A continuous univariate distribution: cdf, density and inverse cdf.
///
/// The trait is object safe so front ends can hold a `Box<dyn Model>`
/// regardless of which concrete shape was fitted.
pub trait Model {
    /// Cumulative distribution function.
    fn cdf(&self, x: f64) -> f64;

    /// Probability density function.
    fn pdf(&self, x: f64) -> f64;

    /// Natural log of the density, finite wherever the density is positive.
    fn log_pdf(&self, x: f64) -> f64;

    /// Inverse cdf; `p` must lie strictly inside (0, 1).
    fn quantile(&self, p: f64) -> Result<f64>;

    /// Draw `n` values by inverting uniform variates, so equal seeds give
    /// equal draws across model kinds.
    fn sample(&self, rng: &mut dyn RngCore, n: usize) -> Vec<f64> {
        (0..n)
            .map(|_| {
                let p = open01(rng);
                self.quantile(p).expect("open01 stays strictly inside (0, 1)")
            })
            .collect()
    }
}

impl Model for FamilyParams {
    fn cdf(&self, x: f64) -> f64 {
        FamilyParams::cdf(self, x)
    }

    fn pdf(&self, x: f64) -> f64 {
        FamilyParams::pdf(self, x)
    }

    fn log_pdf(&self, x: f64) -> f64 {
        FamilyParams::log_pdf(self, x)
    }

    fn quantile(&self, p: f64) -> Result<f64> {
        FamilyParams::quantile(self, p)
    }
}

impl Model for CdfMixtureModel {
    fn cdf(&self, x: f64) -> f64 {
        CdfMixtureModel::cdf(self, x)
    }

    fn pdf(&self, x: f64) -> f64 {
        CdfMixtureModel::pdf(self, x)
    }

    fn log_pdf(&self, x: f64) -> f64 {
        CdfMixtureModel::log_pdf(self, x)
    }

    fn quantile(&self, p: f64) -> Result<f64> {
        CdfMixtureModel::quantile(self, p)
    }

    fn sample(&self, rng: &mut dyn RngCore, n: usize) -> Vec<f64> {
        CdfMixtureModel::sample(self, rng, n)
    }
}
