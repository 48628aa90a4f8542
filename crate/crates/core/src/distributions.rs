//! Component distribution families: Normal, generalized Pareto, Weibull.
//!
//! The Pareto and Weibull families live on `x >= 0` and model a single tail.
//! [`TailOrientation`] says how a component is read on the real line: a
//! `Left` component is the family reflected through the origin, so its pdf
//! at `-x` is the family pdf at `x`.

use alloc::vec::Vec;
use rand_core::RngCore;

use crate::error::{Error, Result};
use crate::random::open01;
use crate::special;

/// Parameters of one component family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FamilyParams {
    /// Gaussian with the given mean and standard deviation.
    Normal {
        /// Location.
        mean: f64,
        /// Standard deviation, strictly positive.
        sigma: f64,
    },
    /// Generalized Pareto with strictly positive shape, so the support is
    /// all of `x >= 0` and the tail decays like a power law.
    Gpd {
        /// Shape, strictly positive.
        xi: f64,
        /// Scale, strictly positive.
        sigma: f64,
    },
    /// Weibull with cdf `1 - exp(-(x / lambda)^beta)` on `x >= 0`.
    Weibull {
        /// Shape, strictly positive.
        beta: f64,
        /// Scale (divisor convention), strictly positive.
        lambda: f64,
    },
}

/// How a component family is placed on the real line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailOrientation {
    /// Family evaluated at `-x`; models the left tail.
    Left,
    /// Family evaluated at `x` directly; used for the middle component.
    Center,
    /// Family evaluated at `x`; models the right tail.
    Right,
}

impl FamilyParams {
    /// Check parameter domains.
    pub fn validate(&self) -> Result<()> {
        let bad = |name, value| Err(Error::InvalidParameter { name, value });
        match *self {
            FamilyParams::Normal { mean, sigma } => {
                if !mean.is_finite() {
                    return bad("mean", mean);
                }
                if !(sigma > 0.0) || !sigma.is_finite() {
                    return bad("sigma", sigma);
                }
            }
            FamilyParams::Gpd { xi, sigma } => {
                if !(xi > 0.0) || !xi.is_finite() {
                    return bad("xi", xi);
                }
                if !(sigma > 0.0) || !sigma.is_finite() {
                    return bad("sigma", sigma);
                }
            }
            FamilyParams::Weibull { beta, lambda } => {
                if !(beta > 0.0) || !beta.is_finite() {
                    return bad("beta", beta);
                }
                if !(lambda > 0.0) || !lambda.is_finite() {
                    return bad("lambda", lambda);
                }
            }
        }
        Ok(())
    }

    /// Density of the unoriented family. Zero outside the support.
    pub fn pdf(&self, x: f64) -> f64 {
        match *self {
            FamilyParams::Normal { mean, sigma } => {
                let z = (x - mean) / sigma;
                special::norm_pdf(z) / sigma
            }
            FamilyParams::Gpd { xi, sigma } => {
                if x < 0.0 {
                    return 0.0;
                }
                libm::exp(-(1.0 / xi + 1.0) * libm::log1p(xi * x / sigma)) / sigma
            }
            FamilyParams::Weibull { beta, lambda } => {
                if x < 0.0 {
                    return 0.0;
                }
                let t = x / lambda;
                (beta / lambda) * libm::pow(t, beta - 1.0) * libm::exp(-libm::pow(t, beta))
            }
        }
    }

    /// Natural log of [`FamilyParams::pdf`]; `-inf` outside the support.
    pub fn log_pdf(&self, x: f64) -> f64 {
        match *self {
            FamilyParams::Normal { mean, sigma } => {
                let z = (x - mean) / sigma;
                -0.5 * z * z - special::LN_SQRT_2PI - libm::log(sigma)
            }
            FamilyParams::Gpd { xi, sigma } => {
                if x < 0.0 {
                    return f64::NEG_INFINITY;
                }
                -(1.0 / xi + 1.0) * libm::log1p(xi * x / sigma) - libm::log(sigma)
            }
            FamilyParams::Weibull { beta, lambda } => {
                if x < 0.0 {
                    return f64::NEG_INFINITY;
                }
                let lt = libm::log(x / lambda);
                libm::log(beta / lambda) + (beta - 1.0) * lt - libm::exp(beta * lt)
            }
        }
    }

    /// Cumulative distribution function of the unoriented family.
    pub fn cdf(&self, x: f64) -> f64 {
        match *self {
            FamilyParams::Normal { mean, sigma } => special::norm_cdf((x - mean) / sigma),
            FamilyParams::Gpd { .. } | FamilyParams::Weibull { .. } => {
                if x <= 0.0 {
                    0.0
                } else {
                    -libm::expm1(self.log_sf(x))
                }
            }
        }
    }

    /// Upper tail probability `1 - cdf(x)`, computed without cancellation.
    pub fn survival(&self, x: f64) -> f64 {
        match *self {
            FamilyParams::Normal { mean, sigma } => special::norm_sf((x - mean) / sigma),
            FamilyParams::Gpd { .. } | FamilyParams::Weibull { .. } => {
                if x <= 0.0 {
                    1.0
                } else {
                    libm::exp(self.log_sf(x))
                }
            }
        }
    }

    // Shared tail exponent so cdf and survival cannot drift apart.
    fn log_sf(&self, x: f64) -> f64 {
        match *self {
            FamilyParams::Gpd { xi, sigma } => -libm::log1p(xi * x / sigma) / xi,
            FamilyParams::Weibull { beta, lambda } => -libm::pow(x / lambda, beta),
            FamilyParams::Normal { mean, sigma } => {
                libm::log(special::norm_sf((x - mean) / sigma))
            }
        }
    }

    /// Inverse cdf for `p` strictly inside (0, 1).
    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::ProbabilityOutOfRange(p));
        }
        Ok(self.quantile_unchecked(p))
    }

    pub(crate) fn quantile_unchecked(&self, p: f64) -> f64 {
        match *self {
            FamilyParams::Normal { mean, sigma } => mean + sigma * special::norm_quantile(p),
            FamilyParams::Gpd { xi, sigma } => {
                // (sigma/xi) * ((1-p)^(-xi) - 1)
                (sigma / xi) * libm::expm1(-xi * libm::log1p(-p))
            }
            FamilyParams::Weibull { beta, lambda } => {
                lambda * libm::pow(-libm::log1p(-p), 1.0 / beta)
            }
        }
    }

    /// Draw `n` values by inverting uniform variates. Deterministic for a
    /// given RNG state.
    pub fn sample(&self, rng: &mut dyn RngCore, n: usize) -> Vec<f64> {
        (0..n).map(|_| self.quantile_unchecked(open01(rng))).collect()
    }
}

/// Density at `x` with the family placed according to `orientation`.
pub fn oriented_pdf(params: &FamilyParams, orientation: TailOrientation, x: f64) -> f64 {
    match orientation {
        TailOrientation::Left => params.pdf(-x),
        TailOrientation::Center | TailOrientation::Right => params.pdf(x),
    }
}

/// Log density at `x` under the given orientation; `-inf` off the support.
pub fn oriented_log_pdf(params: &FamilyParams, orientation: TailOrientation, x: f64) -> f64 {
    match orientation {
        TailOrientation::Left => params.log_pdf(-x),
        TailOrientation::Center | TailOrientation::Right => params.log_pdf(x),
    }
}

/// Probability mass below `x` under the given orientation. For `Left` this
/// is the reflected survival `1 - F(-x)`, which is nondecreasing in `x` and
/// reaches 1 as `x` approaches 0 from below.
pub fn oriented_cdf(params: &FamilyParams, orientation: TailOrientation, x: f64) -> f64 {
    match orientation {
        TailOrientation::Left => params.survival(-x),
        TailOrientation::Center | TailOrientation::Right => params.cdf(x),
    }
}

/// Inverse of [`oriented_cdf`] in `x` for fixed parameters.
pub(crate) fn oriented_quantile_unchecked(
    params: &FamilyParams,
    orientation: TailOrientation,
    p: f64,
) -> f64 {
    match orientation {
        TailOrientation::Left => -params.quantile_unchecked(1.0 - p),
        TailOrientation::Center | TailOrientation::Right => params.quantile_unchecked(p),
    }
}
