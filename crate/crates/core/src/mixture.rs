//! Models built by summing truncated component cdfs with smooth zone blending.
//!
//! Each component owns a band of the real line delimited by thresholds. Its
//! cdf is accumulated only over that band (truncated, not renormalized) and
//! the global factor kappa rescales the sum to a proper cdf. Around each
//! threshold a mixing zone of half-width epsilon warps the component
//! arguments with a cosine map so the resulting density is continuously
//! differentiable.
//!
//! Thresholds are usually not chosen by the user: they solve the
//! density-crossing equation between adjacent components, taking the
//! outermost crossing so the tail component dominates beyond it.

use alloc::vec::Vec;

use rand_core::RngCore;

use crate::distributions::{
    oriented_cdf, oriented_log_pdf, oriented_pdf, oriented_quantile_unchecked, FamilyParams,
    TailOrientation,
};
use crate::error::{Error, Result};
use crate::random::open01;
use crate::roots;

const PI: f64 = core::f64::consts::PI;

/// One component of a mixture: a family placed on the real line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Component {
    /// Distribution family of this component.
    pub family: FamilyParams,
    /// How the family is read on the real line.
    pub orientation: TailOrientation,
}

impl Component {
    /// Left-tail component (family reflected through the origin).
    pub fn left(family: FamilyParams) -> Self {
        Self { family, orientation: TailOrientation::Left }
    }

    /// Central component.
    pub fn center(family: FamilyParams) -> Self {
        Self { family, orientation: TailOrientation::Center }
    }

    /// Right-tail component.
    pub fn right(family: FamilyParams) -> Self {
        Self { family, orientation: TailOrientation::Right }
    }

    fn pdf(&self, x: f64) -> f64 {
        oriented_pdf(&self.family, self.orientation, x)
    }

    fn log_pdf(&self, x: f64) -> f64 {
        oriented_log_pdf(&self.family, self.orientation, x)
    }

    fn cdf(&self, x: f64) -> f64 {
        if x == f64::NEG_INFINITY {
            return 0.0;
        }
        if x == f64::INFINITY {
            return 1.0;
        }
        oriented_cdf(&self.family, self.orientation, x)
    }
}

/// Band geometry for one component: its thresholds and zone half-widths.
///
/// The monotone map [`MixingParams::q`] squeezes the widened interval
/// `(u_lower - eps_lower, u_upper + eps_upper)` onto the band
/// `(u_lower, u_upper)`. Infinite bounds drop the corresponding zone.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixingParams {
    /// Lower band end, or `-inf` for the leftmost band.
    pub u_lower: f64,
    /// Half-width of the zone around `u_lower`; ignored when infinite.
    pub eps_lower: f64,
    /// Upper band end, or `+inf` for the rightmost band.
    pub u_upper: f64,
    /// Half-width of the zone around `u_upper`; ignored when infinite.
    pub eps_upper: f64,
}

impl MixingParams {
    /// Check zone geometry: nonnegative finite half-widths and disjoint,
    /// ordered zones.
    pub fn validate(&self) -> Result<()> {
        if !(self.eps_lower >= 0.0) || !self.eps_lower.is_finite() {
            return Err(Error::InvalidParameter { name: "eps_lower", value: self.eps_lower });
        }
        if !(self.eps_upper >= 0.0) || !self.eps_upper.is_finite() {
            return Err(Error::InvalidParameter { name: "eps_upper", value: self.eps_upper });
        }
        if self.u_lower.is_nan() || self.u_upper.is_nan() {
            return Err(Error::InvalidParameter { name: "u", value: f64::NAN });
        }
        if self.u_lower.is_finite() || self.u_upper.is_finite() {
            let lo = if self.u_lower.is_finite() { self.u_lower + self.eps_lower } else { self.u_lower };
            let hi = if self.u_upper.is_finite() { self.u_upper - self.eps_upper } else { self.u_upper };
            if !(lo < hi) {
                return Err(Error::ZoneOverlap { lower_end: lo, upper_start: hi });
            }
        }
        Ok(())
    }

    fn lower_zone(&self) -> Option<(f64, f64)> {
        (self.u_lower.is_finite() && self.eps_lower > 0.0).then_some((self.u_lower, self.eps_lower))
    }

    fn upper_zone(&self) -> Option<(f64, f64)> {
        (self.u_upper.is_finite() && self.eps_upper > 0.0).then_some((self.u_upper, self.eps_upper))
    }

    /// The five-branch monotone argument map.
    ///
    /// Shifts by `+eps_lower` below the lower zone, blends through each zone
    /// with a cosine term, is the identity in between, and shifts by
    /// `-eps_upper` above the upper zone.
    pub fn q(&self, x: f64) -> f64 {
        if let Some((u, e)) = self.lower_zone() {
            if x < u - e {
                return x + e;
            }
            if x <= u + e {
                return 0.5 * (x + u + e) - (e / PI) * libm::cos(PI * (x - u) / (2.0 * e));
            }
        }
        if let Some((u, e)) = self.upper_zone() {
            if x > u + e {
                return x - e;
            }
            if x >= u - e {
                return 0.5 * (x + u - e) + (e / PI) * libm::cos(PI * (x - u) / (2.0 * e));
            }
        }
        x
    }

    /// Exact derivative of [`MixingParams::q`]. Takes values in [0, 1]; at
    /// zone edges the zone-side closed form applies, so the outer edge of a
    /// band's zone evaluates to 0 and the inner edge to 1.
    pub fn q_prime(&self, x: f64) -> f64 {
        if let Some((u, e)) = self.lower_zone() {
            if x < u - e {
                return 1.0;
            }
            if x <= u + e {
                return 0.5 + 0.5 * libm::sin(PI * (x - u) / (2.0 * e));
            }
        }
        if let Some((u, e)) = self.upper_zone() {
            if x > u + e {
                return 1.0;
            }
            if x >= u - e {
                return 0.5 - 0.5 * libm::sin(PI * (x - u) / (2.0 * e));
            }
        }
        1.0
    }

    /// Exact second derivative of [`MixingParams::q`]; zero outside zones
    /// and at every zone edge.
    pub fn q_second(&self, x: f64) -> f64 {
        if let Some((u, e)) = self.lower_zone() {
            if x >= u - e && x <= u + e {
                return (PI / (4.0 * e)) * libm::cos(PI * (x - u) / (2.0 * e));
            }
        }
        if let Some((u, e)) = self.upper_zone() {
            if x >= u - e && x <= u + e {
                return -(PI / (4.0 * e)) * libm::cos(PI * (x - u) / (2.0 * e));
            }
        }
        0.0
    }
}

/// Rule for picking the zone half-widths when building a model.
#[derive(Debug, Clone, PartialEq)]
pub enum Epsilons {
    /// Every half-width equals the central Normal component's sigma.
    CentralSigma,
    /// Explicit half-width per threshold.
    Explicit(Vec<f64>),
}

/// Find the density crossing between two adjacent components.
///
/// Scans a 512-point geometric grid over `search` (both endpoints strictly
/// on the same side of zero) starting at the end farthest from zero, then
/// bisects the first sign change of the log-density difference. This selects
/// the outermost crossing, beyond which the outer component dominates.
pub fn solve_threshold(below: &Component, above: &Component, search: (f64, f64)) -> Result<f64> {
    let (a, b) = search;
    let (inner, outer) = if a.abs() <= b.abs() { (a, b) } else { (b, a) };
    if inner == 0.0 || inner.signum() != outer.signum() {
        return Err(Error::InvalidConfig("threshold search interval must exclude zero"));
    }
    let h = move |x: f64| below.log_pdf(x) - above.log_pdf(x);
    let (lo, hi) = roots::outermost_sign_change(&h, inner, outer, 512)
        .ok_or(Error::NoCrossing { lo: inner.min(outer), hi: inner.max(outer) })?;
    Ok(roots::bisect(&h, lo, hi, 1e-10))
}

/// A normalized model assembled from truncated component cdfs.
#[derive(Debug, Clone, PartialEq)]
pub struct CdfMixtureModel {
    components: Vec<Component>,
    thresholds: Vec<f64>,
    epsilons: Vec<f64>,
    kappa: f64,
    band_masses: Vec<f64>,
    // Oriented cdf of component i at its lower band end.
    lower_cdfs: Vec<f64>,
    // Mass of all bands strictly below band i.
    masses_below: Vec<f64>,
}

impl CdfMixtureModel {
    /// Build with thresholds solved from the density-crossing equation.
    ///
    /// Requires exactly one `Center` component, which must be Normal; its
    /// location and scale anchor the crossing search (from one thousandth of
    /// a standard deviation out to the 1e-12 quantile).
    pub fn with_solved_thresholds(components: Vec<Component>, eps: Epsilons) -> Result<Self> {
        for c in &components {
            c.family.validate()?;
        }
        let center = Self::center_index(&components)?;
        let (mean, sigma) = match components[center].family {
            FamilyParams::Normal { mean, sigma } => (mean, sigma),
            _ => return Err(Error::InvalidConfig("solved thresholds need a Normal center")),
        };
        let outer_mag = sigma * crate::special::norm_quantile(1e-12).abs();
        let mut thresholds = Vec::with_capacity(components.len() - 1);
        for i in 0..components.len() - 1 {
            let side = if i < center { -1.0 } else { 1.0 };
            let below = components[i];
            let above = components[i + 1];
            // Work relative to the center so the geometric scan has a
            // well-defined origin even for a nonzero mean.
            let h = move |t: f64| below.log_pdf(mean + t) - above.log_pdf(mean + t);
            let (lo, hi) =
                roots::outermost_sign_change(&h, side * 1e-3 * sigma, side * outer_mag, 512)
                    .ok_or(Error::NoCrossing {
                        lo: mean - outer_mag,
                        hi: mean + outer_mag,
                    })?;
            thresholds.push(mean + roots::bisect(&h, lo, hi, 1e-10));
        }
        let epsilons = match eps {
            Epsilons::CentralSigma => alloc::vec![sigma; components.len() - 1],
            Epsilons::Explicit(e) => e,
        };
        Self::assemble(components, thresholds, epsilons)
    }

    /// Build with user-chosen thresholds and zone half-widths.
    pub fn with_explicit_thresholds(
        components: Vec<Component>,
        thresholds: Vec<f64>,
        epsilons: Vec<f64>,
    ) -> Result<Self> {
        for c in &components {
            c.family.validate()?;
        }
        Self::assemble(components, thresholds, epsilons)
    }

    /// Three-component model with generalized Pareto tails and a centred
    /// Normal; thresholds solved, all zone half-widths equal to `sigma2`.
    pub fn gpd_normal_gpd(xi1: f64, sigma1: f64, sigma2: f64, xi3: f64, sigma3: f64) -> Result<Self> {
        Self::with_solved_thresholds(
            alloc::vec![
                Component::left(FamilyParams::Gpd { xi: xi1, sigma: sigma1 }),
                Component::center(FamilyParams::Normal { mean: 0.0, sigma: sigma2 }),
                Component::right(FamilyParams::Gpd { xi: xi3, sigma: sigma3 }),
            ],
            Epsilons::CentralSigma,
        )
    }

    /// Three-component model with Weibull tails and a centred Normal.
    pub fn weibull_normal_weibull(
        beta1: f64,
        lambda1: f64,
        sigma2: f64,
        beta3: f64,
        lambda3: f64,
    ) -> Result<Self> {
        Self::with_solved_thresholds(
            alloc::vec![
                Component::left(FamilyParams::Weibull { beta: beta1, lambda: lambda1 }),
                Component::center(FamilyParams::Normal { mean: 0.0, sigma: sigma2 }),
                Component::right(FamilyParams::Weibull { beta: beta3, lambda: lambda3 }),
            ],
            Epsilons::CentralSigma,
        )
    }

    fn center_index(components: &[Component]) -> Result<usize> {
        let mut found = None;
        for (i, c) in components.iter().enumerate() {
            if c.orientation == TailOrientation::Center {
                if found.is_some() {
                    return Err(Error::InvalidConfig("more than one Center component"));
                }
                found = Some(i);
            }
        }
        found.ok_or(Error::InvalidConfig("no Center component"))
    }

    fn assemble(
        components: Vec<Component>,
        thresholds: Vec<f64>,
        epsilons: Vec<f64>,
    ) -> Result<Self> {
        let k = components.len();
        if k < 2 {
            return Err(Error::InvalidConfig("need at least two components"));
        }
        if thresholds.len() != k - 1 || epsilons.len() != k - 1 {
            return Err(Error::InvalidConfig("need one threshold and epsilon per adjacent pair"));
        }
        for c in &components {
            c.family.validate()?;
        }
        for &u in &thresholds {
            if !u.is_finite() {
                return Err(Error::InvalidParameter { name: "threshold", value: u });
            }
        }
        for &e in &epsilons {
            if !(e >= 0.0) || !e.is_finite() {
                return Err(Error::InvalidParameter { name: "epsilon", value: e });
            }
        }
        for w in thresholds.windows(2) {
            if !(w[0] < w[1]) {
                return Err(Error::InvalidConfig("thresholds must be strictly increasing"));
            }
        }
        for j in 1..k - 1 {
            let lower_end = thresholds[j - 1] + epsilons[j - 1];
            let upper_start = thresholds[j] - epsilons[j];
            if !(lower_end < upper_start) {
                return Err(Error::ZoneOverlap { lower_end, upper_start });
            }
        }

        let mut band_masses = Vec::with_capacity(k);
        let mut lower_cdfs = Vec::with_capacity(k);
        let mut masses_below = Vec::with_capacity(k);
        let mut total = 0.0;
        for (i, c) in components.iter().enumerate() {
            let lo = if i == 0 { f64::NEG_INFINITY } else { thresholds[i - 1] };
            let hi = if i == k - 1 { f64::INFINITY } else { thresholds[i] };
            // An unbounded family density inside the closed band would make
            // the model density unbounded; Weibull with beta < 1 blows up at
            // the family origin.
            if let FamilyParams::Weibull { beta, .. } = c.family {
                if beta < 1.0 && lo <= 0.0 && hi >= 0.0 {
                    return Err(Error::InvalidConfig(
                        "Weibull component with beta < 1 cannot span the origin",
                    ));
                }
            }
            let f_lo = c.cdf(lo);
            let mass = c.cdf(hi) - f_lo;
            if !(mass > 0.0) {
                return Err(Error::EmptyBand { index: i });
            }
            masses_below.push(total);
            total += mass;
            band_masses.push(mass);
            lower_cdfs.push(f_lo);
        }
        let kappa = 1.0 / total;
        if !kappa.is_finite() || kappa <= 0.0 {
            return Err(Error::InvalidConfig("band masses do not sum to a positive value"));
        }
        Ok(Self { components, thresholds, epsilons, kappa, band_masses, lower_cdfs, masses_below })
    }

    /// Global normalizer. Below one when the tails are heavier than the
    /// center, above one when they are lighter.
    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    /// Band separation points, strictly increasing.
    pub fn thresholds(&self) -> &[f64] {
        &self.thresholds
    }

    /// Zone half-widths, one per threshold.
    pub fn epsilons(&self) -> &[f64] {
        &self.epsilons
    }

    /// The ordered components.
    pub fn components(&self) -> &[Component] {
        &self.components
    }

    /// Unnormalized probability mass of each component over its band.
    pub fn band_masses(&self) -> &[f64] {
        &self.band_masses
    }

    /// The argument map geometry for component `i`.
    pub fn mixing_params(&self, i: usize) -> MixingParams {
        let k = self.components.len();
        MixingParams {
            u_lower: if i == 0 { f64::NEG_INFINITY } else { self.thresholds[i - 1] },
            eps_lower: if i == 0 { 0.0 } else { self.epsilons[i - 1] },
            u_upper: if i == k - 1 { f64::INFINITY } else { self.thresholds[i] },
            eps_upper: if i == k - 1 { 0.0 } else { self.epsilons[i] },
        }
    }

    // Truncated cdf of component i evaluated at its warped argument.
    fn band_contribution(&self, i: usize, x: f64) -> f64 {
        let mp = self.mixing_params(i);
        let q = mp.q(x);
        if q <= mp.u_lower {
            return 0.0;
        }
        if q >= mp.u_upper {
            return self.band_masses[i];
        }
        let raw = self.components[i].cdf(q) - self.lower_cdfs[i];
        raw.clamp(0.0, self.band_masses[i])
    }

    /// Cumulative distribution function.
    pub fn cdf(&self, x: f64) -> f64 {
        if x.is_nan() {
            return f64::NAN;
        }
        let mut acc = 0.0;
        for i in 0..self.components.len() {
            acc += self.band_contribution(i, x);
        }
        (self.kappa * acc).clamp(0.0, 1.0)
    }

    // Index of the zone containing x, if any (zones are closed intervals).
    fn zone_index(&self, x: f64) -> Option<usize> {
        self.thresholds
            .iter()
            .zip(self.epsilons.iter())
            .position(|(&u, &e)| e > 0.0 && x >= u - e && x <= u + e)
    }

    // Index of the band containing x when outside every zone.
    fn band_index(&self, x: f64) -> usize {
        self.thresholds.iter().filter(|&&u| u <= x).count()
    }

    /// Probability density function.
    pub fn pdf(&self, x: f64) -> f64 {
        if x.is_nan() {
            return f64::NAN;
        }
        if let Some(j) = self.zone_index(x) {
            let below = self.mixing_params(j);
            let above = self.mixing_params(j + 1);
            let t1 = self.components[j].pdf(below.q(x)) * below.q_prime(x);
            let t2 = self.components[j + 1].pdf(above.q(x)) * above.q_prime(x);
            self.kappa * (t1 + t2)
        } else {
            self.kappa * self.components[self.band_index(x)].pdf(x)
        }
    }

    /// Natural log of the density, stable deep in the tails.
    pub fn log_pdf(&self, x: f64) -> f64 {
        if x.is_nan() {
            return f64::NAN;
        }
        let ln_kappa = libm::log(self.kappa);
        if let Some(j) = self.zone_index(x) {
            let below = self.mixing_params(j);
            let above = self.mixing_params(j + 1);
            let t1 = self.components[j].log_pdf(below.q(x)) + libm::log(below.q_prime(x));
            let t2 = self.components[j + 1].log_pdf(above.q(x)) + libm::log(above.q_prime(x));
            ln_kappa + log_add_exp(t1, t2)
        } else {
            ln_kappa + self.components[self.band_index(x)].log_pdf(x)
        }
    }

    /// Inverse cdf for `p` strictly inside (0, 1). Pure band regions invert
    /// analytically through the component quantile; zone regions bisect.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::ProbabilityOutOfRange(p));
        }
        Ok(self.quantile_inner(p))
    }

    fn quantile_inner(&self, p: f64) -> f64 {
        let k = self.components.len();
        for j in 0..k - 1 {
            let (u, e) = (self.thresholds[j], self.epsilons[j]);
            if p < self.cdf(u - e) {
                return self.invert_band(j, p);
            }
            if p <= self.cdf(u + e) {
                if e == 0.0 {
                    return u;
                }
                let f = |x: f64| self.cdf(x) - p;
                let tol = 1e-13 * (1.0 + u.abs() + e);
                return roots::bisect(&f, u - e, u + e, tol);
            }
        }
        self.invert_band(k - 1, p)
    }

    // Analytic inversion inside band i's pure region.
    fn invert_band(&self, i: usize, p: f64) -> f64 {
        let target = p / self.kappa - self.masses_below[i] + self.lower_cdfs[i];
        let target = target.clamp(f64::MIN_POSITIVE, 1.0 - f64::EPSILON / 2.0);
        let c = &self.components[i];
        oriented_quantile_unchecked(&c.family, c.orientation, target)
    }

    /// Draw `n` values by inverting uniform variates.
    pub fn sample(&self, rng: &mut dyn RngCore, n: usize) -> Vec<f64> {
        (0..n).map(|_| self.quantile_inner(open01(rng))).collect()
    }
}

fn log_add_exp(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if hi == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    if lo == f64::NEG_INFINITY {
        return hi;
    }
    hi + libm::log1p(libm::exp(lo - hi))
}
