//! Tail reshaping of a centred normal by warping its argument.
//!
//! The model cdf is `Phi(q(x) / sigma2)` where `q` is the identity near the
//! origin and bends into the power map `f(x) = u * (x/u)^beta` beyond a
//! threshold `u`. A polynomial blend over `(u - eps, u + eps)` joins the two
//! branches; `beta < 1` makes the tail heavier than normal. A left tail is
//! obtained by reflection: `q(x) = -q~(-x)` with a right-form warp `q~`.

use alloc::vec::Vec;

use rand_core::RngCore;

use crate::error::{Error, Result};
use crate::model::Model;
use crate::random::open01;
use crate::roots;
use crate::special::{norm_quantile, LN_SQRT_2PI};

/// Degree of the polynomial joining the identity to the power tail.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WarpMode {
    /// Quartic blend matching tail slope and curvature at the outer edge
    /// but not the tail value, leaving a small jump there. The cdf then
    /// carries an atom at the outer edge and the density integrates to
    /// slightly less than one.
    Quartic,
    /// Quintic blend matching tail value, slope and curvature, giving a
    /// twice continuously differentiable argument map and a proper density.
    #[default]
    Quintic,
}

/// One-sided warp in right-tail form: identity below `u - eps`, polynomial
/// blend across the zone, power map `u * (x/u)^beta` above `u + eps`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailWarp {
    u: f64,
    beta: f64,
    eps: f64,
    mode: WarpMode,
    a3: f64,
    a4: f64,
    a5: f64,
}

impl TailWarp {
    /// Build a warp and solve its blend coefficients.
    ///
    /// Requires `u - eps > 0` so the blend zone stays on the positive axis,
    /// `beta > 0`, and `eps > 0`. Fails with [`Error::NonMonotoneWarp`] when
    /// the blend polynomial is not strictly increasing across the zone or
    /// (quartic mode) when the tail branch starts below the blend's end.
    pub fn new(u: f64, beta: f64, eps: f64, mode: WarpMode) -> Result<Self> {
        if !u.is_finite() || !(u > 0.0) {
            return Err(Error::InvalidParameter { name: "u", value: u });
        }
        if !beta.is_finite() || !(beta > 0.0) {
            return Err(Error::InvalidParameter { name: "beta", value: beta });
        }
        if !eps.is_finite() || !(eps > 0.0) {
            return Err(Error::InvalidParameter { name: "eps", value: eps });
        }
        if !(u - eps > 0.0) {
            return Err(Error::InvalidParameter { name: "u - eps", value: u - eps });
        }
        let mut w = Self { u, beta, eps, mode, a3: 0.0, a4: 0.0, a5: 0.0 };
        let s = 2.0 * eps;
        let edge = u + eps;
        let f = w.tail(edge);
        let fp = w.tail_prime(edge);
        let fpp = w.tail_second(edge);
        match mode {
            WarpMode::Quartic => {
                let d = 6.0 * (fp - 1.0 - (s / 3.0) * fpp) / (s * s);
                let c = (fpp - s * d) / (s * s);
                w.a3 = d / 6.0;
                w.a4 = c / 12.0;
            }
            WarpMode::Quintic => {
                let a = [
                    [s * s * s, s * s * s * s, s * s * s * s * s],
                    [3.0 * s * s, 4.0 * s * s * s, 5.0 * s * s * s * s],
                    [6.0 * s, 12.0 * s * s, 20.0 * s * s * s],
                ];
                let b = [f - (u - eps) - s, fp - 1.0, fpp];
                let x = solve3(a, b);
                w.a3 = x[0];
                w.a4 = x[1];
                w.a5 = x[2];
            }
        }
        // The blend must rise strictly and, in quartic mode, must not end
        // above the tail branch, or the cdf would lose monotonicity.
        for k in 0..=64 {
            let t = s * k as f64 / 64.0;
            if !(w.zone_prime(t) > 0.0) {
                return Err(Error::NonMonotoneWarp);
            }
        }
        if w.value_gap() < -1e-12 {
            return Err(Error::NonMonotoneWarp);
        }
        Ok(w)
    }

    /// Threshold where the tail branch takes over.
    pub fn u(&self) -> f64 {
        self.u
    }

    /// Tail exponent; below one the warped tail is heavier than normal.
    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Blend zone half-width.
    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// Blend polynomial degree.
    pub fn mode(&self) -> WarpMode {
        self.mode
    }

    /// Blend coefficients of `t^3`, `t^4`, `t^5` with `t = x - (u - eps)`.
    pub fn coefficients(&self) -> (f64, f64, f64) {
        (self.a3, self.a4, self.a5)
    }

    /// Tail value minus blend value at the outer zone edge. Positive in
    /// quartic mode for heavy tails, zero (to rounding) in quintic mode.
    pub fn value_gap(&self) -> f64 {
        self.tail(self.u + self.eps) - self.zone_value(2.0 * self.eps)
    }

    fn tail(&self, x: f64) -> f64 {
        self.u * libm::pow(x / self.u, self.beta)
    }

    fn tail_prime(&self, x: f64) -> f64 {
        self.beta * libm::pow(x / self.u, self.beta - 1.0)
    }

    fn tail_second(&self, x: f64) -> f64 {
        self.beta * (self.beta - 1.0) / self.u * libm::pow(x / self.u, self.beta - 2.0)
    }

    fn zone_value(&self, t: f64) -> f64 {
        (self.u - self.eps) + t + t * t * t * (self.a3 + t * (self.a4 + t * self.a5))
    }

    fn zone_prime(&self, t: f64) -> f64 {
        1.0 + t * t * (3.0 * self.a3 + t * (4.0 * self.a4 + 5.0 * self.a5 * t))
    }

    fn zone_second(&self, t: f64) -> f64 {
        t * (6.0 * self.a3 + t * (12.0 * self.a4 + 20.0 * self.a5 * t))
    }

    /// The warped argument. At the outer zone edge the blend branch applies,
    /// so in quartic mode the tail branch starts just beyond it.
    pub fn q(&self, x: f64) -> f64 {
        if x <= self.u - self.eps {
            x
        } else if x <= self.u + self.eps {
            self.zone_value(x - (self.u - self.eps))
        } else {
            self.tail(x)
        }
    }

    /// Derivative of [`TailWarp::q`]; continuous in both modes.
    pub fn q_prime(&self, x: f64) -> f64 {
        if x <= self.u - self.eps {
            1.0
        } else if x <= self.u + self.eps {
            self.zone_prime(x - (self.u - self.eps))
        } else {
            self.tail_prime(x)
        }
    }

    /// Second derivative of [`TailWarp::q`].
    pub fn q_second(&self, x: f64) -> f64 {
        if x <= self.u - self.eps {
            0.0
        } else if x <= self.u + self.eps {
            self.zone_second(x - (self.u - self.eps))
        } else {
            self.tail_second(x)
        }
    }

    /// Inverse of [`TailWarp::q`]. Targets inside the quartic value gap have
    /// no preimage and resolve to the outer zone edge.
    pub fn q_inverse(&self, y: f64) -> f64 {
        if y <= self.u - self.eps {
            return y;
        }
        let blend_top = self.zone_value(2.0 * self.eps);
        if y <= blend_top {
            let f = |x: f64| self.q(x) - y;
            let tol = 1e-13 * (1.0 + self.u + self.eps);
            return roots::bisect(&f, self.u - self.eps, self.u + self.eps, tol);
        }
        let tail_start = self.tail(self.u + self.eps);
        if y < tail_start {
            return self.u + self.eps;
        }
        self.u * libm::pow(y / self.u, 1.0 / self.beta)
    }
}

/// Centred normal with warped tails: cdf `Phi(q(x) / sigma2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransformModel {
    sigma2: f64,
    left: Option<TailWarp>,
    right: Option<TailWarp>,
}

impl TransformModel {
    /// Build from an inner scale and up to two warps. The left warp is given
    /// in right-tail form and applied by reflection.
    pub fn new(sigma2: f64, left: Option<TailWarp>, right: Option<TailWarp>) -> Result<Self> {
        if !sigma2.is_finite() || !(sigma2 > 0.0) {
            return Err(Error::InvalidParameter { name: "sigma2", value: sigma2 });
        }
        Ok(Self { sigma2, left, right })
    }

    /// Two-sided model with thresholds `u1 < 0 < u2`, tail exponents
    /// `beta1` (left) and `beta3` (right), and one shared zone half-width.
    pub fn two_sided(
        u1: f64,
        u2: f64,
        beta1: f64,
        sigma2: f64,
        beta3: f64,
        eps: f64,
        mode: WarpMode,
    ) -> Result<Self> {
        if !(u1 < 0.0) {
            return Err(Error::InvalidParameter { name: "u1", value: u1 });
        }
        Self::new(
            sigma2,
            Some(TailWarp::new(-u1, beta1, eps, mode)?),
            Some(TailWarp::new(u2, beta3, eps, mode)?),
        )
    }

    /// Inner normal scale.
    pub fn sigma2(&self) -> f64 {
        self.sigma2
    }

    /// The left warp (right-tail form), if any.
    pub fn left(&self) -> Option<&TailWarp> {
        self.left.as_ref()
    }

    /// The right warp, if any.
    pub fn right(&self) -> Option<&TailWarp> {
        self.right.as_ref()
    }

    /// The full argument map over the real line.
    pub fn q(&self, x: f64) -> f64 {
        if x >= 0.0 {
            self.right.as_ref().map_or(x, |w| w.q(x))
        } else {
            self.left.as_ref().map_or(x, |w| -w.q(-x))
        }
    }

    /// Derivative of the full argument map.
    pub fn q_prime(&self, x: f64) -> f64 {
        if x >= 0.0 {
            self.right.as_ref().map_or(1.0, |w| w.q_prime(x))
        } else {
            self.left.as_ref().map_or(1.0, |w| w.q_prime(-x))
        }
    }

    /// Cumulative distribution function.
    pub fn cdf(&self, x: f64) -> f64 {
        if x.is_nan() {
            return f64::NAN;
        }
        if x == f64::NEG_INFINITY {
            return 0.0;
        }
        if x == f64::INFINITY {
            return 1.0;
        }
        crate::special::norm_cdf(self.q(x) / self.sigma2)
    }

    /// Probability density function.
    pub fn pdf(&self, x: f64) -> f64 {
        if x.is_nan() {
            return f64::NAN;
        }
        crate::special::norm_pdf(self.q(x) / self.sigma2) * self.q_prime(x) / self.sigma2
    }

    /// Natural log of the density, stable deep in the tails.
    pub fn log_pdf(&self, x: f64) -> f64 {
        if x.is_nan() {
            return f64::NAN;
        }
        let z = self.q(x) / self.sigma2;
        -0.5 * z * z - LN_SQRT_2PI - libm::log(self.sigma2) + libm::log(self.q_prime(x))
    }

    /// Inverse cdf for `p` strictly inside (0, 1). In quartic mode the
    /// probabilities covered by an edge atom all map to that edge.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::ProbabilityOutOfRange(p));
        }
        Ok(self.quantile_inner(p))
    }

    fn quantile_inner(&self, p: f64) -> f64 {
        let z = self.sigma2 * norm_quantile(p);
        if z >= 0.0 {
            self.right.as_ref().map_or(z, |w| w.q_inverse(z))
        } else {
            self.left.as_ref().map_or(z, |w| -w.q_inverse(-z))
        }
    }

    /// Draw `n` values by inverting uniform variates.
    pub fn sample(&self, rng: &mut dyn RngCore, n: usize) -> Vec<f64> {
        (0..n).map(|_| self.quantile_inner(open01(rng))).collect()
    }
}

impl Model for TransformModel {
    fn cdf(&self, x: f64) -> f64 {
        TransformModel::cdf(self, x)
    }

    fn pdf(&self, x: f64) -> f64 {
        TransformModel::pdf(self, x)
    }

    fn log_pdf(&self, x: f64) -> f64 {
        TransformModel::log_pdf(self, x)
    }

    fn quantile(&self, p: f64) -> Result<f64> {
        TransformModel::quantile(self, p)
    }

    fn sample(&self, rng: &mut dyn RngCore, n: usize) -> Vec<f64> {
        TransformModel::sample(self, rng, n)
    }
}

// Dense 3x3 solve with partial pivoting; inputs come from blend geometry
// and are always well conditioned at this size.
fn solve3(mut a: [[f64; 3]; 3], mut b: [f64; 3]) -> [f64; 3] {
    for col in 0..3 {
        let mut pivot = col;
        for row in col + 1..3 {
            if a[row][col].abs() > a[pivot][col].abs() {
                pivot = row;
            }
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..3 {
            let m = a[row][col] / a[col][col];
            for k in col..3 {
                a[row][k] -= m * a[col][k];
            }
            b[row] -= m * b[col];
        }
    }
    let mut x = [0.0; 3];
    for col in (0..3).rev() {
        let mut s = b[col];
        for k in col + 1..3 {
            s -= a[col][k] * x[k];
        }
        x[col] = s / a[col][col];
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use tailmix_testkit::{adaptive_simpson, ks_statistic};

    const U: f64 = 1.5;
    const BETA_LEFT: f64 = 0.45;
    const BETA_RIGHT: f64 = 0.6;

    fn reference(mode: WarpMode) -> TransformModel {
        TransformModel::two_sided(-U, U, BETA_LEFT, 1.0, BETA_RIGHT, 1.0, mode).unwrap()
    }

    #[test]
    fn quartic_coefficients_match_reference() {
        let m = reference(WarpMode::Quartic);
        let (a3, a4, a5) = m.right().unwrap().coefficients();
        assert!((a3 - -0.68806766283250095 / 6.0).abs() < 1e-15);
        assert!((a4 - 0.32446919678570833 / 12.0).abs() < 1e-15);
        assert_eq!(a5, 0.0);
        let (b3, b4, _) = m.left().unwrap().coefficients();
        assert!((b3 - -0.91558124008377969 / 6.0).abs() < 1e-15);
        assert!((b4 - 0.43910281085852234 / 12.0).abs() < 1e-15);
        // Slope and curvature join the tail branch even though the value
        // does not.
        let w = m.right().unwrap();
        assert!((w.q_prime(2.5) - 0.48911586576355365).abs() < 1e-13);
        assert!((w.q_second(2.5) - -0.078258538522168584).abs() < 1e-13);
        // At the edge the blend value sits one gap below the tail value.
        assert!((w.q(2.5) - (2.0379827740148069 - w.value_gap())).abs() < 1e-13);
        assert!((w.q(2.5 + 1e-9) - 2.0379827740148069).abs() < 1e-8);
    }

    #[test]
    fn quintic_coefficients_match_reference() {
        let m = reference(WarpMode::Quintic);
        let (a3, a4, a5) = m.right().unwrap().coefficients();
        assert!((a3 - -0.086202032875587214).abs() < 1e-13);
        assert!((a4 - 0.0056821665347701531).abs() < 1e-13);
        assert!((a5 - 0.0042713866394744415).abs() < 1e-13);
    }

    #[test]
    fn unit_exponent_collapses_to_identity() {
        for mode in [WarpMode::Quartic, WarpMode::Quintic] {
            let w = TailWarp::new(1.5, 1.0, 1.0, mode).unwrap();
            let (a3, a4, a5) = w.coefficients();
            assert!(a3.abs() < 1e-14 && a4.abs() < 1e-14 && a5.abs() < 1e-14);
            assert!(w.value_gap().abs() < 1e-14);
            for x in [0.2, 0.5, 1.3, 2.5, 7.0] {
                assert!((w.q(x) - x).abs() < 1e-13);
                assert!((w.q_prime(x) - 1.0).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn identity_below_the_zone() {
        let m = reference(WarpMode::Quintic);
        for x in [-0.49, -0.2, 0.0, 0.3, 0.5] {
            assert_eq!(m.q(x), x);
            assert_eq!(m.q_prime(x), 1.0);
        }
        // Standard normal core.
        assert!((m.cdf(0.3) - crate::special::norm_cdf(0.3)).abs() < 1e-15);
    }

    #[test]
    fn quintic_joins_are_twice_differentiable() {
        let m = reference(WarpMode::Quintic);
        for w in [m.left().unwrap(), m.right().unwrap()] {
            let (u, e) = (w.u(), w.eps());
            // Inner edge against the identity branch.
            assert!((w.zone_value(0.0) - (u - e)).abs() < 1e-12);
            assert!((w.zone_prime(0.0) - 1.0).abs() < 1e-12);
            assert!(w.zone_second(0.0).abs() < 1e-12);
            // Outer edge against the tail branch.
            assert!((w.zone_value(2.0 * e) - w.tail(u + e)).abs() < 1e-12);
            assert!((w.zone_prime(2.0 * e) - w.tail_prime(u + e)).abs() < 1e-12);
            assert!((w.zone_second(2.0 * e) - w.tail_second(u + e)).abs() < 1e-10);
        }
        // Density is continuous across all four edges.
        for edge in [-2.5, -0.5, 0.5, 2.5] {
            let jump = (m.pdf(edge - 1e-9) - m.pdf(edge + 1e-9)).abs();
            assert!(jump < 1e-9, "pdf jump {jump} at {edge}");
        }
    }

    #[test]
    fn quartic_value_gap_and_atom_masses() {
        let m = reference(WarpMode::Quartic);
        let right_gap = m.right().unwrap().value_gap();
        let left_gap = m.left().unwrap().value_gap();
        assert!((right_gap - 0.022780728743863688).abs() < 1e-14);
        assert!((left_gap - 0.022962065569788583).abs() < 1e-14);
        // Atom mass = cdf jump across the outer edge.
        let right_atom = m.cdf(2.5 + 1e-12) - m.cdf(2.5);
        let left_atom = m.cdf(-2.5) - m.cdf(-2.5 - 1e-12);
        assert!((right_atom - 0.0011659138499070487).abs() < 1e-12);
        assert!((left_atom - 0.001576080869109616).abs() < 1e-12);
        // Quintic mode has no gap.
        let q = reference(WarpMode::Quintic);
        assert!(q.right().unwrap().value_gap().abs() < 1e-12);
        assert!(q.left().unwrap().value_gap().abs() < 1e-12);
    }

    #[test]
    fn reference_cdf_and_pdf_values() {
        let quartic = reference(WarpMode::Quartic);
        assert!((quartic.cdf(2.0) - 0.95992767391021322).abs() < 1e-12);
        assert!((quartic.pdf(2.0) - 0.050999349014599079).abs() < 1e-12);
        assert!((quartic.cdf(-2.0) - 0.047436730517513364).abs() < 1e-12);
        let quintic = reference(WarpMode::Quintic);
        assert!((quintic.cdf(2.0) - 0.96165890921326161).abs() < 1e-12);
        assert!((quintic.pdf(2.0) - 0.050198882868722939).abs() < 1e-12);
        assert!((quintic.cdf(-2.0) - 0.045435862100072591).abs() < 1e-12);
        // Beyond the zone both modes ride the same tail branch.
        assert!((quartic.pdf(3.0) - 0.013683092560971044).abs() < 1e-12);
        assert!((quintic.pdf(3.0) - 0.013683092560971044).abs() < 1e-12);
        for x in [-40.0, -3.0, 1.0, 3.0, 55.0] {
            let m = reference(WarpMode::Quintic);
            assert!((m.log_pdf(x) - libm::log(m.pdf(x))).abs() < 1e-10);
        }
    }

    #[test]
    fn reference_quantiles_in_both_modes() {
        // Outside the blend zones the two modes share every quantile.
        let expect = [
            (0.001, -7.47560807345),
            (0.01, -3.97749757653),
            (0.99, 3.11695302777),
            (0.999, 5.0033134088),
        ];
        for mode in [WarpMode::Quartic, WarpMode::Quintic] {
            let m = reference(mode);
            for (p, x) in expect {
                assert!((m.quantile(p).unwrap() - x).abs() < 1e-6, "p = {p}, {mode:?}");
            }
        }
        // Inside the zone they differ.
        let q93_quartic = reference(WarpMode::Quartic).quantile(0.93).unwrap();
        let q93_quintic = reference(WarpMode::Quintic).quantile(0.93).unwrap();
        assert!((q93_quartic - 1.58472114702).abs() < 1e-6);
        assert!((q93_quintic - 1.56730778995).abs() < 1e-6);
    }

    #[test]
    fn density_mass_accounts_for_edge_atoms() {
        let pieces = [-1500.0, -2.5 - 1e-9, -0.5, 0.5, 2.5 + 1e-9, 1500.0];
        let quintic = reference(WarpMode::Quintic);
        let pdf = |x: f64| quintic.pdf(x);
        let mut total = 0.0;
        for w in pieces.windows(2) {
            total += adaptive_simpson(&pdf, w[0], w[1], 1e-10);
        }
        assert!((total - 1.0).abs() < 1e-7, "quintic integral {total}");

        let quartic = reference(WarpMode::Quartic);
        let pdf = |x: f64| quartic.pdf(x);
        let mut total = 0.0;
        for w in pieces.windows(2) {
            total += adaptive_simpson(&pdf, w[0], w[1], 1e-10);
        }
        let atoms = 0.0011659138499070487 + 0.001576080869109616;
        assert!((total - 0.99725800528098334).abs() < 1e-7, "quartic integral {total}");
        assert!((total - (1.0 - atoms)).abs() < 1e-7);
    }

    #[test]
    fn quantile_inverts_cdf() {
        for mode in [WarpMode::Quartic, WarpMode::Quintic] {
            let m = reference(mode);
            for k in 0..500 {
                let x = -9.0 + 18.0 * k as f64 / 499.0;
                let p = m.cdf(x);
                let back = m.quantile(p).unwrap();
                assert!((back - x).abs() < 1e-7, "{mode:?}: x = {x}, back = {back}");
            }
            for p in [1e-9, 1e-4, 0.2, 0.5, 0.8, 0.93, 1.0 - 1e-4, 1.0 - 1e-9] {
                let x = m.quantile(p).unwrap();
                assert!((m.cdf(x) - p).abs() < 1e-10, "{mode:?}: p = {p}");
            }
            assert!(m.quantile(0.0).is_err());
            assert!(m.quantile(1.0).is_err());
        }
        // Probabilities falling inside a quartic atom resolve to its edge.
        let m = reference(WarpMode::Quartic);
        let p_mid = m.cdf(2.5) + 0.5 * 0.0011659138499070487;
        assert_eq!(m.quantile(p_mid).unwrap(), 2.5);
    }

    #[test]
    fn sampling_agrees_with_cdf() {
        let m = reference(WarpMode::Quintic);
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let draws = m.sample(&mut rng, 100_000);
        let ks = ks_statistic(&draws, &|x| m.cdf(x));
        assert!(ks < 0.006, "ks = {ks}");
    }

    #[test]
    fn smaller_beta_means_heavier_tail() {
        let survival = |beta: f64| {
            let m = TransformModel::new(
                1.0,
                None,
                Some(TailWarp::new(U, beta, 1.0, WarpMode::Quintic).unwrap()),
            )
            .unwrap();
            1.0 - m.cdf(10.0)
        };
        assert!(survival(0.45) > survival(0.6));
        assert!(survival(0.6) > survival(0.8));
        assert!(survival(0.8) > 1.0 - crate::special::norm_cdf(10.0));
    }

    #[test]
    fn far_tail_log_density_rate() {
        // Far out, log pdf behaves like -u^(2 - 2 beta) x^(2 beta) / (2 s^2);
        // a two-point slope in x^(2 beta) recovers that constant within 5%.
        for beta in [0.45, 0.6, 0.8] {
            let m = TransformModel::new(
                1.0,
                None,
                Some(TailWarp::new(U, beta, 1.0, WarpMode::Quintic).unwrap()),
            )
            .unwrap();
            let (x1, x2) = (25.0 * U, 50.0 * U);
            let slope = (m.log_pdf(x2) - m.log_pdf(x1))
                / (libm::pow(x2, 2.0 * beta) - libm::pow(x1, 2.0 * beta));
            let limit = -libm::pow(U, 2.0 - 2.0 * beta) / 2.0;
            assert!(
                ((slope - limit) / limit).abs() < 0.05,
                "beta = {beta}: slope {slope} vs {limit}"
            );
        }
    }

    #[test]
    fn construction_rejects_bad_parameters() {
        assert!(TailWarp::new(-1.0, 0.6, 0.5, WarpMode::Quintic).is_err());
        assert!(TailWarp::new(1.5, 0.0, 1.0, WarpMode::Quintic).is_err());
        assert!(TailWarp::new(1.5, 0.6, 0.0, WarpMode::Quintic).is_err());
        assert!(TailWarp::new(1.5, 0.6, 1.5, WarpMode::Quintic).is_err());
        assert!(TailWarp::new(1.5, 0.6, 2.0, WarpMode::Quintic).is_err());
        assert!(TailWarp::new(1.5, f64::NAN, 1.0, WarpMode::Quintic).is_err());
        assert!(TransformModel::new(0.0, None, None).is_err());
        assert!(TransformModel::two_sided(1.0, 1.5, 0.5, 1.0, 0.6, 0.5, WarpMode::Quintic).is_err());
        // A light quartic tail starts below the blend end: rejected.
        assert!(matches!(
            TailWarp::new(1.5, 3.0, 1.0, WarpMode::Quartic),
            Err(Error::NonMonotoneWarp)
        ));
    }

    #[test]
    fn one_sided_model_keeps_the_other_side_normal() {
        let m = TransformModel::new(
            2.0,
            Some(TailWarp::new(1.5, 0.5, 1.0, WarpMode::Quintic).unwrap()),
            None,
        )
        .unwrap();
        for x in [0.0, 1.0, 4.0, 9.0] {
            assert!((m.cdf(x) - crate::special::norm_cdf(x / 2.0)).abs() < 1e-15);
        }
        assert!(m.cdf(-9.0) > 1.0 - crate::special::norm_cdf(9.0 / 2.0));
    }

    #[test]
    fn symmetric_warps_give_a_symmetric_law() {
        let m =
            TransformModel::two_sided(-U, U, 0.55, 1.3, 0.55, 0.9, WarpMode::Quintic).unwrap();
        for x in [0.3, 1.1, 2.0, 5.0, 20.0] {
            assert!((m.cdf(-x) - (1.0 - m.cdf(x))).abs() < 1e-14);
            assert!((m.pdf(-x) - m.pdf(x)).abs() < 1e-15);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn random_models_are_coherent(
            u in 0.8f64..3.0,
            beta in 0.3f64..1.2,
            eps_frac in 0.2f64..0.9,
            sigma2 in 0.5f64..2.0,
            quintic in any::<bool>(),
        ) {
            let mode = if quintic { WarpMode::Quintic } else { WarpMode::Quartic };
            let eps = eps_frac * u;
            let w = match TailWarp::new(u, beta, eps, mode) {
                Ok(w) => w,
                Err(_) => return Ok(()),
            };
            let m = TransformModel::new(sigma2, Some(w), Some(w)).unwrap();
            let mut prev = 0.0;
            for k in 0..=80 {
                let x = -15.0 + 30.0 * k as f64 / 80.0;
                let c = m.cdf(x);
                prop_assert!((0.0..=1.0).contains(&c));
                prop_assert!(c + 1e-12 >= prev);
                prop_assert!(m.pdf(x) >= 0.0);
                prev = c;
            }
            for p in [0.01, 0.3, 0.7, 0.99] {
                let x = m.quantile(p).unwrap();
                // In quartic mode p may land in an edge atom.
                let gap = m.cdf(x + 1e-12) - m.cdf(x) + 1e-9;
                prop_assert!((m.cdf(x) - p).abs() <= gap);
            }
        }
    }
}
