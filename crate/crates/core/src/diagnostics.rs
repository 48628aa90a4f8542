//! Distribution comparison and goodness-of-fit summaries.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::model::Model;
use crate::special::norm_quantile;

/// Probabilities used by [`quantile_table`] when none are given: both far
/// tails at the one-per-mille and one-percent levels.
pub const DEFAULT_PROBS: [f64; 4] = [0.001, 0.01, 0.99, 0.999];

/// Binned L1 distance between two laws, using 100 cells anchored to a
/// reference model: 98 equal-width cells spanning the reference's inner
/// 99.8% range plus one unbounded cell on each side. Returns half the sum
/// of absolute cell-probability differences, so the value lies in [0, 1].
pub fn l1_distance(a: &dyn Model, b: &dyn Model, reference: &dyn Model) -> f64 {
    let lo = reference.quantile(0.001).expect("0.001 is a valid probability");
    let hi = reference.quantile(0.999).expect("0.999 is a valid probability");
    let width = (hi - lo) / 98.0;

    let mut total = 0.0;
    let mut prev_a = 0.0;
    let mut prev_b = 0.0;
    for k in 0..=98 {
        let edge = lo + width * k as f64;
        let ca = a.cdf(edge);
        let cb = b.cdf(edge);
        total += ((ca - prev_a) - (cb - prev_b)).abs();
        prev_a = ca;
        prev_b = cb;
    }
    total += ((1.0 - prev_a) - (1.0 - prev_b)).abs();
    0.5 * total
}

/// Evaluate `model` quantiles at each probability, returning `(p, x)` rows.
pub fn quantile_table(model: &dyn Model, probs: &[f64]) -> Result<Vec<(f64, f64)>> {
    probs.iter().map(|&p| model.quantile(p).map(|x| (p, x))).collect()
}

/// Normal probability plot data: `(normal score, standardized order
/// statistic)` rows at plotting positions `t / (n + 1)`.
///
/// The data are standardized by their own mean and standard deviation, so a
/// sample from any normal law lies near the diagonal and heavy tails bend
/// away from it at the ends.
pub fn qq_normal_data(data: &[f64]) -> Result<Vec<(f64, f64)>> {
    if data.len() < 2 {
        return Err(Error::InvalidData("need at least 2 observations"));
    }
    if data.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidData("data must be finite"));
    }
    let n = data.len() as f64;
    let mean = data.iter().sum::<f64>() / n;
    let sd = libm::sqrt(data.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0));
    if !(sd > 0.0) {
        return Err(Error::InvalidData("data variance is zero"));
    }
    let mut sorted = data.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    Ok(sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| (norm_quantile((i + 1) as f64 / (n + 1.0)), (x - mean) / sd))
        .collect())
}

/// Double-log tail plot series for a model against observed data.
#[derive(Debug, Clone, PartialEq)]
pub struct TailPlotSeries {
    /// Lower-tail points `(ln(t / (n+1)), ln F(x_(t)))` for each order
    /// statistic; a well-fitting model tracks the diagonal.
    pub left: Vec<(f64, f64)>,
    /// Upper-tail points `(ln((n+1-t) / (n+1)), ln(1 - F(x_(t))))`.
    pub right: Vec<(f64, f64)>,
    /// How many model probabilities hit the underflow floor of 1e-300.
    pub clamped: usize,
}

/// Compute the [`TailPlotSeries`] of `model` over `data` (at least 10
/// finite points). Model probabilities below 1e-300 are clamped and
/// counted rather than producing infinities.
pub fn tail_plot_series(model: &dyn Model, data: &[f64]) -> Result<TailPlotSeries> {
    if data.len() < 10 {
        return Err(Error::InvalidData("need at least 10 observations"));
    }
    if data.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidData("data must be finite"));
    }
    let mut sorted = data.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    let np1 = (data.len() + 1) as f64;

    let mut clamped = 0usize;
    let mut floored_log = |p: f64| {
        if p < 1e-300 {
            clamped += 1;
            libm::log(1e-300)
        } else {
            libm::log(p)
        }
    };

    let mut left = Vec::with_capacity(sorted.len());
    let mut right = Vec::with_capacity(sorted.len());
    for (i, &x) in sorted.iter().enumerate() {
        let t = (i + 1) as f64;
        let c = model.cdf(x);
        left.push((libm::log(t / np1), floored_log(c)));
        right.push((libm::log((np1 - t) / np1), floored_log(1.0 - c)));
    }
    Ok(TailPlotSeries { left, right, clamped })
}
