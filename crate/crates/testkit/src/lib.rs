//! Numerical oracles for tests: quadrature, empirical-distribution statistics
//! and small summary helpers. This crate is a dev-dependency only; nothing in
//! the library crates may depend on it, so every check stays independent of
//! the implementation path it verifies.

/// Adaptive Simpson integration of `f` over `[a, b]` to absolute tolerance `tol`.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(f: &dyn Fn(f64) -> f64, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
        let m = 0.5 * (a + b);
        let fm = f(m);
        (m, fm, (b - a) / 6.0 * (fa + 4.0 * fm + fb))
    }

    fn recurse(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        m: f64,
        fm: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let (ml, fml, left) = simpson(f, a, fa, m, fm);
        let (mr, fmr, right) = simpson(f, m, fm, b, fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        recurse(f, a, fa, m, fm, ml, fml, left, 0.5 * tol, depth - 1)
            + recurse(f, m, fm, b, fb, mr, fmr, right, 0.5 * tol, depth - 1)
    }

    assert!(a.is_finite() && b.is_finite() && b > a);
    let fa = f(a);
    let fb = f(b);
    let (m, fm, whole) = simpson(f, a, fa, b, fb);
    recurse(f, a, fa, b, fb, m, fm, whole, tol, 48)
}

/// Two-sided Kolmogorov-Smirnov statistic of a sample against a theoretical cdf.
///
/// `data` does not need to be sorted; a sorted copy is made internally.
pub fn ks_statistic(data: &[f64], cdf: &dyn Fn(f64) -> f64) -> f64 {
    assert!(!data.is_empty());
    let mut xs = data.to_vec();
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = xs.len() as f64;
    let mut sup: f64 = 0.0;
    for (i, &x) in xs.iter().enumerate() {
        let u = cdf(x);
        let lo = (u - i as f64 / n).abs();
        let hi = ((i + 1) as f64 / n - u).abs();
        sup = sup.max(lo).max(hi);
    }
    sup
}

/// Sample mean and standard deviation (n - 1 denominator).
pub fn mean_sd(xs: &[f64]) -> (f64, f64) {
    assert!(xs.len() >= 2);
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}
