//! One-dimensional root bracketing and bisection.

/// Bisect `f` on `[lo, hi]`, which must bracket a sign change, until the
/// interval is shorter than `tol`. Returns the interval midpoint.
///
/// Infinite function values are fine; only the sign is used.
pub fn bisect(f: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let flo = f(lo);
    if flo == 0.0 {
        return lo;
    }
    if f(hi) == 0.0 {
        return hi;
    }
    let sign_lo = if flo > 0.0 { 1.0 } else { -1.0 };
    let mut iterations = 0;
    while hi - lo > tol && iterations < 200 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm > 0.0) == (sign_lo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
        iterations += 1;
    }
    0.5 * (lo + hi)
}

/// Scan a geometric grid of `points` magnitudes between `inner` and `outer`
/// (same sign, `|inner| < |outer|`), starting at the outer end, and return
/// the first interval `(a, b)` with `a < b` across which `f` changes sign.
///
/// A grid point where `f` is exactly zero is returned as a degenerate
/// interval. NaN values are skipped. Returns `None` when no sign change is
/// found anywhere on the grid.
pub fn outermost_sign_change(
    f: &dyn Fn(f64) -> f64,
    inner: f64,
    outer: f64,
    points: usize,
) -> Option<(f64, f64)> {
    debug_assert!(points >= 2);
    debug_assert!(inner != 0.0 && outer != 0.0);
    debug_assert!(inner.signum() == outer.signum());
    debug_assert!(inner.abs() < outer.abs());

    let sign = outer.signum();
    let log_inner = libm::log(inner.abs());
    let log_outer = libm::log(outer.abs());
    let step = (log_outer - log_inner) / (points - 1) as f64;

    let grid = |k: usize| sign * libm::exp(log_outer - step * k as f64);

    let mut prev_x = grid(0);
    let mut prev_v = f(prev_x);
    if prev_v == 0.0 {
        return Some((prev_x, prev_x));
    }
    for k in 1..points {
        let x = grid(k);
        let v = f(x);
        if v == 0.0 {
            return Some((x, x));
        }
        if !prev_v.is_nan() && !v.is_nan() && (v > 0.0) != (prev_v > 0.0) {
            let (a, b) = if x < prev_x { (x, prev_x) } else { (prev_x, x) };
            return Some((a, b));
        }
        prev_x = x;
        prev_v = v;
    }
    None
}
