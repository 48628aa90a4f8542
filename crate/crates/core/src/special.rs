//! Scalar special functions for the standard normal distribution.

/// 1 / sqrt(2 pi).
pub(crate) const FRAC_1_SQRT_2PI: f64 = 0.39894228040143267794;
/// ln(sqrt(2 pi)).
pub(crate) const LN_SQRT_2PI: f64 = 0.91893853320467274178;

const SQRT_2: f64 = core::f64::consts::SQRT_2;

/// Standard normal density.
pub fn norm_pdf(z: f64) -> f64 {
    libm::exp(-0.5 * z * z) * FRAC_1_SQRT_2PI
}

/// Standard normal cumulative distribution function.
pub fn norm_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z / SQRT_2)
}

/// Standard normal survival function. Accurate in the far upper tail, where
/// `1 - norm_cdf(z)` would lose all precision.
pub fn norm_sf(z: f64) -> f64 {
    0.5 * libm::erfc(z / SQRT_2)
}

/// Inverse of the standard normal cdf for `p` in the open interval (0, 1).
///
/// Rational approximations with relative error below 1e-15 across the whole
/// range, including probabilities as small as 1e-300 (algorithm PPND16).
pub fn norm_quantile(p: f64) -> f64 {
    debug_assert!(p > 0.0 && p < 1.0);
    let q = p - 0.5;
    if q.abs() <= 0.425 {
        let r = 0.180625 - q * q;
        return q * rational(r, &CENTRAL_NUM, &CENTRAL_DEN);
    }
    let tail = if q < 0.0 { p } else { 1.0 - p };
    let r = libm::sqrt(-libm::log(tail));
    let x = if r <= 5.0 {
        rational(r - 1.6, &MIDDLE_NUM, &MIDDLE_DEN)
    } else {
        rational(r - 5.0, &FAR_NUM, &FAR_DEN)
    };
    if q < 0.0 {
        -x
    } else {
        x
    }
}

fn rational(r: f64, num: &[f64; 8], den: &[f64; 8]) -> f64 {
    horner(r, num) / horner(r, den)
}

fn horner(r: f64, coeffs: &[f64; 8]) -> f64 {
    let mut acc = coeffs[7];
    for &c in coeffs[..7].iter().rev() {
        acc = acc * r + c;
    }
    acc
}

const CENTRAL_NUM: [f64; 8] = [
    3.3871328727963666080e0,
    1.3314166789178437745e2,
    1.9715909503065514427e3,
    1.3731693765509461125e4,
    4.5921953931549871457e4,
    6.7265770927008700853e4,
    3.3430575583588128105e4,
    2.5090809287301226727e3,
];

const CENTRAL_DEN: [f64; 8] = [
    1.0,
    4.2313330701600911252e1,
    6.8718700749205790830e2,
    5.3941960214247511077e3,
    2.1213794301586595867e4,
    3.9307895800092710610e4,
    2.8729085735721942674e4,
    5.2264952788528545610e3,
];

const MIDDLE_NUM: [f64; 8] = [
    1.42343711074968357734e0,
    4.63033784615654529590e0,
    5.76949722146069140550e0,
    3.64784832476320460504e0,
    1.27045825245236838258e0,
    2.41780725177450611770e-1,
    2.27238449892691845833e-2,
    7.74545014278341407640e-4,
];

const MIDDLE_DEN: [f64; 8] = [
    1.0,
    2.05319162663775882187e0,
    1.67638483018380384940e0,
    6.89767334985100004550e-1,
    1.48103976427480074590e-1,
    1.51986665636164571966e-2,
    5.47593808499534494600e-4,
    1.05075007164441684324e-9,
];

const FAR_NUM: [f64; 8] = [
    6.65790464350110377720e0,
    5.46378491116411436990e0,
    1.78482653991729133580e0,
    2.96560571828504891230e-1,
    2.65321895265761230930e-2,
    1.24266094738807843860e-3,
    2.71155556874348757815e-5,
    2.01033439929228813265e-7,
];

const FAR_DEN: [f64; 8] = [
    1.0,
    5.99832206555887937690e-1,
    1.36929880922735805310e-1,
    1.48753612908506148525e-2,
    7.86869131145613259100e-4,
    1.84631831751005468180e-5,
    1.42151175831644588870e-7,
    2.04426310338993978564e-15,
];

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent inverse via bisection on `norm_cdf` / `norm_sf`.
    fn quantile_by_bisection(p: f64) -> f64 {
        // Work on the lower tail for symmetry and precision.
        let (target, flip) = if p <= 0.5 { (p, false) } else { (1.0 - p, true) };
        let mut lo = -40.0;
        let mut hi = 0.5;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if norm_cdf(mid) < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let z = 0.5 * (lo + hi);
        if flip {
            -z
        } else {
            z
        }
    }

    #[test]
    fn quantile_known_points() {
        assert_eq!(norm_quantile(0.5), 0.0);
        assert!((norm_quantile(0.975) - 1.959963984540054).abs() < 1e-12);
        assert!((norm_quantile(0.025) + 1.959963984540054).abs() < 1e-12);
        assert!((norm_quantile(0.999) - 3.090232306167813).abs() < 1e-12);
        assert!((norm_quantile(0.01) + 2.3263478740408408).abs() < 1e-12);
    }

    #[test]
    fn quantile_matches_bisection_oracle() {
        let probs = [
            1e-300, 1e-100, 1e-30, 1e-12, 1e-6, 1e-3, 0.01, 0.1, 0.3, 0.5, 0.7, 0.9, 0.99, 0.999,
            0.999999, 1.0 - 1e-12,
        ];
        for &p in &probs {
            let fast = norm_quantile(p);
            let slow = quantile_by_bisection(p);
            let tol = 1e-12 * (1.0 + slow.abs());
            assert!(
                (fast - slow).abs() < tol,
                "p = {p}: {fast} vs oracle {slow}"
            );
        }
    }

    #[test]
    fn cdf_quantile_roundtrip() {
        let mut p = 1e-12;
        while p < 1.0 - 1e-9 {
            let z = norm_quantile(p);
            let back = norm_cdf(z);
            assert!(
                (back - p).abs() < 1e-14 + 1e-13 * p,
                "p = {p}, z = {z}, back = {back}"
            );
            p *= 1.9;
        }
    }

    #[test]
    fn cdf_survival_symmetry() {
        for z in [-8.0, -3.5, -1.0, 0.0, 0.25, 2.0, 6.0, 10.0] {
            assert!((norm_cdf(z) - norm_sf(-z)).abs() < 1e-16);
            assert!((norm_cdf(z) + norm_sf(z) - 1.0).abs() < 1e-15);
        }
        assert!((norm_cdf(0.0) - 0.5).abs() < 1e-16);
    }

    #[test]
    fn pdf_known_value() {
        assert!((norm_pdf(0.0) - 0.3989422804014327).abs() < 1e-16);
        assert!((norm_pdf(2.0) - 0.05399096651318806).abs() < 1e-16);
    }

    #[test]
    fn survival_deep_tail_is_positive() {
        let s = norm_sf(37.0);
        assert!(s > 0.0 && s < 1e-250);
    }
}
