//! Small helpers on top of [`rand_core::RngCore`].

use rand_core::RngCore;

/// Uniform draw on the open interval (0, 1).
///
/// Uses the top 53 bits of a `u64` shifted onto the grid
/// `(k + 0.5) * 2^-53`, so neither endpoint can be returned and every value
/// is a valid argument for a quantile function.
pub fn open01(rng: &mut dyn RngCore) -> f64 {
    const SCALE: f64 = 1.0 / 9007199254740992.0; // 2^-53
    ((rng.next_u64() >> 11) as f64 + 0.5) * SCALE
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn stays_strictly_inside_unit_interval() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut min = 1.0f64;
        let mut max = 0.0f64;
        for _ in 0..100_000 {
            let u = open01(&mut rng);
            assert!(u > 0.0 && u < 1.0);
            min = min.min(u);
            max = max.max(u);
        }
        assert!(min < 1e-3 && max > 1.0 - 1e-3);
    }

    #[test]
    fn mean_is_near_half() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 200_000;
        let sum: f64 = (0..n).map(|_| open01(&mut rng)).sum();
        let mean = sum / n as f64;
        assert!((mean - 0.5).abs() < 2e-3, "mean = {mean}");
    }
}
