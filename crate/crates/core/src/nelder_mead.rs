//! Derivative-free simplex minimization with box constraints.

use alloc::vec::Vec;

const ALPHA: f64 = 1.0; // reflection
const GAMMA: f64 = 2.0; // expansion
const RHO: f64 = 0.5; // contraction
const SIGMA: f64 = 0.5; // shrink

pub(crate) struct NmOptions {
    pub max_iterations: usize,
    pub tolerance: f64,
    pub initial_step: f64,
    pub restarts: usize,
}

impl Default for NmOptions {
    fn default() -> Self {
        Self {
            max_iterations: 2000,
            tolerance: 1e-9,
            initial_step: 0.15,
            restarts: 1,
        }
    }
}

pub(crate) struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub converged: bool,
}

fn clamp_into(x: &mut [f64], lower: &[f64], upper: &[f64]) {
    for i in 0..x.len() {
        x[i] = x[i].max(lower[i]).min(upper[i]);
    }
}

/// Minimize `f` over the box `[lower, upper]`, starting from `x0`.
///
/// Candidate points are clamped onto the box before evaluation, so `f` is
/// never called outside it. After the simplex collapses the search restarts
/// from the incumbent with a smaller initial step, which recovers progress
/// along narrow valleys.
pub(crate) fn minimize(
    f: &mut dyn FnMut(&[f64]) -> f64,
    x0: &[f64],
    lower: &[f64],
    upper: &[f64],
    options: &NmOptions,
) -> Minimum {
    let n = x0.len();
    debug_assert!(n > 0 && lower.len() == n && upper.len() == n);

    let mut best: Vec<f64> = x0.to_vec();
    clamp_into(&mut best, lower, upper);
    let mut evaluations = 0usize;
    let mut iterations = 0usize;
    let mut best_value = f(&best);
    evaluations += 1;
    let mut converged = false;

    let mut step = options.initial_step;
    for _ in 0..=options.restarts {
        let (value, point, stats) = run_simplex(
            f,
            &best,
            lower,
            upper,
            step,
            options.max_iterations,
            options.tolerance,
        );
        iterations += stats.0;
        evaluations += stats.1;
        converged = stats.2;
        if value < best_value {
            best_value = value;
            best = point;
        }
        step /= 5.0;
    }

    Minimum {
        x: best,
        value: best_value,
        iterations,
        evaluations,
        converged,
    }
}

fn run_simplex(
    f: &mut dyn FnMut(&[f64]) -> f64,
    x0: &[f64],
    lower: &[f64],
    upper: &[f64],
    step: f64,
    max_iterations: usize,
    tolerance: f64,
) -> (f64, Vec<f64>, (usize, usize, bool)) {
    let n = x0.len();
    let mut evaluations = 0usize;

    let mut eval = |x: &[f64], evals: &mut usize| {
        *evals += 1;
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    // Initial simplex: perturb one coordinate per vertex, flipping the
    // direction when a bound is in the way.
    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    let mut values: Vec<f64> = Vec::with_capacity(n + 1);
    simplex.push(x0.to_vec());
    for j in 0..n {
        let mut v = x0.to_vec();
        let h = step * v[j].abs().max(1e-3);
        if v[j] + h <= upper[j] {
            v[j] += h;
        } else {
            v[j] -= h;
        }
        clamp_into(&mut v, lower, upper);
        simplex.push(v);
    }
    for v in &simplex {
        values.push(eval(v, &mut evaluations));
    }

    let mut iterations = 0usize;
    let mut converged = false;
    while iterations < max_iterations {
        iterations += 1;

        // Order the simplex: index of best, worst, second worst.
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap());
        let ib = order[0];
        let iw = order[n];
        let isw = order[n - 1];

        let spread = values[iw] - values[ib];
        if spread <= tolerance * (1.0 + values[ib].abs()) {
            converged = true;
            break;
        }

        // Centroid of all vertices except the worst.
        let mut centroid = alloc::vec![0.0; n];
        for (k, vertex) in simplex.iter().enumerate() {
            if k == iw {
                continue;
            }
            for j in 0..n {
                centroid[j] += vertex[j];
            }
        }
        for c in centroid.iter_mut() {
            *c /= n as f64;
        }

        let blend = |from: &[f64], towards: &[f64], coeff: f64| {
            let mut out = alloc::vec![0.0; n];
            for j in 0..n {
                out[j] = from[j] + coeff * (towards[j] - from[j]);
            }
            clamp_into(&mut out, lower, upper);
            out
        };

        // Reflection.
        let reflected = blend(&centroid, &simplex[iw], -ALPHA);
        let fr = eval(&reflected, &mut evaluations);

        if fr < values[ib] {
            let expanded = blend(&centroid, &simplex[iw], -GAMMA);
            let fe = eval(&expanded, &mut evaluations);
            if fe < fr {
                simplex[iw] = expanded;
                values[iw] = fe;
            } else {
                simplex[iw] = reflected;
                values[iw] = fr;
            }
            continue;
        }
        if fr < values[isw] {
            simplex[iw] = reflected;
            values[iw] = fr;
            continue;
        }

        // Contraction, outside or inside of the worst vertex.
        let (contracted, fc) = if fr < values[iw] {
            let c = blend(&centroid, &reflected, RHO);
            let v = eval(&c, &mut evaluations);
            (c, v)
        } else {
            let c = blend(&centroid, &simplex[iw], RHO);
            let v = eval(&c, &mut evaluations);
            (c, v)
        };
        if fc < values[iw].min(fr) {
            simplex[iw] = contracted;
            values[iw] = fc;
            continue;
        }

        // Shrink towards the best vertex.
        let best_vertex = simplex[ib].clone();
        for k in 0..=n {
            if k == ib {
                continue;
            }
            simplex[k] = blend(&best_vertex, &simplex[k], SIGMA);
            values[k] = eval(&simplex[k], &mut evaluations);
        }
    }

    let mut ib = 0;
    for k in 1..=n {
        if values[k] < values[ib] {
            ib = k;
        }
    }
    (
        values[ib],
        simplex.swap_remove(ib),
        (iterations, evaluations, converged),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_bowl() {
        let target = [1.5, -2.0, 0.25];
        let mut f = |x: &[f64]| -> f64 {
            x.iter()
                .zip(target.iter())
                .map(|(a, b)| (a - b) * (a - b))
                .sum()
        };
        let m = minimize(
            &mut f,
            &[0.0, 0.0, 0.0],
            &[-10.0, -10.0, -10.0],
            &[10.0, 10.0, 10.0],
            &NmOptions::default(),
        );
        assert!(m.converged);
        for (a, b) in m.x.iter().zip(target.iter()) {
            assert!((a - b).abs() < 1e-4, "{:?}", m.x);
        }
    }

    #[test]
    fn rosenbrock_valley() {
        let mut f = |x: &[f64]| -> f64 {
            let a = 1.0 - x[0];
            let b = x[1] - x[0] * x[0];
            a * a + 100.0 * b * b
        };
        let m = minimize(
            &mut f,
            &[-1.2, 1.0],
            &[-5.0, -5.0],
            &[5.0, 5.0],
            &NmOptions {
                max_iterations: 5000,
                restarts: 2,
                ..NmOptions::default()
            },
        );
        assert!((m.x[0] - 1.0).abs() < 1e-3 && (m.x[1] - 1.0).abs() < 1e-3, "{:?}", m.x);
        assert!(m.value < 1e-6);
    }

    #[test]
    fn respects_bounds() {
        let mut f = |x: &[f64]| (x[0] - 3.0) * (x[0] - 3.0);
        let m = minimize(&mut f, &[0.0], &[-1.0], &[2.0], &NmOptions::default());
        assert!((m.x[0] - 2.0).abs() < 1e-6, "{:?}", m.x);
    }

    #[test]
    fn nan_objective_treated_as_infinite() {
        let mut f = |x: &[f64]| {
            if x[0] < 0.0 {
                f64::NAN
            } else {
                (x[0] - 1.0) * (x[0] - 1.0)
            }
        };
        let m = minimize(&mut f, &[2.5], &[-4.0], &[4.0], &NmOptions::default());
        assert!((m.x[0] - 1.0).abs() < 1e-4);
    }

    #[test]
    fn counts_evaluations() {
        let mut f = |x: &[f64]| x[0] * x[0];
        let m = minimize(&mut f, &[1.0], &[-2.0], &[2.0], &NmOptions::default());
        assert!(m.evaluations > 0 && m.iterations > 0);
    }
}
