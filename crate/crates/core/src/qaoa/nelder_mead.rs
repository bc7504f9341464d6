//! Nelder–Mead simplex descent with dimension-adaptive coefficients.

use alloc::vec::Vec;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NelderMeadConfig {
    /// Edge length of the initial simplex along each axis.
    pub initial_step: f64,
    /// Stop once every vertex lies within this Euclidean distance of the best.
    pub xtol: f64,
    pub max_iterations: usize,
}

impl Default for NelderMeadConfig {
    fn default() -> Self {
        Self {
            initial_step: 0.3,
            xtol: 1e-6,
            max_iterations: 2000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub converged: bool,
}

fn distance(a: &[f64], b: &[f64]) -> f64 {
    libm::sqrt(a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum())
}

/// `c + t (x - c)`.
fn along(c: &[f64], x: &[f64], t: f64) -> Vec<f64> {
    c.iter().zip(x).map(|(ci, xi)| ci + t * (xi - ci)).collect()
}

/// Minimizes `f` from `x0`.
pub fn minimize<F: FnMut(&[f64]) -> f64>(
    mut f: F,
    x0: &[f64],
    config: &NelderMeadConfig,
) -> Minimum {
    let d = x0.len();
    let mut evaluations = 0;
    let mut eval = |x: &[f64]| {
        evaluations += 1;
        f(x)
    };
    if d == 0 {
        let value = eval(x0);
        return Minimum {
            x: Vec::new(),
            value,
            iterations: 0,
            evaluations: 1,
            converged: true,
        };
    }
    let dim = d as f64;
    let expand = 1.0 + 2.0 / dim;
    let contract = 0.75 - 1.0 / (2.0 * dim);
    let shrink = 1.0 - 1.0 / dim;

    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(d + 1);
    simplex.push((x0.to_vec(), eval(x0)));
    for i in 0..d {
        let mut x = x0.to_vec();
        x[i] += config.initial_step;
        let fx = eval(&x);
        simplex.push((x, fx));
    }

    let mut iterations = 0;
    let mut converged = false;
    loop {
        // Stable sort keeps earlier vertices first on ties.
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let best = &simplex[0].0;
        if simplex[1..].iter().all(|(x, _)| distance(x, best) <= config.xtol) {
            converged = true;
            break;
        }
        if iterations >= config.max_iterations {
            break;
        }
        iterations += 1;

        let mut centroid = alloc::vec![0.0; d];
        for (x, _) in &simplex[..d] {
            for (c, xi) in centroid.iter_mut().zip(x) {
                *c += xi / dim;
            }
        }
        let worst = simplex[d].clone();
        let second = simplex[d - 1].1;
        let xr = along(&centroid, &worst.0, -1.0);
        let fr = eval(&xr);
        if fr < simplex[0].1 {
            let xe = along(&centroid, &xr, expand);
            let fe = eval(&xe);
            simplex[d] = if fe < fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr < second {
            simplex[d] = (xr, fr);
            continue;
        }
        let (xc, fc, accept) = if fr < worst.1 {
            let xc = along(&centroid, &xr, contract);
            let fc = eval(&xc);
            (xc, fc, fc <= fr)
        } else {
            let xc = along(&centroid, &worst.0, contract);
            let fc = eval(&xc);
            (xc, fc, fc < worst.1)
        };
        if accept {
            simplex[d] = (xc, fc);
            continue;
        }
        let anchor = simplex[0].0.clone();
        for vertex in simplex.iter_mut().skip(1) {
            let x = along(&anchor, &vertex.0, shrink);
            let fx = eval(&x);
            *vertex = (x, fx);
        }
    }
    let (x, value) = simplex.swap_remove(0);
    Minimum {
        x,
        value,
        iterations,
        evaluations,
        converged,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_bowl() {
        let m = minimize(
            |x| (x[0] - 1.0).powi(2) + 3.0 * (x[1] + 2.0).powi(2),
            &[0.0, 0.0],
            &NelderMeadConfig::default(),
        );
        assert!(m.converged);
        assert!((m.x[0] - 1.0).abs() < 1e-5 && (m.x[1] + 2.0).abs() < 1e-5);
    }

    #[test]
    fn rosenbrock() {
        let cfg = NelderMeadConfig {
            max_iterations: 5000,
            ..Default::default()
        };
        let m = minimize(
            |x| 100.0 * (x[1] - x[0] * x[0]).powi(2) + (1.0 - x[0]).powi(2),
            &[-1.2, 1.0],
            &cfg,
        );
        assert!(m.value < 1e-8, "{m:?}");
    }

    #[test]
    fn iteration_cap() {
        let cfg = NelderMeadConfig {
            max_iterations: 3,
            ..Default::default()
        };
        let m = minimize(|x| x.iter().map(|v| v * v).sum(), &[5.0, 5.0, 5.0], &cfg);
        assert!(!m.converged);
        assert_eq!(m.iterations, 3);
    }
}
