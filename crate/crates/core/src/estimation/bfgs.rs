//! BFGS with backtracking Armijo line search.

#[derive(Debug, Clone, Copy)]
pub(crate) struct Settings {
    pub ftol: f64,
    pub max_iter: usize,
    /// Stop once any coordinate leaves `[-bound, bound]`.
    pub bound: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Stop {
    Gradient,
    ObjectiveChange,
    MaxIterations,
    Boundary,
    LineSearch,
}

#[derive(Debug, Clone)]
pub(crate) struct Outcome {
    pub x: Vec<f64>,
    pub f: f64,
    pub iterations: usize,
    pub stop: Stop,
}

const ARMIJO: f64 = 1e-4;
const CURVATURE_EPS: f64 = 1e-10;
const MAX_BACKTRACK: usize = 60;
/// Consecutive iterations below `ftol` before the run counts as stalled.
const STALL_ITERATIONS: usize = 3;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Minimizes `fg`, which returns the objective and its gradient, or `None`
/// where the objective is undefined. `stationary` decides whether a point
/// satisfies the gradient tolerance (the caller may measure the gradient in
/// other coordinates).
pub(crate) fn minimize<F, C>(fg: F, stationary: C, x0: Vec<f64>, s: Settings) -> Outcome
where
    F: Fn(&[f64]) -> Option<(f64, Vec<f64>)>,
    C: Fn(&[f64], &[f64]) -> bool,
{
    let n = x0.len();
    let mut x = x0;
    let (mut f, mut g) = fg(&x).expect("objective must be finite at the starting point");
    let identity = || {
        let mut h = vec![vec![0.0; n]; n];
        for (i, row) in h.iter_mut().enumerate() {
            row[i] = 1.0;
        }
        h
    };
    let mut hinv = identity();
    let mut fresh = true;
    let mut iterations = 0;
    let mut small_changes = 0;
    let stop = loop {
        if stationary(&x, &g) {
            break Stop::Gradient;
        }
        if iterations >= s.max_iter {
            break Stop::MaxIterations;
        }
        if x.iter().any(|v| v.abs() > s.bound) {
            break Stop::Boundary;
        }
        iterations += 1;

        let mut d: Vec<f64> = hinv.iter().map(|row| -dot(row, &g)).collect();
        let mut slope = dot(&g, &d);
        if !(slope < 0.0) {
            hinv = identity();
            fresh = true;
            d = g.iter().map(|v| -v).collect();
            slope = -dot(&g, &g);
        }

        let mut alpha = 1.0;
        let mut accepted = None;
        for _ in 0..MAX_BACKTRACK {
            let trial: Vec<f64> = x.iter().zip(&d).map(|(xi, di)| xi + alpha * di).collect();
            if let Some((ft, gt)) = fg(&trial) {
                if ft.is_finite() && ft <= f + ARMIJO * alpha * slope {
                    accepted = Some((trial, ft, gt));
                    break;
                }
            }
            alpha *= 0.5;
        }
        let Some((xn, fnew, gn)) = accepted else {
            if fresh {
                break Stop::LineSearch;
            }
            // retry along steepest descent before giving up
            hinv = identity();
            fresh = true;
            continue;
        };

        let step: Vec<f64> = xn.iter().zip(&x).map(|(a, b)| a - b).collect();
        let dg: Vec<f64> = gn.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = dot(&step, &dg);
        // curvature check: skip the update unless s'y is safely positive
        if sy > CURVATURE_EPS * dot(&step, &step).sqrt() * dot(&dg, &dg).sqrt() {
            if fresh {
                let scale = sy / dot(&dg, &dg);
                for (i, row) in hinv.iter_mut().enumerate() {
                    row.iter_mut().for_each(|v| *v = 0.0);
                    row[i] = scale;
                }
            }
            let rho = 1.0 / sy;
            let hy: Vec<f64> = hinv.iter().map(|row| dot(row, &dg)).collect();
            let yhy = dot(&dg, &hy);
            for i in 0..n {
                for j in 0..n {
                    hinv[i][j] += -rho * (hy[i] * step[j] + step[i] * hy[j])
                        + (rho * rho * yhy + rho) * step[i] * step[j];
                }
            }
            fresh = false;
        }

        let change = (f - fnew).abs() / f.abs().max(f64::MIN_POSITIVE);
        x = xn;
        f = fnew;
        g = gn;
        small_changes = if change <= s.ftol { small_changes + 1 } else { 0 };
        if small_changes >= STALL_ITERATIONS {
            break if stationary(&x, &g) {
                Stop::Gradient
            } else {
                Stop::ObjectiveChange
            };
        }
    };
    Outcome {
        x,
        f,
        iterations,
        stop,
    }
}
