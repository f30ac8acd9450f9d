//! Sequential minimal optimisation for the soft-margin SVM dual
//!
//! ```text
//! min ½ αᵀQα − eᵀα   s.t.  0 ≤ αᵢ ≤ C,  yᵀα = 0,   Qᵢⱼ = yᵢ yⱼ K(xᵢ, xⱼ)
//! ```
//!
//! Working pairs are chosen by maximal violation with second-order gain for
//! the partner, and optimisation stops when the maximal KKT violation drops
//! below `tol`.

use thiserror::Error;

const TAU: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SmoError {
    #[error("SMO did not converge within {0} iterations")]
    NoConvergence(usize),
    #[error("labels must be +1 or -1")]
    BadLabels,
    #[error("kernel matrix shape does not match {0} samples")]
    BadKernel(usize),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoParams {
    pub c: f64,
    pub tol: f64,
    pub max_iter: usize,
}

impl SmoParams {
    /// Iteration cap of `passes` sweeps over `n` samples.
    pub fn with_passes(c: f64, tol: f64, passes: usize, n: usize) -> Self {
        Self { c, tol, max_iter: passes.saturating_mul(n.max(1)) }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SmoSolution {
    pub alpha: Vec<f64>,
    /// Bias of the decision function `Σ αᵢ yᵢ K(xᵢ, x) + b`.
    pub b: f64,
    pub iterations: usize,
}

/// Solves the dual for a precomputed row-major `n × n` kernel matrix.
pub fn solve(kernel: &[f64], y: &[f64], params: &SmoParams) -> Result<SmoSolution, SmoError> {
    let n = y.len();
    if kernel.len() != n * n {
        return Err(SmoError::BadKernel(n));
    }
    if y.iter().any(|&v| v != 1.0 && v != -1.0) {
        return Err(SmoError::BadLabels);
    }
    let c = params.c;
    let k = |i: usize, j: usize| kernel[i * n + j];
    let mut alpha = vec![0.0f64; n];
    let mut grad = vec![-1.0f64; n];

    let upper = |a: f64| a >= c;
    let lower = |a: f64| a <= 0.0;

    let mut iter = 0usize;
    loop {
        // i: maximal violator in I_up
        let mut gmax = f64::NEG_INFINITY;
        let mut i_sel: Option<usize> = None;
        for t in 0..n {
            let in_up = if y[t] > 0.0 { !upper(alpha[t]) } else { !lower(alpha[t]) };
            if in_up && -y[t] * grad[t] >= gmax {
                gmax = -y[t] * grad[t];
                i_sel = Some(t);
            }
        }
        let Some(i) = i_sel else { break };

        // j: best second-order gain in I_low
        let mut gmax2 = f64::NEG_INFINITY;
        let mut j_sel: Option<usize> = None;
        let mut best = f64::INFINITY;
        for t in 0..n {
            let in_low = if y[t] > 0.0 { !lower(alpha[t]) } else { !upper(alpha[t]) };
            if !in_low {
                continue;
            }
            let ygt = y[t] * grad[t];
            if ygt >= gmax2 {
                gmax2 = ygt;
            }
            let grad_diff = gmax + ygt;
            if grad_diff > 0.0 {
                let quad = k(i, i) + k(t, t) - 2.0 * k(i, t);
                let quad = if quad > 0.0 { quad } else { TAU };
                let obj = -(grad_diff * grad_diff) / quad;
                if obj <= best {
                    best = obj;
                    j_sel = Some(t);
                }
            }
        }
        if gmax + gmax2 < params.tol {
            break;
        }
        let Some(j) = j_sel else { break };

        if iter >= params.max_iter {
            return Err(SmoError::NoConvergence(params.max_iter));
        }
        iter += 1;

        let q_ij = y[i] * y[j] * k(i, j);
        let (old_i, old_j) = (alpha[i], alpha[j]);
        if y[i] != y[j] {
            let quad = (k(i, i) + k(j, j) + 2.0 * q_ij).max(TAU);
            let delta = (-grad[i] - grad[j]) / quad;
            let diff = alpha[i] - alpha[j];
            alpha[i] += delta;
            alpha[j] += delta;
            if diff > 0.0 {
                if alpha[j] < 0.0 {
                    alpha[j] = 0.0;
                    alpha[i] = diff;
                }
            } else if alpha[i] < 0.0 {
                alpha[i] = 0.0;
                alpha[j] = -diff;
            }
            if diff > 0.0 {
                if alpha[i] > c {
                    alpha[i] = c;
                    alpha[j] = c - diff;
                }
            } else if alpha[j] > c {
                alpha[j] = c;
                alpha[i] = c + diff;
            }
        } else {
            let quad = (k(i, i) + k(j, j) - 2.0 * q_ij).max(TAU);
            let delta = (grad[i] - grad[j]) / quad;
            let sum = alpha[i] + alpha[j];
            alpha[i] -= delta;
            alpha[j] += delta;
            if sum > c {
                if alpha[i] > c {
                    alpha[i] = c;
                    alpha[j] = sum - c;
                }
            } else if alpha[j] < 0.0 {
                alpha[j] = 0.0;
                alpha[i] = sum;
            }
            if sum > c {
                if alpha[j] > c {
                    alpha[j] = c;
                    alpha[i] = sum - c;
                }
            } else if alpha[i] < 0.0 {
                alpha[i] = 0.0;
                alpha[j] = sum;
            }
        }

        let (di, dj) = (alpha[i] - old_i, alpha[j] - old_j);
        for t in 0..n {
            grad[t] += y[t] * (y[i] * k(i, t) * di + y[j] * k(j, t) * dj);
        }
    }

    // bias from free vectors, else midpoint of the feasible interval
    let (mut ub, mut lb) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut free, mut sum_free) = (0usize, 0.0f64);
    for t in 0..n {
        let yg = y[t] * grad[t];
        if upper(alpha[t]) {
            if y[t] < 0.0 {
                ub = ub.min(yg);
            } else {
                lb = lb.max(yg);
            }
        } else if lower(alpha[t]) {
            if y[t] > 0.0 {
                ub = ub.min(yg);
            } else {
                lb = lb.max(yg);
            }
        } else {
            free += 1;
            sum_free += yg;
        }
    }
    let rho = if free > 0 {
        sum_free / free as f64
    } else if ub.is_finite() && lb.is_finite() {
        (ub + lb) / 2.0
    } else {
        0.0
    };
    Ok(SmoSolution { alpha, b: -rho, iterations: iter })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn linear_kernel(xs: &[[f64; 2]]) -> Vec<f64> {
        let n = xs.len();
        let mut k = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                k[i * n + j] = xs[i][0] * xs[j][0] + xs[i][1] * xs[j][1];
            }
        }
        k
    }

    #[test]
    fn two_point_problem_has_closed_form() {
        // x = ±1 on a line: w = 1, b = 0, α = 0.5 each
        let xs = [[1.0, 0.0], [-1.0, 0.0]];
        let sol = solve(&linear_kernel(&xs), &[1.0, -1.0], &SmoParams { c: 10.0, tol: 1e-3, max_iter: 100 }).unwrap();
        assert!((sol.alpha[0] - 0.5).abs() < 1e-12 && (sol.alpha[1] - 0.5).abs() < 1e-12);
        assert!(sol.b.abs() < 1e-12);
    }

    #[test]
    fn kkt_conditions_hold_at_solution() {
        let xs = [[0.0, 0.0], [0.3, 0.2], [1.0, 0.1], [2.0, 2.0], [2.5, 1.7], [1.2, 1.4], [1.1, 0.9]];
        let y = [-1.0, -1.0, -1.0, 1.0, 1.0, 1.0, -1.0];
        let k = linear_kernel(&xs);
        let p = SmoParams { c: 1.0, tol: 1e-6, max_iter: 10_000 };
        let sol = solve(&k, &y, &p).unwrap();
        let n = xs.len();
        let eq: f64 = sol.alpha.iter().zip(&y).map(|(a, y)| a * y).sum();
        assert!(eq.abs() < 1e-9);
        for i in 0..n {
            let f: f64 = (0..n).map(|j| sol.alpha[j] * y[j] * k[j * n + i]).sum::<f64>() + sol.b;
            let margin = y[i] * f;
            if sol.alpha[i] <= 0.0 {
                assert!(margin >= 1.0 - 1e-4, "i={i} margin={margin}");
            } else if sol.alpha[i] >= p.c {
                assert!(margin <= 1.0 + 1e-4, "i={i} margin={margin}");
            } else {
                assert!((margin - 1.0).abs() < 1e-4, "i={i} margin={margin}");
            }
        }
    }

    #[test]
    fn iteration_cap_is_reported() {
        let xs = [[0.0, 0.0], [0.3, 0.2], [2.0, 2.0], [2.5, 1.7]];
        let err = solve(&linear_kernel(&xs), &[-1.0, -1.0, 1.0, 1.0], &SmoParams { c: 1.0, tol: 1e-9, max_iter: 0 });
        assert_eq!(err, Err(SmoError::NoConvergence(0)));
    }

    #[test]
    fn rejects_bad_labels() {
        let k = vec![1.0; 4];
        assert_eq!(solve(&k, &[1.0, 0.0], &SmoParams { c: 1.0, tol: 1e-3, max_iter: 10 }), Err(SmoError::BadLabels));
    }
}
