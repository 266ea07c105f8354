//! Bounded Levenberg-Marquardt least squares.
//!
//! Small dense problems only (a handful of parameters, a handful of
//! residuals), which is exactly what curve fitting over five annotation
//! points needs. Derivatives come from central differences; box bounds are
//! enforced by projecting trial steps, which behaves like a reflective
//! trust region on the interior and clamps on the faces.

/// Stopping tolerances and budget.
#[derive(Debug, Clone, Copy)]
pub(crate) struct SolverOptions {
    /// Declared converged when the accepted step satisfies
    /// `||dx|| <= step_tol * (step_tol + ||x||)`.
    pub step_tol: f64,
    /// Declared converged when an accepted step reduces the objective by
    /// no more than `cost_tol * previous_cost`.
    pub cost_tol: f64,
    /// Budget of residual-vector evaluations across the whole run.
    pub max_nfev: usize,
}

#[derive(Debug, Clone)]
pub(crate) struct SolverOutcome {
    pub x: Vec<f64>,
    /// Sum of squared residuals at `x`.
    pub cost: f64,
    /// Outer (Jacobian) iterations performed.
    pub iterations: usize,
    /// Residual evaluations spent, bounded by `max_nfev`.
    #[allow(dead_code)]
    pub nfev: usize,
    pub converged: bool,
}

/// Cube root of machine epsilon: the optimal relative step for central
/// differences of a twice-differentiable function.
const CBRT_EPS: f64 = 6.055_454_452_393_343e-6;

/// Minimizes `sum(r_i(x)^2)` subject to `lo <= x <= hi`.
///
/// `residuals` writes the `m` residuals for a parameter vector into its
/// output slice. The starting point is clamped into the box first.
pub(crate) fn least_squares_bounded<F>(
    residuals: F,
    m: usize,
    x0: &[f64],
    lo: &[f64],
    hi: &[f64],
    opts: &SolverOptions,
) -> SolverOutcome
where
    F: Fn(&[f64], &mut [f64]),
{
    let p = x0.len();
    assert_eq!(lo.len(), p);
    assert_eq!(hi.len(), p);

    let clamp = |x: &mut [f64]| {
        for j in 0..p {
            x[j] = x[j].clamp(lo[j], hi[j]);
        }
    };

    let mut x = x0.to_vec();
    clamp(&mut x);

    let sum_sq = |r: &[f64]| r.iter().map(|v| v * v).sum::<f64>();

    let mut r = vec![0.0; m];
    let mut nfev = 0usize;
    residuals(&x, &mut r);
    nfev += 1;
    let mut cost = sum_sq(&r);
    let mut lambda = 1e-3;
    let mut iterations = 0usize;
    let mut converged = cost == 0.0;

    let mut jac = vec![0.0; m * p];
    let mut rp = vec![0.0; m];
    let mut rm = vec![0.0; m];
    let mut xt = vec![0.0; p];
    let mut rt = vec![0.0; m];

    // An iteration needs 2p evaluations for the Jacobian plus at least one
    // trial step; refuse to start one the budget cannot finish.
    'outer: while !converged && nfev + 2 * p < opts.max_nfev {
        central_jacobian(
            &residuals, m, &x, lo, hi, &mut jac, &mut rp, &mut rm, &mut xt, &mut nfev,
        );

        // Normal equations: jtj and g = J^T r.
        let mut jtj = vec![0.0; p * p];
        let mut g = vec![0.0; p];
        for i in 0..m {
            let row = &jac[i * p..(i + 1) * p];
            for a in 0..p {
                g[a] += row[a] * r[i];
                for b in a..p {
                    jtj[a * p + b] += row[a] * row[b];
                }
            }
        }
        for a in 0..p {
            for b in 0..a {
                jtj[a * p + b] = jtj[b * p + a];
            }
        }

        // Damped steps until one is accepted or the step degenerates.
        loop {
            let mut a = jtj.clone();
            for d in 0..p {
                let diag = jtj[d * p + d].max(1e-12);
                a[d * p + d] = jtj[d * p + d] + lambda * diag;
            }
            let mut delta: Vec<f64> = g.iter().map(|v| -v).collect();
            if !solve_in_place(&mut a, &mut delta, p) {
                // Singular even with damping; stiffen and retry.
                lambda *= 10.0;
                if lambda > 1e16 {
                    converged = true;
                    break 'outer;
                }
                continue;
            }

            xt.copy_from_slice(&x);
            for j in 0..p {
                xt[j] = (x[j] + delta[j]).clamp(lo[j], hi[j]);
            }
            let step_norm: f64 = (0..p)
                .map(|j| (xt[j] - x[j]) * (xt[j] - x[j]))
                .sum::<f64>()
                .sqrt();
            let x_norm: f64 = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            if step_norm <= opts.step_tol * (opts.step_tol + x_norm) {
                // No meaningful move is possible from here.
                converged = true;
                break 'outer;
            }
            if nfev >= opts.max_nfev {
                break 'outer;
            }

            residuals(&xt, &mut rt);
            nfev += 1;
            let cost_t = sum_sq(&rt);
            if cost_t < cost {
                let decrease = cost - cost_t;
                x.copy_from_slice(&xt);
                r.copy_from_slice(&rt);
                let prev = cost;
                cost = cost_t;
                iterations += 1;
                lambda = (lambda * 0.1).max(1e-12);
                if decrease <= opts.cost_tol * prev || cost == 0.0 {
                    converged = true;
                }
                break;
            }
            lambda *= 10.0;
            if lambda > 1e16 {
                converged = true;
                break 'outer;
            }
        }
    }

    SolverOutcome {
        x,
        cost,
        iterations,
        nfev,
        converged,
    }
}

/// Central-difference Jacobian of the residual vector, written row-major
/// into `jac` (`m` rows, one column per parameter). Difference points are
/// clipped to the box and the divisor adjusts to the clipped spread.
#[allow(clippy::too_many_arguments)]
pub(crate) fn central_jacobian<F>(
    residuals: &F,
    m: usize,
    x: &[f64],
    lo: &[f64],
    hi: &[f64],
    jac: &mut [f64],
    rp: &mut [f64],
    rm: &mut [f64],
    xt: &mut [f64],
    nfev: &mut usize,
) where
    F: Fn(&[f64], &mut [f64]),
{
    let p = x.len();
    for j in 0..p {
        let h = CBRT_EPS * x[j].abs().max(1.0);
        let xp_j = (x[j] + h).min(hi[j]);
        let xm_j = (x[j] - h).max(lo[j]);
        let denom = xp_j - xm_j;
        if denom == 0.0 {
            for i in 0..m {
                jac[i * p + j] = 0.0;
            }
            continue;
        }
        xt.copy_from_slice(x);
        xt[j] = xp_j;
        residuals(xt, rp);
        xt[j] = xm_j;
        residuals(xt, rm);
        xt[j] = x[j];
        *nfev += 2;
        for i in 0..m {
            jac[i * p + j] = (rp[i] - rm[i]) / denom;
        }
    }
}

/// Gaussian elimination with partial pivoting on a dense `n x n` system.
/// Returns false when the matrix is numerically singular.
fn solve_in_place(a: &mut [f64], b: &mut [f64], n: usize) -> bool {
    for col in 0..n {
        let mut pivot = col;
        let mut best = a[col * n + col].abs();
        for row in (col + 1)..n {
            let v = a[row * n + col].abs();
            if v > best {
                best = v;
                pivot = row;
            }
        }
        if best < 1e-300 {
            return false;
        }
        if pivot != col {
            for k in 0..n {
                a.swap(col * n + k, pivot * n + k);
            }
            b.swap(col, pivot);
        }
        let inv = 1.0 / a[col * n + col];
        for row in (col + 1)..n {
            let f = a[row * n + col] * inv;
            if f == 0.0 {
                continue;
            }
            for k in col..n {
                a[row * n + k] -= f * a[col * n + k];
            }
            b[row] -= f * b[col];
        }
    }
    for col in (0..n).rev() {
        let mut v = b[col];
        for k in (col + 1)..n {
            v -= a[col * n + k] * b[k];
        }
        b[col] = v / a[col * n + col];
        if !b[col].is_finite() {
            return false;
        }
    }
    true
}
