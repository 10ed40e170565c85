//! Levenberg-Marquardt least squares with a finite-difference Jacobian.
//! The problems here are small (tens of parameters), so forming the
//! normal equations directly is fine.

use crate::linalg::{solve_linear, DMat};
use crate::scalar::Real;

pub struct LmOptions<F> {
    pub max_iters: usize,
    pub cost_tol: F,
    pub step_tol: F,
}

impl<F: Real> Default for LmOptions<F> {
    fn default() -> Self {
        LmOptions {
            max_iters: 300,
            cost_tol: F::of(1e-22),
            step_tol: F::of(1e-14),
        }
    }
}

pub struct LmResult<F> {
    pub x: Vec<F>,
    /// Sum of squared residuals at `x`.
    pub cost: F,
    pub iterations: usize,
}

fn cost_of<F: Real>(r: &[F]) -> F {
    r.iter().map(|&v| v * v).sum()
}

/// Minimizes |residuals(x)|^2 starting from `x0`.
pub fn levenberg_marquardt<F: Real>(
    residuals: &dyn Fn(&[F]) -> Vec<F>,
    x0: &[F],
    opts: &LmOptions<F>,
) -> LmResult<F> {
    let n = x0.len();
    let mut x = x0.to_vec();
    let mut r = residuals(&x);
    let mut cost = cost_of(&r);
    let mut lambda = F::of(1e-3);
    let mut iterations = 0;
    for _ in 0..opts.max_iters {
        iterations += 1;
        if cost < opts.cost_tol {
            break;
        }
        let jac = numeric_jacobian(residuals, &x, &r);
        // normal equations (J^T J + lambda diag) dx = -J^T r
        let mut jtj = DMat::zero(n, n);
        let mut jtr = vec![F::zero(); n];
        for i in 0..r.len() {
            for a in 0..n {
                let ja = jac.get(i, a);
                if ja == F::zero() {
                    continue;
                }
                jtr[a] = jtr[a] + ja * r[i];
                for b in 0..n {
                    let v = jtj.get(a, b) + ja * jac.get(i, b);
                    jtj.set(a, b, v);
                }
            }
        }
        let mut improved = false;
        for _ in 0..12 {
            let mut damped = jtj.clone();
            for a in 0..n {
                let d = damped.get(a, a);
                damped.set(a, a, d + lambda * (d + F::of(1e-12)));
            }
            let rhs: Vec<F> = jtr.iter().map(|&v| -v).collect();
            let Some(dx) = solve_linear(&damped, &rhs) else {
                lambda = lambda * F::of(10.0);
                continue;
            };
            let trial: Vec<F> = x.iter().zip(&dx).map(|(&a, &d)| a + d).collect();
            let tr = residuals(&trial);
            let tc = cost_of(&tr);
            if tc < cost {
                let step: F = dx.iter().map(|&d| d * d).sum::<F>().sqrt();
                x = trial;
                r = tr;
                cost = tc;
                lambda = (lambda * F::of(0.3)).max(F::of(1e-12));
                improved = true;
                if step < opts.step_tol {
                    return LmResult {
                        x,
                        cost,
                        iterations,
                    };
                }
                break;
            }
            lambda = lambda * F::of(10.0);
        }
        if !improved {
            break;
        }
    }
    LmResult {
        x,
        cost,
        iterations,
    }
}

fn numeric_jacobian<F: Real>(
    residuals: &dyn Fn(&[F]) -> Vec<F>,
    x: &[F],
    r0: &[F],
) -> DMat<F> {
    let n = x.len();
    let mut jac = DMat::zero(r0.len(), n);
    let base = F::of(1e-7);
    let mut xp = x.to_vec();
    for a in 0..n {
        let h = base * (F::one() + x[a].abs());
        xp[a] = x[a] + h;
        let rp = residuals(&xp);
        xp[a] = x[a] - h;
        let rm = residuals(&xp);
        xp[a] = x[a];
        let two_h = h + h;
        for i in 0..r0.len() {
            jac.set(i, a, (rp[i] - rm[i]) / two_h);
        }
    }
    jac
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rosenbrock_valley() {
        let f = |x: &[f64]| vec![1.0 - x[0], 10.0 * (x[1] - x[0] * x[0])];
        let res = levenberg_marquardt(&f, &[-1.2, 1.0], &LmOptions::default());
        assert!(res.cost < 1e-16, "cost {}", res.cost);
        assert!((res.x[0] - 1.0).abs() < 1e-7);
        assert!((res.x[1] - 1.0).abs() < 1e-7);
    }

    #[test]
    fn linear_fit() {
        let ts = [0.0, 1.0, 2.0, 3.0];
        let ys = [1.0, 2.9, 5.1, 7.0];
        let f = move |x: &[f64]| -> Vec<f64> {
            ts.iter()
                .zip(&ys)
                .map(|(&t, &y)| x[0] * t + x[1] - y)
                .collect()
        };
        let res = levenberg_marquardt(&f, &[0.0, 0.0], &LmOptions::default());
        assert!((res.x[0] - 2.02).abs() < 1e-6);
        assert!((res.x[1] - 0.97).abs() < 1e-6);
    }
}
