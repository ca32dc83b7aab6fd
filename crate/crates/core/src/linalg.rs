//! Conjugate gradients for the symmetric positive definite systems that show
//! up here (`I - P` for a symmetric substochastic kernel `P`).

use crate::error::{Error, Result};

#[derive(Debug)]
pub struct Solution {
    pub x: Vec<f64>,
    /// Max-norm of `b - A x`, recomputed from scratch at the end.
    pub residual: f64,
}

/// Solves `A x = b` where `apply(v, out)` writes `A v` into `out`.
///
/// Iterates until the max-norm residual is below `tol`, then checks the true
/// residual once more so drift in the recursive residual cannot fake
/// convergence.
pub fn conjugate_gradient<F>(apply: F, b: &[f64], tol: f64, max_iter: usize) -> Result<Solution>
where
    F: Fn(&[f64], &mut [f64]),
{
    let n = b.len();
    let mut x = vec![0.0; n];
    let mut r = b.to_vec();
    let mut p = r.clone();
    let mut ap = vec![0.0; n];
    let mut rr = dot(&r, &r);
    let mut iterations = 0;

    // Stop a bit below tol so the recomputed residual has headroom.
    let target = tol * 0.1;
    while max_abs(&r) > target && iterations < max_iter {
        apply(&p, &mut ap);
        let pap = dot(&p, &ap);
        if pap <= 0.0 {
            break;
        }
        let alpha = rr / pap;
        for k in 0..n {
            x[k] += alpha * p[k];
            r[k] -= alpha * ap[k];
        }
        let rr_new = dot(&r, &r);
        let beta = rr_new / rr;
        rr = rr_new;
        for k in 0..n {
            p[k] = r[k] + beta * p[k];
        }
        iterations += 1;
    }

    apply(&x, &mut ap);
    let residual = b
        .iter()
        .zip(&ap)
        .map(|(bi, ai)| (bi - ai).abs())
        .fold(0.0, f64::max);
    if residual >= tol || !residual.is_finite() {
        return Err(Error::NotConverged {
            residual,
            iterations,
        });
    }
    Ok(Solution { x, residual })
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_tridiagonal() {
        // 1-d Dirichlet Laplacian: 2x_k - x_{k-1} - x_{k+1} = 0, x_0 = 0, x_{n+1} = 1
        let n = 50;
        let mut b = vec![0.0; n];
        b[n - 1] = 1.0;
        let sol = conjugate_gradient(
            |v, out| {
                for k in 0..n {
                    let left = if k > 0 { v[k - 1] } else { 0.0 };
                    let right = if k + 1 < n { v[k + 1] } else { 0.0 };
                    out[k] = 2.0 * v[k] - left - right;
                }
            },
            &b,
            1e-12,
            10_000,
        )
        .unwrap();
        for (k, x) in sol.x.iter().enumerate() {
            let want = (k + 1) as f64 / (n + 1) as f64;
            assert!((x - want).abs() < 1e-10);
        }
    }

    #[test]
    fn reports_non_convergence() {
        let b = vec![1.0; 10];
        let err = conjugate_gradient(|v, out| out.copy_from_slice(v), &b, 1e-12, 0).unwrap_err();
        assert!(matches!(err, Error::NotConverged { iterations: 0, .. }));
    }
}
