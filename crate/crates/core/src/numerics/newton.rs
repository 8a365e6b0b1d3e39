//! Damped minimum-norm Gauss-Newton projection onto `{z : r(z) = 0}`.

use super::dense::{axpy, dot, norm, solve, Matrix};
use crate::error::{Error, Result};

/// Constraint residuals and their Jacobian (one row per constraint).
pub struct Linearization {
    pub residual: Vec<f64>,
    pub jacobian: Matrix,
}

#[derive(Debug, Clone)]
pub struct Projection {
    pub point: Vec<f64>,
    pub iterations: usize,
    /// Residual norm before each iteration, plus the final one.
    pub history: Vec<f64>,
}

impl Projection {
    pub fn residual(&self) -> f64 {
        *self.history.last().expect("history is never empty")
    }
}

/// Projects `z0` onto the zero set of `constraints`.
///
/// Each step is `Δ = -Jᵀ (J Jᵀ)⁻¹ r`, i.e. the smallest correction that
/// zeroes the linearized residual. The step is halved while it increases the
/// residual norm.
pub fn newton_project<F>(z0: &[f64], mut constraints: F, tol: f64, max_iter: usize) -> Result<Projection>
where
    F: FnMut(&[f64]) -> Linearization,
{
    let mut z = z0.to_vec();
    let mut lin = constraints(&z);
    let mut res = norm(&lin.residual);
    let mut history = vec![res];
    let mut iterations = 0;

    while !(res < tol) {
        if iterations == max_iter || !res.is_finite() {
            return Err(Error::Projection {
                iterations,
                residual: res,
            });
        }
        iterations += 1;

        let j = &lin.jacobian;
        let k = j.rows();
        let jjt = Matrix::from_fn(k, k, |a, b| dot(j.row(a), j.row(b)));
        let lambda = solve(&jjt, &lin.residual)?;
        let mut step = vec![0.0; z.len()];
        for (a, la) in lambda.iter().enumerate() {
            axpy(-la, j.row(a), &mut step);
        }

        let mut alpha = 1.0;
        loop {
            let mut trial = z.clone();
            axpy(alpha, &step, &mut trial);
            let trial_lin = constraints(&trial);
            let trial_res = norm(&trial_lin.residual);
            if trial_res <= res || alpha < 1e-6 {
                z = trial;
                lin = trial_lin;
                res = trial_res;
                break;
            }
            alpha *= 0.5;
        }
        history.push(res);
    }

    Ok(Projection {
        point: z,
        iterations,
        history,
    })
}

/// Linearization of the single constraint `|z|² - 1 = 0`.
pub fn unit_sphere_constraint(z: &[f64]) -> Linearization {
    let n = z.len();
    Linearization {
        residual: vec![dot(z, z) - 1.0],
        jacobian: Matrix::from_fn(1, n, |_, j| 2.0 * z[j]),
    }
}
