//! Fixed-step classical Runge-Kutta integration.

use super::dense::axpy;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Default)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
}

impl Trajectory {
    pub fn last(&self) -> Option<(f64, &[f64])> {
        self.times
            .last()
            .copied()
            .zip(self.states.last().map(Vec::as_slice))
    }
}

/// One classical RK4 step of size `h` from `(t, y)`.
pub fn rk4_step<F>(f: &mut F, t: f64, y: &[f64], h: f64) -> Vec<f64>
where
    F: FnMut(f64, &[f64]) -> Vec<f64>,
{
    let k1 = f(t, y);
    let mut tmp = y.to_vec();
    axpy(0.5 * h, &k1, &mut tmp);
    let k2 = f(t + 0.5 * h, &tmp);
    tmp.copy_from_slice(y);
    axpy(0.5 * h, &k2, &mut tmp);
    let k3 = f(t + 0.5 * h, &tmp);
    tmp.copy_from_slice(y);
    axpy(h, &k3, &mut tmp);
    let k4 = f(t + h, &tmp);

    let mut out = y.to_vec();
    for i in 0..out.len() {
        out[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    out
}

/// Integrates from `t0` to `t1`, calling `observe` after every accepted step
/// (and once for the initial state). The last step is shortened to land on `t1`.
pub fn rk4_integrate_with<F, O>(mut f: F, y0: &[f64], t0: f64, t1: f64, dt: f64, mut observe: O) -> Result<Vec<f64>>
where
    F: FnMut(f64, &[f64]) -> Vec<f64>,
    O: FnMut(f64, &[f64]),
{
    if !(dt > 0.0) || !(t1 > t0) {
        return Err(Error::Domain(format!(
            "rk4 needs dt > 0 and t1 > t0 (dt={dt}, t0={t0}, t1={t1})"
        )));
    }
    let mut y = y0.to_vec();
    observe(t0, &y);
    let steps = ((t1 - t0) / dt).ceil() as usize;
    let mut t = t0;
    for s in 0..steps {
        // step from the grid point rather than accumulating t += dt
        let next = if s + 1 == steps { t1 } else { t0 + (s + 1) as f64 * dt };
        let h = next - t;
        if h <= 0.0 {
            continue;
        }
        y = rk4_step(&mut f, t, &y, h);
        t = next;
        if y.iter().any(|v| !v.is_finite()) {
            return Err(Error::Integration(format!("non-finite state at t={t}")));
        }
        observe(t, &y);
    }
    Ok(y)
}

/// Integrates and records every step.
pub fn rk4_integrate<F>(f: F, y0: &[f64], t0: f64, t1: f64, dt: f64) -> Result<Trajectory>
where
    F: FnMut(f64, &[f64]) -> Vec<f64>,
{
    let mut traj = Trajectory::default();
    rk4_integrate_with(f, y0, t0, t1, dt, |t, y| {
        traj.times.push(t);
        traj.states.push(y.to_vec());
    })?;
    Ok(traj)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay() {
        let traj = rk4_integrate(|_, y| vec![-y[0]], &[1.0], 0.0, 1.0, 1e-3).unwrap();
        let (t, y) = traj.last().unwrap();
        assert_eq!(t, 1.0);
        assert!((y[0] - (-1.0_f64).exp()).abs() < 1e-9);
    }

    #[test]
    fn partial_last_step_lands_on_end() {
        let traj = rk4_integrate(|_, _| vec![1.0], &[0.0], 0.0, 1.05, 0.1).unwrap();
        assert_eq!(traj.times.len(), 12);
        assert_eq!(*traj.times.last().unwrap(), 1.05);
        assert!((traj.states.last().unwrap()[0] - 1.05).abs() < 1e-14);
    }

    #[test]
    fn fourth_order_under_halving() {
        let err = |dt: f64| {
            let y = rk4_integrate_with(|_, y| vec![-y[0]], &[1.0], 0.0, 1.0, dt, |_, _| {}).unwrap();
            (y[0] - (-1.0_f64).exp()).abs()
        };
        let ratio = err(0.1) / err(0.05);
        assert!((ratio - 16.0).abs() < 1.0, "ratio {ratio}");
    }

    #[test]
    fn blow_up_is_an_error() {
        let r = rk4_integrate(|_, y| vec![y[0] * y[0]], &[1.0], 0.0, 2.0, 0.01);
        assert!(matches!(r, Err(Error::Integration(_))));
    }

    #[test]
    fn bad_interval() {
        assert!(rk4_integrate(|_, y| y.to_vec(), &[1.0], 1.0, 0.0, 0.1).is_err());
    }
}
