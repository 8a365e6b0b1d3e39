//! Mean curvature flow of the family `M₊ᵗ`.
//!
//! A point `(cos β₀ x, sin β₀ y)` of `M₊^{β₀}` moves as
//! `(cos β(t) x, sin β(t) y)` where `cos 2β(t) = cos 2β₀ · e^{4κt}` and
//! `κ = l - m - 1`. The flow is ancient, and for `β₀ < π/4` it collapses onto
//! `S^{l-1} × {0}` at `T = -ln(cos 2β₀) / (4κ)` with `sup|B|² (T - t) → 1/2`.

use std::f64::consts::FRAC_PI_4;
use std::fmt::Write as _;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::clifford::CliffordSystem;
use crate::error::{Error, Result};
use crate::geometry::checks::m_plus_t_norm_sq;
use crate::geometry::{sample_points, ManifoldKind, ManifoldSpec};
use crate::numerics::dense::{norm, scale, sub};
use crate::numerics::ode::{rk4_integrate_with, rk4_step};

/// Below this angle the ambient integrator stops and the closed form takes over.
pub const HANDOFF_BETA: f64 = 0.01;
/// Cloud drift from `M₊^{β(t)}` that aborts the ambient integration.
pub const DRIFT_TOL: f64 = 1e-6;
/// Largest spread of the per-point angles for a consistent state.
pub const CONSISTENCY_TOL: f64 = 1e-10;
/// Steps near the collapse are capped at this fraction of `β²/κ`.
const STIFF_FRACTION: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SingularTime {
    At(f64),
    /// `β₀ = π/4`: the minimal member is stationary.
    Never,
}

impl SingularTime {
    pub fn finite(self) -> Option<f64> {
        match self {
            SingularTime::At(t) => Some(t),
            SingularTime::Never => None,
        }
    }
}

fn kappa(l: usize, m: usize) -> Result<f64> {
    if l < m + 2 {
        return Err(Error::Domain(format!("flow needs l - m - 1 >= 1 (l={l}, m={m})")));
    }
    Ok((l - m - 1) as f64)
}

fn check_beta0(beta0: f64) -> Result<()> {
    if beta0 > 0.0 && beta0 <= FRAC_PI_4 {
        Ok(())
    } else {
        Err(Error::Domain(format!("beta0 = {beta0} outside (0, pi/4]")))
    }
}

fn is_minimal(beta0: f64) -> bool {
    (beta0 - FRAC_PI_4).abs() <= 1e-15
}

pub fn singular_time(beta0: f64, l: usize, m: usize) -> Result<SingularTime> {
    let k = kappa(l, m)?;
    check_beta0(beta0)?;
    if is_minimal(beta0) {
        return Ok(SingularTime::Never);
    }
    Ok(SingularTime::At(-(2.0 * beta0).cos().ln() / (4.0 * k)))
}

/// `β(t)` for any `t < T`, evaluated through `s = T - t` as
/// `sin²β = -expm1(-4κs) / 2`, which stays accurate as `t → T` and `t → -∞`.
pub fn beta_closed_form(beta0: f64, l: usize, m: usize, t: f64) -> Result<f64> {
    let k = kappa(l, m)?;
    match singular_time(beta0, l, m)? {
        SingularTime::Never => Ok(FRAC_PI_4),
        SingularTime::At(big_t) => {
            let s = big_t - t;
            if !(s > 0.0) {
                return Err(Error::Domain(format!("t = {t} is not before the singular time {big_t}")));
            }
            Ok((-(-4.0 * k * s).exp_m1() / 2.0).sqrt().asin().min(FRAC_PI_4))
        }
    }
}

/// `β̇ = -2κ cot 2β`.
pub fn beta_rate(beta: f64, kappa: f64) -> f64 {
    -2.0 * kappa / (2.0 * beta).tan()
}

/// `sup |B|²` on `M₊^β`.
pub fn sup_b_norm_sq(l: usize, m: usize, beta: f64) -> f64 {
    m_plus_t_norm_sq(l, m, beta)
}

#[derive(Debug, Clone)]
pub struct FlowConfig {
    pub system: Arc<CliffordSystem>,
    pub beta0: f64,
    pub dt: f64,
    pub n_points: usize,
    pub seed: u64,
}

impl FlowConfig {
    /// Defaults: `dt = 1e-4`, 200 points, seed 42.
    pub fn new(system: Arc<CliffordSystem>, beta0: f64) -> Result<Self> {
        kappa(system.l(), system.m())?;
        check_beta0(beta0)?;
        Ok(Self {
            system,
            beta0,
            dt: 1e-4,
            n_points: 200,
            seed: 42,
        })
    }

    pub fn with_dt(mut self, dt: f64) -> Result<Self> {
        if !(dt > 0.0) {
            return Err(Error::Domain(format!("dt = {dt} must be positive")));
        }
        self.dt = dt;
        Ok(self)
    }

    pub fn with_points(mut self, n_points: usize) -> Self {
        self.n_points = n_points;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn kappa(&self) -> f64 {
        (self.system.l() - self.system.m() - 1) as f64
    }

    pub fn singular_time(&self) -> SingularTime {
        singular_time(self.beta0, self.system.l(), self.system.m()).expect("validated config")
    }

    pub fn beta_at(&self, t: f64) -> Result<f64> {
        beta_closed_form(self.beta0, self.system.l(), self.system.m(), t)
    }

    /// Time at which `β` reaches [`HANDOFF_BETA`].
    pub fn handoff_time(&self) -> Option<f64> {
        self.singular_time().finite().map(|_| {
            ((2.0 * HANDOFF_BETA).cos() / (2.0 * self.beta0).cos()).ln() / (4.0 * self.kappa())
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BetaTrajectory {
    pub times: Vec<f64>,
    pub betas: Vec<f64>,
    /// The requested end time was moved back to `T - dt`.
    pub truncated: bool,
}

impl BetaTrajectory {
    /// Largest deviation from the closed form along the trajectory.
    pub fn max_error(&self, config: &FlowConfig) -> Result<f64> {
        let mut worst = 0.0_f64;
        for (&t, &b) in self.times.iter().zip(&self.betas) {
            worst = worst.max((b - config.beta_at(t)?).abs());
        }
        Ok(worst)
    }
}

/// RK4 on the scalar angle ODE over `[0, t_end]`.
pub fn integrate_beta(config: &FlowConfig, t_end: f64) -> Result<BetaTrajectory> {
    let k = config.kappa();
    let (t_end, truncated) = match config.singular_time() {
        SingularTime::At(big_t) if t_end > big_t - config.dt => (big_t - config.dt, true),
        _ => (t_end, false),
    };
    let mut out = BetaTrajectory {
        times: Vec::new(),
        betas: Vec::new(),
        truncated,
    };
    rk4_integrate_with(
        |_, y: &[f64]| vec![beta_rate(y[0], k)],
        &[config.beta0],
        0.0,
        t_end,
        config.dt,
        |t, y| {
            out.times.push(t);
            out.betas.push(y[0]);
        },
    )?;
    Ok(out)
}

/// `H(z) = 2κ cot 2β (tan β u, -cot β v)` for `z = (u, v)` on `M₊^β`.
pub fn ambient_mean_curvature(z: &[f64], kappa: f64) -> Vec<f64> {
    let l = z.len() / 2;
    let beta = norm(&z[l..]).atan2(norm(&z[..l]));
    let c = 2.0 * kappa / (2.0 * beta).tan();
    let (a, b) = (c * beta.tan(), -c / beta.tan());
    z.iter()
        .enumerate()
        .map(|(j, x)| if j < l { a * x } else { b * x })
        .collect()
}

/// `β` of a cloud point, `arcsin |v|` clamped to `(0, π/4]`.
pub fn recover_beta(z: &[f64]) -> f64 {
    let l = z.len() / 2;
    norm(&z[l..]).min(1.0).asin().clamp(f64::MIN_POSITIVE, FRAC_PI_4)
}

/// `(cos β x, sin β y)` for a point `(x, y) / √2` of `M₊`.
pub fn closed_form_point(base: &[f64], beta: f64) -> Vec<f64> {
    let l = base.len() / 2;
    let r = std::f64::consts::SQRT_2;
    base.iter()
        .enumerate()
        .map(|(j, x)| r * x * if j < l { beta.cos() } else { beta.sin() })
        .collect()
}

#[derive(Debug, Clone)]
pub struct FlowState {
    pub time: f64,
    /// Closed-form angle at `time`.
    pub beta: f64,
    pub cloud: Vec<Vec<f64>>,
    /// Starting points on `M₊ = M₊^{π/4}`.
    pub base: Vec<Vec<f64>>,
    pub singular_time: SingularTime,
    /// Spread of the per-point recovered angles.
    pub beta_spread: f64,
    pub consistent: bool,
    /// The closed form replaced the integrator after `β` fell below [`HANDOFF_BETA`].
    pub handed_off: bool,
    pub system: Arc<CliffordSystem>,
}

impl FlowState {
    /// Pointwise distance of the cloud from the closed-form solution.
    pub fn closed_form_error(&self) -> f64 {
        self.cloud
            .iter()
            .zip(&self.base)
            .map(|(z, b)| norm(&sub(z, &closed_form_point(b, self.beta))))
            .fold(0.0, f64::max)
    }

    /// Largest `||z| - 1|` over the cloud.
    pub fn unit_drift(&self) -> f64 {
        self.cloud.iter().map(|z| (norm(z) - 1.0).abs()).fold(0.0, f64::max)
    }

    /// Largest violation of the equations of `M₊^{β(time)}` over the cloud.
    pub fn constraint_residual(&self) -> Result<f64> {
        let spec = ManifoldSpec::new(self.system.clone(), ManifoldKind::MPlusT { t: self.beta })?;
        Ok(self.cloud.iter().map(|z| spec.constraint_residual(z)).fold(0.0, f64::max))
    }
}

/// One row of the trajectory export.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRow {
    pub t: f64,
    pub beta: f64,
    pub sup_b2: f64,
    /// `sup|B|² (T - t)`, NaN for the stationary member.
    pub product: f64,
    /// Distance of the numerical cloud from the closed form.
    pub cloud_residual: f64,
}

fn spread(values: impl Iterator<Item = f64>) -> f64 {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), b| (lo.min(b), hi.max(b)));
    if lo.is_finite() {
        hi - lo
    } else {
        0.0
    }
}

/// Integrates the cloud with the analytic field `ż = H(z)` up to `t_end`,
/// recording a row every `stride` steps (0 disables recording).
///
/// The step is `min(dt, 0.01 β² / κ)` so the last stretch before the
/// hand-off stays resolved; past `β < 0.01` the closed form is applied to
/// the directions `(x, y)` of each point.
pub fn flow_trajectory(config: &FlowConfig, t_end: f64, stride: usize) -> Result<(FlowState, Vec<TrajectoryRow>)> {
    let sys = config.system.clone();
    let (l, m) = (sys.l(), sys.m());
    let k = config.kappa();
    let big_t = config.singular_time();
    if let SingularTime::At(tt) = big_t {
        if t_end >= tt {
            return Err(Error::Domain(format!("t_end = {t_end} is not before the singular time {tt}")));
        }
    }
    if !(t_end >= 0.0) {
        return Err(Error::Domain(format!("t_end = {t_end} must be nonnegative")));
    }
    let m_plus = ManifoldSpec::new(sys.clone(), ManifoldKind::MPlusT { t: FRAC_PI_4 })?;
    let base: Vec<Vec<f64>> = sample_points(&m_plus, config.n_points, config.seed)?
        .into_iter()
        .map(|p| p.z().to_vec())
        .collect();
    let mut cloud: Vec<Vec<f64>> = base.iter().map(|b| closed_form_point(b, config.beta0)).collect();

    let numeric_end = match config.handoff_time() {
        Some(th) if th < t_end => th.max(0.0),
        _ => t_end,
    };
    let handed_off = numeric_end < t_end;

    let mut rows = Vec::new();
    let record = |t: f64, cloud: &[Vec<f64>], rows: &mut Vec<TrajectoryRow>| -> Result<()> {
        let beta = config.beta_at(t)?;
        let sup_b2 = sup_b_norm_sq(l, m, beta);
        let product = big_t.finite().map_or(f64::NAN, |tt| sup_b2 * (tt - t));
        let cloud_residual = cloud
            .iter()
            .zip(&base)
            .map(|(z, b)| norm(&sub(z, &closed_form_point(b, beta))))
            .fold(0.0, f64::max);
        rows.push(TrajectoryRow {
            t,
            beta,
            sup_b2,
            product,
            cloud_residual,
        });
        Ok(())
    };
    if stride > 0 {
        record(0.0, &cloud, &mut rows)?;
    }

    let mut field = |_: f64, z: &[f64]| ambient_mean_curvature(z, k);
    let mut t = 0.0;
    let mut step = 0usize;
    while t < numeric_end && !is_minimal(config.beta0) {
        let beta = recover_beta(&cloud[0]);
        let h = config.dt.min(STIFF_FRACTION * beta * beta / k).min(numeric_end - t);
        for z in cloud.iter_mut() {
            *z = rk4_step(&mut field, t, z, h);
            if z.iter().any(|v| !v.is_finite()) {
                return Err(Error::Integration(format!("non-finite cloud state at t={t}")));
            }
        }
        t = if numeric_end - t <= h { numeric_end } else { t + h };
        step += 1;
        let expected = config.beta_at(t)?;
        let drift = cloud
            .iter()
            .map(|z| (recover_beta(z) - expected).abs().max((norm(z) - 1.0).abs()))
            .fold(0.0, f64::max);
        if drift > DRIFT_TOL {
            return Err(Error::Integration(format!(
                "cloud left M+^beta(t) by {drift:e} at t={t}"
            )));
        }
        if stride > 0 && step.is_multiple_of(stride) {
            record(t, &cloud, &mut rows)?;
        }
    }
    let beta_spread = spread(cloud.iter().map(|z| recover_beta(z)));

    let beta = config.beta_at(t_end)?;
    if handed_off {
        for z in cloud.iter_mut() {
            let (u, v) = z.split_at(l);
            let (nu, nv) = (norm(u), norm(v));
            let mut next = scale(beta.cos() / nu, u);
            next.extend(scale(beta.sin() / nv, v));
            *z = next;
        }
    }
    if stride > 0 && rows.last().is_none_or(|r| r.t < t_end) {
        record(t_end, &cloud, &mut rows)?;
    }

    let state = FlowState {
        time: t_end,
        beta,
        cloud,
        base,
        singular_time: big_t,
        beta_spread,
        consistent: beta_spread <= CONSISTENCY_TOL,
        handed_off,
        system: sys,
    };
    Ok((state, rows))
}

pub fn flow_point_cloud(config: &FlowConfig, t_end: f64) -> Result<FlowState> {
    flow_trajectory(config, t_end, 0).map(|(s, _)| s)
}

/// CSV with header `t,beta,sup_B2,product,cloud_residual`, 17 significant digits.
pub fn trajectory_csv(rows: &[TrajectoryRow]) -> String {
    let mut out = String::from("t,beta,sup_B2,product,cloud_residual\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            r.t, r.beta, r.sup_b2, r.product, r.cloud_residual
        );
    }
    out
}

/// Largest distance from the cloud to `S^{l-1} × {0}`. Requires the state to
/// be within `1e-3` of the singular time.
pub fn convergence_check(state: &FlowState) -> Result<f64> {
    let big_t = state
        .singular_time
        .finite()
        .ok_or_else(|| Error::Domain("the stationary member never collapses".into()))?;
    if big_t - state.time > 1e-3 {
        return Err(Error::Domain(format!(
            "state at t={} is farther than 1e-3 from T={big_t}",
            state.time
        )));
    }
    Ok(state.cloud.iter().map(|z| distance_to_limit_sphere(z)).fold(0.0, f64::max))
}

/// `|z - (u/|u|, 0)|` for `z = (u, v)`.
pub fn distance_to_limit_sphere(z: &[f64]) -> f64 {
    let l = z.len() / 2;
    let nu = norm(&z[..l]);
    ((1.0 - nu).powi(2) + norm(&z[l..]).powi(2)).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlowupSample {
    pub t: f64,
    /// `T - t`.
    pub s: f64,
    pub beta: f64,
    pub sup_b2: f64,
    pub product: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlowupReport {
    pub singular_time: f64,
    /// `sup|B|²(β₀) · T`.
    pub product_at_start: f64,
    /// Grid `t_j = T(1 - 2^{-j})`, `j = 1..=24`.
    pub samples: Vec<BlowupSample>,
    /// `2 p_{j+1} - p_j`: first-order Richardson in `T - t`.
    pub richardson: Vec<f64>,
    pub limit: f64,
    /// Largest product seen, including `t = 0`.
    pub constant: f64,
    pub monotone: bool,
}

pub const BLOWUP_LEVELS: usize = 24;

pub fn blowup_profile(config: &FlowConfig) -> Result<BlowupReport> {
    let (l, m) = (config.system.l(), config.system.m());
    let big_t = config
        .singular_time()
        .finite()
        .ok_or_else(|| Error::Domain("no singularity for the minimal member beta0 = pi/4".into()))?;
    let samples = (1..=BLOWUP_LEVELS)
        .map(|j| {
            let s = big_t * 0.5f64.powi(j as i32);
            let t = big_t - s;
            let beta = config.beta_at(t)?;
            let sup_b2 = sup_b_norm_sq(l, m, beta);
            Ok(BlowupSample {
                t,
                s,
                beta,
                sup_b2,
                product: sup_b2 * s,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let richardson: Vec<f64> = samples.windows(2).map(|w| 2.0 * w[1].product - w[0].product).collect();
    let limit = *richardson.last().expect("at least two levels");
    let product_at_start = sup_b_norm_sq(l, m, config.beta0) * big_t;
    let constant = samples.iter().map(|s| s.product).fold(product_at_start, f64::max);
    let diffs: Vec<f64> = samples.windows(2).map(|w| w[1].product - w[0].product).collect();
    let monotone = diffs.iter().all(|d| *d <= 1e-15) || diffs.iter().all(|d| *d >= -1e-15);
    Ok(BlowupReport {
        singular_time: big_t,
        product_at_start,
        samples,
        richardson,
        limit,
        constant,
        monotone,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_6, FRAC_PI_8, LN_2};

    fn config(m: usize, k: usize, beta0: f64) -> FlowConfig {
        FlowConfig::new(Arc::new(CliffordSystem::build(m, k).unwrap()), beta0).unwrap()
    }

    #[test]
    fn singular_time_pi_over_6() {
        let t = singular_time(FRAC_PI_6, 4, 2).unwrap().finite().unwrap();
        assert!((t - LN_2 / 4.0).abs() < 1e-12);
        assert_eq!(singular_time(FRAC_PI_4, 4, 2).unwrap(), SingularTime::Never);
        assert!(singular_time(0.0, 4, 2).is_err());
        assert!(singular_time(0.3, 2, 1).is_err());
    }

    #[test]
    fn singular_time_scales_inversely_with_kappa() {
        let a = singular_time(0.4, 4, 2).unwrap().finite().unwrap();
        let b = singular_time(0.4, 8, 3).unwrap().finite().unwrap();
        assert!((a / b - 4.0).abs() < 1e-12);
    }

    #[test]
    fn closed_form_values() {
        let t = LN_2 / 4.0;
        assert!((beta_closed_form(FRAC_PI_6, 4, 2, 0.0).unwrap() - FRAC_PI_6).abs() < 1e-15);
        assert!((beta_closed_form(FRAC_PI_6, 4, 2, t / 2.0).unwrap() - FRAC_PI_8).abs() < 1e-14);
        assert!((beta_closed_form(FRAC_PI_6, 4, 2, -60.0).unwrap() - FRAC_PI_4).abs() < 1e-12);
        let big_t = singular_time(FRAC_PI_6, 4, 2).unwrap().finite().unwrap();
        assert!(beta_closed_form(FRAC_PI_6, 4, 2, big_t).is_err());
    }

    #[test]
    fn ancient_solution() {
        for t in [-1.0, -10.0, -1e3, -1e6] {
            let b = beta_closed_form(0.3, 8, 1, t).unwrap();
            assert!(b > 0.0 && b <= FRAC_PI_4);
        }
    }

    #[test]
    fn rk4_tracks_closed_form() {
        let c = config(2, 2, FRAC_PI_6);
        let t = c.singular_time().finite().unwrap();
        let traj = integrate_beta(&c, 0.9 * t).unwrap();
        assert!(!traj.truncated);
        assert!(traj.max_error(&c).unwrap() < 1e-8);
        assert!(traj.betas.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn rk4_truncates_before_singularity() {
        let c = config(2, 2, FRAC_PI_6);
        let t = c.singular_time().finite().unwrap();
        let traj = integrate_beta(&c.clone().with_dt(1e-3).unwrap(), 2.0 * t).unwrap();
        assert!(traj.truncated);
        assert!(*traj.times.last().unwrap() < t);
    }

    #[test]
    fn cloud_matches_closed_form() {
        let c = config(1, 3, FRAC_PI_6).with_points(20);
        let t = c.singular_time().finite().unwrap();
        let state = flow_point_cloud(&c, 0.9 * t).unwrap();
        assert!(state.closed_form_error() < 1e-6, "{}", state.closed_form_error());
        assert!(state.unit_drift() < 1e-8);
        assert!(state.consistent);
        assert!(state.constraint_residual().unwrap() < 1e-6);
    }

    #[test]
    fn minimal_member_is_stationary() {
        let c = config(1, 3, FRAC_PI_4).with_points(5);
        let state = flow_point_cloud(&c, 1.0).unwrap();
        assert_eq!(state.closed_form_error(), 0.0);
        assert!(ambient_mean_curvature(&state.cloud[0], 1.0).iter().all(|x| x.abs() < 1e-15));
    }

    #[test]
    fn collapse_near_singular_time() {
        let c = config(1, 3, FRAC_PI_6).with_points(10);
        let t = c.singular_time().finite().unwrap();
        let state = flow_point_cloud(&c, t - 1e-4).unwrap();
        let d = convergence_check(&state).unwrap();
        assert!(d <= 2.0 * state.beta.sin() + 1e-8);
        let late = flow_point_cloud(&c, t - 1e-7).unwrap();
        assert!(late.handed_off);
        assert!(convergence_check(&late).unwrap() < d);
        assert!(convergence_check(&flow_point_cloud(&c, 0.5 * t).unwrap()).is_err());
    }

    #[test]
    fn blowup_limit_is_one_half() {
        let c = config(1, 3, FRAC_PI_6);
        let r = blowup_profile(&c).unwrap();
        assert!((r.limit - 0.5).abs() < 1e-2, "{}", r.limit);
        assert!(r.monotone);
        assert!(r.samples.iter().all(|s| s.product <= r.constant));
        let start = sup_b_norm_sq(c.system.l(), 1, FRAC_PI_6) * r.singular_time;
        assert_eq!(r.product_at_start, start);
    }

    #[test]
    fn trajectory_export_header() {
        let c = config(1, 3, 0.6).with_points(3);
        let (_, rows) = flow_trajectory(&c, 0.01, 10).unwrap();
        let csv = trajectory_csv(&rows);
        assert!(csv.starts_with("t,beta,sup_B2,product,cloud_residual\n"));
        assert_eq!(csv.lines().count(), rows.len() + 1);
    }
}
