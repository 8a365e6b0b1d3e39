//! Flows a cloud on M+^{pi/6} by mean curvature and compares it with the
//! exact solution; optionally writes the trajectory as CSV.
//!
//! cargo run --example mean_curvature_flow -- [trajectory.csv]

use std::f64::consts::FRAC_PI_6;
use std::sync::Arc;

use fkm_foliation::flow::{convergence_check, flow_trajectory, integrate_beta, trajectory_csv, FlowConfig};
use fkm_foliation::CliffordSystem;

fn main() -> fkm_foliation::Result<()> {
    let config = FlowConfig::new(Arc::new(CliffordSystem::build(2, 2)?), FRAC_PI_6)?.with_points(50);
    let big_t = config.singular_time().finite().expect("beta0 < pi/4");
    println!("singular time T = {big_t:.12}");

    let beta = integrate_beta(&config, 0.9 * big_t)?;
    println!("RK4 on beta over [0, 0.9T]: max error {:.2e}", beta.max_error(&config)?);

    let (state, rows) = flow_trajectory(&config, big_t - 1e-4, 200)?;
    println!(
        "cloud at T - 1e-4: beta = {:.6}, distance to the limit sphere {:.6} (bound {:.6}), handed off: {}",
        state.beta,
        convergence_check(&state)?,
        2.0 * state.beta.sin(),
        state.handed_off
    );
    for r in rows.iter().step_by(rows.len().div_ceil(6)) {
        println!(
            "  t={:.5} beta={:.5} sup|B|^2={:10.3} product={:.5} residual={:.1e}",
            r.t, r.beta, r.sup_b2, r.product, r.cloud_residual
        );
    }
    if let Some(path) = std::env::args().nth(1) {
        std::fs::write(&path, trajectory_csv(&rows))?;
        println!("wrote {} rows to {path}", rows.len());
    }
    Ok(())
}
