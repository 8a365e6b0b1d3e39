//! sup|B|^2 (T - t) on the grid t_j = T(1 - 2^-j) and its limit.

use std::f64::consts::FRAC_PI_6;
use std::sync::Arc;

use fkm_foliation::flow::{blowup_profile, FlowConfig};
use fkm_foliation::CliffordSystem;

fn main() -> fkm_foliation::Result<()> {
    for (m, k) in [(1, 3), (4, 2)] {
        let config = FlowConfig::new(Arc::new(CliffordSystem::build(m, k)?), FRAC_PI_6)?;
        let r = blowup_profile(&config)?;
        println!("(m,k)=({m},{k}) T={:.6} product at t=0: {:.6}", r.singular_time, r.product_at_start);
        for s in r.samples.iter().step_by(4) {
            println!("  T-t={:.3e} beta={:.3e} product={:.10}", s.s, s.beta, s.product);
        }
        println!("  extrapolated limit {:.10}, C = {:.6}, monotone: {}", r.limit, r.constant, r.monotone);
    }
    Ok(())
}
