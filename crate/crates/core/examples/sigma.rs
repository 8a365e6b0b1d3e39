//! Maximal normal curvature |B(X,X)|^2 over unit tangent vectors on the
//! two focal submanifolds.

use std::f64::consts::FRAC_PI_4;
use std::sync::Arc;

use fkm_foliation::geometry::{sigma_extrinsic, ManifoldKind, ManifoldSpec};
use fkm_foliation::CliffordSystem;

fn main() -> fkm_foliation::Result<()> {
    for (m, k) in [(1, 3), (2, 2), (3, 2)] {
        let sys = Arc::new(CliffordSystem::build(m, k)?);
        for (name, kind) in [("M+", ManifoldKind::MPlusT { t: FRAC_PI_4 }), ("M-", ManifoldKind::MMinus)] {
            let spec = ManifoldSpec::new(sys.clone(), kind)?;
            let r = sigma_extrinsic(&spec, 50, 1)?;
            println!(
                "(m,k)=({m},{k}) {name} dim {:>2}: sigma = {:.10} ({} of 50 restarts reach it)",
                spec.dim(),
                r.best,
                r.restarts_at_best
            );
        }
    }
    Ok(())
}
