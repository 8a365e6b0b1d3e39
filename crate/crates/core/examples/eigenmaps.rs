//! Focal maps (z +- P z)/sqrt2 onto great spheres and their eigenmap checks.

use std::sync::Arc;

use fkm_foliation::focal::{verify_eigenmap, FocalMapSpec};
use fkm_foliation::geometry::{FdOptions, Sign};
use fkm_foliation::CliffordSystem;

fn main() -> fkm_foliation::Result<()> {
    let sys = Arc::new(CliffordSystem::build(3, 2)?);
    let maps = [
        FocalMapSpec::phi(0, Sign::Plus),
        FocalMapSpec::phi(2, Sign::Minus),
        FocalMapSpec::psi(2, Sign::Plus),
        FocalMapSpec::psi(3, Sign::Minus),
    ];
    for spec in maps {
        let r = verify_eigenmap(sys.clone(), &spec, 4, 9, FdOptions::default())?;
        println!(
            "{:?} i={} {:?}: domain {:?}, eigenvalue {}, rank {}..{} (want {}), |H + n z| <= {:.1e}",
            spec.family,
            spec.i,
            spec.sign,
            spec.domain(),
            r.eigenvalue,
            r.min_rank,
            r.max_rank,
            r.expected_rank,
            r.max_mean_curvature_residual
        );
    }
    Ok(())
}
