//! The functions <P z, z> restricted to the chains M_i and N_i: gradient and
//! Laplacian identities, and the principal curvatures of their level sets.

use std::sync::Arc;

use fkm_foliation::geometry::{
    expected_level_spectrum, isoparametric_identity_check, level_set_spectrum, sample_point, FdOptions,
    ManifoldKind, ManifoldSpec,
};
use fkm_foliation::CliffordSystem;

fn main() -> fkm_foliation::Result<()> {
    let sys = Arc::new(CliffordSystem::build(3, 2)?);
    let fd = FdOptions::default();
    for kind in [
        ManifoldKind::MChain { i: 0 },
        ManifoldKind::MChain { i: 2 },
        ManifoldKind::NChain { i: 2 },
        ManifoldKind::NChain { i: 3 },
    ] {
        let spec = ManifoldSpec::new(sys.clone(), kind)?;
        let r = isoparametric_identity_check(&sample_point(&spec, 3)?, fd)?;
        println!(
            "{kind:?} (dim {}): f = {:+.4}, |grad f|^2 = {:.6} vs {:.6}, Laplacian {:+.6} vs {:+.6}",
            spec.dim(),
            r.value,
            r.grad_sq,
            r.grad_expected,
            r.laplacian,
            r.laplacian_expected
        );
    }
    for kind in [
        ManifoldKind::LevelU { i: 1, c: 0.0 },
        ManifoldKind::LevelU { i: 1, c: 0.6 },
        ManifoldKind::LevelV { i: 2, c: 0.6 },
    ] {
        let spec = ManifoldSpec::new(sys.clone(), kind)?;
        let got = level_set_spectrum(&sample_point(&spec, 5)?, fd)?;
        let (lo, hi) = (got.first().copied().unwrap_or(0.0), got.last().copied().unwrap_or(0.0));
        println!(
            "{kind:?}: principal curvatures in [{lo:+.5}, {hi:+.5}], expected {:?}",
            expected_level_spectrum(&spec)?
        );
    }
    Ok(())
}
