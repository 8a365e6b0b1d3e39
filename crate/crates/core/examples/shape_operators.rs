//! Principal curvatures of M+^t from the exact shape operators, compared
//! with a finite-difference estimate and the Gauss-equation scalar curvature.

use std::sync::Arc;

use fkm_foliation::geometry::{
    analytic_shape_operators, gauss_scalar_curvature, numeric_second_fundamental_form, sample_point,
    scalar_curvature_analytic, FdOptions, ManifoldKind, ManifoldSpec,
};
use fkm_foliation::numerics::cluster_spectrum;
use fkm_foliation::CliffordSystem;

fn main() -> fkm_foliation::Result<()> {
    let sys = Arc::new(CliffordSystem::build(2, 2)?);
    let (l, m) = (sys.l(), sys.m());
    for t in [0.2, 0.5, std::f64::consts::FRAC_PI_4] {
        let spec = ManifoldSpec::new(sys.clone(), ManifoldKind::MPlusT { t })?;
        let p = sample_point(&spec, 7)?;
        let exact = analytic_shape_operators(&p)?;
        println!("t = {t:.4}  (cot t = {:.4}, tan t = {:.4})", 1.0 / t.tan(), t.tan());
        for alpha in 0..=m {
            let spectrum = cluster_spectrum(&exact.principal_curvatures(alpha)?, 1e-8);
            let pretty: Vec<String> = spectrum.iter().map(|(v, k)| format!("{v:+.4} x{k}")).collect();
            println!("  A_{alpha}: {}", pretty.join(", "));
        }
        let numeric = numeric_second_fundamental_form(&p, FdOptions::default())?;
        let fd_error = numeric
            .components
            .iter()
            .zip(&exact.components)
            .map(|(a, b)| a.sub(b).max_abs())
            .fold(0.0, f64::max);
        println!(
            "  finite differences off by {fd_error:.1e}; scalar curvature {:.6} (formula {:.6})",
            gauss_scalar_curvature(&numeric),
            scalar_curvature_analytic(l, m, t)?
        );
    }
    Ok(())
}
