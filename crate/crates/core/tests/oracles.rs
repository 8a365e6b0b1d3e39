//! Independent oracles: finite differences, brute force and closed forms.

use std::f64::consts::{FRAC_PI_4, FRAC_PI_6};
use std::sync::Arc;

use approx::assert_relative_eq;
use fkm_foliation::clifford::{build_skew_generators, delta_dim};
use fkm_foliation::flow::{ambient_mean_curvature, beta_closed_form, FlowConfig};
use fkm_foliation::geometry::checks::m_plus_t_norm_sq;
use fkm_foliation::geometry::{
    analytic_shape_operators, gauss_scalar_curvature, numeric_second_fundamental_form, sample_point,
    scalar_curvature_analytic, sigma_extrinsic, FdOptions, ManifoldKind, ManifoldSpec,
};
use fkm_foliation::numerics::dense::{dot, norm, normalized, sub};
use fkm_foliation::{CliffordSystem, FkmPolynomial};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

fn gaussian(n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    (0..n).map(|_| StandardNormal.sample(rng)).collect()
}

fn spec(m: usize, k: usize, kind: ManifoldKind) -> ManifoldSpec {
    ManifoldSpec::new(Arc::new(CliffordSystem::build(m, k).unwrap()), kind).unwrap()
}

#[test]
fn gradient_matches_central_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for (m, k) in [(1, 3), (2, 2), (3, 2), (5, 1)] {
        let sys = CliffordSystem::build(m, k).unwrap();
        let f = FkmPolynomial::new(&sys);
        let x = gaussian(sys.dim(), &mut rng);
        let g = f.grad(&x);
        let h = 1e-5;
        for i in 0..x.len() {
            let (mut xp, mut xm) = (x.clone(), x.clone());
            xp[i] += h;
            xm[i] -= h;
            let fd = (f.eval(&xp) - f.eval(&xm)) / (2.0 * h);
            assert!((fd - g[i]).abs() < 1e-6 * (1.0 + g[i].abs()), "m={m} i={i}: {fd} vs {}", g[i]);
        }
    }
}

#[test]
fn laplacian_matches_hessian_trace() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for (m, k) in [(1, 3), (2, 2), (4, 1), (3, 2)] {
        let sys = CliffordSystem::build(m, k).unwrap();
        let f = FkmPolynomial::new(&sys);
        let x = gaussian(sys.dim(), &mut rng);
        let h = 1e-3;
        let f0 = f.eval(&x);
        let mut trace = 0.0;
        for i in 0..x.len() {
            let (mut xp, mut xm) = (x.clone(), x.clone());
            xp[i] += h;
            xm[i] -= h;
            trace += (f.eval(&xp) + f.eval(&xm) - 2.0 * f0) / (h * h);
        }
        let exact = f.laplacian(&x);
        assert!((trace - exact).abs() < 1e-4 * (1.0 + exact.abs()), "m={m}: {trace} vs {exact}");
        let (m1, m2) = sys.multiplicities();
        let target = 8.0 * (m2 - m1) as f64 * dot(&x, &x);
        assert!((exact - target).abs() < 1e-10 * dot(&x, &x));
    }
}

#[test]
fn periodicity_eight_representation() {
    assert_eq!(delta_dim(9).unwrap(), 16);
    assert_eq!(delta_dim(17).unwrap(), 256);
    let gens = build_skew_generators(8, 16).unwrap();
    assert!(gens.relation_residual() < 1e-12);
    // no smaller module carries eight anticommuting complex structures
    assert!(build_skew_generators(8, 8).is_err());
    let sys = CliffordSystem::build(9, 1).unwrap();
    assert_eq!(sys.l(), 16);
    assert!(sys.max_anticommutator_residual() < 1e-12);
}

#[test]
fn clifford_matrices_have_balanced_spectrum() {
    let sys = CliffordSystem::build(3, 2).unwrap();
    for spectrum in sys.eigenvalue_multiplicities().unwrap() {
        assert_eq!(spectrum.len(), 2);
        assert!((spectrum[0].0 + 1.0).abs() < 1e-10 && (spectrum[1].0 - 1.0).abs() < 1e-10);
        assert_eq!((spectrum[0].1, spectrum[1].1), (sys.l(), sys.l()));
    }
}

#[test]
fn flow_field_is_the_mean_curvature_vector() {
    for (m, k, t) in [(1, 3, 0.3), (2, 2, FRAC_PI_6), (3, 2, 0.7)] {
        let p = sample_point(&spec(m, k, ManifoldKind::MPlusT { t }), 11).unwrap();
        let sff = numeric_second_fundamental_form(&p, FdOptions { step: 1e-4, richardson: true }).unwrap();
        let kappa = (p.spec().system().l() - m - 1) as f64;
        let field = ambient_mean_curvature(p.z(), kappa);
        let err = norm(&sub(&sff.mean_curvature_vector(), &field));
        assert!(err < 1e-5, "(m,k,t)=({m},{k},{t}): {err:e}");
    }
}

#[test]
fn richardson_sharpens_the_estimate() {
    let p = sample_point(&spec(2, 2, ManifoldKind::MPlusT { t: 0.4 }), 3).unwrap();
    let exact = analytic_shape_operators(&p).unwrap();
    let err = |opts| {
        let num = numeric_second_fundamental_form(&p, opts).unwrap();
        num.components
            .iter()
            .zip(&exact.components)
            .map(|(a, b)| a.sub(b).max_abs())
            .fold(0.0, f64::max)
    };
    let plain = err(FdOptions::with_step(1e-3));
    let extrapolated = err(FdOptions { step: 1e-3, richardson: true });
    assert!(extrapolated < plain, "{extrapolated:e} vs {plain:e}");
}

#[test]
fn scalar_curvature_from_exact_operators() {
    for (m, k) in [(1, 3), (2, 2), (3, 2), (4, 2)] {
        for j in 1..=10 {
            let t = FRAC_PI_4 * j as f64 / 10.0;
            let p = sample_point(&spec(m, k, ManifoldKind::MPlusT { t }), j).unwrap();
            let sff = analytic_shape_operators(&p).unwrap();
            let l = p.spec().system().l();
            let want = scalar_curvature_analytic(l, m, t).unwrap();
            assert!((gauss_scalar_curvature(&sff) - want).abs() < 1e-9 * want.abs().max(1.0));
            assert!((sff.norm_sq() - m_plus_t_norm_sq(l, m, t)).abs() < 1e-9 * sff.norm_sq());
        }
    }
}

#[test]
fn random_search_never_beats_sigma() {
    let focal = spec(2, 2, ManifoldKind::MPlusT { t: FRAC_PI_4 });
    let report = sigma_extrinsic(&focal, 10, 5).unwrap();
    let p = sample_point(&focal, 5).unwrap();
    let sff = analytic_shape_operators(&p).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut best = 0.0_f64;
    for _ in 0..20_000 {
        let x = normalized(&gaussian(sff.dim(), &mut rng)).unwrap();
        best = best.max(sff.normal_curvature_sq(&x));
    }
    assert!(best <= 1.0 + 1e-12);
    assert!(best <= report.best + 1e-12);
    assert!(best > 0.5);
}

#[test]
fn closed_form_beta_matches_arccos() {
    let config = FlowConfig::new(Arc::new(CliffordSystem::build(2, 2).unwrap()), 0.4).unwrap();
    let kappa = config.kappa();
    for t in [-2.0, -0.5, 0.0, 0.05, 0.08] {
        let direct = ((2.0 * 0.4f64).cos() * (4.0 * kappa * t).exp()).acos() / 2.0;
        assert_relative_eq!(beta_closed_form(0.4, 4, 2, t).unwrap(), direct, max_relative = 1e-12);
    }
}
