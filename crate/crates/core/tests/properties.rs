use std::f64::consts::FRAC_PI_4;
use std::sync::Arc;

use fkm_foliation::flow::beta_closed_form;
use fkm_foliation::focal::{apply_focal_map, FocalMapSpec};
use fkm_foliation::geometry::{sample_point, ManifoldKind, ManifoldSpec, Sign};
use fkm_foliation::numerics::dense::{dot, norm, Matrix};
use fkm_foliation::numerics::{symmetric_eigen, SymmetricMatrix};
use fkm_foliation::report::{from_json, to_json, CheckReport, Instance};
use fkm_foliation::{CliffordSystem, FkmPolynomial};
use proptest::prelude::*;

const INSTANCES: [(usize, usize); 5] = [(1, 3), (2, 2), (3, 2), (4, 2), (5, 1)];

fn system(idx: usize) -> CliffordSystem {
    let (m, k) = INSTANCES[idx % INSTANCES.len()];
    CliffordSystem::build(m, k).unwrap()
}

fn vector(len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-3.0..3.0f64, len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn unit_combinations_square_to_identity(idx in 0usize..5, raw in vector(6)) {
        let sys = system(idx);
        let c: Vec<f64> = raw.iter().take(sys.m() + 1).copied().collect();
        prop_assume!(norm(&c) > 1e-3);
        let c: Vec<f64> = c.iter().map(|x| x / norm(&c)).collect();
        let p = sys.unit_combination(&c).unwrap();
        let sq = p.matmul(&p).sub(&Matrix::identity(sys.dim()));
        prop_assert!(sq.max_abs() < 1e-12);
        prop_assert!(p.asymmetry() < 1e-15);
    }

    #[test]
    fn quartic_is_homogeneous_and_isoparametric(idx in 0usize..5, raw in vector(32), lambda in 0.1..3.0f64) {
        let sys = system(idx);
        let f = FkmPolynomial::new(&sys);
        let x = &raw[..sys.dim()];
        let r2 = dot(x, x);
        prop_assume!(r2 > 1e-3);
        let scaled: Vec<f64> = x.iter().map(|v| lambda * v).collect();
        prop_assert!((f.eval(&scaled) - lambda.powi(4) * f.eval(x)).abs() < 1e-10 * lambda.powi(4) * r2 * r2);
        let g = f.grad(x);
        prop_assert!((dot(&g, &g) - 16.0 * r2.powi(3)).abs() < 1e-10 * r2.powi(3).max(1.0));
        prop_assert!(f.eval(x).abs() <= r2 * r2 * (1.0 + 1e-12));
    }

    #[test]
    fn sampled_points_satisfy_their_equations(idx in 0usize..4, which in 0usize..6, seed in any::<u64>(), c in -0.9..0.9f64, t in 0.05..FRAC_PI_4) {
        let sys = Arc::new(system(idx));
        let m = sys.m();
        let kind = match which {
            0 => ManifoldKind::MChain { i: seed as usize % (m + 1) },
            1 => ManifoldKind::NChain { i: 1 + seed as usize % m },
            2 => ManifoldKind::MPlusT { t },
            3 => ManifoldKind::MMinus,
            4 => ManifoldKind::LevelU { i: seed as usize % m, c },
            _ => ManifoldKind::FocalU { i: seed as usize % m, sign: if seed % 2 == 0 { Sign::Plus } else { Sign::Minus } },
        };
        let spec = ManifoldSpec::new(sys, kind).unwrap();
        let p = sample_point(&spec, seed).unwrap();
        prop_assert!((norm(p.z()) - 1.0).abs() < 1e-12);
        prop_assert!(spec.constraint_residual(p.z()) < 1e-10);
    }

    #[test]
    fn focal_images_are_orthogonal(idx in 0usize..4, seed in any::<u64>()) {
        let sys = Arc::new(system(idx));
        let i = seed as usize % sys.m();
        let plus = FocalMapSpec::phi(i, Sign::Plus);
        let p = sample_point(&plus.domain_spec(sys.clone()).unwrap(), seed).unwrap();
        let a = apply_focal_map(&plus, &p).unwrap();
        let b = apply_focal_map(&FocalMapSpec::phi(i, Sign::Minus), &p).unwrap();
        prop_assert!((norm(&a) - 1.0).abs() < 1e-12);
        prop_assert!(dot(&a, &b).abs() < 1e-10);
    }

    #[test]
    fn flow_angle_decreases(beta0 in 0.01..0.78f64, t1 in -5.0..0.0f64, dt in 1e-6..1e-2f64) {
        let b1 = beta_closed_form(beta0, 8, 3, t1).unwrap();
        let b2 = beta_closed_form(beta0, 8, 3, t1 + dt.min(-t1 / 2.0)).unwrap();
        prop_assert!(b1 > 0.0 && b1 <= FRAC_PI_4);
        prop_assert!(b2 <= b1);
    }

    #[test]
    fn reports_round_trip(err in any::<f64>(), tol in 0.0..1.0f64, seed in any::<u64>(), v in any::<f64>()) {
        let r = CheckReport::new("x", "y", Instance { m: 2, k: 2, l: 4 }, "t=0.5", 3, seed, err, tol)
            .with_value("v", v);
        let back = from_json(&to_json(std::slice::from_ref(&r)).unwrap()).unwrap().remove(0);
        prop_assert_eq!(back.max_abs_error.to_bits() == err.to_bits() || (err.is_nan() && back.max_abs_error.is_nan()), true);
        prop_assert_eq!(back.value("v").unwrap().to_bits() == v.to_bits() || v.is_nan(), true);
        prop_assert_eq!(back.pass, r.pass);
        prop_assert!(back.is_consistent());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn jacobi_reconstructs_random_symmetric(n in 1usize..=64, entries in prop::collection::vec(-1.0..1.0f64, 64 * 64)) {
        let a = Matrix::from_fn(n, n, |i, j| {
            let (p, q) = if i <= j { (i, j) } else { (j, i) };
            entries[p * 64 + q]
        });
        let eig = symmetric_eigen(&SymmetricMatrix::new(a.clone()).unwrap(), 1e-13).unwrap();
        prop_assert!(eig.values.windows(2).all(|w| w[0] <= w[1]));
        prop_assert!(eig.reconstruct().sub(&a).max_abs() < 1e-10);
        let vt_v = eig.vectors.transpose().matmul(&eig.vectors);
        prop_assert!(vt_v.sub(&Matrix::identity(n)).max_abs() < 1e-10);
    }
}
