//! Quantitative identities of the OT-FKM geometry, evaluated at sampled points.

use std::f64::consts::FRAC_PI_4;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::frame::{gradient_in, tangent_normal_frame};
use crate::geometry::manifold::{sample_point, ManifoldKind, ManifoldSpec, QuadForm, SurfacePoint};
use crate::geometry::sff::{analytic_shape_operators, numeric_second_fundamental_form, FdOptions, SecondFundamentalForm};
use crate::numerics::dense::{axpy, dot, norm, norm_sq, normalized, scale, Matrix};
use crate::numerics::{symmetric_eigenvalues, SymmetricMatrix};

fn require_m_plus_t(point: &SurfacePoint) -> Result<f64> {
    match point.spec().kind() {
        ManifoldKind::MPlusT { t } => Ok(t),
        other => Err(Error::Domain(format!("expected a point of M+^t, got {other:?}"))),
    }
}

/// `Q_0 z` with `Q_0 = diag(tan t, -cot t)`, and `Q_α = P_α` for `α >= 1`.
fn q_apply(point: &SurfacePoint, t: f64, alpha: usize, v: &[f64]) -> Vec<f64> {
    let spec = point.spec();
    if alpha == 0 {
        spec.apply_form(QuadForm::Q0 { a: t.tan(), b: 1.0 / t.tan() }, v)
    } else {
        spec.system().p(alpha).matvec(v)
    }
}

/// Residuals of the seven inner-product identities among `Q_α z` on `M₊ᵗ`,
/// each maximized over all index pairs `1 <= α, β <= m`:
///
/// | # | identity |
/// |---|----------|
/// | 0 | `⟨Q_0 Q_0 z, Q_0 z⟩ = -2 cot 2t` |
/// | 1 | `⟨Q_α Q_0 z, Q_0 z⟩ = 0` |
/// | 2 | `⟨Q_0 Q_α z, Q_0 z⟩ = 0` |
/// | 3 | `⟨Q_0 Q_0 z, Q_α z⟩ = 0` |
/// | 4 | `⟨Q_α Q_β z, Q_0 z⟩ = 0` |
/// | 5 | `⟨Q_α Q_0 z, Q_β z⟩ = 0` |
/// | 6 | `⟨Q_0 Q_α z, Q_β z⟩ = -2 δ_αβ cot 2t` |
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QIdentityReport {
    pub t: f64,
    pub residuals: [f64; 7],
}

impl QIdentityReport {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }
}

pub fn verify_q_identities(point: &SurfacePoint) -> Result<QIdentityReport> {
    let t = require_m_plus_t(point)?;
    let m = point.spec().system().m();
    let z = point.z();
    let cot2t = 1.0 / (2.0 * t).tan();
    let qz: Vec<Vec<f64>> = (0..=m).map(|a| q_apply(point, t, a, z)).collect();
    let q0q0z = q_apply(point, t, 0, &qz[0]);

    let mut r = [0.0_f64; 7];
    r[0] = (dot(&q0q0z, &qz[0]) + 2.0 * cot2t).abs();
    for a in 1..=m {
        let qa_q0z = q_apply(point, t, a, &qz[0]);
        let q0_qaz = q_apply(point, t, 0, &qz[a]);
        r[1] = r[1].max(dot(&qa_q0z, &qz[0]).abs());
        r[2] = r[2].max(dot(&q0_qaz, &qz[0]).abs());
        r[3] = r[3].max(dot(&q0q0z, &qz[a]).abs());
        for b in 1..=m {
            let qa_qbz = q_apply(point, t, a, &qz[b]);
            let target = if a == b { -2.0 * cot2t } else { 0.0 };
            r[4] = r[4].max(dot(&qa_qbz, &qz[0]).abs());
            r[5] = r[5].max(dot(&qa_q0z, &qz[b]).abs());
            r[6] = r[6].max((dot(&q0_qaz, &qz[b]) - target).abs());
        }
    }
    Ok(QIdentityReport { t, residuals: r })
}

/// Principal curvatures of `M₊ᵗ` as `(value, multiplicity)` for the normal
/// `Q_α z`: `(cot t, 0, -tan t)` for `α = 0` and `(1, 0, -1)` otherwise,
/// with multiplicities `(l-m-1, m, l-m-1)`, listed in ascending order.
pub fn expected_m_plus_t_spectrum(l: usize, m: usize, t: f64, alpha: usize) -> Vec<(f64, usize)> {
    let outer = l - m - 1;
    let (hi, lo) = if alpha == 0 { (1.0 / t.tan(), -t.tan()) } else { (1.0, -1.0) };
    vec![(lo, outer), (0.0, m), (hi, outer)]
}

/// Expands `(value, multiplicity)` pairs into a sorted list.
pub fn expand_spectrum(spec: &[(f64, usize)]) -> Vec<f64> {
    let mut out: Vec<f64> = spec
        .iter()
        .flat_map(|&(v, k)| std::iter::repeat_n(v, k))
        .collect();
    out.sort_by(f64::total_cmp);
    out
}

/// Largest gap between two sorted lists of equal length (infinite otherwise).
pub fn spectrum_distance(got: &[f64], expected: &[f64]) -> f64 {
    if got.len() != expected.len() {
        return f64::INFINITY;
    }
    got.iter().zip(expected).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
}

/// Tangent vectors of `M₊ᵗ` that the shape operator `A_α` annihilates:
/// `Q_α Q_β z (β ≠ α)` for `α >= 1`, and `Q_0⁻¹ Q_β z (β >= 1)` for `α = 0`.
pub fn zero_principal_directions(point: &SurfacePoint, alpha: usize) -> Result<Vec<Vec<f64>>> {
    let t = require_m_plus_t(point)?;
    let m = point.spec().system().m();
    let z = point.z();
    let l = point.spec().system().l();
    let (a, b) = (t.tan(), 1.0 / t.tan());
    Ok(if alpha == 0 {
        (1..=m)
            .map(|beta| {
                let v = q_apply(point, t, beta, z);
                v.iter()
                    .enumerate()
                    .map(|(k, x)| if k < l { x / a } else { -x / b })
                    .collect()
            })
            .collect()
    } else {
        (0..=m)
            .filter(|&beta| beta != alpha)
            .map(|beta| q_apply(point, t, alpha, &q_apply(point, t, beta, z)))
            .collect()
    })
}

/// Closed-form scalar curvature of `M₊ᵗ`:
/// `(2l-m-2)(2l-m-3) - 2(l-m-1)(l-1) + (l-m-1)(l-m-2)(tan²t + cot²t)`.
pub fn scalar_curvature_analytic(l: usize, m: usize, t: f64) -> Result<f64> {
    if !(t > 0.0 && t <= FRAC_PI_4 * (1.0 + 1e-15)) {
        return Err(Error::Domain(format!("t = {t} outside (0, pi/4]")));
    }
    let (l, m) = (l as f64, m as f64);
    let tan2 = t.tan().powi(2);
    Ok((2.0 * l - m - 2.0) * (2.0 * l - m - 3.0) - 2.0 * (l - m - 1.0) * (l - 1.0)
        + (l - m - 1.0) * (l - m - 2.0) * (tan2 + 1.0 / tan2))
}

/// `|B|² = 2m(l-m-1) + (l-m-1)(tan²t + cot²t)` on `M₊ᵗ`.
pub fn m_plus_t_norm_sq(l: usize, m: usize, t: f64) -> f64 {
    let (l, m) = (l as f64, m as f64);
    let tan2 = t.tan().powi(2);
    2.0 * m * (l - m - 1.0) + (l - m - 1.0) * (tan2 + 1.0 / tan2)
}

/// `|H|² = (2(l-m-1) cot 2t)²` on `M₊ᵗ`.
pub fn m_plus_t_mean_curvature_sq(l: usize, m: usize, t: f64) -> f64 {
    (2.0 * (l as f64 - m as f64 - 1.0) / (2.0 * t).tan()).powi(2)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SigmaReport {
    /// Best value of `|B(X, X)|²` over unit tangent `X`.
    pub best: f64,
    /// Final value of every restart, in order.
    pub restart_values: Vec<f64>,
    /// Restarts that ended within `1e-6` of `best`.
    pub restarts_at_best: usize,
}

/// Riemannian gradient ascent of `X ↦ Σ_α ⟨A_α X, X⟩²` on the unit sphere of
/// the tangent space, from one random start.
fn ascend(components: &[Matrix], mut x: Vec<f64>) -> f64 {
    const STEP: f64 = 0.05;
    const MAX_ITER: usize = 20_000;
    let value = |x: &[f64]| -> (f64, Vec<f64>) {
        let mut g = vec![0.0; x.len()];
        let mut phi = 0.0;
        for c in components {
            let cx = c.matvec(x);
            let q = dot(&cx, x);
            phi += q * q;
            axpy(4.0 * q, &cx, &mut g);
        }
        (phi, g)
    };
    let mut phi = 0.0;
    for _ in 0..MAX_ITER {
        let (p, mut g) = value(&x);
        phi = p;
        let radial = dot(&g, &x);
        axpy(-radial, &x, &mut g);
        if norm(&g) < 1e-11 {
            break;
        }
        axpy(STEP, &g, &mut x);
        x = normalized(&x).expect("ascent iterate stays away from zero");
    }
    phi.max(value(&x).0)
}

/// `max |B(X, X)|²` over unit tangent vectors at one point, best of `restarts`.
pub fn sigma_at<R: Rng + ?Sized>(sff: &SecondFundamentalForm, restarts: usize, rng: &mut R) -> SigmaReport {
    let n = sff.dim();
    let components: Vec<Matrix> = sff
        .components
        .iter()
        .map(|c| SymmetricMatrix::symmetrized(c).into_matrix())
        .collect();
    let restart_values: Vec<f64> = (0..restarts.max(1))
        .map(|_| {
            let start: Vec<f64> = (0..n).map(|_| StandardNormal.sample(rng)).collect();
            ascend(&components, normalized(&start).expect("nonzero Gaussian draw"))
        })
        .collect();
    let best = restart_values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let restarts_at_best = restart_values.iter().filter(|&&v| best - v <= 1e-6).count();
    SigmaReport {
        best,
        restart_values,
        restarts_at_best,
    }
}

/// `σ` on a focal submanifold (`M₊ = M₊^{π/4}` or `M₋`) at a point drawn from
/// `seed`. Analytic shape operators on `M₊`, finite differences on `M₋`.
pub fn sigma_extrinsic(spec: &ManifoldSpec, restarts: usize, seed: u64) -> Result<SigmaReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let point = spec.sample_with(&mut rng)?;
    let sff = match spec.kind() {
        ManifoldKind::MPlusT { t } if (t - FRAC_PI_4).abs() < 1e-15 => analytic_shape_operators(&point)?,
        ManifoldKind::MMinus => numeric_second_fundamental_form(&point, FdOptions::default())?,
        other => {
            return Err(Error::Domain(format!(
                "sigma is evaluated on the focal submanifolds M+ and M-, not {other:?}"
            )))
        }
    };
    Ok(sigma_at(&sff, restarts, &mut rng))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsoparametricReport {
    pub value: f64,
    pub grad_sq: f64,
    pub grad_expected: f64,
    pub grad_residual: f64,
    pub laplacian: f64,
    pub laplacian_expected: f64,
    pub laplacian_residual: f64,
}

/// The restricted function `z ↦ ⟨P z, z⟩` checked on a chain member and the
/// coefficient of its Laplacian: `f_i = ⟨P_{i+1} z, z⟩` on `M_i` with
/// `Δf = -4(l-i-1) f`, and `g_i = ⟨P_i z, z⟩` on `N_i` with `Δg = -4 i g`.
fn chain_function(spec: &ManifoldSpec) -> Result<(usize, f64)> {
    let l = spec.system().l() as f64;
    let m = spec.system().m();
    match spec.kind() {
        ManifoldKind::MChain { i } if i < m => Ok((i + 1, -4.0 * (l - i as f64 - 1.0))),
        ManifoldKind::NChain { i } if i >= 2 => Ok((i, -4.0 * i as f64)),
        other => Err(Error::Domain(format!(
            "no isoparametric chain function on {other:?} (need M_i with i <= m-1 or N_i with i >= 2)"
        ))),
    }
}

/// Checks `|∇f|² = 4(1 - f²)` (tangential projection, exact) and
/// `Δf = λ f` where `Δf = tr_T Hess + ⟨∇̃φ, H_eucl⟩` uses the numeric mean
/// curvature of the chain member.
pub fn isoparametric_identity_check(point: &SurfacePoint, opts: FdOptions) -> Result<IsoparametricReport> {
    let (idx, coeff) = chain_function(point.spec())?;
    let p = point.spec().system().p(idx);
    let z = point.z();
    let value = p.bilinear(z, z);

    let frame = tangent_normal_frame(point)?;
    let grad = gradient_in(&frame, p);
    let grad_sq = norm_sq(&grad);
    let grad_expected = 4.0 * (1.0 - value * value);

    let sff = numeric_second_fundamental_form(point, opts)?;
    let hess_trace: f64 = frame.tangent.iter().map(|e| 2.0 * p.bilinear(e, e)).sum();
    let ambient_grad = scale(2.0, &p.matvec(z));
    let laplacian = hess_trace + dot(&ambient_grad, &sff.euclidean_mean_curvature());
    let laplacian_expected = coeff * value;

    Ok(IsoparametricReport {
        value,
        grad_sq,
        grad_expected,
        grad_residual: (grad_sq - grad_expected).abs(),
        laplacian,
        laplacian_expected,
        laplacian_residual: (laplacian - laplacian_expected).abs(),
    })
}

/// `(-√((1-c)/(1+c)), 0, √((1+c)/(1-c)))` with multiplicities
/// `(l-i-2, i+1, l-i-2)` on `U_c` and `(i-1, l-i, i-1)` on `V_c`.
pub fn expected_level_spectrum(spec: &ManifoldSpec) -> Result<Vec<(f64, usize)>> {
    let l = spec.system().l();
    let (c, outer, middle) = match spec.kind() {
        ManifoldKind::LevelU { i, c } => (c, l - i - 2, i + 1),
        ManifoldKind::LevelV { i, c } => (c, i - 1, l - i),
        other => return Err(Error::Domain(format!("{other:?} is not a level set"))),
    };
    Ok(vec![
        (-((1.0 - c) / (1.0 + c)).sqrt(), outer),
        (0.0, middle),
        (((1.0 + c) / (1.0 - c)).sqrt(), outer),
    ])
}

fn level_function_index(spec: &ManifoldSpec) -> Result<usize> {
    match spec.kind() {
        ManifoldKind::LevelU { i, .. } => Ok(i + 1),
        ManifoldKind::LevelV { i, .. } => Ok(i),
        other => Err(Error::Domain(format!("{other:?} is not a level set"))),
    }
}

/// Principal curvatures (ascending) of a level hypersurface inside its
/// parent chain member, with respect to `∇f / |∇f|`.
pub fn level_set_spectrum(point: &SurfacePoint, opts: FdOptions) -> Result<Vec<f64>> {
    let spec = point.spec();
    let idx = level_function_index(spec)?;
    let p = spec.system().p(idx);
    let value = p.bilinear(point.z(), point.z());
    if value.abs() >= 1.0 - 1e-6 {
        return Err(Error::NearFocal { value });
    }
    let parent = point.reinterpret(spec.parent().expect("level sets have a parent"))?;
    let parent_frame = tangent_normal_frame(&parent)?;
    let eta = normalized(&gradient_in(&parent_frame, p))
        .ok_or_else(|| Error::Numeric("vanishing gradient on a regular level".into()))?;
    let sff = numeric_second_fundamental_form(point, opts)?;
    symmetric_eigenvalues(&SymmetricMatrix::symmetrized(&sff.contract(&eta)), 1e-14)
}

/// Length of the mean curvature of the submanifold described by `sff`
/// measured inside `parent` (a manifold through the same point containing it).
pub fn mean_curvature_in(sff: &SecondFundamentalForm, parent: &ManifoldSpec) -> Result<f64> {
    let here = sff.frame.point.reinterpret(parent.clone())?;
    let parent_frame = tangent_normal_frame(&here)?;
    Ok(norm(&parent_frame.project_tangent(&sff.mean_curvature_vector())))
}

/// Largest component (over all normals and entries) of the second
/// fundamental form projected onto the tangent space of `parent`.
pub fn second_fundamental_form_in(sff: &SecondFundamentalForm, parent: &ManifoldSpec) -> Result<f64> {
    let here = sff.frame.point.reinterpret(parent.clone())?;
    let parent_frame = tangent_normal_frame(&here)?;
    let mut worst = 0.0_f64;
    for xi in &sff.frame.normal {
        let within = parent_frame.project_tangent(xi);
        if norm(&within) > 1e-8 {
            worst = worst.max(sff.contract(&within).max_abs());
        }
    }
    Ok(worst)
}

/// A point of `U_{±1} ⊂ M_i` (so `P_{i+1} z = ±z`), drawn from `seed`.
pub fn focal_u_point(spec_m_chain: &ManifoldSpec, sign: crate::geometry::Sign, seed: u64) -> Result<SurfacePoint> {
    let i = match spec_m_chain.kind() {
        ManifoldKind::MChain { i } => i,
        other => return Err(Error::Domain(format!("expected M_i, got {other:?}"))),
    };
    let focal = ManifoldSpec::new(spec_m_chain.system_arc().clone(), ManifoldKind::FocalU { i, sign })?;
    sample_point(&focal, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::CliffordSystem;
    use crate::geometry::manifold::sample_points;
    use std::f64::consts::FRAC_PI_6;
    use std::sync::Arc;

    fn spec(m: usize, k: usize, kind: ManifoldKind) -> ManifoldSpec {
        ManifoldSpec::new(Arc::new(CliffordSystem::build(m, k).unwrap()), kind).unwrap()
    }

    #[test]
    fn q_identities_quarter_turn() {
        let p = sample_point(&spec(2, 2, ManifoldKind::MPlusT { t: FRAC_PI_4 }), 1).unwrap();
        let r = verify_q_identities(&p).unwrap();
        assert!(r.max_residual() < 1e-12, "{r:?}");
    }

    #[test]
    fn q_identity_value_at_pi_over_6() {
        let p = sample_point(&spec(3, 2, ManifoldKind::MPlusT { t: FRAC_PI_6 }), 2).unwrap();
        let t = FRAC_PI_6;
        let q1z = q_apply(&p, t, 1, p.z());
        let lhs = dot(&q_apply(&p, t, 0, &q1z), &q1z);
        assert!((lhs + 2.0 / 3f64.sqrt()).abs() < 1e-12);
        assert!(verify_q_identities(&p).unwrap().max_residual() < 1e-12);
    }

    #[test]
    fn scalar_curvature_small_case() {
        assert!((scalar_curvature_analytic(3, 1, FRAC_PI_4).unwrap() - 2.0).abs() < 1e-12);
        assert!(scalar_curvature_analytic(3, 1, 0.0).is_err());
        assert!(scalar_curvature_analytic(3, 1, 1.0).is_err());
    }

    #[test]
    fn quarter_turn_closed_form_agrees_with_proof_expression() {
        for (l, m) in [(3usize, 1usize), (4, 2), (8, 3), (8, 4), (16, 5)] {
            let (lf, mf) = (l as f64, m as f64);
            let alt = 4.0 * (lf - mf - 1.0) * (lf - mf - 2.0) + 2.0 * mf * (lf - mf - 2.0) + mf * (mf + 1.0);
            assert!((scalar_curvature_analytic(l, m, FRAC_PI_4).unwrap() - alt).abs() < 1e-9);
        }
    }

    #[test]
    fn zero_directions_are_tangent_kernel() {
        let p = sample_point(&spec(3, 2, ManifoldKind::MPlusT { t: 0.3 }), 3).unwrap();
        let sff = analytic_shape_operators(&p).unwrap();
        for alpha in 0..=3 {
            for v in zero_principal_directions(&p, alpha).unwrap() {
                let tangential = sff.frame.project_tangent(&v);
                assert!((norm(&tangential) - norm(&v)).abs() < 1e-12);
                let coords = sff.frame.tangent_coords(&v);
                let image = sff.components[alpha].matvec(&coords);
                assert!(image.iter().all(|x| x.abs() < 1e-12));
            }
        }
    }

    #[test]
    fn sigma_on_m_plus() {
        let r = sigma_extrinsic(&spec(1, 3, ManifoldKind::MPlusT { t: FRAC_PI_4 }), 20, 5).unwrap();
        assert!((r.best - 1.0).abs() < 1e-6, "{r:?}");
    }

    #[test]
    fn sigma_rejects_non_focal() {
        assert!(sigma_extrinsic(&spec(1, 3, ManifoldKind::MPlusT { t: 0.5 }), 5, 5).is_err());
    }

    #[test]
    fn gradient_vanishes_at_focal_points() {
        let mi = spec(3, 2, ManifoldKind::MChain { i: 1 });
        let focal = focal_u_point(&mi, crate::geometry::Sign::Plus, 4).unwrap();
        let p = focal.reinterpret(mi).unwrap();
        let frame = tangent_normal_frame(&p).unwrap();
        let g = gradient_in(&frame, p.spec().system().p(2));
        assert!(norm(&g) < 1e-12);
    }

    #[test]
    fn level_spectrum_expected_values() {
        let s = spec(3, 2, ManifoldKind::LevelU { i: 1, c: 0.6 });
        let e = expected_level_spectrum(&s).unwrap();
        assert!((e[0].0 + 0.5).abs() < 1e-15 && (e[2].0 - 2.0).abs() < 1e-15);
        assert!((e[0].0.abs() * e[2].0 - 1.0).abs() < 1e-15);
        assert_eq!(e.iter().map(|x| x.1).sum::<usize>(), s.dim());
        let s = spec(3, 2, ManifoldKind::LevelV { i: 2, c: 0.1 });
        let e = expected_level_spectrum(&s).unwrap();
        assert_eq!(e.iter().map(|x| x.1).sum::<usize>(), s.dim());
    }

    #[test]
    fn level_spectrum_at_zero() {
        let s = spec(1, 3, ManifoldKind::LevelU { i: 0, c: 0.0 });
        for p in sample_points(&s, 2, 9).unwrap() {
            let ev = level_set_spectrum(&p, FdOptions::default()).unwrap();
            let want = expand_spectrum(&expected_level_spectrum(&s).unwrap());
            assert!(spectrum_distance(&ev, &want) < 1e-4, "{ev:?}");
        }
    }
}
