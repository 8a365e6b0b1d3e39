//! Runs every verification over a set of `(m, k)` instances and turns the
//! results into [`CheckReport`] rows.

use std::f64::consts::{FRAC_PI_4, FRAC_PI_6, LN_2};
use std::sync::Arc;
use std::time::Instant;

use crate::clifford::{delta_dim, CliffordSystem};
use crate::error::{Error, Result};
use crate::flow::{blowup_profile, convergence_check, flow_point_cloud, integrate_beta, FlowConfig, SingularTime};
use crate::focal::{verify_eigenmap, FocalMapSpec};
use crate::geometry::checks::focal_u_point;
use crate::geometry::{
    analytic_shape_operators, expand_spectrum, expected_level_spectrum, expected_m_plus_t_spectrum,
    gauss_scalar_curvature, isoparametric_identity_check, level_set_spectrum, mean_curvature_in,
    numeric_second_fundamental_form, sample_point, sample_points, scalar_curvature_analytic,
    second_fundamental_form_in, sigma_extrinsic, spectrum_distance, verify_q_identities, FdOptions, ManifoldKind,
    ManifoldSpec, Sign,
};
use crate::polynomial::{verify_cm_identities, FkmPolynomial};
use crate::report::{CheckReport, Instance};

/// Instances of the full suite: the smallest nondegenerate systems for `m = 1..4`.
pub const DEFAULT_INSTANCES: [(usize, usize); 4] = [(1, 3), (2, 2), (3, 2), (4, 2)];
/// Extra instances for the algebraic relations only.
pub const RELATION_INSTANCES: [(usize, usize); 3] = [(5, 1), (8, 1), (9, 1)];
/// `t` values used when `--t` is not given.
pub const DEFAULT_T_GRID: [f64; 4] = [0.2, FRAC_PI_6, 0.6, FRAC_PI_4];
pub const SIGMA_RESTARTS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Check {
    Relations,
    CartanMunzner,
    NormalInnerProducts,
    Spectrum,
    Scalar,
    Sigma,
    Isoparametric,
    Eigenmap,
    Flow,
    Blowup,
}

impl Check {
    /// Order of the full suite.
    pub const ALL: [Check; 10] = [
        Check::Relations,
        Check::CartanMunzner,
        Check::NormalInnerProducts,
        Check::Spectrum,
        Check::Scalar,
        Check::Sigma,
        Check::Isoparametric,
        Check::Eigenmap,
        Check::Flow,
        Check::Blowup,
    ];
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteOptions {
    pub t: Option<f64>,
    pub beta0: Option<f64>,
    pub samples: Option<usize>,
    pub seed: u64,
    /// Overrides the tolerance of every row.
    pub tol: Option<f64>,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self {
            t: None,
            beta0: None,
            samples: None,
            seed: 42,
            tol: None,
        }
    }
}

impl SuiteOptions {
    fn tol(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }

    fn samples(&self, default: usize) -> usize {
        self.samples.unwrap_or(default).max(1)
    }

    fn t_grid(&self) -> Vec<f64> {
        self.t.map_or_else(|| DEFAULT_T_GRID.to_vec(), |t| vec![t])
    }
}

/// Smallest `k` with `l - m - 1 > 0`.
pub fn smallest_nondegenerate_k(m: usize) -> Result<usize> {
    let d = delta_dim(m)?;
    Ok((m + 2).div_ceil(d))
}

/// One system together with its instance label.
pub struct Target {
    pub system: Arc<CliffordSystem>,
    pub inst: Instance,
}

impl Target {
    pub fn build(m: usize, k: usize) -> Result<Self> {
        let system = Arc::new(CliffordSystem::build(m, k)?);
        let inst = Instance { m, k, l: system.l() };
        Ok(Self { system, inst })
    }

    fn spec(&self, kind: ManifoldKind) -> Result<ManifoldSpec> {
        ManifoldSpec::new(self.system.clone(), kind)
    }
}

fn timed(f: impl FnOnce() -> Result<Vec<CheckReport>>) -> Result<Vec<CheckReport>> {
    let start = Instant::now();
    let rows = f()?;
    let ms = start.elapsed().as_secs_f64() * 1e3 / rows.len().max(1) as f64;
    Ok(rows.into_iter().map(|r| r.timed(ms)).collect())
}

fn fmt_param(name: &str, v: f64) -> String {
    format!("{name}={v}")
}

pub fn run_check(check: Check, target: &Target, opts: &SuiteOptions) -> Result<Vec<CheckReport>> {
    timed(|| match check {
        Check::Relations => relations(target, opts),
        Check::CartanMunzner => cartan_munzner(target, opts),
        Check::NormalInnerProducts => normal_inner_products(target, opts),
        Check::Spectrum => spectrum(target, opts),
        Check::Scalar => scalar(target, opts),
        Check::Sigma => sigma(target, opts),
        Check::Isoparametric => isoparametric(target, opts),
        Check::Eigenmap => eigenmap(target, opts),
        Check::Flow => flow(target, opts),
        Check::Blowup => blowup(target, opts),
    })
}

/// Runs `checks` over `instances` in declaration order.
pub fn run_checks(checks: &[Check], instances: &[(usize, usize)], opts: &SuiteOptions) -> Result<Vec<CheckReport>> {
    let mut out = Vec::new();
    for &(m, k) in instances {
        let target = Target::build(m, k)?;
        for &c in checks {
            out.extend(run_check(c, &target, opts)?);
        }
    }
    Ok(out)
}

/// The full suite: relations on the default and extra instances, every
/// other check on `instances`, and a final row naming what is not checked.
pub fn run_all(instances: &[(usize, usize)], opts: &SuiteOptions) -> Result<Vec<CheckReport>> {
    let mut relation_set: Vec<(usize, usize)> = instances.to_vec();
    if instances == DEFAULT_INSTANCES {
        relation_set.extend(RELATION_INSTANCES);
    }
    let mut out = run_checks(&[Check::Relations], &relation_set, opts)?;
    out.extend(run_checks(&Check::ALL[1..], instances, opts)?);
    out.push(out_of_scope_row(opts.seed));
    Ok(out)
}

fn out_of_scope_row(seed: u64) -> CheckReport {
    let mut r = CheckReport::new(
        "laplace_spectrum_inequalities",
        "not evaluated: eigenvalue inequalities for the Laplacian need a global spectrum computation",
        Instance { m: 0, k: 0, l: 0 },
        "",
        0,
        seed,
        0.0,
        0.0,
    );
    r.skipped = true;
    r
}

fn relations(t: &Target, opts: &SuiteOptions) -> Result<Vec<CheckReport>> {
    let sys = &t.system;
    let err = sys
        .max_anticommutator_residual()
        .max(sys.max_asymmetry())
        .max(sys.max_abs_trace());
    Ok(vec![CheckReport::new(
        "clifford_relations",
        "P_a P_b + P_b P_a = 2 delta_ab I, symmetric and traceless",
        t.inst,
        "",
        sys.m() + 1,
        opts.seed,
        err,
        opts.tol(1e-12),
    )])
}

fn cartan_munzner(t: &Target, opts: &SuiteOptions) -> Result<Vec<CheckReport>> {
    let samples = opts.samples(1000);
    let tol = opts.tol(1e-10);
    let r = verify_cm_identities(&FkmPolynomial::new(&t.system), samples, opts.seed, tol);
    let (m1, m2) = t.system.multiplicities();
    Ok(vec![
        CheckReport::new(
            "cm_gradient_norm",
            "|grad F|^2 = 16 |x|^6 (relative to max(1,|x|^6))",
            t.inst,
            "",
            samples,
            opts.seed,
            r.max_grad_residual,
            tol,
        ),
        CheckReport::new(
            "cm_laplacian",
            "Laplacian of F = 8 (m2 - m1) |x|^2 (relative to max(1,|x|^2))",
            t.inst,
            "",
            samples,
            opts.seed,
            r.max_lap_residual,
            tol,
        )
        .with_value("m1", m1 as f64)
        .with_value("m2", m2 as f64),
    ])
}

fn normal_inner_products(t: &Target, opts: &SuiteOptions) -> Result<Vec<CheckReport>> {
    let samples = opts.samples(100);
    let mut rows = Vec::new();
    for (j, tt) in opts.t_grid().into_iter().enumerate() {
        let spec = t.spec(ManifoldKind::MPlusT { t: tt })?;
        let mut err = 0.0_f64;
        for p in sample_points(&spec, samples, opts.seed.wrapping_add(j as u64))? {
            err = err.max(verify_q_identities(&p)?.max_residual());
        }
        rows.push(CheckReport::new(
            "normal_inner_products",
            "seven inner-product identities among Q_a Q_b z on M+^t",
            t.inst,
            fmt_param("t", tt),
            samples,
            opts.seed,
            err,
            opts.tol(1e-10),
        ));
    }
    Ok(rows)
}

fn spectrum(t: &Target, opts: &SuiteOptions) -> Result<Vec<CheckReport>> {
    let samples = opts.samples(50);
    let numeric_samples = samples.div_ceil(10);
    let (l, m) = (t.system.l(), t.system.m());
    let mut rows = Vec::new();
    for (j, tt) in opts.t_grid().into_iter().enumerate() {
        let spec = t.spec(ManifoldKind::MPlusT { t: tt })?;
        let points = sample_points(&spec, samples, opts.seed.wrapping_add(j as u64))?;
        let mut spec_err = 0.0_f64;
        let mut fd_err = 0.0_f64;
        for (n, p) in points.iter().enumerate() {
            let sff = analytic_shape_operators(p)?;
            for alpha in 0..=m {
                let want = expand_spectrum(&expected_m_plus_t_spectrum(l, m, tt, alpha));
                spec_err = spec_err.max(spectrum_distance(&sff.principal_curvatures(alpha)?, &want));
            }
            if n < numeric_samples {
                let num = numeric_second_fundamental_form(p, FdOptions::with_step(1e-4))?;
                for (a, b) in num.components.iter().zip(&sff.components) {
                    fd_err = fd_err.max(a.sub(b).max_abs());
                }
            }
        }
        rows.push(CheckReport::new(
            "shape_operator_spectrum",
            "A_0 has eigenvalues cot t, 0, -tan t and A_a (a >= 1) has 1, 0, -1, multiplicities (l-m-1, m, l-m-1)",
            t.inst,
            fmt_param("t", tt),
            samples,
            opts.seed,
            spec_err,
            opts.tol(1e-8),
        ));
        rows.push(CheckReport::new(
            "numeric_sff_agreement",
            "finite-difference second fundamental form matches the analytic shape operators (step 1e-4)",
            t.inst,
            fmt_param("t", tt),
            numeric_samples,
            opts.seed,
            fd_err,
            opts.tol(1e-4),
        ));
    }
    Ok(rows)
}

/// 20 evenly spaced values in `(0, π/4]`.
pub fn monotonicity_grid() -> Vec<f64> {
    (1..=20).map(|j| FRAC_PI_4 * j as f64 / 20.0).collect()
}

fn scalar(t: &Target, opts: &SuiteOptions) -> Result<Vec<CheckReport>> {
    let samples = opts.samples(5);
    let (l, m) = (t.system.l(), t.system.m());
    let mut rows = Vec::new();
    for (j, tt) in opts.t_grid().into_iter().enumerate() {
        let spec = t.spec(ManifoldKind::MPlusT { t: tt })?;
        let want = scalar_curvature_analytic(l, m, tt)?;
        let mut err = 0.0_f64;
        for p in sample_points(&spec, samples, opts.seed.wrapping_add(j as u64))? {
            let sff = numeric_second_fundamental_form(&p, FdOptions::default())?;
            err = err.max((gauss_scalar_curvature(&sff) - want).abs());
        }
        rows.push(
            CheckReport::new(
                "scalar_curvature",
                "Gauss-equation scalar curvature of M+^t (numeric) equals the closed formula",
                t.inst,
                fmt_param("t", tt),
                samples,
                opts.seed,
                err,
                opts.tol(1e-3),
            )
            .with_value("closed_form", want),
        );
    }

    // S^t from exact shape operators at a sampled point, compared with S at π/4
    let at = |tt: f64| -> Result<f64> {
        let p = sample_point(&t.spec(ManifoldKind::MPlusT { t: tt })?, opts.seed)?;
        Ok(gauss_scalar_curvature(&analytic_shape_operators(&p)?))
    };
    let s_min = at(FRAC_PI_4)?;
    let mut worst_slack = f64::INFINITY;
    for tt in monotonicity_grid() {
        worst_slack = worst_slack.min(at(tt)? - s_min);
    }
    rows.push(
        CheckReport::new(
            "scalar_curvature_minimum",
            "S(M+^t) >= S(M+) on a 20-point grid of t in (0, pi/4]",
            t.inst,
            "grid=20",
            20,
            opts.seed,
            (-worst_slack).max(0.0),
            opts.tol(1e-10),
        )
        .with_value("min_slack", worst_slack)
        .with_value("s_focal", s_min),
    );
    Ok(rows)
}

fn sigma(t: &Target, opts: &SuiteOptions) -> Result<Vec<CheckReport>> {
    let plus = sigma_extrinsic(&t.spec(ManifoldKind::MPlusT { t: FRAC_PI_4 })?, SIGMA_RESTARTS, opts.seed)?;
    let minus = sigma_extrinsic(&t.spec(ManifoldKind::MMinus)?, SIGMA_RESTARTS, opts.seed)?;
    let row = |name: &str, claim: &str, best: f64, at_best: usize, tol: f64| {
        CheckReport::new(name, claim, t.inst, format!("restarts={SIGMA_RESTARTS}"), 1, opts.seed, (best - 1.0).abs(), tol)
            .with_value("best", best)
            .with_value("restarts_at_best", at_best as f64)
    };
    Ok(vec![
        row(
            "sigma_m_plus",
            "max |B(X,X)|^2 over unit tangent X on M+ equals 1 (exact shape operators)",
            plus.best,
            plus.restarts_at_best,
            opts.tol(1e-6),
        ),
        row(
            "sigma_m_minus",
            "max |B(X,X)|^2 over unit tangent X on M- equals 1 (finite differences)",
            minus.best,
            minus.restarts_at_best,
            opts.tol(1e-3),
        ),
        CheckReport::new(
            "sigma_upper_bound",
            "no restart exceeds 1 on either focal submanifold",
            t.inst,
            format!("restarts={SIGMA_RESTARTS}"),
            2,
            opts.seed,
            (plus.best.max(minus.best) - 1.0).max(0.0),
            opts.tol(1e-6),
        ),
    ])
}

const LEVELS: [f64; 2] = [0.0, 0.6];

fn isoparametric(t: &Target, opts: &SuiteOptions) -> Result<Vec<CheckReport>> {
    let samples = opts.samples(3);
    let m = t.system.m();
    let fd = FdOptions::default();
    let mut grad_err = 0.0_f64;
    let mut lap_err = 0.0_f64;
    let mut level_err = 0.0_f64;
    let mut minimal_err = 0.0_f64;
    let mut geodesic_err = 0.0_f64;
    let mut seed = opts.seed;
    let mut next_seed = || {
        seed = seed.wrapping_add(1);
        seed
    };

    let mut chains: Vec<ManifoldKind> = (0..m).map(|i| ManifoldKind::MChain { i }).collect();
    chains.extend((2..=m).map(|i| ManifoldKind::NChain { i }));
    for kind in chains {
        for p in sample_points(&t.spec(kind)?, samples, next_seed())? {
            let r = isoparametric_identity_check(&p, fd)?;
            grad_err = grad_err.max(r.grad_residual);
            lap_err = lap_err.max(r.laplacian_residual);
        }
    }

    let mut levels: Vec<ManifoldKind> = Vec::new();
    for c in LEVELS {
        levels.extend((0..m).map(|i| ManifoldKind::LevelU { i, c }));
        levels.extend((2..=m).map(|i| ManifoldKind::LevelV { i, c }));
    }
    for kind in levels {
        let spec = t.spec(kind)?;
        let want = expand_spectrum(&expected_level_spectrum(&spec)?);
        for p in sample_points(&spec, samples, next_seed())? {
            level_err = level_err.max(spectrum_distance(&level_set_spectrum(&p, fd)?, &want));
        }
    }

    for i in 0..m {
        let parent = t.spec(ManifoldKind::MChain { i })?;
        for p in sample_points(&t.spec(ManifoldKind::MChain { i: i + 1 })?, samples, next_seed())? {
            minimal_err = minimal_err.max(mean_curvature_in(&numeric_second_fundamental_form(&p, fd)?, &parent)?);
        }
        for sign in [Sign::Plus, Sign::Minus] {
            for _ in 0..samples {
                let p = focal_u_point(&parent, sign, next_seed())?;
                let sff = numeric_second_fundamental_form(&p, fd)?;
                geodesic_err = geodesic_err
                    .max(second_fundamental_form_in(&sff, &parent)?)
                    .max(mean_curvature_in(&sff, &parent)?);
            }
        }
    }

    let row = |name: &str, claim: &str, param: &str, err: f64, tol: f64| {
        CheckReport::new(name, claim, t.inst, param, samples, opts.seed, err, opts.tol(tol))
    };
    let chains = "M_i (i<m), N_i (i>=2)";
    Ok(vec![
        row(
            "chain_gradient_identity",
            "|grad f|^2 = 4(1 - f^2) for f = <P z, z> restricted to the chain",
            chains,
            grad_err,
            1e-8,
        ),
        row(
            "chain_laplacian_identity",
            "Laplacian f = -4(l-i-1) f on M_i and -4 i f on N_i",
            chains,
            lap_err,
            1e-3,
        ),
        row(
            "level_set_spectrum",
            "principal curvatures of f = c inside the chain are -sqrt((1-c)/(1+c)), 0, sqrt((1+c)/(1-c))",
            "c=0,0.6",
            level_err,
            1e-3,
        ),
        row(
            "chain_minimality",
            "M_{i+1} is minimal in M_i",
            "i<m",
            minimal_err,
            1e-3,
        ),
        row(
            "focal_sphere_totally_geodesic",
            "{P_{i+1} z = +-z} is totally geodesic in M_i",
            "i<m",
            geodesic_err,
            1e-3,
        ),
    ])
}

fn eigenmap_specs(m: usize) -> Vec<FocalMapSpec> {
    let mut out = Vec::new();
    for sign in [Sign::Plus, Sign::Minus] {
        out.extend((0..m).map(|i| FocalMapSpec::phi(i, sign)));
        out.extend((2..=m).map(|i| FocalMapSpec::psi(i, sign)));
    }
    out
}

fn eigenmap(t: &Target, opts: &SuiteOptions) -> Result<Vec<CheckReport>> {
    let samples = opts.samples(3);
    let mut unit = 0.0_f64;
    let mut rank = 0.0_f64;
    let mut minimal = 0.0_f64;
    for (j, spec) in eigenmap_specs(t.system.m()).iter().enumerate() {
        let r = verify_eigenmap(
            t.system.clone(),
            spec,
            samples,
            opts.seed.wrapping_add(j as u64),
            FdOptions::default(),
        )?;
        unit = unit.max(r.max_unit_error).max(r.max_eigenspace_error);
        rank = rank
            .max((r.min_rank as f64 - r.expected_rank as f64).abs())
            .max((r.max_rank as f64 - r.expected_rank as f64).abs());
        minimal = minimal.max(r.max_mean_curvature_residual);
    }
    let row = |name: &str, claim: &str, err: f64, tol: f64| {
        CheckReport::new(name, claim, t.inst, "phi i<m, psi i>=2", samples, opts.seed, err, opts.tol(tol))
    };
    Ok(vec![
        row(
            "eigenmap_unit_image",
            "(z +- P z)/sqrt2 is a unit +-1-eigenvector of P",
            unit,
            1e-12,
        ),
        row(
            "eigenmap_rank",
            "the differential of the focal map has rank l-1",
            rank,
            0.0,
        ),
        row(
            "eigenmap_minimal_immersion",
            "H_eucl = -n z on the domain, n = 2l-i-3 (phi) or l+i-2 (psi)",
            minimal,
            1e-3,
        ),
    ])
}

fn flow(t: &Target, opts: &SuiteOptions) -> Result<Vec<CheckReport>> {
    let beta0 = opts.beta0.unwrap_or(FRAC_PI_6);
    let points = opts.samples(200);
    let config = FlowConfig::new(t.system.clone(), beta0)?
        .with_points(points)
        .with_seed(opts.seed);
    let param = fmt_param("beta0", beta0);
    let kappa = config.kappa();
    let big_t = match config.singular_time() {
        SingularTime::At(tt) => tt,
        SingularTime::Never => {
            let state = flow_point_cloud(&config, 1.0)?;
            return Ok(vec![CheckReport::new(
                "flow_stationary",
                "the minimal member does not move",
                t.inst,
                param,
                points,
                opts.seed,
                state.closed_form_error(),
                opts.tol(1e-12),
            )]);
        }
    };

    let traj = integrate_beta(&config, 0.9 * big_t)?;
    let ode_err = traj.max_error(&config)?;
    let state = flow_point_cloud(&config, 0.9 * big_t)?;
    let cloud_err = state.closed_form_error().max(state.constraint_residual()?);
    let defining = ((2.0 * beta0).cos() * (4.0 * kappa * big_t).exp() - 1.0).abs();
    let reference = if (beta0 - FRAC_PI_6).abs() < 1e-15 {
        (big_t - LN_2 / (4.0 * kappa)).abs()
    } else {
        0.0
    };
    let late = flow_point_cloud(&config, big_t - 1e-4)?;
    let dist = convergence_check(&late)?;
    let bound = 2.0 * late.beta.sin();

    Ok(vec![
        CheckReport::new(
            "beta_ode_vs_closed_form",
            "RK4 on d(beta)/dt = -2(l-m-1) cot 2beta matches cos 2beta(t) = cos 2beta0 e^{4(l-m-1)t} on [0, 0.9T]",
            t.inst,
            param.clone(),
            traj.times.len(),
            opts.seed,
            ode_err,
            opts.tol(1e-8),
        ),
        CheckReport::new(
            "cloud_vs_closed_form",
            "ambient flow z' = H(z) of a cloud on M+ follows (cos beta(t) x, sin beta(t) y) on [0, 0.9T]",
            t.inst,
            param.clone(),
            points,
            opts.seed,
            cloud_err,
            opts.tol(1e-6),
        ),
        CheckReport::new(
            "singular_time",
            "T = -ln(cos 2beta0)/(4(l-m-1)), equal to ln2/4 for beta0 = pi/6 and l-m-1 = 1",
            t.inst,
            param.clone(),
            1,
            opts.seed,
            defining.max(reference),
            opts.tol(1e-12),
        )
        .with_value("T", big_t),
        CheckReport::new(
            "collapse_distance",
            "at t = T - 1e-4 every cloud point is within 2 sin beta(t) of S^{l-1} x {0}",
            t.inst,
            param,
            points,
            opts.seed,
            (dist - bound).max(0.0),
            opts.tol(1e-8),
        )
        .with_value("distance", dist)
        .with_value("bound", bound),
    ])
}

fn blowup(t: &Target, opts: &SuiteOptions) -> Result<Vec<CheckReport>> {
    let beta0 = opts.beta0.unwrap_or(FRAC_PI_6);
    let config = FlowConfig::new(t.system.clone(), beta0)?;
    let r = blowup_profile(&config)?;
    let param = fmt_param("beta0", beta0);
    Ok(vec![
        CheckReport::new(
            "blowup_limit",
            "sup|B|^2 (T - t) tends to 1/2 (type I singularity)",
            t.inst,
            param.clone(),
            r.samples.len(),
            opts.seed,
            (r.limit - 0.5).abs(),
            opts.tol(1e-2),
        )
        .with_value("limit", r.limit)
        .with_value("C", r.constant)
        .with_value("T", r.singular_time)
        .with_value("product_at_start", r.product_at_start),
        CheckReport::new(
            "blowup_monotone",
            "sup|B|^2 (T - t) is monotone on the grid t_j = T(1 - 2^-j)",
            t.inst,
            param,
            r.samples.len(),
            opts.seed,
            if r.monotone { 0.0 } else { 1.0 },
            0.0,
        ),
    ])
}

/// Reject instances the geometric checks cannot handle.
pub fn require_nondegenerate(m: usize, k: usize) -> Result<()> {
    let l = k * delta_dim(m)?;
    if l < m + 2 {
        return Err(Error::InadmissibleDimension {
            m,
            l,
            minimal: smallest_nondegenerate_k(m)? * delta_dim(m)?,
        });
    }
    Ok(())
}
