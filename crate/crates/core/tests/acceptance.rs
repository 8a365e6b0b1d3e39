//! Acceptance criteria, one line per criterion. Runs without the libtest
//! harness so the summary is always printed; exits nonzero on any failure.

use std::f64::consts::{FRAC_PI_4, FRAC_PI_6, LN_2};
use std::process::{Command, ExitCode};
use std::sync::Arc;
use std::time::Instant;

use fkm_foliation::flow::{
    blowup_profile, convergence_check, flow_point_cloud, integrate_beta, singular_time, FlowConfig,
};
use fkm_foliation::geometry::{
    analytic_shape_operators, expand_spectrum, expected_m_plus_t_spectrum, gauss_scalar_curvature,
    numeric_second_fundamental_form, sample_point, sample_points, scalar_curvature_analytic, spectrum_distance,
    verify_q_identities, FdOptions, ManifoldKind, ManifoldSpec,
};
use fkm_foliation::polynomial::verify_cm_identities;
use fkm_foliation::report::{from_json, CheckReport};
use fkm_foliation::suite::{monotonicity_grid, run_check, Check, SuiteOptions, Target, DEFAULT_INSTANCES};
use fkm_foliation::{CliffordSystem, FkmPolynomial, Result};

const RELATION_SET: [(usize, usize); 7] = [(1, 3), (2, 2), (3, 2), (4, 2), (5, 1), (8, 1), (9, 1)];
const T_GRID: [f64; 4] = [0.2, FRAC_PI_6, 0.6, FRAC_PI_4];

type Criterion = (&'static str, fn() -> Result<Outcome>);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Result<Outcome> {
    Ok(Outcome { pass, detail })
}

fn system(m: usize, k: usize) -> Arc<CliffordSystem> {
    Arc::new(CliffordSystem::build(m, k).expect("admissible instance"))
}

fn m_plus(m: usize, k: usize, t: f64) -> ManifoldSpec {
    ManifoldSpec::new(system(m, k), ManifoldKind::MPlusT { t }).expect("valid t")
}

fn clifford_relations() -> Result<Outcome> {
    let start = Instant::now();
    let mut worst = 0.0_f64;
    for (m, k) in RELATION_SET {
        worst = worst.max(CliffordSystem::build(m, k)?.max_anticommutator_residual());
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(worst < 1e-12 && secs < 1.0, format!("max residual {worst:.2e}, {secs:.3}s"))
}

fn cartan_munzner() -> Result<Outcome> {
    let start = Instant::now();
    let (mut grad, mut lap) = (0.0_f64, 0.0_f64);
    for (m, k) in RELATION_SET {
        let sys = CliffordSystem::build(m, k)?;
        let r = verify_cm_identities(&FkmPolynomial::new(&sys), 1000, 42, 1e-10);
        grad = grad.max(r.max_grad_residual);
        lap = lap.max(r.max_lap_residual);
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        grad < 1e-10 && lap < 1e-10 && secs < 5.0,
        format!("gradient {grad:.2e}, laplacian {lap:.2e}, {secs:.3}s"),
    )
}

fn normal_inner_products() -> Result<Outcome> {
    let mut worst = 0.0_f64;
    for (m, k) in DEFAULT_INSTANCES {
        for t in T_GRID {
            for p in sample_points(&m_plus(m, k, t), 100, 3)? {
                worst = worst.max(verify_q_identities(&p)?.max_residual());
            }
        }
    }
    outcome(worst < 1e-10, format!("max residual {worst:.2e}"))
}

fn shape_operator_spectra() -> Result<Outcome> {
    let mut worst = 0.0_f64;
    for (m, k) in DEFAULT_INSTANCES {
        for t in T_GRID {
            let spec = m_plus(m, k, t);
            let l = spec.system().l();
            for p in sample_points(&spec, 50, 4)? {
                let sff = analytic_shape_operators(&p)?;
                for alpha in 0..=m {
                    let want = expand_spectrum(&expected_m_plus_t_spectrum(l, m, t, alpha));
                    worst = worst.max(spectrum_distance(&sff.principal_curvatures(alpha)?, &want));
                }
            }
        }
    }
    outcome(worst < 1e-8, format!("max eigenvalue error {worst:.2e}"))
}

fn numeric_oracle() -> Result<Outcome> {
    let mut worst = 0.0_f64;
    for (m, k) in DEFAULT_INSTANCES {
        for t in T_GRID {
            for p in sample_points(&m_plus(m, k, t), 3, 5)? {
                let exact = analytic_shape_operators(&p)?;
                let num = numeric_second_fundamental_form(&p, FdOptions::with_step(1e-4))?;
                for (a, b) in num.components.iter().zip(&exact.components) {
                    worst = worst.max(a.sub(b).max_abs());
                }
            }
        }
    }
    outcome(worst < 1e-4, format!("max entry error {worst:.2e}"))
}

fn scalar_curvature() -> Result<Outcome> {
    let mut err = 0.0_f64;
    let mut slack = f64::INFINITY;
    for (m, k) in DEFAULT_INSTANCES {
        let l = system(m, k).l();
        for t in T_GRID {
            for p in sample_points(&m_plus(m, k, t), 3, 6)? {
                let s = gauss_scalar_curvature(&numeric_second_fundamental_form(&p, FdOptions::default())?);
                err = err.max((s - scalar_curvature_analytic(l, m, t)?).abs());
            }
        }
        let at = |t: f64| -> Result<f64> {
            Ok(gauss_scalar_curvature(&analytic_shape_operators(&sample_point(&m_plus(m, k, t), 7)?)?))
        };
        let focal = at(FRAC_PI_4)?;
        for t in monotonicity_grid() {
            slack = slack.min(at(t)? - focal);
        }
    }
    outcome(
        err < 1e-3 && slack >= -1e-10,
        format!("formula error {err:.2e}, min slack {slack:.2e}"),
    )
}

/// Runs one suite check on every default instance and compares each row
/// against the tolerance given here for its name.
fn suite_rows(check: Check, tolerances: &[(&str, f64)]) -> Result<(bool, Vec<CheckReport>, String)> {
    let opts = SuiteOptions::default();
    let mut rows = Vec::new();
    for (m, k) in DEFAULT_INSTANCES {
        rows.extend(run_check(check, &Target::build(m, k)?, &opts)?);
    }
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, tol) in tolerances {
        let mine: Vec<&CheckReport> = rows.iter().filter(|r| r.check_name == *name).collect();
        let worst = mine.iter().map(|r| r.max_abs_error).fold(0.0, f64::max);
        ok &= !mine.is_empty() && worst <= *tol;
        parts.push(format!("{name} {worst:.2e}"));
    }
    Ok((ok, rows, parts.join(", ")))
}

fn isoparametric() -> Result<Outcome> {
    let (ok, _, detail) = suite_rows(
        Check::Isoparametric,
        &[
            ("chain_gradient_identity", 1e-8),
            ("chain_laplacian_identity", 1e-3),
            ("level_set_spectrum", 1e-3),
            ("chain_minimality", 1e-3),
            ("focal_sphere_totally_geodesic", 1e-3),
        ],
    )?;
    outcome(ok, detail)
}

fn sigma() -> Result<Outcome> {
    let (ok, rows, detail) = suite_rows(
        Check::Sigma,
        &[("sigma_m_plus", 1e-6), ("sigma_m_minus", 1e-3), ("sigma_upper_bound", 1e-6)],
    )?;
    let restarts_ok = rows.iter().all(|r| r.param == "restarts=100");
    outcome(ok && restarts_ok, detail)
}

fn eigenmaps() -> Result<Outcome> {
    let (ok, _, detail) = suite_rows(
        Check::Eigenmap,
        &[
            ("eigenmap_unit_image", 1e-12),
            ("eigenmap_rank", 0.0),
            ("eigenmap_minimal_immersion", 1e-3),
        ],
    )?;
    outcome(ok, detail)
}

fn mean_curvature_flow() -> Result<Outcome> {
    let t_ref = singular_time(FRAC_PI_6, 4, 2)?.finite().expect("finite");
    let t_err = (t_ref - LN_2 / 4.0).abs();
    let (mut ode, mut cloud, mut limit, mut collapse) = (0.0_f64, 0.0_f64, 0.0_f64, 0.0_f64);
    for (m, k) in DEFAULT_INSTANCES {
        let config = FlowConfig::new(system(m, k), FRAC_PI_6)?;
        let big_t = config.singular_time().finite().expect("finite");
        ode = ode.max(integrate_beta(&config, 0.9 * big_t)?.max_error(&config)?);
        cloud = cloud.max(flow_point_cloud(&config, 0.9 * big_t)?.closed_form_error());
        limit = limit.max((blowup_profile(&config)?.limit - 0.5).abs());
        let late = flow_point_cloud(&config, big_t - 1e-4)?;
        collapse = collapse.max(convergence_check(&late)? - 2.0 * late.beta.sin());
    }
    outcome(
        ode < 1e-8 && cloud < 1e-6 && limit < 1e-2 && t_err < 1e-12 && collapse < 1e-8,
        format!(
            "ode {ode:.2e}, cloud {cloud:.2e}, |limit-1/2| {limit:.2e}, |T-ln2/4| {t_err:.2e}, distance-bound {collapse:.2e}"
        ),
    )
}

/// The report text with the `wall_time_ms` lines dropped.
fn strip_wall_time(json: &str) -> String {
    json.lines()
        .filter(|l| !l.trim_start().starts_with("\"wall_time_ms\""))
        .collect::<Vec<_>>()
        .join("\n")
}

fn determinism() -> Result<Outcome> {
    let run = || -> Result<(bool, String)> {
        let out = Command::new(env!("CARGO_BIN_EXE_fkm"))
            .args(["all", "--seed", "42"])
            .output()?;
        Ok((out.status.success(), String::from_utf8_lossy(&out.stdout).into_owned()))
    };
    let (ok_a, a) = run()?;
    let (ok_b, b) = run()?;
    let same = strip_wall_time(&a) == strip_wall_time(&b);
    let rows = from_json(&a)?.len();
    outcome(
        ok_a && ok_b && same && rows > 0,
        format!("{rows} rows, byte-identical apart from wall_time_ms: {same}, exit 0: {}", ok_a && ok_b),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("clifford relations", clifford_relations),
        ("cartan-munzner identities", cartan_munzner),
        ("normal inner-product identities", normal_inner_products),
        ("shape operator spectra on M+^t", shape_operator_spectra),
        ("numeric second fundamental form oracle", numeric_oracle),
        ("scalar curvature formula and minimum", scalar_curvature),
        ("isoparametric chains", isoparametric),
        ("sigma on focal submanifolds", sigma),
        ("focal eigenmaps", eigenmaps),
        ("mean curvature flow", mean_curvature_flow),
        ("determinism of the full suite", determinism),
    ];
    let mut failures = 0;
    for (n, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (pass, detail) = match run() {
            Ok(o) => (o.pass, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        failures += usize::from(!pass);
        println!(
            "criterion {:>2} {} {name}: {detail} [{:.2}s]",
            n + 1,
            if pass { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
