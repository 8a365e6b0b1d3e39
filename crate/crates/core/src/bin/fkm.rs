use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fkm_foliation::flow::{flow_trajectory, trajectory_csv, FlowConfig};
use fkm_foliation::report::{emit_report, CheckReport, Format};
use fkm_foliation::suite::{
    require_nondegenerate, run_all, run_checks, smallest_nondegenerate_k, Check, SuiteOptions, DEFAULT_INSTANCES,
};
use fkm_foliation::{CliffordSystem, Error};

/// Numerical checks for isoparametric foliations of OT-FKM type.
#[derive(Parser)]
#[command(name = "fkm", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Number of Clifford matrices minus one (m >= 1).
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    m: Option<u64>,
    /// Number of irreducible copies (l = k delta(m)).
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    k: Option<u64>,
    /// Angle t of M+^t in radians.
    #[arg(long, global = true, allow_negative_numbers = true)]
    t: Option<f64>,
    /// Initial angle of the flow in radians.
    #[arg(long, global = true, allow_negative_numbers = true)]
    beta0: Option<f64>,
    #[arg(long, global = true)]
    samples: Option<usize>,
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Overrides every tolerance.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Output path, `-` for standard output.
    #[arg(long, global = true, default_value = "-")]
    out: String,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Emit the Clifford system as JSON.
    Build,
    /// Gradient and Laplacian identities of the quartic.
    VerifyCm,
    /// Inner products among the normals Q_a z of M+^t.
    Lemma31,
    /// Principal curvatures of M+^t, analytic and finite-difference.
    Spectrum,
    /// Scalar curvature of M+^t.
    Scalar,
    /// Maximal normal curvature on the focal submanifolds.
    Sigma,
    /// Isoparametric functions on the M and N chains.
    Isoparam,
    /// Focal maps as eigenmaps.
    Eigenmap,
    /// Mean curvature flow of M+^t.
    Flow {
        /// Also write the trajectory CSV (t, beta, sup_B2, product, cloud_residual).
        #[arg(long)]
        trajectory: Option<PathBuf>,
    },
    /// Type I blow-up rate at the singular time.
    Blowup,
    /// Every check over the default instances.
    All,
}

fn is_usage(e: &Error) -> bool {
    matches!(
        e,
        Error::Domain(_) | Error::Dimension(_) | Error::InadmissibleDimension { .. } | Error::Io(_)
    )
}

fn instances(cli: &Cli) -> Result<Vec<(usize, usize)>, Error> {
    let pair = match (cli.m, cli.k) {
        (None, None) => return Ok(DEFAULT_INSTANCES.to_vec()),
        (Some(m), Some(k)) => (m as usize, k as usize),
        (Some(m), None) => (m as usize, smallest_nondegenerate_k(m as usize)?),
        (None, Some(_)) => return Err(Error::Domain("--k needs --m".into())),
    };
    require_nondegenerate(pair.0, pair.1)?;
    Ok(vec![pair])
}

fn write_out(path: &str, bytes: &str) -> Result<(), Error> {
    if path == "-" {
        let mut out = std::io::stdout().lock();
        out.write_all(bytes.as_bytes())?;
        out.flush()?;
    } else {
        std::fs::write(path, bytes)?;
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<bool, Error> {
    let opts = SuiteOptions {
        t: cli.t,
        beta0: cli.beta0,
        samples: cli.samples,
        seed: cli.seed,
        tol: cli.tol,
    };
    let single = |c: Check| -> Result<Vec<CheckReport>, Error> { run_checks(&[c], &instances(cli)?, &opts) };
    let reports = match &cli.command {
        Command::Build => {
            let m = cli.m.ok_or_else(|| Error::Domain("build needs --m".into()))? as usize;
            let k = match cli.k {
                Some(k) => k as usize,
                None => smallest_nondegenerate_k(m)?,
            };
            let sys = CliffordSystem::build(m, k)?;
            sys.validate()?;
            write_out(&cli.out, &format!("{}\n", sys.to_json()?))?;
            return Ok(true);
        }
        Command::VerifyCm => single(Check::CartanMunzner)?,
        Command::Lemma31 => single(Check::NormalInnerProducts)?,
        Command::Spectrum => single(Check::Spectrum)?,
        Command::Scalar => single(Check::Scalar)?,
        Command::Sigma => single(Check::Sigma)?,
        Command::Isoparam => single(Check::Isoparametric)?,
        Command::Eigenmap => single(Check::Eigenmap)?,
        Command::Flow { trajectory } => {
            let rows = single(Check::Flow)?;
            if let Some(path) = trajectory {
                let mut csv = String::new();
                for (m, k) in instances(cli)? {
                    let sys = std::sync::Arc::new(CliffordSystem::build(m, k)?);
                    let config = FlowConfig::new(sys, cli.beta0.unwrap_or(std::f64::consts::FRAC_PI_6))?
                        .with_points(cli.samples.unwrap_or(200))
                        .with_seed(cli.seed);
                    let t_end = config.singular_time().finite().map_or(1.0, |t| t - 1e-4);
                    let (_, traj) = flow_trajectory(&config, t_end, 100)?;
                    let body = trajectory_csv(&traj);
                    if csv.is_empty() {
                        csv = body;
                    } else {
                        csv.extend(body.lines().skip(1).map(|l| format!("{l}\n")));
                    }
                }
                std::fs::write(path, csv)?;
            }
            rows
        }
        Command::Blowup => single(Check::Blowup)?,
        Command::All => run_all(&instances(cli)?, &opts)?,
    };
    write_out(&cli.out, &emit_report(&reports, cli.format)?)?;
    Ok(reports.iter().all(|r| r.pass))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("fkm: {e}");
            ExitCode::from(if is_usage(&e) { 2 } else { 1 })
        }
    }
}
