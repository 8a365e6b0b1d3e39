//! Focal maps onto the great spheres `{P z = ±z}` and their eigenmap property.
//!
//! `φ_±(z) = (z ± P_{i+1} z)/√2` on `M_{i+1}` and `ψ_±(z) = (z ± P_i z)/√2`
//! on `N_{i-1}`. Both domains are minimal in the sphere, so the coordinate
//! functions of these maps are Laplace eigenfunctions with eigenvalue equal
//! to the domain dimension (`2l-i-3` and `l+i-2`).

use std::f64::consts::FRAC_1_SQRT_2;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::clifford::CliffordSystem;
use crate::error::{Error, Result};
use crate::geometry::{
    numeric_second_fundamental_form, tangent_normal_frame, FdOptions, ManifoldKind, ManifoldSpec, Sign, SurfacePoint,
};
use crate::numerics::dense::{add, axpy, dot, norm, scale, sub, Matrix};
use crate::numerics::eigen::numeric_rank;

pub const RANK_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FocalFamily {
    /// Defined on the `M` chain.
    Phi,
    /// Defined on the `N` chain.
    Psi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FocalMapSpec {
    pub family: FocalFamily,
    pub i: usize,
    pub sign: Sign,
}

impl FocalMapSpec {
    pub fn phi(i: usize, sign: Sign) -> Self {
        Self {
            family: FocalFamily::Phi,
            i,
            sign,
        }
    }

    pub fn psi(i: usize, sign: Sign) -> Self {
        Self {
            family: FocalFamily::Psi,
            i,
            sign,
        }
    }

    /// `0 <= i <= m-1` for `φ`, `2 <= i <= m` for `ψ`.
    pub fn validate(&self, m: usize) -> Result<()> {
        let ok = match self.family {
            FocalFamily::Phi => self.i < m,
            FocalFamily::Psi => (2..=m).contains(&self.i),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Domain(format!("{self:?} is not defined for m = {m}")))
        }
    }

    /// `M_{i+1}` for `φ`, `N_{i-1}` (where `⟨P_i z, z⟩ = 0` holds) for `ψ`.
    pub fn domain(&self) -> ManifoldKind {
        match self.family {
            FocalFamily::Phi => ManifoldKind::MChain { i: self.i + 1 },
            FocalFamily::Psi => ManifoldKind::NChain { i: self.i - 1 },
        }
    }

    /// Index of the matrix `P` in `(z ± P z)/√2`.
    pub fn matrix_index(&self) -> usize {
        match self.family {
            FocalFamily::Phi => self.i + 1,
            FocalFamily::Psi => self.i,
        }
    }

    /// Common Laplace eigenvalue of the coordinate functions.
    pub fn eigenvalue(&self, l: usize) -> usize {
        match self.family {
            FocalFamily::Phi => 2 * l - self.i - 3,
            FocalFamily::Psi => l + self.i - 2,
        }
    }

    pub fn domain_spec(&self, system: Arc<CliffordSystem>) -> Result<ManifoldSpec> {
        self.validate(system.m())?;
        ManifoldSpec::new(system, self.domain())
    }
}

/// `(v ± P v)/√2`.
fn twist(p: &Matrix, sign: Sign, v: &[f64]) -> Vec<f64> {
    let mut out = v.to_vec();
    axpy(sign.value(), &p.matvec(v), &mut out);
    scale(FRAC_1_SQRT_2, &out)
}

pub fn apply_focal_map(spec: &FocalMapSpec, point: &SurfacePoint) -> Result<Vec<f64>> {
    let sys = point.spec().system();
    spec.validate(sys.m())?;
    if point.spec().kind() != spec.domain() {
        return Err(Error::Domain(format!(
            "{:?} is defined on {:?}, got a point of {:?}",
            spec.family,
            spec.domain(),
            point.spec().kind()
        )));
    }
    Ok(twist(sys.p(spec.matrix_index()), spec.sign, point.z()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenmapReport {
    pub spec: FocalMapSpec,
    pub samples: usize,
    pub domain_dim: usize,
    pub eigenvalue: usize,
    /// `max ||φ(z)| - 1|`.
    pub max_unit_error: f64,
    /// `max |P φ(z) ∓ φ(z)|`.
    pub max_eigenspace_error: f64,
    /// `max |⟨φ₊(z), φ₋(z)⟩|`.
    pub max_cross_inner: f64,
    /// `max |H_eucl + n z|` with `n` the domain dimension.
    pub max_mean_curvature_residual: f64,
    pub expected_rank: usize,
    pub min_rank: usize,
    pub max_rank: usize,
}

impl EigenmapReport {
    pub fn rank_ok(&self) -> bool {
        self.min_rank == self.expected_rank && self.max_rank == self.expected_rank
    }
}

/// Samples the domain and checks unit image, eigenspace membership, the
/// minimal-immersion identity `H_eucl = -n z` and that the differential
/// `X ↦ (X ± P X)/√2` on the tangent space has rank `l - 1`.
pub fn verify_eigenmap(
    system: Arc<CliffordSystem>,
    spec: &FocalMapSpec,
    samples: usize,
    seed: u64,
    opts: FdOptions,
) -> Result<EigenmapReport> {
    let l = system.l();
    let domain = spec.domain_spec(system.clone())?;
    let n = domain.dim();
    let eigenvalue = spec.eigenvalue(l);
    if eigenvalue != n {
        return Err(Error::Validation(format!(
            "eigenvalue {eigenvalue} differs from the domain dimension {n}"
        )));
    }
    let p = system.p(spec.matrix_index());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = EigenmapReport {
        spec: *spec,
        samples,
        domain_dim: n,
        eigenvalue,
        max_unit_error: 0.0,
        max_eigenspace_error: 0.0,
        max_cross_inner: 0.0,
        max_mean_curvature_residual: 0.0,
        expected_rank: l - 1,
        min_rank: usize::MAX,
        max_rank: 0,
    };
    for _ in 0..samples {
        let point = domain.sample_with(&mut rng)?;
        let image = apply_focal_map(spec, &point)?;
        let other = twist(
            p,
            match spec.sign {
                Sign::Plus => Sign::Minus,
                Sign::Minus => Sign::Plus,
            },
            point.z(),
        );
        report.max_unit_error = report.max_unit_error.max((norm(&image) - 1.0).abs());
        report.max_eigenspace_error = report
            .max_eigenspace_error
            .max(norm(&sub(&p.matvec(&image), &scale(spec.sign.value(), &image))));
        report.max_cross_inner = report.max_cross_inner.max(dot(&image, &other).abs());

        let sff = numeric_second_fundamental_form(&point, opts)?;
        let residual = norm(&add(&sff.euclidean_mean_curvature(), &scale(n as f64, point.z())));
        report.max_mean_curvature_residual = report.max_mean_curvature_residual.max(residual);

        let frame = tangent_normal_frame(&point)?;
        let images: Vec<Vec<f64>> = frame.tangent.iter().map(|x| twist(p, spec.sign, x)).collect();
        let rank = numeric_rank(&images, RANK_TOL)?;
        report.min_rank = report.min_rank.min(rank);
        report.max_rank = report.max_rank.max(rank);
    }
    if samples == 0 {
        report.min_rank = 0;
    }
    Ok(report)
}
