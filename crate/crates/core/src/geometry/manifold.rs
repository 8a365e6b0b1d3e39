//! Named submanifolds of the unit sphere `S^{2l-1}` and points on them.
//!
//! Two descriptions are used internally:
//!
//! * **Quadratic** sets cut out by regular equations `⟨A z, z⟩ = c`
//!   (`M_i`, `M₊ᵗ`, the level sets `U_c`). Points are reached by
//!   Gauss-Newton projection.
//! * **Eigen** families `{z : P_γ z = z, γ ∈ Γ}`, where `P_γ = Σ γ_α P_α` and
//!   `Γ` is a round sphere of coefficient vectors, possibly with some
//!   coordinates pinned (`N_i`, `M₋`, `V_c`, the focal spheres `U_{±1}`).
//!   A unit `z` with `P_γ z = z` has `⟨P_α z, z⟩ = γ_α` by the equality case
//!   of Cauchy-Schwarz, so points are produced exactly by projecting onto
//!   the +1 eigenspace.

use std::f64::consts::FRAC_PI_4;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::clifford::CliffordSystem;
use crate::error::{Error, Result};
use crate::numerics::dense::{add, dot, gram_schmidt_push, max_abs, norm, normalized, reject, scale, sub, Matrix};
use crate::numerics::newton::{newton_project, Linearization};

/// Residual target for Gauss-Newton projection. Tighter than the 1e-10
/// point invariant because second differences divide by `h²`.
pub const PROJECTION_TOL: f64 = 1e-14;
pub const PROJECTION_MAX_ITER: usize = 100;
const SAMPLING_RETRIES: usize = 10;

/// Point-validity thresholds.
pub const UNIT_TOL: f64 = 1e-12;
pub const CONSTRAINT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ManifoldKind {
    /// `M_i = {⟨P_0 z,z⟩ = … = ⟨P_i z,z⟩ = 0}`, `0 <= i <= m`.
    MChain { i: usize },
    /// `N_i = {Σ_{α<=i} ⟨P_α z,z⟩² = 1}`, `1 <= i <= m`.
    NChain { i: usize },
    /// `M₊ᵗ = {|x| = cos t, |y| = sin t, ⟨x,y⟩ = 0, ⟨x,E_α y⟩ = 0}`, `0 < t <= π/4`.
    MPlusT { t: f64 },
    /// The focal submanifold `f⁻¹(-1) = N_m`.
    MMinus,
    /// `U_c = {z ∈ M_i : ⟨P_{i+1} z, z⟩ = c}`, `0 <= i <= m-1`.
    LevelU { i: usize, c: f64 },
    /// `V_c = {z ∈ N_i : ⟨P_i z, z⟩ = c}`, `2 <= i <= m`.
    LevelV { i: usize, c: f64 },
    /// `U_{±1} = {z ∈ M_i : P_{i+1} z = ±z}`, a great `S^{l-1}`.
    FocalU { i: usize, sign: Sign },
}

/// `⟨A z, z⟩` for the quadratic forms that occur in the definitions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum QuadForm {
    Norm,
    P(usize),
    /// `Q_0 = diag(tan t · I, -cot t · I)`
    Q0 { a: f64, b: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct QuadConstraint {
    pub form: QuadForm,
    pub target: f64,
}

/// Coefficient sphere `Γ = {γ ∈ ℝ^span : |γ| = 1, γ_j = v_j for pinned j}`.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct EigenFamily {
    pub span: usize,
    pub pinned: Vec<(usize, f64)>,
}

impl EigenFamily {
    pub fn free(&self) -> Vec<usize> {
        (0..self.span)
            .filter(|j| self.pinned.iter().all(|(p, _)| p != j))
            .collect()
    }

    /// Radius of the sphere the free coordinates range over.
    pub fn free_radius(&self) -> f64 {
        let pinned: f64 = self.pinned.iter().map(|(_, v)| v * v).sum();
        (1.0 - pinned).max(0.0).sqrt()
    }

    /// Nearest admissible coefficient vector to `g` (pinned values restored,
    /// free part rescaled).
    pub fn retract(&self, g: &[f64]) -> Option<Vec<f64>> {
        let mut out = vec![0.0; self.span];
        for &(j, v) in &self.pinned {
            out[j] = v;
        }
        let free = self.free();
        let rho = self.free_radius();
        if rho > 0.0 && !free.is_empty() {
            let fg: Vec<f64> = free.iter().map(|&j| g[j]).collect();
            let fg = normalized(&fg)?;
            for (&j, v) in free.iter().zip(fg) {
                out[j] = rho * v;
            }
        }
        Some(out)
    }

    /// Orthonormal basis of the tangent space of `Γ` at `gamma`.
    pub fn tangent_basis(&self, gamma: &[f64]) -> Vec<Vec<f64>> {
        let free = self.free();
        if free.len() < 2 || self.free_radius() == 0.0 {
            return Vec::new();
        }
        let mut radial = vec![0.0; self.span];
        for &j in &free {
            radial[j] = gamma[j];
        }
        let mut basis = vec![normalized(&radial).expect("free part is nonzero")];
        let mut out = Vec::new();
        for &j in &free {
            let mut e = vec![0.0; self.span];
            e[j] = 1.0;
            if gram_schmidt_push(&mut basis, &e, 1e-8) {
                out.push(basis.last().unwrap().clone());
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Structure {
    Quadratic(Vec<QuadConstraint>),
    Eigen(EigenFamily),
}

/// A named submanifold of `S^{2l-1}` for a given Clifford system.
#[derive(Debug, Clone)]
pub struct ManifoldSpec {
    kind: ManifoldKind,
    system: Arc<CliffordSystem>,
}

impl PartialEq for ManifoldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind && Arc::ptr_eq(&self.system, &other.system)
    }
}

impl ManifoldSpec {
    /// Validates the index/parameter ranges. Systems with `l - m - 1 <= 0`
    /// are refused.
    pub fn new(system: Arc<CliffordSystem>, kind: ManifoldKind) -> Result<Self> {
        if !system.is_nondegenerate() {
            return Err(Error::Domain(format!(
                "geometry needs l - m - 1 > 0 (m={}, l={})",
                system.m(),
                system.l()
            )));
        }
        let m = system.m();
        let open_unit = |c: f64| c > -1.0 && c < 1.0;
        let ok = match kind {
            ManifoldKind::MChain { i } => i <= m,
            ManifoldKind::NChain { i } => (1..=m).contains(&i),
            ManifoldKind::MPlusT { t } => t > 0.0 && t <= FRAC_PI_4 * (1.0 + 1e-15),
            ManifoldKind::MMinus => true,
            ManifoldKind::LevelU { i, c } => i < m && open_unit(c),
            ManifoldKind::LevelV { i, c } => (2..=m).contains(&i) && open_unit(c),
            ManifoldKind::FocalU { i, .. } => i < m,
        };
        if !ok {
            return Err(Error::Domain(format!("{kind:?} is outside its valid range for m = {m}")));
        }
        Ok(Self { kind, system })
    }

    pub fn kind(&self) -> ManifoldKind {
        self.kind
    }

    pub fn system(&self) -> &CliffordSystem {
        &self.system
    }

    pub fn system_arc(&self) -> &Arc<CliffordSystem> {
        &self.system
    }

    /// Intrinsic dimension.
    pub fn dim(&self) -> usize {
        let l = self.system.l();
        let m = self.system.m();
        match self.kind {
            ManifoldKind::MChain { i } => 2 * l - 2 - i,
            ManifoldKind::NChain { i } => l + i - 1,
            ManifoldKind::MPlusT { .. } => 2 * l - m - 2,
            ManifoldKind::MMinus => l + m - 1,
            ManifoldKind::LevelU { i, .. } => 2 * l - 3 - i,
            ManifoldKind::LevelV { i, .. } => l + i - 2,
            ManifoldKind::FocalU { .. } => l - 1,
        }
    }

    /// Codimension inside `S^{2l-1}`.
    pub fn codim(&self) -> usize {
        self.system.dim() - 1 - self.dim()
    }

    /// The manifold this one is a hypersurface of, for level sets and focal
    /// spheres (`M_i` for `U`, `N_i` for `V`).
    pub fn parent(&self) -> Option<ManifoldSpec> {
        let kind = match self.kind {
            ManifoldKind::LevelU { i, .. } | ManifoldKind::FocalU { i, .. } => ManifoldKind::MChain { i },
            ManifoldKind::LevelV { i, .. } => ManifoldKind::NChain { i },
            _ => return None,
        };
        Some(Self {
            kind,
            system: self.system.clone(),
        })
    }

    pub(crate) fn structure(&self) -> Structure {
        let norm_c = QuadConstraint {
            form: QuadForm::Norm,
            target: 1.0,
        };
        let p_zero = |j| QuadConstraint {
            form: QuadForm::P(j),
            target: 0.0,
        };
        match self.kind {
            ManifoldKind::MChain { i } => {
                Structure::Quadratic(std::iter::once(norm_c).chain((0..=i).map(p_zero)).collect())
            }
            ManifoldKind::LevelU { i, c } => Structure::Quadratic(
                std::iter::once(norm_c)
                    .chain((0..=i).map(p_zero))
                    .chain(std::iter::once(QuadConstraint {
                        form: QuadForm::P(i + 1),
                        target: c,
                    }))
                    .collect(),
            ),
            ManifoldKind::MPlusT { t } => {
                let (a, b) = (t.tan(), 1.0 / t.tan());
                Structure::Quadratic(
                    [
                        norm_c,
                        QuadConstraint {
                            form: QuadForm::Q0 { a, b },
                            target: 0.0,
                        },
                    ]
                    .into_iter()
                    .chain((1..=self.system.m()).map(p_zero))
                    .collect(),
                )
            }
            ManifoldKind::NChain { i } => Structure::Eigen(EigenFamily {
                span: i + 1,
                pinned: Vec::new(),
            }),
            ManifoldKind::MMinus => Structure::Eigen(EigenFamily {
                span: self.system.m() + 1,
                pinned: Vec::new(),
            }),
            ManifoldKind::LevelV { i, c } => Structure::Eigen(EigenFamily {
                span: i + 1,
                pinned: vec![(i, c)],
            }),
            ManifoldKind::FocalU { i, sign } => Structure::Eigen(EigenFamily {
                span: i + 2,
                pinned: (0..=i).map(|j| (j, 0.0)).chain([(i + 1, sign.value())]).collect(),
            }),
        }
    }

    pub(crate) fn apply_form(&self, form: QuadForm, z: &[f64]) -> Vec<f64> {
        match form {
            QuadForm::Norm => z.to_vec(),
            QuadForm::P(j) => self.system.p(j).matvec(z),
            QuadForm::Q0 { a, b } => {
                let l = self.system.l();
                z.iter()
                    .enumerate()
                    .map(|(k, v)| if k < l { a * v } else { -b * v })
                    .collect()
            }
        }
    }

    fn linearize(&self, constraints: &[QuadConstraint], z: &[f64]) -> Linearization {
        let n = z.len();
        let mut residual = Vec::with_capacity(constraints.len());
        let mut jac = Matrix::zeros(constraints.len(), n);
        for (r, c) in constraints.iter().enumerate() {
            let az = self.apply_form(c.form, z);
            residual.push(dot(&az, z) - c.target);
            for (k, v) in az.iter().enumerate() {
                jac[(r, k)] = 2.0 * v;
            }
        }
        Linearization {
            residual,
            jacobian: jac,
        }
    }

    /// Gauss-Newton projection onto a quadratic manifold.
    pub(crate) fn newton_onto(&self, z0: &[f64]) -> Result<Vec<f64>> {
        match self.structure() {
            Structure::Quadratic(cs) => newton_project(z0, |z| self.linearize(&cs, z), PROJECTION_TOL, PROJECTION_MAX_ITER)
                .map(|p| p.point),
            Structure::Eigen(_) => Err(Error::Domain(format!(
                "{:?} is sampled from eigenspaces, not by Newton projection",
                self.kind
            ))),
        }
    }

    /// `γ_α = ⟨P_α z, z⟩` for `α < span`.
    pub(crate) fn coefficients(&self, family: &EigenFamily, z: &[f64]) -> Vec<f64> {
        (0..family.span).map(|a| self.system.p(a).bilinear(z, z)).collect()
    }

    /// Largest violation of the defining equations at `z`.
    pub fn constraint_residual(&self, z: &[f64]) -> f64 {
        match self.structure() {
            Structure::Quadratic(cs) => max_abs(&self.linearize(&cs, z).residual),
            Structure::Eigen(fam) => {
                let gamma = self.coefficients(&fam, z);
                let len = norm(&gamma);
                let mut worst = (norm(z) - 1.0).abs().max((len - 1.0).abs());
                for &(j, v) in &fam.pinned {
                    worst = worst.max((gamma[j] - v).abs());
                }
                if len > 0.0 {
                    let g = scale(1.0 / len, &gamma);
                    let pz = self.system.combination_apply(&g, z);
                    worst = worst.max(max_abs(&sub(&pz, z)));
                }
                worst
            }
        }
    }

    /// Smooth map `X ↦ R_z(X)` onto the manifold with `R_z(0) = z` and
    /// `dR_z(0) = id` on tangent vectors.
    pub(crate) fn retract(&self, z: &[f64], x: &[f64]) -> Result<Vec<f64>> {
        match self.structure() {
            Structure::Quadratic(_) => self.newton_onto(&add(z, x)),
            Structure::Eigen(fam) => {
                let gamma = self.coefficients(&fam, z);
                let pgx = self.system.combination_apply(&gamma, x);
                let x_plus: Vec<f64> = x.iter().zip(&pgx).map(|(a, b)| 0.5 * (a + b)).collect();
                let x_minus = sub(x, &x_plus);
                // X₋ = ½ P_δ z with δ_α = 2⟨X₋, P_α z⟩
                let delta: Vec<f64> = (0..fam.span)
                    .map(|a| 2.0 * dot(&x_minus, &self.system.p(a).matvec(z)))
                    .collect();
                let moved = fam
                    .retract(&add(&gamma, &delta))
                    .ok_or_else(|| Error::Numeric("degenerate coefficient retraction".into()))?;
                let w = add(z, &x_plus);
                let pw = self.system.combination_apply(&moved, &w);
                let e = scale(0.5, &add(&w, &pw));
                normalized(&e).ok_or_else(|| Error::Numeric("retraction left the eigenspace".into()))
            }
        }
    }

    fn sample_once<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Vec<f64>> {
        let n = self.system.dim();
        let l = self.system.l();
        let mut gauss = |len: usize| -> Vec<f64> { (0..len).map(|_| StandardNormal.sample(rng)).collect() };
        match (self.kind, self.structure()) {
            (ManifoldKind::MPlusT { t }, _) => {
                let x = normalized(&gauss(l)).ok_or_else(|| Error::Sampling("zero draw".into()))?;
                let mut span = vec![x.clone()];
                for e in self.system.skew_source().generators() {
                    gram_schmidt_push(&mut span, &e.matvec(&x), 1e-10);
                }
                let y = normalized(&reject(&gauss(l), &span))
                    .ok_or_else(|| Error::Sampling("orthogonal complement draw vanished".into()))?;
                let mut z = scale(t.cos(), &x);
                z.extend(scale(t.sin(), &y));
                Ok(z)
            }
            (_, Structure::Quadratic(_)) => {
                let z0 = normalized(&gauss(n)).ok_or_else(|| Error::Sampling("zero draw".into()))?;
                self.newton_onto(&z0)
            }
            (_, Structure::Eigen(fam)) => {
                let gamma = fam
                    .retract(&gauss(fam.span))
                    .ok_or_else(|| Error::Sampling("zero coefficient draw".into()))?;
                let w = gauss(n);
                let pw = self.system.combination_apply(&gamma, &w);
                normalized(&add(&w, &pw)).ok_or_else(|| Error::Sampling("eigenspace draw vanished".into()))
            }
        }
    }

    pub fn sample_with<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<SurfacePoint> {
        let mut last_err = None;
        for _ in 0..SAMPLING_RETRIES {
            match self.sample_once(rng).and_then(|z| SurfacePoint::new(self.clone(), z)) {
                Ok(p) => return Ok(p),
                Err(e) => last_err = Some(e),
            }
        }
        Err(Error::Sampling(format!(
            "{:?}: no valid point after {SAMPLING_RETRIES} draws ({})",
            self.kind,
            last_err.map(|e| e.to_string()).unwrap_or_default()
        )))
    }
}

/// Draws one point on `spec` from a ChaCha8 stream seeded with `seed`.
pub fn sample_point(spec: &ManifoldSpec, seed: u64) -> Result<SurfacePoint> {
    spec.sample_with(&mut ChaCha8Rng::seed_from_u64(seed))
}

/// Draws `count` points from a single seeded stream.
pub fn sample_points(spec: &ManifoldSpec, count: usize, seed: u64) -> Result<Vec<SurfacePoint>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| spec.sample_with(&mut rng)).collect()
}

/// A unit vector on a named submanifold, validated on construction.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfacePoint {
    spec: ManifoldSpec,
    z: Vec<f64>,
    constraint_residual: f64,
}

impl SurfacePoint {
    pub fn new(spec: ManifoldSpec, z: Vec<f64>) -> Result<Self> {
        if z.len() != spec.system().dim() {
            return Err(Error::Dimension(format!(
                "point has {} coordinates, ambient dimension is {}",
                z.len(),
                spec.system().dim()
            )));
        }
        let unit = (norm(&z) - 1.0).abs();
        let residual = spec.constraint_residual(&z);
        if unit >= UNIT_TOL || residual >= CONSTRAINT_TOL {
            return Err(Error::Domain(format!(
                "point is not on {:?}: ||z|-1| = {unit:e}, constraint residual {residual:e}",
                spec.kind()
            )));
        }
        Ok(Self {
            spec,
            z,
            constraint_residual: residual,
        })
    }

    pub fn spec(&self) -> &ManifoldSpec {
        &self.spec
    }

    pub fn z(&self) -> &[f64] {
        &self.z
    }

    pub fn constraint_residual(&self) -> f64 {
        self.constraint_residual
    }

    /// The same ambient point viewed on another manifold that contains it.
    pub fn reinterpret(&self, spec: ManifoldSpec) -> Result<Self> {
        Self::new(spec, self.z.clone())
    }

    /// Split `z = (x, y) ∈ ℝ^l ⊕ ℝ^l`.
    pub fn halves(&self) -> (&[f64], &[f64]) {
        self.z.split_at(self.spec.system().l())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SurfacePointDoc {
    #[serde(flatten)]
    pub kind: ManifoldKind,
    pub z: Vec<f64>,
    pub constraint_residual: f64,
}

/// Serializes a batch of points as a JSON array.
pub fn points_to_json(points: &[SurfacePoint]) -> Result<String> {
    let docs: Vec<SurfacePointDoc> = points
        .iter()
        .map(|p| SurfacePointDoc {
            kind: p.spec.kind(),
            z: p.z.clone(),
            constraint_residual: p.constraint_residual,
        })
        .collect();
    Ok(serde_json::to_string(&docs)?)
}

/// Parses a batch written by [`points_to_json`], re-validating every point.
pub fn points_from_json(system: &Arc<CliffordSystem>, s: &str) -> Result<Vec<SurfacePoint>> {
    let docs: Vec<SurfacePointDoc> = serde_json::from_str(s)?;
    docs.into_iter()
        .map(|d| SurfacePoint::new(ManifoldSpec::new(system.clone(), d.kind)?, d.z))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polynomial::FkmPolynomial;
    use std::f64::consts::FRAC_PI_6;

    fn sys(m: usize, k: usize) -> Arc<CliffordSystem> {
        Arc::new(CliffordSystem::build(m, k).unwrap())
    }

    #[test]
    fn degenerate_systems_refused() {
        let s = sys(2, 1); // l = 2, l - m - 1 < 0
        assert!(ManifoldSpec::new(s, ManifoldKind::MChain { i: 0 }).is_err());
    }

    #[test]
    fn index_ranges() {
        let s = sys(3, 2);
        assert!(ManifoldSpec::new(s.clone(), ManifoldKind::MChain { i: 3 }).is_ok());
        assert!(ManifoldSpec::new(s.clone(), ManifoldKind::MChain { i: 4 }).is_err());
        assert!(ManifoldSpec::new(s.clone(), ManifoldKind::NChain { i: 0 }).is_err());
        assert!(ManifoldSpec::new(s.clone(), ManifoldKind::LevelV { i: 1, c: 0.0 }).is_err());
        assert!(ManifoldSpec::new(s.clone(), ManifoldKind::LevelU { i: 0, c: 1.0 }).is_err());
        assert!(ManifoldSpec::new(s, ManifoldKind::MPlusT { t: 1.0 }).is_err());
    }

    #[test]
    fn m_plus_quarter_turn_is_on_f_inverse_one() {
        let s = sys(1, 3);
        let spec = ManifoldSpec::new(s.clone(), ManifoldKind::MPlusT { t: FRAC_PI_4 }).unwrap();
        let p = sample_point(&spec, 3).unwrap();
        let f = FkmPolynomial::new(&s).eval(p.z());
        assert!((f - 1.0).abs() < 1e-12);
    }

    #[test]
    fn m_minus_is_on_f_inverse_minus_one() {
        for (m, k) in [(1, 3), (2, 2), (3, 2)] {
            let s = sys(m, k);
            let spec = ManifoldSpec::new(s.clone(), ManifoldKind::MMinus).unwrap();
            for p in sample_points(&spec, 5, 11).unwrap() {
                let f = FkmPolynomial::new(&s).eval(p.z());
                assert!((f + 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn chain_constraints_hold() {
        let s = sys(3, 2);
        let spec = ManifoldSpec::new(s.clone(), ManifoldKind::MChain { i: 0 }).unwrap();
        let p = sample_point(&spec, 1).unwrap();
        assert!(s.p(0).bilinear(p.z(), p.z()).abs() < 1e-10);
        let spec = ManifoldSpec::new(s, ManifoldKind::LevelU { i: 1, c: 0.6 }).unwrap();
        assert!(sample_point(&spec, 2).unwrap().constraint_residual() < 1e-12);
    }

    #[test]
    fn m_plus_t_sample_residual() {
        let s = sys(3, 2);
        let spec = ManifoldSpec::new(s, ManifoldKind::MPlusT { t: FRAC_PI_6 }).unwrap();
        for p in sample_points(&spec, 10, 5).unwrap() {
            assert!(p.constraint_residual() < 1e-13);
            let (x, y) = p.halves();
            assert!((norm(x) - FRAC_PI_6.cos()).abs() < 1e-14);
            assert!((norm(y) - FRAC_PI_6.sin()).abs() < 1e-14);
        }
    }

    #[test]
    fn eigen_retraction_stays_on_manifold() {
        let s = sys(2, 2);
        for kind in [
            ManifoldKind::NChain { i: 1 },
            ManifoldKind::MMinus,
            ManifoldKind::LevelV { i: 2, c: 0.3 },
            ManifoldKind::FocalU { i: 0, sign: Sign::Minus },
        ] {
            let spec = ManifoldSpec::new(s.clone(), kind).unwrap();
            let p = sample_point(&spec, 8).unwrap();
            let x: Vec<f64> = (0..s.dim()).map(|k| 0.01 * (k as f64).sin()).collect();
            let q = spec.retract(p.z(), &x).unwrap();
            assert!(spec.constraint_residual(&q) < 1e-12, "{kind:?}");
        }
    }

    #[test]
    fn batch_json_round_trip() {
        let s = sys(1, 3);
        let spec = ManifoldSpec::new(s.clone(), ManifoldKind::LevelU { i: 0, c: 0.25 }).unwrap();
        let pts = sample_points(&spec, 3, 4).unwrap();
        let json = points_to_json(&pts).unwrap();
        let back = points_from_json(&s, &json).unwrap();
        assert_eq!(back.len(), 3);
        assert_eq!(back[1].z(), pts[1].z());
    }

    #[test]
    fn rejects_off_manifold_point() {
        let s = sys(1, 3);
        let spec = ManifoldSpec::new(s, ManifoldKind::MChain { i: 0 }).unwrap();
        let mut z = vec![0.0; 6];
        z[0] = 1.0;
        assert!(SurfacePoint::new(spec, z).is_err());
    }
}
