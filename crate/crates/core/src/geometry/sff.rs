//! Second fundamental forms relative to the unit sphere.
//!
//! Conventions: for a unit normal `ξ` the component matrix is
//! `⟨B(e_i, e_j), ξ⟩ = ⟨A_ξ e_i, e_j⟩` with `A_ξ X = -(dξ(X))ᵀ`.
//! Components are taken against normals *inside* the sphere. The Euclidean
//! form additionally has the radial part `⟨B_eucl(X, Y), z⟩ = -⟨X, Y⟩`,
//! which is stored separately and only enters through
//! [`SecondFundamentalForm::euclidean_mean_curvature`].

use crate::error::{Error, Result};
use crate::geometry::frame::{m_plus_t_normals, tangent_normal_frame, Frame};
use crate::geometry::manifold::{ManifoldKind, QuadForm, SurfacePoint};
use crate::numerics::dense::{add, axpy, dot, norm_sq, scale, sub, Matrix};
use crate::numerics::{symmetric_eigenvalues, SymmetricMatrix};

/// Default finite-difference step.
pub const DEFAULT_FD_STEP: f64 = 1e-4;

#[derive(Debug, Clone)]
pub struct SecondFundamentalForm {
    pub frame: Frame,
    /// One symmetric matrix per entry of `frame.normal`.
    pub components: Vec<Matrix>,
    /// `⟨B_eucl(e_i, e_j), z⟩`; exactly `-I` for analytic forms.
    pub radial: Matrix,
}

impl SecondFundamentalForm {
    pub fn dim(&self) -> usize {
        self.frame.dim()
    }

    /// `H^α = tr A_α` for each normal.
    pub fn mean_curvature_components(&self) -> Vec<f64> {
        self.components.iter().map(Matrix::trace).collect()
    }

    /// Mean curvature vector in the sphere, as an ambient vector.
    pub fn mean_curvature_vector(&self) -> Vec<f64> {
        let mut h = vec![0.0; self.frame.point.z().len()];
        for (h_a, xi) in self.mean_curvature_components().iter().zip(&self.frame.normal) {
            axpy(*h_a, xi, &mut h);
        }
        h
    }

    pub fn mean_curvature_sq(&self) -> f64 {
        norm_sq(&self.mean_curvature_components())
    }

    /// `|B|² = Σ_{i,j,α} (h^α_ij)²`
    pub fn norm_sq(&self) -> f64 {
        self.components.iter().map(Matrix::frobenius_sq).sum()
    }

    /// Euclidean mean curvature vector: the sphere part plus `tr(radial) z`.
    /// For a submanifold of the unit sphere this is `H - n z`.
    pub fn euclidean_mean_curvature(&self) -> Vec<f64> {
        let mut h = self.mean_curvature_vector();
        axpy(self.radial.trace(), self.frame.point.z(), &mut h);
        h
    }

    /// Shape operator along an arbitrary ambient normal vector `eta`:
    /// `Σ_α ⟨ξ_α, η⟩ A_α`.
    pub fn contract(&self, eta: &[f64]) -> Matrix {
        let n = self.dim();
        let mut out = Matrix::zeros(n, n);
        for (c, xi) in self.components.iter().zip(&self.frame.normal) {
            out = out.add(&c.scaled(dot(xi, eta)));
        }
        out
    }

    pub fn shape_operator(&self, alpha: usize) -> SymmetricMatrix {
        SymmetricMatrix::symmetrized(&self.components[alpha])
    }

    /// Ascending principal curvatures along normal `alpha`.
    pub fn principal_curvatures(&self, alpha: usize) -> Result<Vec<f64>> {
        symmetric_eigenvalues(&self.shape_operator(alpha), 1e-14)
    }

    /// `|B(X, X)|² = Σ_α ⟨A_α X, X⟩²` for tangent coordinates `x`.
    pub fn normal_curvature_sq(&self, x: &[f64]) -> f64 {
        self.components
            .iter()
            .map(|c| {
                let q = dot(&c.matvec(x), x);
                q * q
            })
            .sum()
    }

    /// Largest asymmetry among the component matrices.
    pub fn max_asymmetry(&self) -> f64 {
        self.components.iter().map(Matrix::asymmetry).fold(0.0, f64::max)
    }
}

/// Scalar curvature from the Gauss equation, `n(n-1) + |H|² - |B|²`.
pub fn gauss_scalar_curvature(sff: &SecondFundamentalForm) -> f64 {
    let n = sff.dim() as f64;
    n * (n - 1.0) + sff.mean_curvature_sq() - sff.norm_sq()
}

/// Exact shape operators of `M₊ᵗ` with respect to the normals `Q_α z`:
/// `A_α X = -(Q_α X)ᵀ`.
pub fn analytic_shape_operators(point: &SurfacePoint) -> Result<SecondFundamentalForm> {
    let t = match point.spec().kind() {
        ManifoldKind::MPlusT { t } => t,
        other => {
            return Err(Error::Domain(format!(
                "analytic shape operators exist only on M+^t, not {other:?}"
            )))
        }
    };
    let frame = tangent_normal_frame(point)?;
    let spec = point.spec();
    let sys = spec.system();
    let (a, b) = (t.tan(), 1.0 / t.tan());
    let n = frame.dim();
    let components = (0..=sys.m())
        .map(|alpha| {
            let images: Vec<Vec<f64>> = frame
                .tangent
                .iter()
                .map(|e| {
                    if alpha == 0 {
                        spec.apply_form(QuadForm::Q0 { a, b }, e)
                    } else {
                        sys.p(alpha).matvec(e)
                    }
                })
                .collect();
            let raw = Matrix::from_fn(n, n, |i, j| -dot(&images[i], &frame.tangent[j]));
            SymmetricMatrix::symmetrized(&raw).into_matrix()
        })
        .collect();
    debug_assert_eq!(frame.normal.len(), m_plus_t_normals(point, t).len());
    Ok(SecondFundamentalForm {
        frame,
        components,
        radial: Matrix::identity(n).scaled(-1.0),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdOptions {
    pub step: f64,
    /// Combine steps `h` and `h/2` as `(4 D(h/2) - D(h)) / 3`.
    pub richardson: bool,
}

impl Default for FdOptions {
    fn default() -> Self {
        Self {
            step: DEFAULT_FD_STEP,
            richardson: false,
        }
    }
}

impl FdOptions {
    pub fn with_step(step: f64) -> Self {
        Self {
            step,
            richardson: false,
        }
    }
}

/// Second difference `(R(hX) + R(-hX) - 2z) / h²`, an ambient vector whose
/// normal part is `B_eucl(X, X) + O(h²)`.
fn second_difference(point: &SurfacePoint, x: &[f64], h: f64) -> Result<Vec<f64>> {
    let spec = point.spec();
    let z = point.z();
    let fwd = spec.retract(z, &scale(h, x))?;
    let bwd = spec.retract(z, &scale(-h, x))?;
    let d = sub(&add(&fwd, &bwd), &scale(2.0, z));
    Ok(scale(1.0 / (h * h), &d))
}

fn curvature_probe(point: &SurfacePoint, x: &[f64], opts: FdOptions) -> Result<Vec<f64>> {
    let coarse = second_difference(point, x, opts.step)?;
    if !opts.richardson {
        return Ok(coarse);
    }
    let fine = second_difference(point, x, 0.5 * opts.step)?;
    Ok(fine
        .iter()
        .zip(&coarse)
        .map(|(f, c)| (4.0 * f - c) / 3.0)
        .collect())
}

/// Estimates the second fundamental form by retracting `z ± h e_i` and
/// `z ± h (e_i + e_j)` onto the manifold and reading off the normal parts
/// of the second differences (polarization for the off-diagonal entries).
pub fn numeric_second_fundamental_form(point: &SurfacePoint, opts: FdOptions) -> Result<SecondFundamentalForm> {
    if !(1e-6..=1e-2).contains(&opts.step) {
        return Err(Error::Domain(format!(
            "finite-difference step {} outside [1e-6, 1e-2]",
            opts.step
        )));
    }
    let frame = tangent_normal_frame(point)?;
    let n = frame.dim();
    let z = point.z();
    let estimation = |e: Error| Error::Numeric(format!("second fundamental form estimation: {e}"));

    let diag: Vec<Vec<f64>> = frame
        .tangent
        .iter()
        .map(|e| curvature_probe(point, e, opts))
        .collect::<Result<_>>()
        .map_err(estimation)?;

    // ambient vectors d_ij ≈ B_eucl(e_i, e_j)
    let mut pair = vec![vec![Vec::new(); n]; n];
    for i in 0..n {
        pair[i][i] = diag[i].clone();
        for j in (i + 1)..n {
            let dir = add(&frame.tangent[i], &frame.tangent[j]);
            let dij = curvature_probe(point, &dir, opts).map_err(estimation)?;
            let b = scale(0.5, &sub(&sub(&dij, &diag[i]), &diag[j]));
            pair[i][j] = b.clone();
            pair[j][i] = b;
        }
    }

    let components = frame
        .normal
        .iter()
        .map(|xi| Matrix::from_fn(n, n, |i, j| dot(&pair[i][j], xi)))
        .collect();
    let radial = Matrix::from_fn(n, n, |i, j| dot(&pair[i][j], z));
    Ok(SecondFundamentalForm {
        frame,
        components,
        radial,
    })
}

/// Re-expresses `sff`'s components in another orthonormal basis of the same
/// normal space (e.g. numeric frame vs. the analytic `Q_α z`).
pub fn components_along(sff: &SecondFundamentalForm, normals: &[Vec<f64>]) -> Vec<Matrix> {
    normals.iter().map(|eta| sff.contract(eta)).collect()
}
