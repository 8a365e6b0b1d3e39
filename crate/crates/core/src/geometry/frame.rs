use crate::error::{Error, Result};
use crate::geometry::manifold::{ManifoldKind, QuadForm, Structure, SurfacePoint};
use crate::numerics::dense::{dot, gram_defect, gram_schmidt_push, reject, scale, Matrix};
use crate::numerics::{orthonormal_complement, symmetric_eigen, SymmetricMatrix};

const RANK_TOL: f64 = 1e-8;

/// Orthonormal tangent and normal bases at a point; the normal space is
/// taken inside the sphere, so `tangent ⊕ normal ⊕ span{z} = ℝ^{2l}`.
#[derive(Debug, Clone)]
pub struct Frame {
    pub point: SurfacePoint,
    pub tangent: Vec<Vec<f64>>,
    pub normal: Vec<Vec<f64>>,
}

impl Frame {
    pub fn dim(&self) -> usize {
        self.tangent.len()
    }

    /// Worst deviation of the Gram matrix of `tangent ∪ normal ∪ {z}` from
    /// the identity. Completeness follows when the counts add up to `2l`.
    pub fn orthonormality_defect(&self) -> f64 {
        let mut all = self.tangent.clone();
        all.extend(self.normal.iter().cloned());
        all.push(self.point.z().to_vec());
        gram_defect(&all)
    }

    pub fn is_complete(&self) -> bool {
        self.tangent.len() + self.normal.len() + 1 == self.point.z().len()
    }

    /// Tangential part of an ambient vector.
    pub fn project_tangent(&self, v: &[f64]) -> Vec<f64> {
        crate::numerics::dense::project(v, &self.tangent)
    }

    /// Coordinates of an ambient vector in the tangent basis.
    pub fn tangent_coords(&self, v: &[f64]) -> Vec<f64> {
        self.tangent.iter().map(|e| dot(e, v)).collect()
    }

    /// Ambient vector with the given tangent-basis coordinates.
    pub fn from_tangent_coords(&self, coords: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.point.z().len()];
        for (c, e) in coords.iter().zip(&self.tangent) {
            crate::numerics::dense::axpy(*c, e, &mut out);
        }
        out
    }

    /// Matrix of `X ↦ (A X)ᵀ` in the tangent basis for an ambient linear map.
    pub fn restrict(&self, a: &Matrix) -> Matrix {
        a.restricted_to(&self.tangent)
    }
}

/// The unit normals `Q_0 z, Q_1 z, …, Q_m z` of `M₊ᵗ` at `z`.
pub fn m_plus_t_normals(point: &SurfacePoint, t: f64) -> Vec<Vec<f64>> {
    let spec = point.spec();
    let sys = spec.system();
    let z = point.z();
    let (a, b) = (t.tan(), 1.0 / t.tan());
    let mut out = vec![spec.apply_form(QuadForm::Q0 { a, b }, z)];
    for alpha in 1..=sys.m() {
        out.push(sys.p(alpha).matvec(z));
    }
    out
}

/// Builds the tangent/normal frame at `point`.
///
/// `M₊ᵗ` uses the analytic normals `Q_α z`; other quadratic manifolds
/// orthonormalize the tangential parts of the constraint gradients; eigen
/// families use `T = (E₊(P_γ) ∩ z^⊥) ⊕ {P_δ z : δ ∈ T_γ Γ}`.
pub fn tangent_normal_frame(point: &SurfacePoint) -> Result<Frame> {
    let spec = point.spec();
    let z = point.z();
    let n = z.len();
    let (tangent, normal) = match (spec.kind(), spec.structure()) {
        (ManifoldKind::MPlusT { t }, _) => {
            let normal = m_plus_t_normals(point, t);
            let mut span = normal.clone();
            span.push(z.to_vec());
            (orthonormal_complement(&span, n)?, normal)
        }
        (_, Structure::Quadratic(cs)) => {
            let mut basis = vec![z.to_vec()];
            for c in cs.iter().filter(|c| c.form != QuadForm::Norm) {
                let g = spec.apply_form(c.form, z);
                if !gram_schmidt_push(&mut basis, &g, RANK_TOL) {
                    return Err(Error::Frame(format!(
                        "constraint gradients are dependent at this point of {:?}",
                        spec.kind()
                    )));
                }
            }
            let normal = basis[1..].to_vec();
            (orthonormal_complement(&basis, n)?, normal)
        }
        (_, Structure::Eigen(fam)) => {
            let sys = spec.system();
            let gamma = spec.coefficients(&fam, z);
            let pg = SymmetricMatrix::symmetrized(&{
                let mut acc = Matrix::zeros(n, n);
                for (a, g) in gamma.iter().enumerate() {
                    acc = acc.add(&sys.p(a).scaled(*g));
                }
                acc
            });
            let eig = symmetric_eigen(&pg, 1e-13)?;
            let mut basis = vec![z.to_vec()];
            let mut tangent = Vec::new();
            for v in eig.eigenspace(1.0, 1e-6) {
                if gram_schmidt_push(&mut basis, &reject(&v, &[z.to_vec()]), RANK_TOL) {
                    tangent.push(basis.last().unwrap().clone());
                }
            }
            for delta in fam.tangent_basis(&gamma) {
                let v = sys.combination_apply(&delta, z);
                if gram_schmidt_push(&mut basis, &v, RANK_TOL) {
                    tangent.push(basis.last().unwrap().clone());
                }
            }
            let normal = orthonormal_complement(&basis, n)?;
            (tangent, normal)
        }
    };
    if tangent.len() != spec.dim() || normal.len() != spec.codim() {
        return Err(Error::Frame(format!(
            "{:?}: found {} tangent and {} normal directions, expected {} and {}",
            spec.kind(),
            tangent.len(),
            normal.len(),
            spec.dim(),
            spec.codim()
        )));
    }
    Ok(Frame {
        point: point.clone(),
        tangent,
        normal,
    })
}

/// Unit normal of a level set inside its parent manifold: the normalized
/// tangential gradient of `z ↦ ⟨P z, z⟩` along the parent.
pub fn gradient_in(parent: &Frame, p: &Matrix) -> Vec<f64> {
    let g = scale(2.0, &p.matvec(parent.point.z()));
    parent.project_tangent(&g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::CliffordSystem;
    use crate::geometry::manifold::{sample_point, ManifoldSpec, Sign};
    use std::f64::consts::{FRAC_PI_4, FRAC_PI_6};
    use std::sync::Arc;

    #[test]
    fn frames_are_orthonormal_and_complete() {
        let sys = Arc::new(CliffordSystem::build(3, 2).unwrap());
        let kinds = [
            ManifoldKind::MChain { i: 0 },
            ManifoldKind::MChain { i: 3 },
            ManifoldKind::NChain { i: 2 },
            ManifoldKind::MPlusT { t: FRAC_PI_6 },
            ManifoldKind::MPlusT { t: FRAC_PI_4 },
            ManifoldKind::MMinus,
            ManifoldKind::LevelU { i: 1, c: -0.4 },
            ManifoldKind::LevelV { i: 3, c: 0.2 },
            ManifoldKind::FocalU { i: 2, sign: Sign::Plus },
        ];
        for kind in kinds {
            let spec = ManifoldSpec::new(sys.clone(), kind).unwrap();
            let p = sample_point(&spec, 21).unwrap();
            let f = tangent_normal_frame(&p).unwrap();
            assert!(f.is_complete(), "{kind:?}");
            assert!(f.orthonormality_defect() < 1e-10, "{kind:?}: {}", f.orthonormality_defect());
        }
    }

    #[test]
    fn m_plus_t_normal_basis() {
        let sys = Arc::new(CliffordSystem::build(2, 2).unwrap());
        let spec = ManifoldSpec::new(sys, ManifoldKind::MPlusT { t: 0.4 }).unwrap();
        let p = sample_point(&spec, 2).unwrap();
        let normals = m_plus_t_normals(&p, 0.4);
        assert!(gram_defect(&normals) < 1e-14);
        let f = tangent_normal_frame(&p).unwrap();
        assert_eq!(f.dim(), 2 * 4 - 2 - 2);
    }
}
