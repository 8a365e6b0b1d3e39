//! Dense linear algebra, the Jacobi eigensolver, Gauss-Newton projection
//! and RK4. No external linear-algebra crate is used.

pub mod dense;
pub mod eigen;
pub mod newton;
pub mod ode;

pub use dense::Matrix;
pub use eigen::{
    cluster_spectrum, numeric_rank, symmetric_eigen, symmetric_eigenvalues, EigenDecomposition,
    SymmetricMatrix,
};
pub use newton::{newton_project, Linearization, Projection};
pub use ode::{rk4_integrate, rk4_integrate_with, rk4_step, Trajectory};

use crate::numerics::dense::gram_schmidt_push;

/// Orthonormal basis of the orthogonal complement of `span(vectors)` in ℝⁿ.
///
/// Deterministic: the complement is extracted from the eigenvectors of the
/// projector `I - Σ vvᵀ` (after orthonormalizing `vectors`).
pub fn orthonormal_complement(vectors: &[Vec<f64>], n: usize) -> crate::Result<Vec<Vec<f64>>> {
    let mut basis = Vec::new();
    for v in vectors {
        gram_schmidt_push(&mut basis, v, 1e-10);
    }
    let proj = Matrix::from_fn(n, n, |i, j| {
        let id = if i == j { 1.0 } else { 0.0 };
        id - basis.iter().map(|b| b[i] * b[j]).sum::<f64>()
    });
    let eig = symmetric_eigen(&SymmetricMatrix::symmetrized(&proj), 1e-14)?;
    let mut out = Vec::new();
    for v in eig.eigenspace(1.0, 0.5) {
        // re-orthogonalize against the removed span to clean rounding
        let w = dense::reject(&v, &basis);
        gram_schmidt_push(&mut out, &w, 1e-8);
    }
    Ok(out)
}
