//! Cyclic Jacobi eigensolver for real symmetric matrices.

use super::dense::{dot, Matrix};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;
const MAX_ORDER: usize = 4096;

/// A square matrix validated to be symmetric to `1e-12`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix(Matrix);

impl SymmetricMatrix {
    pub const SYMMETRY_TOL: f64 = 1e-12;

    pub fn new(m: Matrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::Dimension(format!(
                "symmetric matrix must be square, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        let asym = m.asymmetry();
        if asym > Self::SYMMETRY_TOL * m.max_abs().max(1.0) {
            return Err(Error::Domain(format!(
                "matrix is not symmetric (max asymmetry {asym:e})"
            )));
        }
        Ok(Self(m))
    }

    /// Symmetrizes `(M + Mᵀ)/2` without checking; for estimated forms that
    /// are symmetric only up to discretization error.
    pub fn symmetrized(m: &Matrix) -> Self {
        assert!(m.is_square());
        let n = m.rows();
        Self(Matrix::from_fn(n, n, |i, j| 0.5 * (m[(i, j)] + m[(j, i)])))
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let n = values.len();
        Self(Matrix::from_fn(n, n, |i, j| if i == j { values[i] } else { 0.0 }))
    }

    pub fn order(&self) -> usize {
        self.0.rows()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix {
        self.0
    }
}

/// Eigenvalues in ascending order with the matching orthonormal eigenvectors
/// stored as the columns of `vectors`.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: Matrix,
    pub sweeps: usize,
}

impl EigenDecomposition {
    pub fn vector(&self, k: usize) -> Vec<f64> {
        self.vectors.column(k)
    }

    /// `V Λ Vᵀ`
    pub fn reconstruct(&self) -> Matrix {
        let n = self.values.len();
        Matrix::from_fn(n, n, |i, j| {
            (0..n)
                .map(|k| self.vectors[(i, k)] * self.values[k] * self.vectors[(j, k)])
                .sum()
        })
    }

    /// Eigenvectors whose eigenvalue lies within `tol` of `target`.
    pub fn eigenspace(&self, target: f64, tol: f64) -> Vec<Vec<f64>> {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, v)| (*v - target).abs() <= tol)
            .map(|(k, _)| self.vector(k))
            .collect()
    }
}

fn off_diagonal_norm(a: &Matrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)] * a[(i, j)];
            }
        }
    }
    s.sqrt()
}

/// Diagonalizes `a` by cyclic Jacobi rotations until the off-diagonal
/// Frobenius norm drops below `tol`.
pub fn symmetric_eigen(a: &SymmetricMatrix, tol: f64) -> Result<EigenDecomposition> {
    let n = a.order();
    if n > MAX_ORDER {
        return Err(Error::Dimension(format!(
            "eigensolver supports order <= {MAX_ORDER}, got {n}"
        )));
    }
    let mut m = a.matrix().clone();
    let mut v = Matrix::identity(n);
    let mut sweeps = 0;

    while off_diagonal_norm(&m) >= tol {
        if sweeps == MAX_SWEEPS {
            return Err(Error::Numeric(format!(
                "Jacobi did not converge in {MAX_SWEEPS} sweeps (off-diagonal norm {:e})",
                off_diagonal_norm(&m)
            )));
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let app = m[(p, p)];
                let aqq = m[(q, q)];
                // rotation angle that annihilates m[p][q]
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;

                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = c * mkp - s * mkq;
                    m[(k, q)] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mqk = m[(q, k)];
                    m[(p, k)] = c * mpk - s * mqk;
                    m[(q, k)] = s * mpk + c * mqk;
                }
                m[(p, q)] = 0.0;
                m[(q, p)] = 0.0;

                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].total_cmp(&m[(j, j)]));
    let values = order.iter().map(|&i| m[(i, i)]).collect();
    let vectors = Matrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok(EigenDecomposition {
        values,
        vectors,
        sweeps,
    })
}

/// Convenience wrapper: eigenvalues only, ascending.
pub fn symmetric_eigenvalues(a: &SymmetricMatrix, tol: f64) -> Result<Vec<f64>> {
    symmetric_eigen(a, tol).map(|d| d.values)
}

/// Numerical rank of the span of `vectors` (count of Gram eigenvalues above `tol`).
pub fn numeric_rank(vectors: &[Vec<f64>], tol: f64) -> Result<usize> {
    if vectors.is_empty() {
        return Ok(0);
    }
    let k = vectors.len();
    let gram = Matrix::from_fn(k, k, |i, j| dot(&vectors[i], &vectors[j]));
    let eig = symmetric_eigen(&SymmetricMatrix::symmetrized(&gram), 1e-14)?;
    Ok(eig.values.iter().filter(|&&v| v > tol).count())
}

/// Groups sorted eigenvalues into clusters closer than `tol`, returning
/// `(mean value, multiplicity)` pairs.
pub fn cluster_spectrum(sorted: &[f64], tol: f64) -> Vec<(f64, usize)> {
    let mut out: Vec<(f64, usize, f64)> = Vec::new();
    for &v in sorted {
        match out.last_mut() {
            Some((mean, count, last)) if (v - *last).abs() <= tol => {
                *mean = (*mean * *count as f64 + v) / (*count as f64 + 1.0);
                *count += 1;
                *last = v;
            }
            _ => out.push((v, 1, v)),
        }
    }
    out.into_iter().map(|(m, c, _)| (m, c)).collect()
}
