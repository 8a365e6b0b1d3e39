//! The quartic `F(x) = |x|⁴ - 2 Σ ⟨P_α x, x⟩²` of a symmetric Clifford system.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::clifford::CliffordSystem;
use crate::numerics::dense::{axpy, dot, norm_sq};

/// Number of distinct principal curvatures of the family.
pub const G: usize = 4;

#[derive(Debug, Clone, Copy)]
pub struct FkmPolynomial<'a> {
    system: &'a CliffordSystem,
}

impl<'a> FkmPolynomial<'a> {
    pub fn new(system: &'a CliffordSystem) -> Self {
        Self { system }
    }

    pub fn system(&self) -> &'a CliffordSystem {
        self.system
    }

    /// `(m₁, m₂) = (m, l - m - 1)`.
    pub fn multiplicities(&self) -> (i64, i64) {
        self.system.multiplicities()
    }

    /// False when `m₂ <= 0`; such instances are still evaluable.
    pub fn is_nondegenerate(&self) -> bool {
        self.system.is_nondegenerate()
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        let r2 = norm_sq(x);
        let s: f64 = self.system.quadratic_forms(x).iter().map(|q| q * q).sum();
        r2 * r2 - 2.0 * s
    }

    /// `4|x|² x - 8 Σ ⟨P_α x, x⟩ P_α x`
    pub fn grad(&self, x: &[f64]) -> Vec<f64> {
        let mut g: Vec<f64> = x.iter().map(|v| 4.0 * norm_sq(x) * v).collect();
        for p in self.system.matrices() {
            let px = p.matvec(x);
            let q = dot(&px, x);
            axpy(-8.0 * q, &px, &mut g);
        }
        g
    }

    /// Laplacian of the quartic from its definition alone:
    /// `Δ|x|⁴ = 4(N + 2)|x|²` and `Δ⟨Px,x⟩² = 8|Px|² + 4⟨Px,x⟩ tr P`.
    ///
    /// For a Clifford system this equals `8(l - 2m - 1)|x|²`, but nothing
    /// beyond symmetry of `P_α` is assumed here.
    pub fn laplacian(&self, x: &[f64]) -> f64 {
        let n = x.len() as f64;
        let mut lap = 4.0 * (n + 2.0) * norm_sq(x);
        for p in self.system.matrices() {
            let px = p.matvec(x);
            lap -= 2.0 * (8.0 * norm_sq(&px) + 4.0 * dot(&px, x) * p.trace());
        }
        lap
    }

    /// Right-hand side `g² r^{2g-2} = 16|x|⁶` of the gradient identity.
    pub fn grad_norm_sq_target(&self, x: &[f64]) -> f64 {
        16.0 * norm_sq(x).powi(3)
    }

    /// Right-hand side `(m₂ - m₁)/2 · g² r^{g-2} = 8(l - 2m - 1)|x|²`.
    pub fn laplacian_target(&self, x: &[f64]) -> f64 {
        let (m1, m2) = self.multiplicities();
        (m2 - m1) as f64 / 2.0 * (G * G) as f64 * norm_sq(x)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CmReport {
    pub samples: usize,
    pub max_grad_residual: f64,
    pub max_lap_residual: f64,
    pub pass: bool,
}

/// Samples `samples` standard Gaussian points and measures both identities.
///
/// Residuals are relative: the gradient one divides by `max(1, |x|⁶)`, the
/// Laplacian one by `max(1, |x|²)`.
pub fn verify_cm_identities(poly: &FkmPolynomial<'_>, samples: usize, seed: u64, tol: f64) -> CmReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = poly.system().dim();
    let mut max_grad = 0.0_f64;
    let mut max_lap = 0.0_f64;
    for _ in 0..samples.max(1) {
        let x: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
        let r2 = norm_sq(&x);
        let g = poly.grad(&x);
        let grad_res = (norm_sq(&g) - poly.grad_norm_sq_target(&x)).abs() / r2.powi(3).max(1.0);
        let lap_res = (poly.laplacian(&x) - poly.laplacian_target(&x)).abs() / r2.max(1.0);
        max_grad = max_grad.max(grad_res);
        max_lap = max_lap.max(lap_res);
    }
    CmReport {
        samples: samples.max(1),
        max_grad_residual: max_grad,
        max_lap_residual: max_lap,
        pass: max_grad <= tol && max_lap <= tol,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_maps_to_zero() {
        let sys = CliffordSystem::build(2, 2).unwrap();
        let f = FkmPolynomial::new(&sys);
        let z = vec![0.0; sys.dim()];
        assert_eq!(f.eval(&z), 0.0);
        assert!(f.grad(&z).iter().all(|&v| v == 0.0));
    }

    #[test]
    fn eigenvector_of_p0_gives_minus_one() {
        let sys = CliffordSystem::build(3, 2).unwrap();
        let f = FkmPolynomial::new(&sys);
        let mut x = vec![0.0; sys.dim()];
        x[0] = 1.0;
        assert_eq!(f.eval(&x), -1.0);
    }

    #[test]
    fn laplacian_values() {
        let sys = CliffordSystem::build(1, 3).unwrap();
        let f = FkmPolynomial::new(&sys);
        let x = [0.3, -1.2, 0.5, 2.0, 0.1, -0.7];
        assert!(f.laplacian(&x).abs() < 1e-12);

        let sys = CliffordSystem::build(2, 2).unwrap();
        let f = FkmPolynomial::new(&sys);
        let mut x = vec![0.0; 8];
        x[3] = 1.0;
        assert!((f.laplacian(&x) + 8.0).abs() < 1e-12);
    }

    #[test]
    fn strict_zero_tolerance_fails() {
        let sys = CliffordSystem::build(3, 2).unwrap();
        let r = verify_cm_identities(&FkmPolynomial::new(&sys), 200, 7, 0.0);
        assert!(!r.pass);
        assert!(r.max_grad_residual > 0.0);
    }

    #[test]
    fn degenerate_instance_is_flagged() {
        let sys = CliffordSystem::build(2, 1).unwrap();
        assert!(!FkmPolynomial::new(&sys).is_nondegenerate());
    }
}
