//! Evaluates the OT-FKM quartic and its two Cartan-Münzner identities on
//! Gaussian samples.

use fkm_foliation::polynomial::verify_cm_identities;
use fkm_foliation::{CliffordSystem, FkmPolynomial};

fn main() -> fkm_foliation::Result<()> {
    for (m, k) in [(1, 3), (2, 2), (3, 2), (4, 2), (9, 1)] {
        let sys = CliffordSystem::build(m, k)?;
        let f = FkmPolynomial::new(&sys);
        let r = verify_cm_identities(&f, 1000, 42, 1e-10);
        println!(
            "(m,k)=({m},{k}) l={:<2} |grad F|^2 residual {:.2e}  Laplacian residual {:.2e}  pass={}",
            sys.l(),
            r.max_grad_residual,
            r.max_lap_residual,
            r.pass
        );
    }
    Ok(())
}
