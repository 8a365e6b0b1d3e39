//! Builds symmetric Clifford systems for several (m, k) and prints their
//! dimensions, multiplicities and relation residuals.

use fkm_foliation::{delta_dim, CliffordSystem};

fn main() -> fkm_foliation::Result<()> {
    println!("{:>3} {:>3} {:>6} {:>4} {:>14} {:>12}", "m", "k", "delta", "l", "(m1, m2)", "residual");
    // (8, 1) has l = m, so m2 < 0: only the algebra is meaningful there
    for (m, k) in [(1, 3), (2, 2), (3, 2), (4, 2), (5, 1), (8, 1), (9, 1)] {
        let sys = CliffordSystem::build(m, k)?;
        println!(
            "{m:>3} {k:>3} {:>6} {:>4} {:>14} {:>12.2e}{}",
            delta_dim(m)?,
            sys.l(),
            format!("{:?}", sys.multiplicities()),
            sys.max_anticommutator_residual(),
            if sys.is_nondegenerate() { "" } else { "  degenerate" }
        );
    }

    let sys = CliffordSystem::build(2, 2)?;
    let json = sys.to_json()?;
    let back = CliffordSystem::from_json(&json)?;
    assert_eq!(back.matrices(), sys.matrices());
    println!("\n(2,2) serializes to {} bytes of JSON and reads back unchanged", json.len());
    Ok(())
}
