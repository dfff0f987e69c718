//! Capacities of the locally balanced constraints for windows 4 to 14, and
//! the bounded-RDS capacities that lower-bound them.

use locbal::capacity::{build_debruijn_subgraph, capacity_rds, spectral_radius};
use locbal::ConstraintParams;

fn main() -> locbal::Result<()> {
    println!(
        "{:>4} {:>6} {:>9} {:>10} {:>6}",
        "ell", "delta", "vertices", "capacity", "iters"
    );
    for delta in 1..=2 {
        for ell in (4..=14).step_by(2) {
            let g = build_debruijn_subgraph(&ConstraintParams::new(ell, delta)?)?;
            let r = spectral_radius(&g, 1e-12, 1_000_000)?;
            println!(
                "{ell:>4} {delta:>6} {:>9} {:>10.6} {:>6}",
                g.vertex_count(),
                r.capacity,
                r.iterations
            );
        }
    }

    println!();
    for delta in 1..=7 {
        println!("RDS spread <= {delta}: {:.6}", capacity_rds(delta)?);
    }
    Ok(())
}
