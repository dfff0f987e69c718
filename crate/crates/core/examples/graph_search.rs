//! Search block lengths for the best graph code and use it.
//!
//! ```text
//! cargo run --release --example graph_search -- 6 1 5 15
//! ```

use locbal::graph::search_best_block;
use locbal::words::is_locally_balanced;
use locbal::{ConstraintParams, Word};

fn arg(i: usize, default: usize) -> usize {
    std::env::args()
        .nth(i)
        .and_then(|a| a.parse().ok())
        .unwrap_or(default)
}

fn main() -> locbal::Result<()> {
    let (ell, delta) = (arg(1, 6), arg(2, 1));
    let (m_min, m_max) = (arg(3, ell - 1), arg(4, 15));
    let p = ConstraintParams::new(ell, delta)?;

    let found = search_best_block(p, m_min, m_max)?;
    for (m, s) in &found.per_length {
        match s {
            Some(s) => println!("m = {m:>2}  s = {s:>2}  rate {:.3}", *s as f64 / *m as f64),
            None => println!("m = {m:>2}  no code"),
        }
    }
    let cb = &found.codebook;
    println!(
        "best {}/{} = {:.3} with {} vertices",
        found.s,
        found.m,
        found.rate(),
        cb.vertex_count()
    );

    let msg: Word = (0..4 * cb.s()).map(|i| (i * 7 % 5 < 2) as u8).collect();
    let code = cb.encode(&msg)?;
    println!("message  {msg}");
    println!("codeword {code}");
    assert!(is_locally_balanced(&code, &p));
    assert_eq!(cb.decode(&code)?, msg);
    Ok(())
}
