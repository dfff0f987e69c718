//! Bounded Dyck path block code: every codeword keeps its running digital
//! sum inside [-1, 2], so it is strongly (4,1)-locally balanced.

use locbal::dyck::{build_codebook, count_bounded_paths, min_block_length};
use locbal::words::{dis, rds};
use locbal::Word;

fn main() -> locbal::Result<()> {
    println!(" s  m  rate   paths from 2  paths from 1");
    for s in 2..=15 {
        let m = min_block_length(s)?;
        println!(
            "{s:>2} {m:>2}  {:.3}  {:>12}  {:>12}",
            s as f64 / m as f64,
            count_bounded_paths(2, m)?,
            count_bounded_paths(1, m)?
        );
    }

    let cb = build_codebook(3)?;
    println!("\ns = 3, m = {}", cb.m());
    for (i, (b, c)) in cb
        .boundary_table()
        .iter()
        .zip(cb.interior_table())
        .enumerate()
    {
        println!("  {i:03b}  from 2: {b}  from 1: {c}");
    }

    let msg: Word = "110001011111000".parse()?;
    let code = cb.encode(&msg)?;
    println!("\nmessage  {msg}");
    println!("codeword {code}");
    println!("rds      {:?}", rds(&code).values());
    println!("dis      {}", dis(&code));
    assert_eq!(cb.decode(&code)?, msg);
    Ok(())
}
