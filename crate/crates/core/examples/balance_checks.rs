//! Inspect a word: windows, running digital sum and the balance predicates.
//!
//! ```text
//! cargo run --example balance_checks -- 0110011001100
//! ```

use locbal::words::{dis, is_locally_balanced, is_strongly_locally_balanced, rds, weight, window};
use locbal::{ConstraintParams, Word};

fn main() -> locbal::Result<()> {
    let text = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "111000111".into());
    let w: Word = text.parse()?;

    println!("word    {w}  (length {}, weight {})", w.len(), weight(&w));
    println!("rds     {:?}", rds(&w).values());
    println!("dis     {}", dis(&w));

    if w.len() >= 4 {
        let windows: Vec<String> = (1..=w.len() - 3)
            .map(|i| window(&w, i, 4).map(|x| format!("{x}:{}", weight(&x))))
            .collect::<locbal::Result<_>>()?;
        println!("4-windows {}", windows.join(" "));
    }

    for (ell, delta) in [(4, 1), (6, 1), (6, 2), (8, 2)] {
        let p = ConstraintParams::new(ell, delta)?;
        println!(
            "({ell},{delta})  local {:5}  strong {:5}",
            is_locally_balanced(&w, &p),
            is_strongly_locally_balanced(&w, &p)
        );
    }
    Ok(())
}
