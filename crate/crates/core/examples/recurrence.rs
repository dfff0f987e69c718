//! Counts of (6,1)-locally balanced words and the order-12 recurrence they
//! satisfy once words are at least one window long.

use locbal::enumeration::{
    count_sequence, growth_estimate, verify_lemmas_from, verify_recurrence_from, CountMethod,
    RECURRENCE,
};
use locbal::ConstraintParams;

fn main() -> locbal::Result<()> {
    let p = ConstraintParams::new(6, 1)?;
    let seq = count_sequence(&p, 41)?;
    for (n, f) in seq.counts().iter().enumerate() {
        println!("f({n:>2}) = {f}");
    }
    let ratio = growth_estimate(&p, 40)?;
    println!("f(41)/f(40) = {ratio:.6}, log2 = {:.6}", ratio.log2());

    println!("\n{RECURRENCE}");
    let report = verify_recurrence_from(1, 28)?;
    for c in report.failures() {
        println!("  fails at n = {}: {} vs {}", c.n, c.lhs, c.rhs);
    }
    println!(
        "  holds for 6 <= n <= 28: {}",
        verify_recurrence_from(6, 28)?.pass()
    );
    println!(
        "  supporting identities hold for 6 <= n <= 28: {}",
        verify_lemmas_from(6, 28, CountMethod::Transfer)?.pass()
    );
    Ok(())
}
