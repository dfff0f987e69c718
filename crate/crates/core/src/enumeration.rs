//! Exact counts of locally balanced words and checks of the `(6,1)` identities.
//!
//! Counting is a transfer computation whose state is the last `ell - 1`
//! symbols; a symbol may be appended when the window it completes is
//! admissible. All arithmetic is checked `u64`, which is enough for the
//! `(6,1)` counts up to roughly `n = 75` (`f_n` grows like `1.791^n`).
//!
//! Notation in identity names: `f(n)` is the number of balanced words of
//! length `n`, `f(n; z)` those with prefix `z`, and `f(n; s,t)` those whose
//! first `s` symbols have weight `t`.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::words::{is_locally_balanced, ConstraintParams, Word};

/// Exhaustive counting enumerates at most `2^24` completions.
pub const BRUTE_FORCE_MAX_FREE_BITS: usize = 24;

/// Counts `f_0..=f_n` for one constraint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountSequence {
    params: ConstraintParams,
    counts: Vec<u64>,
}

impl CountSequence {
    pub fn params(&self) -> ConstraintParams {
        self.params
    }

    pub fn get(&self, n: usize) -> Option<u64> {
        self.counts.get(n).copied()
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn n_max(&self) -> usize {
        self.counts.len() - 1
    }
}

/// Restrictions on the words being counted.
#[derive(Debug, Clone, Copy, Default)]
struct Filter<'a> {
    prefix: &'a [u8],
    /// `(s, t)`: the first `s` symbols have weight exactly `t`.
    prefix_weight: Option<(usize, usize)>,
}

/// Runs the transfer computation up to length `n`, returning the count after
/// every step (`out[k]` counts words of length `k`).
fn transfer(p: &ConstraintParams, n: usize, filter: Filter<'_>) -> Result<Vec<u64>> {
    let ell = p.ell();
    let state_bits = ell - 1;
    let states = 1usize << state_bits;
    let mask = states - 1;
    let (s, t) = filter.prefix_weight.unwrap_or((0, 0));
    // Weight layers are only tracked while inside the first `s` symbols.
    let mut layers = s + 1;
    let mut dp = vec![0u64; layers * states];
    dp[0] = 1;
    let mut totals = Vec::with_capacity(n + 1);
    totals.push(if s == 0 { 1 } else { 0 });

    for pos in 1..=n {
        let forced = filter.prefix.get(pos - 1).copied();
        let mut next = vec![0u64; layers * states];
        for layer in 0..layers {
            for state in 0..states {
                let c = dp[layer * states + state];
                if c == 0 {
                    continue;
                }
                for bit in 0..2u8 {
                    if forced.is_some_and(|f| f != bit) {
                        continue;
                    }
                    if pos >= ell && !p.admits(state.count_ones() as usize + bit as usize) {
                        continue;
                    }
                    let new_layer = if pos <= s {
                        layer + bit as usize
                    } else {
                        layer
                    };
                    if new_layer >= layers {
                        continue;
                    }
                    let new_state = (state << 1 | bit as usize) & mask;
                    let slot = &mut next[new_layer * states + new_state];
                    *slot = slot.checked_add(c).ok_or(Error::Overflow { n: pos })?;
                }
            }
        }
        if pos == s {
            // Keep only weight `t`, then stop tracking weight.
            let keep = next[t * states..(t + 1) * states].to_vec();
            next = keep;
            layers = 1;
        }
        dp = next;
        let total = if pos < s {
            0
        } else {
            dp.iter()
                .try_fold(0u64, |acc, &c| acc.checked_add(c))
                .ok_or(Error::Overflow { n: pos })?
        };
        totals.push(total);
    }
    Ok(totals)
}

/// `f_n`: number of `(ell, delta)`-locally balanced words of length `n`.
pub fn count_lb(p: &ConstraintParams, n: usize) -> Result<u64> {
    Ok(*transfer(p, n, Filter::default())?.last().expect("nonempty"))
}

/// `f_0..=f_{n_max}` in one pass.
pub fn count_sequence(p: &ConstraintParams, n_max: usize) -> Result<CountSequence> {
    Ok(CountSequence {
        params: *p,
        counts: transfer(p, n_max, Filter::default())?,
    })
}

/// Balanced words of length `n` starting with `z`; zero when `z` is longer than `n`.
pub fn count_with_prefix(p: &ConstraintParams, n: usize, z: &Word) -> Result<u64> {
    if z.len() > n {
        return Ok(0);
    }
    let filter = Filter {
        prefix: z.bits(),
        prefix_weight: None,
    };
    Ok(*transfer(p, n, filter)?.last().expect("nonempty"))
}

/// Balanced words of length `n` whose first `s` symbols have weight `t`.
pub fn count_with_prefix_weight(p: &ConstraintParams, n: usize, s: usize, t: usize) -> Result<u64> {
    if t > s || s > n {
        return Err(Error::Params(format!(
            "need t <= s <= n, got t = {t}, s = {s}, n = {n}"
        )));
    }
    let filter = Filter {
        prefix: &[],
        prefix_weight: Some((s, t)),
    };
    Ok(*transfer(p, n, filter)?.last().expect("nonempty"))
}

fn brute_force(
    p: &ConstraintParams,
    n: usize,
    prefix: &Word,
    keep: impl Fn(&Word) -> bool + Sync,
) -> Result<u64> {
    if prefix.len() > n {
        return Ok(0);
    }
    let free = n - prefix.len();
    if free > BRUTE_FORCE_MAX_FREE_BITS {
        return Err(Error::Params(format!(
            "exhaustive count over {free} free symbols exceeds the cap of {BRUTE_FORCE_MAX_FREE_BITS}"
        )));
    }
    Ok((0..1u64 << free)
        .into_par_iter()
        .filter(|&tail| {
            let w = prefix.concat(&Word::from_u64(tail, free));
            keep(&w) && is_locally_balanced(&w, p)
        })
        .count() as u64)
}

/// Exhaustive count using the word predicate directly. `n` is capped at 24.
pub fn count_lb_bruteforce(p: &ConstraintParams, n: usize) -> Result<u64> {
    brute_force(p, n, &Word::new(), |_| true)
}

/// Exhaustive prefix-conditioned count; at most 24 symbols may be free.
pub fn count_with_prefix_bruteforce(p: &ConstraintParams, n: usize, z: &Word) -> Result<u64> {
    brute_force(p, n, z, |_| true)
}

/// Exhaustive prefix-weight count; `n` is capped at 24.
pub fn count_with_prefix_weight_bruteforce(
    p: &ConstraintParams,
    n: usize,
    s: usize,
    t: usize,
) -> Result<u64> {
    if t > s || s > n {
        return Err(Error::Params(format!(
            "need t <= s <= n, got t = {t}, s = {s}, n = {n}"
        )));
    }
    brute_force(p, n, &Word::new(), |w| {
        w.bits()[..s].iter().filter(|&&b| b == 1).count() == t
    })
}

/// `f_{n+1} / f_n`.
pub fn growth_estimate(p: &ConstraintParams, n: usize) -> Result<f64> {
    if n < p.ell() {
        return Err(Error::Params(format!(
            "n = {n} is below the window length {}",
            p.ell()
        )));
    }
    let seq = count_sequence(p, n + 1)?;
    Ok(seq.counts[n + 1] as f64 / seq.counts[n] as f64)
}

/// Where the counts for an identity check come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountMethod {
    Transfer,
    BruteForce,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub identity: String,
    pub n: usize,
    pub lhs: i128,
    pub rhs: i128,
    pub pass: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Report {
    pub checks: Vec<IdentityCheck>,
}

impl Report {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &IdentityCheck> {
        self.checks.iter().filter(|c| !c.pass)
    }

    /// JSON list of `{identity, n, lhs, rhs, pass}` objects.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.checks).expect("plain data serializes")
    }

    fn push(&mut self, identity: &str, n: usize, lhs: i128, rhs: i128) {
        self.checks.push(IdentityCheck {
            identity: identity.to_string(),
            n,
            lhs,
            rhs,
            pass: lhs == rhs,
        });
    }
}

pub const RECURRENCE: &str =
    "f(n+12) = f(n+11) + f(n+10) + f(n+9) - f(n+6) - f(n+4) - f(n+3) + f(n)";

/// Checks the order-12 recurrence on a precomputed count table for every
/// `n` in `n_range` (needs `counts.len() > n + 12`).
pub fn recurrence_report(counts: &[u64], n_range: std::ops::RangeInclusive<usize>) -> Report {
    let f = |k: usize| counts[k] as i128;
    let mut report = Report::default();
    for n in n_range {
        let rhs = f(n + 11) + f(n + 10) + f(n + 9) - f(n + 6) - f(n + 4) - f(n + 3) + f(n);
        report.push(RECURRENCE, n, f(n + 12), rhs);
    }
    report
}

/// Checks the `(6,1)` recurrence for `1 <= n <= n_max`, i.e. on `f_1..=f_{n_max+12}`.
pub fn verify_recurrence(n_max: usize) -> Result<Report> {
    verify_recurrence_from(1, n_max)
}

pub fn verify_recurrence_from(n_min: usize, n_max: usize) -> Result<Report> {
    let p = ConstraintParams::new(6, 1)?;
    let seq = count_sequence(&p, n_max + 12)?;
    Ok(recurrence_report(seq.counts(), n_min..=n_max))
}

/// Memoizing `(6,1)` counter backing the identity checks.
struct Counter {
    params: ConstraintParams,
    method: CountMethod,
    by_prefix: HashMap<(usize, Word), u64>,
    by_weight: HashMap<(usize, usize, usize), u64>,
}

impl Counter {
    fn new(method: CountMethod) -> Result<Self> {
        Ok(Counter {
            params: ConstraintParams::new(6, 1)?,
            method,
            by_prefix: HashMap::new(),
            by_weight: HashMap::new(),
        })
    }

    fn f(&mut self, n: usize) -> Result<i128> {
        self.fz(n, "")
    }

    fn fz(&mut self, n: usize, z: &str) -> Result<i128> {
        let z: Word = z.parse()?;
        if let Some(&c) = self.by_prefix.get(&(n, z.clone())) {
            return Ok(c as i128);
        }
        let c = match self.method {
            CountMethod::Transfer => count_with_prefix(&self.params, n, &z)?,
            CountMethod::BruteForce => count_with_prefix_bruteforce(&self.params, n, &z)?,
        };
        self.by_prefix.insert((n, z), c);
        Ok(c as i128)
    }

    fn fst(&mut self, n: usize, s: usize, t: usize) -> Result<i128> {
        if let Some(&c) = self.by_weight.get(&(n, s, t)) {
            return Ok(c as i128);
        }
        let c = match self.method {
            CountMethod::Transfer => count_with_prefix_weight(&self.params, n, s, t)?,
            // Sum over prefixes so the free part stays within the exhaustive cap.
            CountMethod::BruteForce => {
                let mut total = 0;
                for z in 0..1u64 << s {
                    if z.count_ones() as usize == t {
                        total +=
                            count_with_prefix_bruteforce(&self.params, n, &Word::from_u64(z, s))?;
                    }
                }
                total
            }
        };
        self.by_weight.insert((n, s, t), c);
        Ok(c as i128)
    }
}

type Side = fn(&mut Counter, usize) -> Result<i128>;

/// `(name, smallest n for which every term is defined, lhs, rhs)`.
fn prefix_identities() -> Vec<(&'static str, usize, Side, Side)> {
    vec![
        (
            "f(n) = f(n+3; 000) + f(n+3; 111)",
            1,
            |c, n| c.f(n),
            |c, n| Ok(c.fz(n + 3, "000")? + c.fz(n + 3, "111")?),
        ),
        (
            "f(n) = f(n+4; 1000) + f(n+4; 0111)",
            1,
            |c, n| c.f(n),
            |c, n| Ok(c.fz(n + 4, "1000")? + c.fz(n + 4, "0111")?),
        ),
        (
            "f(n) = f(n; 3,0) + f(n; 3,1) + f(n; 3,2) + f(n; 3,3)",
            3,
            |c, n| c.f(n),
            |c, n| Ok(c.fst(n, 3, 0)? + c.fst(n, 3, 1)? + c.fst(n, 3, 2)? + c.fst(n, 3, 3)?),
        ),
        (
            "f(n+3; 111) = f(n; 3,0) + f(n; 3,1)",
            3,
            |c, n| c.fz(n + 3, "111"),
            |c, n| Ok(c.fst(n, 3, 0)? + c.fst(n, 3, 1)?),
        ),
        (
            "f(n+3; 000) = f(n; 3,2) + f(n; 3,3)",
            3,
            |c, n| c.fz(n + 3, "000"),
            |c, n| Ok(c.fst(n, 3, 2)? + c.fst(n, 3, 3)?),
        ),
        (
            "f(n+2; 110) = f(n; 0) - f(n; 0111)",
            1,
            |c, n| c.fz(n + 2, "110"),
            |c, n| Ok(c.fz(n, "0")? - c.fz(n, "0111")?),
        ),
        (
            "f(n+2; 001) = f(n; 1) - f(n; 1000)",
            1,
            |c, n| c.fz(n + 2, "001"),
            |c, n| Ok(c.fz(n, "1")? - c.fz(n, "1000")?),
        ),
        (
            "f(n+4; 0000) = f(n; 11)",
            1,
            |c, n| c.fz(n + 4, "0000"),
            |c, n| c.fz(n, "11"),
        ),
        (
            "f(n+4; 1111) = f(n; 00)",
            1,
            |c, n| c.fz(n + 4, "1111"),
            |c, n| c.fz(n, "00"),
        ),
        (
            "f(n+3) - f(n+2) - f(n+1) - f(n) = -f(n+1; 0000) - f(n+1; 1111) - f(n; 000) - f(n; 111)",
            1,
            |c, n| Ok(c.f(n + 3)? - c.f(n + 2)? - c.f(n + 1)? - c.f(n)?),
            |c, n| {
                Ok(-c.fz(n + 1, "0000")? - c.fz(n + 1, "1111")? - c.fz(n, "000")? - c.fz(n, "111")?)
            },
        ),
        (
            "f(n+3) - f(n+2) = f(n+2; 5,2) + f(n+2; 5,3)",
            3,
            |c, n| Ok(c.f(n + 3)? - c.f(n + 2)?),
            |c, n| Ok(c.fst(n + 2, 5, 2)? + c.fst(n + 2, 5, 3)?),
        ),
        (
            "f(n+2; 5,2) = f(n+1; 4,1) + f(n+1; 4,2)",
            3,
            |c, n| c.fst(n + 2, 5, 2),
            |c, n| Ok(c.fst(n + 1, 4, 1)? + c.fst(n + 1, 4, 2)?),
        ),
        (
            "f(n+2; 5,3) = f(n+1; 4,3) + f(n+1; 4,2)",
            3,
            |c, n| c.fst(n + 2, 5, 3),
            |c, n| Ok(c.fst(n + 1, 4, 3)? + c.fst(n + 1, 4, 2)?),
        ),
        (
            "f(n+1; 4,2) = f(n; 3,1) + f(n; 3,2)",
            3,
            |c, n| c.fst(n + 1, 4, 2),
            |c, n| Ok(c.fst(n, 3, 1)? + c.fst(n, 3, 2)?),
        ),
        // The chain that combines the identities above into the recurrence.
        (
            "f(n+4; 0111) + f(n+4; 1000) = f(n)",
            1,
            |c, n| Ok(c.fz(n + 4, "0111")? + c.fz(n + 4, "1000")?),
            |c, n| c.f(n),
        ),
        (
            "f(n+6; 110) + f(n+6; 001) = f(n+4) - f(n)",
            1,
            |c, n| Ok(c.fz(n + 6, "110")? + c.fz(n + 6, "001")?),
            |c, n| Ok(c.f(n + 4)? - c.f(n)?),
        ),
        (
            "f(n+6; 110) + f(n+6; 001) + f(n+6; 111) + f(n+6; 000) = f(n+4) + f(n+3) - f(n)",
            1,
            |c, n| {
                Ok(c.fz(n + 6, "110")? + c.fz(n + 6, "001")? + c.fz(n + 6, "111")? + c.fz(n + 6, "000")?)
            },
            |c, n| Ok(c.f(n + 4)? + c.f(n + 3)? - c.f(n)?),
        ),
        (
            "f(n+9; 000) + f(n+9; 111) = f(n+6; 01) + f(n+6; 10) + f(n+4) + f(n+3) - f(n)",
            1,
            |c, n| Ok(c.fz(n + 9, "000")? + c.fz(n + 9, "111")?),
            |c, n| Ok(c.fz(n + 6, "01")? + c.fz(n + 6, "10")? + c.f(n + 4)? + c.f(n + 3)? - c.f(n)?),
        ),
        (
            "f(n+10; 0000) + f(n+10; 1111) + f(n+9; 000) + f(n+9; 111) = f(n+6) + f(n+4) + f(n+3) - f(n)",
            1,
            |c, n| {
                Ok(c.fz(n + 10, "0000")? + c.fz(n + 10, "1111")? + c.fz(n + 9, "000")? + c.fz(n + 9, "111")?)
            },
            |c, n| Ok(c.f(n + 6)? + c.f(n + 4)? + c.f(n + 3)? - c.f(n)?),
        ),
    ]
}

/// Checks every prefix identity used to derive the `(6,1)` recurrence for
/// `1 <= n <= n_max`. Identities involving `f(n; s,t)` start at the first
/// `n` where `s <= n`.
pub fn verify_lemmas(n_max: usize, method: CountMethod) -> Result<Report> {
    verify_lemmas_from(1, n_max, method)
}

pub fn verify_lemmas_from(n_min: usize, n_max: usize, method: CountMethod) -> Result<Report> {
    let mut counter = Counter::new(method)?;
    let mut report = Report::default();
    for (name, first_n, lhs, rhs) in prefix_identities() {
        for n in n_min.max(first_n)..=n_max {
            let l = lhs(&mut counter, n)?;
            let r = rhs(&mut counter, n)?;
            report.push(name, n, l, r);
        }
    }
    Ok(report)
}
