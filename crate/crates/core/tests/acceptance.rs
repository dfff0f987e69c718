//! Acceptance run: every target checked at its stated tolerance, one
//! PASS/FAIL line each.
//!
//! Three targets are known to disagree with exact computation (see the
//! README). They are still evaluated as stated and reported as FAIL; the run
//! only exits nonzero if some other target fails or one of these starts
//! passing.

use std::process::ExitCode;
use std::time::Instant;

use locbal::capacity::{capacity_lb, capacity_rds};
use locbal::dyck::{self, count_bounded_paths, fib, min_block_length};
use locbal::enumeration::{
    count_lb_bruteforce, count_sequence, growth_estimate, verify_lemmas, verify_recurrence,
    CountMethod,
};
use locbal::fsm::{decode_fsm, default_table, encode_fsm};
use locbal::graph::{build_codebook, build_graph, find_max_subgraph};
use locbal::words::{dis, is_locally_balanced, is_strongly_locally_balanced, rds};
use locbal::{ConstraintParams, Word};
use rand::{Rng, SeedableRng};

type Outcome = Result<String, String>;

/// Name, check, and whether the check is known to fail.
type Target = (&'static str, fn() -> Outcome, bool);

fn params(ell: usize, delta: usize) -> ConstraintParams {
    ConstraintParams::new(ell, delta).expect("valid parameters")
}

fn capacity_table() -> Outcome {
    let expected = [
        (1, [0.879, 0.841, 0.824, 0.815, 0.811, 0.807]),
        (2, [1.0, 0.975, 0.958, 0.947, 0.939, 0.933]),
    ];
    let mut misses = Vec::new();
    for (delta, row) in expected {
        for (ell, target) in (4..=14).step_by(2).zip(row) {
            let c = capacity_lb(&params(ell, delta)).map_err(|e| e.to_string())?;
            let rounded = (c * 1000.0).round() / 1000.0;
            if (rounded - target).abs() > 0.0005 + 1e-12 {
                misses.push(format!(
                    "({ell},{delta}) = {c:.6} rounds to {rounded:.3}, expected {target:.3}"
                ));
            }
        }
    }
    if misses.is_empty() {
        Ok("12 of 12 values within 0.0005".into())
    } else {
        Err(misses.join("; "))
    }
}

fn rds_capacity() -> Outcome {
    let c = capacity_rds(3).map_err(|e| e.to_string())?;
    if (c - 0.694).abs() <= 0.001 {
        Ok(format!("C_RDS(3) = {c:.6}"))
    } else {
        Err(format!("C_RDS(3) = {c:.6}"))
    }
}

fn block_length_table() -> Outcome {
    let table = [
        (2, 4),
        (3, 5),
        (4, 7),
        (5, 8),
        (6, 10),
        (7, 11),
        (8, 13),
        (9, 14),
        (10, 16),
        (11, 17),
        (12, 18),
        (13, 20),
        (14, 21),
        (15, 23),
    ];
    for (s, m) in table {
        let got = min_block_length(s).map_err(|e| e.to_string())?;
        if got != m {
            return Err(format!("s = {s}: m = {got}, expected {m}"));
        }
    }
    for m in 1..=20usize {
        for start in -1..=2i64 {
            let enumerated = (0..1u64 << m)
                .filter(|&v| {
                    rds(&Word::from_u64(v, m))
                        .values()
                        .iter()
                        .all(|r| (-1..=2).contains(&(r + start)))
                })
                .count() as u64;
            let counted = count_bounded_paths(start, m).map_err(|e| e.to_string())?;
            let closed = fib(if start == -1 || start == 2 {
                m + 1
            } else {
                m + 2
            })
            .map_err(|e| e.to_string())?;
            if enumerated != counted || counted != closed {
                return Err(format!(
                    "m = {m}, start {start}: {enumerated} / {counted} / {closed}"
                ));
            }
        }
    }
    Ok("14 block lengths exact; path counts match enumeration for m <= 20".into())
}

fn fsm_example() -> Outcome {
    let t = default_table();
    let msg: Word = "10011101".parse().expect("literal");
    let code = encode_fsm(&msg, &t).map_err(|e| e.to_string())?;
    let back = decode_fsm(&code, &t).map_err(|e| e.to_string())?;
    if code.to_string() == "0110011001100" && back == msg {
        Ok(format!("{msg} -> {code} -> {back}"))
    } else {
        Err(format!("{msg} -> {code} -> {back}"))
    }
}

fn roundtrips() -> Outcome {
    const TRIALS: usize = 10_000;
    let mut rng = rand::rngs::StdRng::seed_from_u64(2024);
    let p41 = params(4, 1);
    let random_msg = |rng: &mut rand::rngs::StdRng, unit: usize| -> Word {
        let blocks = rng.gen_range(0..=16);
        (0..blocks * unit).map(|_| rng.gen_range(0..=1u8)).collect()
    };

    let dyck_cb = dyck::build_codebook(8).map_err(|e| e.to_string())?;
    let table = default_table();
    let g = build_graph(p41, 13).map_err(|e| e.to_string())?;
    let sub = find_max_subgraph(&g).ok_or("no subgraph for (4,1), m = 13")?;
    let graph_cb = build_codebook(&g, &sub).map_err(|e| e.to_string())?;

    for i in 0..TRIALS {
        let msg = random_msg(&mut rng, 8);
        let code = dyck_cb.encode(&msg).map_err(|e| e.to_string())?;
        if !is_strongly_locally_balanced(&code, &p41) || dyck_cb.decode(&code).ok() != Some(msg) {
            return Err(format!("dyck trial {i}"));
        }
        let msg = random_msg(&mut rng, 2);
        let code = encode_fsm(&msg, &table).map_err(|e| e.to_string())?;
        if !is_strongly_locally_balanced(&code, &p41) || decode_fsm(&code, &table).ok() != Some(msg)
        {
            return Err(format!("fsm trial {i}"));
        }
        let msg = random_msg(&mut rng, graph_cb.s());
        let code = graph_cb.encode(&msg).map_err(|e| e.to_string())?;
        if !is_locally_balanced(&code, &p41) || graph_cb.decode(&code).ok() != Some(msg) {
            return Err(format!("graph trial {i}"));
        }
    }
    Ok(format!(
        "{TRIALS} roundtrips each for dyck (s = 8), fsm and graph (4,1) m = 13"
    ))
}

fn rate_table() -> Outcome {
    let gating = [(4, 1, 13, 11), (6, 1, 15, 12), (4, 2, 4, 4)];
    let mut found = Vec::new();
    for (ell, delta, m, s) in gating {
        let g = build_graph(params(ell, delta), m).map_err(|e| e.to_string())?;
        let got = find_max_subgraph(&g).map(|x| x.s);
        if got != Some(s) {
            return Err(format!(
                "({ell},{delta}) m = {m}: s = {got:?}, expected {s}"
            ));
        }
        found.push(format!("({ell},{delta}) {s}/{m}"));
    }
    for m in 3..=8 {
        let g = build_graph(params(4, 2), m).map_err(|e| e.to_string())?;
        if find_max_subgraph(&g).map(|x| x.s) != Some(m) {
            return Err(format!("(4,2) m = {m} is not rate 1"));
        }
    }
    Ok(found.join(", "))
}

/// Remaining rate table entries; reported, not gating.
fn rate_table_rest() {
    let rest = [
        (8, 1, 13, 10),
        (10, 1, 15, 11),
        (12, 1, 15, 11),
        (14, 1, 15, 11),
        (6, 2, 15, 14),
        (8, 2, 14, 13),
        (10, 2, 9, 8),
        (12, 2, 14, 12),
        (14, 2, 14, 12),
    ];
    for (ell, delta, m, s) in rest {
        let start = Instant::now();
        let got = build_graph(params(ell, delta), m)
            .ok()
            .and_then(|g| find_max_subgraph(&g))
            .map(|x| x.s);
        let mark = if got == Some(s) { "match" } else { "differ" };
        println!(
            "      info  ({ell},{delta}) m = {m}: s = {got:?}, table {s}/{m} [{mark}, {:.2?}]",
            start.elapsed()
        );
    }
}

fn transfer_vs_brute_force() -> Outcome {
    let p = params(6, 1);
    let seq = count_sequence(&p, 18).map_err(|e| e.to_string())?;
    for n in 0..=18 {
        let brute = count_lb_bruteforce(&p, n).map_err(|e| e.to_string())?;
        if seq.get(n) != Some(brute) {
            return Err(format!(
                "n = {n}: transfer {:?}, brute force {brute}",
                seq.get(n)
            ));
        }
    }
    Ok(String::new())
}

fn recurrence() -> Outcome {
    transfer_vs_brute_force()?;
    let report = verify_recurrence(28).map_err(|e| e.to_string())?;
    let failures: Vec<String> = report
        .failures()
        .map(|c| format!("n = {}: {} vs {}", c.n, c.lhs, c.rhs))
        .collect();
    if failures.is_empty() {
        Ok(format!(
            "{} values of n exact; counts match brute force for n <= 18",
            report.checks.len()
        ))
    } else {
        Err(format!("recurrence breaks at {}", failures.join(", ")))
    }
}

fn growth() -> Outcome {
    let p = params(6, 1);
    let ratio = growth_estimate(&p, 40).map_err(|e| e.to_string())?;
    let c = capacity_lb(&p).map_err(|e| e.to_string())?;
    let detail = format!(
        "f41/f40 = {ratio:.6}, log2 = {:.6}, C(6,1) = {c:.6}",
        ratio.log2()
    );
    if (1.790..=1.792).contains(&ratio) && (ratio.log2() - c).abs() < 0.001 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn identities() -> Outcome {
    let report = verify_lemmas(16, CountMethod::BruteForce).map_err(|e| e.to_string())?;
    let mut bad: Vec<usize> = report.failures().map(|c| c.n).collect();
    bad.sort_unstable();
    bad.dedup();
    if bad.is_empty() {
        Ok(format!("{} checks exact", report.checks.len()))
    } else {
        Err(format!(
            "{} of {} checks fail, at n in {bad:?}",
            report.failures().count(),
            report.checks.len()
        ))
    }
}

fn equivalence() -> Outcome {
    let p = params(4, 1);
    let mut words = 0u64;
    for n in 0..=16 {
        for v in 0..1u64 << n {
            let w = Word::from_u64(v, n);
            if is_strongly_locally_balanced(&w, &p) != (dis(&w) <= 3) {
                return Err(format!("{w}"));
            }
            words += 1;
        }
    }
    Ok(format!("{words} words"))
}

fn main() -> ExitCode {
    let checks: [Target; 10] = [
        (
            "capacity table, 12 values within 0.0005",
            capacity_table,
            true,
        ),
        ("bounded RDS capacity for spread 3", rds_capacity, false),
        (
            "bounded path block lengths and path counts",
            block_length_table,
            false,
        ),
        ("six-state code worked example", fsm_example, false),
        (
            "random roundtrips with constraint oracle",
            roundtrips,
            false,
        ),
        ("graph search rates", rate_table, false),
        ("order-12 recurrence for 1 <= n <= 28", recurrence, true),
        ("growth ratio f41/f40 against capacity", growth, false),
        (
            "prefix identities for 1 <= n <= 16 by brute force",
            identities,
            true,
        ),
        (
            "strong (4,1) balance iff RDS spread <= 3, n <= 16",
            equivalence,
            false,
        ),
    ];

    let mut unexpected = 0;
    for (name, check, known_red) in checks {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        match &outcome {
            Ok(detail) => println!("PASS  {name}: {detail} [{elapsed:.2?}]"),
            Err(detail) => println!("FAIL  {name}: {detail} [{elapsed:.2?}]"),
        }
        if name == "graph search rates" {
            rate_table_rest();
        }
        if outcome.is_ok() == known_red {
            unexpected += 1;
            println!(
                "      ^ unexpected: this target was {} to fail",
                if known_red {
                    "expected"
                } else {
                    "not expected"
                }
            );
        }
    }
    if unexpected == 0 {
        println!("acceptance: outcomes as documented");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {unexpected} unexpected outcomes");
        ExitCode::FAILURE
    }
}
