//! Block code built from bounded Dyck paths.
//!
//! Every `s`-bit payload block becomes an `m`-bit block whose running
//! digital sum, continued from the current level, never leaves the band
//! `[-1, 2]`. A word whose RDS lives in a band of width 3 is strongly
//! (4,1)-locally balanced.
//!
//! Bit 1 is an up-step and bit 0 a down-step, so a block's path is exactly
//! the RDS of the block. Paths starting at the outer layers (2, or -1 by
//! symmetry) come from the boundary table; paths starting at the inner layers
//! (1, or 0 by symmetry) come from the interior table. Layers -1 and 0 reuse
//! the tables of layers 2 and 1 through complementation, which maps layer
//! `l` to `1 - l`.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::words::{complement, weight, Word};

pub const BAND_LOW: i64 = -1;
pub const BAND_HIGH: i64 = 2;

/// Largest payload block supported by [`build_codebook`]; the tables hold
/// `2^s` entries each.
pub const MAX_PAYLOAD_BITS: usize = 24;

/// Fibonacci numbers with `F_1 = F_2 = 1`.
pub fn fib(k: usize) -> Result<u64> {
    if k == 0 {
        return Err(Error::Params("Fibonacci index starts at 1".into()));
    }
    let (mut a, mut b) = (1u64, 1u64);
    for i in 3..=k {
        let next = a.checked_add(b).ok_or(Error::Overflow { n: i })?;
        a = b;
        b = next;
    }
    Ok(b)
}

fn check_layer(layer: i64) -> Result<()> {
    if (BAND_LOW..=BAND_HIGH).contains(&layer) {
        Ok(())
    } else {
        Err(Error::Params(format!(
            "layer {layer} is outside [{BAND_LOW}, {BAND_HIGH}]"
        )))
    }
}

/// Number of `m`-step paths from `start_layer` that stay inside `[-1, 2]`.
pub fn count_bounded_paths(start_layer: i64, m: usize) -> Result<u64> {
    check_layer(start_layer)?;
    const WIDTH: usize = (BAND_HIGH - BAND_LOW + 1) as usize;
    let mut ways = [0u64; WIDTH];
    ways[(start_layer - BAND_LOW) as usize] = 1;
    for step in 1..=m {
        let mut next = [0u64; WIDTH];
        for (i, &c) in ways.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if i > 0 {
                next[i - 1] = next[i - 1]
                    .checked_add(c)
                    .ok_or(Error::Overflow { n: step })?;
            }
            if i + 1 < WIDTH {
                next[i + 1] = next[i + 1]
                    .checked_add(c)
                    .ok_or(Error::Overflow { n: step })?;
            }
        }
        ways = next;
    }
    Ok(ways.iter().sum())
}

/// Smallest block length `m` with at least `2^s` bounded paths from every
/// starting layer. The outer layers have the fewest paths (`F_{m+1}` versus
/// `F_{m+2}`), so they alone decide.
pub fn min_block_length(s: usize) -> Result<usize> {
    if s == 0 || s >= 64 {
        return Err(Error::Params(format!(
            "payload block length {s} must be in 1..64"
        )));
    }
    let need = 1u64 << s;
    let mut m = 1;
    while fib(m + 1)? < need {
        m += 1;
    }
    Ok(m)
}

/// Lexicographically first `limit` bounded paths of length `m` from `start`.
fn first_paths(start: i64, m: usize, limit: usize) -> Vec<Word> {
    fn walk(level: i64, m: usize, limit: usize, path: &mut Vec<u8>, out: &mut Vec<Word>) {
        if out.len() == limit {
            return;
        }
        if path.len() == m {
            out.push(Word::from_bits(path.iter().copied()).expect("binary"));
            return;
        }
        // 0 (down) sorts before 1 (up).
        for (bit, next) in [(0u8, level - 1), (1u8, level + 1)] {
            if (BAND_LOW..=BAND_HIGH).contains(&next) {
                path.push(bit);
                walk(next, m, limit, path, out);
                path.pop();
            }
        }
    }
    let mut out = Vec::with_capacity(limit);
    walk(start, m, limit, &mut Vec::with_capacity(m), &mut out);
    out
}

/// The two lookup tables of the bounded-path code.
#[derive(Debug, Clone)]
pub struct DyckCodebook {
    s: usize,
    m: usize,
    boundary: Vec<Word>,
    interior: Vec<Word>,
    boundary_index: HashMap<Word, usize>,
    interior_index: HashMap<Word, usize>,
}

pub fn build_codebook(s: usize) -> Result<DyckCodebook> {
    if s == 0 || s > MAX_PAYLOAD_BITS {
        return Err(Error::Params(format!(
            "payload block length {s} must be in 1..={MAX_PAYLOAD_BITS}"
        )));
    }
    let m = min_block_length(s)?;
    let size = 1usize << s;
    let boundary = first_paths(BAND_HIGH, m, size);
    let interior = first_paths(1, m, size);
    debug_assert_eq!(boundary.len(), size);
    debug_assert_eq!(interior.len(), size);
    let index = |table: &[Word]| {
        table
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, w)| (w, i))
            .collect()
    };
    Ok(DyckCodebook {
        s,
        m,
        boundary_index: index(&boundary),
        interior_index: index(&interior),
        boundary,
        interior,
    })
}

impl DyckCodebook {
    /// Payload bits per block.
    pub fn s(&self) -> usize {
        self.s
    }

    /// Coded bits per block.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Paths valid from layer 2, in lexicographic order.
    pub fn boundary_table(&self) -> &[Word] {
        &self.boundary
    }

    /// Paths valid from layer 1, in lexicographic order.
    pub fn interior_table(&self) -> &[Word] {
        &self.interior
    }

    /// Encodes starting from RDS level 0.
    pub fn encode(&self, msg: &Word) -> Result<Word> {
        self.encode_from(msg, 0)
    }

    pub fn decode(&self, code: &Word) -> Result<Word> {
        self.decode_from(code, 0)
    }

    /// Encodes with the running level initialised to `start_level`.
    pub fn encode_from(&self, msg: &Word, start_level: i64) -> Result<Word> {
        check_layer(start_level)?;
        if !msg.len().is_multiple_of(self.s) {
            return Err(Error::Framing(format!(
                "message length {} is not a multiple of {}",
                msg.len(),
                self.s
            )));
        }
        let mut level = start_level;
        let mut out = Vec::with_capacity(msg.len() / self.s * self.m);
        for block in msg.bits().chunks(self.s) {
            let idx = block.iter().fold(0usize, |acc, &b| (acc << 1) | b as usize);
            let path = match level {
                2 => self.boundary[idx].clone(),
                1 => self.interior[idx].clone(),
                0 => complement(&self.interior[idx]),
                -1 => complement(&self.boundary[idx]),
                _ => unreachable!("level left the band"),
            };
            level += 2 * weight(&path) as i64 - self.m as i64;
            out.extend_from_slice(path.bits());
        }
        Ok(Word::from_bits(out).expect("binary"))
    }

    pub fn decode_from(&self, code: &Word, start_level: i64) -> Result<Word> {
        check_layer(start_level)?;
        if !code.len().is_multiple_of(self.m) {
            return Err(Error::Framing(format!(
                "codeword length {} is not a multiple of {}",
                code.len(),
                self.m
            )));
        }
        let mut level = start_level;
        let mut out = Vec::with_capacity(code.len() / self.m * self.s);
        for (k, block) in code.chunks(self.m).enumerate() {
            let found = match level {
                2 => self.boundary_index.get(&block),
                1 => self.interior_index.get(&block),
                0 => self.interior_index.get(&complement(&block)),
                -1 => self.boundary_index.get(&complement(&block)),
                _ => None,
            };
            let idx = *found.ok_or_else(|| {
                Error::Corruption(format!(
                    "block {} ({block}) is not a codeword at level {level}",
                    k + 1
                ))
            })?;
            out.extend((0..self.s).rev().map(|bit| ((idx >> bit) & 1) as u8));
            level += 2 * weight(&block) as i64 - self.m as i64;
        }
        Ok(Word::from_bits(out).expect("binary"))
    }
}

pub fn encode_dyck(msg: &Word, cb: &DyckCodebook) -> Result<Word> {
    cb.encode(msg)
}

pub fn decode_dyck(code: &Word, cb: &DyckCodebook) -> Result<Word> {
    cb.decode(code)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::rds;

    #[test]
    fn fibonacci() {
        assert_eq!(fib(1).unwrap(), 1);
        assert_eq!(fib(2).unwrap(), 1);
        assert_eq!(fib(6).unwrap(), 8);
        assert_eq!(fib(19).unwrap(), 4181);
        assert!(fib(93).is_ok());
        assert!(matches!(fib(94), Err(Error::Overflow { .. })));
        assert!(fib(0).is_err());
    }

    #[test]
    fn path_counts() {
        assert_eq!(count_bounded_paths(2, 5).unwrap(), 8);
        assert_eq!(count_bounded_paths(2, 1).unwrap(), 1);
        assert_eq!(count_bounded_paths(2, 2).unwrap(), 2);
        assert_eq!(count_bounded_paths(1, 3).unwrap(), 5);
        assert!(count_bounded_paths(3, 3).is_err());
    }

    #[test]
    fn block_lengths() {
        assert_eq!(min_block_length(1).unwrap(), 2);
        assert_eq!(min_block_length(3).unwrap(), 5);
        assert_eq!(min_block_length(12).unwrap(), 18);
        assert_eq!(min_block_length(15).unwrap(), 23);
    }

    #[test]
    fn small_codebooks() {
        let cb = build_codebook(1).unwrap();
        assert_eq!(cb.m(), 2);
        let words: Vec<String> = cb.boundary_table().iter().map(|w| w.to_string()).collect();
        assert_eq!(words, ["00", "01"]);
        let words: Vec<String> = cb.interior_table().iter().map(|w| w.to_string()).collect();
        assert_eq!(words, ["00", "01"]);

        let cb = build_codebook(3).unwrap();
        assert_eq!(
            (cb.m(), cb.boundary_table().len(), cb.interior_table().len()),
            (5, 8, 8)
        );
        let cb = build_codebook(2).unwrap();
        assert_eq!((cb.m(), cb.boundary_table().len()), (4, 4));
    }

    #[test]
    fn tables_stay_in_band_and_sorted() {
        for s in 1..=8 {
            let cb = build_codebook(s).unwrap();
            for (start, table) in [(2, cb.boundary_table()), (1, cb.interior_table())] {
                assert!(table.windows(2).all(|p| p[0] < p[1]));
                for w in table {
                    assert!(rds(w)
                        .values()
                        .iter()
                        .all(|v| (-1..=2).contains(&(v + start))));
                }
            }
        }
    }

    #[test]
    fn empty_and_framing() {
        let cb = build_codebook(3).unwrap();
        assert!(cb.encode(&Word::new()).unwrap().is_empty());
        assert!(cb.decode(&Word::new()).unwrap().is_empty());
        assert!(matches!(
            cb.encode(&"0101".parse().unwrap()),
            Err(Error::Framing(_))
        ));
        assert!(matches!(
            cb.decode(&"0101".parse().unwrap()),
            Err(Error::Framing(_))
        ));
    }

    #[test]
    fn corrupted_block_is_rejected() {
        let cb = build_codebook(3).unwrap();
        let err = cb.decode_from(&"11111".parse().unwrap(), 2).unwrap_err();
        assert!(matches!(err, Error::Corruption(_)));
        // Level 0 forbids a leading climb to 3 as well.
        assert!(cb.decode(&"11100".parse().unwrap()).is_err());
    }
}
