//! Binary words and the locally balanced constraint predicates.
//!
//! Positions are 1-based in the public API (`window(w, 1, ell)` is the first
//! window), matching the usual `x_1..x_n` indexing of constrained-coding
//! texts. Every codec in this crate is tested against the predicates here.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A finite binary word. Each stored symbol is 0 or 1.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    bits: Vec<u8>,
}

impl Word {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a word from symbols, rejecting anything other than 0 and 1.
    pub fn from_bits<I: IntoIterator<Item = u8>>(bits: I) -> Result<Self> {
        let bits: Vec<u8> = bits.into_iter().collect();
        if let Some(pos) = bits.iter().position(|&b| b > 1) {
            return Err(Error::Params(format!(
                "symbol {} at position {} is not binary",
                bits[pos],
                pos + 1
            )));
        }
        Ok(Self { bits })
    }

    pub fn zeros(len: usize) -> Self {
        Self { bits: vec![0; len] }
    }

    /// The `len` low bits of `value`, most significant first, so that the
    /// numeric order of values equals the lexicographic order of words.
    pub fn from_u64(value: u64, len: usize) -> Self {
        assert!(len <= 64, "word of length {len} does not fit in u64");
        let bits = (0..len).rev().map(|k| ((value >> k) & 1) as u8).collect();
        Self { bits }
    }

    /// Inverse of [`Word::from_u64`]; `None` for words longer than 64.
    pub fn to_u64(&self) -> Option<u64> {
        if self.bits.len() > 64 {
            return None;
        }
        Some(self.bits.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64))
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn into_bits(self) -> Vec<u8> {
        self.bits
    }

    /// Symbol at 1-based position `i`.
    pub fn bit(&self, i: usize) -> Option<u8> {
        i.checked_sub(1).and_then(|k| self.bits.get(k).copied())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut bits = Vec::with_capacity(self.len() + other.len());
        bits.extend_from_slice(&self.bits);
        bits.extend_from_slice(&other.bits);
        Word { bits }
    }

    /// Splits into consecutive chunks of `size` symbols; the last chunk may be short.
    pub fn chunks(&self, size: usize) -> impl Iterator<Item = Word> + '_ {
        self.bits.chunks(size).map(|c| Word { bits: c.to_vec() })
    }
}

impl FromIterator<u8> for Word {
    /// Collects symbols, panicking on a non-binary one. Prefer
    /// [`Word::from_bits`] for untrusted input.
    fn from_iter<I: IntoIterator<Item = u8>>(iter: I) -> Self {
        Word::from_bits(iter).expect("non-binary symbol")
    }
}

impl FromStr for Word {
    type Err = Error;

    /// Parses `0`/`1` characters. Spaces, `-` and `_` are accepted as
    /// visual separators, so `"011-001-100"` parses.
    fn from_str(s: &str) -> Result<Self> {
        let mut bits = Vec::with_capacity(s.len());
        for c in s.chars() {
            match c {
                '0' => bits.push(0),
                '1' => bits.push(1),
                ' ' | '-' | '_' => {}
                other => {
                    return Err(Error::Params(format!(
                        "unexpected character {other:?} in word"
                    )))
                }
            }
        }
        Ok(Word { bits })
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

/// Window length `ell` (even, at least 2) and imbalance bound `delta` (at least 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ConstraintParams {
    ell: usize,
    delta: usize,
}

impl ConstraintParams {
    pub fn new(ell: usize, delta: usize) -> Result<Self> {
        if ell < 2 || !ell.is_multiple_of(2) {
            return Err(Error::Params(format!(
                "window length {ell} must be even and at least 2"
            )));
        }
        if delta < 1 {
            return Err(Error::Params("delta must be at least 1".into()));
        }
        Ok(Self { ell, delta })
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn delta(&self) -> usize {
        self.delta
    }

    /// Smallest admissible window weight, `ell/2 - delta` clamped at 0.
    pub fn min_weight(&self) -> usize {
        (self.ell / 2).saturating_sub(self.delta)
    }

    pub fn max_weight(&self) -> usize {
        self.ell / 2 + self.delta
    }

    pub fn admits(&self, window_weight: usize) -> bool {
        (self.min_weight()..=self.max_weight()).contains(&window_weight)
    }
}

impl fmt::Display for ConstraintParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.ell, self.delta)
    }
}

/// Running digital sum `s_0..s_n` of a word: `s_0 = 0`, and each 1 steps
/// up by one while each 0 steps down by one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RdsSequence {
    values: Vec<i64>,
}

impl RdsSequence {
    pub fn values(&self) -> &[i64] {
        &self.values
    }

    /// Length of the originating word.
    pub fn n(&self) -> usize {
        self.values.len() - 1
    }

    /// `s_i` for `0 <= i <= n`.
    pub fn get(&self, i: usize) -> Option<i64> {
        self.values.get(i).copied()
    }

    pub fn last(&self) -> i64 {
        *self.values.last().expect("RDS always holds s_0")
    }

    pub fn max(&self) -> i64 {
        *self.values.iter().max().expect("RDS always holds s_0")
    }

    pub fn min(&self) -> i64 {
        *self.values.iter().min().expect("RDS always holds s_0")
    }
}

pub fn weight(w: &Word) -> usize {
    w.bits.iter().filter(|&&b| b == 1).count()
}

/// The `ell` symbols starting at 1-based position `i`.
pub fn window(w: &Word, i: usize, ell: usize) -> Result<Word> {
    if i == 0 || ell == 0 || i - 1 + ell > w.len() {
        return Err(Error::Range(format!(
            "window({i}, {ell}) does not fit in a word of length {}",
            w.len()
        )));
    }
    Ok(Word {
        bits: w.bits[i - 1..i - 1 + ell].to_vec(),
    })
}

pub fn rds(w: &Word) -> RdsSequence {
    let mut values = Vec::with_capacity(w.len() + 1);
    let mut s = 0i64;
    values.push(s);
    for &b in &w.bits {
        s += if b == 1 { 1 } else { -1 };
        values.push(s);
    }
    RdsSequence { values }
}

/// Spread of the running digital sum, `max(s) - min(s)`.
pub fn dis(w: &Word) -> usize {
    let r = rds(w);
    (r.max() - r.min()) as usize
}

fn prefix_weights(w: &Word) -> Vec<usize> {
    let mut acc = Vec::with_capacity(w.len() + 1);
    let mut total = 0;
    acc.push(0);
    for &b in &w.bits {
        total += b as usize;
        acc.push(total);
    }
    acc
}

fn windows_admissible(prefix: &[usize], ell: usize, p: &ConstraintParams) -> bool {
    let n = prefix.len() - 1;
    let lo = (ell / 2).saturating_sub(p.delta);
    let hi = ell / 2 + p.delta;
    n < ell || (0..=n - ell).all(|i| (lo..=hi).contains(&(prefix[i + ell] - prefix[i])))
}

/// Every length-`ell` window has weight within `delta` of `ell/2`.
/// Words shorter than `ell` are vacuously balanced.
pub fn is_locally_balanced(w: &Word, p: &ConstraintParams) -> bool {
    windows_admissible(&prefix_weights(w), p.ell, p)
}

/// Locally balanced for every even window length from `ell` up to the word
/// length. Checks each window length directly (quadratic), without going
/// through the running-digital-sum bound.
pub fn is_strongly_locally_balanced(w: &Word, p: &ConstraintParams) -> bool {
    let prefix = prefix_weights(w);
    (p.ell..=w.len())
        .step_by(2)
        .all(|ell| windows_admissible(&prefix, ell, p))
}

pub fn complement(w: &Word) -> Word {
    Word {
        bits: w.bits.iter().map(|&b| b ^ 1).collect(),
    }
}

/// Bit-parallel balance check for a word packed as in [`Word::from_u64`].
pub(crate) fn is_locally_balanced_u64(value: u64, len: usize, p: &ConstraintParams) -> bool {
    let ell = p.ell;
    if len < ell {
        return true;
    }
    let mask = if ell == 64 {
        u64::MAX
    } else {
        (1u64 << ell) - 1
    };
    let (lo, hi) = (p.min_weight() as u32, p.max_weight() as u32);
    (0..=len - ell).all(|shift| {
        let wt = ((value >> shift) & mask).count_ones();
        lo <= wt && wt <= hi
    })
}
