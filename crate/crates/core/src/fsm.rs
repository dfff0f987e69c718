//! Six-state transition code mapping `2k` message bits to `3k + 1` coded bits.
//!
//! States track the RDS level (−1, 0, 1 or 2) of the codeword so far. The
//! middle levels are split into a `+` and a `−` copy so that, for every
//! state, the 3-bit labels of incoming transitions are pairwise distinct.
//! That makes decoding a backward walk: the final state is recovered from the
//! RDS and the appended bit, and each label then names its predecessor.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::words::{rds, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FsmState {
    Minus1,
    ZeroPlus,
    ZeroMinus,
    OnePlus,
    OneMinus,
    Two,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
    None,
}

impl FsmState {
    pub const ALL: [FsmState; 6] = [
        FsmState::Minus1,
        FsmState::ZeroPlus,
        FsmState::ZeroMinus,
        FsmState::OnePlus,
        FsmState::OneMinus,
        FsmState::Two,
    ];

    pub fn level(self) -> i64 {
        match self {
            FsmState::Minus1 => -1,
            FsmState::ZeroPlus | FsmState::ZeroMinus => 0,
            FsmState::OnePlus | FsmState::OneMinus => 1,
            FsmState::Two => 2,
        }
    }

    pub fn sign(self) -> Sign {
        match self {
            FsmState::ZeroPlus | FsmState::OnePlus => Sign::Plus,
            FsmState::ZeroMinus | FsmState::OneMinus => Sign::Minus,
            FsmState::Minus1 | FsmState::Two => Sign::None,
        }
    }

    pub fn from_parts(level: i64, sign: Sign) -> Option<FsmState> {
        match (level, sign) {
            (-1, Sign::None) => Some(FsmState::Minus1),
            (0, Sign::Plus) => Some(FsmState::ZeroPlus),
            (0, Sign::Minus) => Some(FsmState::ZeroMinus),
            (1, Sign::Plus) => Some(FsmState::OnePlus),
            (1, Sign::Minus) => Some(FsmState::OneMinus),
            (2, Sign::None) => Some(FsmState::Two),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            FsmState::Minus1 => "-1",
            FsmState::ZeroPlus => "0+",
            FsmState::ZeroMinus => "0-",
            FsmState::OnePlus => "1+",
            FsmState::OneMinus => "1-",
            FsmState::Two => "2",
        }
    }
}

impl fmt::Display for FsmState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FsmState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        // Typeset tables use U+2212 for the minus sign.
        match s.trim().replace('\u{2212}', "-").as_str() {
            "-1" => Ok(FsmState::Minus1),
            "0+" => Ok(FsmState::ZeroPlus),
            "0-" => Ok(FsmState::ZeroMinus),
            "1+" => Ok(FsmState::OnePlus),
            "1-" => Ok(FsmState::OneMinus),
            "2" => Ok(FsmState::Two),
            other => Err(Error::Table(format!("unknown state {other:?}"))),
        }
    }
}

pub const INITIAL_STATE: FsmState = FsmState::ZeroPlus;

/// One arrow of the diagram: the emitted 3-bit label and the target state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transition {
    pub output: Word,
    pub next: FsmState,
}

/// Transition structure keyed by `(state, 2-bit input)`, plus the bit
/// appended after the last block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FsmTable {
    transitions: BTreeMap<(FsmState, u8), Transition>,
    final_bit: BTreeMap<FsmState, u8>,
}

fn tr(output: &str, next: FsmState) -> Transition {
    Transition {
        output: output.parse().expect("literal label"),
        next,
    }
}

/// The bit that ends a codeword: `1` after `0+`, `1+` and `-1`, else `0`.
pub fn canonical_final_bit(state: FsmState) -> u8 {
    match state {
        FsmState::ZeroPlus | FsmState::OnePlus | FsmState::Minus1 => 1,
        FsmState::ZeroMinus | FsmState::OneMinus | FsmState::Two => 0,
    }
}

/// The standard table. Inputs are `00, 01, 10, 11` in order.
pub fn default_table() -> FsmTable {
    use FsmState::*;
    let rows: [(FsmState, [Transition; 4]); 6] = [
        (
            Minus1,
            [
                tr("110", ZeroPlus),
                tr("110", ZeroMinus),
                tr("101", ZeroMinus),
                tr("111", Two),
            ],
        ),
        (
            ZeroPlus,
            [
                tr("101", OnePlus),
                tr("110", OnePlus),
                tr("011", OnePlus),
                tr("100", Minus1),
            ],
        ),
        (
            ZeroMinus,
            [
                tr("101", OneMinus),
                tr("110", OneMinus),
                tr("011", OneMinus),
                tr("010", Minus1),
            ],
        ),
        (
            OnePlus,
            [
                tr("010", ZeroPlus),
                tr("001", ZeroPlus),
                tr("100", ZeroPlus),
                tr("011", Two),
            ],
        ),
        (
            OneMinus,
            [
                tr("010", ZeroMinus),
                tr("001", ZeroMinus),
                tr("100", ZeroMinus),
                tr("101", Two),
            ],
        ),
        (
            Two,
            [
                tr("000", Minus1),
                tr("010", OnePlus),
                tr("001", OnePlus),
                tr("001", OneMinus),
            ],
        ),
    ];
    let mut table = FsmTable::empty();
    for (state, row) in rows {
        for (input, t) in row.into_iter().enumerate() {
            table.transitions.insert((state, input as u8), t);
        }
    }
    table
}

/// Outcome of [`validate_table`]; empty `violations` means the table is usable.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn validate_table(t: &FsmTable) -> ValidationReport {
    let mut violations = Vec::new();

    for &(state, input) in t.transitions.keys() {
        if input > 3 {
            violations.push(format!("state {state}: input {input} is not a 2-bit value"));
        }
    }
    for state in FsmState::ALL {
        let present = (0..4u8)
            .filter(|i| t.transitions.contains_key(&(state, *i)))
            .count();
        if present != 4 {
            violations.push(format!(
                "state {state} has {present} outgoing transitions, expected 4"
            ));
        }
        let fb = t
            .final_bit
            .get(&state)
            .copied()
            .unwrap_or(canonical_final_bit(state));
        if fb != canonical_final_bit(state) {
            violations.push(format!("state {state} has final bit {fb}"));
        }
    }

    for (&(state, input), trans) in &t.transitions {
        if trans.output.len() != 3 {
            violations.push(format!(
                "{state} on {input:02b}: label {} is not 3 bits",
                trans.output
            ));
            continue;
        }
        let path = rds(&trans.output);
        let expected = state.level() + path.last();
        if trans.next.level() != expected {
            violations.push(format!(
                "{state} on {input:02b}: label {} leads to level {expected}, not {}",
                trans.output, trans.next
            ));
        }
        if path
            .values()
            .iter()
            .any(|v| !(-1..=2).contains(&(state.level() + v)))
        {
            violations.push(format!(
                "{state} on {input:02b}: label {} leaves the band [-1, 2]",
                trans.output
            ));
        }
    }

    let mut incoming: HashMap<(FsmState, &Word), Vec<FsmState>> = HashMap::new();
    for (&(state, _), trans) in &t.transitions {
        incoming
            .entry((trans.next, &trans.output))
            .or_default()
            .push(state);
    }
    let mut clashes: Vec<_> = incoming
        .into_iter()
        .filter(|(_, from)| from.len() > 1)
        .collect();
    clashes.sort();
    for ((target, label), from) in clashes {
        let from: Vec<&str> = from.iter().map(|s| s.name()).collect();
        violations.push(format!(
            "label {label} into {target} is used {} times (from {})",
            from.len(),
            from.join(", ")
        ));
    }

    ValidationReport { violations }
}

impl FsmTable {
    fn empty() -> Self {
        FsmTable {
            transitions: BTreeMap::new(),
            final_bit: FsmState::ALL
                .iter()
                .map(|&s| (s, canonical_final_bit(s)))
                .collect(),
        }
    }

    /// Builds a table from explicit transitions, rejecting it unless
    /// [`validate_table`] passes.
    pub fn from_transitions<I>(transitions: I) -> Result<Self>
    where
        I: IntoIterator<Item = ((FsmState, u8), Transition)>,
    {
        let table = Self::from_transitions_unchecked(transitions);
        let report = validate_table(&table);
        if report.is_valid() {
            Ok(table)
        } else {
            Err(Error::Table(report.violations.join("; ")))
        }
    }

    /// Same as [`FsmTable::from_transitions`] without validation, for
    /// inspecting broken tables.
    pub fn from_transitions_unchecked<I>(transitions: I) -> Self
    where
        I: IntoIterator<Item = ((FsmState, u8), Transition)>,
    {
        let mut table = Self::empty();
        table.transitions.extend(transitions);
        table
    }

    pub fn transitions(&self) -> impl Iterator<Item = (&(FsmState, u8), &Transition)> {
        self.transitions.iter()
    }

    pub fn transition(&self, state: FsmState, input: u8) -> Option<&Transition> {
        self.transitions.get(&(state, input))
    }

    pub fn final_bit(&self, state: FsmState) -> u8 {
        self.final_bit[&state]
    }

    pub fn to_json(&self) -> String {
        let mut doc: BTreeMap<String, Vec<JsonTransition>> = BTreeMap::new();
        for state in FsmState::ALL {
            let row = (0..4u8)
                .filter_map(|i| self.transition(state, i))
                .map(|t| JsonTransition {
                    output: t.output.to_string(),
                    next: t.next.name().to_string(),
                })
                .collect();
            doc.insert(state.name().to_string(), row);
        }
        serde_json::to_string_pretty(&doc).expect("plain data serializes")
    }

    /// Parses a JSON table: an object keyed by state name, each holding the
    /// four transitions for inputs `00, 01, 10, 11` in order.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: BTreeMap<String, Vec<JsonTransition>> =
            serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        let mut entries = Vec::new();
        for (name, row) in doc {
            let state: FsmState = name.parse()?;
            if row.len() > 4 {
                return Err(Error::Table(format!(
                    "state {state} lists {} transitions",
                    row.len()
                )));
            }
            for (input, t) in row.into_iter().enumerate() {
                entries.push((
                    (state, input as u8),
                    Transition {
                        output: t.output.parse()?,
                        next: t.next.parse()?,
                    },
                ));
            }
        }
        Self::from_transitions(entries)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct JsonTransition {
    output: String,
    next: String,
}

/// Encodes from state `0+`, appending the final bit of the terminal state.
pub fn encode_fsm(msg: &Word, t: &FsmTable) -> Result<Word> {
    if !msg.len().is_multiple_of(2) {
        return Err(Error::Framing(format!(
            "message length {} is odd",
            msg.len()
        )));
    }
    let mut state = INITIAL_STATE;
    let mut out = Vec::with_capacity(msg.len() / 2 * 3 + 1);
    for pair in msg.bits().chunks(2) {
        let input = pair[0] << 1 | pair[1];
        let trans = t
            .transition(state, input)
            .ok_or_else(|| Error::Table(format!("no transition from {state} on {input:02b}")))?;
        out.extend_from_slice(trans.output.bits());
        state = trans.next;
    }
    out.push(t.final_bit(state));
    Ok(Word::from_bits(out).expect("binary"))
}

fn check_code_length(code: &Word) -> Result<usize> {
    if code.len() % 3 != 1 {
        return Err(Error::Framing(format!(
            "codeword length {} is not 1 mod 3",
            code.len()
        )));
    }
    Ok(code.len() / 3)
}

/// Reads the terminal state off the RDS after `3k` bits and the appended bit.
pub fn recover_final_state(code: &Word, t: &FsmTable) -> Result<FsmState> {
    let k = check_code_length(code)?;
    let body = Word::from_bits(code.bits()[..3 * k].iter().copied()).expect("binary");
    let level = rds(&body).last();
    let last = code.bits()[3 * k];
    let sign = match level {
        -1 | 2 => Sign::None,
        0 | 1 if last == 1 => Sign::Plus,
        0 | 1 => Sign::Minus,
        _ => {
            return Err(Error::Corruption(format!(
                "RDS after {} bits is {level}, outside [-1, 2]",
                3 * k
            )))
        }
    };
    let state = FsmState::from_parts(level, sign).expect("level and sign are consistent");
    if t.final_bit(state) != last {
        return Err(Error::Corruption(format!(
            "final bit {last} cannot follow state {state}"
        )));
    }
    Ok(state)
}

/// Backward table walk from the recovered terminal state to `0+`.
pub fn decode_fsm(code: &Word, t: &FsmTable) -> Result<Word> {
    let k = check_code_length(code)?;
    let mut incoming: HashMap<(FsmState, &Word), (FsmState, u8)> = HashMap::new();
    for (&(state, input), trans) in t.transitions() {
        if incoming
            .insert((trans.next, &trans.output), (state, input))
            .is_some()
        {
            return Err(Error::Table(format!(
                "label {} into {} is ambiguous",
                trans.output, trans.next
            )));
        }
    }

    let mut state = recover_final_state(code, t)?;
    let mut inputs = vec![0u8; k];
    for j in (0..k).rev() {
        let label = Word::from_bits(code.bits()[3 * j..3 * j + 3].iter().copied()).expect("binary");
        let &(prev, input) = incoming.get(&(state, &label)).ok_or_else(|| {
            Error::Corruption(format!(
                "no transition into {state} carries label {label} (block {})",
                j + 1
            ))
        })?;
        inputs[j] = input;
        state = prev;
    }
    if state != INITIAL_STATE {
        return Err(Error::Corruption(format!(
            "backward walk ends in {state}, not {INITIAL_STATE}"
        )));
    }
    Ok(inputs.iter().flat_map(|&i| [i >> 1, i & 1]).collect())
}
