//! Encoders, decoders and counting tools for locally balanced binary words.
//!
//! A binary word is `(ell, delta)`-locally balanced when every window of
//! `ell` consecutive symbols has weight within `delta` of `ell/2`, and
//! strongly balanced when that holds for every even window length from
//! `ell` on. The crate provides:
//!
//! - [`words`]: the word type and the constraint predicates,
//! - [`dyck`]: a block code for strong (4,1) balance from bounded Dyck paths,
//! - [`fsm`]: a six-state rate `2k/(3k+1)` code for strong (4,1) balance,
//! - [`graph`]: table codes for any `(ell, delta)` found by graph peeling,
//! - [`capacity`]: constraint capacities via power iteration,
//! - [`enumeration`]: exact counting and the `(6,1)` recurrence checks,
//! - [`cli`]: the framed file format and command implementations behind the
//!   `lbc` binary.

pub mod capacity;
pub mod cli;
pub mod dyck;
pub mod enumeration;
pub mod error;
pub mod fsm;
pub mod graph;
pub mod words;

pub use error::{Error, Result};
pub use words::{ConstraintParams, Word};
