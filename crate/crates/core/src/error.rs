use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    Params(String),

    #[error("index out of range: {0}")]
    Range(String),

    #[error("framing error: {0}")]
    Framing(String),

    #[error("corrupted codeword: {0}")]
    Corruption(String),

    #[error("integer overflow at n = {n}")]
    Overflow { n: usize },

    #[error("no code found for block lengths {m_min}..={m_max}")]
    NoCode { m_min: usize, m_max: usize },

    #[error(
        "power iteration did not converge after {iterations} iterations (residual {residual:e})"
    )]
    Convergence { iterations: usize, residual: f64 },

    #[error("invalid table: {0}")]
    Table(String),

    #[error("bad file format: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}
