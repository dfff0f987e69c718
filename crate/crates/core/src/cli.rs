//! Framed file format and the commands behind the `lbc` binary.
//!
//! An encoded file is a 19-byte [`FrameHeader`] followed by the coded bits
//! packed most-significant-bit-first. The payload is zero-padded up to the
//! scheme's block size before encoding and the header records the true
//! payload length, so decoding can drop the padding again.

use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::capacity::{capacity_lb, capacity_rds};
use crate::dyck::{self, DyckCodebook};
use crate::enumeration::{
    count_sequence, count_with_prefix, recurrence_report, verify_lemmas_from, CountMethod, Report,
};
use crate::error::Error;
use crate::fsm::{self, FsmTable};
use crate::graph::{search_best_block, GraphCodebook};
use crate::words::{ConstraintParams, Word};

/// Process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Success = 0,
    Failure = 1,
    Usage = 2,
    Io = 3,
    Corrupt = 4,
    NoCode = 5,
    VerifyFailed = 6,
}

impl Status {
    pub fn code(self) -> u8 {
        self as u8
    }
}

#[derive(Debug, thiserror::Error)]
#[error("{message}")]
pub struct CliError {
    pub status: Status,
    pub message: String,
}

impl CliError {
    pub fn new(status: Status, message: impl Into<String>) -> Self {
        CliError {
            status,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Io(_) => Status::Io,
            Error::Framing(_) | Error::Corruption(_) => Status::Corrupt,
            Error::NoCode { .. } => Status::NoCode,
            Error::Params(_) | Error::Table(_) | Error::Format(_) => Status::Usage,
            Error::Range(_) | Error::Overflow { .. } | Error::Convergence { .. } => Status::Failure,
        };
        CliError::new(status, e.to_string())
    }
}

type CliResult<T = ()> = std::result::Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    Dyck,
    Fsm,
    Graph,
}

impl Scheme {
    pub fn code(self) -> u8 {
        match self {
            Scheme::Dyck => 1,
            Scheme::Fsm => 2,
            Scheme::Graph => 3,
        }
    }

    pub fn from_code(code: u8) -> Option<Self> {
        match code {
            1 => Some(Scheme::Dyck),
            2 => Some(Scheme::Fsm),
            3 => Some(Scheme::Graph),
            _ => None,
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheme::Dyck => "dyck",
            Scheme::Fsm => "fsm",
            Scheme::Graph => "graph",
        })
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s {
            "dyck" => Ok(Scheme::Dyck),
            "fsm" => Ok(Scheme::Fsm),
            "graph" => Ok(Scheme::Graph),
            other => Err(Error::Params(format!("unknown scheme {other:?}"))),
        }
    }
}

const FRAME_MAGIC: &[u8; 4] = b"LBC1";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FrameHeader {
    pub scheme: Scheme,
    pub ell: u8,
    pub delta: u8,
    pub s: u16,
    pub m: u16,
    pub payload_bits: u64,
}

impl FrameHeader {
    pub const LEN: usize = 19;

    pub fn to_bytes(&self) -> [u8; Self::LEN] {
        let mut out = [0u8; Self::LEN];
        out[..4].copy_from_slice(FRAME_MAGIC);
        out[4] = self.scheme.code();
        out[5] = self.ell;
        out[6] = self.delta;
        out[7..9].copy_from_slice(&self.s.to_be_bytes());
        out[9..11].copy_from_slice(&self.m.to_be_bytes());
        out[11..19].copy_from_slice(&self.payload_bits.to_be_bytes());
        out
    }

    pub fn parse(bytes: &[u8]) -> crate::Result<Self> {
        if bytes.len() < 4 || &bytes[..4] != FRAME_MAGIC {
            return Err(Error::Format("missing LBC1 magic".into()));
        }
        if bytes.len() < Self::LEN {
            return Err(Error::Framing(format!(
                "header cut short at {} bytes",
                bytes.len()
            )));
        }
        let scheme = Scheme::from_code(bytes[4])
            .ok_or_else(|| Error::Format(format!("unknown scheme code {}", bytes[4])))?;
        Ok(FrameHeader {
            scheme,
            ell: bytes[5],
            delta: bytes[6],
            s: u16::from_be_bytes([bytes[7], bytes[8]]),
            m: u16::from_be_bytes([bytes[9], bytes[10]]),
            payload_bits: u64::from_be_bytes(bytes[11..19].try_into().expect("8 bytes")),
        })
    }
}

/// Packs bits most-significant-bit-first; the last byte is zero-padded.
pub fn pack_bits(bits: &[u8]) -> Vec<u8> {
    bits.chunks(8)
        .map(|chunk| {
            chunk
                .iter()
                .enumerate()
                .fold(0u8, |acc, (i, &b)| acc | b << (7 - i))
        })
        .collect()
}

/// Inverse of [`pack_bits`]: the first `n` bits of `bytes`.
pub fn unpack_bits(bytes: &[u8], n: usize) -> crate::Result<Word> {
    if bytes.len() * 8 < n {
        return Err(Error::Framing(format!(
            "expected {n} bits, found {}",
            bytes.len() * 8
        )));
    }
    Ok((0..n).map(|i| bytes[i / 8] >> (7 - i % 8) & 1).collect())
}

/// A ready-to-use encoder/decoder for one scheme.
#[derive(Debug, Clone)]
pub enum Codec {
    Dyck(DyckCodebook),
    Fsm(FsmTable),
    Graph(GraphCodebook),
}

impl Codec {
    pub fn scheme(&self) -> Scheme {
        match self {
            Codec::Dyck(_) => Scheme::Dyck,
            Codec::Fsm(_) => Scheme::Fsm,
            Codec::Graph(_) => Scheme::Graph,
        }
    }

    /// Payload bits consumed per block.
    pub fn block_bits(&self) -> usize {
        match self {
            Codec::Dyck(cb) => cb.s(),
            Codec::Fsm(_) => 2,
            Codec::Graph(cb) => cb.s(),
        }
    }

    /// Coded length for a payload of `payload_bits` bits after padding.
    pub fn coded_bits(&self, payload_bits: u64) -> crate::Result<u64> {
        let blocks = payload_bits.div_ceil(self.block_bits() as u64);
        let (per_block, extra) = match self {
            Codec::Dyck(cb) => (cb.m() as u64, 0),
            Codec::Fsm(_) => (3, 1),
            Codec::Graph(cb) => (cb.m() as u64, 0),
        };
        blocks
            .checked_mul(per_block)
            .and_then(|b| b.checked_add(extra))
            .ok_or_else(|| Error::Framing(format!("payload length {payload_bits} is too large")))
    }

    pub fn header(&self, payload_bits: u64) -> crate::Result<FrameHeader> {
        let (ell, delta, s, m) = match self {
            Codec::Dyck(cb) => (4, 1, cb.s(), cb.m()),
            Codec::Fsm(_) => (4, 1, 2, 3),
            Codec::Graph(cb) => (cb.params().ell(), cb.params().delta(), cb.s(), cb.m()),
        };
        let narrow =
            |v: usize| u8::try_from(v).map_err(|_| Error::Format(format!("{v} exceeds one byte")));
        let wide = |v: usize| {
            u16::try_from(v).map_err(|_| Error::Format(format!("{v} exceeds two bytes")))
        };
        Ok(FrameHeader {
            scheme: self.scheme(),
            ell: narrow(ell)?,
            delta: narrow(delta)?,
            s: wide(s)?,
            m: wide(m)?,
            payload_bits,
        })
    }

    pub fn encode(&self, msg: &Word) -> crate::Result<Word> {
        match self {
            Codec::Dyck(cb) => cb.encode(msg),
            Codec::Fsm(t) => fsm::encode_fsm(msg, t),
            Codec::Graph(cb) => cb.encode(msg),
        }
    }

    pub fn decode(&self, code: &Word) -> crate::Result<Word> {
        match self {
            Codec::Dyck(cb) => cb.decode(code),
            Codec::Fsm(t) => fsm::decode_fsm(code, t),
            Codec::Graph(cb) => cb.decode(code),
        }
    }

    /// Checks that `header` describes this codec.
    pub fn check_header(&self, header: &FrameHeader) -> crate::Result<()> {
        let expected = self.header(header.payload_bits)?;
        if expected != *header {
            return Err(Error::Format(format!(
                "frame is {} (ell {}, delta {}, s {}, m {}) but the codec is {} (ell {}, delta {}, s {}, m {})",
                header.scheme, header.ell, header.delta, header.s, header.m,
                expected.scheme, expected.ell, expected.delta, expected.s, expected.m
            )));
        }
        Ok(())
    }
}

/// Pads, encodes and frames `payload`.
pub fn encode_frame(codec: &Codec, payload: &Word) -> crate::Result<Vec<u8>> {
    let block = codec.block_bits();
    let mut bits = payload.bits().to_vec();
    bits.resize(payload.len().div_ceil(block) * block, 0);
    let code = codec.encode(&Word::from_bits(bits)?)?;
    let mut out = codec.header(payload.len() as u64)?.to_bytes().to_vec();
    out.extend(pack_bits(code.bits()));
    Ok(out)
}

/// Decodes the body of a frame whose header was already parsed and matched
/// against `codec`.
pub fn decode_body(codec: &Codec, header: &FrameHeader, body: &[u8]) -> crate::Result<Word> {
    let coded = codec.coded_bits(header.payload_bits)?;
    let coded = usize::try_from(coded).map_err(|_| Error::Framing("frame too large".into()))?;
    let need = coded.div_ceil(8);
    if body.len() < need {
        return Err(Error::Framing(format!(
            "truncated: {} coded bytes, expected {need}",
            body.len()
        )));
    }
    if body.len() > need {
        return Err(Error::Corruption(format!(
            "{} trailing bytes after the coded bits",
            body.len() - need
        )));
    }
    if coded % 8 != 0 && body[need - 1] & (0xff >> (coded % 8)) != 0 {
        return Err(Error::Corruption(
            "nonzero padding in the final byte".into(),
        ));
    }
    let decoded = codec.decode(&unpack_bits(body, coded)?)?;
    let keep = header.payload_bits as usize;
    if decoded.bits()[keep..].iter().any(|&b| b != 0) {
        return Err(Error::Corruption("nonzero payload padding".into()));
    }
    Word::from_bits(decoded.bits()[..keep].iter().copied())
}

/// Where decoders find the tables not recorded in the frame.
#[derive(Debug, Clone, Default)]
pub struct CodecSources {
    pub codebook: Option<PathBuf>,
    pub fsm_table: Option<PathBuf>,
}

fn load_fsm_table(path: Option<&Path>) -> CliResult<FsmTable> {
    match path {
        None => Ok(fsm::default_table()),
        Some(p) => FsmTable::load(p)
            .map_err(|e| CliError::new(Status::Usage, format!("{}: {e}", p.display()))),
    }
}

fn load_codebook(path: Option<&Path>) -> CliResult<GraphCodebook> {
    let path = path.ok_or_else(|| CliError::new(Status::Usage, "scheme graph needs --codebook"))?;
    GraphCodebook::load(path)
        .map_err(|e| CliError::new(Status::Usage, format!("codebook {}: {e}", path.display())))
}

/// Builds the codec a frame header asks for.
pub fn codec_for_header(header: &FrameHeader, sources: &CodecSources) -> CliResult<Codec> {
    let codec = match header.scheme {
        Scheme::Dyck => Codec::Dyck(dyck::build_codebook(header.s as usize)?),
        Scheme::Fsm => Codec::Fsm(load_fsm_table(sources.fsm_table.as_deref())?),
        Scheme::Graph => Codec::Graph(load_codebook(sources.codebook.as_deref())?),
    };
    codec.check_header(header)?;
    Ok(codec)
}

/// Parses and decodes a whole frame.
pub fn decode_frame(bytes: &[u8], sources: &CodecSources) -> CliResult<Word> {
    let header = FrameHeader::parse(bytes)?;
    let codec = codec_for_header(&header, sources)?;
    Ok(decode_body(&codec, &header, &bytes[FrameHeader::LEN..])?)
}

fn read_file(path: &Path) -> CliResult<Vec<u8>> {
    fs::read(path).map_err(|e| CliError::new(Status::Io, format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, bytes: &[u8]) -> CliResult {
    fs::write(path, bytes)
        .map_err(|e| CliError::new(Status::Io, format!("{}: {e}", path.display())))
}

fn io_error(e: io::Error) -> CliError {
    CliError::new(Status::Io, e.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum ReportFormat {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Method {
    #[default]
    Transfer,
    BruteForce,
}

#[derive(Debug, Parser)]
#[command(
    name = "lbc",
    version,
    about = "Codes, capacities and counts for locally balanced binary words"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Encode a file into a framed codeword.
    Encode(EncodeArgs),
    /// Decode a framed codeword back into the original file.
    Decode(DecodeArgs),
    /// Print capacities of the (ell, delta) or bounded-RDS constraints.
    Capacity(CapacityArgs),
    /// Search block lengths for the best graph code and save its codebook.
    Search(SearchArgs),
    /// Check the (6,1) counting recurrence and its supporting identities.
    Verify(VerifyArgs),
    /// Count (ell, delta)-locally balanced words by length.
    Count(CountArgs),
}

#[derive(Debug, Args)]
pub struct EncodeArgs {
    /// dyck, fsm or graph.
    #[arg(long)]
    pub scheme: String,
    /// Payload bits per block for the dyck scheme.
    #[arg(long)]
    pub s: Option<usize>,
    #[arg(long)]
    pub ell: Option<usize>,
    #[arg(long)]
    pub delta: Option<usize>,
    /// LBG1 codebook for the graph scheme.
    #[arg(long)]
    pub codebook: Option<PathBuf>,
    /// JSON transition table replacing the built-in fsm table.
    #[arg(long)]
    pub table: Option<PathBuf>,
    pub input: PathBuf,
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct DecodeArgs {
    #[arg(long)]
    pub codebook: Option<PathBuf>,
    #[arg(long)]
    pub table: Option<PathBuf>,
    pub input: PathBuf,
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct CapacityArgs {
    /// Smallest window length.
    #[arg(long, default_value_t = 4)]
    pub ell: usize,
    /// Largest window length; the table steps by 2.
    #[arg(long, default_value_t = 14)]
    pub ell_max: usize,
    #[arg(long, value_delimiter = ',', default_values_t = [1, 2])]
    pub delta: Vec<usize>,
    /// Report C_RDS(delta) instead.
    #[arg(long)]
    pub rds: bool,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[arg(long)]
    pub ell: usize,
    #[arg(long)]
    pub delta: usize,
    #[arg(long)]
    pub m_min: usize,
    #[arg(long)]
    pub m_max: usize,
    /// Where to write the LBG1 codebook.
    #[arg(long)]
    pub codebook: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 28)]
    pub n_max: usize,
    #[arg(long, default_value_t = 1)]
    pub n_min: usize,
    #[arg(long, value_enum, default_value_t)]
    pub method: Method,
    /// Perturb one count so the recurrence must fail.
    #[arg(long)]
    pub inject_fault: bool,
    #[arg(long, value_enum, default_value_t)]
    pub format: ReportFormat,
}

#[derive(Debug, Args)]
pub struct CountArgs {
    #[arg(long, default_value_t = 6)]
    pub ell: usize,
    #[arg(long, default_value_t = 1)]
    pub delta: usize,
    #[arg(long, default_value_t = 30)]
    pub n_max: usize,
    /// Only count words starting with this prefix.
    #[arg(long)]
    pub prefix: Option<Word>,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

fn check_fixed_params(scheme: Scheme, ell: Option<usize>, delta: Option<usize>) -> CliResult {
    for (name, given) in [("ell", ell), ("delta", delta)] {
        let fixed = if name == "ell" { 4 } else { 1 };
        if let Some(v) = given.filter(|&v| v != fixed) {
            return Err(CliError::new(
                Status::Usage,
                format!("scheme {scheme} is fixed to {name} = {fixed}, got {v}"),
            ));
        }
    }
    Ok(())
}

pub fn cmd_encode(args: &EncodeArgs) -> CliResult {
    let scheme: Scheme = args.scheme.parse()?;
    let codec = match scheme {
        Scheme::Dyck => {
            check_fixed_params(scheme, args.ell, args.delta)?;
            let s = args
                .s
                .ok_or_else(|| CliError::new(Status::Usage, "scheme dyck needs --s"))?;
            Codec::Dyck(dyck::build_codebook(s)?)
        }
        Scheme::Fsm => {
            check_fixed_params(scheme, args.ell, args.delta)?;
            Codec::Fsm(load_fsm_table(args.table.as_deref())?)
        }
        Scheme::Graph => {
            let cb = load_codebook(args.codebook.as_deref())?;
            if args.ell.is_some_and(|v| v != cb.params().ell())
                || args.delta.is_some_and(|v| v != cb.params().delta())
            {
                return Err(CliError::new(
                    Status::Usage,
                    "codebook parameters differ from --ell/--delta",
                ));
            }
            Codec::Graph(cb)
        }
    };
    let bytes = read_file(&args.input)?;
    let payload = unpack_bits(&bytes, bytes.len() * 8)?;
    write_file(&args.output, &encode_frame(&codec, &payload)?)
}

pub fn cmd_decode(args: &DecodeArgs) -> CliResult {
    let bytes = read_file(&args.input)?;
    let sources = CodecSources {
        codebook: args.codebook.clone(),
        fsm_table: args.table.clone(),
    };
    let payload = decode_frame(&bytes, &sources)?;
    write_file(&args.output, &pack_bits(payload.bits()))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CapacityRow {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ell: Option<usize>,
    pub delta: usize,
    pub capacity: f64,
}

fn round3(x: f64) -> f64 {
    (x * 1000.0).round() / 1000.0
}

/// Capacity rows for every `(ell, delta)` pair, or `C_RDS(delta)` rows in RDS mode.
pub fn capacity_table(args: &CapacityArgs) -> crate::Result<Vec<CapacityRow>> {
    let mut rows = Vec::new();
    if args.rds {
        for &delta in &args.delta {
            rows.push(CapacityRow {
                ell: None,
                delta,
                capacity: capacity_rds(delta)?,
            });
        }
        return Ok(rows);
    }
    for &delta in &args.delta {
        for ell in (args.ell..=args.ell_max).step_by(2) {
            let p = ConstraintParams::new(ell, delta)?;
            rows.push(CapacityRow {
                ell: Some(ell),
                delta,
                capacity: capacity_lb(&p)?,
            });
        }
    }
    Ok(rows)
}

pub fn cmd_capacity(args: &CapacityArgs, out: &mut dyn Write) -> CliResult {
    let rows: Vec<CapacityRow> = capacity_table(args)?
        .into_iter()
        .map(|r| CapacityRow {
            capacity: round3(r.capacity),
            ..r
        })
        .collect();
    match args.format {
        Format::Json => writeln!(
            out,
            "{}",
            serde_json::to_string_pretty(&rows).expect("plain data")
        )
        .map_err(io_error)?,
        Format::Csv => {
            let header = if args.rds {
                "delta,capacity"
            } else {
                "ell,delta,capacity"
            };
            writeln!(out, "{header}").map_err(io_error)?;
            for r in rows {
                match r.ell {
                    Some(ell) => writeln!(out, "{ell},{},{:.3}", r.delta, r.capacity),
                    None => writeln!(out, "{},{:.3}", r.delta, r.capacity),
                }
                .map_err(io_error)?;
            }
        }
    }
    Ok(())
}

pub fn cmd_search(args: &SearchArgs, out: &mut dyn Write) -> CliResult {
    let p = ConstraintParams::new(args.ell, args.delta)?;
    let found = search_best_block(p, args.m_min, args.m_max)?;
    for (m, s) in &found.per_length {
        match s {
            Some(s) => writeln!(out, "m = {m}: s = {s}"),
            None => writeln!(out, "m = {m}: no subgraph"),
        }
        .map_err(io_error)?;
    }
    writeln!(
        out,
        "best m' = {} s' = {} rate = {}/{} = {:.3}",
        found.m,
        found.s,
        found.s,
        found.m,
        found.rate()
    )
    .map_err(io_error)?;
    if let Some(path) = &args.codebook {
        found.codebook.save(path)?;
        writeln!(out, "codebook written to {}", path.display()).map_err(io_error)?;
    }
    Ok(())
}

#[derive(Debug, Serialize)]
struct VerifySummary<'a> {
    pass: bool,
    recurrence: &'a [crate::enumeration::IdentityCheck],
    identities: &'a [crate::enumeration::IdentityCheck],
}

/// Recurrence and identity reports for `n_min..=n_max`.
pub fn verify_reports(args: &VerifyArgs) -> crate::Result<(Report, Report)> {
    let p = ConstraintParams::new(6, 1)?;
    let mut counts = count_sequence(&p, args.n_max + 12)?.counts().to_vec();
    if args.inject_fault {
        *counts.last_mut().expect("nonempty") += 1;
    }
    let recurrence = recurrence_report(&counts, args.n_min..=args.n_max);
    let method = match args.method {
        Method::Transfer => CountMethod::Transfer,
        Method::BruteForce => CountMethod::BruteForce,
    };
    let identities = verify_lemmas_from(args.n_min, args.n_max, method)?;
    Ok((recurrence, identities))
}

fn write_report_text(out: &mut dyn Write, title: &str, report: &Report) -> io::Result<()> {
    let mut names: Vec<&str> = Vec::new();
    for c in &report.checks {
        if !names.contains(&c.identity.as_str()) {
            names.push(&c.identity);
        }
    }
    writeln!(out, "{title}:")?;
    for name in names {
        let checks: Vec<_> = report
            .checks
            .iter()
            .filter(|c| c.identity == name)
            .collect();
        let failed: Vec<String> = checks
            .iter()
            .filter(|c| !c.pass)
            .map(|c| format!("n={} ({} vs {})", c.n, c.lhs, c.rhs))
            .collect();
        if failed.is_empty() {
            writeln!(out, "  ok   {name}  [{} values of n]", checks.len())?;
        } else {
            writeln!(out, "  FAIL {name}  at {}", failed.join(", "))?;
        }
    }
    Ok(())
}

pub fn cmd_verify(args: &VerifyArgs, out: &mut dyn Write) -> CliResult {
    let (recurrence, identities) = verify_reports(args)?;
    let pass = recurrence.pass() && identities.pass();
    match args.format {
        ReportFormat::Json => {
            let summary = VerifySummary {
                pass,
                recurrence: &recurrence.checks,
                identities: &identities.checks,
            };
            writeln!(
                out,
                "{}",
                serde_json::to_string_pretty(&summary).expect("plain data")
            )
            .map_err(io_error)?;
        }
        ReportFormat::Text => {
            write_report_text(out, "recurrence", &recurrence).map_err(io_error)?;
            write_report_text(out, "identities", &identities).map_err(io_error)?;
            writeln!(
                out,
                "{}",
                if pass {
                    "all checks passed"
                } else {
                    "some checks failed"
                }
            )
            .map_err(io_error)?;
        }
    }
    if pass {
        Ok(())
    } else {
        let failed = recurrence.failures().count() + identities.failures().count();
        Err(CliError::new(
            Status::VerifyFailed,
            format!("{failed} checks failed"),
        ))
    }
}

#[derive(Debug, Serialize)]
struct CountRow {
    n: usize,
    count: u64,
}

pub fn cmd_count(args: &CountArgs, out: &mut dyn Write) -> CliResult {
    let p = ConstraintParams::new(args.ell, args.delta)?;
    let rows: Vec<CountRow> = match &args.prefix {
        None => count_sequence(&p, args.n_max)?
            .counts()
            .iter()
            .enumerate()
            .map(|(n, &count)| CountRow { n, count })
            .collect(),
        Some(z) => (0..=args.n_max)
            .map(|n| {
                Ok(CountRow {
                    n,
                    count: count_with_prefix(&p, n, z)?,
                })
            })
            .collect::<crate::Result<_>>()?,
    };
    match args.format {
        Format::Json => writeln!(
            out,
            "{}",
            serde_json::to_string_pretty(&rows).expect("plain data")
        )
        .map_err(io_error)?,
        Format::Csv => {
            writeln!(out, "n,count").map_err(io_error)?;
            for r in rows {
                writeln!(out, "{},{}", r.n, r.count).map_err(io_error)?;
            }
        }
    }
    Ok(())
}

pub fn execute(cli: &Cli, out: &mut dyn Write) -> CliResult {
    match &cli.command {
        Command::Encode(a) => cmd_encode(a),
        Command::Decode(a) => cmd_decode(a),
        Command::Capacity(a) => cmd_capacity(a, out),
        Command::Search(a) => cmd_search(a, out),
        Command::Verify(a) => cmd_verify(a, out),
        Command::Count(a) => cmd_count(a, out),
    }
}

/// Parses `args`, runs the command and returns the exit code. Errors go to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code() as u8;
            let _ = if code == 0 {
                write!(out, "{e}")
            } else {
                write!(err, "{e}")
            };
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(()) => Status::Success.code(),
        Err(e) => {
            let _ = writeln!(err, "lbc: {e}");
            e.status.code()
        }
    }
}
