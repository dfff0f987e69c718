//! Table codes for `(ell, delta)`-locally balanced words found by graph search.
//!
//! The block graph `G_m` has one vertex per `m`-bit word and an edge `u -> v`
//! when the concatenation `uv` is locally balanced. Peeling away vertices of
//! small out-degree leaves a subgraph in which every vertex has at least
//! `2^s` successors, which is exactly what a rate `s/m` block encoder needs.
//!
//! For `m >= ell - 1` an `ell`-window inside `uv` either sits in one block or
//! straddles the boundary, and a straddling window only sees the last
//! `ell - 1` bits of `u` and the first `ell - 1` bits of `v`. The graph is
//! therefore stored as a vertex list plus a compatibility matrix between
//! suffix classes and prefix classes instead of explicit edge lists.

use std::collections::HashMap;
use std::io::{Read, Write};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::words::{is_locally_balanced_u64, ConstraintParams, Word};

/// Largest supported block length. Vertices are enumerated exhaustively.
pub const MAX_BLOCK_LENGTH: usize = 30;

/// Largest supported window; the class matrix has `4^(ell-1)` bits.
pub const MAX_WINDOW: usize = 16;

#[derive(Debug, Clone)]
struct BitMatrix {
    cols: usize,
    words_per_row: usize,
    bits: Vec<u64>,
}

impl BitMatrix {
    fn new(rows: usize, cols: usize) -> Self {
        let words_per_row = cols.div_ceil(64);
        BitMatrix {
            cols,
            words_per_row,
            bits: vec![0; rows * words_per_row],
        }
    }

    fn get(&self, r: usize, c: usize) -> bool {
        self.bits[r * self.words_per_row + c / 64] >> (c % 64) & 1 == 1
    }

    fn row(&self, r: usize) -> &[u64] {
        &self.bits[r * self.words_per_row..(r + 1) * self.words_per_row]
    }

    fn ones_in_row(&self, r: usize) -> impl Iterator<Item = usize> + '_ {
        self.row(r).iter().enumerate().flat_map(|(k, &word)| {
            let mut word = word;
            std::iter::from_fn(move || {
                if word == 0 {
                    return None;
                }
                let bit = word.trailing_zeros() as usize;
                word &= word - 1;
                Some(k * 64 + bit)
            })
        })
    }

    fn transpose(&self, rows: usize) -> BitMatrix {
        let mut t = BitMatrix::new(self.cols, rows);
        for r in 0..rows {
            for c in self.ones_in_row(r) {
                t.bits[c * t.words_per_row + r / 64] |= 1 << (r % 64);
            }
        }
        t
    }
}

/// The block graph `G_m`, restricted to vertices that are themselves
/// balanced (the others have no edges at all).
#[derive(Debug, Clone)]
pub struct ConstraintGraph {
    params: ConstraintParams,
    m: usize,
    vertices: Vec<u64>,
    prefix_class: Vec<u32>,
    suffix_class: Vec<u32>,
    /// Rows are suffix classes of the source, columns prefix classes of the target.
    compat: BitMatrix,
}

fn class_bits(p: &ConstraintParams) -> usize {
    p.ell() - 1
}

pub fn build_graph(p: ConstraintParams, m: usize) -> Result<ConstraintGraph> {
    let cb = class_bits(&p);
    if m < cb {
        return Err(Error::Params(format!(
            "block length {m} is shorter than ell - 1 = {cb}"
        )));
    }
    if m > MAX_BLOCK_LENGTH {
        return Err(Error::Params(format!(
            "block length {m} exceeds {MAX_BLOCK_LENGTH}"
        )));
    }
    if p.ell() > MAX_WINDOW {
        return Err(Error::Params(format!(
            "window {} exceeds {MAX_WINDOW}",
            p.ell()
        )));
    }

    let vertices: Vec<u64> = (0..1u64 << m)
        .into_par_iter()
        .filter(|&v| is_locally_balanced_u64(v, m, &p))
        .collect();
    let class_mask = (1u64 << cb) - 1;
    let prefix_class = vertices.iter().map(|&v| (v >> (m - cb)) as u32).collect();
    let suffix_class = vertices.iter().map(|&v| (v & class_mask) as u32).collect();

    let classes = 1usize << cb;
    let mut compat = BitMatrix::new(classes, classes);
    let wpr = compat.words_per_row;
    compat
        .bits
        .par_chunks_mut(wpr)
        .enumerate()
        .for_each(|(suffix, row)| {
            for prefix in 0..classes {
                let joined = (suffix as u64) << cb | prefix as u64;
                if is_locally_balanced_u64(joined, 2 * cb, &p) {
                    row[prefix / 64] |= 1 << (prefix % 64);
                }
            }
        });

    Ok(ConstraintGraph {
        params: p,
        m,
        vertices,
        prefix_class,
        suffix_class,
        compat,
    })
}

impl ConstraintGraph {
    pub fn params(&self) -> ConstraintParams {
        self.params
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    /// Vertex values in increasing order (see [`Word::from_u64`]).
    pub fn vertex_values(&self) -> &[u64] {
        &self.vertices
    }

    pub fn vertex(&self, idx: usize) -> Word {
        Word::from_u64(self.vertices[idx], self.m)
    }

    pub fn index_of(&self, w: &Word) -> Option<usize> {
        if w.len() != self.m {
            return None;
        }
        self.vertices.binary_search(&w.to_u64()?).ok()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.compat
            .get(self.suffix_class[u] as usize, self.prefix_class[v] as usize)
    }

    /// Successors of `u` in increasing order.
    pub fn out_neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.vertices.len()).filter(move |&v| self.has_edge(u, v))
    }

    fn prefix_counts(&self, members: impl Iterator<Item = usize>) -> Vec<u64> {
        let mut counts = vec![0u64; 1 << class_bits(&self.params)];
        for v in members {
            counts[self.prefix_class[v] as usize] += 1;
        }
        counts
    }

    fn class_degree(&self, suffix: usize, prefix_counts: &[u64]) -> u64 {
        self.compat
            .ones_in_row(suffix)
            .map(|p| prefix_counts[p])
            .sum()
    }

    pub fn out_degree(&self, u: usize) -> usize {
        let counts = self.prefix_counts(0..self.vertices.len());
        self.class_degree(self.suffix_class[u] as usize, &counts) as usize
    }

    pub fn max_out_degree(&self) -> usize {
        let counts = self.prefix_counts(0..self.vertices.len());
        let mut seen = vec![false; counts.len()];
        let mut best = 0;
        for &sc in &self.suffix_class {
            if !std::mem::replace(&mut seen[sc as usize], true) {
                best = best.max(self.class_degree(sc as usize, &counts));
            }
        }
        best as usize
    }

    /// Largest vertex set in which every vertex keeps at least `min_degree`
    /// successors, found by repeatedly deleting vertices below the threshold.
    /// Returns sorted vertex indices.
    pub fn peel(&self, min_degree: u64) -> Vec<usize> {
        let classes = 1usize << class_bits(&self.params);
        let mut members: Vec<Vec<u32>> = vec![Vec::new(); classes];
        for (v, &sc) in self.suffix_class.iter().enumerate() {
            members[sc as usize].push(v as u32);
        }
        let transposed = self.compat.transpose(classes);
        let counts = self.prefix_counts(0..self.vertices.len());
        let mut degree = vec![0u64; classes];
        let mut alive = vec![false; classes];
        let mut queue = Vec::new();
        for sc in 0..classes {
            if members[sc].is_empty() {
                continue;
            }
            degree[sc] = self.class_degree(sc, &counts);
            if degree[sc] < min_degree {
                queue.push(sc);
            } else {
                alive[sc] = true;
            }
        }
        while let Some(sc) = queue.pop() {
            for &v in &members[sc] {
                let prefix = self.prefix_class[v as usize] as usize;
                for source in transposed.ones_in_row(prefix) {
                    if alive[source] {
                        degree[source] -= 1;
                        if degree[source] < min_degree {
                            alive[source] = false;
                            queue.push(source);
                        }
                    }
                }
            }
        }
        (0..self.vertices.len())
            .filter(|&v| alive[self.suffix_class[v] as usize])
            .collect()
    }
}

/// Result of the peeling search: surviving vertices (sorted indices into the
/// graph) whose out-degrees inside the subgraph are all at least `2^s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaxSubgraph {
    pub vertices: Vec<usize>,
    pub s: usize,
}

/// Starts from `s = floor(log2(max out-degree))` and lowers `s` until
/// peeling at threshold `2^s` leaves something. `None` when even `s = 0`
/// empties the graph.
pub fn find_max_subgraph(g: &ConstraintGraph) -> Option<MaxSubgraph> {
    let max_degree = g.max_out_degree();
    if max_degree == 0 {
        return None;
    }
    let top = max_degree.ilog2() as usize;
    (0..=top).rev().find_map(|s| {
        let vertices = g.peel(1u64 << s);
        (!vertices.is_empty()).then_some(MaxSubgraph { vertices, s })
    })
}

/// Encoder tables for a rate `s/m` block code.
///
/// The first block selects one of the `2^s` smallest vertices; each later
/// block selects one of the `2^s` smallest successors of the previous vertex.
/// Successor lists are shared between vertices with identical lists.
#[derive(Debug, Clone)]
pub struct GraphCodebook {
    params: ConstraintParams,
    m: usize,
    s: usize,
    vertices: Vec<u64>,
    map_of: Vec<u32>,
    maps: Vec<Vec<u32>>,
    inverse: Vec<HashMap<u32, u32>>,
}

pub fn build_codebook(g: &ConstraintGraph, sub: &MaxSubgraph) -> Result<GraphCodebook> {
    let size = 1usize << sub.s;
    if sub.vertices.len() < size {
        return Err(Error::Params(format!(
            "subgraph has {} vertices, fewer than 2^{}",
            sub.vertices.len(),
            sub.s
        )));
    }
    let mut by_class: HashMap<u32, u32> = HashMap::new();
    let mut maps: Vec<Vec<u32>> = Vec::new();
    let mut map_of = Vec::with_capacity(sub.vertices.len());
    for &u in &sub.vertices {
        let sc = g.suffix_class[u];
        let id = match by_class.get(&sc) {
            Some(&id) => id,
            None => {
                let succ: Vec<u32> = sub
                    .vertices
                    .iter()
                    .enumerate()
                    .filter(|(_, &v)| g.has_edge(u, v))
                    .map(|(new_idx, _)| new_idx as u32)
                    .take(size)
                    .collect();
                if succ.len() < size {
                    return Err(Error::Params(format!(
                        "vertex {} has only {} successors in the subgraph, need {size}",
                        g.vertex(u),
                        succ.len()
                    )));
                }
                maps.push(succ);
                let id = (maps.len() - 1) as u32;
                by_class.insert(sc, id);
                id
            }
        };
        map_of.push(id);
    }
    let vertices = sub.vertices.iter().map(|&v| g.vertices[v]).collect();
    Ok(GraphCodebook::assemble(
        g.params, g.m, sub.s, vertices, map_of, maps,
    ))
}

/// Winner of [`search_best_block`] together with the `s(m)` found per block length.
#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub m: usize,
    pub s: usize,
    pub codebook: GraphCodebook,
    pub per_length: Vec<(usize, Option<usize>)>,
}

impl SearchOutcome {
    pub fn rate(&self) -> f64 {
        self.s as f64 / self.m as f64
    }
}

/// Runs the peeling search for each block length and keeps the best rate,
/// preferring the shorter block on ties.
pub fn search_best_block(p: ConstraintParams, m_min: usize, m_max: usize) -> Result<SearchOutcome> {
    if m_min < class_bits(&p) || m_min > m_max {
        return Err(Error::Params(format!(
            "block range {m_min}..={m_max} invalid for ell = {}",
            p.ell()
        )));
    }
    let mut per_length = Vec::new();
    let mut best: Option<(usize, ConstraintGraph, MaxSubgraph)> = None;
    for m in m_min..=m_max {
        let g = build_graph(p, m)?;
        let found = find_max_subgraph(&g);
        per_length.push((m, found.as_ref().map(|f| f.s)));
        let Some(sub) = found else { continue };
        let better = match &best {
            None => true,
            Some((bm, _, bsub)) => sub.s * bm > bsub.s * m,
        };
        if better {
            best = Some((m, g, sub));
        }
    }
    let (m, g, sub) = best.ok_or(Error::NoCode { m_min, m_max })?;
    if sub.s == 0 {
        return Err(Error::NoCode { m_min, m_max });
    }
    let codebook = build_codebook(&g, &sub)?;
    Ok(SearchOutcome {
        m,
        s: sub.s,
        codebook,
        per_length,
    })
}

const MAGIC: &[u8; 4] = b"LBG1";

impl GraphCodebook {
    fn assemble(
        params: ConstraintParams,
        m: usize,
        s: usize,
        vertices: Vec<u64>,
        map_of: Vec<u32>,
        maps: Vec<Vec<u32>>,
    ) -> Self {
        let inverse = maps
            .iter()
            .map(|map| {
                map.iter()
                    .enumerate()
                    .map(|(i, &v)| (v, i as u32))
                    .collect()
            })
            .collect();
        GraphCodebook {
            params,
            m,
            s,
            vertices,
            map_of,
            maps,
            inverse,
        }
    }

    pub fn params(&self) -> ConstraintParams {
        self.params
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn rate(&self) -> f64 {
        self.s as f64 / self.m as f64
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex(&self, idx: usize) -> Word {
        Word::from_u64(self.vertices[idx], self.m)
    }

    /// Vertices selected by the first block, in message order.
    pub fn initial_map(&self) -> impl Iterator<Item = Word> + '_ {
        (0..1usize << self.s).map(|i| self.vertex(i))
    }

    /// Successors selected by a block following vertex `idx`, in message order.
    pub fn edge_map(&self, idx: usize) -> impl Iterator<Item = Word> + '_ {
        self.maps[self.map_of[idx] as usize]
            .iter()
            .map(|&v| self.vertex(v as usize))
    }

    fn index_of(&self, block: &[u8]) -> Option<usize> {
        let value = block.iter().fold(0u64, |acc, &b| acc << 1 | b as u64);
        self.vertices.binary_search(&value).ok()
    }

    pub fn encode(&self, msg: &Word) -> Result<Word> {
        if !msg.len().is_multiple_of(self.s) {
            return Err(Error::Framing(format!(
                "message length {} is not a multiple of {}",
                msg.len(),
                self.s
            )));
        }
        let mut out = Vec::with_capacity(msg.len() / self.s * self.m);
        let mut current: Option<usize> = None;
        for block in msg.bits().chunks(self.s) {
            let idx = block.iter().fold(0usize, |acc, &b| acc << 1 | b as usize);
            let next = match current {
                None => idx,
                Some(u) => self.maps[self.map_of[u] as usize][idx] as usize,
            };
            let value = self.vertices[next];
            out.extend((0..self.m).rev().map(|k| (value >> k & 1) as u8));
            current = Some(next);
        }
        Ok(Word::from_bits(out).expect("binary"))
    }

    pub fn decode(&self, code: &Word) -> Result<Word> {
        if !code.len().is_multiple_of(self.m) {
            return Err(Error::Framing(format!(
                "codeword length {} is not a multiple of {}",
                code.len(),
                self.m
            )));
        }
        let mut out = Vec::with_capacity(code.len() / self.m * self.s);
        let mut current: Option<usize> = None;
        for (k, block) in code.bits().chunks(self.m).enumerate() {
            let v = self.index_of(block).ok_or_else(|| {
                Error::Corruption(format!("block {} is not a vertex of the code", k + 1))
            })?;
            let msg_idx = match current {
                None if v < 1 << self.s => v as u32,
                None => {
                    return Err(Error::Corruption(
                        "first block is not in the initial map".into(),
                    ))
                }
                Some(u) => *self.inverse[self.map_of[u] as usize]
                    .get(&(v as u32))
                    .ok_or_else(|| {
                        Error::Corruption(format!(
                            "block {} does not follow block {} in the code",
                            k + 1,
                            k
                        ))
                    })?,
            };
            out.extend((0..self.s).rev().map(|b| (msg_idx >> b & 1) as u8));
            current = Some(v);
        }
        Ok(Word::from_bits(out).expect("binary"))
    }

    /// Serializes in the `LBG1` container: magic, `ell`, `delta`, `m`, `s`
    /// as big-endian `u16`, the vertex count as big-endian `u64`, each vertex
    /// packed most-significant-bit-first into `ceil(m/8)` bytes, then for
    /// every vertex its `2^s` successor indices as big-endian `u32`.
    pub fn write_to<W: Write>(&self, mut out: W) -> Result<()> {
        out.write_all(MAGIC)?;
        for field in [self.params.ell(), self.params.delta(), self.m, self.s] {
            let field = u16::try_from(field)
                .map_err(|_| Error::Format(format!("header field {field} exceeds u16")))?;
            out.write_all(&field.to_be_bytes())?;
        }
        out.write_all(&(self.vertices.len() as u64).to_be_bytes())?;
        let bytes_per_vertex = self.m.div_ceil(8);
        let pad = bytes_per_vertex * 8 - self.m;
        for &v in &self.vertices {
            let aligned = v << pad;
            out.write_all(&aligned.to_be_bytes()[8 - bytes_per_vertex..])?;
        }
        let mut buf = Vec::with_capacity(4 << self.s);
        for &id in &self.map_of {
            buf.clear();
            for &n in &self.maps[id as usize] {
                buf.extend_from_slice(&n.to_be_bytes());
            }
            out.write_all(&buf)?;
        }
        out.flush()?;
        Ok(())
    }

    /// Parses an `LBG1` container and checks that every stored transition is
    /// an edge of the constraint graph, so a loaded code always emits
    /// balanced words.
    pub fn read_from<R: Read>(mut input: R) -> Result<Self> {
        let mut magic = [0u8; 4];
        input.read_exact(&mut magic)?;
        if &magic != MAGIC {
            return Err(Error::Format("missing LBG1 magic".into()));
        }
        let mut header = [0u8; 16];
        input.read_exact(&mut header)?;
        let field = |i: usize| u16::from_be_bytes([header[2 * i], header[2 * i + 1]]) as usize;
        let params = ConstraintParams::new(field(0), field(1))?;
        let (m, s) = (field(2), field(3));
        let count = u64::from_be_bytes(header[8..16].try_into().expect("8 bytes"));
        if m < class_bits(&params) || m > MAX_BLOCK_LENGTH || s > m || s > 31 {
            return Err(Error::Format(format!(
                "unsupported block sizes m = {m}, s = {s}"
            )));
        }
        let size = 1usize << s;
        if count < size as u64 || count > 1u64 << m {
            return Err(Error::Format(format!("vertex count {count} out of range")));
        }
        let count = count as usize;

        let bytes_per_vertex = m.div_ceil(8);
        let pad = bytes_per_vertex * 8 - m;
        let mut raw = vec![0u8; bytes_per_vertex];
        let mut vertices = Vec::with_capacity(count);
        for _ in 0..count {
            input.read_exact(&mut raw)?;
            let aligned = raw.iter().fold(0u64, |acc, &b| acc << 8 | b as u64);
            if aligned & ((1 << pad) - 1) != 0 {
                return Err(Error::Format("nonzero padding in vertex".into()));
            }
            vertices.push(aligned >> pad);
        }
        if vertices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Format(
                "vertex list is not strictly increasing".into(),
            ));
        }
        if let Some(v) = vertices
            .iter()
            .find(|&&v| !is_locally_balanced_u64(v, m, &params))
        {
            return Err(Error::Format(format!(
                "vertex {} is not balanced",
                Word::from_u64(*v, m)
            )));
        }

        let mut ids: HashMap<Vec<u32>, u32> = HashMap::new();
        let mut maps = Vec::new();
        let mut map_of = Vec::with_capacity(count);
        let mut buf = vec![0u8; 4 * size];
        for u in 0..count {
            input.read_exact(&mut buf)?;
            let map: Vec<u32> = buf
                .chunks_exact(4)
                .map(|c| u32::from_be_bytes(c.try_into().expect("4 bytes")))
                .collect();
            if let Some(&id) = ids.get(&map) {
                map_of.push(id);
                continue;
            }
            let mut seen = map.clone();
            seen.sort_unstable();
            seen.dedup();
            if seen.len() != size || seen.last().is_some_and(|&v| v as usize >= count) {
                return Err(Error::Format(format!(
                    "successor list of vertex {u} has repeated or out-of-range entries"
                )));
            }
            for &v in &map {
                let joined = vertices[u] << m | vertices[v as usize];
                if !is_locally_balanced_u64(joined, 2 * m, &params) {
                    return Err(Error::Format(format!(
                        "transition {} -> {} is not balanced",
                        Word::from_u64(vertices[u], m),
                        Word::from_u64(vertices[v as usize], m)
                    )));
                }
            }
            let id = maps.len() as u32;
            ids.insert(map.clone(), id);
            maps.push(map);
            map_of.push(id);
        }
        Ok(GraphCodebook::assemble(
            params, m, s, vertices, map_of, maps,
        ))
    }

    pub fn save(&self, path: &std::path::Path) -> Result<()> {
        let file = std::fs::File::create(path)?;
        self.write_to(std::io::BufWriter::new(file))
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        Self::read_from(std::io::BufReader::new(file))
    }
}

pub fn encode_graph(msg: &Word, cb: &GraphCodebook) -> Result<Word> {
    cb.encode(msg)
}

pub fn decode_graph(code: &Word, cb: &GraphCodebook) -> Result<Word> {
    cb.decode(code)
}
