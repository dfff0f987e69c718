//! Capacities of the locally balanced and bounded-RDS constraints.
//!
//! `C(ell, delta)` is `log2` of the spectral radius of the de Bruijn subgraph
//! whose vertices are the balanced `ell`-bit words; `C_RDS(delta)` has the
//! closed form `log2(2 cos(pi / (delta + 2)))`.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::words::ConstraintParams;

pub const DEFAULT_TOLERANCE: f64 = 1e-9;
pub const DEFAULT_MAX_ITERATIONS: usize = 100_000;

/// Directed graph stored as out-neighbor lists.
#[derive(Debug, Clone, Default)]
pub struct SparseDigraph {
    labels: Vec<u64>,
    adjacency: Vec<Vec<u32>>,
}

impl SparseDigraph {
    pub fn from_adjacency(adjacency: Vec<Vec<u32>>) -> Self {
        let labels = (0..adjacency.len() as u64).collect();
        SparseDigraph { labels, adjacency }
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum()
    }

    /// Vertex label; for de Bruijn subgraphs the word packed as in `Word::from_u64`.
    pub fn label(&self, v: usize) -> u64 {
        self.labels[v]
    }

    pub fn successors(&self, v: usize) -> &[u32] {
        &self.adjacency[v]
    }
}

/// Subgraph of the order-`ell` de Bruijn graph induced by the words whose
/// weight lies in `[ell/2 - delta, ell/2 + delta]`.
pub fn build_debruijn_subgraph(p: &ConstraintParams) -> Result<SparseDigraph> {
    let ell = p.ell();
    if ell > 30 {
        return Err(Error::Params(format!(
            "window {ell} is too large to enumerate"
        )));
    }
    let labels: Vec<u64> = (0..1u64 << ell)
        .filter(|v| p.admits(v.count_ones() as usize))
        .collect();
    let mask = (1u64 << ell) - 1;
    let adjacency = labels
        .iter()
        .map(|&u| {
            [0u64, 1]
                .iter()
                .filter_map(|&bit| {
                    let v = (u << 1 | bit) & mask;
                    labels.binary_search(&v).ok().map(|i| i as u32)
                })
                .collect()
        })
        .collect();
    Ok(SparseDigraph { labels, adjacency })
}

/// Path graph on the `delta + 1` RDS levels of a `delta`-RDS word.
pub fn rds_level_graph(delta: usize) -> SparseDigraph {
    let levels = delta + 1;
    let adjacency = (0..levels)
        .map(|i| {
            let mut succ = Vec::new();
            if i > 0 {
                succ.push(i as u32 - 1);
            }
            if i + 1 < levels {
                succ.push(i as u32 + 1);
            }
            succ
        })
        .collect();
    SparseDigraph::from_adjacency(adjacency)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralResult {
    pub lambda: f64,
    pub capacity: f64,
    pub iterations: usize,
    pub residual: f64,
}

/// Dominant eigenvalue by power iteration from the all-ones vector with
/// max-norm rescaling. Converged once both the eigenvalue estimate and the
/// normalized iterate move by less than `tol` in one step.
///
/// The iteration runs on `A + I`, whose Perron root is `lambda + 1` and which
/// is aperiodic even when `A` is not (bipartite graphs such as the RDS level
/// path would otherwise oscillate forever).
pub fn spectral_radius(g: &SparseDigraph, tol: f64, max_iter: usize) -> Result<SpectralResult> {
    let n = g.vertex_count();
    if n == 0 {
        return Err(Error::Params("spectral radius of an empty graph".into()));
    }
    let mut x = vec![1.0f64; n];
    let mut next = vec![0.0f64; n];
    let mut estimate = f64::NAN;
    for iteration in 1..=max_iter {
        next.par_iter_mut().enumerate().for_each(|(u, y)| {
            *y = x[u] + g.adjacency[u].iter().map(|&v| x[v as usize]).sum::<f64>();
        });
        let scale = next.iter().copied().fold(0.0, f64::max);
        if scale == 0.0 {
            return Err(Error::Params("iteration vanished".into()));
        }
        let mut shift = 0.0f64;
        for (y, &old) in next.iter_mut().zip(&x) {
            *y /= scale;
            shift = shift.max((*y - old).abs());
        }
        std::mem::swap(&mut x, &mut next);
        // x had max-norm 1, so the growth factor of A + I is `scale`.
        let lambda = scale - 1.0;
        // The max entry can sit on a locally flat region for a few steps, so
        // the estimate alone may stall early; the iterate must settle too.
        let residual = (lambda - estimate).abs().max(shift);
        estimate = lambda;
        if residual < tol {
            return Ok(SpectralResult {
                lambda,
                capacity: lambda.log2(),
                iterations: iteration,
                residual,
            });
        }
        if iteration == max_iter {
            return Err(Error::Convergence {
                iterations: iteration,
                residual,
            });
        }
    }
    Err(Error::Convergence {
        iterations: max_iter,
        residual: f64::INFINITY,
    })
}

/// `C(ell, delta)` in bits per symbol.
pub fn capacity_lb(p: &ConstraintParams) -> Result<f64> {
    let g = build_debruijn_subgraph(p)?;
    Ok(spectral_radius(&g, DEFAULT_TOLERANCE, DEFAULT_MAX_ITERATIONS)?.capacity)
}

/// `C_RDS(delta)`: capacity of words whose RDS spread is at most `delta`.
pub fn capacity_rds(delta: usize) -> Result<f64> {
    if delta == 0 {
        return Err(Error::Params("delta must be at least 1".into()));
    }
    Ok((2.0 * (std::f64::consts::PI / (delta as f64 + 2.0)).cos()).log2())
}

/// Capacity of the strongly `(ell, delta)`-balanced constraint, which equals
/// `C_RDS(2 delta + 1)` for every even `ell`.
pub fn capacity_strong(delta: usize) -> Result<f64> {
    capacity_rds(2 * delta + 1)
}
