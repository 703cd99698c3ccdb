//! Non-backtracking operator and certified Perron-root enclosures.
//!
//! The operator acts on directed sides: `s -> t` is an entry iff `head(s) = tail(t)` and
//! `t != rev(s)`. For a connected graph with minimum degree 2 that is not a cycle the
//! operator is irreducible, and its Perron root equals the growth rate of the universal
//! cover. The root is enclosed by Collatz–Wielandt bounds of power iteration on `B + I`.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{rev, Multigraph};

pub const DEFAULT_TOLERANCE: f64 = 1e-9;
pub const DEFAULT_MAX_ITER: usize = 1_000_000;

// Below this dimension the sequential loop beats the rayon overhead.
const PARALLEL_THRESHOLD: usize = 1 << 15;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("graph has no edges")]
    NoEdges,
    #[error("non-backtracking operator is not strongly connected")]
    NotStronglyConnected,
    #[error("graph is disconnected")]
    Disconnected,
    #[error("vertex {0} has degree {1}; minimum degree 2 required")]
    LowDegree(usize, usize),
    #[error("vertex {0} out of range")]
    VertexOutOfRange(usize),
    #[error("start vector must be strictly positive with one entry per side")]
    BadStartVector,
    #[error("need at least 4 steps of counts, got {0}")]
    TooFewCounts(usize),
    #[error("walk counts vanish in the tail")]
    VanishingCounts,
}

pub type Result<T> = std::result::Result<T, SpectralError>;

/// Sparse 0/1 non-backtracking operator in row-compressed form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NbOperator {
    offsets: Vec<usize>,
    successors: Vec<usize>,
}

impl NbOperator {
    pub fn new(g: &Multigraph) -> Result<Self> {
        if g.edge_count() == 0 {
            return Err(SpectralError::NoEdges);
        }
        let dim = g.side_count();
        let mut offsets = Vec::with_capacity(dim + 1);
        let mut successors = Vec::new();
        offsets.push(0);
        for s in 0..dim {
            let back = rev(s);
            successors.extend(g.out_sides(g.head(s)).iter().filter(|&&t| t != back));
            offsets.push(successors.len());
        }
        Ok(NbOperator {
            offsets,
            successors,
        })
    }

    pub fn dim(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn successors(&self, s: usize) -> &[usize] {
        &self.successors[self.offsets[s]..self.offsets[s + 1]]
    }

    pub fn nnz(&self) -> usize {
        self.successors.len()
    }

    /// `y = (B + I) x`, each row summed in successor order.
    fn apply_shifted(&self, x: &[f64], y: &mut [f64]) {
        let row = |s: usize| x[s] + self.successors(s).iter().map(|&t| x[t]).sum::<f64>();
        if self.dim() >= PARALLEL_THRESHOLD {
            y.par_iter_mut().enumerate().for_each(|(s, ys)| *ys = row(s));
        } else {
            y.iter_mut().enumerate().for_each(|(s, ys)| *ys = row(s));
        }
    }

    /// Forward reachability from `start` in the side graph.
    fn reach(&self, start: usize) -> Vec<bool> {
        let mut seen = vec![false; self.dim()];
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(s) = stack.pop() {
            for &t in self.successors(s) {
                if !seen[t] {
                    seen[t] = true;
                    stack.push(t);
                }
            }
        }
        seen
    }

    /// True iff the side graph is a single strongly connected component.
    ///
    /// The operator satisfies `s -> t` iff `rev(t) -> rev(s)`, so the set of sides that
    /// reach side 0 is the reversal of the set reachable from side 1.
    pub fn is_strongly_connected(&self) -> bool {
        self.dim() > 0 && self.reach(0).iter().all(|&b| b) && self.reach(1).iter().all(|&b| b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralEstimate {
    pub lower: f64,
    pub upper: f64,
    pub iterations: usize,
    pub converged: bool,
}

impl SpectralEstimate {
    pub fn exact(value: f64) -> Self {
        SpectralEstimate {
            lower: value,
            upper: value,
            iterations: 0,
            converged: true,
        }
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lower + self.upper)
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }

    /// `|mid - target| + width / 2`, the worst-case distance of the enclosed root from `target`.
    pub fn distance_bound(&self, target: f64) -> f64 {
        (self.midpoint() - target).abs() + 0.5 * self.width()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerronOptions {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for PerronOptions {
    fn default() -> Self {
        PerronOptions {
            tol: DEFAULT_TOLERANCE,
            max_iter: DEFAULT_MAX_ITER,
        }
    }
}

/// Perron-root enclosure by power iteration on `B + I` from the all-ones vector.
pub fn perron(op: &NbOperator, tol: f64, max_iter: usize) -> Result<SpectralEstimate> {
    let start = vec![1.0; op.dim()];
    perron_from(op, &start, PerronOptions { tol, max_iter }).map(|(est, _)| est)
}

/// Same as [`perron`] from a caller-supplied strictly positive start vector.
/// Also returns the final (max-normalised) iterate for warm starts.
pub fn perron_from(
    op: &NbOperator,
    start: &[f64],
    opts: PerronOptions,
) -> Result<(SpectralEstimate, Vec<f64>)> {
    if start.len() != op.dim() || !start.iter().all(|&v| v > 0.0 && v.is_finite()) {
        return Err(SpectralError::BadStartVector);
    }
    if !op.is_strongly_connected() {
        return Err(SpectralError::NotStronglyConnected);
    }
    let mut x = start.to_vec();
    let mut y = vec![0.0; op.dim()];
    let mut est = SpectralEstimate {
        lower: 0.0,
        upper: f64::INFINITY,
        iterations: 0,
        converged: false,
    };
    for iter in 1..=opts.max_iter.max(1) {
        op.apply_shifted(&x, &mut y);
        let (mut lo, mut hi, mut top) = (f64::INFINITY, 0.0_f64, 0.0_f64);
        for (&ys, &xs) in y.iter().zip(&x) {
            let q = ys / xs;
            lo = lo.min(q);
            hi = hi.max(q);
            top = top.max(ys);
        }
        // Bounds only tighten as the iterate converges; keep the best seen.
        est.lower = est.lower.max(lo - 1.0);
        est.upper = est.upper.min(hi - 1.0);
        est.iterations = iter;
        if est.upper - est.lower <= opts.tol {
            est.converged = true;
        }
        let inv = 1.0 / top;
        x.iter_mut().zip(&y).for_each(|(xs, &ys)| *xs = ys * inv);
        if est.converged {
            break;
        }
    }
    if est.lower > est.upper {
        // Rounding in the last place can cross the bounds at convergence.
        let mid = est.midpoint();
        est.lower = mid;
        est.upper = mid;
    }
    Ok((est, x))
}

fn check_growth_preconditions(g: &Multigraph) -> Result<()> {
    if g.edge_count() == 0 {
        return Err(SpectralError::NoEdges);
    }
    if !g.is_connected() {
        return Err(SpectralError::Disconnected);
    }
    if let Some((v, d)) = g.degrees().into_iter().enumerate().find(|&(_, d)| d < 2) {
        return Err(SpectralError::LowDegree(v, d));
    }
    Ok(())
}

/// Growth rate of the universal cover of `g` at the default tolerance.
pub fn growth_rate(g: &Multigraph) -> Result<SpectralEstimate> {
    growth_rate_with(g, PerronOptions::default())
}

pub fn growth_rate_with(g: &Multigraph, opts: PerronOptions) -> Result<SpectralEstimate> {
    check_growth_preconditions(g)?;
    if g.is_cycle() {
        return Ok(SpectralEstimate::exact(1.0));
    }
    let op = NbOperator::new(g)?;
    perron(&op, opts.tol, opts.max_iter)
}

/// Sphere sizes `|S_0|, ..., |S_n|` of the universal cover around a lift of `v`,
/// i.e. the number of non-backtracking walks of each length starting at `v`.
pub fn nb_walk_counts(g: &Multigraph, v: usize, n: usize) -> Result<Vec<BigUint>> {
    if v >= g.vertex_count() {
        return Err(SpectralError::VertexOutOfRange(v));
    }
    let mut counts = vec![BigUint::from(1u32)];
    if n == 0 {
        return Ok(counts);
    }
    counts.push(BigUint::from(g.degree(v)));
    if n == 1 || g.edge_count() == 0 {
        counts.resize(n + 1, BigUint::zero());
        return Ok(counts);
    }
    let op = NbOperator::new(g)?;
    let mut frontier = vec![BigUint::zero(); op.dim()];
    for &s in g.out_sides(v) {
        frontier[s] += 1u32;
    }
    let mut next = vec![BigUint::zero(); op.dim()];
    for _ in 2..=n {
        next.iter_mut().for_each(Zero::set_zero);
        for (s, c) in frontier.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for &t in op.successors(s) {
                next[t] += c;
            }
        }
        std::mem::swap(&mut frontier, &mut next);
        counts.push(frontier.iter().sum());
    }
    Ok(counts)
}

/// Natural logarithm of a big integer without overflowing `f64`.
pub fn ln_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().unwrap_or(f64::INFINITY);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Geometric-mean growth ratio over the last `ceil(n / 2)` steps of `counts`
/// (`counts[0..=n]`).
///
/// Counts of subdivided graphs move in plateaus, so the ratio is taken between the first and
/// last change points of the tail (nonzero terms differing from their predecessor), which sit
/// at the same phase of the staircase. Tails with fewer than two change points fall back to
/// the first and last nonzero terms.
pub fn ratio_estimate(counts: &[BigUint]) -> Result<f64> {
    if counts.len() < 5 {
        return Err(SpectralError::TooFewCounts(counts.len().saturating_sub(1)));
    }
    let n = counts.len() - 1;
    let start = n - n.div_ceil(2);
    let nonzero: Vec<usize> = (start..=n).filter(|&k| !counts[k].is_zero()).collect();
    let changes: Vec<usize> = nonzero
        .iter()
        .copied()
        .filter(|&k| counts[k] != counts[k - 1])
        .collect();
    let span = if changes.len() >= 2 { &changes } else { &nonzero };
    match (span.first(), span.last()) {
        (Some(&a), Some(&b)) if b > a => {
            Ok(((ln_big(&counts[b]) - ln_big(&counts[a])) / (b - a) as f64).exp())
        }
        _ => Err(SpectralError::VanishingCounts),
    }
}
