use num_bigint::BigUint;
use serde::Serialize;

use crate::graph::Multigraph;
use crate::spectral::{self, SpectralEstimate};

use super::{augment_loops, label, strip_loops, two_factorize, LabeledGraph, Result};
use super::{StallingsError, Word};

pub const DEFAULT_NMAX: usize = 60;

#[derive(Debug, Clone, PartialEq)]
pub struct SubgroupReport {
    pub r: usize,
    pub basepoint: usize,
    pub rank: usize,
    pub generators: Vec<Word>,
    pub gamma: Vec<BigUint>,
    pub omega_estimate: f64,
    pub lambda: SpectralEstimate,
    pub core: LabeledGraph,
}

#[derive(Serialize)]
struct ReportDocument<'a> {
    r: usize,
    basepoint: usize,
    rank: usize,
    generators: Vec<String>,
    gamma: Vec<String>,
    omega_estimate: f64,
    lambda: &'a SpectralEstimate,
}

impl SubgroupReport {
    /// Generators file: a header `rank=<m> r=<r> basepoint=<v>` then one word per line.
    pub fn generators_file(&self) -> String {
        let mut out = format!("rank={} r={} basepoint={}\n", self.rank, self.r, self.basepoint);
        for w in &self.generators {
            out.push_str(&w.to_string());
            out.push('\n');
        }
        out
    }

    /// Machine-readable report (γ values as decimal strings to keep them exact).
    pub fn to_json(&self) -> String {
        let doc = ReportDocument {
            r: self.r,
            basepoint: self.basepoint,
            rank: self.rank,
            generators: self.generators.iter().map(Word::to_string).collect(),
            gamma: self.gamma.iter().map(BigUint::to_string).collect(),
            omega_estimate: self.omega_estimate,
            lambda: &self.lambda,
        };
        let mut text = serde_json::to_string_pretty(&doc).expect("report serializes");
        text.push('\n');
        text
    }
}

/// Parses a generators file back into `(rank, r, basepoint, words)`.
pub fn parse_generators_file(text: &str) -> Result<(usize, usize, usize, Vec<Word>)> {
    let bad = |m: &str| StallingsError::BadGeneratorsFile(m.to_string());
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| bad("missing header"))?;
    let mut fields = [None; 3];
    for (slot, key) in fields.iter_mut().zip(["rank=", "r=", "basepoint="]) {
        *slot = header
            .split_whitespace()
            .find_map(|t| t.strip_prefix(key))
            .and_then(|v| v.parse::<usize>().ok());
    }
    let [Some(rank), Some(r), Some(base)] = fields else {
        return Err(bad("header must read rank=<m> r=<r> basepoint=<v>"));
    };
    let words = lines
        .filter(|l| !l.trim().is_empty())
        .map(str::parse)
        .collect::<Result<Vec<Word>>>()?;
    if words.len() != rank {
        return Err(bad("word count differs from rank"));
    }
    Ok((rank, r, base, words))
}

/// Full reduction from a graph to its subgroup: pad with loops, 2-factorise, label, strip
/// the padding, then read off the basis, the ball counts and both growth estimates.
pub fn subgroup_report(
    g: &Multigraph,
    r: usize,
    basepoint: usize,
    n_max: usize,
) -> Result<SubgroupReport> {
    if basepoint >= g.vertex_count() {
        return Err(StallingsError::BadBasepoint(basepoint));
    }
    if !g.is_connected() {
        return Err(StallingsError::Disconnected);
    }
    if let Some((v, d)) = g.degrees().into_iter().enumerate().find(|&(_, d)| d < 2) {
        return Err(StallingsError::LowDegree {
            vertex: v,
            degree: d,
        });
    }
    let aug = augment_loops(g, r)?;
    let factors = two_factorize(&aug.graph)?;
    let padded = label(&aug.graph, &factors, basepoint)?;
    let core = strip_loops(&padded, &aug.added)?;
    let generators = core.free_basis()?;
    let gamma = core.ball_count(n_max)?;
    let omega_estimate = spectral::ratio_estimate(&gamma)?;
    let lambda = spectral::growth_rate(g)?;
    Ok(SubgroupReport {
        r,
        basepoint,
        rank: generators.len(),
        generators,
        gamma,
        omega_estimate,
        lambda,
        core,
    })
}
