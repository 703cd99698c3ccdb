//! From graphs with even degrees to subgroups of the free group `F_r`.
//!
//! A connected graph with even degrees at most `2r` is padded with loops to a
//! `2r`-regular graph, split into `r` edge-disjoint 2-factors, and factor `k` is oriented
//! along its cycles and labelled `a_k`. The resulting labelling is deterministic and
//! codeterministic. Removing the padding loops leaves a folded labelled graph on the
//! original edges: the Stallings core of a subgroup `H`, whose reduced words are the
//! labels of closed non-backtracking walks at the basepoint.

mod factor;
mod labeled;
mod report;
mod word;

use thiserror::Error;

use crate::graph::GraphError;
use crate::spectral::SpectralError;

pub use factor::{augment_loops, label, strip_loops, two_factorize, Augmented, TwoFactorization};
pub use labeled::LabeledGraph;
pub use report::{parse_generators_file, subgroup_report, SubgroupReport, DEFAULT_NMAX};
pub use word::{Letter, Word};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StallingsError {
    #[error("vertex {vertex} has odd degree {degree}")]
    OddDegree { vertex: usize, degree: usize },
    #[error("vertex {vertex} has degree {degree} > 2r = {max}")]
    DegreeTooLarge {
        vertex: usize,
        degree: usize,
        max: usize,
    },
    #[error("vertex {vertex} has degree {degree}; minimum degree 2 required")]
    LowDegree { vertex: usize, degree: usize },
    #[error("graph is not regular of even degree")]
    NotRegular,
    #[error("graph is disconnected")]
    Disconnected,
    #[error("rank must be at least 1")]
    BadRank,
    #[error("perfect matching failed in round {0}")]
    MatchingFailed(usize),
    #[error("edge {0} is not an added loop")]
    LoopIdMismatch(usize),
    #[error("labelling does not cover the edges of the graph")]
    LabelCount,
    #[error("vertex {0} has two outgoing sides with the same label")]
    NotFolded(usize),
    #[error("vertex {0} has degree below 2 and is not the basepoint")]
    NotCore(usize),
    #[error("basepoint {0} out of range")]
    BadBasepoint(usize),
    #[error("word is not freely reduced")]
    NotReduced,
    #[error("unrecognised letter {0:?}")]
    BadToken(String),
    #[error("malformed generators file: {0}")]
    BadGeneratorsFile(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

pub type Result<T> = std::result::Result<T, StallingsError>;
