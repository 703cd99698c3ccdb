//! Synthesis of finite graphs whose non-backtracking Perron root lies near a target.
//!
//! Pipeline: pick `K` so that the target sits strictly between `(d-1)^{1/(2K)}` and
//! `(d-1)^{1/K}`, pick `n` so that a single subdivision step of a graph of girth at least
//! `n + 1` moves the root by less than the window, lift `K_{d+1}` to a cover of
//! sufficient girth, subdivide every edge `K` times, then subdivide the edges one at a time
//! until the enclosure of the root lands in `(alpha - eps, alpha + eps)`.

mod certificate;
mod cover;
mod params;
mod pipeline;
mod sweep;

use std::fmt;

use thiserror::Error;

use crate::graph::GraphError;
use crate::spectral::SpectralError;

pub use certificate::{verify_certificate, Certificate, CertificateDocument, Check, Stats};
pub use cover::{high_girth_cover, Covering};
pub use params::{base_graph, moore_bound, select_parameters, step_bound, Limits, SynthesisParams};
pub use pipeline::{synthesize, synthesize_with_base};
pub use sweep::{subdivision_sweep, SweepOptions, SweepOutcome, SweepTrace, TraceStep};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    SelectParameters,
    BaseGraph,
    HighGirthCover,
    Subdivide,
    Sweep,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::SelectParameters => "select_parameters",
            Stage::BaseGraph => "base_graph",
            Stage::HighGirthCover => "high_girth_cover",
            Stage::Subdivide => "subdivide_uniform",
            Stage::Sweep => "subdivision_sweep",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FailureKind {
    InvalidInput(String),
    /// Target outside the open interval `(1, 2r - 1)`.
    TargetOutOfRange { alpha: f64, upper: f64 },
    /// A resource limit would be or was exceeded; `required` is the smallest sufficient value
    /// when it is known.
    LimitsExceeded {
        what: &'static str,
        limit: u128,
        required: Option<u128>,
    },
    CoverBudgetExhausted {
        best_girth: Option<usize>,
        attempts: usize,
    },
    NonConvergence { step: usize },
    WindowMissed,
    EndpointMismatch { expected: f64, lower: f64, upper: f64 },
    Graph(GraphError),
    Spectral(SpectralError),
}

impl fmt::Display for FailureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FailureKind::InvalidInput(m) => write!(f, "invalid input: {m}"),
            FailureKind::TargetOutOfRange { alpha, upper } => write!(
                f,
                "target {alpha} is not strictly inside the admissible open interval (1, {upper}); \
                 the endpoints are realized trivially by a cycle (growth 1) and by the rose of \
                 loops (growth {upper})"
            ),
            FailureKind::LimitsExceeded {
                what,
                limit,
                required,
            } => {
                write!(f, "limit exceeded: {what} (limit {limit}")?;
                if let Some(req) = required {
                    write!(f, ", at least {req} needed")?;
                }
                f.write_str(")")
            }
            FailureKind::CoverBudgetExhausted {
                best_girth,
                attempts,
            } => write!(
                f,
                "cover search budget exhausted after {attempts} attempts (best girth {})",
                best_girth.map_or("infinite".to_string(), |g| g.to_string())
            ),
            FailureKind::NonConvergence { step } => {
                write!(f, "eigensolver did not converge at step {step}")
            }
            FailureKind::WindowMissed => f.write_str("sweep finished without entering the window"),
            FailureKind::EndpointMismatch {
                expected,
                lower,
                upper,
            } => write!(
                f,
                "final enclosure [{lower}, {upper}] does not contain the endpoint {expected}"
            ),
            FailureKind::Graph(e) => write!(f, "{e}"),
            FailureKind::Spectral(e) => write!(f, "{e}"),
        }
    }
}

/// A pipeline failure: which stage failed, why, and the sweep trace recorded so far.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("{stage}: {kind}")]
pub struct SynthesisError {
    pub stage: Stage,
    pub kind: FailureKind,
    pub trace: SweepTrace,
}

impl SynthesisError {
    pub fn new(stage: Stage, kind: FailureKind) -> Self {
        SynthesisError {
            stage,
            kind,
            trace: SweepTrace::default(),
        }
    }

    pub fn with_trace(mut self, trace: SweepTrace) -> Self {
        self.trace = trace;
        self
    }

    /// Resource exhaustion (limits, search budget, solver iterations) as opposed to bad input.
    pub fn is_resource(&self) -> bool {
        matches!(
            self.kind,
            FailureKind::LimitsExceeded { .. }
                | FailureKind::CoverBudgetExhausted { .. }
                | FailureKind::NonConvergence { .. }
        )
    }

    pub fn is_invalid_input(&self) -> bool {
        matches!(
            self.kind,
            FailureKind::InvalidInput(_) | FailureKind::TargetOutOfRange { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, SynthesisError>;

/// Per-stage random streams derived from the single user seed.
pub(crate) mod streams {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    pub const COVER: u64 = 1;

    pub fn rng(seed: u64, stream: u64, counter: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        rng.set_word_pos(u128::from(counter) << 32);
        rng
    }
}
