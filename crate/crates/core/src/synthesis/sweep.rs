use serde::{Deserialize, Serialize};

use crate::graph::Multigraph;
use crate::spectral::{self, NbOperator, PerronOptions, SpectralEstimate};

use super::{FailureKind, Result, Stage, SynthesisError, SynthesisParams};

/// One evaluated state of the sweep. Step `i > 0` subdivided edge `i - 1` of `G^0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceStep {
    pub i: usize,
    pub edge: Option<usize>,
    pub lower: f64,
    pub upper: f64,
}

impl TraceStep {
    pub fn estimate(&self) -> SpectralEstimate {
        SpectralEstimate {
            lower: self.lower,
            upper: self.upper,
            iterations: 0,
            converged: true,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SweepTrace(pub Vec<TraceStep>);

impl SweepTrace {
    pub fn steps(&self) -> &[TraceStep] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn last(&self) -> Option<&TraceStep> {
        self.0.last()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepOptions {
    /// Stop at the first state whose enclosure lies inside `(alpha - eps, alpha + eps)`.
    /// When false every edge is subdivided and the final state must enclose
    /// `(d-1)^{1/(2K)}`.
    pub stop_in_window: bool,
    /// Eigensolver tolerance; defaults to the parameters' sweep tolerance.
    pub tolerance: Option<f64>,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            stop_in_window: true,
            tolerance: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutcome {
    pub graph: Multigraph,
    pub estimate: SpectralEstimate,
    pub trace: SweepTrace,
    /// Index `i` of the returned state.
    pub steps: usize,
    /// Power iterations summed over all evaluations.
    pub iterations: usize,
}

fn in_window(est: &SpectralEstimate, alpha: f64, eps: f64) -> bool {
    alpha - eps < est.lower && est.upper < alpha + eps
}

/// Subdivides the edges of `g0` one at a time in index order, enclosing the root after
/// every step. Each evaluation is warm-started from the previous Perron vector: the new
/// edge `(w, v)` inherits the weights of the sides of the edge it was split from.
pub fn subdivision_sweep(
    g0: &Multigraph,
    params: &SynthesisParams,
    options: SweepOptions,
) -> Result<SweepOutcome> {
    let fail = |kind| SynthesisError::new(Stage::Sweep, kind);
    let opts = PerronOptions {
        tol: options.tolerance.unwrap_or_else(|| params.tolerance()),
        max_iter: params.limits.max_iters,
    };
    let total = g0.edge_count();
    let mut trace = SweepTrace::default();
    let mut graph = g0.clone();
    let mut vector = vec![1.0; graph.side_count()];
    let mut iterations = 0;
    for i in 0..=total {
        let edge = (i > 0).then(|| i - 1);
        if let Some(e) = edge {
            if graph.vertex_count() >= params.limits.max_vertices {
                return Err(fail(FailureKind::LimitsExceeded {
                    what: "max vertices (sweep)",
                    limit: params.limits.max_vertices as u128,
                    required: Some(graph.vertex_count() as u128 + 1),
                })
                .with_trace(trace));
            }
            graph = graph
                .subdivide_edge(e)
                .map_err(|err| fail(FailureKind::Graph(err)).with_trace(trace.clone()))?;
            vector.push(vector[2 * e]);
            vector.push(vector[2 * e + 1]);
        }
        let op = NbOperator::new(&graph)
            .map_err(|err| fail(FailureKind::Spectral(err)).with_trace(trace.clone()))?;
        let (est, next) = spectral::perron_from(&op, &vector, opts)
            .map_err(|err| fail(FailureKind::Spectral(err)).with_trace(trace.clone()))?;
        iterations += est.iterations;
        vector = next;
        trace.0.push(TraceStep {
            i,
            edge,
            lower: est.lower,
            upper: est.upper,
        });
        if !est.converged {
            return Err(fail(FailureKind::NonConvergence { step: i }).with_trace(trace));
        }
        if options.stop_in_window && in_window(&est, params.alpha, params.eps) {
            return Ok(SweepOutcome {
                graph,
                estimate: est,
                trace,
                steps: i,
                iterations,
            });
        }
        if i == total {
            if options.stop_in_window {
                return Err(fail(FailureKind::WindowMissed).with_trace(trace));
            }
            let expected = params.lower_endpoint();
            let slack = 4.0 * f64::EPSILON * expected;
            if est.lower - slack > expected || est.upper + slack < expected {
                return Err(fail(FailureKind::EndpointMismatch {
                    expected,
                    lower: est.lower,
                    upper: est.upper,
                })
                .with_trace(trace));
            }
            return Ok(SweepOutcome {
                graph,
                estimate: est,
                trace,
                steps: i,
                iterations,
            });
        }
    }
    unreachable!("loop returns at i == total")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synthesis::{select_parameters, Limits};

    fn k5_params(alpha: f64, eps: f64) -> SynthesisParams {
        let limits = Limits {
            girth_override: Some(3),
            ..Limits::unlimited()
        };
        select_parameters(2, alpha, eps, 0, limits).unwrap()
    }

    #[test]
    fn full_sweep_on_k5_reaches_square_root() {
        let p = k5_params(2.5, 0.3);
        assert_eq!(p.k, 1);
        let k5 = Multigraph::complete(5).unwrap();
        let out = subdivision_sweep(
            &k5,
            &p,
            SweepOptions {
                stop_in_window: false,
                tolerance: Some(1e-10),
            },
        )
        .unwrap();
        assert_eq!(out.steps, 10);
        assert_eq!(out.trace.len(), 11);
        assert!(out.trace.steps()[0].estimate().contains(3.0) || (out.trace.steps()[0].lower - 3.0).abs() < 1e-9);
        assert!((out.estimate.midpoint() - 3f64.sqrt()).abs() < 1e-6);
        assert_eq!(out.graph.vertex_count(), 15);
    }

    #[test]
    fn stops_at_zero_when_already_inside() {
        let p = k5_params(2.99, 0.05);
        let k5 = Multigraph::complete(5).unwrap();
        let out = subdivision_sweep(&k5, &p, SweepOptions::default()).unwrap();
        assert_eq!(out.steps, 0);
        assert_eq!(out.graph, k5);
        assert_eq!(out.trace.steps()[0].edge, None);
    }

    #[test]
    fn stops_inside_window() {
        let p = k5_params(2.5, 0.3);
        let k5 = Multigraph::complete(5).unwrap();
        let out = subdivision_sweep(&k5, &p, SweepOptions::default()).unwrap();
        assert!(out.estimate.distance_bound(2.5) < 0.3);
        assert!(out.steps > 0);
        let last = out.trace.last().unwrap();
        assert_eq!(last.edge, Some(out.steps - 1));
    }

    #[test]
    fn vertex_limit_returns_partial_trace() {
        let mut p = k5_params(1.8, 0.01);
        p.limits.max_vertices = 7;
        let k5 = Multigraph::complete(5).unwrap();
        let err = subdivision_sweep(&k5, &p, SweepOptions::default()).unwrap_err();
        assert!(err.is_resource());
        assert_eq!(err.stage, Stage::Sweep);
        assert_eq!(err.trace.len(), 3);
    }
}
