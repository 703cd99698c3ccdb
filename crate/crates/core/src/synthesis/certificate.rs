use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::graph::{GraphDocument, GraphError, Multigraph};
use crate::spectral::{self, PerronOptions, SpectralEstimate};

use super::{select_parameters, SweepTrace, SynthesisParams};

pub const CERTIFICATE_VERSION: u32 = 1;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Stats {
    pub cover_sheets: usize,
    pub cover_vertices: usize,
    pub cover_attempts: usize,
    pub cover_switches: usize,
    pub sweep_steps: usize,
    pub eigen_iterations: usize,
    /// Wall-clock time; kept out of the document so that reruns are byte-identical.
    #[serde(skip)]
    pub elapsed: Option<Duration>,
}

/// A synthesized graph with everything needed to re-check it.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub params: SynthesisParams,
    pub graph: Multigraph,
    pub eigenvalue: SpectralEstimate,
    pub trace: SweepTrace,
    /// Girth of the graph the sweep started from.
    pub girth_achieved: usize,
    pub stats: Stats,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Enclosure {
    pub lower: f64,
    pub upper: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateDocument {
    pub version: u32,
    pub params: SynthesisParams,
    pub tolerance: f64,
    pub graph: GraphDocument,
    pub eigenvalue: Enclosure,
    pub trace: SweepTrace,
    pub girth_achieved: usize,
    pub seed: u64,
    pub stats: Stats,
}

impl Certificate {
    pub fn to_document(&self) -> CertificateDocument {
        CertificateDocument {
            version: CERTIFICATE_VERSION,
            params: self.params,
            tolerance: self.params.tolerance(),
            graph: GraphDocument::from_graph(&self.graph),
            eigenvalue: Enclosure {
                lower: self.eigenvalue.lower,
                upper: self.eigenvalue.upper,
            },
            trace: self.trace.clone(),
            girth_achieved: self.girth_achieved,
            seed: self.params.seed,
            stats: self.stats.clone(),
        }
    }

    /// JSON text of the document, newline-terminated.
    pub fn encode(&self) -> String {
        let mut text = serde_json::to_string(&self.to_document()).expect("certificate serializes");
        text.push('\n');
        text
    }

    pub fn decode(text: &str) -> Result<Self, GraphError> {
        let doc: CertificateDocument = serde_json::from_str(text).map_err(|e| GraphError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        doc.to_certificate()
    }
}

impl CertificateDocument {
    pub fn to_certificate(&self) -> Result<Certificate, GraphError> {
        if self.version != CERTIFICATE_VERSION {
            return Err(GraphError::Document(format!(
                "unsupported certificate version {}",
                self.version
            )));
        }
        Ok(Certificate {
            params: self.params,
            graph: self.graph.to_graph()?,
            eigenvalue: SpectralEstimate {
                lower: self.eigenvalue.lower,
                upper: self.eigenvalue.upper,
                iterations: 0,
                converged: true,
            },
            trace: self.trace.clone(),
            girth_achieved: self.girth_achieved,
            stats: self.stats.clone(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &'static str, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name,
            passed,
            detail: detail.into(),
        }
    }
}

/// Re-derives every claim of a certificate from its parameters and graph alone.
pub fn verify_certificate(cert: &Certificate) -> Vec<Check> {
    let p = &cert.params;
    let g = &cert.graph;
    let mut checks = Vec::new();

    let derived = select_parameters(p.r, p.alpha, p.eps, p.seed, p.limits);
    checks.push(match derived {
        Ok(q) => {
            let same = q.d == p.d && q.k == p.k && q.n == p.n && q.girth_target == p.girth_target
                && q.eps_eff == p.eps_eff;
            Check::new(
                "parameters",
                same,
                format!("d={} K={} n={} girth_target={} eps_eff={}", q.d, q.k, q.n, q.girth_target, q.eps_eff),
            )
        }
        Err(e) => Check::new("parameters", false, e.to_string()),
    });

    let connected = g.vertex_count() > 0 && g.is_connected();
    checks.push(Check::new("connected", connected, format!("{} vertices", g.vertex_count())));

    let histogram = g.degree_histogram();
    let degrees_ok = histogram.keys().all(|&k| k == 2 || k == p.d);
    checks.push(Check::new("degrees", degrees_ok, format!("{histogram:?}")));

    let girth = g.girth();
    let required = p.effective_girth();
    let girth_ok = cert.girth_achieved >= required && girth.is_some_and(|x| x >= cert.girth_achieved);
    checks.push(Check::new(
        "girth",
        girth_ok,
        format!(
            "graph girth {girth:?}, claimed {}, required {required}",
            cert.girth_achieved
        ),
    ));

    let stored = cert.eigenvalue;
    let stored_ok = stored.lower <= stored.upper
        && stored.width() <= p.tolerance()
        && stored.distance_bound(p.alpha) < p.eps;
    checks.push(Check::new(
        "stored_enclosure",
        stored_ok,
        format!("[{}, {}]", stored.lower, stored.upper),
    ));

    checks.push(check_eigenvalue(cert));
    checks.push(check_trace(cert));
    checks.push(check_counts(cert));
    checks
}

/// Recomputes the enclosure from the all-ones vector. An enclosure that straddles a window
/// edge decides nothing, so the tolerance is tightened until it falls inside or outside.
fn check_eigenvalue(cert: &Certificate) -> Check {
    let p = &cert.params;
    let stored = cert.eigenvalue;
    let mut tol = p.tolerance();
    loop {
        let opts = PerronOptions {
            tol,
            max_iter: p.limits.max_iters,
        };
        let est = match spectral::growth_rate_with(&cert.graph, opts) {
            Ok(est) => est,
            Err(e) => return Check::new("eigenvalue", false, e.to_string()),
        };
        let detail = format!(
            "recomputed [{}, {}] against alpha={} eps={}",
            est.lower, est.upper, p.alpha, p.eps
        );
        let consistent = est.lower <= stored.upper && stored.lower <= est.upper;
        if !est.converged || !consistent {
            return Check::new("eigenvalue", false, detail);
        }
        if est.distance_bound(p.alpha) < p.eps {
            return Check::new("eigenvalue", true, detail);
        }
        let outside = est.lower >= p.alpha + p.eps || est.upper <= p.alpha - p.eps;
        if outside || tol < 1e-13 {
            return Check::new("eigenvalue", false, detail);
        }
        tol /= 100.0;
    }
}

fn check_trace(cert: &Certificate) -> Check {
    let p = &cert.params;
    let steps = cert.trace.steps();
    let fail = |m: String| Check::new("trace", false, m);
    let Some(last) = steps.last() else {
        return fail("empty trace".into());
    };
    for (pos, s) in steps.iter().enumerate() {
        let edge = (pos > 0).then(|| pos - 1);
        if s.i != pos || s.edge != edge {
            return fail(format!("step {pos} is out of sequence"));
        }
        if pos > 0 && s.upper > steps[pos - 1].upper + 2.0 * p.tolerance() {
            return fail(format!("upper bound rises at step {pos}"));
        }
        if pos + 1 < steps.len() && p.alpha - p.eps < s.lower && s.upper < p.alpha + p.eps {
            return fail(format!("step {pos} is already inside the window"));
        }
    }
    if last.lower != cert.eigenvalue.lower || last.upper != cert.eigenvalue.upper {
        return fail("final step differs from the stored eigenvalue".into());
    }
    if cert.stats.sweep_steps != last.i {
        return fail("step count differs from the trace".into());
    }
    Check::new("trace", true, format!("{} steps", steps.len()))
}

/// The graph must be a `K`-subdivided `d`-regular graph on a multiple of `d + 1` branch
/// vertices with exactly one extra subdivision per sweep step.
fn check_counts(cert: &Certificate) -> Check {
    let p = &cert.params;
    let g = &cert.graph;
    let branch = g.degrees().iter().filter(|&&x| x == p.d).count();
    let half = branch * p.d / 2;
    let steps = cert.trace.last().map_or(0, |s| s.i);
    let edges = half * p.k + steps;
    let vertices = branch + half * (p.k - 1) + steps;
    let ok = branch > 0
        && branch % (p.d + 1) == 0
        && g.edge_count() == edges
        && g.vertex_count() == vertices;
    Check::new(
        "counts",
        ok,
        format!(
            "{branch} branch vertices; expected {vertices} vertices and {edges} edges, found {} and {}",
            g.vertex_count(),
            g.edge_count()
        ),
    )
}
