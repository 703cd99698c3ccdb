use serde::{Deserialize, Serialize};

use crate::graph::Multigraph;

use super::{FailureKind, Result, Stage, SynthesisError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    pub max_vertices: usize,
    /// Eigensolver iterations per evaluation.
    pub max_iters: usize,
    /// Random lifts tried by the cover search before giving up.
    pub max_cover_attempts: usize,
    /// Girth demanded of the pre-sweep graph in place of `n + 2`.
    pub girth_override: Option<usize>,
}

impl Limits {
    /// No vertex cap (`usize::MAX` disables the projected-size check).
    pub fn unlimited() -> Self {
        Limits {
            max_vertices: usize::MAX,
            ..Limits::default()
        }
    }
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_vertices: 100_000,
            max_iters: 1_000_000,
            max_cover_attempts: 16,
            girth_override: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SynthesisParams {
    pub r: usize,
    pub d: usize,
    pub alpha: f64,
    pub eps: f64,
    pub eps_eff: f64,
    pub k: usize,
    pub n: usize,
    pub girth_target: usize,
    pub seed: u64,
    pub limits: Limits,
}

impl SynthesisParams {
    /// `(d-1)^{1/K}`, the root of the K-subdivided regular graph.
    pub fn upper_endpoint(&self) -> f64 {
        ((self.d - 1) as f64).powf(1.0 / self.k as f64)
    }

    /// `(d-1)^{1/(2K)}`, the root once every edge has been subdivided again.
    pub fn lower_endpoint(&self) -> f64 {
        ((self.d - 1) as f64).powf(1.0 / (2 * self.k) as f64)
    }

    /// Eigensolver tolerance used during the sweep.
    pub fn tolerance(&self) -> f64 {
        self.eps_eff / 100.0
    }

    /// Girth demanded of the pre-sweep graph.
    pub fn effective_girth(&self) -> usize {
        self.limits.girth_override.unwrap_or(self.girth_target)
    }

    /// Girth demanded of the cover before `K`-fold subdivision (which multiplies girth by `K`).
    pub fn cover_girth(&self) -> usize {
        self.effective_girth().div_ceil(self.k)
    }

    /// Per-step drop bound `(d-1)^{1/K} (1 - (d-1)^{-1/(K(n+1))})` for this `n`.
    pub fn step_bound(&self) -> f64 {
        step_bound((self.d - 1) as f64, self.k, self.n)
    }
}

/// `(d-1)^{1/K} (1 - (d-1)^{-1/(K(n+1))})`, evaluated without cancellation.
pub fn step_bound(base: f64, k: usize, n: usize) -> f64 {
    let hi = base.powf(1.0 / k as f64);
    let t = base.ln() / (k as f64 * (n as f64 + 1.0));
    hi * -(-t).exp_m1()
}

/// Moore lower bound on the order of a `d`-regular graph of girth `g`, saturating.
pub fn moore_bound(d: usize, g: usize) -> u128 {
    if g <= 2 || d <= 2 {
        return g.max(1) as u128;
    }
    let q = (d - 1) as u128;
    let mut sum: u128 = 0;
    let mut pow: u128 = 1;
    let terms = if g % 2 == 1 { (g - 1) / 2 } else { g / 2 };
    for _ in 0..terms {
        sum = sum.saturating_add(pow);
        pow = pow.saturating_mul(q);
    }
    if g % 2 == 1 {
        1u128.saturating_add((d as u128).saturating_mul(sum))
    } else {
        2u128.saturating_mul(sum)
    }
}

fn fail(kind: FailureKind) -> SynthesisError {
    SynthesisError::new(Stage::SelectParameters, kind)
}

/// Chooses `d = 2r`, `K`, `eps_eff`, `n` and the girth target for a target `alpha`.
pub fn select_parameters(
    r: usize,
    alpha: f64,
    eps: f64,
    seed: u64,
    limits: Limits,
) -> Result<SynthesisParams> {
    if r < 2 {
        return Err(fail(FailureKind::InvalidInput(format!("rank must be >= 2, got {r}"))));
    }
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(fail(FailureKind::InvalidInput(format!("eps must be positive, got {eps}"))));
    }
    let d = 2 * r;
    let base = (d - 1) as f64;
    if !(alpha > 1.0 && alpha < base) {
        return Err(fail(FailureKind::TargetOutOfRange { alpha, upper: base }));
    }
    if let Some(g) = limits.girth_override {
        if g == 0 {
            return Err(fail(FailureKind::InvalidInput("girth override must be positive".into())));
        }
    }

    // Smallest K with (d-1)^{1/(2K)} < alpha < (d-1)^{1/K}. The upper endpoint decreases in
    // K, so once it reaches alpha no larger K can work. Only alpha = (d-1)^{1/2} reaches it
    // (no integer lies strictly inside (1, 2)); then K = 2 and its base graph attains alpha.
    let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * b;
    let mut k = 1usize;
    let (k, top_attained) = loop {
        let hi = base.powf(1.0 / k as f64);
        let lo = base.powf(1.0 / (2 * k) as f64);
        if hi <= alpha || close(hi, alpha) {
            break (k, true);
        }
        if lo < alpha && !close(lo, alpha) {
            break (k, false);
        }
        k += 1;
    };
    let hi = base.powf(1.0 / k as f64);
    let lo = base.powf(1.0 / (2 * k) as f64);
    let eps_eff = if top_attained {
        eps.min(alpha - lo)
    } else {
        eps.min(alpha - lo).min(hi - alpha)
    };

    // Smallest n >= 1 with step_bound(n) < eps_eff.
    let holds = |n: usize| step_bound(base, k, n) < eps_eff;
    let n = if eps_eff >= hi {
        1
    } else {
        let guess = base.ln() / (k as f64 * -(-eps_eff / hi).ln_1p());
        if !guess.is_finite() || guess > 1e15 {
            return Err(fail(FailureKind::LimitsExceeded {
                what: "girth target",
                limit: limits.max_vertices as u128,
                required: None,
            }));
        }
        let mut n = (guess.floor() as usize).max(1);
        while !holds(n) {
            n += 1;
        }
        while n > 1 && holds(n - 1) {
            n -= 1;
        }
        n
    };

    let params = SynthesisParams {
        r,
        d,
        alpha,
        eps,
        eps_eff,
        k,
        n,
        girth_target: n + 2,
        seed,
        limits,
    };
    let projected = projected_vertices(&params);
    if limits.max_vertices != usize::MAX && projected > limits.max_vertices as u128 {
        return Err(fail(FailureKind::LimitsExceeded {
            what: "max vertices",
            limit: limits.max_vertices as u128,
            required: Some(projected),
        }));
    }
    Ok(params)
}

/// Lower bound on the vertex count of the pre-sweep graph: a cover of `K_{d+1}` of the
/// required girth (at least the Moore bound, rounded up to a multiple of `d + 1`) after
/// `K`-fold subdivision.
pub(crate) fn projected_vertices(p: &SynthesisParams) -> u128 {
    let q = (p.d + 1) as u128;
    let g = p.cover_girth();
    let cover = if g <= 3 {
        q
    } else {
        moore_bound(p.d, g).div_ceil(q).saturating_mul(q)
    };
    let edges = cover.saturating_mul(p.d as u128) / 2;
    cover.saturating_add(edges.saturating_mul((p.k - 1) as u128))
}

/// `K_{d+1}`, whose universal cover is the `d`-regular tree.
pub fn base_graph(params: &SynthesisParams) -> Multigraph {
    Multigraph::complete(params.d + 1).expect("d >= 4")
}
