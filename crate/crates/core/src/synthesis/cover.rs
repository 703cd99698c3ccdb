//! Covers of a base graph with a prescribed minimum girth.
//!
//! Covers are permutation lifts. The search draws a random lift and repairs it by
//! local moves that keep it a lift: for a lifted edge on a short cycle, swap two targets
//! of its base edge's permutation. A move is accepted only when neither new lifted edge
//! lies on a cycle shorter than the goal, so every accepted move strictly shrinks the set
//! of short cycles. When a lift cannot be repaired within budget the degree grows.
//! Whatever the search does, the result is checked by exact girth and covering tests.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::graph::Multigraph;

use super::params::{moore_bound, Limits};
use super::{streams, FailureKind, Result, Stage, SynthesisError};

/// A graph together with its covering projection onto a base graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Covering {
    pub graph: Multigraph,
    /// Base vertex of every cover vertex.
    pub vertex_map: Vec<usize>,
    /// Base edge of every cover edge; orientation is preserved (`u -> v` lifts to `u' -> v'`).
    pub edge_map: Vec<usize>,
    /// Number of sheets.
    pub sheets: usize,
    /// Random lifts drawn by the search.
    pub attempts: usize,
    /// Accepted repair moves.
    pub switches: usize,
}

impl Covering {
    pub fn identity(base: &Multigraph) -> Self {
        Covering {
            graph: base.clone(),
            vertex_map: (0..base.vertex_count()).collect(),
            edge_map: (0..base.edge_count()).collect(),
            sheets: 1,
            attempts: 0,
            switches: 0,
        }
    }

    /// Checks that the projection is a covering map of the stated degree: every fibre has
    /// `sheets` vertices, edges project endpoint-wise, and around every vertex the sides
    /// project bijectively onto the sides of its image.
    pub fn verify(&self, base: &Multigraph) -> bool {
        let g = &self.graph;
        if self.vertex_map.len() != g.vertex_count() || self.edge_map.len() != g.edge_count() {
            return false;
        }
        let mut fibre = vec![0usize; base.vertex_count()];
        for &b in &self.vertex_map {
            if b >= base.vertex_count() {
                return false;
            }
            fibre[b] += 1;
        }
        if fibre.iter().any(|&f| f != self.sheets) {
            return false;
        }
        for (e, &(x, y)) in g.edges().iter().enumerate() {
            let be = self.edge_map[e];
            if be >= base.edge_count() || base.edge(be) != (self.vertex_map[x], self.vertex_map[y]) {
                return false;
            }
        }
        (0..g.vertex_count()).all(|x| {
            let mut projected: Vec<usize> = g
                .out_sides(x)
                .iter()
                .map(|&s| 2 * self.edge_map[s / 2] + (s & 1))
                .collect();
            projected.sort_unstable();
            projected == base.out_sides(self.vertex_map[x])
        })
    }
}

/// A connected cover of `base` with girth at least `goal` (forests have infinite girth).
pub fn high_girth_cover(base: &Multigraph, goal: usize, seed: u64, limits: &Limits) -> Result<Covering> {
    let fail = |kind| SynthesisError::new(Stage::HighGirthCover, kind);
    if base.vertex_count() == 0 || !base.is_connected() {
        return Err(fail(FailureKind::InvalidInput("base graph must be connected and nonempty".into())));
    }
    if base.girth_below(goal).is_none() {
        return Ok(Covering::identity(base));
    }
    let too_big = |vertices: usize| {
        fail(FailureKind::LimitsExceeded {
            what: "max vertices (cover)",
            limit: limits.max_vertices as u128,
            required: Some(vertices as u128),
        })
    };
    if base.is_cycle() {
        let m = goal.div_ceil(base.vertex_count());
        if m * base.vertex_count() > limits.max_vertices {
            return Err(too_big(m * base.vertex_count()));
        }
        let mut voltages: Vec<Vec<usize>> = vec![(0..m).collect(); base.edge_count()];
        voltages[0] = (0..m).map(|i| (i + 1) % m).collect();
        return Ok(lift_covering(base, m, &voltages, 1, 0));
    }

    let n = base.vertex_count();
    let d = base.degrees().into_iter().max().unwrap_or(0);
    let mut m = (moore_bound(d, goal).min(u128::from(u32::MAX)) as usize)
        .div_ceil(n)
        .max(2);
    let mut best: Option<usize> = base.girth();
    for attempt in 0..limits.max_cover_attempts.max(1) {
        if m.saturating_mul(n) > limits.max_vertices {
            return Err(too_big(m.saturating_mul(n)));
        }
        let mut rng = streams::rng(seed, streams::COVER, attempt as u64);
        let mut search = LiftSearch::random(base, m, goal, &mut rng);
        let switches = search.repair(&mut rng);
        let covering = lift_covering(base, m, &search.sigma, attempt + 1, switches);
        let girth = covering.graph.girth_below(goal);
        match girth {
            None => return Ok(covering),
            Some(g) => best = Some(best.map_or(g, |b| b.max(g))),
        }
        m += m.div_ceil(2);
    }
    Err(fail(FailureKind::CoverBudgetExhausted {
        best_girth: best,
        attempts: limits.max_cover_attempts.max(1),
    }))
}

/// Builds the lift and restricts it to the component of vertex 0 if it is disconnected
/// (a component of a cover of a connected graph is itself a cover).
fn lift_covering(
    base: &Multigraph,
    m: usize,
    voltages: &[Vec<usize>],
    attempts: usize,
    switches: usize,
) -> Covering {
    let lift = base
        .permutation_lift(m, voltages)
        .expect("voltages are permutations");
    let component = lift.component_of(0);
    let (graph, kept, vertices) = if component.len() == lift.vertex_count() {
        let kept = (0..lift.edge_count()).collect();
        (lift, kept, (0..base.vertex_count() * m).collect())
    } else {
        let mut vertices = component;
        vertices.sort_unstable();
        let (sub, kept) = lift.induced(&vertices);
        (sub, kept, vertices)
    };
    let sheets = graph.vertex_count() / base.vertex_count();
    Covering {
        vertex_map: vertices.iter().map(|&x| x / m).collect(),
        edge_map: kept.iter().map(|&e| e / m).collect(),
        graph,
        sheets,
        attempts,
        switches,
    }
}

/// Mutable permutation lift with bounded short-cycle queries.
struct LiftSearch<'a> {
    base: &'a Multigraph,
    m: usize,
    goal: usize,
    sigma: Vec<Vec<usize>>,
    sigma_inv: Vec<Vec<usize>>,
    // Scratch for bidirectional searches, stamped to avoid clearing.
    stamp: Vec<u32>,
    depth: Vec<u32>,
    generation: u32,
    frontier: Vec<usize>,
    next: Vec<usize>,
}

impl<'a> LiftSearch<'a> {
    fn random(base: &'a Multigraph, m: usize, goal: usize, rng: &mut impl Rng) -> Self {
        let sigma: Vec<Vec<usize>> = (0..base.edge_count())
            .map(|_| {
                let mut p: Vec<usize> = (0..m).collect();
                p.shuffle(rng);
                p
            })
            .collect();
        let sigma_inv = sigma.iter().map(|p| invert(p)).collect();
        let total = base.vertex_count() * m;
        LiftSearch {
            base,
            m,
            goal,
            sigma,
            sigma_inv,
            stamp: vec![0; total],
            depth: vec![0; total],
            generation: 0,
            frontier: Vec::new(),
            next: Vec::new(),
        }
    }

    /// Lifted edge `e * m + i` joins `(u, i)` and `(v, sigma_e[i])`.
    fn endpoints(&self, lifted: usize) -> (usize, usize) {
        let (e, i) = (lifted / self.m, lifted % self.m);
        let (u, v) = self.base.edge(e);
        (u * self.m + i, v * self.m + self.sigma[e][i])
    }

    /// Calls `f(neighbour, lifted edge)` for every side leaving lift vertex `x`.
    fn for_each_neighbour(&self, x: usize, mut f: impl FnMut(usize, usize)) {
        let (u, i) = (x / self.m, x % self.m);
        for &s in self.base.out_sides(u) {
            let e = s / 2;
            if s % 2 == 0 {
                let (_, v) = self.base.edge(e);
                f(v * self.m + self.sigma[e][i], e * self.m + i);
            } else {
                let (w, _) = self.base.edge(e);
                let j = self.sigma_inv[e][i];
                f(w * self.m + j, e * self.m + j);
            }
        }
    }

    /// True iff lifted edge `lifted` lies on a cycle shorter than the goal, i.e. its
    /// endpoints are joined by a path of length at most `goal - 2` avoiding it.
    fn on_short_cycle(&mut self, lifted: usize) -> bool {
        let (x, y) = self.endpoints(lifted);
        if x == y {
            return true;
        }
        let budget = self.goal.saturating_sub(2);
        let near = budget.div_ceil(2);
        let far = budget - near;
        self.generation = self.generation.wrapping_add(1);
        if self.generation == 0 {
            self.stamp.iter_mut().for_each(|s| *s = 0);
            self.generation = 1;
        }
        let gen = self.generation;
        // Ball of radius `near` around x, avoiding the edge itself.
        self.stamp[x] = gen;
        self.depth[x] = 0;
        self.frontier.clear();
        self.frontier.push(x);
        for level in 1..=near {
            self.next.clear();
            let frontier = std::mem::take(&mut self.frontier);
            for &a in &frontier {
                let mut found = Vec::new();
                self.for_each_neighbour(a, |b, le| {
                    if le != lifted {
                        found.push(b);
                    }
                });
                for b in found {
                    if self.stamp[b] != gen {
                        self.stamp[b] = gen;
                        self.depth[b] = level as u32;
                        self.next.push(b);
                    }
                }
            }
            self.frontier = frontier;
            std::mem::swap(&mut self.frontier, &mut self.next);
        }
        if self.stamp[y] == gen {
            return true;
        }
        // Walk out from y; any hit with combined depth <= budget closes a short cycle.
        let mut seen = std::collections::HashSet::new();
        seen.insert(y);
        let mut layer = vec![y];
        for level in 1..=far {
            let mut grown = Vec::new();
            for &a in &layer {
                let mut found = Vec::new();
                self.for_each_neighbour(a, |b, le| {
                    if le != lifted {
                        found.push(b);
                    }
                });
                for b in found {
                    if self.stamp[b] == gen && self.depth[b] as usize + level <= budget {
                        return true;
                    }
                    if seen.insert(b) {
                        grown.push(b);
                    }
                }
            }
            layer = grown;
        }
        false
    }

    fn swap(&mut self, e: usize, i: usize, j: usize) {
        self.sigma[e].swap(i, j);
        let (a, b) = (self.sigma[e][i], self.sigma[e][j]);
        self.sigma_inv[e][a] = i;
        self.sigma_inv[e][b] = j;
    }

    /// Repairs short cycles by accept-only-improvement swaps. Returns accepted moves.
    fn repair(&mut self, rng: &mut impl Rng) -> usize {
        let total = self.base.edge_count() * self.m;
        let mut bad: Vec<usize> = (0..total).filter(|&le| self.on_short_cycle(le)).collect();
        let mut switches = 0;
        let mut budget = 64 * total + 10_000;
        let mut stalled = 0;
        while let Some(le) = bad.pop() {
            if budget == 0 || stalled > bad.len() + 1 {
                bad.push(le);
                break;
            }
            if !self.on_short_cycle(le) {
                continue;
            }
            let (e, i) = (le / self.m, le % self.m);
            let mut accepted = false;
            for _ in 0..8 {
                if budget == 0 {
                    break;
                }
                budget -= 1;
                let j = rng.random_range(0..self.m);
                if j == i {
                    continue;
                }
                self.swap(e, i, j);
                if !self.on_short_cycle(e * self.m + i) && !self.on_short_cycle(e * self.m + j) {
                    accepted = true;
                    break;
                }
                self.swap(e, i, j);
            }
            if accepted {
                switches += 1;
                stalled = 0;
            } else {
                stalled += 1;
                bad.insert(0, le);
            }
        }
        switches
    }
}

fn invert(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; p.len()];
    for (i, &j) in p.iter().enumerate() {
        inv[j] = i;
    }
    inv
}
