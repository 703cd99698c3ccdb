use std::collections::VecDeque;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::graph::{edge_of, rev, GraphDocument, Multigraph};

use super::{Letter, Result, StallingsError, Word};

/// A basepointed graph whose sides carry letters, `label(rev(s)) = label(s)^-1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledGraph {
    graph: Multigraph,
    basepoint: usize,
    // Letter read along side 2e (u -> v) of each edge e.
    labels: Vec<Letter>,
}

impl LabeledGraph {
    pub fn new(graph: Multigraph, basepoint: usize, labels: Vec<Letter>) -> Result<Self> {
        if labels.len() != graph.edge_count() {
            return Err(StallingsError::LabelCount);
        }
        if basepoint >= graph.vertex_count() {
            return Err(StallingsError::BadBasepoint(basepoint));
        }
        Ok(LabeledGraph {
            graph,
            basepoint,
            labels,
        })
    }

    pub fn graph(&self) -> &Multigraph {
        &self.graph
    }

    pub fn basepoint(&self) -> usize {
        self.basepoint
    }

    pub fn edge_labels(&self) -> &[Letter] {
        &self.labels
    }

    pub fn side_label(&self, s: usize) -> Letter {
        let l = self.labels[edge_of(s)];
        if s.is_multiple_of(2) {
            l
        } else {
            l.inverse()
        }
    }

    /// Largest generator index used.
    pub fn rank_of_alphabet(&self) -> usize {
        self.labels.iter().map(|l| l.index()).max().unwrap_or(0)
    }

    /// The outgoing side at `v` reading `letter`, if any (the first one in side order).
    pub fn follow(&self, v: usize, letter: Letter) -> Option<usize> {
        self.graph
            .out_sides(v)
            .iter()
            .copied()
            .find(|&s| self.side_label(s) == letter)
    }

    /// No vertex has two outgoing sides with the same label.
    pub fn check_folded(&self) -> bool {
        self.first_unfolded_vertex().is_none()
    }

    fn first_unfolded_vertex(&self) -> Option<usize> {
        (0..self.graph.vertex_count()).find(|&v| {
            let mut seen: Vec<Letter> = self
                .graph
                .out_sides(v)
                .iter()
                .map(|&s| self.side_label(s))
                .collect();
            seen.sort_unstable();
            seen.windows(2).any(|w| w[0] == w[1])
        })
    }

    /// Every vertex has, for each letter used, exactly one outgoing and one incoming side.
    pub fn is_codeterministic(&self) -> bool {
        let r = self.rank_of_alphabet();
        (0..self.graph.vertex_count()).all(|v| {
            let mut seen: Vec<Letter> = self
                .graph
                .out_sides(v)
                .iter()
                .map(|&s| self.side_label(s))
                .collect();
            seen.sort_unstable();
            let mut full: Vec<Letter> = (1..=r)
                .flat_map(|k| [Letter::generator(k), Letter::generator(k).inverse()])
                .collect();
            full.sort_unstable();
            seen == full
        })
    }

    fn require_folded(&self) -> Result<()> {
        match self.first_unfolded_vertex() {
            Some(v) => Err(StallingsError::NotFolded(v)),
            None => Ok(()),
        }
    }

    fn require_core(&self) -> Result<()> {
        match (0..self.graph.vertex_count())
            .find(|&v| v != self.basepoint && self.graph.degree(v) < 2)
        {
            Some(v) => Err(StallingsError::NotCore(v)),
            None => Ok(()),
        }
    }

    /// Whether the reduced word `w` labels a closed path at the basepoint.
    pub fn membership(&self, w: &Word) -> Result<bool> {
        if !w.is_reduced() {
            return Err(StallingsError::NotReduced);
        }
        let mut v = self.basepoint;
        for &letter in w.letters() {
            match self.follow(v, letter) {
                Some(s) => v = self.graph.head(s),
                None => return Ok(false),
            }
        }
        Ok(v == self.basepoint)
    }

    /// Free basis read off a breadth-first spanning tree from the basepoint.
    ///
    /// For every non-tree edge `e` (ascending) with side `u -> v` the generator is
    /// `path(base -> u) . label(e) . path(v -> base)`.
    pub fn free_basis(&self) -> Result<Vec<Word>> {
        self.require_folded()?;
        let g = &self.graph;
        let n = g.vertex_count();
        let mut parent = vec![usize::MAX; n];
        let mut seen = vec![false; n];
        let mut order = Vec::with_capacity(n);
        let mut queue = VecDeque::from([self.basepoint]);
        seen[self.basepoint] = true;
        while let Some(u) = queue.pop_front() {
            order.push(u);
            for &s in g.out_sides(u) {
                let w = g.head(s);
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = s;
                    queue.push_back(w);
                }
            }
        }
        if order.len() != n {
            return Err(StallingsError::Disconnected);
        }
        // Label path from the basepoint to each vertex, built in BFS order.
        let mut path: Vec<Vec<Letter>> = vec![Vec::new(); n];
        for &v in &order[1..] {
            let s = parent[v];
            let mut p = path[g.tail(s)].clone();
            p.push(self.side_label(s));
            path[v] = p;
        }
        let mut tree_edge = vec![false; g.edge_count()];
        for &s in parent.iter().filter(|&&s| s != usize::MAX) {
            tree_edge[edge_of(s)] = true;
        }
        let basis = (0..g.edge_count())
            .filter(|&e| !tree_edge[e])
            .map(|e| {
                let s = 2 * e;
                let back = Word::new(path[g.head(s)].clone()).inverse();
                Word::reduced(
                    path[g.tail(s)]
                        .iter()
                        .copied()
                        .chain([self.side_label(s)])
                        .chain(back.letters().iter().copied()),
                )
            })
            .collect();
        Ok(basis)
    }

    /// `gamma[k]` = number of subgroup elements of word length at most `k`, for `k = 0..=n`.
    ///
    /// Reduced words read from the basepoint correspond bijectively to non-backtracking
    /// walks from the basepoint (the graph is folded), so the table is accumulated from
    /// walk counts per final side, adding walks that end back at the basepoint.
    pub fn ball_count(&self, n: usize) -> Result<Vec<BigUint>> {
        self.require_folded()?;
        self.require_core()?;
        let g = &self.graph;
        let base = self.basepoint;
        let mut gamma = Vec::with_capacity(n + 1);
        let mut total = BigUint::from(1u32);
        gamma.push(total.clone());
        let mut frontier = vec![BigUint::zero(); g.side_count()];
        for &s in g.out_sides(base) {
            frontier[s] += 1u32;
        }
        let mut next = vec![BigUint::zero(); g.side_count()];
        for k in 1..=n {
            if k > 1 {
                next.iter_mut().for_each(Zero::set_zero);
                for (s, c) in frontier.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    for &t in g.out_sides(g.head(s)) {
                        if t != rev(s) {
                            next[t] += c;
                        }
                    }
                }
                std::mem::swap(&mut frontier, &mut next);
            }
            for (s, c) in frontier.iter().enumerate() {
                if g.head(s) == base {
                    total += c;
                }
            }
            gamma.push(total.clone());
        }
        Ok(gamma)
    }

    pub fn to_document(&self) -> GraphDocument {
        GraphDocument::from_graph(&self.graph)
            .with_basepoint(self.basepoint)
            .with_labels(self.labels.iter().map(|l| l.signed()).collect())
    }

    pub fn from_document(doc: &GraphDocument) -> Result<Self> {
        let graph = doc.to_graph()?;
        let labels = doc
            .labels
            .as_ref()
            .ok_or(StallingsError::LabelCount)?
            .iter()
            .map(|&k| Letter::from_signed(k).ok_or(StallingsError::LabelCount))
            .collect::<Result<Vec<_>>>()?;
        LabeledGraph::new(graph, doc.basepoint.unwrap_or(0), labels)
    }
}
