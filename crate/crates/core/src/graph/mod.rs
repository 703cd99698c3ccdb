//! Finite multigraphs with loops and parallel edges.
//!
//! Every undirected edge `e = (u, v)` owns two directed sides: side `2e` runs `u -> v`
//! and side `2e + 1` runs `v -> u`. The pairing `rev(s) = s ^ 1` is a fixed-point-free
//! involution, so a loop still has two distinct sides and contributes 2 to the degree
//! of its vertex.

mod document;

use std::collections::{BTreeMap, VecDeque};

use thiserror::Error;

pub use document::GraphDocument;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("edge {edge} endpoint {endpoint} out of range (vertex_count = {vertex_count})")]
    EndpointOutOfRange {
        edge: usize,
        endpoint: usize,
        vertex_count: usize,
    },
    #[error("edge index {0} out of range")]
    EdgeOutOfRange(usize),
    #[error("edge index {0} listed twice")]
    DuplicateEdge(usize),
    #[error("complete graph needs at least 2 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("subdivision length must be at least 1, got {0}")]
    InvalidSubdivision(usize),
    #[error("lift degree must be at least 1")]
    InvalidLiftDegree,
    #[error("voltage of edge {edge} is not a permutation of 0..{m}")]
    MalformedPermutation { edge: usize, m: usize },
    #[error("expected {expected} voltages, got {got}")]
    VoltageCount { expected: usize, got: usize },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid graph document: {0}")]
    Document(String),
}

pub type Result<T> = std::result::Result<T, GraphError>;

/// The side paired with `s`.
#[inline]
pub const fn rev(s: usize) -> usize {
    s ^ 1
}

/// The edge owning side `s`.
#[inline]
pub const fn edge_of(s: usize) -> usize {
    s >> 1
}

#[derive(Debug, Clone)]
pub struct Multigraph {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
    // Outgoing sides per vertex, ascending.
    out: Vec<Vec<usize>>,
}

impl PartialEq for Multigraph {
    fn eq(&self, other: &Self) -> bool {
        self.vertex_count == other.vertex_count && self.edges == other.edges
    }
}

impl Eq for Multigraph {}

impl Multigraph {
    pub fn new(vertex_count: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        for (e, &(u, v)) in edges.iter().enumerate() {
            for endpoint in [u, v] {
                if endpoint >= vertex_count {
                    return Err(GraphError::EndpointOutOfRange {
                        edge: e,
                        endpoint,
                        vertex_count,
                    });
                }
            }
        }
        Ok(Self::from_valid(vertex_count, edges))
    }

    fn from_valid(vertex_count: usize, edges: Vec<(usize, usize)>) -> Self {
        let mut out = vec![Vec::new(); vertex_count];
        for (e, &(u, v)) in edges.iter().enumerate() {
            out[u].push(2 * e);
            out[v].push(2 * e + 1);
        }
        Multigraph {
            vertex_count,
            edges,
            out,
        }
    }

    /// Simple complete graph `K_q`.
    pub fn complete(q: usize) -> Result<Self> {
        if q < 2 {
            return Err(GraphError::TooFewVertices(q));
        }
        let mut edges = Vec::with_capacity(q * (q - 1) / 2);
        for u in 0..q {
            for v in u + 1..q {
                edges.push((u, v));
            }
        }
        Ok(Self::from_valid(q, edges))
    }

    /// Cycle `C_n` on vertices `0..n` (n = 1 is a loop, n = 2 a parallel pair).
    pub fn cycle(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(GraphError::TooFewVertices(0));
        }
        Self::new(n, (0..n).map(|i| (i, (i + 1) % n)).collect())
    }

    /// Single vertex carrying `loops` loops.
    pub fn rose(loops: usize) -> Self {
        Self::from_valid(1, vec![(0, 0); loops])
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn side_count(&self) -> usize {
        2 * self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    pub fn tail(&self, s: usize) -> usize {
        let (u, v) = self.edges[edge_of(s)];
        if s & 1 == 0 {
            u
        } else {
            v
        }
    }

    pub fn head(&self, s: usize) -> usize {
        self.tail(rev(s))
    }

    pub fn out_sides(&self, v: usize) -> &[usize] {
        &self.out[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.out[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.out.iter().map(Vec::len).collect()
    }

    pub fn min_degree(&self) -> Option<usize> {
        self.out.iter().map(Vec::len).min()
    }

    pub fn degree_histogram(&self) -> BTreeMap<usize, usize> {
        let mut hist = BTreeMap::new();
        for d in self.out.iter().map(Vec::len) {
            *hist.entry(d).or_insert(0) += 1;
        }
        hist
    }

    pub fn is_loop(&self, e: usize) -> bool {
        let (u, v) = self.edges[e];
        u == v
    }

    /// True iff the graph has a single component. The empty graph counts as connected.
    pub fn is_connected(&self) -> bool {
        if self.vertex_count == 0 {
            return true;
        }
        self.component_of(0).len() == self.vertex_count
    }

    /// Vertices reachable from `start`, in breadth-first order.
    pub fn component_of(&self, start: usize) -> Vec<usize> {
        let mut seen = vec![false; self.vertex_count];
        let mut order = vec![start];
        seen[start] = true;
        let mut head = 0;
        while head < order.len() {
            let u = order[head];
            head += 1;
            for &s in &self.out[u] {
                let w = self.head(s);
                if !seen[w] {
                    seen[w] = true;
                    order.push(w);
                }
            }
        }
        order
    }

    /// Connected, nonempty and 2-regular.
    pub fn is_cycle(&self) -> bool {
        self.vertex_count > 0 && self.out.iter().all(|o| o.len() == 2) && self.is_connected()
    }

    /// Length of a shortest cycle, `None` for forests.
    pub fn girth(&self) -> Option<usize> {
        self.girth_below(usize::MAX)
    }

    /// Shortest cycle length if it is `< bound`, else `None`.
    ///
    /// Breadth-first search from every vertex. A side leading back into the explored
    /// region (other than the reverse of the tree side we arrived by) closes a
    /// non-backtracking closed walk of length `dist[u] + dist[w] + 1`; that walk contains
    /// a cycle at most that long, and the search rooted on a shortest cycle finds it exactly.
    pub fn girth_below(&self, bound: usize) -> Option<usize> {
        let n = self.vertex_count;
        let mut best = bound;
        let mut dist = vec![usize::MAX; n];
        let mut parent = vec![usize::MAX; n];
        let mut touched = Vec::new();
        let mut queue = VecDeque::new();
        for root in 0..n {
            if best <= 1 {
                break;
            }
            for &v in &touched {
                dist[v] = usize::MAX;
                parent[v] = usize::MAX;
            }
            touched.clear();
            queue.clear();
            dist[root] = 0;
            touched.push(root);
            queue.push_back(root);
            while let Some(u) = queue.pop_front() {
                if 2 * dist[u] + 1 >= best {
                    break;
                }
                for &s in &self.out[u] {
                    if parent[u] != usize::MAX && s == rev(parent[u]) {
                        continue;
                    }
                    let w = self.head(s);
                    if dist[w] == usize::MAX {
                        dist[w] = dist[u] + 1;
                        parent[w] = s;
                        touched.push(w);
                        queue.push_back(w);
                    } else {
                        best = best.min(dist[u] + dist[w] + 1);
                    }
                }
            }
        }
        (best < bound).then_some(best)
    }

    /// Replaces every edge in `subset` by a path of length 2.
    ///
    /// Edges are processed in ascending index order. Edge `e = (u, v)` keeps its index as
    /// `(u, w)` and a new edge `(w, v)` is appended, where `w` is a new vertex appended
    /// after all existing ones.
    pub fn subdivide(&self, subset: &EdgeSubset) -> Result<Self> {
        if subset.limit != self.edges.len() {
            EdgeSubset::new(self, subset.edges.iter().copied())?;
        }
        let mut edges = self.edges.clone();
        let mut vertex_count = self.vertex_count;
        for &e in &subset.edges {
            let (u, v) = edges[e];
            let w = vertex_count;
            vertex_count += 1;
            edges[e] = (u, w);
            edges.push((w, v));
        }
        Ok(Self::from_valid(vertex_count, edges))
    }

    /// Subdivides a single edge; the new vertex is `vertex_count()` of `self`.
    pub fn subdivide_edge(&self, e: usize) -> Result<Self> {
        self.subdivide(&EdgeSubset::new(self, [e])?)
    }

    /// Replaces every edge by a path with `k` edges.
    pub fn subdivide_uniform(&self, k: usize) -> Result<Self> {
        if k < 1 {
            return Err(GraphError::InvalidSubdivision(k));
        }
        let mut edges = self.edges.clone();
        let mut vertex_count = self.vertex_count;
        for e in 0..self.edges.len() {
            let (u, v) = self.edges[e];
            let mut prev = u;
            for step in 0..k - 1 {
                let w = vertex_count;
                vertex_count += 1;
                if step == 0 {
                    edges[e] = (prev, w);
                } else {
                    edges.push((prev, w));
                }
                prev = w;
            }
            if k > 1 {
                edges.push((prev, v));
            }
        }
        Ok(Self::from_valid(vertex_count, edges))
    }

    /// Permutation-voltage lift of degree `m`.
    ///
    /// Vertex `(u, i)` is numbered `u * m + i`; edge `e = (u, v)` with permutation `sigma`
    /// yields edges `(u, i) - (v, sigma[i])` numbered `e * m + i`. Projection is therefore
    /// `vertex / m` and `edge / m`.
    pub fn permutation_lift(&self, m: usize, voltages: &[Vec<usize>]) -> Result<Self> {
        if m < 1 {
            return Err(GraphError::InvalidLiftDegree);
        }
        if voltages.len() != self.edges.len() {
            return Err(GraphError::VoltageCount {
                expected: self.edges.len(),
                got: voltages.len(),
            });
        }
        let mut seen = vec![false; m];
        for (e, sigma) in voltages.iter().enumerate() {
            seen.iter_mut().for_each(|b| *b = false);
            let valid = sigma.len() == m
                && sigma.iter().all(|&j| j < m && !std::mem::replace(&mut seen[j], true));
            if !valid {
                return Err(GraphError::MalformedPermutation { edge: e, m });
            }
        }
        let mut edges = Vec::with_capacity(self.edges.len() * m);
        for (&(u, v), sigma) in self.edges.iter().zip(voltages) {
            for (i, &j) in sigma.iter().enumerate() {
                edges.push((u * m + i, v * m + j));
            }
        }
        Ok(Self::from_valid(self.vertex_count * m, edges))
    }

    /// Induced subgraph on `vertices` (in the given order), keeping edges in index order.
    /// Returns the subgraph and, for each kept edge, its index in `self`.
    pub fn induced(&self, vertices: &[usize]) -> (Self, Vec<usize>) {
        let mut index = vec![usize::MAX; self.vertex_count];
        for (i, &v) in vertices.iter().enumerate() {
            index[v] = i;
        }
        let mut kept = Vec::new();
        let mut edges = Vec::new();
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            if index[u] != usize::MAX && index[v] != usize::MAX {
                edges.push((index[u], index[v]));
                kept.push(e);
            }
        }
        (Self::from_valid(vertices.len(), edges), kept)
    }

    /// Copy of the graph without the listed edges; remaining edges keep their relative order.
    pub fn without_edges(&self, removed: &[usize]) -> Self {
        let mut drop = vec![false; self.edges.len()];
        for &e in removed {
            drop[e] = true;
        }
        let edges = self
            .edges
            .iter()
            .zip(&drop)
            .filter(|(_, &d)| !d)
            .map(|(&e, _)| e)
            .collect();
        Self::from_valid(self.vertex_count, edges)
    }

    /// Copy with extra edges appended.
    pub fn with_edges(&self, extra: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut edges = self.edges.clone();
        edges.extend(extra);
        Self::new(self.vertex_count, edges)
    }

    /// Graphviz rendering, one undirected edge statement per edge.
    pub fn to_dot(&self) -> String {
        self.to_dot_labeled(None)
    }

    /// Graphviz rendering with optional per-edge signed generator labels.
    pub fn to_dot_labeled(&self, labels: Option<&[i32]>) -> String {
        let mut out = String::from("graph G {\n");
        for v in 0..self.vertex_count {
            out.push_str(&format!("  {v};\n"));
        }
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            match labels.and_then(|l| l.get(e)) {
                Some(&k) if k > 0 => out.push_str(&format!("  {u} -- {v} [label=\"a{k}\"];\n")),
                Some(&k) => out.push_str(&format!("  {u} -- {v} [label=\"b{}\"];\n", -k)),
                None => out.push_str(&format!("  {u} -- {v};\n")),
            }
        }
        out.push_str("}\n");
        out
    }
}

/// A validated set of edge indices of a particular graph, kept in ascending order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeSubset {
    edges: Vec<usize>,
    limit: usize,
}

impl EdgeSubset {
    pub fn new(g: &Multigraph, edges: impl IntoIterator<Item = usize>) -> Result<Self> {
        let limit = g.edge_count();
        let mut seen = vec![false; limit];
        let mut list = Vec::new();
        for e in edges {
            if e >= limit {
                return Err(GraphError::EdgeOutOfRange(e));
            }
            if std::mem::replace(&mut seen[e], true) {
                return Err(GraphError::DuplicateEdge(e));
            }
            list.push(e);
        }
        list.sort_unstable();
        Ok(EdgeSubset { edges: list, limit })
    }

    pub fn empty(g: &Multigraph) -> Self {
        EdgeSubset {
            edges: Vec::new(),
            limit: g.edge_count(),
        }
    }

    pub fn all(g: &Multigraph) -> Self {
        EdgeSubset {
            edges: (0..g.edge_count()).collect(),
            limit: g.edge_count(),
        }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.edges.iter().copied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> Multigraph {
        Multigraph::new(3, vec![(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    #[test]
    fn build_examples() {
        let c3 = triangle();
        assert_eq!(c3.degrees(), vec![2, 2, 2]);
        let lp = Multigraph::new(1, vec![(0, 0)]).unwrap();
        assert_eq!(lp.degree(0), 2);
        assert_ne!(lp.out_sides(0)[0], lp.out_sides(0)[1]);
        let par = Multigraph::new(2, vec![(0, 1), (0, 1)]).unwrap();
        assert_eq!(par.degrees(), vec![2, 2]);
        assert!(matches!(
            Multigraph::new(2, vec![(0, 2)]),
            Err(GraphError::EndpointOutOfRange { endpoint: 2, .. })
        ));
    }

    #[test]
    fn side_involution() {
        let g = Multigraph::new(3, vec![(0, 1), (1, 1), (1, 2), (2, 0), (0, 1)]).unwrap();
        for s in 0..g.side_count() {
            assert_eq!(rev(rev(s)), s);
            assert_ne!(rev(s), s);
            assert_eq!(g.tail(rev(s)), g.head(s));
            assert_eq!(g.head(rev(s)), g.tail(s));
        }
        assert_eq!(g.degrees().iter().sum::<usize>(), 2 * g.edge_count());
        assert_eq!(g.degree(1), 5);
    }

    #[test]
    fn complete_graphs() {
        let k5 = Multigraph::complete(5).unwrap();
        assert_eq!((k5.vertex_count(), k5.edge_count()), (5, 10));
        assert!(k5.degrees().iter().all(|&d| d == 4));
        assert!(k5.is_connected());
        let k3 = Multigraph::complete(3).unwrap();
        assert!(k3.is_cycle());
        assert_eq!(k3.edges(), &[(0, 1), (0, 2), (1, 2)]);
        let k2 = Multigraph::complete(2).unwrap();
        assert_eq!(k2.edges(), &[(0, 1)]);
        assert_eq!(Multigraph::complete(1), Err(GraphError::TooFewVertices(1)));
    }

    #[test]
    fn connectivity() {
        let two = Multigraph::new(6, vec![(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]).unwrap();
        assert!(!two.is_connected());
        assert!(Multigraph::new(1, vec![]).unwrap().is_connected());
        assert!(Multigraph::new(0, vec![]).unwrap().is_connected());
    }

    #[test]
    fn girth_examples() {
        assert_eq!(Multigraph::complete(4).unwrap().girth(), Some(3));
        assert_eq!(Multigraph::cycle(5).unwrap().girth(), Some(5));
        let lp = Multigraph::new(3, vec![(0, 1), (1, 2), (2, 2)]).unwrap();
        assert_eq!(lp.girth(), Some(1));
        assert_eq!(Multigraph::new(2, vec![(0, 1), (0, 1)]).unwrap().girth(), Some(2));
        let tree = Multigraph::new(4, vec![(0, 1), (1, 2), (1, 3)]).unwrap();
        assert_eq!(tree.girth(), None);
        assert_eq!(Multigraph::cycle(7).unwrap().girth_below(7), None);
        assert_eq!(Multigraph::cycle(7).unwrap().girth_below(8), Some(7));
    }

    #[test]
    fn subdivide_examples() {
        let c3 = triangle();
        let c4 = c3.subdivide(&EdgeSubset::new(&c3, [0]).unwrap()).unwrap();
        assert_eq!(c4.edges(), &[(0, 3), (1, 2), (2, 0), (3, 1)]);
        assert!(c4.is_cycle());
        assert_eq!(c4.vertex_count(), 4);
        assert_eq!(c3.subdivide(&EdgeSubset::empty(&c3)).unwrap(), c3);

        let k4 = Multigraph::complete(4).unwrap();
        let full = k4.subdivide(&EdgeSubset::all(&k4)).unwrap();
        assert_eq!((full.vertex_count(), full.edge_count()), (10, 12));
        assert_eq!(full.girth(), Some(6));

        assert_eq!(EdgeSubset::new(&c3, [3]), Err(GraphError::EdgeOutOfRange(3)));
        assert_eq!(EdgeSubset::new(&c3, [1, 1]), Err(GraphError::DuplicateEdge(1)));
    }

    #[test]
    fn subdivide_uniform_examples() {
        let c3 = triangle();
        let c6 = c3.subdivide_uniform(2).unwrap();
        assert!(c6.is_cycle());
        assert_eq!(c6.vertex_count(), 6);
        let k5 = Multigraph::complete(5).unwrap();
        assert_eq!(k5.subdivide_uniform(1).unwrap(), k5);
        let s = k5.subdivide_uniform(2).unwrap();
        assert_eq!((s.vertex_count(), s.edge_count()), (15, 20));
        let hist = s.degree_histogram();
        assert_eq!(hist.get(&4), Some(&5));
        assert_eq!(hist.get(&2), Some(&10));
        assert_eq!(k5.subdivide_uniform(3).unwrap().girth(), Some(9));
        assert_eq!(k5.subdivide_uniform(0), Err(GraphError::InvalidSubdivision(0)));
    }

    #[test]
    fn lift_examples() {
        let c3 = triangle();
        let id2 = vec![vec![0, 1]; 3];
        let two = c3.permutation_lift(2, &id2).unwrap();
        assert_eq!(two.vertex_count(), 6);
        assert!(!two.is_connected());
        assert_eq!(two.girth(), Some(3));

        let twisted = c3
            .permutation_lift(2, &[vec![1, 0], vec![0, 1], vec![0, 1]])
            .unwrap();
        assert!(twisted.is_cycle());
        assert_eq!(twisted.vertex_count(), 6);
        assert_eq!(twisted.girth(), Some(6));

        let k4 = Multigraph::complete(4).unwrap();
        let trivial = k4.permutation_lift(1, &vec![vec![0]; 6]).unwrap();
        assert_eq!(trivial, k4);

        assert_eq!(c3.permutation_lift(0, &[]), Err(GraphError::InvalidLiftDegree));
        assert!(matches!(
            c3.permutation_lift(2, &[vec![0, 0], vec![0, 1], vec![0, 1]]),
            Err(GraphError::MalformedPermutation { edge: 0, m: 2 })
        ));
    }

    #[test]
    fn dot_export() {
        let dot = triangle().to_dot();
        assert_eq!(dot.matches(" -- ").count(), 3);
        assert!(dot.starts_with("graph G {"));
        let labeled = triangle().to_dot_labeled(Some(&[1, -2, 1]));
        assert!(labeled.contains("1 -- 2 [label=\"b2\"]"));
    }
}
