use std::collections::VecDeque;

use crate::graph::{edge_of, rev, Multigraph};

use super::{LabeledGraph, Letter, Result, StallingsError};

/// A loop-padded graph together with the indices of the loops that were added.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Augmented {
    pub graph: Multigraph,
    pub added: Vec<usize>,
}

/// Adds `(2r - deg(v)) / 2` loops at every vertex, appended in vertex order.
pub fn augment_loops(g: &Multigraph, r: usize) -> Result<Augmented> {
    if r == 0 {
        return Err(StallingsError::BadRank);
    }
    let max = 2 * r;
    let mut extra = Vec::new();
    for (v, d) in g.degrees().into_iter().enumerate() {
        if d % 2 == 1 {
            return Err(StallingsError::OddDegree {
                vertex: v,
                degree: d,
            });
        }
        if d > max {
            return Err(StallingsError::DegreeTooLarge {
                vertex: v,
                degree: d,
                max,
            });
        }
        extra.extend(std::iter::repeat_n((v, v), (max - d) / 2));
    }
    let first = g.edge_count();
    let added = (first..first + extra.len()).collect();
    Ok(Augmented {
        graph: g.with_edges(extra)?,
        added,
    })
}

/// `r` edge-disjoint spanning 2-regular subgraphs covering every edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoFactorization {
    /// Edge indices of each factor, ascending.
    pub factors: Vec<Vec<usize>>,
}

impl TwoFactorization {
    /// Factor index of every edge.
    pub fn factor_of_edges(&self, edge_count: usize) -> Vec<usize> {
        let mut of = vec![usize::MAX; edge_count];
        for (k, f) in self.factors.iter().enumerate() {
            for &e in f {
                of[e] = k;
            }
        }
        of
    }
}

/// Petersen decomposition of a connected `2r`-regular multigraph.
///
/// Orient every edge along an Euler circuit (in- and out-degree `r` everywhere), then
/// peel `r` perfect matchings off the bipartite out/in incidence graph; each matching
/// gives every vertex one outgoing and one incoming edge, i.e. a 2-factor.
pub fn two_factorize(g: &Multigraph) -> Result<TwoFactorization> {
    let n = g.vertex_count();
    if n == 0 {
        return Err(StallingsError::NotRegular);
    }
    let degree = g.degree(0);
    if degree == 0 || degree % 2 == 1 || g.degrees().iter().any(|&d| d != degree) {
        return Err(StallingsError::NotRegular);
    }
    if !g.is_connected() {
        return Err(StallingsError::Disconnected);
    }
    let r = degree / 2;
    let oriented = euler_orientation(g);

    // Bipartite adjacency: left = tails, right = heads, entries are edge ids (ascending).
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (e, &s) in oriented.iter().enumerate() {
        adj[g.tail(s)].push((e, g.head(s)));
    }
    let mut factors = Vec::with_capacity(r);
    let mut removed = vec![false; g.edge_count()];
    for round in 0..r {
        let live: Vec<Vec<(usize, usize)>> = adj
            .iter()
            .map(|a| a.iter().copied().filter(|&(e, _)| !removed[e]).collect())
            .collect();
        let matching = perfect_matching(&live).ok_or(StallingsError::MatchingFailed(round))?;
        let mut factor: Vec<usize> = matching;
        factor.sort_unstable();
        for &e in &factor {
            removed[e] = true;
        }
        factors.push(factor);
    }
    Ok(TwoFactorization { factors })
}

/// For every edge, the side along which an Euler circuit from vertex 0 traverses it.
/// Hierholzer's algorithm; at each vertex the smallest unused side is taken first.
fn euler_orientation(g: &Multigraph) -> Vec<usize> {
    let mut oriented = vec![usize::MAX; g.edge_count()];
    let mut next = vec![0usize; g.vertex_count()];
    let mut stack = vec![0usize];
    while let Some(&v) = stack.last() {
        let sides = g.out_sides(v);
        while next[v] < sides.len() && oriented[edge_of(sides[next[v]])] != usize::MAX {
            next[v] += 1;
        }
        match sides.get(next[v]) {
            Some(&s) => {
                oriented[edge_of(s)] = s;
                stack.push(g.head(s));
            }
            None => {
                stack.pop();
            }
        }
    }
    oriented
}

/// Hopcroft–Karp on a bipartite multigraph with `adj.len()` vertices per side.
/// Returns the matched edge ids, or `None` if no perfect matching exists.
fn perfect_matching(adj: &[Vec<(usize, usize)>]) -> Option<Vec<usize>> {
    const NONE: usize = usize::MAX;
    let n = adj.len();
    let mut edge_of_left = vec![NONE; n];
    let mut left_of_right = vec![NONE; n];
    let mut right_of_left = vec![NONE; n];
    let mut dist = vec![0usize; n];
    let mut cursor = vec![0usize; n];
    loop {
        // Layered BFS from free left vertices.
        let mut queue = VecDeque::new();
        for u in 0..n {
            if edge_of_left[u] == NONE {
                dist[u] = 0;
                queue.push_back(u);
            } else {
                dist[u] = NONE;
            }
        }
        let mut found = false;
        while let Some(u) = queue.pop_front() {
            for &(_, v) in &adj[u] {
                let w = left_of_right[v];
                if w == NONE {
                    found = true;
                } else if dist[w] == NONE {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        if !found {
            break;
        }
        cursor.iter_mut().for_each(|c| *c = 0);
        for root in 0..n {
            if edge_of_left[root] != NONE {
                continue;
            }
            // Iterative DFS along the layers; `path` holds (left vertex, chosen adj index).
            let mut path: Vec<(usize, usize)> = Vec::new();
            let mut u = root;
            loop {
                if cursor[u] == adj[u].len() {
                    dist[u] = NONE;
                    match path.pop() {
                        Some((parent, _)) => {
                            u = parent;
                            cursor[u] += 1;
                            continue;
                        }
                        None => break,
                    }
                }
                let (_, v) = adj[u][cursor[u]];
                let w = left_of_right[v];
                if w == NONE {
                    path.push((u, cursor[u]));
                    for &(pu, idx) in &path {
                        let (e, pv) = adj[pu][idx];
                        edge_of_left[pu] = e;
                        right_of_left[pu] = pv;
                        left_of_right[pv] = pu;
                    }
                    break;
                }
                if dist[w] != NONE && dist[w] == dist[u] + 1 {
                    path.push((u, cursor[u]));
                    u = w;
                } else {
                    cursor[u] += 1;
                }
            }
        }
    }
    edge_of_left
        .iter()
        .all(|&e| e != NONE)
        .then_some(edge_of_left)
}

/// Orients each factor along its cycles and labels factor `k` (0-based) with `a_{k+1}`.
///
/// Cycles are started at their smallest vertex through its smallest unlabeled side in
/// the factor, so the result is reproducible.
pub fn label(g: &Multigraph, factors: &TwoFactorization, basepoint: usize) -> Result<LabeledGraph> {
    if basepoint >= g.vertex_count() {
        return Err(StallingsError::BadBasepoint(basepoint));
    }
    let factor_of = factors.factor_of_edges(g.edge_count());
    if factor_of.contains(&usize::MAX) {
        return Err(StallingsError::LabelCount);
    }
    let mut labels = vec![0i32; g.edge_count()];
    for v in 0..g.vertex_count() {
        for &start in g.out_sides(v) {
            if labels[edge_of(start)] != 0 {
                continue;
            }
            let k = factor_of[edge_of(start)];
            let letter = k as i32 + 1;
            let mut cur = start;
            loop {
                labels[edge_of(cur)] = if cur % 2 == 0 { letter } else { -letter };
                let next = g.out_sides(g.head(cur)).iter().copied().find(|&t| {
                    t != rev(cur) && factor_of[edge_of(t)] == k && labels[edge_of(t)] == 0
                });
                match next {
                    Some(t) => cur = t,
                    None => break,
                }
            }
        }
    }
    let labels = labels
        .into_iter()
        .map(|k| Letter::from_signed(k).expect("every edge labelled"))
        .collect();
    LabeledGraph::new(g.clone(), basepoint, labels)
}

/// Removes the padding loops created by [`augment_loops`].
pub fn strip_loops(l: &LabeledGraph, added: &[usize]) -> Result<LabeledGraph> {
    let g = l.graph();
    let mut seen = vec![false; g.edge_count()];
    for &e in added {
        if e >= g.edge_count() || !g.is_loop(e) || std::mem::replace(&mut seen[e], true) {
            return Err(StallingsError::LoopIdMismatch(e));
        }
    }
    let labels = l
        .edge_labels()
        .iter()
        .zip(&seen)
        .filter(|(_, &drop)| !drop)
        .map(|(&k, _)| k)
        .collect();
    LabeledGraph::new(g.without_edges(added), l.basepoint(), labels)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_two_factor(g: &Multigraph, tf: &TwoFactorization, r: usize) {
        assert_eq!(tf.factors.len(), r);
        let of = tf.factor_of_edges(g.edge_count());
        assert!(!of.contains(&usize::MAX));
        for k in 0..r {
            for v in 0..g.vertex_count() {
                let ends = g
                    .out_sides(v)
                    .iter()
                    .filter(|&&s| of[edge_of(s)] == k)
                    .count();
                assert_eq!(ends, 2, "factor {k} at vertex {v}");
            }
        }
    }

    #[test]
    fn augment_examples() {
        let c4 = Multigraph::cycle(4).unwrap();
        let aug = augment_loops(&c4, 2).unwrap();
        assert_eq!(aug.added, vec![4, 5, 6, 7]);
        assert!(aug.graph.degrees().iter().all(|&d| d == 4));
        assert_eq!(&aug.graph.edges()[..4], c4.edges());

        let k5 = Multigraph::complete(5).unwrap();
        let aug = augment_loops(&k5, 2).unwrap();
        assert!(aug.added.is_empty());
        assert_eq!(aug.graph, k5);

        let path = Multigraph::new(3, vec![(0, 1), (1, 2)]).unwrap();
        assert_eq!(
            augment_loops(&path, 2),
            Err(StallingsError::OddDegree {
                vertex: 0,
                degree: 1
            })
        );
        assert!(matches!(
            augment_loops(&Multigraph::complete(7).unwrap(), 2),
            Err(StallingsError::DegreeTooLarge { degree: 6, .. })
        ));
    }

    #[test]
    fn loop_count_identity() {
        let g = Multigraph::new(4, vec![(0, 1), (1, 2), (2, 3), (3, 0), (0, 2), (0, 2)]).unwrap();
        let r = 3;
        let sum: usize = g.degrees().iter().sum();
        let aug = augment_loops(&g, r).unwrap();
        assert_eq!(aug.added.len(), (2 * r * g.vertex_count() - sum) / 2);
    }

    #[test]
    fn factorize_rose() {
        let rose = Multigraph::rose(2);
        let tf = two_factorize(&rose).unwrap();
        assert_eq!(tf.factors, vec![vec![0], vec![1]]);
    }

    #[test]
    fn factorize_examples() {
        let aug = augment_loops(&Multigraph::cycle(4).unwrap(), 2).unwrap();
        let tf = two_factorize(&aug.graph).unwrap();
        assert_two_factor(&aug.graph, &tf, 2);

        let k5 = Multigraph::complete(5).unwrap();
        let tf = two_factorize(&k5).unwrap();
        assert_two_factor(&k5, &tf, 2);
        // Each factor of K5 is a 5-edge spanning 2-regular simple graph: a Hamiltonian cycle.
        for f in &tf.factors {
            let sub = Multigraph::new(5, f.iter().map(|&e| k5.edge(e)).collect()).unwrap();
            assert!(sub.is_cycle());
        }

        let k7 = Multigraph::complete(7).unwrap();
        assert_two_factor(&k7, &two_factorize(&k7).unwrap(), 3);
    }

    #[test]
    fn factorize_rejects_irregular() {
        let g = Multigraph::new(3, vec![(0, 1), (1, 2), (2, 0), (0, 0)]).unwrap();
        assert_eq!(two_factorize(&g), Err(StallingsError::NotRegular));
        let two = Multigraph::new(2, vec![(0, 0), (1, 1)]).unwrap();
        assert_eq!(two_factorize(&two), Err(StallingsError::Disconnected));
    }

    #[test]
    fn label_rose_and_c4() {
        let rose = Multigraph::rose(2);
        let l = label(&rose, &two_factorize(&rose).unwrap(), 0).unwrap();
        assert_eq!(l.edge_labels(), &[Letter::generator(1), Letter::generator(2)]);

        let aug = augment_loops(&Multigraph::cycle(4).unwrap(), 2).unwrap();
        let l = label(&aug.graph, &two_factorize(&aug.graph).unwrap(), 0).unwrap();
        assert!(l.check_folded());
        assert!(l.is_codeterministic());
        let stripped = strip_loops(&l, &aug.added).unwrap();
        assert!(stripped.check_folded());
        assert_eq!(stripped.graph(), &Multigraph::cycle(4).unwrap());
        // The 4-cycle is one factor: one label letter, one in and one out side per vertex.
        let k = stripped.edge_labels()[0].index();
        for v in 0..4 {
            let outs: Vec<Letter> = stripped
                .graph()
                .out_sides(v)
                .iter()
                .map(|&s| stripped.side_label(s))
                .collect();
            assert_eq!(outs.len(), 2);
            assert!(outs.contains(&Letter::generator(k)));
            assert!(outs.contains(&Letter::generator(k).inverse()));
        }
    }

    #[test]
    fn strip_validates_ids() {
        let k5 = Multigraph::complete(5).unwrap();
        let l = label(&k5, &two_factorize(&k5).unwrap(), 0).unwrap();
        assert_eq!(strip_loops(&l, &[]).unwrap(), l);
        assert_eq!(strip_loops(&l, &[0]), Err(StallingsError::LoopIdMismatch(0)));
        assert_eq!(strip_loops(&l, &[99]), Err(StallingsError::LoopIdMismatch(99)));

        let rose = Multigraph::rose(2);
        let lr = label(&rose, &two_factorize(&rose).unwrap(), 0).unwrap();
        assert_eq!(strip_loops(&lr, &[]).unwrap(), lr);
    }
}
