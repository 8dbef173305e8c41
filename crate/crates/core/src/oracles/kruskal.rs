use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::features::UnionFind;
use crate::problems::WeightedGraph;

/// Edge indices of a spanning tree, in the order they were added.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanningTree {
    pub edges: Vec<usize>,
    pub weight: u64,
}

/// Kruskal's algorithm. With pairwise distinct weights the result is the
/// unique minimum spanning tree.
pub fn kruskal(g: &WeightedGraph) -> Result<SpanningTree> {
    let mut order: Vec<usize> = (0..g.edge_count()).collect();
    order.sort_by_key(|&i| g.edges()[i].w);
    let mut uf = UnionFind::new(g.node_count());
    let mut tree = SpanningTree {
        edges: Vec::with_capacity(g.node_count().saturating_sub(1)),
        weight: 0,
    };
    for i in order {
        let e = g.edges()[i];
        if uf.union(e.u, e.v) {
            tree.edges.push(i);
            tree.weight += e.w;
        }
    }
    if uf.components() != 1 {
        return Err(Error::Graph("graph is disconnected".into()));
    }
    Ok(tree)
}

/// Largest edge count the exhaustive MST search accepts.
pub const EXHAUSTIVE_EDGE_LIMIT: usize = 24;

/// Minimum spanning tree by trying every `(n_G - 1)`-edge subset and
/// checking connectivity with breadth-first search.
pub fn mst_exhaustive(g: &WeightedGraph) -> Result<SpanningTree> {
    let m = g.edge_count();
    if m > EXHAUSTIVE_EDGE_LIMIT {
        return Err(Error::TooLarge {
            n: m,
            limit: EXHAUSTIVE_EDGE_LIMIT,
        });
    }
    let need = g.node_count() - 1;
    let mut best: Option<SpanningTree> = None;
    for mask in 0u32..1 << m {
        if mask.count_ones() as usize != need {
            continue;
        }
        let edges: Vec<usize> = (0..m).filter(|i| mask >> i & 1 == 1).collect();
        if !spans(g, &edges) {
            continue;
        }
        let weight = edges.iter().map(|&i| g.edges()[i].w).sum();
        if best.as_ref().is_none_or(|b| weight < b.weight) {
            best = Some(SpanningTree { edges, weight });
        }
    }
    best.ok_or_else(|| Error::Graph("graph is disconnected".into()))
}

/// Whether the edge subset connects every node (BFS).
pub fn spans(g: &WeightedGraph, edges: &[usize]) -> bool {
    let n = g.node_count();
    let mut adj = vec![Vec::new(); n];
    for &i in edges {
        let e = g.edges()[i];
        adj[e.u].push(e.v);
        adj[e.v].push(e.u);
    }
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    let mut count = 1;
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                count += 1;
                queue.push_back(v);
            }
        }
    }
    count == n
}
