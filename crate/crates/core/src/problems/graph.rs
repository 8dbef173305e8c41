//! Edge-weighted undirected graphs and their plain-text edge-list format.
//!
//! ```text
//! n_G m
//! u v w      (m lines, 0-based node ids, positive integer weight)
//! ```
//!
//! Edge `i` of the file is bit `i` of an edge-selection genotype.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::UnionFind;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub w: u64,
}

/// A connected graph with pairwise distinct positive edge weights, so its
/// minimum spanning tree is unique.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightedGraph {
    nodes: usize,
    edges: Vec<Edge>,
}

impl WeightedGraph {
    pub fn new(nodes: usize, edges: Vec<Edge>) -> Result<Self> {
        if nodes == 0 {
            return Err(Error::Graph("graph needs at least one node".into()));
        }
        if edges.is_empty() {
            return Err(Error::Graph("graph needs at least one edge".into()));
        }
        let mut seen = HashSet::with_capacity(edges.len());
        for (i, e) in edges.iter().enumerate() {
            if e.u >= nodes || e.v >= nodes {
                return Err(Error::Graph(format!(
                    "edge {i} ({}, {}) references a node outside 0..{nodes}",
                    e.u, e.v
                )));
            }
            if e.u == e.v {
                return Err(Error::Graph(format!("edge {i} is a self-loop on {}", e.u)));
            }
            if e.w == 0 {
                return Err(Error::Graph(format!("edge {i} has non-positive weight")));
            }
            if !seen.insert(e.w) {
                return Err(Error::Graph(format!(
                    "weight {} appears more than once; weights must be pairwise distinct",
                    e.w
                )));
            }
        }
        let g = WeightedGraph { nodes, edges };
        let mut uf = UnionFind::new(nodes);
        for e in &g.edges {
            uf.union(e.u, e.v);
        }
        if uf.components() != 1 {
            return Err(Error::Graph(format!(
                "graph is disconnected ({} components)",
                uf.components()
            )));
        }
        Ok(g)
    }

    pub fn node_count(&self) -> usize {
        self.nodes
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn w_max(&self) -> u64 {
        self.edges.iter().map(|e| e.w).max().unwrap_or(0)
    }

    pub fn total_weight(&self) -> u64 {
        self.edges.iter().map(|e| e.w).sum()
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hl, header) = lines.next().ok_or(Error::Parse {
            what: "graph",
            line: 1,
            msg: "missing header".into(),
        })?;
        let head = parse_fields::<usize>(header, 2, "graph", hl)?;
        let (nodes, m) = (head[0], head[1]);
        let mut edges = Vec::with_capacity(m);
        for (line, l) in lines.by_ref().take(m) {
            let f = parse_fields::<u64>(l, 3, "graph", line)?;
            edges.push(Edge {
                u: f[0] as usize,
                v: f[1] as usize,
                w: f[2],
            });
        }
        if edges.len() != m {
            return Err(Error::Parse {
                what: "graph",
                line: hl,
                msg: format!("header announces {m} edges, found {}", edges.len()),
            });
        }
        if let Some((line, _)) = lines.next() {
            return Err(Error::Parse {
                what: "graph",
                line,
                msg: "trailing content after the last edge".into(),
            });
        }
        WeightedGraph::new(nodes, edges)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    pub fn to_edge_list(&self) -> String {
        let mut s = format!("{} {}\n", self.nodes, self.edges.len());
        for e in &self.edges {
            let _ = writeln!(s, "{} {} {}", e.u, e.v, e.w);
        }
        s
    }

    /// A random connected simple graph: a random spanning tree plus
    /// `m - (nodes - 1)` further distinct node pairs, with weights a random
    /// permutation of `1..=m`.
    pub fn random_connected<R: RngCore + ?Sized>(
        nodes: usize,
        m: usize,
        rng: &mut R,
    ) -> Result<Self> {
        if nodes < 2 {
            return Err(Error::InvalidParameter(
                "random graph needs >= 2 nodes".into(),
            ));
        }
        let max_edges = nodes * (nodes - 1) / 2;
        if m < nodes - 1 || m > max_edges {
            return Err(Error::InvalidParameter(format!(
                "edge count {m} outside [{}, {max_edges}] for {nodes} nodes",
                nodes - 1
            )));
        }
        let mut order: Vec<usize> = (0..nodes).collect();
        order.shuffle(rng);
        let mut pairs: Vec<(usize, usize)> = Vec::with_capacity(m);
        let mut used = HashSet::new();
        for i in 1..nodes {
            let j = (rng.next_u64() % i as u64) as usize;
            let (a, b) = (order[i].min(order[j]), order[i].max(order[j]));
            used.insert((a, b));
            pairs.push((a, b));
        }
        let mut rest: Vec<(usize, usize)> = (0..nodes)
            .flat_map(|a| (a + 1..nodes).map(move |b| (a, b)))
            .filter(|p| !used.contains(p))
            .collect();
        rest.shuffle(rng);
        pairs.extend(rest.into_iter().take(m - (nodes - 1)));
        pairs.shuffle(rng);
        let mut weights: Vec<u64> = (1..=m as u64).collect();
        weights.shuffle(rng);
        let edges = pairs
            .into_iter()
            .zip(weights)
            .map(|((u, v), w)| Edge { u, v, w })
            .collect();
        WeightedGraph::new(nodes, edges)
    }
}

pub(crate) fn parse_fields<T: std::str::FromStr>(
    line: &str,
    expected: usize,
    what: &'static str,
    lineno: usize,
) -> Result<Vec<T>> {
    let fields: Vec<&str> = line.split_whitespace().collect();
    if fields.len() != expected {
        return Err(Error::Parse {
            what,
            line: lineno,
            msg: format!("expected {expected} fields, found {}", fields.len()),
        });
    }
    fields
        .iter()
        .map(|f| {
            f.parse::<T>().map_err(|_| Error::Parse {
                what,
                line: lineno,
                msg: format!("cannot parse {f:?}"),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitcore::RandomSource;

    #[test]
    fn parse_round_trip() {
        let text = "3 3\n0 1 1\n1 2 2\n0 2 3\n";
        let g = WeightedGraph::parse(text).unwrap();
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g.w_max(), 3);
        assert_eq!(g.to_edge_list(), text);
    }

    #[test]
    fn rejects_duplicate_weights() {
        let err = WeightedGraph::parse("3 2\n0 1 5\n1 2 5\n").unwrap_err();
        assert!(err.to_string().contains("distinct"), "{err}");
    }

    #[test]
    fn rejects_disconnected() {
        let err = WeightedGraph::parse("4 2\n0 1 1\n2 3 2\n").unwrap_err();
        assert!(err.to_string().contains("disconnected"), "{err}");
    }

    #[test]
    fn rejects_bad_lines() {
        assert!(WeightedGraph::parse("").is_err());
        assert!(WeightedGraph::parse("2 1\n0 1\n").is_err());
        assert!(WeightedGraph::parse("2 2\n0 1 1\n").is_err());
        assert!(WeightedGraph::parse("2 1\n0 1 0\n").is_err());
        assert!(WeightedGraph::parse("2 1\n0 5 1\n").is_err());
        assert!(WeightedGraph::parse("2 1\n0 1 1\n0 1 2\n").is_err());
    }

    #[test]
    fn random_graphs_are_valid() {
        let mut rng = RandomSource::new(3, 0);
        for nodes in 2..12 {
            let m = (2 * nodes).min(nodes * (nodes - 1) / 2).max(nodes - 1);
            let g = WeightedGraph::random_connected(nodes, m, &mut rng).unwrap();
            assert_eq!(g.edge_count(), m);
            let mut w: Vec<u64> = g.edges().iter().map(|e| e.w).collect();
            w.sort_unstable();
            assert_eq!(w, (1..=m as u64).collect::<Vec<_>>());
        }
    }
}
