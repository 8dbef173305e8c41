use crate::bitcore::Genotype;
use crate::error::{Error, Result};
use crate::problems::WeightedGraph;

/// Disjoint-set forest with union by size and path halving.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<u32>,
    size: Vec<u32>,
    components: usize,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n as u32).collect(),
            size: vec![1; n],
            components: n,
        }
    }

    /// Resets to `n` singletons without reallocating when possible.
    pub fn reset(&mut self, n: usize) {
        self.parent.clear();
        self.parent.extend(0..n as u32);
        self.size.clear();
        self.size.resize(n, 1);
        self.components = n;
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] as usize != x {
            let grand = self.parent[self.parent[x] as usize];
            self.parent[x] = grand;
            x = grand as usize;
        }
        x
    }

    /// Merges the sets of `a` and `b`; returns false if already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra as u32;
        self.size[ra] += self.size[rb];
        self.components -= 1;
        true
    }

    pub fn components(&self) -> usize {
        self.components
    }
}

/// Number of connected components of `(V, {e_i : x_i = 1})` over all nodes
/// of `graph`.
pub fn cc_count(graph: &WeightedGraph, x: &Genotype) -> Result<usize> {
    if x.len() != graph.edge_count() {
        return Err(Error::LengthMismatch {
            expected: graph.edge_count(),
            actual: x.len(),
        });
    }
    Ok(cc_count_unchecked(graph, x))
}

pub(crate) fn cc_count_unchecked(graph: &WeightedGraph, x: &Genotype) -> usize {
    let mut uf = UnionFind::new(graph.node_count());
    let edges = graph.edges();
    for i in x.iter_ones() {
        uf.union(edges[i].u, edges[i].v);
    }
    uf.components()
}
