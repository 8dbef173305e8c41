use std::sync::Arc;

use super::{Problem, WeightedGraph};
use crate::bitcore::Genotype;
use crate::error::{Error, Result};
use crate::features::{cc_count, FeatureSpace, FeatureSpaceKind};
use crate::oracles::kruskal;

/// `-w(x)`, the negated total weight of the selected edges.
pub fn mst_fitness(g: &WeightedGraph, x: &Genotype) -> Result<f64> {
    if x.len() != g.edge_count() {
        return Err(Error::LengthMismatch {
            expected: g.edge_count(),
            actual: x.len(),
        });
    }
    Ok(-(selected_weight(g, x) as f64))
}

fn selected_weight(g: &WeightedGraph, x: &Genotype) -> u64 {
    let edges = g.edges();
    x.iter_ones().map(|i| edges[i].w).sum()
}

/// Minimum spanning tree as a maximisation problem over edge selections.
///
/// The optimum spanning forest with `c` components is the first `n_G - c`
/// edges Kruskal accepts, which gives exact per-cell optima for the
/// connected-components space.
#[derive(Clone, Debug)]
pub struct MstProblem {
    graph: Arc<WeightedGraph>,
    /// Prefix sums of Kruskal's accepted edge weights.
    forest_weight: Vec<u64>,
}

impl MstProblem {
    pub fn new(graph: Arc<WeightedGraph>) -> Self {
        let tree = kruskal(&graph).expect("WeightedGraph is connected by construction");
        let mut forest_weight = vec![0u64];
        for &e in &tree.edges {
            let last = *forest_weight.last().unwrap();
            forest_weight.push(last + graph.edges()[e].w);
        }
        MstProblem {
            graph,
            forest_weight,
        }
    }

    pub fn graph(&self) -> &Arc<WeightedGraph> {
        &self.graph
    }

    pub fn mst_weight(&self) -> u64 {
        *self.forest_weight.last().unwrap()
    }

    /// Weight of the lightest spanning forest with `components` components.
    pub fn optimal_forest_weight(&self, components: usize) -> Option<u64> {
        let n = self.graph.node_count();
        if components == 0 || components > n {
            return None;
        }
        Some(self.forest_weight[n - components])
    }

    /// Selected weight of `x` (un-negated).
    pub fn weight(&self, x: &Genotype) -> u64 {
        selected_weight(&self.graph, x)
    }
}

impl Problem for MstProblem {
    fn name(&self) -> String {
        "mst".into()
    }

    fn dim(&self) -> usize {
        self.graph.edge_count()
    }

    fn evaluate(&self, x: &Genotype) -> f64 {
        -(selected_weight(&self.graph, x) as f64)
    }

    fn is_global_opt(&self, x: &Genotype, fitness: f64) -> Option<bool> {
        if -fitness != self.mst_weight() as f64 {
            return Some(false);
        }
        Some(cc_count(&self.graph, x).ok() == Some(1))
    }

    fn cell_optima(&self, space: &FeatureSpace) -> Option<Vec<f64>> {
        match space.kind() {
            FeatureSpaceKind::ConnectedComponents(g) if **g == *self.graph => (1..=g.node_count())
                .map(|c| self.optimal_forest_weight(c).map(|w| -(w as f64)))
                .collect(),
            _ => None,
        }
    }
}
