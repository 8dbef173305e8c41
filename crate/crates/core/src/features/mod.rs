//! Feature spaces (cell-index functions) and the elite archive.
//!
//! Two spaces are provided. The number-of-ones space with granularity `k`
//! puts `x` in cell `⌊|x|_1 / k⌋` and has `L = (n+1)/k` cells; `k` must
//! divide `n + 1`. The connected-components space puts an edge selection
//! `x` in cell `cc(x) - 1` and has one cell per node of the graph.
//!
//! Cell indices are 0-based everywhere in the API. Reports that follow the
//! 1-based convention add one at the edge.

mod archive;
mod components;

use std::sync::Arc;

pub use archive::{Archive, Elite, OfferOutcome};
pub use components::{cc_count, UnionFind};

use crate::bitcore::Genotype;
use crate::error::{Error, Result};
use crate::problems::WeightedGraph;

/// Which partition of the search space a run uses.
#[derive(Clone, Debug)]
pub enum FeatureSpaceKind {
    NumberOfOnes { k: usize },
    ConnectedComponents(Arc<WeightedGraph>),
}

/// A feature space bound to a genotype length.
#[derive(Clone, Debug)]
pub struct FeatureSpace {
    kind: FeatureSpaceKind,
    n: usize,
    cells: usize,
}

impl FeatureSpace {
    pub fn new(kind: FeatureSpaceKind, n: usize) -> Result<Self> {
        let cells = cell_count(&kind, n)?;
        Ok(FeatureSpace { kind, n, cells })
    }

    pub fn number_of_ones(n: usize, k: usize) -> Result<Self> {
        Self::new(FeatureSpaceKind::NumberOfOnes { k }, n)
    }

    pub fn connected_components(graph: Arc<WeightedGraph>) -> Result<Self> {
        let m = graph.edge_count();
        Self::new(FeatureSpaceKind::ConnectedComponents(graph), m)
    }

    pub fn kind(&self) -> &FeatureSpaceKind {
        &self.kind
    }

    /// Genotype length this space accepts.
    pub fn dim(&self) -> usize {
        self.n
    }

    /// `L`, the number of cells.
    pub fn cell_count(&self) -> usize {
        self.cells
    }

    /// The granularity `k` for the number-of-ones space.
    pub fn granularity(&self) -> Option<usize> {
        match self.kind {
            FeatureSpaceKind::NumberOfOnes { k } => Some(k),
            FeatureSpaceKind::ConnectedComponents(_) => None,
        }
    }

    /// Cell of `x`, checking its length.
    pub fn cell_index(&self, x: &Genotype) -> Result<usize> {
        if x.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                actual: x.len(),
            });
        }
        Ok(self.cell_of(x))
    }

    /// Cell of `x` without the length check.
    #[inline]
    pub fn cell_of(&self, x: &Genotype) -> usize {
        debug_assert_eq!(x.len(), self.n);
        match &self.kind {
            FeatureSpaceKind::NumberOfOnes { k } => x.count_ones() / k,
            FeatureSpaceKind::ConnectedComponents(g) => components::cc_count_unchecked(g, x) - 1,
        }
    }

    /// The inclusive one-count interval of a number-of-ones cell.
    pub fn ones_range(&self, cell: usize) -> Option<(usize, usize)> {
        match self.kind {
            FeatureSpaceKind::NumberOfOnes { k } if cell < self.cells => {
                Some((cell * k, cell * k + k - 1))
            }
            _ => None,
        }
    }

    /// Short label used in CSV output: the granularity, or `cc`.
    pub fn label(&self) -> String {
        match &self.kind {
            FeatureSpaceKind::NumberOfOnes { k } => k.to_string(),
            FeatureSpaceKind::ConnectedComponents(_) => "cc".into(),
        }
    }
}

/// `L = (n+1)/k` for the number-of-ones space, the node count for the
/// connected-components space.
pub fn cell_count(kind: &FeatureSpaceKind, n: usize) -> Result<usize> {
    if n == 0 {
        return Err(Error::InvalidDimension(
            "genotype length must be >= 1".into(),
        ));
    }
    match kind {
        FeatureSpaceKind::NumberOfOnes { k } => {
            let k = *k;
            if k == 0 || k > n + 1 || !(n + 1).is_multiple_of(k) {
                return Err(Error::Granularity {
                    k,
                    n_plus_one: n + 1,
                });
            }
            Ok((n + 1) / k)
        }
        FeatureSpaceKind::ConnectedComponents(g) => {
            if g.edge_count() != n {
                return Err(Error::LengthMismatch {
                    expected: g.edge_count(),
                    actual: n,
                });
            }
            Ok(g.node_count())
        }
    }
}
