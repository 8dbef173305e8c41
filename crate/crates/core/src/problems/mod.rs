//! Fitness functions. Every [`Problem`] is maximised; minimisation problems
//! negate their objective here so the archive has a single acceptance rule.

mod biobjective;
mod coverage;
mod graph;
mod linear;
mod mst;
mod unitation;

pub use biobjective::{
    BiObjective, MstBiObjective, OneMinMax, Sense, SingleObjective, SubmodularBiObjective,
};
pub use coverage::{best_feasible, coverage_value, CoverageInstance, CoverageProblem};
pub use graph::{Edge, WeightedGraph};
pub use linear::{linear_monotone, LinearMonotone};
pub use mst::{mst_fitness, MstProblem};
pub use unitation::{onemax, Unitation, UnitationKind};

pub(crate) use graph::parse_fields;

use crate::bitcore::Genotype;
use crate::features::FeatureSpace;

/// A pseudo-Boolean fitness function `f : {0,1}^n -> R` to be maximised.
pub trait Problem: Send + Sync {
    fn name(&self) -> String;

    fn dim(&self) -> usize;

    /// Pure and deterministic.
    fn evaluate(&self, x: &Genotype) -> f64;

    /// `Some(true)` iff `x` (with fitness `fitness`) is a global optimum;
    /// `None` when the problem does not define the milestone.
    fn is_global_opt(&self, _x: &Genotype, _fitness: f64) -> Option<bool> {
        None
    }

    /// Best attainable fitness per cell of `space`, when it has a closed
    /// form. Callers fall back to exhaustive enumeration for small `n`.
    fn cell_optima(&self, _space: &FeatureSpace) -> Option<Vec<f64>> {
        None
    }

    /// Cardinality constraint `|x|_1 <= r` that filters the reported
    /// solution, if any.
    fn cardinality_limit(&self) -> Option<usize> {
        None
    }
}

impl<P: Problem + ?Sized> Problem for &P {
    fn name(&self) -> String {
        (**self).name()
    }
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn evaluate(&self, x: &Genotype) -> f64 {
        (**self).evaluate(x)
    }
    fn is_global_opt(&self, x: &Genotype, fitness: f64) -> Option<bool> {
        (**self).is_global_opt(x, fitness)
    }
    fn cell_optima(&self, space: &FeatureSpace) -> Option<Vec<f64>> {
        (**self).cell_optima(space)
    }
    fn cardinality_limit(&self) -> Option<usize> {
        (**self).cardinality_limit()
    }
}

impl<P: Problem + ?Sized> Problem for Box<P> {
    fn name(&self) -> String {
        (**self).name()
    }
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn evaluate(&self, x: &Genotype) -> f64 {
        (**self).evaluate(x)
    }
    fn is_global_opt(&self, x: &Genotype, fitness: f64) -> Option<bool> {
        (**self).is_global_opt(x, fitness)
    }
    fn cell_optima(&self, space: &FeatureSpace) -> Option<Vec<f64>> {
        (**self).cell_optima(space)
    }
    fn cardinality_limit(&self) -> Option<usize> {
        (**self).cardinality_limit()
    }
}

/// Per-cell maxima of a one-count profile `f(j)`, `j = 0..=n`, over the
/// intervals of a number-of-ones space.
pub(crate) fn cell_max_of_profile(profile: &[f64], space: &FeatureSpace) -> Option<Vec<f64>> {
    let n = profile.len() - 1;
    if space.dim() != n {
        return None;
    }
    (0..space.cell_count())
        .map(|c| {
            let (lo, hi) = space.ones_range(c)?;
            profile[lo..=hi.min(n)].iter().copied().reduce(f64::max)
        })
        .collect()
}
