//! Two-objective formulations driven by GSEMO.

use std::sync::Arc;

use super::{CoverageInstance, MstProblem, Problem, WeightedGraph};
use crate::bitcore::Genotype;
use crate::features::cc_count;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Maximise,
    Minimise,
}

/// A vector-valued fitness with a declared orientation per objective.
pub trait BiObjective: Send + Sync {
    fn name(&self) -> String;

    fn dim(&self) -> usize;

    fn senses(&self) -> [Sense; 2];

    fn objectives(&self, x: &Genotype) -> [f64; 2];

    /// Number of distinct objective vectors on the Pareto front, when known.
    fn front_size(&self) -> Option<usize> {
        None
    }

    /// If `obj` is Pareto-optimal, its index in `0..front_size()`.
    fn front_slot(&self, _x: &Genotype, _obj: &[f64; 2]) -> Option<usize> {
        None
    }

    fn is_global_opt(&self, _x: &Genotype, _obj: &[f64; 2]) -> Option<bool> {
        None
    }

    /// Value counted towards approximation milestones (feasible solutions
    /// only).
    fn approx_value(&self, _x: &Genotype, _obj: &[f64; 2]) -> Option<f64> {
        None
    }
}

/// `(|x|_1, n - |x|_1)`, both maximised. Every point is Pareto-optimal.
#[derive(Clone, Copy, Debug)]
pub struct OneMinMax {
    n: usize,
}

impl OneMinMax {
    pub fn new(n: usize) -> Self {
        OneMinMax { n }
    }
}

impl BiObjective for OneMinMax {
    fn name(&self) -> String {
        "oneminmax".into()
    }

    fn dim(&self) -> usize {
        self.n
    }

    fn senses(&self) -> [Sense; 2] {
        [Sense::Maximise, Sense::Maximise]
    }

    fn objectives(&self, x: &Genotype) -> [f64; 2] {
        [x.count_ones() as f64, x.count_zeros() as f64]
    }

    fn front_size(&self) -> Option<usize> {
        Some(self.n + 1)
    }

    fn front_slot(&self, x: &Genotype, _obj: &[f64; 2]) -> Option<usize> {
        Some(x.count_ones())
    }
}

/// `g(x) = (z(x), |x|_0)` with `z(x) = f(x)` if `|x|_1 <= r`, else `-1`;
/// both maximised.
#[derive(Clone, Debug)]
pub struct SubmodularBiObjective {
    inst: CoverageInstance,
}

impl SubmodularBiObjective {
    pub fn new(inst: CoverageInstance) -> Self {
        SubmodularBiObjective { inst }
    }
}

impl BiObjective for SubmodularBiObjective {
    fn name(&self) -> String {
        "coverage-bi".into()
    }

    fn dim(&self) -> usize {
        self.inst.ground_set_size()
    }

    fn senses(&self) -> [Sense; 2] {
        [Sense::Maximise, Sense::Maximise]
    }

    fn objectives(&self, x: &Genotype) -> [f64; 2] {
        let z = if x.count_ones() <= self.inst.r() {
            self.inst.value_of(x.iter_ones()) as f64
        } else {
            -1.0
        };
        [z, x.count_zeros() as f64]
    }

    fn approx_value(&self, _x: &Genotype, obj: &[f64; 2]) -> Option<f64> {
        (obj[0] >= 0.0).then_some(obj[0])
    }
}

/// `(cc(x), w(x))`, both minimised.
#[derive(Clone, Debug)]
pub struct MstBiObjective {
    mst: MstProblem,
}

impl MstBiObjective {
    pub fn new(graph: Arc<WeightedGraph>) -> Self {
        MstBiObjective {
            mst: MstProblem::new(graph),
        }
    }
}

impl BiObjective for MstBiObjective {
    fn name(&self) -> String {
        "mst-bi".into()
    }

    fn dim(&self) -> usize {
        self.mst.graph().edge_count()
    }

    fn senses(&self) -> [Sense; 2] {
        [Sense::Minimise, Sense::Minimise]
    }

    fn objectives(&self, x: &Genotype) -> [f64; 2] {
        let cc = cc_count(self.mst.graph(), x).expect("length checked by engine");
        [cc as f64, self.mst.weight(x) as f64]
    }

    fn front_size(&self) -> Option<usize> {
        Some(self.mst.graph().node_count())
    }

    fn front_slot(&self, _x: &Genotype, obj: &[f64; 2]) -> Option<usize> {
        let cc = obj[0] as usize;
        let best = self.mst.optimal_forest_weight(cc)?;
        (obj[1] == best as f64).then(|| cc - 1)
    }

    fn is_global_opt(&self, _x: &Genotype, obj: &[f64; 2]) -> Option<bool> {
        Some(obj[0] == 1.0 && obj[1] == self.mst.mst_weight() as f64)
    }
}

/// Lifts a single-objective problem to `(f(x), 0)`.
#[derive(Clone, Debug)]
pub struct SingleObjective<P>(pub P);

impl<P: Problem> BiObjective for SingleObjective<P> {
    fn name(&self) -> String {
        format!("{}-single", self.0.name())
    }

    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn senses(&self) -> [Sense; 2] {
        [Sense::Maximise, Sense::Maximise]
    }

    fn objectives(&self, x: &Genotype) -> [f64; 2] {
        [self.0.evaluate(x), 0.0]
    }

    fn is_global_opt(&self, x: &Genotype, obj: &[f64; 2]) -> Option<bool> {
        self.0.is_global_opt(x, obj[0])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn submodular_infeasible_is_minus_one() {
        let inst = CoverageInstance::new(4, vec![vec![0], vec![1], vec![2]], 1).unwrap();
        let g = SubmodularBiObjective::new(inst);
        assert_eq!(g.objectives(&"100".parse().unwrap()), [1.0, 2.0]);
        assert_eq!(g.objectives(&"110".parse().unwrap()), [-1.0, 1.0]);
        assert_eq!(
            g.approx_value(&Genotype::zeros(3).unwrap(), &[0.0, 3.0]),
            Some(0.0)
        );
        assert_eq!(
            g.approx_value(&Genotype::ones(3).unwrap(), &[-1.0, 0.0]),
            None
        );
    }

    #[test]
    fn mst_front_slots() {
        let g = Arc::new(WeightedGraph::parse("3 3\n0 1 1\n1 2 2\n0 2 3\n").unwrap());
        let b = MstBiObjective::new(g);
        let x: Genotype = "110".parse().unwrap();
        let o = b.objectives(&x);
        assert_eq!(o, [1.0, 3.0]);
        assert_eq!(b.front_slot(&x, &o), Some(0));
        assert_eq!(b.is_global_opt(&x, &o), Some(true));
        let y: Genotype = "001".parse().unwrap();
        let oy = b.objectives(&y);
        assert_eq!(b.front_slot(&y, &oy), None);
        let z = Genotype::zeros(3).unwrap();
        assert_eq!(b.front_slot(&z, &b.objectives(&z)), Some(2));
    }
}
