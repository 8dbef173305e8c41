//! Global SEMO: a population of mutually non-dominated solutions.
//!
//! Each step mutates a uniformly chosen member. The offspring joins unless
//! some member strictly dominates it, and then every member it weakly
//! dominates is removed. The offspring takes the slot of the first removed
//! member, so population order mirrors QD's order of first coverage.

use super::qd::RunTrace;
use super::stop::{ApproxTarget, StopCondition, Trigger};
use crate::bitcore::{Genotype, RandomSource, StandardBitMutation};
use crate::error::{Error, Result};
use crate::problems::{BiObjective, Sense};

#[derive(Clone, Debug, PartialEq)]
pub struct Member {
    pub genotype: Genotype,
    pub objectives: [f64; 2],
    /// Objectives oriented so that larger is better in both.
    key: [f64; 2],
}

/// `a` is at least as good as `b` in both (maximised) objectives.
fn weakly_dominates(a: &[f64; 2], b: &[f64; 2]) -> bool {
    a[0] >= b[0] && a[1] >= b[1]
}

fn strictly_dominates(a: &[f64; 2], b: &[f64; 2]) -> bool {
    weakly_dominates(a, b) && (a[0] > b[0] || a[1] > b[1])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GsemoOutcome {
    /// Joined the population without removing anyone.
    Added,
    /// Joined and removed this many weakly dominated members.
    Replaced(usize),
    Rejected,
}

pub struct GsemoEngine<'a, B: BiObjective + ?Sized> {
    problem: &'a B,
    senses: [Sense; 2],
    mutation: StandardBitMutation,
    population: Vec<Member>,
    evals: u64,
    rng: RandomSource,
    approx: Option<ApproxTarget>,
    front_hit: Vec<bool>,
    front_count: usize,
    t_cover: Option<u64>,
    t_opt: Option<u64>,
    t_approx: Option<u64>,
    best_approx: Option<f64>,
    flips: Vec<usize>,
}

impl<'a, B: BiObjective + ?Sized> GsemoEngine<'a, B> {
    pub fn init(
        problem: &'a B,
        p_m: f64,
        approx: Option<ApproxTarget>,
        mut rng: RandomSource,
    ) -> Result<Self> {
        let x = Genotype::new_uniform(problem.dim(), &mut rng)?;
        Self::with_initial(problem, p_m, approx, rng, x)
    }

    pub fn with_initial(
        problem: &'a B,
        p_m: f64,
        approx: Option<ApproxTarget>,
        rng: RandomSource,
        initial: Genotype,
    ) -> Result<Self> {
        if initial.len() != problem.dim() {
            return Err(Error::LengthMismatch {
                expected: problem.dim(),
                actual: initial.len(),
            });
        }
        let mut engine = GsemoEngine {
            problem,
            senses: problem.senses(),
            mutation: StandardBitMutation::new(p_m)?,
            population: Vec::new(),
            evals: 0,
            rng,
            approx,
            front_hit: vec![false; problem.front_size().unwrap_or(0)],
            front_count: 0,
            t_cover: None,
            t_opt: None,
            t_approx: None,
            best_approx: None,
            flips: Vec::new(),
        };
        engine.insert(initial);
        Ok(engine)
    }

    fn orient(&self, obj: &[f64; 2]) -> [f64; 2] {
        let o = |s: Sense, v: f64| if s == Sense::Maximise { v } else { -v };
        [o(self.senses[0], obj[0]), o(self.senses[1], obj[1])]
    }

    fn insert(&mut self, y: Genotype) -> GsemoOutcome {
        let objectives = self.problem.objectives(&y);
        self.evals += 1;
        let key = self.orient(&objectives);
        if self.t_opt.is_none() && self.problem.is_global_opt(&y, &objectives) == Some(true) {
            self.t_opt = Some(self.evals);
        }
        if self
            .population
            .iter()
            .any(|m| strictly_dominates(&m.key, &key))
        {
            return GsemoOutcome::Rejected;
        }
        let front_slot = self.problem.front_slot(&y, &objectives);
        let approx_value = self.problem.approx_value(&y, &objectives);
        let member = Member {
            genotype: y,
            objectives,
            key,
        };
        let first = self
            .population
            .iter()
            .position(|m| weakly_dominates(&key, &m.key));
        let outcome = match first {
            None => {
                self.population.push(member);
                GsemoOutcome::Added
            }
            Some(i) => {
                self.population[i] = member;
                let before = self.population.len();
                let mut idx = 0;
                self.population.retain(|m| {
                    let keep = idx == i || !weakly_dominates(&key, &m.key);
                    idx += 1;
                    keep
                });
                GsemoOutcome::Replaced(1 + before - self.population.len())
            }
        };
        if let Some(s) = front_slot {
            if s < self.front_hit.len() && !self.front_hit[s] {
                self.front_hit[s] = true;
                self.front_count += 1;
                if self.front_count == self.front_hit.len() {
                    self.t_cover = Some(self.evals);
                }
            }
        }
        if let Some(v) = approx_value {
            let best = self.best_approx.map_or(v, |b| b.max(v));
            self.best_approx = Some(best);
            if let Some(a) = self.approx {
                if self.t_approx.is_none()
                    && best >= a.threshold() - 1e-9 * a.threshold().abs().max(1.0)
                {
                    self.t_approx = Some(self.evals);
                }
            }
        }
        outcome
    }

    pub fn step(&mut self) -> GsemoOutcome {
        use rand::Rng;
        let slot = self.rng.random_range(0..self.population.len());
        let mut flips = std::mem::take(&mut self.flips);
        self.mutation
            .flip_positions_into(self.problem.dim(), &mut self.rng, &mut flips);
        let outcome = self.apply(slot, &flips);
        self.flips = flips;
        outcome
    }

    /// An iteration with externally chosen parent slot and flip positions.
    pub fn apply(&mut self, slot: usize, flips: &[usize]) -> GsemoOutcome {
        let y = self.population[slot].genotype.with_flips(flips);
        self.insert(y)
    }

    pub fn population(&self) -> &[Member] {
        &self.population
    }

    pub fn evals(&self) -> u64 {
        self.evals
    }

    /// Number of distinct Pareto-front vectors currently represented.
    pub fn front_covered(&self) -> usize {
        self.front_count
    }

    fn fired(&self, t: Trigger) -> bool {
        match t {
            Trigger::CoveredAll => self.t_cover.is_some(),
            Trigger::GlobalOptFound => self.t_opt.is_some(),
            Trigger::ApproxReached => self.t_approx.is_some(),
            Trigger::AllCellsOptimal => false,
            Trigger::AllTracked => {
                (self.front_hit.is_empty() || self.t_cover.is_some())
                    && (self.approx.is_none() || self.t_approx.is_some())
            }
        }
    }

    /// Steps until a trigger fires or the budget is spent. Returns whether
    /// the budget ran out first.
    pub fn advance(&mut self, stop: &StopCondition) -> Result<bool> {
        stop.validate()?;
        let done = |e: &Self| stop.any_of.iter().any(|&t| e.fired(t));
        while !done(self) && self.evals < stop.budget {
            self.step();
        }
        Ok(!done(self))
    }

    pub fn trace(&self, truncated: bool) -> RunTrace {
        RunTrace {
            evals: self.evals,
            t_cover: self.t_cover,
            t_opt: self.t_opt,
            t_copt: None,
            t_approx: self.t_approx,
            best_feasible: self.best_approx,
            final_cell_fitness: Vec::new(),
            first_cover: Vec::new(),
            truncated,
        }
    }

    pub fn run(mut self, stop: &StopCondition) -> Result<RunTrace> {
        let truncated = self.advance(stop)?;
        Ok(self.trace(truncated))
    }
}

/// Runs GSEMO with mutation rate `1/n`. `t_cover` is the Pareto-front cover
/// time when the problem declares its front.
pub fn gsemo_run<B: BiObjective + ?Sized>(
    problem: &B,
    stop: &StopCondition,
    approx: Option<ApproxTarget>,
    rng: RandomSource,
) -> Result<RunTrace> {
    stop.validate()?;
    let p_m = 1.0 / problem.dim() as f64;
    GsemoEngine::init(problem, p_m, approx, rng)?.run(stop)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::{OneMinMax, SingleObjective, Unitation};

    fn assert_antichain(pop: &[Member]) {
        for (i, a) in pop.iter().enumerate() {
            for (j, b) in pop.iter().enumerate() {
                if i != j {
                    assert!(!strictly_dominates(&a.key, &b.key));
                    assert_ne!(a.key, b.key);
                }
            }
        }
    }

    #[test]
    fn oneminmax_population_is_antichain_and_covers_front() {
        let p = OneMinMax::new(12);
        let mut e = GsemoEngine::init(&p, 1.0 / 12.0, None, RandomSource::new(1, 0)).unwrap();
        for _ in 0..20_000 {
            e.step();
            assert_antichain(e.population());
            let mut counts: Vec<usize> = e
                .population()
                .iter()
                .map(|m| m.genotype.count_ones())
                .collect();
            counts.sort_unstable();
            counts.dedup();
            assert_eq!(counts.len(), e.population().len());
            assert_eq!(e.front_covered(), e.population().len());
        }
        assert_eq!(e.population().len(), 13);
    }

    #[test]
    fn single_objective_keeps_one_member() {
        let p = SingleObjective(Unitation::onemax(10).unwrap());
        let mut e = GsemoEngine::init(&p, 0.1, None, RandomSource::new(2, 0)).unwrap();
        for _ in 0..2000 {
            e.step();
            assert_eq!(e.population().len(), 1);
        }
    }

    #[test]
    fn run_records_front_cover() {
        let p = OneMinMax::new(8);
        let stop = StopCondition::budget(1_000_000).on(Trigger::CoveredAll);
        let t = gsemo_run(&p, &stop, None, RandomSource::new(3, 0)).unwrap();
        assert!(t.t_cover.is_some());
        assert_eq!(t.t_cover, Some(t.evals));
    }

    #[test]
    fn dominance_relations() {
        assert!(strictly_dominates(&[2.0, 1.0], &[1.0, 1.0]));
        assert!(!strictly_dominates(&[1.0, 1.0], &[1.0, 1.0]));
        assert!(weakly_dominates(&[1.0, 1.0], &[1.0, 1.0]));
        assert!(!weakly_dominates(&[2.0, 0.0], &[1.0, 1.0]));
    }
}
