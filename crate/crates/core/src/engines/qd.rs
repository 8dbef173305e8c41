//! The MAP-Elites style QD loop.
//!
//! One uniformly random genotype seeds the archive. Each step picks a
//! covered cell uniformly at random, mutates its elite with standard bit
//! mutation, and offers the offspring to the offspring's own cell: an empty
//! cell always takes it, an occupied one takes it iff its fitness is at
//! least the incumbent's.

use serde::{Deserialize, Serialize};

use super::stop::{MilestoneTargets, StopCondition, Trigger};
use crate::bitcore::{Genotype, RandomSource, StandardBitMutation};
use crate::error::{Error, Result};
use crate::features::{Archive, FeatureSpace, OfferOutcome};
use crate::problems::Problem;

/// Evaluation count and stored fitness when a cell was first covered.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellHit {
    pub evals: u64,
    pub fitness: f64,
}

/// What a finished run observed. Milestones are evaluation counts,
/// including the initial evaluation, and `None` if not reached.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunTrace {
    pub evals: u64,
    pub t_cover: Option<u64>,
    pub t_opt: Option<u64>,
    pub t_copt: Option<u64>,
    pub t_approx: Option<u64>,
    /// Best stored fitness among solutions satisfying the problem's
    /// cardinality limit.
    pub best_feasible: Option<f64>,
    /// Best fitness stored in each cell at the end of the run.
    pub final_cell_fitness: Vec<Option<f64>>,
    pub first_cover: Vec<Option<CellHit>>,
    /// The budget ran out before any stop trigger fired.
    pub truncated: bool,
}

/// Incremental detection of coverage, optimisation, optimal coverage and
/// approximation milestones.
#[derive(Clone, Debug)]
struct Tracker {
    targets: MilestoneTargets,
    tracks_opt: bool,
    card_limit: Option<usize>,
    optimal: Vec<bool>,
    optimal_count: usize,
    best_feasible: Option<f64>,
    t_cover: Option<u64>,
    t_opt: Option<u64>,
    t_copt: Option<u64>,
    t_approx: Option<u64>,
    first_cover: Vec<Option<CellHit>>,
}

fn reaches(value: f64, target: f64) -> bool {
    value >= target - 1e-9 * target.abs().max(1.0)
}

impl Tracker {
    fn new(
        targets: MilestoneTargets,
        cells: usize,
        tracks_opt: bool,
        card_limit: Option<usize>,
    ) -> Self {
        Tracker {
            targets,
            tracks_opt,
            card_limit,
            optimal: vec![false; cells],
            optimal_count: 0,
            best_feasible: None,
            t_cover: None,
            t_opt: None,
            t_copt: None,
            t_approx: None,
            first_cover: vec![None; cells],
        }
    }

    /// Records the global-optimum milestone; called before `y` is moved
    /// into the archive.
    fn observe_sample<P: Problem + ?Sized>(
        &mut self,
        problem: &P,
        evals: u64,
        y: &Genotype,
        fitness: f64,
    ) {
        if self.t_opt.is_none() && problem.is_global_opt(y, fitness) == Some(true) {
            self.t_opt = Some(evals);
        }
    }

    fn observe_offer(
        &mut self,
        archive: &Archive,
        evals: u64,
        cell: usize,
        ones: usize,
        fitness: f64,
        outcome: OfferOutcome,
    ) {
        if !outcome.accepted() {
            return;
        }
        if outcome == OfferOutcome::NewCell {
            self.first_cover[cell] = Some(CellHit { evals, fitness });
            if self.t_cover.is_none() && archive.is_fully_covered() {
                self.t_cover = Some(evals);
            }
        }
        if let Some(opt) = &self.targets.cell_optima {
            if !self.optimal[cell] && reaches(fitness, opt[cell]) {
                self.optimal[cell] = true;
                self.optimal_count += 1;
                if self.optimal_count == self.optimal.len() {
                    self.t_copt = Some(evals);
                }
            }
        }
        if self.card_limit.is_none_or(|r| ones <= r) {
            let best = self.best_feasible.map_or(fitness, |b| b.max(fitness));
            self.best_feasible = Some(best);
            if let Some(a) = self.targets.approx {
                if self.t_approx.is_none() && reaches(best, a.threshold()) {
                    self.t_approx = Some(evals);
                }
            }
        }
    }

    fn fired(&self, trigger: Trigger) -> bool {
        match trigger {
            Trigger::CoveredAll => self.t_cover.is_some(),
            Trigger::GlobalOptFound => self.t_opt.is_some(),
            Trigger::AllCellsOptimal => self.t_copt.is_some(),
            Trigger::ApproxReached => self.t_approx.is_some(),
            Trigger::AllTracked => {
                self.t_cover.is_some()
                    && (!self.tracks_opt || self.t_opt.is_some())
                    && (self.targets.cell_optima.is_none() || self.t_copt.is_some())
                    && (self.targets.approx.is_none() || self.t_approx.is_some())
            }
        }
    }
}

/// A QD run in progress.
pub struct QdEngine<'a, P: Problem + ?Sized> {
    problem: &'a P,
    space: &'a FeatureSpace,
    mutation: StandardBitMutation,
    archive: Archive,
    evals: u64,
    rng: RandomSource,
    tracker: Tracker,
    flips: Vec<usize>,
}

impl<'a, P: Problem + ?Sized> QdEngine<'a, P> {
    /// Samples a uniform initial genotype, evaluates and stores it.
    pub fn init(
        problem: &'a P,
        space: &'a FeatureSpace,
        p_m: f64,
        targets: MilestoneTargets,
        mut rng: RandomSource,
    ) -> Result<Self> {
        let x = Genotype::new_uniform(problem.dim(), &mut rng)?;
        Self::with_initial(problem, space, p_m, targets, rng, x)
    }

    /// Starts from a given genotype instead of a random one.
    pub fn with_initial(
        problem: &'a P,
        space: &'a FeatureSpace,
        p_m: f64,
        targets: MilestoneTargets,
        rng: RandomSource,
        initial: Genotype,
    ) -> Result<Self> {
        if space.dim() != problem.dim() || initial.len() != problem.dim() {
            return Err(Error::LengthMismatch {
                expected: problem.dim(),
                actual: if space.dim() != problem.dim() {
                    space.dim()
                } else {
                    initial.len()
                },
            });
        }
        if let Some(opt) = &targets.cell_optima {
            if opt.len() != space.cell_count() {
                return Err(Error::Config(format!(
                    "{} cell optima supplied for {} cells",
                    opt.len(),
                    space.cell_count()
                )));
            }
        }
        let mutation = StandardBitMutation::new(p_m)?;
        let tracks_opt = problem.is_global_opt(&initial, f64::NEG_INFINITY).is_some();
        let tracker = Tracker::new(
            targets,
            space.cell_count(),
            tracks_opt,
            problem.cardinality_limit(),
        );
        let mut engine = QdEngine {
            problem,
            space,
            mutation,
            archive: Archive::for_space(space),
            evals: 0,
            rng,
            tracker,
            flips: Vec::new(),
        };
        engine.insert(initial);
        Ok(engine)
    }

    fn insert(&mut self, y: Genotype) -> OfferOutcome {
        let fitness = self.problem.evaluate(&y);
        self.evals += 1;
        let cell = self.space.cell_of(&y);
        let ones = y.count_ones();
        self.tracker
            .observe_sample(self.problem, self.evals, &y, fitness);
        let outcome = self.archive.offer_at(cell, y, fitness);
        self.tracker
            .observe_offer(&self.archive, self.evals, cell, ones, fitness, outcome);
        outcome
    }

    /// One iteration: uniform parent, mutation, evaluation, offer.
    pub fn step(&mut self) -> OfferOutcome {
        let slot = self.archive.sample_slot(&mut self.rng);
        let mut flips = std::mem::take(&mut self.flips);
        self.mutation
            .flip_positions_into(self.space.dim(), &mut self.rng, &mut flips);
        let outcome = self.apply(slot, &flips);
        self.flips = flips;
        outcome
    }

    /// An iteration with externally chosen parent slot (index into
    /// [`Archive::covered_cells`]) and flip positions.
    pub fn apply(&mut self, slot: usize, flips: &[usize]) -> OfferOutcome {
        let y = self.archive.parent_at(slot).genotype.with_flips(flips);
        self.insert(y)
    }

    pub fn archive(&self) -> &Archive {
        &self.archive
    }

    pub fn evals(&self) -> u64 {
        self.evals
    }

    pub fn fired(&self, trigger: Trigger) -> bool {
        self.tracker.fired(trigger)
    }

    /// Steps until a trigger fires or the budget is exhausted.
    pub fn run(mut self, stop: &StopCondition) -> Result<RunTrace> {
        stop.validate()?;
        let done = |e: &Self| stop.any_of.iter().any(|&t| e.tracker.fired(t));
        while !done(&self) && self.evals < stop.budget {
            self.step();
        }
        let truncated = !done(&self);
        Ok(self.finish(truncated))
    }

    pub fn finish(self, truncated: bool) -> RunTrace {
        let final_cell_fitness = (0..self.archive.cell_count())
            .map(|c| self.archive.get(c).map(|e| e.fitness))
            .collect();
        RunTrace {
            evals: self.evals,
            t_cover: self.tracker.t_cover,
            t_opt: self.tracker.t_opt,
            t_copt: self.tracker.t_copt,
            t_approx: self.tracker.t_approx,
            best_feasible: self.tracker.best_feasible,
            final_cell_fitness,
            first_cover: self.tracker.first_cover,
            truncated,
        }
    }

    /// Consumes the engine, returning the archive alongside the trace.
    pub fn into_parts(self, truncated: bool) -> (Archive, RunTrace) {
        let archive = self.archive.clone();
        (archive, self.finish(truncated))
    }
}

/// Initialises and runs QD to completion.
pub fn qd_run<P: Problem + ?Sized>(
    problem: &P,
    space: &FeatureSpace,
    p_m: f64,
    stop: &StopCondition,
    targets: MilestoneTargets,
    rng: RandomSource,
) -> Result<RunTrace> {
    stop.validate()?;
    QdEngine::init(problem, space, p_m, targets, rng)?.run(stop)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::{Unitation, UnitationKind};

    fn onemax_setup(n: usize, k: usize) -> (Unitation, FeatureSpace) {
        (
            Unitation::onemax(n).unwrap(),
            FeatureSpace::number_of_ones(n, k).unwrap(),
        )
    }

    #[test]
    fn init_covers_one_cell() {
        let (p, sp) = onemax_setup(10, 1);
        let e = QdEngine::init(
            &p,
            &sp,
            0.1,
            MilestoneTargets::default(),
            RandomSource::new(1, 0),
        )
        .unwrap();
        assert_eq!(e.archive().covered(), 1);
        assert_eq!(e.evals(), 1);
    }

    #[test]
    fn single_cell_covers_at_first_eval() {
        let (p, sp) = onemax_setup(7, 8);
        let stop = StopCondition::budget(1000).on(Trigger::CoveredAll);
        let t = qd_run(
            &p,
            &sp,
            1.0 / 7.0,
            &stop,
            MilestoneTargets::default(),
            RandomSource::new(3, 0),
        )
        .unwrap();
        assert_eq!(t.t_cover, Some(1));
        assert_eq!(t.evals, 1);
        assert!(!t.truncated);
    }

    #[test]
    fn same_seed_same_initial_archive() {
        let (p, sp) = onemax_setup(20, 1);
        let a = QdEngine::init(
            &p,
            &sp,
            0.05,
            MilestoneTargets::default(),
            RandomSource::new(9, 2),
        )
        .unwrap();
        let b = QdEngine::init(
            &p,
            &sp,
            0.05,
            MilestoneTargets::default(),
            RandomSource::new(9, 2),
        )
        .unwrap();
        assert_eq!(a.archive().covered_cells(), b.archive().covered_cells());
        let c = a.archive().covered_cells()[0];
        assert_eq!(a.archive().get(c), b.archive().get(c));
    }

    #[test]
    fn step_counts_one_evaluation() {
        let (p, sp) = onemax_setup(12, 1);
        let mut e = QdEngine::init(
            &p,
            &sp,
            1.0 / 12.0,
            MilestoneTargets::default(),
            RandomSource::new(4, 0),
        )
        .unwrap();
        for i in 0..100 {
            e.step();
            assert_eq!(e.evals(), 2 + i);
        }
    }

    #[test]
    fn offspring_in_empty_cell_is_stored_and_ties_replace() {
        let (p, sp) = onemax_setup(4, 1);
        let x: Genotype = "1100".parse().unwrap();
        let mut e = QdEngine::with_initial(
            &p,
            &sp,
            0.25,
            MilestoneTargets::default(),
            RandomSource::new(0, 0),
            x,
        )
        .unwrap();
        assert_eq!(e.apply(0, &[3]), OfferOutcome::NewCell);
        // 1100 -> 0110: same cell, same fitness
        assert_eq!(e.apply(0, &[0, 2]), OfferOutcome::Replaced);
        assert_eq!(e.archive().get(2).unwrap().genotype.to_string(), "0110");
    }

    #[test]
    fn constant_function_gets_covered() {
        let p = Unitation::new(UnitationKind::Constant, 7).unwrap();
        let sp = FeatureSpace::number_of_ones(7, 1).unwrap();
        let stop = StopCondition::budget(1_000_000).on(Trigger::CoveredAll);
        let t = qd_run(
            &p,
            &sp,
            1.0 / 7.0,
            &stop,
            MilestoneTargets::default(),
            RandomSource::new(5, 0),
        )
        .unwrap();
        assert!(t.t_cover.is_some());
        assert!(t.final_cell_fitness.iter().all(Option::is_some));
    }

    #[test]
    fn zero_budget_is_rejected() {
        let (p, sp) = onemax_setup(7, 1);
        let stop = StopCondition::budget(0);
        assert!(qd_run(
            &p,
            &sp,
            0.1,
            &stop,
            MilestoneTargets::default(),
            RandomSource::new(0, 0)
        )
        .is_err());
    }

    #[test]
    fn mismatched_space_is_rejected() {
        let p = Unitation::onemax(8).unwrap();
        let sp = FeatureSpace::number_of_ones(7, 1).unwrap();
        assert!(QdEngine::init(
            &p,
            &sp,
            0.1,
            MilestoneTargets::default(),
            RandomSource::new(0, 0)
        )
        .is_err());
    }
}
