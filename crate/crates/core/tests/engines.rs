//! End-to-end engine behaviour against naive reference models.

use std::sync::Arc;

use qdlab::bitcore::{Genotype, RandomSource, StandardBitMutation};
use qdlab::engines::{
    coupled_trajectories, gsemo_run, qd_run, ApproxTarget, GsemoEngine, MilestoneTargets, QdEngine,
    RunTrace, StopCondition, Trigger,
};
use qdlab::features::{FeatureSpace, OfferOutcome};
use qdlab::oracles::{greedy_submodular, kruskal, max_coverage_exhaustive};
use qdlab::problems::{
    CoverageInstance, CoverageProblem, MstBiObjective, MstProblem, OneMinMax, Problem,
    SubmodularBiObjective, Unitation, UnitationKind, WeightedGraph,
};

/// Straightforward MAP-Elites archive: cells plus the order they were
/// first filled.
struct Model {
    cells: Vec<Option<(Genotype, f64)>>,
    order: Vec<usize>,
}

impl Model {
    fn offer(&mut self, cell: usize, y: Genotype, f: f64) -> OfferOutcome {
        match &self.cells[cell] {
            None => {
                self.cells[cell] = Some((y, f));
                self.order.push(cell);
                OfferOutcome::NewCell
            }
            Some((_, g)) if f >= *g => {
                self.cells[cell] = Some((y, f));
                OfferOutcome::Replaced
            }
            Some(_) => OfferOutcome::Rejected,
        }
    }
}

fn model_check<P: Problem>(problem: &P, space: &FeatureSpace, steps: usize, seed: u64) {
    let n = problem.dim();
    let mut driver = RandomSource::new(seed, 7);
    let x0 = Genotype::new_uniform(n, &mut driver).unwrap();
    let mut engine = QdEngine::with_initial(
        problem,
        space,
        1.0 / n as f64,
        MilestoneTargets::default(),
        RandomSource::new(seed, 8),
        x0.clone(),
    )
    .unwrap();
    let mut model = Model {
        cells: vec![None; space.cell_count()],
        order: Vec::new(),
    };
    model.offer(space.cell_of(&x0), x0.clone(), problem.evaluate(&x0));
    let mutation = StandardBitMutation::new(2.0 / n as f64).unwrap();
    for step in 0..steps {
        let slot = driver.index(model.order.len());
        let flips = mutation.flip_positions(n, &mut driver);
        let parent = model.cells[model.order[slot]].as_ref().unwrap().0.clone();
        let y = parent.with_flips(&flips);
        let f = problem.evaluate(&y);
        let want = model.offer(space.cell_of(&y), y, f);
        assert_eq!(engine.apply(slot, &flips), want, "step {step}");
        assert_eq!(engine.archive().covered_cells(), model.order.as_slice());
        assert_eq!(engine.evals(), step as u64 + 2);
    }
    for (c, slot) in model.cells.iter().enumerate() {
        let got = engine.archive().get(c);
        match slot {
            None => assert!(got.is_none()),
            Some((g, f)) => {
                let e = got.unwrap();
                assert_eq!(&e.genotype, g);
                assert_eq!(e.fitness, *f);
                assert_eq!(space.cell_of(&e.genotype), c);
                assert_eq!(problem.evaluate(&e.genotype), e.fitness);
            }
        }
    }
}

#[test]
fn archive_matches_reference_model() {
    let n = 24;
    for (i, kind) in [
        UnitationKind::OneMax,
        UnitationKind::Jump { gap: 3 },
        UnitationKind::Trap,
        UnitationKind::Constant,
    ]
    .into_iter()
    .enumerate()
    {
        let f = Unitation::new(kind, n).unwrap();
        for k in [1, 5] {
            let space = FeatureSpace::number_of_ones(n, k).unwrap();
            model_check(&f, &space, 20_000, i as u64);
        }
    }
    let mut rng = RandomSource::new(31, 0);
    let g = Arc::new(WeightedGraph::random_connected(10, 20, &mut rng).unwrap());
    let space = FeatureSpace::connected_components(g.clone()).unwrap();
    model_check(&MstProblem::new(g), &space, 20_000, 5);
    let inst = CoverageInstance::random(16, 40, 4, 5, 10, &mut rng).unwrap();
    let space = FeatureSpace::number_of_ones(16, 1).unwrap();
    model_check(&CoverageProblem::new(inst), &space, 20_000, 6);
}

#[test]
fn onemax_cover_fills_cell_i_with_i_ones() {
    for seed in 0..20 {
        let n = 30;
        let f = Unitation::onemax(n).unwrap();
        let space = FeatureSpace::number_of_ones(n, 1).unwrap();
        let targets = MilestoneTargets::resolve(&f, &space);
        let stop = StopCondition::budget(10_000_000).on(Trigger::AllTracked);
        let trace = qd_run(
            &f,
            &space,
            1.0 / n as f64,
            &stop,
            targets,
            RandomSource::new(seed, 0),
        )
        .unwrap();
        assert!(!trace.truncated);
        assert_eq!(trace.t_cover, trace.t_copt);
        assert!(trace.t_opt <= trace.t_cover);
        for (i, hit) in trace.first_cover.iter().enumerate() {
            assert_eq!(hit.unwrap().fitness, i as f64);
        }
        for (i, v) in trace.final_cell_fitness.iter().enumerate() {
            assert_eq!(*v, Some(i as f64));
        }
        assert_eq!(
            trace.first_cover.iter().map(|h| h.unwrap().evals).max(),
            trace.t_cover
        );
    }
}

#[test]
fn single_cell_space_behaves_like_elitist_hill_climber() {
    let n = 40;
    let f = Unitation::onemax(n).unwrap();
    let space = FeatureSpace::number_of_ones(n, n + 1).unwrap();
    assert_eq!(space.cell_count(), 1);
    let mut e = QdEngine::init(
        &f,
        &space,
        1.0 / n as f64,
        MilestoneTargets::resolve(&f, &space),
        RandomSource::new(32, 0),
    )
    .unwrap();
    let mut best = e.archive().get(0).unwrap().fitness;
    while !e.fired(Trigger::GlobalOptFound) {
        e.step();
        let now = e.archive().get(0).unwrap().fitness;
        assert!(now >= best);
        best = now;
        assert_eq!(e.archive().covered(), 1);
        assert!(e.evals() < 1_000_000);
    }
    let trace = e.finish(false);
    assert_eq!(trace.t_cover, Some(1));
    assert_eq!(trace.final_cell_fitness, vec![Some(n as f64)]);
}

#[test]
fn gsemo_population_is_an_antichain() {
    let n = 16;
    let p = OneMinMax::new(n);
    let mut g = GsemoEngine::init(&p, 1.0 / n as f64, None, RandomSource::new(33, 0)).unwrap();
    for _ in 0..20_000 {
        g.step();
        let pop = g.population();
        for a in pop {
            for b in pop {
                if !std::ptr::eq(a, b) {
                    assert_ne!(a.objectives, b.objectives);
                }
            }
        }
    }
    assert_eq!(g.front_covered(), n + 1);
    assert_eq!(g.population().len(), n + 1);
}

#[test]
fn coupled_qd_and_gsemo_stay_identical() {
    for seed in 0..10 {
        let r = coupled_trajectories(20, 1000, seed).unwrap();
        assert!(r.identical(), "{r:?}");
    }
}

#[test]
fn qd_finds_minimum_spanning_tree() {
    let mut rng = RandomSource::new(34, 0);
    for _ in 0..5 {
        let g = Arc::new(WeightedGraph::random_connected(8, 16, &mut rng).unwrap());
        let want = kruskal(&g).unwrap().weight as f64;
        let p = MstProblem::new(g.clone());
        let space = FeatureSpace::connected_components(g).unwrap();
        let targets = MilestoneTargets::resolve(&p, &space);
        let stop = StopCondition::budget(50 * 64 * 16).on(Trigger::AllTracked);
        let trace = qd_run(
            &p,
            &space,
            1.0 / 16.0,
            &stop,
            targets,
            RandomSource::new(35, 0),
        )
        .unwrap();
        assert!(trace.t_opt.is_some());
        assert_eq!(trace.final_cell_fitness[0], Some(-want));
        assert_eq!(trace.final_cell_fitness[7], Some(0.0));
        assert!(milestones_in_order(&trace));

        let bi = MstBiObjective::new(Arc::clone(p.graph()));
        let stop = StopCondition::budget(50 * 64 * 16).on(Trigger::GlobalOptFound);
        let gs = gsemo_run(&bi, &stop, None, RandomSource::new(36, 0)).unwrap();
        assert!(gs.t_opt.is_some());
    }
}

fn milestones_in_order(t: &RunTrace) -> bool {
    match t.t_copt {
        None => true,
        Some(c) => t.t_cover.is_some_and(|x| x <= c) && t.t_opt.is_some_and(|x| x <= c),
    }
}

#[test]
fn coverage_runs_reach_the_greedy_guarantee() {
    let mut rng = RandomSource::new(37, 0);
    let alpha = 1.0 - (-1.0f64).exp();
    for r in [2, 4] {
        let inst = CoverageInstance::random(12, 40, r, 5, 10, &mut rng).unwrap();
        let opt = max_coverage_exhaustive(&inst).unwrap().value as f64;
        assert!(greedy_submodular(&inst).value as f64 >= alpha * opt);
        let n = inst.ground_set_size() as f64;
        let budget = (20.0 * n * n * (n.ln() + r as f64)) as u64;
        let p = CoverageProblem::new(inst.clone());
        let space = FeatureSpace::number_of_ones(12, 1).unwrap();
        let targets = MilestoneTargets::default().with_approx(alpha, opt);
        let stop = StopCondition::budget(budget).on(Trigger::ApproxReached);
        let trace = qd_run(
            &p,
            &space,
            1.0 / 12.0,
            &stop,
            targets,
            RandomSource::new(38, 0),
        )
        .unwrap();
        assert!(trace.t_approx.is_some());
        assert!(trace.best_feasible.unwrap() >= alpha * opt - 1e-9);

        let bi = SubmodularBiObjective::new(inst);
        let gs = gsemo_run(
            &bi,
            &StopCondition::budget(budget).on(Trigger::ApproxReached),
            Some(ApproxTarget {
                alpha,
                reference: opt,
            }),
            RandomSource::new(39, 0),
        )
        .unwrap();
        assert!(gs.t_approx.is_some());
    }
}
