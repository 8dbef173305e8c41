use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::sync::{mpsc, Arc};
use std::time::Instant;

use rayon::prelude::*;

use super::config::{Algorithm, GridPoint, ProblemSpec, SpaceSpec, SweepConfig};
use super::record::{CsvSink, RunRecord};
use crate::bitcore::{Genotype, RandomSource};
use crate::engines::{
    ApproxTarget, GsemoEngine, MilestoneTargets, QdEngine, RunTrace, StopCondition,
};
use crate::error::{Error, Result};
use crate::features::FeatureSpace;
use crate::oracles::{
    bound_value, greedy_submodular, max_coverage_exhaustive, BoundId, BoundParams, EXHAUSTIVE_LIMIT,
};
use crate::problems::{
    BiObjective, CoverageInstance, CoverageProblem, LinearMonotone, MstBiObjective, MstProblem,
    OneMinMax, Problem, SingleObjective, SubmodularBiObjective, Unitation, UnitationKind,
    WeightedGraph,
};

/// Stream offset for instance generation, far above any run stream.
const INSTANCE_STREAM: u64 = 1 << 62;

/// `1 - 1/e`.
pub const ONE_MINUS_INV_E: f64 = 1.0 - 1.0 / std::f64::consts::E;

#[derive(Clone, Debug)]
enum Built {
    Unitation(Unitation),
    Linear(LinearMonotone),
    Coverage(CoverageProblem),
    Mst(MstProblem),
}

/// Everything needed to run one grid point, built once and shared by its
/// replications.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub config_id: String,
    pub algorithm: Algorithm,
    /// Problem descriptor written to the `problem` column.
    pub descriptor: String,
    pub k_or_cc: String,
    pub n: usize,
    pub p_m: f64,
    pub bound_id: BoundId,
    pub bound_params: BoundParams,
    pub stop: StopCondition,
    pub master_seed: u64,
    pub timing: bool,
    built: Built,
    space: Option<FeatureSpace>,
    targets: MilestoneTargets,
}

impl Scenario {
    pub fn build(cfg: &SweepConfig, point: GridPoint) -> Result<Self> {
        let mut irng = RandomSource::new(cfg.master_seed, INSTANCE_STREAM + point.index as u64);
        let size = point.size;
        let need_size = || size.ok_or_else(|| Error::Config("grid value missing".into()));
        let (built, descriptor) = match &cfg.problem {
            ProblemSpec::OneMax => unitation(UnitationKind::OneMax, need_size()?)?,
            ProblemSpec::Jump { gap } => {
                unitation(UnitationKind::Jump { gap: *gap }, need_size()?)?
            }
            ProblemSpec::Cliff { depth } => {
                let n = need_size()?;
                let depth = depth.unwrap_or(n.div_ceil(3));
                unitation(UnitationKind::Cliff { depth }, n)?
            }
            ProblemSpec::Trap => unitation(UnitationKind::Trap, need_size()?)?,
            ProblemSpec::Constant => unitation(UnitationKind::Constant, need_size()?)?,
            ProblemSpec::Linear { .. } => {
                let p = LinearMonotone::random(need_size()?, &mut irng)?;
                (Built::Linear(p), format!("linear#{}", point.instance))
            }
            ProblemSpec::Coverage {
                r,
                universe,
                min_set,
                max_set,
                path,
                ..
            } => {
                let inst = match path {
                    Some(p) => CoverageInstance::load(p)?.with_r(*r)?,
                    None => {
                        let n = need_size()?;
                        let u = universe.unwrap_or(3 * n);
                        let lo = min_set.unwrap_or((u / 8).max(1));
                        let hi = max_set.unwrap_or((u / 4).max(lo));
                        CoverageInstance::random(n, u, *r, lo, hi, &mut irng)?
                    }
                };
                let desc = format!(
                    "coverage[u={},r={}]#{}",
                    inst.universe(),
                    inst.r(),
                    point.instance
                );
                (Built::Coverage(CoverageProblem::new(inst)), desc)
            }
            ProblemSpec::Mst {
                edges_per_node,
                path,
                ..
            } => {
                let g = match path {
                    Some(p) => WeightedGraph::load(p)?,
                    None => {
                        let nodes = need_size()?;
                        let max = nodes * (nodes - 1) / 2;
                        let m = ((edges_per_node * nodes as f64).round() as usize)
                            .clamp(nodes - 1, max);
                        WeightedGraph::random_connected(nodes, m, &mut irng)?
                    }
                };
                let desc = format!(
                    "mst[nodes={},m={},w_max={}]#{}",
                    g.node_count(),
                    g.edge_count(),
                    g.w_max(),
                    point.instance
                );
                (Built::Mst(MstProblem::new(Arc::new(g))), desc)
            }
        };
        let n = built.dim();
        let p_m = cfg.mutation.c / n as f64;
        if !(p_m > 0.0 && p_m < 1.0) {
            return Err(Error::InvalidProbability(p_m));
        }

        let (space, k_or_cc) = match cfg.algorithm {
            Algorithm::Gsemo => (None, "pareto".to_string()),
            Algorithm::Qd => match (cfg.space(), &built) {
                (SpaceSpec::Cc, Built::Mst(p)) => (
                    Some(FeatureSpace::connected_components(p.graph().clone())?),
                    "cc".to_string(),
                ),
                (SpaceSpec::Noo { k }, b) if !matches!(b, Built::Mst(_)) => {
                    (Some(FeatureSpace::number_of_ones(n, k)?), k.to_string())
                }
                _ => {
                    return Err(Error::Config(
                        "feature space does not fit the problem".into(),
                    ))
                }
            },
        };

        let (bound_id, bound_params) = built.bound(
            space.as_ref().and_then(|s| s.granularity()).unwrap_or(1),
            p_m,
        );
        let budget = match cfg.stop.budget {
            Some(b) => b,
            None => (cfg.stop.budget_factor * bound_value(bound_id, &bound_params)?).ceil() as u64,
        }
        .max(1);
        let stop = StopCondition {
            budget,
            any_of: cfg.stop.triggers.clone(),
        };

        let mut targets = match (&space, &built) {
            (Some(s), b) => b.with_problem(|p| MilestoneTargets::resolve(p, s)),
            (None, _) => MilestoneTargets::default(),
        };
        if let (Built::Coverage(p), ProblemSpec::Coverage { alpha, .. }) = (&built, &cfg.problem) {
            let inst = p.instance();
            let reference = if inst.ground_set_size() <= EXHAUSTIVE_LIMIT {
                max_coverage_exhaustive(inst)?.value as f64
            } else {
                greedy_submodular(inst).value as f64
            };
            targets.approx = Some(ApproxTarget {
                alpha: alpha.unwrap_or(ONE_MINUS_INV_E),
                reference,
            });
        }

        Ok(Scenario {
            config_id: cfg.config_id.clone(),
            algorithm: cfg.algorithm,
            descriptor,
            k_or_cc,
            n,
            p_m,
            bound_id,
            bound_params,
            stop,
            master_seed: cfg.master_seed,
            timing: cfg.timing,
            built,
            space,
            targets,
        })
    }

    /// The feature space (QD only).
    pub fn space(&self) -> Option<&FeatureSpace> {
        self.space.as_ref()
    }

    pub fn targets(&self) -> &MilestoneTargets {
        &self.targets
    }

    /// Coverage instance, for submodular scenarios.
    pub fn coverage(&self) -> Option<&CoverageInstance> {
        match &self.built {
            Built::Coverage(p) => Some(p.instance()),
            _ => None,
        }
    }

    pub fn mst(&self) -> Option<&MstProblem> {
        match &self.built {
            Built::Mst(p) => Some(p),
            _ => None,
        }
    }

    /// Runs one replication on stream `stream`.
    pub fn run(&self, stream: u64) -> Result<RunRecord> {
        let rng = RandomSource::new(self.master_seed, stream);
        let start = Instant::now();
        let (trace, final_mst_weight, t_zero) = match self.algorithm {
            Algorithm::Qd => self.run_qd(rng)?,
            Algorithm::Gsemo => self.run_gsemo(rng)?,
        };
        let wall_ns = if self.timing {
            start.elapsed().as_nanos() as u64
        } else {
            0
        };
        let is_coverage = matches!(self.built, Built::Coverage(_));
        Ok(RunRecord {
            config_id: self.config_id.clone(),
            problem: self.descriptor.clone(),
            n: self.n,
            k_or_cc: self.k_or_cc.clone(),
            p_m: self.p_m,
            seed: self.master_seed,
            stream,
            t_cover: trace.t_cover,
            t_opt: trace.t_opt,
            t_copt: trace.t_copt,
            t_approx: trace.t_approx,
            final_best_feasible: if is_coverage {
                trace.best_feasible
            } else {
                None
            },
            final_mst_weight,
            truncated: trace.truncated,
            wall_ns,
            approx_alpha: self.targets.approx.map(|a| a.alpha),
            approx_reference: self.targets.approx.map(|a| a.reference),
            evals: trace.evals,
            t_zero,
            first_cover: trace.first_cover,
        })
    }

    fn run_qd(&self, rng: RandomSource) -> Result<(RunTrace, Option<f64>, Option<u64>)> {
        let space = self.space.as_ref().expect("qd scenarios carry a space");
        let trace = self.built.with_problem(|p| {
            QdEngine::init(p, space, self.p_m, self.targets.clone(), rng)?.run(&self.stop)
        })?;
        let zero_cell = space.cell_of(&Genotype::zeros(self.n)?);
        let t_zero = trace
            .first_cover
            .get(zero_cell)
            .copied()
            .flatten()
            .map(|h| h.evals);
        let final_mst_weight = match self.built {
            Built::Mst(_) => trace
                .final_cell_fitness
                .first()
                .copied()
                .flatten()
                .map(|f| -f),
            _ => None,
        };
        Ok((trace, final_mst_weight, t_zero))
    }

    fn run_gsemo(&self, rng: RandomSource) -> Result<(RunTrace, Option<f64>, Option<u64>)> {
        fn go<B: BiObjective>(
            b: &B,
            p_m: f64,
            approx: Option<ApproxTarget>,
            stop: &StopCondition,
            rng: RandomSource,
        ) -> Result<(RunTrace, Vec<[f64; 2]>)> {
            let mut e = GsemoEngine::init(b, p_m, approx, rng)?;
            let truncated = e.advance(stop)?;
            let objs = e.population().iter().map(|m| m.objectives).collect();
            Ok((e.trace(truncated), objs))
        }
        let approx = self.targets.approx;
        let stop = &self.stop;
        let p_m = self.p_m;
        Ok(match &self.built {
            Built::Unitation(u) if u.kind() == UnitationKind::OneMax => (
                go(&OneMinMax::new(self.n), p_m, approx, stop, rng)?.0,
                None,
                None,
            ),
            Built::Unitation(u) => (
                go(&SingleObjective(u.clone()), p_m, approx, stop, rng)?.0,
                None,
                None,
            ),
            Built::Linear(l) => (
                go(&SingleObjective(l.clone()), p_m, approx, stop, rng)?.0,
                None,
                None,
            ),
            Built::Coverage(c) => {
                let b = SubmodularBiObjective::new(c.instance().clone());
                (go(&b, p_m, approx, stop, rng)?.0, None, None)
            }
            Built::Mst(m) => {
                let b = MstBiObjective::new(m.graph().clone());
                let (trace, objs) = go(&b, p_m, approx, stop, rng)?;
                let w = objs.iter().find(|o| o[0] == 1.0).map(|o| o[1]);
                (trace, w, None)
            }
        })
    }
}

fn unitation(kind: UnitationKind, n: usize) -> Result<(Built, String)> {
    let u = Unitation::new(kind, n)?;
    let name = u.name();
    Ok((Built::Unitation(u), name))
}

impl Built {
    fn dim(&self) -> usize {
        self.with_problem(|p| p.dim())
    }

    fn with_problem<T>(&self, f: impl FnOnce(&dyn Problem) -> T) -> T {
        match self {
            Built::Unitation(p) => f(p),
            Built::Linear(p) => f(p),
            Built::Coverage(p) => f(p),
            Built::Mst(p) => f(p),
        }
    }

    fn bound(&self, k: usize, p_m: f64) -> (BoundId, BoundParams) {
        let n = self.dim();
        match self {
            Built::Unitation(_) | Built::Linear(_) => {
                let id = if k == 1 {
                    BoundId::CoverK1
                } else {
                    BoundId::CoverK
                };
                (
                    id,
                    BoundParams {
                        n,
                        k,
                        p_m,
                        ..Default::default()
                    },
                )
            }
            Built::Coverage(c) => (
                BoundId::Submod,
                BoundParams {
                    n,
                    k,
                    p_m,
                    r: c.instance().r(),
                    ..Default::default()
                },
            ),
            Built::Mst(m) => {
                let g = m.graph();
                (
                    BoundId::MstOpt,
                    BoundParams {
                        n: g.node_count(),
                        k,
                        p_m,
                        m: g.edge_count(),
                        w_max: g.w_max(),
                        r: 0,
                    },
                )
            }
        }
    }
}

/// Builds the scenario of every grid point.
pub fn scenarios(cfg: &SweepConfig) -> Result<Vec<Scenario>> {
    cfg.validate()?;
    cfg.grid()
        .into_iter()
        .map(|p| Scenario::build(cfg, p))
        .collect()
}

/// Runs a single replication: grid point `index`, replication `rep`.
pub fn run_one(cfg: &SweepConfig, index: usize, rep: usize) -> Result<RunRecord> {
    cfg.validate()?;
    let point = *cfg
        .grid()
        .get(index)
        .ok_or_else(|| Error::Config(format!("grid index {index} out of range")))?;
    if rep >= cfg.replications {
        return Err(Error::Config(format!("replication {rep} out of range")));
    }
    Scenario::build(cfg, point)?.run(cfg.stream(index, rep))
}

/// Runs all replications in parallel and hands each record to `emit` in
/// `(grid_index, rep)` order as soon as its predecessors are done.
pub fn run_sweep_with(
    cfg: &SweepConfig,
    mut emit: impl FnMut(&RunRecord) -> Result<()>,
) -> Result<Vec<RunRecord>> {
    let scenarios = scenarios(cfg)?;
    let r = cfg.replications;
    let jobs: Vec<(usize, usize)> = (0..scenarios.len())
        .flat_map(|g| (0..r).map(move |rep| (g, rep)))
        .collect();
    let total = jobs.len();
    let (tx, rx) = mpsc::channel::<(usize, Result<RunRecord>)>();
    let mut out = Vec::with_capacity(total);
    std::thread::scope(|s| -> Result<()> {
        let scenarios = &scenarios;
        s.spawn(move || {
            jobs.into_par_iter()
                .enumerate()
                .for_each_with(tx, |tx, (i, (g, rep))| {
                    let rec = scenarios[g].run(cfg.stream(g, rep));
                    let _ = tx.send((i, rec));
                });
        });
        let mut pending = BTreeMap::new();
        let mut failure = None;
        for (i, rec) in rx {
            pending.insert(i, rec);
            while let Some(rec) = pending.remove(&out.len()) {
                match rec {
                    Ok(rec) => {
                        if failure.is_none() {
                            if let Err(e) = emit(&rec) {
                                failure = Some(e);
                            }
                        }
                        out.push(rec);
                    }
                    Err(e) => {
                        failure.get_or_insert(e);
                        pending.clear();
                        break;
                    }
                }
            }
        }
        match failure {
            Some(e) => Err(e),
            None => Ok(()),
        }
    })?;
    Ok(out)
}

pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<RunRecord>> {
    run_sweep_with(cfg, |_| Ok(()))
}

/// Runs the sweep, streaming CSV rows to `csv` and optionally JSON lines
/// to `jsonl`.
pub fn run_sweep_to<W: Write>(
    cfg: &SweepConfig,
    csv: W,
    mut jsonl: Option<&mut dyn Write>,
) -> Result<Vec<RunRecord>> {
    let mut sink = CsvSink::new(csv)?;
    let records = run_sweep_with(cfg, |rec| {
        sink.write(rec)?;
        if let Some(j) = jsonl.as_mut() {
            serde_json::to_writer(&mut **j, rec)?;
            j.write_all(b"\n").map_err(|e| Error::io("<jsonl>", e))?;
        }
        Ok(())
    })?;
    sink.flush()?;
    Ok(records)
}

/// Runs the sweep into the files named by the config (`output` required).
pub fn run_sweep_files(cfg: &SweepConfig) -> Result<Vec<RunRecord>> {
    let out = cfg
        .output
        .as_deref()
        .ok_or_else(|| Error::Config("no output path configured".into()))?;
    let csv = create(out)?;
    match cfg.jsonl.as_deref() {
        Some(p) => {
            let mut j = create(p)?;
            let recs = run_sweep_to(cfg, csv, Some(&mut j))?;
            j.flush().map_err(|e| Error::io(p, e))?;
            Ok(recs)
        }
        None => run_sweep_to(cfg, csv, None),
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::io(path, e))
}
