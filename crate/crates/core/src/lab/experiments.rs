//! The acceptance experiments, parameterised by scale so the verification
//! suite can run reduced versions.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::config::{Algorithm, MutationSpec, ProblemSpec, SpaceSpec, StopSpec, SweepConfig};
use super::fit::{fit_scaling_with, FitPolicy, FitResult, Milestone};
use super::record::RunRecord;
use super::stats::{bootstrap_mean_ci, mean, BOOTSTRAP_RESAMPLES};
use super::sweep::{run_sweep, scenarios, ONE_MINUS_INV_E};
use crate::bitcore::RandomSource;
use crate::engines::{coupled_trajectories, MilestoneTargets, QdEngine, Trigger};
use crate::error::Result;
use crate::features::FeatureSpace;
use crate::oracles::{
    bound_value, greedy_submodular, kruskal, max_coverage_exhaustive, mst_exhaustive, BoundId,
    BoundParams, TransitionTable,
};
use crate::problems::{
    CoverageInstance, CoverageProblem, LinearMonotone, MstProblem, Problem, Unitation,
    UnitationKind, WeightedGraph,
};

/// One pass/fail observation inside a check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Finding {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Finding {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Finding {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

/// Outcome of one criterion.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub id: String,
    pub title: String,
    pub master_seed: u64,
    pub elapsed_ms: f64,
    pub findings: Vec<Finding>,
    /// Informational results that do not affect the verdict.
    pub notes: Vec<String>,
}

impl Check {
    pub fn passed(&self) -> bool {
        !self.findings.is_empty() && self.findings.iter().all(|f| f.passed)
    }

    /// `PASS E1 (title): finding; finding`.
    pub fn summary_line(&self) -> String {
        let body: Vec<String> = self
            .findings
            .iter()
            .map(|f| {
                format!(
                    "[{}] {}: {}",
                    if f.passed { "ok" } else { "FAIL" },
                    f.name,
                    f.detail
                )
            })
            .collect();
        format!(
            "{} {} ({}) seed={} {:.1}s :: {}",
            if self.passed() { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.master_seed,
            self.elapsed_ms / 1000.0,
            body.join("; ")
        )
    }
}

struct Timer(Instant);

impl Timer {
    fn start() -> Self {
        Timer(Instant::now())
    }

    fn ms(&self) -> f64 {
        self.0.elapsed().as_secs_f64() * 1000.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scale {
    /// Reduced sizes and replication counts.
    Fast,
    /// The sizes stated in the acceptance criteria.
    Full,
}

fn config(
    id: &str,
    seed: u64,
    replications: usize,
    n_grid: Vec<usize>,
    problem: ProblemSpec,
    space: Option<SpaceSpec>,
) -> SweepConfig {
    SweepConfig {
        config_id: id.to_string(),
        master_seed: seed,
        replications,
        n_grid,
        algorithm: Algorithm::Qd,
        problem,
        space,
        mutation: MutationSpec::default(),
        stop: StopSpec::default(),
        output: None,
        jsonl: None,
        timing: true,
    }
}

fn fit_finding(name: &str, fit: &FitResult) -> Finding {
    let ratios: Vec<String> = fit
        .points
        .iter()
        .map(|p| format!("{}:{:.3}", p.n, p.ratio))
        .collect();
    let mut detail = format!(
        "ratios [{}] spread {:.3} slope {:.3}",
        ratios.join(" "),
        fit.ratio_spread,
        fit.slope
    );
    if !fit.notes.is_empty() {
        detail.push_str(&format!(" ({})", fit.notes.join("; ")));
    }
    Finding::new(name, fit.passed(), detail)
}

fn truncation_finding(records: &[RunRecord], limit: f64) -> Finding {
    let t = records.iter().filter(|r| r.truncated).count();
    let frac = t as f64 / records.len().max(1) as f64;
    Finding::new(
        "truncation",
        frac < limit,
        format!(
            "{t}/{} runs truncated ({:.2}%, limit {:.0}%)",
            records.len(),
            100.0 * frac,
            100.0 * limit
        ),
    )
}

fn ordering_finding(records: &[RunRecord]) -> Finding {
    let bad = records.iter().filter(|r| !r.milestones_ordered()).count();
    Finding::new("milestone order", bad == 0, format!("{bad} violations"))
}

/// The E1 fit policy: spread at most 2.5 over at least an 8x range, slope
/// in [0.85, 1.15].
pub fn e1_policy() -> FitPolicy {
    FitPolicy {
        max_spread: 2.5,
        min_range: 8.0,
        slope_window: Some((0.85, 1.15)),
        ..FitPolicy::default()
    }
}

pub const E1_SEED: u64 = 0xE1;
pub const E2_SEED: u64 = 0xE2;
pub const E3_SEED: u64 = 0xE3;
pub const E4_SEED: u64 = 0xE4;
pub const E5_SEED: u64 = 0xE5;
pub const E6_SEED: u64 = 0xE6;
pub const P2_SEED: u64 = 0xB2;

/// OneMax, granularity 1: cover time against `n^2 ln n`.
pub fn e1(scale: Scale) -> Result<Check> {
    let timer = Timer::start();
    let (grid, reps) = match scale {
        Scale::Full => (vec![31, 63, 127, 255], 100),
        Scale::Fast => (vec![15, 31, 63, 127], 30),
    };
    let cfg = config("e1", E1_SEED, reps, grid, ProblemSpec::OneMax, None);
    let records = run_sweep(&cfg)?;
    let fit = fit_scaling_with(&records, BoundId::CoverK1, Milestone::TCover, &e1_policy())?;
    Ok(Check {
        id: "E1".into(),
        title: "OneMax cover time, k = 1".into(),
        master_seed: E1_SEED,
        elapsed_ms: timer.ms(),
        findings: vec![
            fit_finding("t_cover vs n^2 ln n", &fit),
            truncation_finding(&records, 0.05),
            ordering_finding(&records),
        ],
        notes: Vec::new(),
    })
}

/// OneMax with granularity 2 (and 3, informational): cover time against
/// `L p_m^{-k} / C(2k-1, k)`.
pub fn e2(scale: Scale) -> Result<Check> {
    let timer = Timer::start();
    let (grid2, grid3, reps) = match scale {
        Scale::Full => (vec![31, 63, 95], vec![29, 59], 100),
        Scale::Fast => (vec![15, 31, 47], vec![11, 23], 30),
    };
    let policy = FitPolicy {
        max_spread: 2.5,
        min_range: 1.0,
        ..FitPolicy::default()
    };
    let cfg = config(
        "e2-k2",
        E2_SEED,
        reps,
        grid2,
        ProblemSpec::OneMax,
        Some(SpaceSpec::Noo { k: 2 }),
    );
    let records = run_sweep(&cfg)?;
    let fit = fit_scaling_with(&records, BoundId::CoverK, Milestone::TCover, &policy)?;
    let mut findings = vec![
        fit_finding("k=2 t_cover vs cover_k", &fit),
        truncation_finding(&records, 0.05),
    ];
    let mut notes = Vec::new();
    let cfg3 = config(
        "e2-k3",
        E2_SEED + 1,
        reps,
        grid3,
        ProblemSpec::OneMax,
        Some(SpaceSpec::Noo { k: 3 }),
    );
    let records3 = run_sweep(&cfg3)?;
    let policy3 = FitPolicy {
        min_points: 2,
        ..policy
    };
    let fit3 = fit_scaling_with(&records3, BoundId::CoverK, Milestone::TCover, &policy3)?;
    findings.push(truncation_finding(&records3, 0.05));
    let f3 = fit_finding("k=3 t_cover vs cover_k", &fit3);
    notes.push(format!(
        "{} ({})",
        f3.detail,
        if f3.passed {
            "within 2.5"
        } else {
            "outside 2.5"
        }
    ));
    Ok(Check {
        id: "E2".into(),
        title: "granularity scaling, k = 2 (k = 3 informational)".into(),
        master_seed: E2_SEED,
        elapsed_ms: timer.ms(),
        findings,
        notes,
    })
}

/// Trap and Jump(3) with granularity 1: the three milestones per run, and
/// the E1 scaling verdict on the optimisation time.
pub fn e3(scale: Scale) -> Result<Check> {
    let timer = Timer::start();
    let (grid, reps) = match scale {
        Scale::Full => (vec![31, 63, 127], 100),
        Scale::Fast => (vec![15, 31, 63], 30),
    };
    let policy = FitPolicy {
        min_range: 1.0,
        ..e1_policy()
    };
    let mut findings = Vec::new();
    let mut notes = Vec::new();
    for (name, problem, seed) in [
        ("trap", ProblemSpec::Trap, E3_SEED),
        ("jump3", ProblemSpec::Jump { gap: 3 }, E3_SEED + 1),
    ] {
        let cfg = config(
            &format!("e3-{name}"),
            seed,
            reps,
            grid.clone(),
            problem,
            None,
        );
        let records = run_sweep(&cfg)?;
        let all_equal = records
            .iter()
            .filter(|r| r.t_opt.is_some() && r.t_opt == r.t_copt && r.t_copt == r.t_cover)
            .count();
        findings.push(Finding::new(
            format!("{name} t_opt = t_copt = t_cover"),
            all_equal == records.len(),
            format!("{all_equal}/{} runs", records.len()),
        ));
        let copt_is_cover = records
            .iter()
            .filter(|r| r.t_copt.is_some() && r.t_copt == r.t_cover)
            .count();
        let opt_before_cover = records
            .iter()
            .filter(|r| matches!((r.t_opt, r.t_cover), (Some(o), Some(c)) if o <= c))
            .count();
        notes.push(format!(
            "{name}: t_copt = t_cover in {copt_is_cover}/{n}, t_opt <= t_cover in {opt_before_cover}/{n}",
            n = records.len()
        ));
        let fit = fit_scaling_with(&records, BoundId::CoverK1, Milestone::TOpt, &policy)?;
        findings.push(fit_finding(&format!("{name} t_opt vs n^2 ln n"), &fit));
        findings.push(ordering_finding(&records));
    }
    Ok(Check {
        id: "E3".into(),
        title: "Trap and Jump(3) optimisation, k = 1".into(),
        master_seed: E3_SEED,
        elapsed_ms: timer.ms(),
        findings,
        notes,
    })
}

/// Coupled lockstep runs of QD and GSEMO.
pub fn coupling_finding(n: usize, steps: usize, seeds: u64) -> Result<Finding> {
    let mut diverged = Vec::new();
    for seed in 0..seeds {
        let rep = coupled_trajectories(n, steps, seed)?;
        if let Some(d) = rep.divergence {
            diverged.push(format!("seed {seed} at step {d}"));
        }
    }
    Ok(Finding::new(
        format!("coupled trajectories n={n}, {steps} steps"),
        diverged.is_empty(),
        if diverged.is_empty() {
            format!("identical for {seeds} seeds")
        } else {
            diverged.join(", ")
        },
    ))
}

/// QD on OneMax versus GSEMO on OneMinMax.
pub fn e4(scale: Scale) -> Result<Check> {
    let timer = Timer::start();
    let (n, reps) = match scale {
        Scale::Full => (63, 300),
        Scale::Fast => (31, 100),
    };
    let qd_cfg = config("e4-qd", E4_SEED, reps, vec![n], ProblemSpec::OneMax, None);
    let gs_cfg = SweepConfig {
        config_id: "e4-gsemo".into(),
        master_seed: E4_SEED + 1,
        algorithm: Algorithm::Gsemo,
        stop: StopSpec {
            triggers: vec![Trigger::CoveredAll],
            ..StopSpec::default()
        },
        ..qd_cfg.clone()
    };
    let qd = run_sweep(&qd_cfg)?;
    let gs = run_sweep(&gs_cfg)?;
    let times = |rs: &[RunRecord]| -> Vec<f64> {
        rs.iter()
            .filter_map(|r| r.t_cover)
            .map(|t| t as f64)
            .collect()
    };
    let (tq, tg) = (times(&qd), times(&gs));
    let ci_q = bootstrap_mean_ci(&tq, 0.95, BOOTSTRAP_RESAMPLES, 1);
    let ci_g = bootstrap_mean_ci(&tg, 0.95, BOOTSTRAP_RESAMPLES, 2);
    let overlap = match (ci_q, ci_g) {
        (Some(a), Some(b)) => tq.len() == reps && tg.len() == reps && a.overlaps(&b),
        _ => false,
    };
    let detail = format!(
        "QD mean {:.0} CI [{:.0}, {:.0}] ({} runs), GSEMO mean {:.0} CI [{:.0}, {:.0}] ({} runs)",
        mean(&tq).unwrap_or(f64::NAN),
        ci_q.map_or(f64::NAN, |c| c.low),
        ci_q.map_or(f64::NAN, |c| c.high),
        tq.len(),
        mean(&tg).unwrap_or(f64::NAN),
        ci_g.map_or(f64::NAN, |c| c.low),
        ci_g.map_or(f64::NAN, |c| c.high),
        tg.len(),
    );
    Ok(Check {
        id: "E4".into(),
        title: "QD on OneMax equals GSEMO on OneMinMax".into(),
        master_seed: E4_SEED,
        elapsed_ms: timer.ms(),
        findings: vec![
            Finding::new("bootstrap 95% CIs overlap", overlap, detail),
            coupling_finding(20, 1000, 10)?,
        ],
        notes: Vec::new(),
    })
}

/// Maximum coverage under a cardinality limit.
pub fn e5(scale: Scale) -> Result<Check> {
    let timer = Timer::start();
    let (instances, reps) = match scale {
        Scale::Full => (50, 10),
        Scale::Fast => (10, 3),
    };
    let n = 14;
    let mut findings = Vec::new();
    let mut notes = Vec::new();
    for r in [3usize, 5] {
        let mut cfg = config(
            &format!("e5-r{r}"),
            E5_SEED,
            reps,
            vec![n],
            ProblemSpec::Coverage {
                r,
                universe: Some(40),
                min_set: None,
                max_set: None,
                instances,
                path: None,
                alpha: None,
            },
            None,
        );
        // Same sets for both values of r.
        cfg.stop.budget_factor = 20.0;
        let records = run_sweep(&cfg)?;
        let scen = scenarios(&cfg)?;
        let budget = 20.0
            * bound_value(
                BoundId::Submod,
                &BoundParams {
                    n,
                    r,
                    ..Default::default()
                },
            )?;

        let mut approx_ok = 0;
        let mut traj_total = 0;
        let mut traj_ok = 0;
        let mut per_j = vec![0usize; r + 1];
        for (i, rec) in records.iter().enumerate() {
            let inst = scen[i / reps].coverage().expect("coverage scenario");
            let opt = max_coverage_exhaustive(inst)?.value as f64;
            if rec
                .final_best_feasible
                .is_some_and(|v| v >= ONE_MINUS_INV_E * opt - 1e-9)
            {
                approx_ok += 1;
            }
            for (j, hits) in per_j.iter_mut().enumerate().take(r + 1).skip(1) {
                traj_total += 1;
                let need = (1.0 - (1.0 - 1.0 / r as f64).powi(j as i32)) * opt;
                if rec
                    .first_cover
                    .get(j)
                    .copied()
                    .flatten()
                    .is_some_and(|h| h.fitness >= need - 1e-9)
                {
                    traj_ok += 1;
                    *hits += 1;
                }
            }
        }
        findings.push(Finding::new(
            format!("r={r} final >= (1-1/e) OPT"),
            approx_ok == records.len(),
            format!("{approx_ok}/{} runs", records.len()),
        ));
        let t: Vec<f64> = records
            .iter()
            .filter_map(|r| r.t_approx)
            .map(|t| t as f64)
            .collect();
        let mt = mean(&t).unwrap_or(f64::INFINITY);
        findings.push(Finding::new(
            format!("r={r} mean t_approx <= 20 n^2 (ln n + r)"),
            t.len() == records.len() && mt <= budget,
            format!("mean {mt:.0} over {} runs, limit {budget:.0}", t.len()),
        ));
        let frac = traj_ok as f64 / traj_total as f64;
        findings.push(Finding::new(
            format!("r={r} first-cover trajectory"),
            frac >= 0.95,
            format!(
                "{traj_ok}/{traj_total} observations ({:.1}%, need 95%)",
                100.0 * frac
            ),
        ));
        let by_j: Vec<String> = (1..=r)
            .map(|j| format!("j={j}: {}/{}", per_j[j], records.len()))
            .collect();
        notes.push(format!(
            "r={r}: first-cover bound by cell [{}]; {} runs truncated before every milestone",
            by_j.join(", "),
            records.iter().filter(|r| r.truncated).count()
        ));
    }
    Ok(Check {
        id: "E5".into(),
        title: "submodular (1-1/e)-approximation".into(),
        master_seed: E5_SEED,
        elapsed_ms: timer.ms(),
        findings,
        notes,
    })
}

/// Minimum spanning trees with the connected-components space.
pub fn e6(scale: Scale) -> Result<Check> {
    let timer = Timer::start();
    let (grid, instances, reps) = match scale {
        Scale::Full => (vec![8, 12, 16], 10, 30),
        Scale::Fast => (vec![6, 8, 10], 3, 10),
    };
    let cfg = config(
        "e6",
        E6_SEED,
        reps,
        grid,
        ProblemSpec::Mst {
            edges_per_node: 2.0,
            instances,
            path: None,
        },
        None,
    );
    let records = run_sweep(&cfg)?;
    let scen = scenarios(&cfg)?;
    let mut reached = 0;
    for (i, rec) in records.iter().enumerate() {
        let g = scen[i / reps].mst().expect("mst scenario").graph();
        let w = kruskal(g)?.weight as f64;
        if rec.t_opt.is_some() && rec.final_mst_weight == Some(w) {
            reached += 1;
        }
    }
    let policy = FitPolicy {
        max_spread: 3.0,
        min_range: 1.0,
        min_runs: reps.min(30),
        ..FitPolicy::default()
    };
    let opt = fit_scaling_with(&records, BoundId::MstOpt, Milestone::TOpt, &policy)?;
    let zero = fit_scaling_with(&records, BoundId::MstZero, Milestone::TZero, &policy)?;
    Ok(Check {
        id: "E6".into(),
        title: "minimum spanning trees".into(),
        master_seed: E6_SEED,
        elapsed_ms: timer.ms(),
        findings: vec![
            Finding::new(
                "Kruskal weight reached within 50 n_G^2 m",
                reached == records.len(),
                format!("{reached}/{} runs", records.len()),
            ),
            fit_finding("t_opt vs n_G^2 m", &opt),
            fit_finding("first hit of 0^m vs n_G m ln(n_G w_max)", &zero),
            ordering_finding(&records),
        ],
        notes: Vec::new(),
    })
}

/// The decay inequality over every admissible triple. With `corrupt`, one
/// table entry is overwritten first (negative control).
pub fn p1(corrupt: bool) -> Result<Check> {
    let timer = Timer::start();
    let mut findings = Vec::new();
    for n in [10usize, 30, 60] {
        for c in [1.0, 2.0] {
            let p = c / n as f64;
            let mut table = TransitionTable::new(n, p)?;
            if corrupt && n == 10 && c == 1.0 {
                table.set_prob(5, 1, 0.5);
            }
            let triples: usize = (1..=n).map(|i| (0..i).map(|j| j + 1).sum::<usize>()).sum();
            let v = table.decay_violations();
            findings.push(Finding::new(
                format!("n={n} p_m={c}/n"),
                v.is_empty(),
                format!("{} violations in {triples} triples", v.len()),
            ));
        }
    }
    Ok(Check {
        id: "P1".into(),
        title: "decay of jump probabilities".into(),
        master_seed: 0,
        elapsed_ms: timer.ms(),
        findings,
        notes: Vec::new(),
    })
}

/// Steps QD engines on a mix of problems and checks the archive after
/// every step. Returns the first violation, if any.
pub fn engine_invariants(total_steps: u64, seed: u64) -> Result<Option<String>> {
    let mut irng = RandomSource::new(seed, u64::MAX);
    let graph = std::sync::Arc::new(WeightedGraph::random_connected(8, 16, &mut irng)?);
    let cov = CoverageProblem::new(CoverageInstance::random(14, 40, 4, 5, 10, &mut irng)?);
    let lin = LinearMonotone::random(24, &mut irng)?;
    let onemax = Unitation::onemax(30)?;
    let trap = Unitation::new(UnitationKind::Trap, 29)?;
    let jump = Unitation::new(UnitationKind::Jump { gap: 3 }, 35)?;
    let mst = MstProblem::new(graph.clone());
    let cases: Vec<(&dyn Problem, FeatureSpace)> = vec![
        (&onemax, FeatureSpace::number_of_ones(30, 1)?),
        (&trap, FeatureSpace::number_of_ones(29, 3)?),
        (&jump, FeatureSpace::number_of_ones(35, 4)?),
        (&lin, FeatureSpace::number_of_ones(24, 5)?),
        (&cov, FeatureSpace::number_of_ones(14, 1)?),
        (&mst, FeatureSpace::connected_components(graph)?),
    ];
    let per_case = total_steps / cases.len() as u64;
    for (ci, (problem, space)) in cases.iter().enumerate() {
        let p_m = 1.0 / problem.dim() as f64;
        let mut e = QdEngine::init(
            *problem,
            space,
            p_m,
            MilestoneTargets::default(),
            RandomSource::new(seed, ci as u64),
        )?;
        let mut prev: Vec<Option<f64>> = (0..space.cell_count())
            .map(|c| e.archive().get(c).map(|x| x.fitness))
            .collect();
        for step in 0..per_case {
            let evals = e.evals();
            let covered = e.archive().covered();
            e.step();
            let a = e.archive();
            let fail = |m: String| Ok(Some(format!("{} step {step}: {m}", problem.name())));
            if e.evals() != evals + 1 {
                return fail("evaluation count".into());
            }
            if a.covered() < covered || a.covered() > covered + 1 {
                return fail("coverage changed by more than one".into());
            }
            for (c, old) in prev.iter_mut().enumerate() {
                let now = a.get(c).map(|x| x.fitness);
                match (*old, now) {
                    (Some(_), None) => return fail(format!("cell {c} emptied")),
                    (Some(o), Some(f)) if f < o => {
                        return fail(format!("cell {c} fitness decreased"))
                    }
                    _ => {}
                }
                if now != *old {
                    let el = a.get(c).expect("changed cell is occupied");
                    if space.cell_of(&el.genotype) != c {
                        return fail(format!("elite of cell {c} lies elsewhere"));
                    }
                    if problem.evaluate(&el.genotype) != el.fitness {
                        return fail(format!("elite of cell {c} has stale fitness"));
                    }
                }
                *old = now;
            }
            let occupied = prev.iter().filter(|f| f.is_some()).count();
            if occupied != a.covered() || a.covered_cells().len() != a.covered() {
                return fail("covered index out of sync".into());
            }
            if step % 4096 == 0 {
                let mut cells = a.covered_cells().to_vec();
                cells.sort_unstable();
                cells.dedup();
                if cells.len() != a.covered() || cells.iter().any(|&c| prev[c].is_none()) {
                    return fail("covered index inconsistent".into());
                }
            }
        }
    }
    Ok(None)
}

/// Oracle equivalences and archive invariants.
pub fn p2(scale: Scale) -> Result<Check> {
    let timer = Timer::start();
    let mut findings = Vec::new();
    let mut rng = RandomSource::new(P2_SEED, 0);

    let mut worst: f64 = 0.0;
    for n in [10usize, 30, 60, 100, 200] {
        for c in [1.0, 2.0] {
            worst = worst.max(TransitionTable::new(n, c / n as f64)?.max_row_error());
        }
    }
    findings.push(Finding::new(
        "transition rows sum to 1",
        worst <= 1e-12,
        format!("max |row sum - 1| = {worst:.2e} for n up to 200"),
    ));

    let mut kr_ok = 0;
    for _ in 0..100 {
        let nodes = 3 + rng.index(7);
        let max = nodes * (nodes - 1) / 2;
        let m = (nodes - 1 + rng.index(nodes + 2)).min(max);
        let g = WeightedGraph::random_connected(nodes, m, &mut rng)?;
        let (k, b) = (kruskal(&g)?, mst_exhaustive(&g)?);
        if k.weight == b.weight {
            kr_ok += 1;
        }
    }
    findings.push(Finding::new(
        "Kruskal equals exhaustive MST",
        kr_ok == 100,
        format!("{kr_ok}/100 graphs with n_G <= 9"),
    ));

    let mut gr_ok = 0;
    let mut worst_ratio = f64::INFINITY;
    for _ in 0..200 {
        let n = 6 + rng.index(11);
        let u = 10 + rng.index(21);
        let r = 1 + rng.index(4);
        let lo = 1 + rng.index(u / 3);
        let hi = lo + rng.index(u / 3);
        let inst = CoverageInstance::random(n, u, r, lo, hi, &mut rng)?;
        let g = greedy_submodular(&inst).value as f64;
        let opt = max_coverage_exhaustive(&inst)?.value as f64;
        worst_ratio = worst_ratio.min(g / opt);
        if g >= ONE_MINUS_INV_E * opt {
            gr_ok += 1;
        }
    }
    findings.push(Finding::new(
        "greedy >= (1-1/e) OPT",
        gr_ok == 200,
        format!("{gr_ok}/200 instances, worst ratio {worst_ratio:.3}"),
    ));

    let steps = match scale {
        Scale::Full => 1_000_000,
        Scale::Fast => 120_000,
    };
    let inv = engine_invariants(steps, P2_SEED)?;
    findings.push(Finding::new(
        "archive invariants under engine steps",
        inv.is_none(),
        inv.unwrap_or_else(|| format!("{steps} steps over 6 problems")),
    ));

    Ok(Check {
        id: "P2".into(),
        title: "oracle suite".into(),
        master_seed: P2_SEED,
        elapsed_ms: timer.ms(),
        findings,
        notes: Vec::new(),
    })
}
