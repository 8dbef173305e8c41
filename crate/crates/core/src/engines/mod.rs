//! Search engines: QD over a feature space and the GSEMO baseline.

mod gsemo;
mod qd;
mod stop;

pub use gsemo::{gsemo_run, GsemoEngine, GsemoOutcome, Member};
pub use qd::{qd_run, CellHit, QdEngine, RunTrace};
pub use stop::{ApproxTarget, MilestoneTargets, StopCondition, Trigger};

use serde::Serialize;

use crate::bitcore::{Genotype, RandomSource, StandardBitMutation};
use crate::error::Result;
use crate::features::FeatureSpace;
use crate::problems::{OneMinMax, Unitation};

/// Result of driving QD on OneMax (granularity 1) and GSEMO on OneMinMax
/// with identical parent slots and flip masks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoupledReport {
    pub n: usize,
    pub steps: usize,
    /// First step after which the covered one-count sequences differ.
    pub divergence: Option<usize>,
}

impl CoupledReport {
    pub fn identical(&self) -> bool {
        self.divergence.is_none()
    }
}

/// Runs both engines in lockstep from the same initial point. Each step
/// draws one parent slot and one flip mask and hands them to both. After
/// every step the `s`-th covered QD cell must equal the one-count of the
/// `s`-th GSEMO member.
pub fn coupled_trajectories(n: usize, steps: usize, seed: u64) -> Result<CoupledReport> {
    let onemax = Unitation::onemax(n)?;
    let oneminmax = OneMinMax::new(n);
    let space = FeatureSpace::number_of_ones(n, 1)?;
    let p_m = 1.0 / n as f64;
    let mutation = StandardBitMutation::new(p_m)?;
    let mut driver = RandomSource::new(seed, 0);
    let x0 = Genotype::new_uniform(n, &mut driver)?;

    let mut qd = QdEngine::with_initial(
        &onemax,
        &space,
        p_m,
        MilestoneTargets::default(),
        RandomSource::new(seed, 1),
        x0.clone(),
    )?;
    let mut gsemo =
        GsemoEngine::with_initial(&oneminmax, p_m, None, RandomSource::new(seed, 2), x0)?;

    let same = |qd: &QdEngine<Unitation>, gs: &GsemoEngine<OneMinMax>| {
        let cells = qd.archive().covered_cells();
        cells.len() == gs.population().len()
            && cells
                .iter()
                .zip(gs.population())
                .all(|(&c, m)| c == m.genotype.count_ones())
    };

    let mut flips = Vec::new();
    for step in 0..steps {
        if !same(&qd, &gsemo) {
            return Ok(CoupledReport {
                n,
                steps,
                divergence: Some(step),
            });
        }
        let slot = driver.index(qd.archive().covered());
        mutation.flip_positions_into(n, &mut driver, &mut flips);
        qd.apply(slot, &flips);
        gsemo.apply(slot, &flips);
    }
    let divergence = (!same(&qd, &gsemo)).then_some(steps);
    Ok(CoupledReport {
        n,
        steps,
        divergence,
    })
}
