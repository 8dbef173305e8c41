use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::FeatureSpace;
use crate::oracles::{cell_optima_bruteforce, CELL_OPTIMA_LIMIT};
use crate::problems::Problem;

/// Events that can end a run before its budget.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Trigger {
    CoveredAll,
    GlobalOptFound,
    AllCellsOptimal,
    ApproxReached,
    /// Every milestone the run tracks has been recorded.
    AllTracked,
}

/// Stop when any trigger fires or the evaluation budget is spent.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StopCondition {
    pub budget: u64,
    #[serde(default)]
    pub any_of: Vec<Trigger>,
}

impl StopCondition {
    pub fn budget(budget: u64) -> Self {
        StopCondition {
            budget,
            any_of: Vec::new(),
        }
    }

    pub fn on(mut self, trigger: Trigger) -> Self {
        self.any_of.push(trigger);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.budget == 0 {
            return Err(Error::InvalidParameter(
                "evaluation budget must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Target for the approximation milestone: the first evaluation at which a
/// stored feasible solution reaches `alpha * reference`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ApproxTarget {
    pub alpha: f64,
    pub reference: f64,
}

impl ApproxTarget {
    pub fn threshold(&self) -> f64 {
        self.alpha * self.reference
    }
}

/// Reference data the milestone tracker needs beyond the problem itself.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct MilestoneTargets {
    /// Best fitness per cell; enables optimal-cover detection.
    pub cell_optima: Option<Vec<f64>>,
    pub approx: Option<ApproxTarget>,
}

impl MilestoneTargets {
    /// Per-cell optima from the problem's closed form, else by enumeration
    /// when `n <= 16`, else none (the optimal-cover milestone is disabled).
    pub fn resolve<P: Problem + ?Sized>(problem: &P, space: &FeatureSpace) -> Self {
        let cell_optima = problem.cell_optima(space).or_else(|| {
            (problem.dim() <= CELL_OPTIMA_LIMIT)
                .then(|| cell_optima_bruteforce(problem, space).ok())
                .flatten()
        });
        MilestoneTargets {
            cell_optima,
            approx: None,
        }
    }

    pub fn with_approx(mut self, alpha: f64, reference: f64) -> Self {
        self.approx = Some(ApproxTarget { alpha, reference });
        self
    }
}
