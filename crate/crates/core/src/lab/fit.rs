use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::record::RunRecord;
use super::stats::{bootstrap_mean_ci, mean, median, ols, Interval, BOOTSTRAP_RESAMPLES};
use crate::error::{Error, Result};
use crate::oracles::{bound_value, BoundId, BoundParams};

/// Which hitting time of a record is fitted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Milestone {
    TCover,
    TOpt,
    TCopt,
    TApprox,
    /// First cover of the all-zeros genotype's cell (JSON records only).
    TZero,
}

impl Milestone {
    pub fn of(self, r: &RunRecord) -> Option<u64> {
        match self {
            Milestone::TCover => r.t_cover,
            Milestone::TOpt => r.t_opt,
            Milestone::TCopt => r.t_copt,
            Milestone::TApprox => r.t_approx,
            Milestone::TZero => r.t_zero,
        }
    }

    /// The hitting time a bound speaks about.
    pub fn for_bound(id: BoundId) -> Self {
        match id {
            BoundId::CoverK1 | BoundId::CoverK => Milestone::TCover,
            BoundId::Submod => Milestone::TApprox,
            BoundId::MstZero => Milestone::TZero,
            BoundId::MstOpt => Milestone::TOpt,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Milestone::TCover => "t_cover",
            Milestone::TOpt => "t_opt",
            Milestone::TCopt => "t_copt",
            Milestone::TApprox => "t_approx",
            Milestone::TZero => "t_zero",
        }
    }
}

impl fmt::Display for Milestone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Milestone {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [
            Milestone::TCover,
            Milestone::TOpt,
            Milestone::TCopt,
            Milestone::TApprox,
            Milestone::TZero,
        ]
        .into_iter()
        .find(|m| m.as_str() == s)
        .ok_or_else(|| Error::InvalidParameter(format!("unknown milestone '{s}'")))
    }
}

/// Thresholds that turn a fit into a verdict.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitPolicy {
    pub max_spread: f64,
    /// Required ratio between the largest and smallest size parameter.
    pub min_range: f64,
    /// Accepted interval for the log-log slope, if any.
    pub slope_window: Option<(f64, f64)>,
    /// Largest tolerated fraction of runs lacking the milestone.
    pub max_missing: f64,
    pub min_runs: usize,
    pub min_points: usize,
    pub level: f64,
    pub resamples: usize,
    pub seed: u64,
}

impl Default for FitPolicy {
    fn default() -> Self {
        FitPolicy {
            max_spread: 2.5,
            min_range: 8.0,
            slope_window: None,
            max_missing: 0.05,
            min_runs: 30,
            min_points: 3,
            level: 0.95,
            resamples: BOOTSTRAP_RESAMPLES,
            seed: 0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
}

/// Measured hitting times at one grid size.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitPoint {
    /// Genotype length.
    pub n: usize,
    /// The bound's size parameter (`n`, or `n_G` for MST bounds).
    pub size: usize,
    pub runs: usize,
    pub missing: usize,
    pub mean: f64,
    pub median: f64,
    pub ci: Interval,
    pub bound: f64,
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub bound_id: BoundId,
    pub milestone: Milestone,
    pub points: Vec<FitPoint>,
    pub ratio_spread: f64,
    /// Slope of log mean against log bound.
    pub slope: f64,
    pub size_range: f64,
    pub reliable: bool,
    pub notes: Vec<String>,
    pub verdict: Verdict,
    pub policy: FitPolicy,
}

impl FitResult {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

/// `key=value` pairs inside the brackets of a problem descriptor such as
/// `mst[nodes=8,m=16,w_max=16]#2`.
fn descriptor_param(problem: &str, key: &str) -> Option<u64> {
    let inner = problem.split_once('[')?.1.split_once(']')?.0;
    inner
        .split(',')
        .filter_map(|kv| kv.split_once('='))
        .find(|(k, _)| k.trim() == key)
        .and_then(|(_, v)| v.trim().parse().ok())
}

/// Bound inputs recoverable from a record.
pub fn bound_params_of(id: BoundId, r: &RunRecord) -> Result<BoundParams> {
    let k = r.k_or_cc.parse().unwrap_or(1);
    let need = |key: &str| {
        descriptor_param(&r.problem, key).ok_or_else(|| {
            Error::InsufficientData(format!(
                "bound {id} needs '{key}' in the problem descriptor '{}'",
                r.problem
            ))
        })
    };
    let mut p = BoundParams {
        n: r.n,
        k,
        p_m: r.p_m,
        ..Default::default()
    };
    match id {
        BoundId::CoverK1 | BoundId::CoverK => {}
        BoundId::Submod => p.r = need("r")? as usize,
        BoundId::MstZero | BoundId::MstOpt => {
            p.n = need("nodes")? as usize;
            p.m = r.n;
            p.w_max = need("w_max")?;
        }
    }
    Ok(p)
}

/// Fits the milestone the bound describes under the default policy.
pub fn fit_scaling(records: &[RunRecord], id: BoundId) -> Result<FitResult> {
    fit_scaling_with(records, id, Milestone::for_bound(id), &FitPolicy::default())
}

/// Groups records by genotype length, compares each group's mean hitting
/// time with the bound and applies `policy`.
pub fn fit_scaling_with(
    records: &[RunRecord],
    id: BoundId,
    milestone: Milestone,
    policy: &FitPolicy,
) -> Result<FitResult> {
    let mut sizes: Vec<usize> = records.iter().map(|r| r.n).collect();
    sizes.sort_unstable();
    sizes.dedup();
    if sizes.len() < policy.min_points {
        return Err(Error::InsufficientData(format!(
            "{} grid points, need at least {}",
            sizes.len(),
            policy.min_points
        )));
    }
    let mut notes = Vec::new();
    let mut reliable = true;
    let mut points = Vec::new();
    for &n in &sizes {
        let group: Vec<&RunRecord> = records.iter().filter(|r| r.n == n).collect();
        let times: Vec<f64> = group
            .iter()
            .filter_map(|r| milestone.of(r))
            .map(|t| t as f64)
            .collect();
        let missing = group.len() - times.len();
        if times.is_empty() {
            return Err(Error::InsufficientData(format!(
                "no run at n = {n} records {milestone}"
            )));
        }
        if group.len() < policy.min_runs {
            reliable = false;
            notes.push(format!(
                "n = {n}: {} runs, fewer than {}",
                group.len(),
                policy.min_runs
            ));
        }
        if missing as f64 > policy.max_missing * group.len() as f64 {
            reliable = false;
            notes.push(format!(
                "n = {n}: {missing} of {} runs lack {milestone} (truncated at budget)",
                group.len()
            ));
        }
        let params: Vec<BoundParams> = group
            .iter()
            .map(|r| bound_params_of(id, r))
            .collect::<Result<_>>()?;
        let bounds: Vec<f64> = params
            .iter()
            .map(|p| bound_value(id, p))
            .collect::<Result<_>>()?;
        let bound = mean(&bounds).expect("group is non-empty");
        let m = mean(&times).expect("times non-empty");
        points.push(FitPoint {
            n,
            size: params[0].n,
            runs: group.len(),
            missing,
            mean: m,
            median: median(&times).expect("times non-empty"),
            ci: bootstrap_mean_ci(&times, policy.level, policy.resamples, policy.seed)
                .expect("times non-empty"),
            bound,
            ratio: m / bound,
        });
    }
    let ratios: Vec<f64> = points.iter().map(|p| p.ratio).collect();
    let max = ratios.iter().copied().fold(f64::MIN, f64::max);
    let min = ratios.iter().copied().fold(f64::MAX, f64::min);
    let ratio_spread = max / min;
    let lx: Vec<f64> = points.iter().map(|p| p.bound.ln()).collect();
    let ly: Vec<f64> = points.iter().map(|p| p.mean.ln()).collect();
    let slope = ols(&lx, &ly).map_or(f64::NAN, |(s, _)| s);
    let smax = points.iter().map(|p| p.size).max().unwrap_or(1) as f64;
    let smin = points.iter().map(|p| p.size).min().unwrap_or(1) as f64;
    let size_range = smax / smin;

    let mut ok = reliable;
    if ratio_spread > policy.max_spread {
        ok = false;
        notes.push(format!(
            "ratio spread {ratio_spread:.3} exceeds {}",
            policy.max_spread
        ));
    }
    if size_range < policy.min_range {
        ok = false;
        notes.push(format!(
            "size range {size_range:.2}x below {}x",
            policy.min_range
        ));
    }
    if let Some((lo, hi)) = policy.slope_window {
        if !(lo..=hi).contains(&slope) {
            ok = false;
            notes.push(format!("slope {slope:.3} outside [{lo}, {hi}]"));
        }
    }
    Ok(FitResult {
        bound_id: id,
        milestone,
        points,
        ratio_spread,
        slope,
        size_range,
        reliable,
        notes,
        verdict: if ok { Verdict::Pass } else { Verdict::Fail },
        policy: policy.clone(),
    })
}
