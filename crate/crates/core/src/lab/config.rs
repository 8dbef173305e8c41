use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::engines::Trigger;
use crate::error::{Error, Result};

/// Which search algorithm a sweep runs.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    #[default]
    Qd,
    Gsemo,
}

/// Problem family. For the random families (`linear`, `coverage`, `mst`)
/// each grid point gets `instances` independently generated instances.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ProblemSpec {
    #[serde(rename = "onemax")]
    OneMax,
    Jump {
        gap: usize,
    },
    Cliff {
        /// Defaults to `ceil(n / 3)`.
        #[serde(default)]
        depth: Option<usize>,
    },
    Trap,
    Constant,
    Linear {
        #[serde(default = "one")]
        instances: usize,
    },
    /// Grid values are the number of sets `n`.
    Coverage {
        r: usize,
        #[serde(default)]
        universe: Option<usize>,
        #[serde(default)]
        min_set: Option<usize>,
        #[serde(default)]
        max_set: Option<usize>,
        #[serde(default = "one")]
        instances: usize,
        /// Load a fixed instance instead; the grid is then ignored.
        #[serde(default)]
        path: Option<PathBuf>,
        /// Target factor for the approximation milestone.
        #[serde(default)]
        alpha: Option<f64>,
    },
    /// Grid values are node counts `n_G`; the genotype length is `m`.
    Mst {
        #[serde(default = "two")]
        edges_per_node: f64,
        #[serde(default = "one")]
        instances: usize,
        #[serde(default)]
        path: Option<PathBuf>,
    },
}

impl ProblemSpec {
    pub fn instances(&self) -> usize {
        match self {
            ProblemSpec::Linear { instances }
            | ProblemSpec::Coverage { instances, .. }
            | ProblemSpec::Mst { instances, .. } => *instances,
            _ => 1,
        }
    }

    fn path(&self) -> Option<&Path> {
        match self {
            ProblemSpec::Coverage { path, .. } | ProblemSpec::Mst { path, .. } => path.as_deref(),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SpaceSpec {
    /// Number of ones with granularity `k`.
    Noo { k: usize },
    /// Connected components of the selected edges.
    Cc,
}

/// Mutation rate `c / n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MutationSpec {
    pub c: f64,
}

impl Default for MutationSpec {
    fn default() -> Self {
        MutationSpec { c: 1.0 }
    }
}

/// Stop triggers plus a budget, either absolute or a multiple of the
/// leading-order bound for the grid point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StopSpec {
    #[serde(default)]
    pub budget: Option<u64>,
    #[serde(default = "fifty")]
    pub budget_factor: f64,
    #[serde(default = "all_tracked")]
    pub triggers: Vec<Trigger>,
}

impl Default for StopSpec {
    fn default() -> Self {
        StopSpec {
            budget: None,
            budget_factor: fifty(),
            triggers: all_tracked(),
        }
    }
}

fn one() -> usize {
    1
}

fn two() -> f64 {
    2.0
}

fn fifty() -> f64 {
    50.0
}

fn yes() -> bool {
    true
}

fn all_tracked() -> Vec<Trigger> {
    vec![Trigger::AllTracked]
}

/// A sweep: `replications` runs at every grid point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub config_id: String,
    #[serde(default)]
    pub master_seed: u64,
    pub replications: usize,
    #[serde(default)]
    pub n_grid: Vec<usize>,
    #[serde(default)]
    pub algorithm: Algorithm,
    pub problem: ProblemSpec,
    /// Defaults to `cc` for MST and `noo` with `k = 1` otherwise.
    #[serde(default)]
    pub space: Option<SpaceSpec>,
    #[serde(default)]
    pub mutation: MutationSpec,
    #[serde(default)]
    pub stop: StopSpec,
    #[serde(default)]
    pub output: Option<PathBuf>,
    /// Also write full records, one JSON object per line.
    #[serde(default)]
    pub jsonl: Option<PathBuf>,
    /// Record wall-clock time; off makes the CSV byte-reproducible.
    #[serde(default = "yes")]
    pub timing: bool,
}

/// One point of the expanded grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GridPoint {
    pub index: usize,
    /// Grid value; `None` when the instance comes from a file.
    pub size: Option<usize>,
    pub instance: usize,
}

impl SweepConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: SweepConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut cfg = Self::from_toml(&text)?;
        cfg.resolve_paths(path.parent().unwrap_or(Path::new(".")));
        Ok(cfg)
    }

    /// Makes instance paths relative to the config file's directory.
    fn resolve_paths(&mut self, base: &Path) {
        if let ProblemSpec::Coverage { path: Some(p), .. }
        | ProblemSpec::Mst { path: Some(p), .. } = &mut self.problem
        {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn space(&self) -> SpaceSpec {
        self.space.clone().unwrap_or(match self.problem {
            ProblemSpec::Mst { .. } => SpaceSpec::Cc,
            _ => SpaceSpec::Noo { k: 1 },
        })
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.replications == 0 {
            return bad("replications must be positive".into());
        }
        if self.problem.instances() == 0 {
            return bad("instances must be positive".into());
        }
        if self.problem.path().is_none() && self.n_grid.is_empty() {
            return bad("n_grid is empty".into());
        }
        if self.mutation.c.is_nan() || self.mutation.c <= 0.0 {
            return bad(format!(
                "mutation constant c = {} must be positive",
                self.mutation.c
            ));
        }
        if self.stop.budget == Some(0)
            || self.stop.budget_factor.is_nan()
            || self.stop.budget_factor <= 0.0
        {
            return bad("budget must be positive".into());
        }
        let is_mst = matches!(self.problem, ProblemSpec::Mst { .. });
        match (self.space(), is_mst) {
            (SpaceSpec::Cc, false) => return bad("the cc space needs an mst problem".into()),
            (SpaceSpec::Noo { .. }, true) if self.algorithm == Algorithm::Qd => {
                return bad("mst problems use the cc space".into())
            }
            (SpaceSpec::Noo { k }, false) if self.algorithm == Algorithm::Qd => {
                for &n in &self.n_grid {
                    if k == 0 || (n + 1) % k != 0 {
                        return Err(Error::Granularity {
                            k,
                            n_plus_one: n + 1,
                        });
                    }
                }
            }
            _ => {}
        }
        for &n in &self.n_grid {
            if n == 0 {
                return bad("grid values must be positive".into());
            }
            if !is_mst && self.mutation.c >= n as f64 {
                return Err(Error::InvalidProbability(self.mutation.c / n as f64));
            }
        }
        Ok(())
    }

    /// Grid points in CSV order: grid value major, instance minor.
    pub fn grid(&self) -> Vec<GridPoint> {
        let sizes: Vec<Option<usize>> = if self.problem.path().is_some() {
            vec![None]
        } else {
            self.n_grid.iter().copied().map(Some).collect()
        };
        let instances = if self.problem.path().is_some() {
            1
        } else {
            self.problem.instances()
        };
        sizes
            .into_iter()
            .flat_map(|size| (0..instances).map(move |instance| (size, instance)))
            .enumerate()
            .map(|(index, (size, instance))| GridPoint {
                index,
                size,
                instance,
            })
            .collect()
    }

    /// RNG stream of replication `rep` at grid point `index`.
    pub fn stream(&self, index: usize, rep: usize) -> u64 {
        (index * self.replications + rep) as u64
    }
}
