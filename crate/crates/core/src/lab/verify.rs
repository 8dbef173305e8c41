use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::experiments::{self, coupling_finding, Check, Finding, Scale};
use super::sweep::run_sweep;
use super::SweepConfig;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Level {
    /// Oracle equivalences, invariants and coupling at capped sizes.
    Fast,
    /// Every acceptance experiment at its stated size.
    Full,
}

impl FromStr for Level {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fast" => Ok(Level::Fast),
            "full" => Ok(Level::Full),
            _ => Err(Error::InvalidParameter(format!("unknown level '{s}'"))),
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Level::Fast => "fast",
            Level::Full => "full",
        })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct VerifyOptions {
    /// Overwrite one transition probability before the decay check; the
    /// check must then fail.
    pub corrupt_transition_table: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub level: Level,
    pub checks: Vec<Check>,
    pub elapsed_ms: f64,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(&c.summary_line());
            out.push('\n');
            for n in &c.notes {
                out.push_str(&format!("    note: {n}\n"));
            }
        }
        out.push_str(&format!(
            "{} level={} checks={} failed={} {:.1}s\n",
            if self.passed() { "PASS" } else { "FAIL" },
            self.level,
            self.checks.len(),
            self.checks.iter().filter(|c| !c.passed()).count(),
            self.elapsed_ms / 1000.0
        ));
        out
    }
}

/// Small sweeps whose records must satisfy the milestone ordering and be
/// reproducible.
fn smoke_check() -> Result<Check> {
    let start = Instant::now();
    let cfg = SweepConfig::from_toml(
        r#"
config_id = "smoke"
master_seed = 99
replications = 4
n_grid = [7, 15, 31]
timing = false
[problem]
kind = "cliff"
"#,
    )?;
    let a = run_sweep(&cfg)?;
    let b = run_sweep(&cfg)?;
    let ordered = a.iter().all(|r| r.milestones_ordered());
    Ok(Check {
        id: "S1".into(),
        title: "sweep smoke test".into(),
        master_seed: cfg.master_seed,
        elapsed_ms: start.elapsed().as_secs_f64() * 1000.0,
        findings: vec![
            Finding {
                name: "milestone order".into(),
                passed: ordered,
                detail: format!("{} records", a.len()),
            },
            Finding {
                name: "reproducible".into(),
                passed: a == b,
                detail: "two runs of the same config".into(),
            },
        ],
        notes: Vec::new(),
    })
}

pub fn verify_suite(level: Level) -> Result<Report> {
    verify_suite_with(level, VerifyOptions::default(), |_| {})
}

/// Runs the suite, handing each finished check to `progress`.
pub fn verify_suite_with(
    level: Level,
    options: VerifyOptions,
    mut progress: impl FnMut(&Check),
) -> Result<Report> {
    let start = Instant::now();
    let mut checks = Vec::new();
    let mut push = |c: Check| {
        progress(&c);
        checks.push(c);
    };
    push(experiments::p1(options.corrupt_transition_table)?);
    match level {
        Level::Fast => {
            push(experiments::p2(Scale::Fast)?);
            let t = Instant::now();
            let f = coupling_finding(20, 1000, 10)?;
            push(Check {
                id: "C1".into(),
                title: "QD/GSEMO coupling".into(),
                master_seed: 0,
                elapsed_ms: t.elapsed().as_secs_f64() * 1000.0,
                findings: vec![f],
                notes: Vec::new(),
            });
            push(smoke_check()?);
        }
        Level::Full => {
            push(experiments::p2(Scale::Full)?);
            push(experiments::e1(Scale::Full)?);
            push(experiments::e2(Scale::Full)?);
            push(experiments::e3(Scale::Full)?);
            push(experiments::e4(Scale::Full)?);
            push(experiments::e5(Scale::Full)?);
            push(experiments::e6(Scale::Full)?);
        }
    }
    Ok(Report {
        level,
        checks,
        elapsed_ms: start.elapsed().as_secs_f64() * 1000.0,
    })
}
