//! A laboratory for the runtime behaviour of a MAP-Elites style
//! quality-diversity algorithm and of GSEMO on pseudo-Boolean and graph
//! problems.
//!
//! - [`bitcore`]: bit-string genotypes, standard bit mutation, seeded RNG.
//! - [`features`]: number-of-ones and connected-components feature spaces,
//!   and the elite [`Archive`](features::Archive).
//! - [`problems`]: OneMax and other functions of unitation, positive linear
//!   functions, maximum coverage, minimum spanning trees.
//! - [`engines`]: the QD loop and GSEMO, with milestone tracking.
//! - [`oracles`]: exact transition probabilities, greedy and exhaustive
//!   maximisers, Kruskal, closed-form bound evaluators.
//! - [`lab`]: sweeps, statistics, scaling fits, CSV/JSON output and the
//!   verification suite.
//!
//! ```
//! use qdlab::bitcore::RandomSource;
//! use qdlab::engines::{qd_run, MilestoneTargets, StopCondition, Trigger};
//! use qdlab::features::FeatureSpace;
//! use qdlab::problems::Unitation;
//!
//! let onemax = Unitation::onemax(15)?;
//! let space = FeatureSpace::number_of_ones(15, 1)?;
//! let targets = MilestoneTargets::resolve(&onemax, &space);
//! let stop = StopCondition::budget(10_000_000).on(Trigger::CoveredAll);
//! let trace = qd_run(&onemax, &space, 1.0 / 15.0, &stop, targets, RandomSource::new(42, 0))?;
//! assert!(trace.t_cover.is_some());
//! // With granularity 1, covering every cell of OneMax covers it optimally.
//! assert_eq!(trace.t_cover, trace.t_copt);
//! # Ok::<(), qdlab::Error>(())
//! ```

pub mod bitcore;
pub mod engines;
mod error;
pub mod features;
pub mod lab;
pub mod oracles;
pub mod problems;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/genotypes.md")]
    mod genotypes {}
    #[doc = include_str!("../../../book/src/feature-spaces.md")]
    mod feature_spaces {}
    #[doc = include_str!("../../../book/src/cover-time.md")]
    mod cover_time {}
    #[doc = include_str!("../../../book/src/transitions.md")]
    mod transitions {}
    #[doc = include_str!("../../../book/src/gsemo.md")]
    mod gsemo {}
    #[doc = include_str!("../../../book/src/submodular.md")]
    mod submodular {}
    #[doc = include_str!("../../../book/src/mst.md")]
    mod mst {}
    #[doc = include_str!("../../../book/src/experiments.md")]
    mod experiments {}
}
