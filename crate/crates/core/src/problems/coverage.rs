//! Maximum coverage: a monotone submodular set function under a cardinality
//! constraint.
//!
//! File format: a header line `n |U| r`, then exactly `n` lines, line `i`
//! listing the space-separated element ids (in `0..|U|`) of set `i`. An
//! empty line is an empty set.

use std::fmt::Write as _;
use std::path::Path;

use super::{parse_fields, Problem};
use crate::bitcore::Genotype;
use crate::error::{Error, Result};
use crate::features::Archive;
use rand::seq::index::sample;
use rand::Rng;

/// `n` subsets of a universe `U` and the cardinality limit `r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverageInstance {
    universe: usize,
    sets: Vec<Vec<usize>>,
    r: usize,
    masks: Vec<Vec<u64>>,
}

impl CoverageInstance {
    pub fn new(universe: usize, sets: Vec<Vec<usize>>, r: usize) -> Result<Self> {
        if sets.is_empty() {
            return Err(Error::InvalidDimension(
                "ground set must be non-empty".into(),
            ));
        }
        if r == 0 {
            return Err(Error::InvalidParameter(
                "cardinality limit r must be >= 1".into(),
            ));
        }
        let words = universe.div_ceil(64).max(1);
        let mut masks = Vec::with_capacity(sets.len());
        for (i, s) in sets.iter().enumerate() {
            let mut m = vec![0u64; words];
            for &e in s {
                if e >= universe {
                    return Err(Error::InvalidParameter(format!(
                        "set {i} contains element {e} outside 0..{universe}"
                    )));
                }
                m[e / 64] |= 1 << (e % 64);
            }
            masks.push(m);
        }
        Ok(CoverageInstance {
            universe,
            sets,
            r,
            masks,
        })
    }

    /// Each set is a uniform subset of `U` whose size is uniform in
    /// `min_size..=max_size`.
    pub fn random<R: Rng + ?Sized>(
        n: usize,
        universe: usize,
        r: usize,
        min_size: usize,
        max_size: usize,
        rng: &mut R,
    ) -> Result<Self> {
        if min_size > max_size || max_size > universe {
            return Err(Error::InvalidParameter(format!(
                "set sizes {min_size}..={max_size} invalid for universe {universe}"
            )));
        }
        let sets = (0..n)
            .map(|_| {
                let size = rng.random_range(min_size..=max_size);
                let mut s = sample(rng, universe, size).into_vec();
                s.sort_unstable();
                s
            })
            .collect();
        Self::new(universe, sets, r)
    }

    pub fn ground_set_size(&self) -> usize {
        self.sets.len()
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }

    pub fn with_r(&self, r: usize) -> Result<Self> {
        Self::new(self.universe, self.sets.clone(), r)
    }

    /// `|∪_{i ∈ members} set_i|`.
    pub fn value_of<I: IntoIterator<Item = usize>>(&self, members: I) -> usize {
        let mut acc = vec![0u64; self.masks[0].len()];
        for i in members {
            for (a, b) in acc.iter_mut().zip(&self.masks[i]) {
                *a |= b;
            }
        }
        acc.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Gain of adding `item` to the union `covered` (as a word mask).
    pub(crate) fn marginal_gain(&self, covered: &[u64], item: usize) -> usize {
        covered
            .iter()
            .zip(&self.masks[item])
            .map(|(c, s)| (s & !c).count_ones() as usize)
            .sum()
    }

    pub(crate) fn absorb(&self, covered: &mut [u64], item: usize) {
        for (c, s) in covered.iter_mut().zip(&self.masks[item]) {
            *c |= s;
        }
    }

    pub(crate) fn empty_cover(&self) -> Vec<u64> {
        vec![0; self.masks[0].len()]
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
        let (hl, header) = lines
            .by_ref()
            .find(|(_, l)| !l.is_empty())
            .ok_or(Error::Parse {
                what: "coverage instance",
                line: 1,
                msg: "missing header".into(),
            })?;
        let h = parse_fields::<usize>(header, 3, "coverage instance", hl)?;
        let (n, universe, r) = (h[0], h[1], h[2]);
        let mut sets = Vec::with_capacity(n);
        for _ in 0..n {
            let (line, l) = lines.next().ok_or(Error::Parse {
                what: "coverage instance",
                line: hl,
                msg: format!("header announces {n} sets, found {}", sets.len()),
            })?;
            let set = l
                .split_whitespace()
                .map(|t| {
                    t.parse::<usize>().map_err(|_| Error::Parse {
                        what: "coverage instance",
                        line,
                        msg: format!("cannot parse {t:?}"),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            sets.push(set);
        }
        if let Some((line, _)) = lines.find(|(_, l)| !l.is_empty()) {
            return Err(Error::Parse {
                what: "coverage instance",
                line,
                msg: "trailing content after the last set".into(),
            });
        }
        Self::new(universe, sets, r)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{} {} {}\n", self.sets.len(), self.universe, self.r);
        for set in &self.sets {
            let line: Vec<String> = set.iter().map(ToString::to_string).collect();
            let _ = writeln!(s, "{}", line.join(" "));
        }
        s
    }
}

/// `f(x) = |∪_{i : x_i = 1} set_i|`.
pub fn coverage_value(inst: &CoverageInstance, x: &Genotype) -> Result<f64> {
    if x.len() != inst.ground_set_size() {
        return Err(Error::LengthMismatch {
            expected: inst.ground_set_size(),
            actual: x.len(),
        });
    }
    Ok(inst.value_of(x.iter_ones()) as f64)
}

/// The stored elite of maximum fitness among those with at most `r` ones.
pub fn best_feasible(archive: &Archive, r: usize) -> Option<(Genotype, f64)> {
    archive
        .iter()
        .map(|(_, e)| e)
        .filter(|e| e.genotype.count_ones() <= r)
        .max_by(|a, b| a.fitness.total_cmp(&b.fitness))
        .map(|e| (e.genotype.clone(), e.fitness))
}

/// QD's view of a coverage instance: `f` itself is the fitness on all of
/// `{0,1}^n`; the constraint only filters the reported solution.
#[derive(Clone, Debug)]
pub struct CoverageProblem {
    inst: CoverageInstance,
}

impl CoverageProblem {
    pub fn new(inst: CoverageInstance) -> Self {
        CoverageProblem { inst }
    }

    pub fn instance(&self) -> &CoverageInstance {
        &self.inst
    }
}

impl Problem for CoverageProblem {
    fn name(&self) -> String {
        "coverage".into()
    }

    fn dim(&self) -> usize {
        self.inst.ground_set_size()
    }

    fn evaluate(&self, x: &Genotype) -> f64 {
        self.inst.value_of(x.iter_ones()) as f64
    }

    fn cardinality_limit(&self) -> Option<usize> {
        Some(self.inst.r)
    }
}
