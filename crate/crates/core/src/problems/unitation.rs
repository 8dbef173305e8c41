use serde::{Deserialize, Serialize};

use super::{cell_max_of_profile, Problem};
use crate::bitcore::Genotype;
use crate::error::{Error, Result};
use crate::features::FeatureSpace;

/// `OneMax(x) = |x|_1`.
pub fn onemax(x: &Genotype) -> f64 {
    x.count_ones() as f64
}

/// Functions whose value depends only on `|x|_1`.
///
/// With `u = |x|_1`:
/// - `OneMax`: `u`
/// - `Jump { gap }`: `gap + u` if `u <= n - gap` or `u = n`, else `n - u`
/// - `Cliff { depth }`: `u` if `u <= n - depth`, else `u - depth + 1/2`
/// - `Trap`: `n + 1` if `u = 0`, else `u`
/// - `Constant`: `0`
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum UnitationKind {
    OneMax,
    Jump { gap: usize },
    Cliff { depth: usize },
    Trap,
    Constant,
}

/// A function of unitation, tabulated over `0..=n` ones.
#[derive(Clone, Debug)]
pub struct Unitation {
    kind: UnitationKind,
    profile: Vec<f64>,
    best: f64,
}

impl Unitation {
    pub fn new(kind: UnitationKind, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDimension("n must be >= 1".into()));
        }
        match kind {
            UnitationKind::Jump { gap } if gap < 2 || 2 * gap > n => {
                return Err(Error::InvalidParameter(format!(
                    "jump gap {gap} must satisfy 2 <= gap <= n/2 (n = {n})"
                )));
            }
            UnitationKind::Cliff { depth } if depth == 0 || depth >= n => {
                return Err(Error::InvalidParameter(format!(
                    "cliff depth {depth} must satisfy 1 <= depth < n (n = {n})"
                )));
            }
            _ => {}
        }
        let profile: Vec<f64> = (0..=n).map(|u| value_at(kind, n, u)).collect();
        let best = profile.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Ok(Unitation {
            kind,
            profile,
            best,
        })
    }

    pub fn onemax(n: usize) -> Result<Self> {
        Self::new(UnitationKind::OneMax, n)
    }

    /// Cliff with the customary depth `⌈n/3⌉`.
    pub fn cliff(n: usize) -> Result<Self> {
        Self::new(
            UnitationKind::Cliff {
                depth: n.div_ceil(3).max(1),
            },
            n,
        )
    }

    pub fn kind(&self) -> UnitationKind {
        self.kind
    }

    /// `f` as a function of the number of ones.
    pub fn profile(&self) -> &[f64] {
        &self.profile
    }

    pub fn optimum(&self) -> f64 {
        self.best
    }

    pub fn value(&self, x: &Genotype) -> f64 {
        self.profile[x.count_ones()]
    }
}

fn value_at(kind: UnitationKind, n: usize, u: usize) -> f64 {
    match kind {
        UnitationKind::OneMax => u as f64,
        UnitationKind::Jump { gap } => {
            if u <= n - gap || u == n {
                (gap + u) as f64
            } else {
                (n - u) as f64
            }
        }
        UnitationKind::Cliff { depth } => {
            if u <= n - depth {
                u as f64
            } else {
                u as f64 - depth as f64 + 0.5
            }
        }
        UnitationKind::Trap => {
            if u == 0 {
                (n + 1) as f64
            } else {
                u as f64
            }
        }
        UnitationKind::Constant => 0.0,
    }
}

impl Problem for Unitation {
    fn name(&self) -> String {
        match self.kind {
            UnitationKind::OneMax => "onemax".into(),
            UnitationKind::Jump { gap } => format!("jump{gap}"),
            UnitationKind::Cliff { depth } => format!("cliff{depth}"),
            UnitationKind::Trap => "trap".into(),
            UnitationKind::Constant => "constant".into(),
        }
    }

    fn dim(&self) -> usize {
        self.profile.len() - 1
    }

    #[inline]
    fn evaluate(&self, x: &Genotype) -> f64 {
        self.profile[x.count_ones()]
    }

    fn is_global_opt(&self, _x: &Genotype, fitness: f64) -> Option<bool> {
        Some(fitness >= self.best)
    }

    fn cell_optima(&self, space: &FeatureSpace) -> Option<Vec<f64>> {
        cell_max_of_profile(&self.profile, space)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_genotypes(n: usize) -> impl Iterator<Item = Genotype> {
        (0..1u64 << n).map(move |m| Genotype::from_mask(n, m).unwrap())
    }

    #[test]
    fn onemax_examples() {
        assert_eq!(onemax(&Genotype::zeros(5).unwrap()), 0.0);
        assert_eq!(onemax(&Genotype::ones(5).unwrap()), 5.0);
        assert_eq!(onemax(&"1010".parse().unwrap()), 2.0);
    }

    #[test]
    fn trap_optimum_is_all_zeros() {
        for n in 1..=12 {
            let f = Unitation::new(UnitationKind::Trap, n).unwrap();
            for x in all_genotypes(n) {
                let v = f.evaluate(&x);
                match x.count_ones() {
                    0 => assert_eq!(v, (n + 1) as f64),
                    u if u == n => assert_eq!(v, n as f64),
                    _ => assert!(v < n as f64),
                }
            }
        }
    }

    #[test]
    fn jump_unique_maximum_at_all_ones() {
        for n in 4..=12 {
            for gap in 2..=n / 2 {
                let f = Unitation::new(UnitationKind::Jump { gap }, n).unwrap();
                let best: Vec<Genotype> = all_genotypes(n)
                    .filter(|x| f.evaluate(x) >= f.optimum())
                    .collect();
                assert_eq!(best, vec![Genotype::ones(n).unwrap()]);
                assert_eq!(f.optimum(), (n + gap) as f64);
            }
        }
    }

    #[test]
    fn cliff_unique_maximum_at_all_ones() {
        for n in 3..=12 {
            let f = Unitation::cliff(n).unwrap();
            let best: Vec<Genotype> = all_genotypes(n)
                .filter(|x| f.evaluate(x) >= f.optimum())
                .collect();
            assert_eq!(best, vec![Genotype::ones(n).unwrap()]);
        }
    }

    #[test]
    fn every_kind_depends_only_on_unitation() {
        for n in 4..=12 {
            let kinds = [
                UnitationKind::OneMax,
                UnitationKind::Jump { gap: 2 },
                UnitationKind::Cliff { depth: 1 },
                UnitationKind::Trap,
                UnitationKind::Constant,
            ];
            for kind in kinds {
                let f = Unitation::new(kind, n).unwrap();
                let mut by_ones = vec![None; n + 1];
                for x in all_genotypes(n) {
                    let v = f.evaluate(&x);
                    let slot = &mut by_ones[x.count_ones()];
                    match slot {
                        None => *slot = Some(v),
                        Some(prev) => assert_eq!(*prev, v, "{kind:?} n={n}"),
                    }
                }
            }
        }
    }

    #[test]
    fn invalid_parameters() {
        assert!(Unitation::new(UnitationKind::Jump { gap: 1 }, 10).is_err());
        assert!(Unitation::new(UnitationKind::Jump { gap: 6 }, 10).is_err());
        assert!(Unitation::new(UnitationKind::Cliff { depth: 10 }, 10).is_err());
        assert!(Unitation::new(UnitationKind::OneMax, 0).is_err());
    }

    #[test]
    fn analytic_cell_optima() {
        let f = Unitation::onemax(7).unwrap();
        let sp = FeatureSpace::number_of_ones(7, 1).unwrap();
        assert_eq!(
            f.cell_optima(&sp).unwrap(),
            (0..=7).map(|i| i as f64).collect::<Vec<_>>()
        );
        let sp2 = FeatureSpace::number_of_ones(7, 2).unwrap();
        assert_eq!(f.cell_optima(&sp2).unwrap(), vec![1.0, 3.0, 5.0, 7.0]);
        let trap = Unitation::new(UnitationKind::Trap, 7).unwrap();
        assert_eq!(trap.cell_optima(&sp).unwrap()[0], 8.0);
        let single = FeatureSpace::number_of_ones(7, 8).unwrap();
        assert_eq!(trap.cell_optima(&single).unwrap(), vec![8.0]);
    }
}
