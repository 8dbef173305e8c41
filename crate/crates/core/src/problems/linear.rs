use rand::Rng;

use super::Problem;
use crate::bitcore::Genotype;
use crate::error::{Error, Result};
use crate::features::FeatureSpace;

/// `Σ w_i x_i`. Weights must match the genotype length.
pub fn linear_monotone(weights: &[f64], x: &Genotype) -> Result<f64> {
    if weights.len() != x.len() {
        return Err(Error::LengthMismatch {
            expected: weights.len(),
            actual: x.len(),
        });
    }
    if let Some(w) = weights.iter().find(|w| w.is_nan() || **w <= 0.0) {
        return Err(Error::InvalidParameter(format!("non-positive weight {w}")));
    }
    Ok(x.iter_ones().map(|i| weights[i]).sum())
}

/// A linear function with strictly positive weights; monotone, with unique
/// optimum `1^n`.
#[derive(Clone, Debug)]
pub struct LinearMonotone {
    weights: Vec<f64>,
    /// `top[j]`: sum of the `j` largest weights.
    top: Vec<f64>,
}

impl LinearMonotone {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidDimension("weights must be non-empty".into()));
        }
        if let Some(w) = weights.iter().find(|w| !(**w > 0.0 && w.is_finite())) {
            return Err(Error::InvalidParameter(format!("non-positive weight {w}")));
        }
        let mut sorted = weights.clone();
        sorted.sort_by(|a, b| b.total_cmp(a));
        let mut top = Vec::with_capacity(sorted.len() + 1);
        top.push(0.0);
        let mut acc = 0.0;
        for w in sorted {
            acc += w;
            top.push(acc);
        }
        Ok(LinearMonotone { weights, top })
    }

    /// Weights drawn uniformly from `[1, 2)`.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        Self::new((0..n).map(|_| rng.random_range(1.0..2.0)).collect())
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

impl Problem for LinearMonotone {
    fn name(&self) -> String {
        "linear".into()
    }

    fn dim(&self) -> usize {
        self.weights.len()
    }

    fn evaluate(&self, x: &Genotype) -> f64 {
        x.iter_ones().map(|i| self.weights[i]).sum()
    }

    fn is_global_opt(&self, x: &Genotype, _fitness: f64) -> Option<bool> {
        Some(x.count_zeros() == 0)
    }

    /// A cell with one-counts `[lo, hi]` is maximised by the `hi` heaviest
    /// positions.
    fn cell_optima(&self, space: &FeatureSpace) -> Option<Vec<f64>> {
        let n = self.weights.len();
        if space.dim() != n {
            return None;
        }
        (0..space.cell_count())
            .map(|c| space.ones_range(c).map(|(_, hi)| self.top[hi.min(n)]))
            .collect()
    }
}
