use crate::bitcore::Genotype;
use crate::error::{Error, Result};
use crate::features::FeatureSpace;
use crate::problems::Problem;

/// Largest genotype length for which per-cell optima are enumerated.
pub const CELL_OPTIMA_LIMIT: usize = 16;

/// Exact per-cell maximum fitness by scanning all `2^n` genotypes. Cells no
/// genotype maps to hold `-inf`.
pub fn cell_optima_bruteforce<P: Problem + ?Sized>(
    problem: &P,
    space: &FeatureSpace,
) -> Result<Vec<f64>> {
    let n = problem.dim();
    if n > CELL_OPTIMA_LIMIT {
        return Err(Error::TooLarge {
            n,
            limit: CELL_OPTIMA_LIMIT,
        });
    }
    if space.dim() != n {
        return Err(Error::LengthMismatch {
            expected: space.dim(),
            actual: n,
        });
    }
    let mut best = vec![f64::NEG_INFINITY; space.cell_count()];
    for mask in 0u64..1 << n {
        let x = Genotype::from_mask(n, mask)?;
        let c = space.cell_of(&x);
        best[c] = best[c].max(problem.evaluate(&x));
    }
    Ok(best)
}
