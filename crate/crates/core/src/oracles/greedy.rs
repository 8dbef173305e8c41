use crate::error::{Error, Result};
use crate::problems::CoverageInstance;

/// A chosen subset of the ground set and its coverage value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Selection {
    pub items: Vec<usize>,
    pub value: usize,
}

/// The deterministic greedy algorithm: `r` rounds, each adding the item
/// with the largest marginal gain (lowest index on ties).
pub fn greedy_submodular(inst: &CoverageInstance) -> Selection {
    let n = inst.ground_set_size();
    let mut covered = inst.empty_cover();
    let mut chosen = vec![false; n];
    let mut items = Vec::with_capacity(inst.r());
    for _ in 0..inst.r().min(n) {
        let (best, _) = (0..n)
            .filter(|&i| !chosen[i])
            .map(|i| (i, inst.marginal_gain(&covered, i)))
            .fold((usize::MAX, 0usize), |acc, (i, g)| {
                if acc.0 == usize::MAX || g > acc.1 {
                    (i, g)
                } else {
                    acc
                }
            });
        chosen[best] = true;
        inst.absorb(&mut covered, best);
        items.push(best);
    }
    let value = covered.iter().map(|w| w.count_ones() as usize).sum();
    Selection { items, value }
}

/// Largest ground set the exhaustive maximiser accepts.
pub const EXHAUSTIVE_LIMIT: usize = 24;

/// `max_{|A| <= r} f(A)` by enumerating every subset.
pub fn max_coverage_exhaustive(inst: &CoverageInstance) -> Result<Selection> {
    let n = inst.ground_set_size();
    if n > EXHAUSTIVE_LIMIT {
        return Err(Error::TooLarge {
            n,
            limit: EXHAUSTIVE_LIMIT,
        });
    }
    let mut best = Selection {
        items: Vec::new(),
        value: 0,
    };
    for mask in 0u32..1 << n {
        if mask.count_ones() as usize > inst.r() {
            continue;
        }
        let items: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let value = inst.value_of(items.iter().copied());
        if value > best.value {
            best = Selection { items, value };
        }
    }
    Ok(best)
}
