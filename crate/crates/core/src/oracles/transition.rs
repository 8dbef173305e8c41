//! Exact one-count transition probabilities of standard bit mutation.
//!
//! A parent with `i` ones becomes an offspring with `j` ones when it flips
//! `a` one-bits and `b = a + j - i` zero-bits, so
//!
//! ```text
//! p(i, j) = Σ_a C(i, a) C(n-i, b) p^(a+b) (1-p)^(n-a-b)
//! ```
//!
//! Terms span hundreds of orders of magnitude for moderate `n`, so every
//! value is carried as a natural logarithm and summed with log-sum-exp.

use crate::error::{Error, Result};

/// `ln k!` for `k = 0..=n`.
#[derive(Clone, Debug)]
struct LnFactorials(Vec<f64>);

impl LnFactorials {
    fn new(n: usize) -> Self {
        let mut t = Vec::with_capacity(n + 1);
        let mut acc = 0.0f64;
        t.push(0.0);
        for k in 1..=n {
            acc += (k as f64).ln();
            t.push(acc);
        }
        LnFactorials(t)
    }

    fn ln_choose(&self, n: usize, k: usize) -> f64 {
        debug_assert!(k <= n);
        self.0[n] - self.0[k] - self.0[n - k]
    }
}

fn log_sum_exp(terms: &[f64]) -> f64 {
    let max = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + terms.iter().map(|t| (t - max).exp()).sum::<f64>().ln()
}

fn validate(n: usize, p_m: f64) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidDimension("n must be >= 1".into()));
    }
    if !(p_m > 0.0 && p_m < 1.0) {
        return Err(Error::InvalidProbability(p_m));
    }
    Ok(())
}

fn ln_entry(fact: &LnFactorials, n: usize, ln_p: f64, ln_q: f64, i: usize, j: usize) -> f64 {
    let a_min = i.saturating_sub(j);
    let mut terms = Vec::new();
    for a in a_min..=i {
        let b = a + j - i;
        if b > n - i {
            break;
        }
        let flips = (a + b) as f64;
        terms.push(
            fact.ln_choose(i, a)
                + fact.ln_choose(n - i, b)
                + flips * ln_p
                + (n - a - b) as f64 * ln_q,
        );
    }
    log_sum_exp(&terms)
}

/// `ln p(i, j)`.
pub fn ln_transition_prob(n: usize, p_m: f64, i: usize, j: usize) -> Result<f64> {
    validate(n, p_m)?;
    if i > n || j > n {
        return Err(Error::InvalidParameter(format!(
            "one-counts ({i}, {j}) out of range 0..={n}"
        )));
    }
    let fact = LnFactorials::new(n);
    Ok(ln_entry(&fact, n, p_m.ln(), (-p_m).ln_1p(), i, j))
}

/// Probability that standard bit mutation with rate `p_m` turns a parent
/// with `i` ones into an offspring with `j` ones.
pub fn transition_prob(n: usize, p_m: f64, i: usize, j: usize) -> Result<f64> {
    ln_transition_prob(n, p_m, i, j).map(f64::exp)
}

/// All `(n+1)^2` transition probabilities, stored as logarithms.
#[derive(Clone, Debug)]
pub struct TransitionTable {
    n: usize,
    p_m: f64,
    ln: Vec<f64>,
}

impl TransitionTable {
    pub fn new(n: usize, p_m: f64) -> Result<Self> {
        validate(n, p_m)?;
        let fact = LnFactorials::new(n);
        let (ln_p, ln_q) = (p_m.ln(), (-p_m).ln_1p());
        let mut ln = Vec::with_capacity((n + 1) * (n + 1));
        for i in 0..=n {
            for j in 0..=n {
                ln.push(ln_entry(&fact, n, ln_p, ln_q, i, j));
            }
        }
        Ok(TransitionTable { n, p_m, ln })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p_m(&self) -> f64 {
        self.p_m
    }

    pub fn ln_prob(&self, i: usize, j: usize) -> f64 {
        self.ln[i * (self.n + 1) + j]
    }

    pub fn prob(&self, i: usize, j: usize) -> f64 {
        self.ln_prob(i, j).exp()
    }

    pub fn row_sum(&self, i: usize) -> f64 {
        (0..=self.n).map(|j| self.prob(i, j)).sum()
    }

    /// Largest `|Σ_j p(i, j) - 1|` over all rows.
    pub fn max_row_error(&self) -> f64 {
        (0..=self.n)
            .map(|i| (self.row_sum(i) - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// Overwrites one entry. Exists so checks can be shown to detect a
    /// wrong table.
    pub fn set_prob(&mut self, i: usize, j: usize, p: f64) {
        self.ln[i * (self.n + 1) + j] = p.ln();
    }

    /// Whether `p(i, j-k) <= (i p_m / (1 - p_m))^k p(i, j)` holds for the
    /// stored values. Requires `j < i <= n` and `k <= j`.
    pub fn check_jump_decay(&self, i: usize, j: usize, k: usize) -> Result<bool> {
        if !(j < i && i <= self.n && k <= j) {
            return Err(Error::InvalidParameter(format!(
                "jump decay needs j < i <= n and k <= j, got i={i}, j={j}, k={k}, n={}",
                self.n
            )));
        }
        let lhs = self.ln_prob(i, j - k);
        let factor = (i as f64).ln() + self.p_m.ln() - (-self.p_m).ln_1p();
        let rhs = k as f64 * factor + self.ln_prob(i, j);
        Ok(lhs <= rhs + 1e-12 * rhs.abs().max(1.0))
    }

    /// Every admissible `(i, j, k)` for which the decay inequality fails.
    pub fn decay_violations(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for i in 1..=self.n {
            for j in 0..i {
                for k in 0..=j {
                    if !self.check_jump_decay(i, j, k).expect("admissible triple") {
                        out.push((i, j, k));
                    }
                }
            }
        }
        out
    }
}

/// Exact check of the jump-decay inequality for a single triple.
pub fn check_jump_decay(n: usize, p_m: f64, i: usize, j: usize, k: usize) -> Result<bool> {
    TransitionTable::new(n, p_m)?.check_jump_decay(i, j, k)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Enumerates every flip mask; independent of the binomial formula.
    fn by_enumeration(n: usize, p: f64, i: usize, j: usize) -> f64 {
        // parent: first i bits set
        let mut total = 0.0;
        for mask in 0u32..1 << n {
            let flips = mask.count_ones() as i32;
            let ones_flipped = (mask & ((1 << i) - 1)).count_ones() as usize;
            let zeros_flipped = flips as usize - ones_flipped;
            if i - ones_flipped + zeros_flipped == j {
                total += p.powi(flips) * (1.0 - p).powi(n as i32 - flips);
            }
        }
        total
    }

    #[test]
    fn two_bit_example() {
        assert!((transition_prob(2, 0.5, 1, 0).unwrap() - 0.25).abs() < 1e-15);
        assert!((transition_prob(2, 0.5, 1, 1).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn matches_mask_enumeration() {
        for n in 1..=8 {
            for p in [0.1, 1.0 / n as f64, 0.5, 0.9] {
                if p >= 1.0 {
                    continue;
                }
                let t = TransitionTable::new(n, p).unwrap();
                for i in 0..=n {
                    for j in 0..=n {
                        let e = by_enumeration(n, p, i, j);
                        assert!((t.prob(i, j) - e).abs() < 1e-13, "n={n} p={p} i={i} j={j}");
                    }
                }
            }
        }
    }

    #[test]
    fn rows_sum_to_one() {
        let t = TransitionTable::new(50, 1.0 / 50.0).unwrap();
        assert!(t.max_row_error() <= 1e-12, "{}", t.max_row_error());
    }

    #[test]
    fn no_underflow_for_large_n() {
        let t = TransitionTable::new(200, 1.0 / 200.0).unwrap();
        assert!(t.ln_prob(200, 0).is_finite());
        assert!(t.ln_prob(200, 0) < -1000.0);
        assert!(t.max_row_error() <= 1e-12);
    }

    #[test]
    fn decay_k_zero_always_holds() {
        for i in 1..=10 {
            for j in 0..i {
                assert!(check_jump_decay(10, 0.1, i, j, 0).unwrap());
            }
        }
    }

    #[test]
    fn decay_holds_exhaustively() {
        for n in [10, 30] {
            let t = TransitionTable::new(n, 1.0 / n as f64).unwrap();
            assert!(t.decay_violations().is_empty());
        }
    }

    #[test]
    fn corrupted_entry_is_detected() {
        let mut t = TransitionTable::new(10, 0.1).unwrap();
        t.set_prob(5, 1, 0.5);
        assert!(!t.check_jump_decay(5, 3, 2).unwrap());
        assert!(!t.decay_violations().is_empty());
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(transition_prob(5, 0.0, 1, 1).is_err());
        assert!(transition_prob(5, 0.5, 6, 1).is_err());
        assert!(check_jump_decay(10, 0.1, 3, 3, 0).is_err());
        assert!(check_jump_decay(10, 0.1, 5, 2, 3).is_err());
    }
}
