use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bitcore::RandomSource;

pub fn mean(xs: &[f64]) -> Option<f64> {
    (!xs.is_empty()).then(|| xs.iter().sum::<f64>() / xs.len() as f64)
}

pub fn median(xs: &[f64]) -> Option<f64> {
    if xs.is_empty() {
        return None;
    }
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let h = v.len() / 2;
    Some(if v.len() % 2 == 1 {
        v[h]
    } else {
        (v[h - 1] + v[h]) / 2.0
    })
}

/// Unbiased sample standard deviation.
pub fn std_dev(xs: &[f64]) -> Option<f64> {
    let m = mean(xs)?;
    (xs.len() >= 2)
        .then(|| (xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64).sqrt())
}

/// Two-sided confidence interval.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub low: f64,
    pub high: f64,
}

impl Interval {
    pub fn contains(&self, x: f64) -> bool {
        self.low <= x && x <= self.high
    }

    pub fn overlaps(&self, other: &Interval) -> bool {
        self.low <= other.high && other.low <= self.high
    }
}

pub const BOOTSTRAP_RESAMPLES: usize = 2000;

/// Percentile bootstrap CI for the mean at `level` (e.g. 0.95), with a
/// fixed resampling seed so reports are reproducible.
pub fn bootstrap_mean_ci(xs: &[f64], level: f64, resamples: usize, seed: u64) -> Option<Interval> {
    if xs.is_empty() || resamples == 0 {
        return None;
    }
    let mut rng = RandomSource::new(seed, 0);
    let n = xs.len();
    let mut means: Vec<f64> = (0..resamples)
        .map(|_| (0..n).map(|_| xs[rng.random_range(0..n)]).sum::<f64>() / n as f64)
        .collect();
    means.sort_by(f64::total_cmp);
    let alpha = (1.0 - level) / 2.0;
    let at = |q: f64| means[((q * resamples as f64).floor() as usize).min(resamples - 1)];
    Some(Interval {
        low: at(alpha),
        high: at(1.0 - alpha),
    })
}

/// Least-squares slope and intercept of `y` on `x`.
pub fn ols(x: &[f64], y: &[f64]) -> Option<(f64, f64)> {
    if x.len() != y.len() || x.len() < 2 {
        return None;
    }
    let mx = mean(x)?;
    let my = mean(y)?;
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    Some((slope, my - slope * mx))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_statistics() {
        assert_eq!(mean(&[1.0, 2.0, 6.0]), Some(3.0));
        assert_eq!(median(&[5.0, 1.0, 2.0]), Some(2.0));
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), Some(2.5));
        assert_eq!(mean(&[]), None);
        assert!(
            (std_dev(&[2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0]).unwrap() - 2.138089935).abs()
                < 1e-8
        );
    }

    #[test]
    fn bootstrap_brackets_mean() {
        let xs: Vec<f64> = (0..100).map(|i| i as f64).collect();
        let ci = bootstrap_mean_ci(&xs, 0.95, 2000, 1).unwrap();
        assert!(ci.contains(49.5));
        assert!(ci.high - ci.low < 20.0 && ci.high - ci.low > 5.0);
        assert_eq!(ci, bootstrap_mean_ci(&xs, 0.95, 2000, 1).unwrap());
    }

    #[test]
    fn constant_sample_has_degenerate_ci() {
        let ci = bootstrap_mean_ci(&[3.0; 10], 0.95, 100, 0).unwrap();
        assert_eq!((ci.low, ci.high), (3.0, 3.0));
    }

    #[test]
    fn ols_recovers_line() {
        let x = [1.0, 2.0, 3.0, 4.0];
        let y: Vec<f64> = x.iter().map(|v| 2.0 * v - 1.0).collect();
        let (s, c) = ols(&x, &y).unwrap();
        assert!((s - 2.0).abs() < 1e-12 && (c + 1.0).abs() < 1e-12);
    }

    #[test]
    fn intervals_overlap() {
        let a = Interval {
            low: 0.0,
            high: 1.0,
        };
        assert!(a.overlaps(&Interval {
            low: 1.0,
            high: 2.0
        }));
        assert!(!a.overlaps(&Interval {
            low: 1.5,
            high: 2.0
        }));
    }
}
