use crate::bitcore::RandomSource;
use crate::error::Result;
use crate::problems::{CoverageInstance, WeightedGraph};

/// A random coverage instance; set sizes default to `[|U|/8, |U|/4]`.
pub fn random_coverage(
    n: usize,
    universe: usize,
    r: usize,
    sizes: Option<(usize, usize)>,
    seed: u64,
) -> Result<CoverageInstance> {
    let (lo, hi) = sizes.unwrap_or((
        (universe / 8).max(1),
        (universe / 4).max((universe / 8).max(1)),
    ));
    CoverageInstance::random(n, universe, r, lo, hi, &mut RandomSource::new(seed, 0))
}

/// A random connected graph with `m` edges and weights a permutation of
/// `1..=m`.
pub fn random_graph(nodes: usize, m: usize, seed: u64) -> Result<WeightedGraph> {
    WeightedGraph::random_connected(nodes, m, &mut RandomSource::new(seed, 0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generated_instances_round_trip() {
        let c = random_coverage(12, 40, 3, None, 1).unwrap();
        assert_eq!(CoverageInstance::parse(&c.to_text()).unwrap(), c);
        assert!(c.sets().iter().all(|s| (5..=10).contains(&s.len())));
        let g = random_graph(9, 18, 2).unwrap();
        assert_eq!(WeightedGraph::parse(&g.to_edge_list()).unwrap(), g);
        assert_eq!(random_graph(9, 18, 2).unwrap(), g);
    }
}
