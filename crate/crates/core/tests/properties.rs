use proptest::prelude::*;

use qdlab::bitcore::{hamming, Genotype};
use qdlab::features::{Archive, FeatureSpace, OfferOutcome};
use qdlab::oracles::TransitionTable;
use qdlab::problems::CoverageInstance;

fn genotype(max_len: usize) -> impl Strategy<Value = Genotype> {
    prop::collection::vec(any::<bool>(), 1..=max_len).prop_map(|b| Genotype::from_bits(&b).unwrap())
}

proptest! {
    #[test]
    fn flips_update_counts_and_distance(x in genotype(200), seed in any::<u64>()) {
        let n = x.len();
        let flips: Vec<usize> = (0..n).filter(|i| (seed.rotate_left(*i as u32) ^ *i as u64).is_multiple_of(3)).collect();
        let y = x.with_flips(&flips);
        prop_assert_eq!(y.count_ones(), y.recount());
        prop_assert_eq!(hamming(&x, &y).unwrap(), flips.len());
        prop_assert_eq!(y.with_flips(&flips), x.clone());
        prop_assert_eq!(x.count_ones() + x.count_zeros(), n);
    }

    #[test]
    fn text_round_trip(x in genotype(130)) {
        let back: Genotype = x.to_string().parse().unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn cells_are_monotone_in_unitation(n in 1usize..120, k_seed in any::<usize>(), x in genotype(120)) {
        let divisors: Vec<usize> = (1..=n + 1).filter(|k| (n + 1).is_multiple_of(*k)).collect();
        let k = divisors[k_seed % divisors.len()];
        let space = FeatureSpace::number_of_ones(n, k).unwrap();
        prop_assert_eq!(space.cell_count(), (n + 1) / k);
        let bits: Vec<bool> = x.to_bits().into_iter().cycle().take(n).collect();
        let x = Genotype::from_bits(&bits).unwrap();
        let c = space.cell_index(&x).unwrap();
        prop_assert!(c < space.cell_count());
        prop_assert_eq!(c, x.count_ones() / k);
    }

    #[test]
    fn archive_keeps_one_best_elite_per_cell(
        offers in prop::collection::vec((0usize..12, -5i32..5), 1..300)
    ) {
        let mut archive = Archive::new(12);
        let mut best = [None::<f64>; 12];
        for (i, (cell, f)) in offers.into_iter().enumerate() {
            let f = f as f64;
            let y = Genotype::from_mask(16, i as u64).unwrap();
            let outcome = archive.offer_at(cell, y.clone(), f);
            match best[cell] {
                None => prop_assert_eq!(outcome, OfferOutcome::NewCell),
                Some(b) if f >= b => prop_assert_eq!(outcome, OfferOutcome::Replaced),
                Some(_) => prop_assert_eq!(outcome, OfferOutcome::Rejected),
            }
            if outcome.accepted() {
                best[cell] = Some(f);
                prop_assert_eq!(&archive.get(cell).unwrap().genotype, &y);
            }
            let covered = archive.covered_cells();
            prop_assert_eq!(covered.len(), best.iter().flatten().count());
            let mut sorted = covered.to_vec();
            sorted.sort_unstable();
            sorted.dedup();
            prop_assert_eq!(sorted.len(), covered.len());
            for (c, b) in best.iter().enumerate() {
                prop_assert_eq!(archive.get(c).map(|e| e.fitness), *b);
            }
        }
    }

    #[test]
    fn transition_rows_are_distributions(n in 1usize..=200, p in 0.001f64..0.5) {
        let t = TransitionTable::new(n, p).unwrap();
        prop_assert!(t.max_row_error() <= 1e-12);
        for i in [0, n / 2, n] {
            for j in 0..=n {
                let v = t.prob(i, j);
                prop_assert!((0.0..=1.0).contains(&v));
            }
        }
    }

    #[test]
    fn coverage_value_is_monotone(
        sets in prop::collection::vec(prop::collection::btree_set(0usize..20, 0..8), 1..12),
        picks in any::<u64>(),
        extra in 0usize..12,
    ) {
        let n = sets.len();
        let inst = CoverageInstance::new(20, sets.into_iter().map(|s| s.into_iter().collect()).collect(), 2).unwrap();
        let chosen: Vec<usize> = (0..n).filter(|i| picks >> i & 1 == 1).collect();
        let mut more = chosen.clone();
        more.push(extra % n);
        prop_assert!(inst.value_of(chosen.iter().copied()) <= inst.value_of(more.iter().copied()));
        prop_assert!(inst.value_of(chosen.iter().copied()) <= 20);
    }
}
