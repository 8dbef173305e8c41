use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::bitcore::{Genotype, RandomSource};
use crate::features::FeatureSpace;

/// A stored solution and its fitness.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Elite {
    pub genotype: Genotype,
    pub fitness: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OfferOutcome {
    /// The target cell was empty.
    NewCell,
    /// The newcomer was at least as fit as the incumbent and replaced it.
    Replaced,
    Rejected,
}

impl OfferOutcome {
    pub fn accepted(self) -> bool {
        !matches!(self, OfferOutcome::Rejected)
    }
}

/// The MAP-Elites map: at most one elite per cell, maximising fitness.
///
/// Cells never become empty again, so the covered-cell list is append-only
/// and a uniformly random covered cell is one index draw.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Archive {
    cells: Vec<Option<Elite>>,
    covered: Vec<usize>,
}

impl Archive {
    pub fn new(cell_count: usize) -> Self {
        Archive {
            cells: vec![None; cell_count],
            covered: Vec::new(),
        }
    }

    pub fn for_space(space: &FeatureSpace) -> Self {
        Self::new(space.cell_count())
    }

    pub fn cell_count(&self) -> usize {
        self.cells.len()
    }

    /// Number of non-empty cells.
    pub fn covered(&self) -> usize {
        self.covered.len()
    }

    pub fn is_fully_covered(&self) -> bool {
        self.covered.len() == self.cells.len()
    }

    /// Covered cell indices in order of first coverage.
    pub fn covered_cells(&self) -> &[usize] {
        &self.covered
    }

    pub fn get(&self, cell: usize) -> Option<&Elite> {
        self.cells.get(cell).and_then(Option::as_ref)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Elite)> {
        self.cells
            .iter()
            .enumerate()
            .filter_map(|(i, c)| c.as_ref().map(|e| (i, e)))
    }

    /// Offers `y` to the cell `space` assigns it. Ties go to the newcomer.
    pub fn offer(&mut self, space: &FeatureSpace, y: Genotype, fitness: f64) -> OfferOutcome {
        let cell = space.cell_of(&y);
        self.offer_at(cell, y, fitness)
    }

    /// Offers `y` to an already computed `cell`; the caller guarantees the
    /// cell is the one `y` maps to.
    pub fn offer_at(&mut self, cell: usize, y: Genotype, fitness: f64) -> OfferOutcome {
        match &mut self.cells[cell] {
            slot @ None => {
                *slot = Some(Elite {
                    genotype: y,
                    fitness,
                });
                self.covered.push(cell);
                OfferOutcome::NewCell
            }
            Some(z) if fitness >= z.fitness => {
                z.genotype = y;
                z.fitness = fitness;
                OfferOutcome::Replaced
            }
            Some(_) => OfferOutcome::Rejected,
        }
    }

    /// Picks an elite uniformly among covered cells.
    ///
    /// # Panics
    /// If the archive is empty.
    pub fn sample_parent(&self, rng: &mut RandomSource) -> &Elite {
        let slot = self.sample_slot(rng);
        self.parent_at(slot)
    }

    /// Draws a slot in `0..covered()`.
    pub fn sample_slot<R: RngCore + ?Sized>(&self, rng: &mut R) -> usize {
        assert!(
            !self.covered.is_empty(),
            "sample_parent on an empty archive"
        );
        use rand::Rng;
        rng.random_range(0..self.covered.len())
    }

    /// The elite stored in the `slot`-th covered cell.
    pub fn parent_at(&self, slot: usize) -> &Elite {
        self.cells[self.covered[slot]]
            .as_ref()
            .expect("covered cell holds an elite")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> Genotype {
        s.parse().unwrap()
    }

    fn space() -> FeatureSpace {
        FeatureSpace::number_of_ones(3, 1).unwrap()
    }

    #[test]
    fn empty_cell_accepts_anything() {
        let mut a = Archive::for_space(&space());
        assert_eq!(a.offer(&space(), g("100"), -1e9), OfferOutcome::NewCell);
        assert_eq!(a.covered(), 1);
        assert_eq!(a.covered_cells(), &[1]);
    }

    #[test]
    fn tie_replaces_and_worse_is_rejected() {
        let sp = space();
        let mut a = Archive::for_space(&sp);
        a.offer(&sp, g("100"), 5.0);
        assert_eq!(a.offer(&sp, g("010"), 5.0), OfferOutcome::Replaced);
        assert_eq!(a.get(1).unwrap().genotype, g("010"));
        assert_eq!(a.offer(&sp, g("001"), 4.9), OfferOutcome::Rejected);
        assert_eq!(a.get(1).unwrap().genotype, g("010"));
        assert_eq!(a.get(1).unwrap().fitness, 5.0);
        assert_eq!(a.covered(), 1);
    }

    #[test]
    fn singleton_always_sampled() {
        let sp = space();
        let mut a = Archive::for_space(&sp);
        a.offer(&sp, g("110"), 2.0);
        let mut rng = RandomSource::new(0, 0);
        for _ in 0..100 {
            assert_eq!(a.sample_parent(&mut rng).genotype, g("110"));
        }
    }

    #[test]
    fn new_cell_is_immediately_selectable() {
        let sp = space();
        let mut a = Archive::for_space(&sp);
        a.offer(&sp, g("000"), 0.0);
        a.offer(&sp, g("111"), 3.0);
        let mut rng = RandomSource::new(5, 0);
        let hits = (0..1000)
            .filter(|_| a.sample_parent(&mut rng).genotype == g("111"))
            .count();
        assert!(hits > 0);
    }

    #[test]
    #[should_panic(expected = "empty archive")]
    fn sampling_empty_archive_panics() {
        Archive::new(4).sample_parent(&mut RandomSource::new(0, 0));
    }
}
