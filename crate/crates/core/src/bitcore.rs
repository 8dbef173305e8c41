//! Bit-string genotypes, standard bit mutation and the seeded randomness
//! every engine draws from.
//!
//! A [`Genotype`] is a packed, immutable bit vector that caches its number of
//! one-bits. Offspring are produced by [`StandardBitMutation`], which samples
//! the flipped positions by geometric gap skipping: with flip probability
//! `p` the gap to the next flipped position is geometric, so a mutation costs
//! `O(n p)` expected time rather than `n` coin flips.
//!
//! [`RandomSource`] is a ChaCha8 stream addressed by a `(seed, stream)` pair.
//! Distinct streams of one seed are independent; a given pair replays the
//! same sequence on every platform.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Geometric};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

const WORD: usize = 64;

fn words_for(n: usize) -> usize {
    n.div_ceil(WORD)
}

/// A fixed-length bit string `x ∈ {0,1}^n` with a cached one-count.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Genotype {
    words: Box<[u64]>,
    len: usize,
    ones: usize,
}

impl Genotype {
    /// The all-zeros string `0^n`.
    pub fn zeros(n: usize) -> Result<Self> {
        check_dim(n)?;
        Ok(Genotype {
            words: vec![0; words_for(n)].into_boxed_slice(),
            len: n,
            ones: 0,
        })
    }

    /// The all-ones string `1^n`.
    pub fn ones(n: usize) -> Result<Self> {
        check_dim(n)?;
        let mut words = vec![u64::MAX; words_for(n)];
        mask_tail(&mut words, n);
        Ok(Genotype {
            words: words.into_boxed_slice(),
            len: n,
            ones: n,
        })
    }

    pub fn from_bits(bits: &[bool]) -> Result<Self> {
        check_dim(bits.len())?;
        let mut words = vec![0u64; words_for(bits.len())];
        for (i, &b) in bits.iter().enumerate() {
            if b {
                words[i / WORD] |= 1 << (i % WORD);
            }
        }
        Ok(Self::from_words(words, bits.len()))
    }

    /// Builds a genotype of length `n` whose one-bits are exactly `positions`.
    pub fn from_positions(n: usize, positions: &[usize]) -> Result<Self> {
        let mut g = Self::zeros(n)?;
        for &p in positions {
            if p >= n {
                return Err(Error::InvalidParameter(format!(
                    "bit position {p} out of range for length {n}"
                )));
            }
            g.words[p / WORD] |= 1 << (p % WORD);
        }
        g.ones = popcount(&g.words);
        Ok(g)
    }

    /// Interprets the low `n` bits of `mask` as a genotype (bit `i` of the
    /// mask is position `i`). Used by exhaustive enumeration for `n <= 64`.
    pub fn from_mask(n: usize, mask: u64) -> Result<Self> {
        check_dim(n)?;
        if n > WORD {
            return Err(Error::InvalidDimension(format!(
                "from_mask supports n <= 64, got {n}"
            )));
        }
        Ok(Self::from_words(vec![mask], n))
    }

    fn from_words(mut words: Vec<u64>, n: usize) -> Self {
        mask_tail(&mut words, n);
        let ones = popcount(&words);
        Genotype {
            words: words.into_boxed_slice(),
            len: n,
            ones,
        }
    }

    /// A uniformly random string: every bit is 1 with probability 1/2.
    pub fn new_uniform<R: RngCore + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        check_dim(n)?;
        let mut words: Vec<u64> = (0..words_for(n)).map(|_| rng.next_u64()).collect();
        mask_tail(&mut words, n);
        Ok(Self::from_words(words, n))
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    /// Always false; zero-length genotypes cannot be constructed.
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// `|x|_1`.
    #[inline]
    pub fn count_ones(&self) -> usize {
        self.ones
    }

    /// `|x|_0`.
    #[inline]
    pub fn count_zeros(&self) -> usize {
        self.len - self.ones
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        self.words[i / WORD] >> (i % WORD) & 1 == 1
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Iterates over the positions of one-bits in increasing order.
    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let b = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(wi * WORD + b)
            })
        })
    }

    pub fn to_bits(&self) -> Vec<bool> {
        (0..self.len).map(|i| self.get(i)).collect()
    }

    /// A copy of `self` with every listed position flipped. Positions must be
    /// distinct and in range.
    pub fn with_flips(&self, positions: &[usize]) -> Genotype {
        let mut words = self.words.clone();
        let mut ones = self.ones as isize;
        for &p in positions {
            assert!(p < self.len, "flip position {p} out of range {}", self.len);
            let bit = 1u64 << (p % WORD);
            let w = &mut words[p / WORD];
            ones += if *w & bit == 0 { 1 } else { -1 };
            *w ^= bit;
        }
        Genotype {
            words,
            len: self.len,
            ones: ones as usize,
        }
    }

    /// Recomputes the one-count from the raw words.
    pub fn recount(&self) -> usize {
        popcount(&self.words)
    }
}

/// Number of positions where `a` and `b` differ.
pub fn hamming(a: &Genotype, b: &Genotype) -> Result<usize> {
    if a.len != b.len {
        return Err(Error::LengthMismatch {
            expected: a.len,
            actual: b.len,
        });
    }
    Ok(a.words
        .iter()
        .zip(b.words.iter())
        .map(|(x, y)| (x ^ y).count_ones() as usize)
        .sum())
}

fn check_dim(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidDimension(
            "genotype length must be >= 1".into(),
        ));
    }
    Ok(())
}

fn mask_tail(words: &mut [u64], n: usize) {
    let rem = n % WORD;
    if rem != 0 {
        if let Some(last) = words.last_mut() {
            *last &= (1u64 << rem) - 1;
        }
    }
}

fn popcount(words: &[u64]) -> usize {
    words.iter().map(|w| w.count_ones() as usize).sum()
}

impl fmt::Display for Genotype {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Genotype {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Genotype({self}, ones={})", self.ones)
    }
}

impl FromStr for Genotype {
    type Err = Error;

    /// Parses a string of `0`/`1` characters; position 0 is the leftmost.
    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::InvalidParameter(format!(
                    "unexpected character {other:?} in bit string"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        Genotype::from_bits(&bits)
    }
}

impl Serialize for Genotype {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Genotype {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Deterministic random stream addressed by `(seed, stream)`.
///
/// Backed by ChaCha8, whose 64-bit stream id gives each replication its own
/// independent sequence under a shared master seed.
#[derive(Clone, Debug)]
pub struct RandomSource {
    seed: u64,
    stream: u64,
    rng: ChaCha8Rng,
}

impl RandomSource {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        RandomSource { seed, stream, rng }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    /// Uniform index in `0..bound`. `bound` must be positive.
    #[inline]
    pub fn index(&mut self, bound: usize) -> usize {
        self.rng.random_range(0..bound)
    }
}

impl RngCore for RandomSource {
    #[inline]
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    #[inline]
    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}

/// Standard bit mutation: flip each bit independently with probability `p_m`.
#[derive(Clone, Debug)]
pub struct StandardBitMutation {
    p_m: f64,
    gap: Geometric,
}

impl StandardBitMutation {
    pub fn new(p_m: f64) -> Result<Self> {
        if !(p_m > 0.0 && p_m < 1.0) {
            return Err(Error::InvalidProbability(p_m));
        }
        let gap = Geometric::new(p_m).map_err(|_| Error::InvalidProbability(p_m))?;
        Ok(StandardBitMutation { p_m, gap })
    }

    pub fn probability(&self) -> f64 {
        self.p_m
    }

    /// Samples the sorted set of positions to flip in a string of length `n`.
    pub fn flip_positions<R: RngCore + ?Sized>(&self, n: usize, rng: &mut R) -> Vec<usize> {
        let mut out = Vec::new();
        self.flip_positions_into(n, rng, &mut out);
        out
    }

    /// Like [`flip_positions`](Self::flip_positions) but reuses `out`.
    pub fn flip_positions_into<R: RngCore + ?Sized>(
        &self,
        n: usize,
        rng: &mut R,
        out: &mut Vec<usize>,
    ) {
        out.clear();
        // Geometric yields the number of failures before the next success.
        let mut pos: u64 = 0;
        loop {
            let skip = self.gap.sample(rng);
            pos = match pos.checked_add(skip) {
                Some(p) if p < n as u64 => p,
                _ => break,
            };
            out.push(pos as usize);
            pos += 1;
        }
    }

    /// Returns an offspring of `parent`; the parent is left untouched.
    pub fn mutate<R: RngCore + ?Sized>(&self, parent: &Genotype, rng: &mut R) -> Genotype {
        let flips = self.flip_positions(parent.len(), rng);
        parent.with_flips(&flips)
    }
}

/// One-shot form of [`StandardBitMutation::mutate`].
pub fn mutate<R: RngCore + ?Sized>(parent: &Genotype, p_m: f64, rng: &mut R) -> Result<Genotype> {
    Ok(StandardBitMutation::new(p_m)?.mutate(parent, rng))
}
