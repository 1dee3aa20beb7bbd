//! Bit-packed occupancy vectors.
//!
//! `SpinConfig` is a configuration eta in {0,1}^S (site i <-> bit i);
//! `BondConfig` is the open/closed state of the undirected bonds of a
//! lattice. Both are thin wrappers over the same word-packed storage.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::lattice::Lattice;

#[derive(Clone, PartialEq, Eq, Hash)]
pub(crate) struct BitSet {
    words: Vec<u64>,
    len: usize,
}

impl BitSet {
    pub fn zeros(len: usize) -> Self {
        BitSet {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut s = Self::zeros(len);
        for i in 0..len {
            s.set(i, true);
        }
        s
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, v: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % 64);
        if v {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty_set(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn union_with(&mut self, other: &BitSet) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn is_subset_of(&self, other: &BitSet) -> bool {
        debug_assert_eq!(self.len, other.len);
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn intersects(&self, other: &BitSet) -> bool {
        debug_assert_eq!(self.len, other.len);
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(|&i| self.get(i))
    }
}

/// A configuration of a finite spin system: one bit per lattice site.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SpinConfig {
    bits: BitSet,
}

impl SpinConfig {
    /// The all-healthy / all-vacant configuration.
    pub fn empty(lattice: &Lattice) -> Self {
        SpinConfig {
            bits: BitSet::zeros(lattice.num_sites()),
        }
    }

    /// The fully occupied configuration.
    pub fn full(lattice: &Lattice) -> Self {
        SpinConfig {
            bits: BitSet::ones(lattice.num_sites()),
        }
    }

    /// Configuration with exactly the given sites occupied.
    pub fn from_sites(lattice: &Lattice, sites: &[usize]) -> Result<Self> {
        let mut c = Self::empty(lattice);
        for &s in sites {
            if s >= lattice.num_sites() {
                return Err(Error::SiteOutOfRange {
                    site: s,
                    n_sites: lattice.num_sites(),
                });
            }
            c.bits.set(s, true);
        }
        Ok(c)
    }

    /// Decode a configuration from its integer index (site i <-> bit i).
    /// Only meaningful for systems with at most 63 sites.
    pub fn from_index(n_sites: usize, index: u64) -> Self {
        assert!(n_sites < 64, "index encoding limited to 63 sites");
        assert!(index < 1u64 << n_sites);
        let mut bits = BitSet::zeros(n_sites);
        for i in 0..n_sites {
            if index >> i & 1 == 1 {
                bits.set(i, true);
            }
        }
        SpinConfig { bits }
    }

    /// Integer index of this configuration (inverse of [`SpinConfig::from_index`]).
    pub fn to_index(&self) -> u64 {
        assert!(self.len() < 64);
        let mut idx = 0u64;
        for i in self.bits.iter_ones() {
            idx |= 1 << i;
        }
        idx
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.bits.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.bits.is_empty_set()
    }

    #[inline]
    pub fn get(&self, site: usize) -> bool {
        self.bits.get(site)
    }

    #[inline]
    pub fn set(&mut self, site: usize, v: bool) {
        self.bits.set(site, v);
    }

    /// Number of occupied sites.
    pub fn popcount(&self) -> usize {
        self.bits.count_ones()
    }

    pub fn occupied_sites(&self) -> Vec<usize> {
        self.bits.iter_ones().collect()
    }

    /// Coordinatewise-or with another configuration.
    pub fn union(&self, other: &SpinConfig) -> SpinConfig {
        let mut out = self.clone();
        out.bits.union_with(&other.bits);
        out
    }

    /// eta <= zeta coordinatewise.
    pub fn dominated_by(&self, other: &SpinConfig) -> bool {
        self.bits.is_subset_of(&other.bits)
    }

    /// Whether the two configurations share an occupied site.
    pub fn intersects(&self, other: &SpinConfig) -> bool {
        self.bits.intersects(&other.bits)
    }

    /// Partial order on configurations: `Some(Less)` iff self <= other
    /// strictly, `None` iff incomparable.
    pub fn compare(&self, other: &SpinConfig) -> Option<Ordering> {
        let le = self.dominated_by(other);
        let ge = other.dominated_by(self);
        match (le, ge) {
            (true, true) => Some(Ordering::Equal),
            (true, false) => Some(Ordering::Less),
            (false, true) => Some(Ordering::Greater),
            (false, false) => None,
        }
    }

    /// Check that this configuration indexes the given lattice.
    pub fn check_lattice(&self, lattice: &Lattice, object: &'static str) -> Result<()> {
        if self.len() != lattice.num_sites() {
            return Err(Error::LatticeMismatch {
                object,
                got: self.len(),
                expected: lattice.num_sites(),
            });
        }
        Ok(())
    }
}

impl std::fmt::Debug for SpinConfig {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "SpinConfig[")?;
        for i in 0..self.len() {
            write!(f, "{}", self.get(i) as u8)?;
        }
        write!(f, "]")
    }
}

/// Open/closed state of every undirected bond of a lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BondConfig {
    open: BitSet,
}

impl BondConfig {
    pub fn closed(lattice: &Lattice) -> Self {
        BondConfig {
            open: BitSet::zeros(lattice.num_bonds()),
        }
    }

    pub fn all_open(lattice: &Lattice) -> Self {
        BondConfig {
            open: BitSet::ones(lattice.num_bonds()),
        }
    }

    pub fn len(&self) -> usize {
        self.open.len()
    }

    pub fn is_empty(&self) -> bool {
        self.open.is_empty_set()
    }

    #[inline]
    pub fn is_open(&self, bond: usize) -> bool {
        self.open.get(bond)
    }

    #[inline]
    pub fn set_open(&mut self, bond: usize, v: bool) {
        self.open.set(bond, v);
    }

    pub fn count_open(&self) -> usize {
        self.open.count_ones()
    }

    /// Bitwise domination: every bond open here is open in `other`.
    pub fn dominated_by(&self, other: &BondConfig) -> bool {
        self.open.is_subset_of(&other.open)
    }

    pub fn check_lattice(&self, lattice: &Lattice, object: &'static str) -> Result<()> {
        if self.len() != lattice.num_bonds() {
            return Err(Error::LatticeMismatch {
                object,
                got: self.len(),
                expected: lattice.num_bonds(),
            });
        }
        Ok(())
    }
}
