use std::fmt;

use bitvec::prelude::*;

use crate::model::{Model, PointedQuery};

/// A set of world–agent pairs of one model, as a bit vector in row-major
/// order (`world * |agents| + agent`).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TruthSet {
    bits: BitVec<u64, Lsb0>,
}

impl TruthSet {
    pub fn empty(len: usize) -> Self {
        TruthSet {
            bits: bitvec![u64, Lsb0; 0; len],
        }
    }

    pub fn full(len: usize) -> Self {
        TruthSet {
            bits: bitvec![u64, Lsb0; 1; len],
        }
    }

    pub fn empty_for(m: &Model) -> Self {
        Self::empty(m.n_points())
    }

    pub fn full_for(m: &Model) -> Self {
        Self::full(m.n_points())
    }

    pub fn from_points(m: &Model, points: impl IntoIterator<Item = PointedQuery>) -> Self {
        let mut out = Self::empty_for(m);
        for q in points {
            out.insert(m.point_index(q));
        }
        out
    }

    /// Builds a set from `(world, agent)` id pairs; panics on unknown ids.
    pub fn from_labels(m: &Model, pairs: &[(&str, &str)]) -> Self {
        Self::from_points(
            m,
            pairs.iter().map(|(w, a)| m.query(w, a).unwrap_or_else(|| panic!("unknown point ({w},{a})"))),
        )
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn count(&self) -> usize {
        self.bits.count_ones()
    }

    pub fn contains(&self, index: usize) -> bool {
        self.bits[index]
    }

    pub fn insert(&mut self, index: usize) {
        self.bits.set(index, true);
    }

    pub fn set(&mut self, index: usize, value: bool) {
        self.bits.set(index, value);
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter_ones()
    }

    pub fn complement(&self) -> Self {
        TruthSet { bits: !self.bits.clone() }
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut bits = self.bits.clone();
        bits |= &other.bits;
        TruthSet { bits }
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let mut bits = self.bits.clone();
        bits &= &other.bits;
        TruthSet { bits }
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.bits.iter_ones().all(|i| other.bits[i])
    }

    /// `'1'`/`'0'` per point in row-major order.
    pub fn to_bit_string(&self) -> String {
        self.bits.iter().map(|b| if *b { '1' } else { '0' }).collect()
    }

    pub fn from_bit_string(s: &str) -> Option<Self> {
        let mut bits = BitVec::with_capacity(s.len());
        for c in s.chars() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                _ => return None,
            }
        }
        Some(TruthSet { bits })
    }

    /// First index where the two sets differ.
    pub fn first_difference(&self, other: &Self) -> Option<usize> {
        self.bits.iter().zip(other.bits.iter()).position(|(a, b)| *a != *b)
    }
}

impl fmt::Debug for TruthSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TruthSet({})", self.to_bit_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boolean_operations() {
        let a = TruthSet::from_bit_string("1100").unwrap();
        let b = TruthSet::from_bit_string("1010").unwrap();
        assert_eq!(a.complement().to_bit_string(), "0011");
        assert_eq!(a.union(&b).to_bit_string(), "1110");
        assert_eq!(a.intersection(&b).to_bit_string(), "1000");
        assert!(a.intersection(&b).is_subset(&a));
        assert!(!a.is_subset(&b));
        assert_eq!(a.first_difference(&b), Some(1));
        assert_eq!(a.first_difference(&a), None);
        assert_eq!(a.count(), 2);
        assert!(TruthSet::from_bit_string("10x").is_none());
    }

    #[test]
    fn complement_of_wide_sets_stays_in_range() {
        let s = TruthSet::empty(70);
        let c = s.complement();
        assert_eq!(c.len(), 70);
        assert_eq!(c.count(), 70);
        assert_eq!(c, TruthSet::full(70));
    }
}
