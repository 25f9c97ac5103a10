//! Column subsets of the ground set `{1, ..., n}`.
//!
//! Subsets are kept as strictly increasing 1-based index lists, so the derived
//! `Ord` is the lexicographic order used everywhere for canonical output and
//! deterministic tie-breaking.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A sorted set of distinct 1-based column indices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Subset(Vec<usize>);

impl Subset {
    /// Builds a subset from arbitrary indices, sorting and rejecting
    /// duplicates and zeros.
    pub fn new(mut members: Vec<usize>) -> Result<Self> {
        members.sort_unstable();
        if members.first() == Some(&0) {
            return Err(Error::InvalidInput("subset indices are 1-based".into()));
        }
        if members.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidInput("subset has repeated indices".into()));
        }
        Ok(Subset(members))
    }

    pub fn empty() -> Self {
        Subset(Vec::new())
    }

    /// The full ground set `{1, ..., n}`.
    pub fn full(n: usize) -> Self {
        Subset((1..=n).collect())
    }

    pub fn size(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, e: usize) -> bool {
        self.0.binary_search(&e).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn max_element(&self) -> Option<usize> {
        self.0.last().copied()
    }

    /// `self - remove + add`; panics if `remove` is absent or `add` present.
    pub fn exchange(&self, remove: usize, add: usize) -> Subset {
        debug_assert!(self.contains(remove) && !self.contains(add));
        let mut v: Vec<usize> = self.0.iter().copied().filter(|&e| e != remove).collect();
        let pos = v.partition_point(|&e| e < add);
        v.insert(pos, add);
        Subset(v)
    }

    /// Elements of `self` not in `other`.
    pub fn difference(&self, other: &Subset) -> Vec<usize> {
        self.iter().filter(|&e| !other.contains(e)).collect()
    }

    /// Bitmask with bit `i-1` set for each member `i`. Only valid for
    /// ground sets that fit in the mask width.
    pub fn mask(&self) -> u64 {
        self.0.iter().fold(0u64, |m, &e| m | (1u64 << (e - 1)))
    }

    pub fn from_mask(mut mask: u64) -> Subset {
        let mut v = Vec::new();
        while mask != 0 {
            let bit = mask.trailing_zeros() as usize;
            v.push(bit + 1);
            mask &= mask - 1;
        }
        Subset(v)
    }

    /// All size-`r` subsets of `{1, ..., n}` in lexicographic order.
    pub fn enumerate(n: usize, r: usize) -> Vec<Subset> {
        if r > n {
            return Vec::new();
        }
        let mut out = Vec::new();
        let mut cur: Vec<usize> = (1..=r).collect();
        loop {
            out.push(Subset(cur.clone()));
            // advance to the next combination
            let mut i = r;
            while i > 0 && cur[i - 1] == n - (r - i) {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            cur[i - 1] += 1;
            for j in i..r {
                cur[j] = cur[j - 1] + 1;
            }
        }
        out
    }

    /// All subsets of `{1, ..., n}` (every size) in lexicographic order.
    pub fn enumerate_all(n: usize) -> Vec<Subset> {
        let mut out: Vec<Subset> = (0u64..(1 << n)).map(Subset::from_mask).collect();
        out.sort();
        out
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

impl Serialize for Subset {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Subset {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<usize>::deserialize(deserializer)?;
        Subset::new(v).map_err(serde::de::Error::custom)
    }
}
