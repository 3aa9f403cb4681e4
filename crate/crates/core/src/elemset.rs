//! Finite carriers and fixed-capacity bit sets over their elements.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

/// Maximum number of elements in a carrier.
pub const MAX_CARRIER: usize = 256;

const WORDS: usize = MAX_CARRIER / 64;

/// A subset of a carrier, stored as a bit set over element indices.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ElemSet([u64; WORDS]);

impl ElemSet {
    pub const EMPTY: ElemSet = ElemSet([0; WORDS]);

    pub fn new() -> Self {
        Self::EMPTY
    }

    /// Subset whose members are the set bits of `mask` (elements `0..64`).
    pub fn from_mask(mask: u64) -> Self {
        let mut words = [0; WORDS];
        words[0] = mask;
        ElemSet(words)
    }

    /// The full set `{0, .., n-1}`.
    pub fn full(n: usize) -> Self {
        assert!(n <= MAX_CARRIER);
        let mut s = Self::EMPTY;
        for (w, word) in s.0.iter_mut().enumerate() {
            let lo = w * 64;
            if n >= lo + 64 {
                *word = u64::MAX;
            } else if n > lo {
                *word = (1u64 << (n - lo)) - 1;
            }
        }
        s
    }

    pub fn singleton(i: usize) -> Self {
        let mut s = Self::EMPTY;
        s.insert(i);
        s
    }

    /// Low 64 bits; exact for carriers of at most 64 elements.
    pub fn mask(&self) -> u64 {
        self.0[0]
    }

    pub fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    pub fn remove(&mut self, i: usize) {
        self.0[i / 64] &= !(1 << (i % 64));
    }

    pub fn contains(&self, i: usize) -> bool {
        i < MAX_CARRIER && self.0[i / 64] & (1 << (i % 64)) != 0
    }

    pub fn is_empty(&self) -> bool {
        self.0.iter().all(|w| *w == 0)
    }

    pub fn len(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut out = *self;
        for (a, b) in out.0.iter_mut().zip(other.0) {
            *a |= b;
        }
        out
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let mut out = *self;
        for (a, b) in out.0.iter_mut().zip(other.0) {
            *a &= b;
        }
        out
    }

    pub fn difference(&self, other: &Self) -> Self {
        let mut out = *self;
        for (a, b) in out.0.iter_mut().zip(other.0) {
            *a &= !b;
        }
        out
    }

    pub fn intersects(&self, other: &Self) -> bool {
        self.0.iter().zip(other.0).any(|(a, b)| a & b != 0)
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.0.iter().zip(other.0).all(|(a, b)| a & !b == 0)
    }

    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }

    pub fn iter(&self) -> Iter {
        Iter {
            words: self.0,
            word: 0,
        }
    }
}

pub struct Iter {
    words: [u64; WORDS],
    word: usize,
}

impl Iterator for Iter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        while self.word < WORDS {
            let w = self.words[self.word];
            if w != 0 {
                let bit = w.trailing_zeros() as usize;
                self.words[self.word] &= w - 1;
                return Some(self.word * 64 + bit);
            }
            self.word += 1;
        }
        None
    }
}

impl FromIterator<usize> for ElemSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = ElemSet::EMPTY;
        for i in iter {
            s.insert(i);
        }
        s
    }
}

impl fmt::Debug for ElemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Iterates every subset of `{0, .., n-1}` in mask order. `n` must be at most 63.
pub fn all_subsets(n: usize) -> impl Iterator<Item = ElemSet> {
    assert!(n < 64, "subset enumeration needs n < 64");
    (0..1u64 << n).map(ElemSet::from_mask)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CarrierError {
    #[error("carrier must be nonempty")]
    Empty,
    #[error("carrier has {0} elements; at most {MAX_CARRIER} are supported")]
    TooLarge(usize),
    #[error("duplicate element `{0}`")]
    Duplicate(String),
    #[error("unknown element `{0}`")]
    Unknown(String),
}

/// A finite, ordered set of named elements.
#[derive(Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct Carrier {
    ids: Vec<String>,
    #[serde(skip)]
    index: HashMap<String, usize>,
}

impl fmt::Debug for Carrier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.ids).finish()
    }
}

impl Carrier {
    pub fn new<I, S>(ids: I) -> Result<Self, CarrierError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let ids: Vec<String> = ids.into_iter().map(Into::into).collect();
        if ids.is_empty() {
            return Err(CarrierError::Empty);
        }
        if ids.len() > MAX_CARRIER {
            return Err(CarrierError::TooLarge(ids.len()));
        }
        let mut index = HashMap::with_capacity(ids.len());
        for (i, id) in ids.iter().enumerate() {
            if index.insert(id.clone(), i).is_some() {
                return Err(CarrierError::Duplicate(id.clone()));
            }
        }
        Ok(Carrier { ids, index })
    }

    /// Carrier `{"0", "1", .., "n-1"}`.
    pub fn numbered(n: usize) -> Result<Self, CarrierError> {
        Carrier::new((0..n).map(|i| i.to_string()))
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn id(&self, i: usize) -> &str {
        &self.ids[i]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn full(&self) -> ElemSet {
        ElemSet::full(self.len())
    }

    pub fn set_of<I, S>(&self, ids: I) -> Result<ElemSet, CarrierError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut s = ElemSet::EMPTY;
        for id in ids {
            let id = id.as_ref();
            s.insert(
                self.index_of(id)
                    .ok_or_else(|| CarrierError::Unknown(id.to_string()))?,
            );
        }
        Ok(s)
    }

    /// Element ids of `set`, in carrier order.
    pub fn names(&self, set: &ElemSet) -> Vec<String> {
        set.iter().map(|i| self.ids[i].clone()).collect()
    }

    /// `{a, b, c}` rendering of a subset.
    pub fn format_set(&self, set: &ElemSet) -> String {
        format!("{{{}}}", self.names(set).join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_set_boundaries() {
        assert_eq!(ElemSet::full(0).len(), 0);
        assert_eq!(ElemSet::full(64).len(), 64);
        assert_eq!(ElemSet::full(65).len(), 65);
        assert_eq!(ElemSet::full(MAX_CARRIER).len(), MAX_CARRIER);
        assert!(ElemSet::full(130).contains(129));
        assert!(!ElemSet::full(130).contains(130));
    }

    #[test]
    fn iteration_is_ascending_across_words() {
        let s: ElemSet = [200, 3, 64, 63].into_iter().collect();
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![3, 63, 64, 200]);
    }

    #[test]
    fn carrier_rejects_duplicates_and_unknowns() {
        assert_eq!(
            Carrier::new(["a", "b", "a"]).unwrap_err(),
            CarrierError::Duplicate("a".into())
        );
        let c = Carrier::new(["a", "b"]).unwrap();
        assert!(matches!(c.set_of(["z"]), Err(CarrierError::Unknown(_))));
        assert_eq!(c.format_set(&c.set_of(["b", "a"]).unwrap()), "{a, b}");
    }
}
