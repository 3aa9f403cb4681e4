//! Probe functions: feature vectors attached to elements or to named subsets.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::Serialize;

use crate::elemset::ElemSet;
use crate::scalar::Scalar;

/// A fixed-length vector of exact feature values.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
#[serde(transparent)]
pub struct FeatureVector(pub Vec<Scalar>);

impl FeatureVector {
    pub fn from_ints(values: &[i64]) -> Self {
        FeatureVector(values.iter().map(|&v| Scalar::from_int(v)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Every component differs from `other`'s by at most `eps`.
    pub fn within(&self, other: &FeatureVector, eps: &Scalar) -> bool {
        self.0.len() == other.0.len()
            && self
                .0
                .iter()
                .zip(&other.0)
                .all(|(a, b)| Scalar(&a.0 - &b.0).abs() <= *eps)
    }
}

impl fmt::Display for FeatureVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// The set of feature vectors describing a subset.
#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize)]
#[serde(transparent)]
pub struct Description(pub BTreeSet<FeatureVector>);

impl Description {
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn overlaps(&self, other: &Description) -> bool {
        self.0.iter().any(|v| other.0.contains(v))
    }
}

impl fmt::Display for Description {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProbeError {
    #[error("probe has no values")]
    Empty,
    #[error("feature vectors must be nonempty")]
    ZeroArity,
    #[error("feature vector for `{at}` has {got} components, expected {expected}")]
    Arity {
        at: String,
        expected: usize,
        got: usize,
    },
    #[error("pointwise probe has {got} values for a carrier of {expected} elements")]
    NotTotal { expected: usize, got: usize },
    #[error("subset `{0}` is declared twice")]
    DuplicateSubset(String),
    #[error("subset `{0}` is empty")]
    EmptySubset(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ProbeKind {
    Pointwise,
    Holistic,
}

impl fmt::Display for ProbeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProbeKind::Pointwise => "pointwise",
            ProbeKind::Holistic => "holistic",
        })
    }
}

/// A probe defined on every carrier element.
///
/// Distinct vectors are interned as classes so that descriptions can be
/// handled as bit sets of class indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointwiseProbe {
    values: Vec<FeatureVector>,
    classes: Vec<FeatureVector>,
    class_of: Vec<usize>,
}

impl PointwiseProbe {
    pub fn new(values: Vec<FeatureVector>) -> Result<Self, ProbeError> {
        let arity = values.first().ok_or(ProbeError::Empty)?.len();
        if arity == 0 {
            return Err(ProbeError::ZeroArity);
        }
        let mut classes = Vec::new();
        let mut index: HashMap<&FeatureVector, usize> = HashMap::new();
        let mut class_of = Vec::with_capacity(values.len());
        for (i, v) in values.iter().enumerate() {
            if v.len() != arity {
                return Err(ProbeError::Arity {
                    at: i.to_string(),
                    expected: arity,
                    got: v.len(),
                });
            }
            let next = index.len();
            let c = *index.entry(v).or_insert(next);
            if c == classes.len() {
                classes.push(v.clone());
            }
            class_of.push(c);
        }
        Ok(PointwiseProbe {
            values,
            classes,
            class_of,
        })
    }

    pub fn from_ints(values: &[i64]) -> Result<Self, ProbeError> {
        Self::new(
            values
                .iter()
                .map(|&v| FeatureVector::from_ints(&[v]))
                .collect(),
        )
    }

    pub fn values(&self) -> &[FeatureVector] {
        &self.values
    }

    pub fn value(&self, element: usize) -> &FeatureVector {
        &self.values[element]
    }

    /// Distinct feature vectors, in order of first appearance.
    pub fn classes(&self) -> &[FeatureVector] {
        &self.classes
    }

    pub fn class_of(&self, element: usize) -> usize {
        self.class_of[element]
    }

    /// Class indices of the elements of `set`.
    pub fn class_set(&self, set: &ElemSet) -> ElemSet {
        let mut out = ElemSet::EMPTY;
        for i in set.iter() {
            out.insert(self.class_of[i]);
        }
        out
    }

    pub fn arity(&self) -> usize {
        self.classes[0].len()
    }
}

/// A named member of a holistic probe's subset family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HolisticEntry {
    pub name: String,
    pub set: ElemSet,
    pub value: FeatureVector,
}

/// A probe defined on a declared family of subsets, one vector per subset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HolisticProbe {
    entries: Vec<HolisticEntry>,
}

impl HolisticProbe {
    pub fn new(entries: Vec<HolisticEntry>) -> Result<Self, ProbeError> {
        let arity = entries.first().ok_or(ProbeError::Empty)?.value.len();
        if arity == 0 {
            return Err(ProbeError::ZeroArity);
        }
        let mut names = BTreeSet::new();
        for e in &entries {
            if e.value.len() != arity {
                return Err(ProbeError::Arity {
                    at: e.name.clone(),
                    expected: arity,
                    got: e.value.len(),
                });
            }
            if !names.insert(e.name.as_str()) {
                return Err(ProbeError::DuplicateSubset(e.name.clone()));
            }
            if e.set.is_empty() {
                return Err(ProbeError::EmptySubset(e.name.clone()));
            }
        }
        Ok(HolisticProbe { entries })
    }

    pub fn entries(&self) -> &[HolisticEntry] {
        &self.entries
    }

    pub fn entry_for(&self, set: &ElemSet) -> Option<&HolisticEntry> {
        self.entries.iter().find(|e| e.set == *set)
    }

    pub fn entry_named(&self, name: &str) -> Option<&HolisticEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    pub fn arity(&self) -> usize {
        self.entries[0].value.len()
    }
}

/// A named probe function Φ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbeAssignment {
    pub name: String,
    pub table: ProbeTable,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProbeTable {
    Pointwise(PointwiseProbe),
    Holistic(HolisticProbe),
}

impl ProbeAssignment {
    pub fn pointwise(
        name: impl Into<String>,
        values: Vec<FeatureVector>,
    ) -> Result<Self, ProbeError> {
        Ok(ProbeAssignment {
            name: name.into(),
            table: ProbeTable::Pointwise(PointwiseProbe::new(values)?),
        })
    }

    pub fn holistic(
        name: impl Into<String>,
        entries: Vec<HolisticEntry>,
    ) -> Result<Self, ProbeError> {
        Ok(ProbeAssignment {
            name: name.into(),
            table: ProbeTable::Holistic(HolisticProbe::new(entries)?),
        })
    }

    pub fn kind(&self) -> ProbeKind {
        match self.table {
            ProbeTable::Pointwise(_) => ProbeKind::Pointwise,
            ProbeTable::Holistic(_) => ProbeKind::Holistic,
        }
    }

    pub fn as_pointwise(&self) -> Option<&PointwiseProbe> {
        match &self.table {
            ProbeTable::Pointwise(p) => Some(p),
            ProbeTable::Holistic(_) => None,
        }
    }

    pub fn as_holistic(&self) -> Option<&HolisticProbe> {
        match &self.table {
            ProbeTable::Holistic(h) => Some(h),
            ProbeTable::Pointwise(_) => None,
        }
    }

    pub fn arity(&self) -> usize {
        match &self.table {
            ProbeTable::Pointwise(p) => p.arity(),
            ProbeTable::Holistic(h) => h.arity(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classes_are_interned_in_first_seen_order() {
        let p = PointwiseProbe::from_ints(&[1, 0, 1, 0, 7]).unwrap();
        assert_eq!(p.classes().len(), 3);
        assert_eq!(p.class_of(2), 0);
        assert_eq!(p.class_of(3), 1);
        assert_eq!(
            p.class_set(&ElemSet::from_mask(0b00101)),
            ElemSet::singleton(0)
        );
    }

    #[test]
    fn arity_mismatch_rejected() {
        let err = PointwiseProbe::new(vec![
            FeatureVector::from_ints(&[1, 2]),
            FeatureVector::from_ints(&[1]),
        ])
        .unwrap_err();
        assert_eq!(
            err,
            ProbeError::Arity {
                at: "1".into(),
                expected: 2,
                got: 1
            }
        );
    }

    #[test]
    fn tolerance_is_componentwise() {
        let a = FeatureVector::from_ints(&[1, 10]);
        let b = FeatureVector::from_ints(&[2, 10]);
        assert!(a.within(&b, &Scalar::from_int(1)));
        assert!(!a.within(&b, &Scalar::new(1, 2)));
    }

    #[test]
    fn holistic_family_is_validated() {
        let e = |name: &str, m: u64| HolisticEntry {
            name: name.into(),
            set: ElemSet::from_mask(m),
            value: FeatureVector::from_ints(&[1]),
        };
        assert!(HolisticProbe::new(vec![e("a", 1), e("b", 2)]).is_ok());
        assert_eq!(
            HolisticProbe::new(vec![e("a", 1), e("a", 2)]).unwrap_err(),
            ProbeError::DuplicateSubset("a".into())
        );
        assert_eq!(
            HolisticProbe::new(vec![e("a", 0)]).unwrap_err(),
            ProbeError::EmptySubset("a".into())
        );
    }
}
