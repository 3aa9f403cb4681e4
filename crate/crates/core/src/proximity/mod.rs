//! Spatial and descriptive proximity over a finite carrier.
//!
//! The spatial relation is nonempty intersection, optionally widened by
//! declared adjacency pairs: `A δ B` iff the sets meet or some `a ∈ A` is
//! adjacent to some `b ∈ B`. The descriptive relation `A δ_Φ B` holds iff
//! the descriptions `Φ(A)` and `Φ(B)` overlap.
//!
//! Pointwise probes describe a subset by the set of its elements' vectors.
//! Holistic probes give each declared subset a single vector; any other
//! subset has no description and querying it is an error. To run set
//! operations over a holistic family, [`ProximitySpace::lift_holistic`]
//! turns each declared subset into one element of a new carrier.

pub mod axioms;
pub mod probe;

use std::fmt;

use serde::Serialize;

use crate::elemset::{Carrier, CarrierError, ElemSet};
use crate::scalar::Scalar;

pub use axioms::{
    check_axioms, Axiom, AxiomFamily, AxiomReport, AxiomStatus, Budget, FnRelation, Proximity,
};
pub use probe::{
    Description, FeatureVector, HolisticEntry, HolisticProbe, PointwiseProbe, ProbeAssignment,
    ProbeError, ProbeKind, ProbeTable,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProximityError {
    #[error(transparent)]
    Carrier(#[from] CarrierError),
    #[error(transparent)]
    Probe(#[from] ProbeError),
    #[error("the space has no probe function")]
    NoProbe,
    #[error("probe `{probe}` has {got} values but the carrier has {expected} elements")]
    ProbeSize {
        probe: String,
        expected: usize,
        got: usize,
    },
    #[error("holistic probe `{probe}` does not describe the subset {subset}")]
    UndeclaredSubset { probe: String, subset: String },
    #[error("operation needs a pointwise probe; lift the holistic family first")]
    HolisticProbeUnsupported,
    #[error("adjacency pair ({0}, {0}) joins an element to itself")]
    SelfAdjacent(String),
    #[error("tolerance must be nonnegative")]
    NegativeTolerance,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Spatial,
    Descriptive,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Spatial => "spatial",
            Mode::Descriptive => "descriptive",
        })
    }
}

/// How two descriptions are compared.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub enum Overlap {
    /// Descriptions overlap iff they share a vector.
    #[default]
    Exact,
    /// Descriptions overlap iff some pair of vectors agrees componentwise
    /// within the given bound.
    Tolerance(Scalar),
}

impl Overlap {
    fn matches(&self, a: &FeatureVector, b: &FeatureVector) -> bool {
        match self {
            Overlap::Exact => a == b,
            Overlap::Tolerance(eps) => a.within(b, eps),
        }
    }
}

/// A finite carrier with a spatial relation and an optional probe.
#[derive(Debug, Clone)]
pub struct ProximitySpace {
    carrier: Carrier,
    adjacency: Vec<ElemSet>,
    probe: Option<ProbeAssignment>,
    overlap: Overlap,
    /// For pointwise probes: classes whose vectors match each class.
    compat: Vec<ElemSet>,
}

impl ProximitySpace {
    pub fn new(carrier: Carrier) -> Self {
        let n = carrier.len();
        ProximitySpace {
            carrier,
            adjacency: vec![ElemSet::EMPTY; n],
            probe: None,
            overlap: Overlap::Exact,
            compat: Vec::new(),
        }
    }

    /// Adds symmetric adjacency pairs, given as element indices.
    pub fn with_adjacency(
        mut self,
        pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, ProximityError> {
        for (a, b) in pairs {
            if a == b {
                return Err(ProximityError::SelfAdjacent(self.carrier.id(a).to_string()));
            }
            self.adjacency[a].insert(b);
            self.adjacency[b].insert(a);
        }
        Ok(self)
    }

    pub fn with_probe(mut self, probe: ProbeAssignment) -> Result<Self, ProximityError> {
        if let Some(p) = probe.as_pointwise() {
            if p.values().len() != self.carrier.len() {
                return Err(ProximityError::ProbeSize {
                    probe: probe.name.clone(),
                    expected: self.carrier.len(),
                    got: p.values().len(),
                });
            }
        }
        self.probe = Some(probe);
        self.rebuild_compat();
        Ok(self)
    }

    pub fn with_overlap(mut self, overlap: Overlap) -> Result<Self, ProximityError> {
        if let Overlap::Tolerance(eps) = &overlap {
            if *eps < Scalar::zero() {
                return Err(ProximityError::NegativeTolerance);
            }
        }
        self.overlap = overlap;
        self.rebuild_compat();
        Ok(self)
    }

    fn rebuild_compat(&mut self) {
        self.compat.clear();
        if let Some(p) = self.probe.as_ref().and_then(ProbeAssignment::as_pointwise) {
            let classes = p.classes();
            for a in classes {
                self.compat.push(
                    classes
                        .iter()
                        .enumerate()
                        .filter(|(_, b)| self.overlap.matches(a, b))
                        .map(|(j, _)| j)
                        .collect(),
                );
            }
        }
    }

    pub fn carrier(&self) -> &Carrier {
        &self.carrier
    }

    pub fn len(&self) -> usize {
        self.carrier.len()
    }

    pub fn is_empty(&self) -> bool {
        self.carrier.is_empty()
    }

    pub fn full(&self) -> ElemSet {
        self.carrier.full()
    }

    pub fn probe(&self) -> Option<&ProbeAssignment> {
        self.probe.as_ref()
    }

    pub fn overlap(&self) -> &Overlap {
        &self.overlap
    }

    pub fn neighbours(&self, element: usize) -> &ElemSet {
        &self.adjacency[element]
    }

    /// Adjacency pairs `(a, b)` with `a < b`, in index order.
    pub fn adjacency_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (a, ns) in self.adjacency.iter().enumerate() {
            out.extend(ns.iter().filter(|&b| b > a).map(|b| (a, b)));
        }
        out
    }

    /// `A` together with every element adjacent to it.
    pub fn neighbourhood(&self, a: &ElemSet) -> ElemSet {
        let mut out = *a;
        for i in a.iter() {
            out = out.union(&self.adjacency[i]);
        }
        out
    }

    pub fn spatial_near(&self, a: &ElemSet, b: &ElemSet) -> bool {
        a.intersects(b) || a.iter().any(|i| self.adjacency[i].intersects(b))
    }

    /// `{x : {x} δ A}`.
    pub fn spatial_closure(&self, a: &ElemSet) -> ElemSet {
        self.neighbourhood(a)
    }

    fn pointwise(&self) -> Result<&PointwiseProbe, ProximityError> {
        match &self.probe {
            None => Err(ProximityError::NoProbe),
            Some(p) => p
                .as_pointwise()
                .ok_or(ProximityError::HolisticProbeUnsupported),
        }
    }

    fn holistic_entry(
        &self,
        h: &HolisticProbe,
        a: &ElemSet,
    ) -> Result<FeatureVector, ProximityError> {
        h.entry_for(a)
            .map(|e| e.value.clone())
            .ok_or_else(|| ProximityError::UndeclaredSubset {
                probe: self
                    .probe
                    .as_ref()
                    .map(|p| p.name.clone())
                    .unwrap_or_default(),
                subset: self.carrier.format_set(a),
            })
    }

    /// `Φ(A)`. The empty set has the empty description.
    pub fn describe(&self, a: &ElemSet) -> Result<Description, ProximityError> {
        let probe = self.probe.as_ref().ok_or(ProximityError::NoProbe)?;
        if a.is_empty() {
            return Ok(Description::default());
        }
        match &probe.table {
            ProbeTable::Pointwise(p) => {
                Ok(Description(a.iter().map(|i| p.value(i).clone()).collect()))
            }
            ProbeTable::Holistic(h) => Ok(Description([self.holistic_entry(h, a)?].into())),
        }
    }

    /// Pointwise probes only: class indices of `Φ(A)`.
    pub fn description_classes(&self, a: &ElemSet) -> Result<ElemSet, ProximityError> {
        Ok(self.pointwise()?.class_set(a))
    }

    /// Classes that match some class in `classes` under the overlap rule.
    fn matching_classes(&self, classes: &ElemSet) -> ElemSet {
        match self.overlap {
            Overlap::Exact => *classes,
            Overlap::Tolerance(_) => classes
                .iter()
                .fold(ElemSet::EMPTY, |acc, c| acc.union(&self.compat[c])),
        }
    }

    pub fn descriptive_near(&self, a: &ElemSet, b: &ElemSet) -> Result<bool, ProximityError> {
        let probe = self.probe.as_ref().ok_or(ProximityError::NoProbe)?;
        if a.is_empty() || b.is_empty() {
            return Ok(false);
        }
        match &probe.table {
            ProbeTable::Pointwise(p) => {
                let ca = self.matching_classes(&p.class_set(a));
                Ok(ca.intersects(&p.class_set(b)))
            }
            ProbeTable::Holistic(h) => {
                let va = self.holistic_entry(h, a)?;
                let vb = self.holistic_entry(h, b)?;
                Ok(self.overlap.matches(&va, &vb))
            }
        }
    }

    pub fn near(&self, a: &ElemSet, b: &ElemSet, mode: Mode) -> Result<bool, ProximityError> {
        match mode {
            Mode::Spatial => Ok(self.spatial_near(a, b)),
            Mode::Descriptive => self.descriptive_near(a, b),
        }
    }

    /// `A ⩀ B = {x ∈ A ∪ B : Φ(x) ∈ Φ(A) ∩ Φ(B)}`.
    ///
    /// Under a tolerance overlap, `Φ(x)` must match a vector of `Φ(A)` and a
    /// vector of `Φ(B)`.
    pub fn descriptive_intersection(
        &self,
        a: &ElemSet,
        b: &ElemSet,
    ) -> Result<ElemSet, ProximityError> {
        let p = self.pointwise()?;
        let common = self
            .matching_classes(&p.class_set(a))
            .intersection(&self.matching_classes(&p.class_set(b)));
        Ok(a.union(b)
            .iter()
            .filter(|&x| common.contains(p.class_of(x)))
            .collect())
    }

    /// `cl_Φ A = {x : {x} δ_Φ A}`.
    pub fn descriptive_closure(&self, a: &ElemSet) -> Result<ElemSet, ProximityError> {
        let p = self.pointwise()?;
        let near = self.matching_classes(&p.class_set(a));
        Ok((0..self.len())
            .filter(|&x| near.contains(p.class_of(x)))
            .collect())
    }

    /// `A =_des B`: the descriptions are equal.
    pub fn des_eq(&self, a: &ElemSet, b: &ElemSet) -> Result<bool, ProximityError> {
        if let Ok(p) = self.pointwise() {
            return Ok(p.class_set(a) == p.class_set(b));
        }
        Ok(self.describe(a)? == self.describe(b)?)
    }

    /// `Φ(A) ⊆ Φ(B)`.
    pub fn description_subset(&self, a: &ElemSet, b: &ElemSet) -> Result<bool, ProximityError> {
        if let Ok(p) = self.pointwise() {
            return Ok(p.class_set(a).is_subset(&p.class_set(b)));
        }
        Ok(self.describe(a)?.0.is_subset(&self.describe(b)?.0))
    }

    /// Replaces a holistic family by a space whose elements are the declared
    /// subsets, each described by its vector. Two lifted elements are
    /// spatially adjacent when their subsets share an element.
    pub fn lift_holistic(&self) -> Result<ProximitySpace, ProximityError> {
        let probe = self.probe.as_ref().ok_or(ProximityError::NoProbe)?;
        let h = match &probe.table {
            ProbeTable::Holistic(h) => h,
            ProbeTable::Pointwise(_) => return Ok(self.clone()),
        };
        let entries = h.entries();
        let carrier = Carrier::new(entries.iter().map(|e| e.name.clone()))?;
        let mut pairs = Vec::new();
        for i in 0..entries.len() {
            for j in i + 1..entries.len() {
                if entries[i].set.intersects(&entries[j].set) {
                    pairs.push((i, j));
                }
            }
        }
        let lifted = ProbeAssignment::pointwise(
            probe.name.clone(),
            entries.iter().map(|e| e.value.clone()).collect(),
        )?;
        ProximitySpace::new(carrier)
            .with_adjacency(pairs)?
            .with_probe(lifted)?
            .with_overlap(self.overlap.clone())
    }

    pub fn spatial(&self) -> SpatialView<'_> {
        SpatialView(self)
    }

    /// The descriptive relation as a total relation on subsets. Needs a
    /// pointwise probe.
    pub fn descriptive(&self) -> Result<DescriptiveView<'_>, ProximityError> {
        self.pointwise()?;
        Ok(DescriptiveView(self))
    }
}

#[derive(Clone, Copy)]
pub struct SpatialView<'a>(&'a ProximitySpace);

impl Proximity for SpatialView<'_> {
    fn size(&self) -> usize {
        self.0.len()
    }

    fn near(&self, a: &ElemSet, b: &ElemSet) -> bool {
        self.0.spatial_near(a, b)
    }
}

#[derive(Clone, Copy)]
pub struct DescriptiveView<'a>(&'a ProximitySpace);

impl Proximity for DescriptiveView<'_> {
    fn size(&self) -> usize {
        self.0.len()
    }

    fn near(&self, a: &ElemSet, b: &ElemSet) -> bool {
        self.0
            .descriptive_near(a, b)
            .expect("view requires a pointwise probe")
    }

    fn descriptive_intersection(&self, a: &ElemSet, b: &ElemSet) -> Option<ElemSet> {
        self.0.descriptive_intersection(a, b).ok()
    }
}
