//! Vertex maps lifted to subsets, proximal continuity, orbits, and the
//! classification of fixed, eventually fixed and almost fixed subsets.
//!
//! A subset `A` is eventually fixed when it is not fixed and, for the least
//! `n ≥ 1`, either `f^n(A)` is fixed by `f` (the orbit settles) or
//! `f^{n+1}(A) = A` (the orbit returns, so `A` is fixed by a power of `f`).
//! Both readings are visible in the orbit's pre-period `τ` and period `p`:
//! `τ ≥ 1, p = 1` gives `n = τ` and `τ = 0, p ≥ 2` gives `n = p - 1`.

use std::collections::HashMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::elemset::{Carrier, ElemSet};
use crate::proximity::axioms::random_subset;
use crate::proximity::{
    check_axioms, AxiomFamily, Budget, Description, Mode, ProbeTable, ProximityError,
    ProximitySpace,
};

pub const DEFAULT_ORBIT_CAP: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DynamicsError {
    #[error(transparent)]
    Proximity(#[from] ProximityError),
    #[error("map sends element {from} to {to}, outside a carrier of {size}")]
    OutOfRange { from: usize, to: usize, size: usize },
    #[error("map has no image for `{0}`")]
    NotTotal(String),
    #[error("map assigns `{0}` twice")]
    DuplicateEntry(String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("map is defined on {map} elements but the space has {space}")]
    DomainMismatch { map: usize, space: usize },
    #[error("map is not a bijection")]
    NotBijective,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
}

/// A total function between carriers, given by element indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VertexMap {
    table: Vec<usize>,
    target_size: usize,
}

impl VertexMap {
    pub fn new(table: Vec<usize>, target_size: usize) -> Result<Self, DynamicsError> {
        if let Some((from, &to)) = table.iter().enumerate().find(|(_, &t)| t >= target_size) {
            return Err(DynamicsError::OutOfRange {
                from,
                to,
                size: target_size,
            });
        }
        Ok(VertexMap { table, target_size })
    }

    /// A self-map of a carrier with `table.len()` elements.
    pub fn endo(table: Vec<usize>) -> Result<Self, DynamicsError> {
        let n = table.len();
        Self::new(table, n)
    }

    pub fn identity(n: usize) -> Self {
        VertexMap {
            table: (0..n).collect(),
            target_size: n,
        }
    }

    /// Builds a map from `(source id, target id)` pairs, which must cover
    /// the source carrier exactly once.
    pub fn from_pairs<S: AsRef<str>>(
        source: &Carrier,
        target: &Carrier,
        pairs: &[(S, S)],
    ) -> Result<Self, DynamicsError> {
        let mut table = vec![None; source.len()];
        for (a, b) in pairs {
            let (a, b) = (a.as_ref(), b.as_ref());
            let i = source
                .index_of(a)
                .ok_or_else(|| DynamicsError::UnknownElement(a.to_string()))?;
            let j = target
                .index_of(b)
                .ok_or_else(|| DynamicsError::UnknownElement(b.to_string()))?;
            if table[i].replace(j).is_some() {
                return Err(DynamicsError::DuplicateEntry(a.to_string()));
            }
        }
        let table = table
            .into_iter()
            .enumerate()
            .map(|(i, t)| t.ok_or_else(|| DynamicsError::NotTotal(source.id(i).to_string())))
            .collect::<Result<_, _>>()?;
        Self::new(table, target.len())
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn source_size(&self) -> usize {
        self.table.len()
    }

    pub fn target_size(&self) -> usize {
        self.target_size
    }

    pub fn at(&self, x: usize) -> usize {
        self.table[x]
    }

    pub fn is_bijective(&self) -> bool {
        if self.table.len() != self.target_size {
            return false;
        }
        let mut hit = ElemSet::EMPTY;
        for &t in &self.table {
            hit.insert(t);
        }
        hit.len() == self.target_size
    }

    pub fn inverse(&self) -> Result<VertexMap, DynamicsError> {
        if !self.is_bijective() {
            return Err(DynamicsError::NotBijective);
        }
        let mut inv = vec![0; self.target_size];
        for (i, &t) in self.table.iter().enumerate() {
            inv[t] = i;
        }
        Ok(VertexMap {
            table: inv,
            target_size: self.table.len(),
        })
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &VertexMap) -> VertexMap {
        VertexMap {
            table: inner.table.iter().map(|&x| self.table[x]).collect(),
            target_size: self.target_size,
        }
    }

    /// `f(A) = {f(a) : a ∈ A}`.
    pub fn apply(&self, a: &ElemSet) -> ElemSet {
        a.iter().map(|x| self.table[x]).collect()
    }

    /// `f^n(A)` for a self-map.
    pub fn iterate(&self, a: &ElemSet, n: usize) -> ElemSet {
        (0..n).fold(*a, |s, _| self.apply(&s))
    }

    /// Images of all subsets, indexed by mask (`n ≤ 20`).
    pub fn image_table(&self) -> Vec<ElemSet> {
        let n = self.table.len();
        assert!(n <= 20, "image table needs at most 20 elements");
        let mut out = vec![ElemSet::EMPTY; 1 << n];
        for s in 1..out.len() {
            let low = s.trailing_zeros() as usize;
            let mut img = out[s & (s - 1)];
            img.insert(self.table[low]);
            out[s] = img;
        }
        out
    }
}

/// Outcome of a continuity check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContinuityVerdict {
    pub mode: Mode,
    pub continuous: bool,
    /// Subsets `A δ B` whose images are far apart.
    pub counterexample: Option<(ElemSet, ElemSet)>,
    pub note: Option<String>,
    pub exhaustive: bool,
    pub checked: u64,
}

/// Checks `A δ B ⇒ f(A) δ f(B)` in the given mode.
///
/// Singleton pairs are checked first; for the relations built here that
/// is already complete, since both are generated by their singletons.
/// Subset pairs are then swept exhaustively on small carriers and sampled
/// on larger ones. For a holistic probe the pairs range over the declared
/// family, and every image must itself be declared.
pub fn check_continuity(
    f: &VertexMap,
    src: &ProximitySpace,
    dst: &ProximitySpace,
    mode: Mode,
    budget: &Budget,
) -> Result<ContinuityVerdict, DynamicsError> {
    if f.source_size() != src.len() || f.target_size() != dst.len() {
        return Err(DynamicsError::DomainMismatch {
            map: f.source_size(),
            space: src.len(),
        });
    }
    let mut verdict = ContinuityVerdict {
        mode,
        continuous: true,
        counterexample: None,
        note: None,
        exhaustive: true,
        checked: 0,
    };

    if mode == Mode::Descriptive {
        if let Some(ProbeTable::Holistic(h)) = src.probe().map(|p| &p.table) {
            let family: Vec<ElemSet> = h.entries().iter().map(|e| e.set).collect();
            for a in &family {
                for b in &family {
                    verdict.checked += 1;
                    if !src.descriptive_near(a, b)? {
                        continue;
                    }
                    let (fa, fb) = (f.apply(a), f.apply(b));
                    let near = match dst.descriptive_near(&fa, &fb) {
                        Ok(near) => near,
                        Err(ProximityError::UndeclaredSubset { subset, .. }) => {
                            verdict.note = Some(format!("image {subset} has no description"));
                            false
                        }
                        Err(e) => return Err(e.into()),
                    };
                    if !near {
                        verdict.continuous = false;
                        verdict.counterexample = Some((*a, *b));
                        return Ok(verdict);
                    }
                }
            }
            return Ok(verdict);
        }
    }

    let violates =
        |a: &ElemSet, b: &ElemSet, fa: &ElemSet, fb: &ElemSet| -> Result<bool, ProximityError> {
            Ok(src.near(a, b, mode)? && !dst.near(fa, fb, mode)?)
        };

    let n = src.len();
    for x in 0..n {
        for y in 0..n {
            let (a, b) = (ElemSet::singleton(x), ElemSet::singleton(y));
            verdict.checked += 1;
            if violates(
                &a,
                &b,
                &ElemSet::singleton(f.at(x)),
                &ElemSet::singleton(f.at(y)),
            )? {
                verdict.continuous = false;
                verdict.counterexample = Some((a, b));
                return Ok(verdict);
            }
        }
    }

    if budget.is_exhaustive(n) {
        let images = f.image_table();
        for (am, fa) in images.iter().enumerate() {
            let a = ElemSet::from_mask(am as u64);
            for (bm, fb) in images.iter().enumerate() {
                let b = ElemSet::from_mask(bm as u64);
                if violates(&a, &b, fa, fb)? {
                    verdict.continuous = false;
                    verdict.counterexample = Some((a, b));
                    verdict.checked += 1;
                    return Ok(verdict);
                }
            }
            verdict.checked += images.len() as u64;
        }
    } else {
        verdict.exhaustive = false;
        let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
        for _ in 0..budget.samples {
            let (a, b) = (random_subset(&mut rng, n), random_subset(&mut rng, n));
            verdict.checked += 1;
            if violates(&a, &b, &f.apply(&a), &f.apply(&b))? {
                verdict.continuous = false;
                verdict.counterexample = Some((a, b));
                return Ok(verdict);
            }
        }
    }
    Ok(verdict)
}

/// `f(A) ⊆ A` (spatial) or `Φ(f(A)) ⊆ Φ(A)` (descriptive).
pub fn is_invariant(
    f: &VertexMap,
    space: &ProximitySpace,
    a: &ElemSet,
    mode: Mode,
) -> Result<bool, DynamicsError> {
    let fa = f.apply(a);
    match mode {
        Mode::Spatial => Ok(fa.is_subset(a)),
        Mode::Descriptive => Ok(space.description_subset(&fa, a)?),
    }
}

/// An element of `A` whose image leaves `A`.
pub fn invariance_witness(f: &VertexMap, a: &ElemSet) -> Option<usize> {
    a.iter().find(|&x| !a.contains(f.at(x)))
}

/// Iterates of a subset up to the first repeat.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitRecord {
    #[serde(skip)]
    pub seed: ElemSet,
    /// `A, f(A), f²(A), ..`; when periodic, ends with `f^{τ+p}(A) = f^τ(A)`.
    #[serde(skip)]
    pub sequence: Vec<ElemSet>,
    pub preperiod: Option<usize>,
    pub period: Option<usize>,
    pub truncated: bool,
}

/// Follows `A, f(A), ..` until a subset repeats or `cap` images have been
/// taken.
pub fn orbit(f: &VertexMap, a: &ElemSet, cap: usize) -> OrbitRecord {
    let mut seen: HashMap<ElemSet, usize> = HashMap::new();
    let mut sequence = Vec::new();
    let mut cur = *a;
    for i in 0..=cap {
        if let Some(&first) = seen.get(&cur) {
            sequence.push(cur);
            return OrbitRecord {
                seed: *a,
                sequence,
                preperiod: Some(first),
                period: Some(i - first),
                truncated: false,
            };
        }
        seen.insert(cur, i);
        sequence.push(cur);
        cur = f.apply(&cur);
    }
    OrbitRecord {
        seed: *a,
        sequence,
        preperiod: None,
        period: None,
        truncated: true,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "class", content = "n")]
pub enum SpatialClass {
    Fixed,
    EventualFixed(usize),
    AlmostFixed,
    None,
    /// The orbit cap was reached before the orbit closed.
    Truncated,
}

impl fmt::Display for SpatialClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpatialClass::Fixed => write!(f, "fixed"),
            SpatialClass::EventualFixed(n) => write!(f, "eventual_fixed({n})"),
            SpatialClass::AlmostFixed => write!(f, "almost_fixed"),
            SpatialClass::None => write!(f, "none"),
            SpatialClass::Truncated => write!(f, "none (truncated)"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "class", content = "t")]
pub enum DescriptiveClass {
    DescriptiveFixed,
    EventualDescriptiveFixed(usize),
    AlmostDescriptiveFixed,
    None,
    Truncated,
}

impl fmt::Display for DescriptiveClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DescriptiveClass::DescriptiveFixed => write!(f, "descriptive_fixed"),
            DescriptiveClass::EventualDescriptiveFixed(t) => {
                write!(f, "eventual_descriptive_fixed({t})")
            }
            DescriptiveClass::AlmostDescriptiveFixed => write!(f, "almost_descriptive_fixed"),
            DescriptiveClass::None => write!(f, "none"),
            DescriptiveClass::Truncated => write!(f, "none (truncated)"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DescriptiveReport {
    /// Headline class; its eventual case is `eventual_return`.
    pub class: DescriptiveClass,
    pub fixed: bool,
    /// Least `t ≥ 2` with `Φ(f^t(A)) = Φ(A)`, when `A` is not
    /// descriptively fixed.
    pub eventual_return: Option<usize>,
    /// Least `t ≥ 2` such that `f^t(A)` is descriptively fixed, when `A`
    /// is not.
    pub eventual_iterate_fixed: Option<usize>,
    pub almost: bool,
    /// `f(A) ⩀ A ≠ ∅`.
    pub amiable: bool,
    pub invariant: bool,
    pub description: Description,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FixedSetReport {
    #[serde(skip)]
    pub subset: ElemSet,
    pub spatial: SpatialClass,
    /// `f(A) = A` or `A δ f(A)`.
    pub almost_fixed: bool,
    pub spatial_invariant: bool,
    pub descriptive: Option<DescriptiveReport>,
    pub orbit: OrbitRecord,
}

/// Spatial class from `f(A) = A`, the orbit shape and `A δ f(A)`.
fn spatial_class(orbit: &OrbitRecord, almost: bool) -> SpatialClass {
    let fixed = orbit.sequence.get(1) == Some(&orbit.seed);
    match (orbit.preperiod, orbit.period) {
        _ if fixed => SpatialClass::Fixed,
        (Some(tau), Some(1)) if tau >= 1 => SpatialClass::EventualFixed(tau),
        (Some(0), Some(p)) if p >= 2 => SpatialClass::EventualFixed(p - 1),
        _ if orbit.truncated => SpatialClass::Truncated,
        _ if almost => SpatialClass::AlmostFixed,
        _ => SpatialClass::None,
    }
}

/// `f(A) ⩀ A ≠ ∅`; holistic families are lifted so each declared subset is
/// one element.
fn amiable(space: &ProximitySpace, fa: &ElemSet, a: &ElemSet) -> Result<bool, ProximityError> {
    match space.probe().map(|p| &p.table) {
        Some(ProbeTable::Holistic(h)) => {
            let index = |s: &ElemSet| {
                h.entries().iter().position(|e| e.set == *s).ok_or_else(|| {
                    ProximityError::UndeclaredSubset {
                        probe: space.probe().map(|p| p.name.clone()).unwrap_or_default(),
                        subset: space.carrier().format_set(s),
                    }
                })
            };
            let (i, j) = (index(fa)?, index(a)?);
            let lifted = space.lift_holistic()?;
            Ok(!lifted
                .descriptive_intersection(&ElemSet::singleton(i), &ElemSet::singleton(j))?
                .is_empty())
        }
        _ => Ok(!space.descriptive_intersection(fa, a)?.is_empty()),
    }
}

fn descriptive_report(
    f: &VertexMap,
    space: &ProximitySpace,
    a: &ElemSet,
    orbit: &OrbitRecord,
) -> Result<DescriptiveReport, ProximityError> {
    let fa = f.apply(a);
    let fixed = space.des_eq(&fa, a)?;
    let almost = fixed || space.descriptive_near(a, &fa)?;
    let amiable = amiable(space, &fa, a)?;
    let invariant = space.description_subset(&fa, a)?;

    let (mut eventual_return, mut eventual_iterate_fixed) = (None, None);
    if !fixed && !orbit.truncated {
        // Iterates repeat from index τ with period p, so t ≤ τ + p + 1
        // covers every distinct set and its successor.
        let horizon = orbit.preperiod.unwrap_or(0) + orbit.period.unwrap_or(1) + 1;
        let at = |t: usize| -> ElemSet {
            let (tau, p) = (orbit.preperiod.unwrap_or(0), orbit.period.unwrap_or(1));
            if t < orbit.sequence.len() {
                orbit.sequence[t]
            } else {
                orbit.sequence[tau + (t - tau) % p]
            }
        };
        for t in 2..=horizon.max(2) {
            let ft = at(t);
            if eventual_return.is_none() && space.des_eq(&ft, a)? {
                eventual_return = Some(t);
            }
            if eventual_iterate_fixed.is_none() && space.des_eq(&at(t + 1), &ft)? {
                eventual_iterate_fixed = Some(t);
            }
        }
    }
    let class = if fixed {
        DescriptiveClass::DescriptiveFixed
    } else if let Some(t) = eventual_return {
        DescriptiveClass::EventualDescriptiveFixed(t)
    } else if orbit.truncated {
        DescriptiveClass::Truncated
    } else if almost {
        DescriptiveClass::AlmostDescriptiveFixed
    } else {
        DescriptiveClass::None
    };
    Ok(DescriptiveReport {
        class,
        fixed,
        eventual_return,
        eventual_iterate_fixed,
        almost,
        amiable,
        invariant,
        description: space.describe(a)?,
    })
}

/// Classifies `A` under `f`, spatially and, when the space has a probe,
/// descriptively.
pub fn classify(
    f: &VertexMap,
    space: &ProximitySpace,
    a: &ElemSet,
    cap: usize,
) -> Result<FixedSetReport, DynamicsError> {
    if f.source_size() != space.len() || f.target_size() != space.len() {
        return Err(DynamicsError::DomainMismatch {
            map: f.source_size(),
            space: space.len(),
        });
    }
    let orbit = orbit(f, a, cap);
    let fa = f.apply(a);
    let almost_fixed = fa == *a || space.spatial_near(a, &fa);
    let descriptive = match space.probe() {
        Some(_) => Some(descriptive_report(f, space, a, &orbit)?),
        None => None,
    };
    Ok(FixedSetReport {
        subset: *a,
        spatial: spatial_class(&orbit, almost_fixed),
        almost_fixed,
        spatial_invariant: fa.is_subset(a),
        descriptive,
        orbit,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilyClosureReport {
    pub mode: Mode,
    #[serde(skip)]
    pub union: ElemSet,
    #[serde(skip)]
    pub intersection: ElemSet,
    pub union_invariant: bool,
    pub intersection_invariant: bool,
}

impl FamilyClosureReport {
    pub fn holds(&self) -> bool {
        self.union_invariant && self.intersection_invariant
    }
}

/// Checks that the union and the intersection of a nonempty family of
/// invariant sets are invariant.
pub fn invariant_family_closure(
    f: &VertexMap,
    space: &ProximitySpace,
    sets: &[ElemSet],
    mode: Mode,
) -> Result<FamilyClosureReport, DynamicsError> {
    if sets.is_empty() {
        return Err(DynamicsError::PreconditionViolated(
            "the family is empty".into(),
        ));
    }
    for (i, s) in sets.iter().enumerate() {
        if !is_invariant(f, space, s, mode)? {
            return Err(DynamicsError::PreconditionViolated(format!(
                "set #{i} {} is not {mode} invariant",
                space.carrier().format_set(s)
            )));
        }
    }
    let union = sets.iter().fold(ElemSet::EMPTY, |acc, s| acc.union(s));
    let intersection = sets
        .iter()
        .skip(1)
        .fold(sets[0], |acc, s| acc.intersection(s));
    Ok(FamilyClosureReport {
        mode,
        union,
        intersection,
        union_invariant: is_invariant(f, space, &union, mode)?,
        intersection_invariant: is_invariant(f, space, &intersection, mode)?,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "status")]
pub enum SpatialClosureCheck {
    Checked { invariant: bool },
    NotApplicable { reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClosureReport {
    #[serde(skip)]
    pub closure: ElemSet,
    /// `Φ(f(cl_Φ A)) ⊆ Φ(cl_Φ A)`.
    pub descriptive_invariant: bool,
    /// `f(cl_Φ A) ⊆ cl_Φ A`.
    pub image_contained: bool,
    pub spatial: SpatialClosureCheck,
}

/// Checks that the descriptive closure of a descriptively invariant set is
/// descriptively invariant under a descriptively continuous map. The
/// spatial closure `{x : {x} δ A}` is checked as well when the spatial
/// relation passes Lodato's axiom, `A` is invariant and `f` is continuous.
pub fn closure_invariance(
    f: &VertexMap,
    space: &ProximitySpace,
    a: &ElemSet,
    budget: &Budget,
) -> Result<ClosureReport, DynamicsError> {
    if !is_invariant(f, space, a, Mode::Descriptive)? {
        return Err(DynamicsError::PreconditionViolated(
            "the set is not descriptively invariant".into(),
        ));
    }
    if !check_continuity(f, space, space, Mode::Descriptive, budget)?.continuous {
        return Err(DynamicsError::PreconditionViolated(
            "the map is not descriptively continuous".into(),
        ));
    }
    let closure = space.descriptive_closure(a)?;
    let image = f.apply(&closure);

    let spatial = if !check_axioms(&space.spatial(), AxiomFamily::Lodato, budget)[0].holds() {
        SpatialClosureCheck::NotApplicable {
            reason: "the spatial relation fails Lodato's axiom".into(),
        }
    } else if !f.apply(a).is_subset(a) {
        SpatialClosureCheck::NotApplicable {
            reason: "the set is not spatially invariant".into(),
        }
    } else if !check_continuity(f, space, space, Mode::Spatial, budget)?.continuous {
        SpatialClosureCheck::NotApplicable {
            reason: "the map is not spatially continuous".into(),
        }
    } else {
        let cl = space.spatial_closure(a);
        SpatialClosureCheck::Checked {
            invariant: f.apply(&cl).is_subset(&cl),
        }
    };

    Ok(ClosureReport {
        closure,
        descriptive_invariant: space.description_subset(&image, &closure)?,
        image_contained: image.is_subset(&closure),
        spatial,
    })
}

/// A random self-map of `{0, .., n-1}`.
pub fn random_map<R: Rng>(rng: &mut R, n: usize) -> VertexMap {
    VertexMap {
        table: (0..n).map(|_| rng.random_range(0..n)).collect(),
        target_size: n,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::proximity::{FeatureVector, ProbeAssignment};

    fn parity_space(n: usize) -> ProximitySpace {
        let probe = ProbeAssignment::pointwise(
            "parity",
            (0..n as i64)
                .map(|i| FeatureVector::from_ints(&[i % 2]))
                .collect(),
        )
        .unwrap();
        ProximitySpace::new(Carrier::numbered(n).unwrap())
            .with_probe(probe)
            .unwrap()
    }

    #[test]
    fn apply_examples() {
        let id = VertexMap::identity(5);
        let a = ElemSet::from_mask(0b10110);
        assert_eq!(id.apply(&a), a);
        let constant = VertexMap::endo(vec![3; 5]).unwrap();
        assert_eq!(constant.apply(&a), ElemSet::singleton(3));
        assert!(constant.apply(&ElemSet::EMPTY).is_empty());
    }

    #[test]
    fn from_pairs_requires_a_total_function() {
        let c = Carrier::new(["a", "b"]).unwrap();
        assert!(VertexMap::from_pairs(&c, &c, &[("a", "b"), ("b", "a")])
            .unwrap()
            .is_bijective());
        assert_eq!(
            VertexMap::from_pairs(&c, &c, &[("a", "b")]),
            Err(DynamicsError::NotTotal("b".into()))
        );
        assert_eq!(
            VertexMap::from_pairs(&c, &c, &[("a", "b"), ("a", "a")]),
            Err(DynamicsError::DuplicateEntry("a".into()))
        );
        assert!(matches!(
            VertexMap::from_pairs(&c, &c, &[("a", "z"), ("b", "a")]),
            Err(DynamicsError::UnknownElement(_))
        ));
    }

    #[test]
    fn orbit_shapes() {
        let id = VertexMap::identity(3);
        let o = orbit(&id, &ElemSet::singleton(1), 10);
        assert_eq!((o.preperiod, o.period), (Some(0), Some(1)));

        let swap = VertexMap::endo(vec![1, 0, 2]).unwrap();
        let o = orbit(&swap, &ElemSet::singleton(0), 10);
        assert_eq!((o.preperiod, o.period), (Some(0), Some(2)));
        assert_eq!(o.sequence.len(), 3);

        let constant = VertexMap::endo(vec![2, 2, 2]).unwrap();
        let o = orbit(&constant, &ElemSet::from_mask(0b011), 10);
        assert_eq!((o.preperiod, o.period), (Some(1), Some(1)));

        let cycle = VertexMap::endo(vec![1, 2, 0]).unwrap();
        let o = orbit(&cycle, &ElemSet::singleton(0), 1);
        assert!(o.truncated);
    }

    #[test]
    fn classify_spatial_cases() {
        let s = ProximitySpace::new(Carrier::numbered(4).unwrap());
        let swap = VertexMap::endo(vec![1, 0, 2, 3]).unwrap();
        let r = classify(&swap, &s, &ElemSet::from_mask(0b0011), DEFAULT_ORBIT_CAP).unwrap();
        assert_eq!(r.spatial, SpatialClass::Fixed);
        let r = classify(&swap, &s, &ElemSet::singleton(0), DEFAULT_ORBIT_CAP).unwrap();
        assert_eq!(r.spatial, SpatialClass::EventualFixed(1));

        let settle = VertexMap::endo(vec![1, 2, 2, 0]).unwrap();
        let r = classify(&settle, &s, &ElemSet::singleton(0), DEFAULT_ORBIT_CAP).unwrap();
        assert_eq!(r.spatial, SpatialClass::EventualFixed(2));

        // 3 -> 0 -> 1 -> 2 -> 2: A = {2, 3} maps to {0, 2}, then {1, 2}, {2}.
        let r = classify(&settle, &s, &ElemSet::from_mask(0b1100), DEFAULT_ORBIT_CAP).unwrap();
        assert_eq!(r.spatial, SpatialClass::EventualFixed(3));
        assert!(r.almost_fixed);
    }

    #[test]
    fn almost_fixed_without_eventual() {
        // Two swaps: A = {0, 1, 2} maps onto {0, 1, 3} and back again.
        let s = ProximitySpace::new(Carrier::numbered(4).unwrap());
        let f = VertexMap::endo(vec![1, 0, 3, 2]).unwrap();
        let r = classify(&f, &s, &ElemSet::from_mask(0b0111), DEFAULT_ORBIT_CAP).unwrap();
        assert_eq!(r.spatial, SpatialClass::EventualFixed(1));
        // A pre-periodic orbit entering a 2-cycle is neither.
        let g = VertexMap::endo(vec![1, 2, 1, 3]).unwrap();
        let r = classify(&g, &s, &ElemSet::from_mask(0b1001), DEFAULT_ORBIT_CAP).unwrap();
        assert_eq!(r.spatial, SpatialClass::AlmostFixed);
        let r = classify(&g, &s, &ElemSet::singleton(0), DEFAULT_ORBIT_CAP).unwrap();
        assert_eq!(r.spatial, SpatialClass::None);
    }

    #[test]
    fn descriptive_classes_under_parity() {
        let s = parity_space(4);
        // 0 -> 1 -> 2 -> 3 -> 0 flips parity every step.
        let f = VertexMap::endo(vec![1, 2, 3, 0]).unwrap();
        let r = classify(&f, &s, &ElemSet::singleton(0), DEFAULT_ORBIT_CAP).unwrap();
        let d = r.descriptive.unwrap();
        assert!(!d.fixed && !d.amiable && !d.almost);
        assert_eq!(d.eventual_return, Some(2));
        assert_eq!(d.eventual_iterate_fixed, None);
        assert_eq!(d.class, DescriptiveClass::EventualDescriptiveFixed(2));

        let r = classify(&f, &s, &ElemSet::from_mask(0b0011), DEFAULT_ORBIT_CAP).unwrap();
        let d = r.descriptive.unwrap();
        assert!(d.fixed && d.amiable && d.invariant);
    }

    #[test]
    fn parity_preserving_invariance() {
        let s = parity_space(6);
        let f = VertexMap::endo(vec![2, 3, 4, 5, 0, 1]).unwrap();
        let a = ElemSet::from_mask(0b010101);
        assert!(is_invariant(&f, &s, &a, Mode::Spatial).unwrap());
        assert!(is_invariant(&f, &s, &a, Mode::Descriptive).unwrap());
        let b = ElemSet::singleton(0);
        assert!(!is_invariant(&f, &s, &b, Mode::Spatial).unwrap());
        assert_eq!(invariance_witness(&f, &b), Some(0));
        assert!(is_invariant(&f, &s, &b, Mode::Descriptive).unwrap());
    }

    #[test]
    fn continuity_counterexample_on_discrete_relation() {
        // 0 ~ 1 adjacent; f pulls them apart onto far points.
        let src = ProximitySpace::new(Carrier::numbered(4).unwrap())
            .with_adjacency([(0, 1)])
            .unwrap();
        let f = VertexMap::endo(vec![2, 3, 2, 3]).unwrap();
        let v = check_continuity(&f, &src, &src, Mode::Spatial, &Budget::default()).unwrap();
        assert!(!v.continuous);
        let (a, b) = v.counterexample.unwrap();
        assert!(src.spatial_near(&a, &b));
        assert!(!src.spatial_near(&f.apply(&a), &f.apply(&b)));
        let id = VertexMap::identity(4);
        assert!(
            check_continuity(&id, &src, &src, Mode::Spatial, &Budget::default())
                .unwrap()
                .continuous
        );
    }

    #[test]
    fn closure_invariance_parity_instance() {
        let s = parity_space(6);
        let f = VertexMap::endo(vec![2, 3, 4, 5, 0, 1]).unwrap();
        let a = ElemSet::from_mask(0b000101);
        let r = closure_invariance(&f, &s, &a, &Budget::default()).unwrap();
        assert!(r.descriptive_invariant && r.image_contained);
        assert_eq!(r.closure, ElemSet::from_mask(0b010101));
        assert!(matches!(
            r.spatial,
            SpatialClosureCheck::NotApplicable { .. }
        ));
    }

    #[test]
    fn spatial_closure_skipped_for_non_lodato_relation() {
        let probe =
            ProbeAssignment::pointwise("c", vec![FeatureVector::from_ints(&[0]); 3]).unwrap();
        let s = ProximitySpace::new(Carrier::numbered(3).unwrap())
            .with_adjacency([(0, 1), (1, 2)])
            .unwrap()
            .with_probe(probe)
            .unwrap();
        let id = VertexMap::identity(3);
        let r = closure_invariance(&id, &s, &ElemSet::singleton(0), &Budget::default()).unwrap();
        assert_eq!(
            r.spatial,
            SpatialClosureCheck::NotApplicable {
                reason: "the spatial relation fails Lodato's axiom".into()
            }
        );
    }

    #[test]
    fn family_closure_nested_sets() {
        let s = parity_space(5);
        let f = VertexMap::endo(vec![1, 0, 2, 2, 4]).unwrap();
        let sets = [ElemSet::from_mask(0b00011), ElemSet::from_mask(0b01111)];
        let r = invariant_family_closure(&f, &s, &sets, Mode::Spatial).unwrap();
        assert!(r.holds());
        assert!(matches!(
            invariant_family_closure(&f, &s, &[ElemSet::singleton(0)], Mode::Spatial),
            Err(DynamicsError::PreconditionViolated(_))
        ));
    }

    #[test]
    fn descriptive_intersection_of_invariant_sets_can_fail() {
        // Parity on {1, 2, 3, 4} (indices 0..4), f = {1→1, 2→1, 3→3, 4→3}.
        // {1, 2} and {2, 3} are descriptively invariant; their intersection
        // {2} is even but maps to the odd 1.
        let probe = ProbeAssignment::pointwise(
            "parity",
            [1, 0, 1, 0]
                .iter()
                .map(|&v| FeatureVector::from_ints(&[v]))
                .collect(),
        )
        .unwrap();
        let s = ProximitySpace::new(Carrier::new(["1", "2", "3", "4"]).unwrap())
            .with_probe(probe)
            .unwrap();
        let f = VertexMap::endo(vec![0, 0, 2, 2]).unwrap();
        assert!(
            check_continuity(&f, &s, &s, Mode::Descriptive, &Budget::default())
                .unwrap()
                .continuous
        );
        let sets = [ElemSet::from_mask(0b0011), ElemSet::from_mask(0b0110)];
        let r = invariant_family_closure(&f, &s, &sets, Mode::Descriptive).unwrap();
        assert!(r.union_invariant);
        assert!(!r.intersection_invariant);
    }
}
