//! Proximal isomorphisms, conjugacies between self-maps, and transport of
//! iterates and fixed-set classes along a conjugacy.
//!
//! Given `f: X → X`, `g: Y → Y` and a bijection `h: X → Y`, the modes ask:
//!
//! * strict: `g(h(A)) = h(f(A))`,
//! * descriptive: `Φ₂(g(h(A))) = Φ₂(h(f(A)))`,
//! * weak: `g(h(A)) δ₂ h(f(A))` in the spatial relation of `Y`,
//! * weak descriptive: `g(h(A)) δ_Φ₂ h(f(A))`,
//!
//! for every nonempty `A ⊆ X`.

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::dynamics::{
    check_continuity, classify, ContinuityVerdict, DynamicsError, FixedSetReport, SpatialClass,
    VertexMap,
};
use crate::elemset::ElemSet;
use crate::proximity::axioms::random_subset;
use crate::proximity::{Budget, Mode, ProximityError, ProximitySpace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConjugacyMode {
    Strict,
    Descriptive,
    Weak,
    WeakDescriptive,
}

impl ConjugacyMode {
    pub const ALL: [ConjugacyMode; 4] = [
        ConjugacyMode::Strict,
        ConjugacyMode::Descriptive,
        ConjugacyMode::Weak,
        ConjugacyMode::WeakDescriptive,
    ];

    /// The proximity in which `f`, `g` and `h` must be continuous.
    pub fn proximity(self) -> Mode {
        match self {
            ConjugacyMode::Strict | ConjugacyMode::Weak => Mode::Spatial,
            ConjugacyMode::Descriptive | ConjugacyMode::WeakDescriptive => Mode::Descriptive,
        }
    }
}

impl fmt::Display for ConjugacyMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConjugacyMode::Strict => "strict",
            ConjugacyMode::Descriptive => "descriptive",
            ConjugacyMode::Weak => "weak",
            ConjugacyMode::WeakDescriptive => "weak_descriptive",
        })
    }
}

impl FromStr for ConjugacyMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "strict" => Ok(ConjugacyMode::Strict),
            "descriptive" => Ok(ConjugacyMode::Descriptive),
            "weak" => Ok(ConjugacyMode::Weak),
            "weak_descriptive" | "weak-descriptive" => Ok(ConjugacyMode::WeakDescriptive),
            other => Err(format!("unknown conjugacy mode `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConjugacyError {
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error(transparent)]
    Proximity(#[from] ProximityError),
    #[error("h is not a bijection")]
    NotBijective,
    #[error("h is not a {0} isomorphism")]
    NotAnIsomorphism(Mode),
    #[error("maps are not {} conjugate", .0.mode)]
    NotConjugate(Box<ConjugacyVerdict>),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsomorphismVerdict {
    pub mode: Mode,
    pub forward: ContinuityVerdict,
    pub backward: ContinuityVerdict,
}

impl IsomorphismVerdict {
    pub fn holds(&self) -> bool {
        self.forward.continuous && self.backward.continuous
    }
}

/// Checks that `h` and `h⁻¹` are both continuous in `mode`.
pub fn is_proximal_isomorphism(
    h: &VertexMap,
    x: &ProximitySpace,
    y: &ProximitySpace,
    mode: Mode,
    budget: &Budget,
) -> Result<IsomorphismVerdict, ConjugacyError> {
    let inv = h.inverse().map_err(|_| ConjugacyError::NotBijective)?;
    Ok(IsomorphismVerdict {
        mode,
        forward: check_continuity(h, x, y, mode, budget)?,
        backward: check_continuity(&inv, y, x, mode, budget)?,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConjugacyVerdict {
    pub mode: ConjugacyMode,
    pub holds: bool,
    /// A subset of `X` on which the defining relation fails.
    #[serde(skip)]
    pub counterexample: Option<ElemSet>,
    /// Why the verdict failed when no subset is to blame.
    pub failure: Option<String>,
    pub exhaustive: bool,
    pub checked: u64,
}

/// The relation between `P = lhs(A)` and `Q = rhs(A)` required by `mode`.
fn related(
    mode: ConjugacyMode,
    y: &ProximitySpace,
    p: &ElemSet,
    q: &ElemSet,
) -> Result<bool, ProximityError> {
    match mode {
        ConjugacyMode::Strict => Ok(p == q),
        ConjugacyMode::Descriptive => y.des_eq(p, q),
        ConjugacyMode::Weak => Ok(y.spatial_near(p, q)),
        ConjugacyMode::WeakDescriptive => y.descriptive_near(p, q),
    }
}

struct Sweep {
    counterexample: Option<ElemSet>,
    exhaustive: bool,
    checked: u64,
}

/// Checks `lhs(A) ~ rhs(A)` for nonempty `A ⊆ X`: singletons first, then
/// every subset on small carriers or a seeded sample on large ones.
fn sweep(
    mode: ConjugacyMode,
    lhs: &VertexMap,
    rhs: &VertexMap,
    y: &ProximitySpace,
    budget: &Budget,
) -> Result<Sweep, ProximityError> {
    let n = lhs.source_size();
    let mut out = Sweep {
        counterexample: None,
        exhaustive: budget.is_exhaustive(n),
        checked: 0,
    };
    let test = |a: ElemSet, out: &mut Sweep| -> Result<bool, ProximityError> {
        out.checked += 1;
        if !related(mode, y, &lhs.apply(&a), &rhs.apply(&a))? {
            out.counterexample = Some(a);
            return Ok(false);
        }
        Ok(true)
    };
    for x in 0..n {
        if !test(ElemSet::singleton(x), &mut out)? {
            return Ok(out);
        }
    }
    if out.exhaustive {
        for mask in 1u64..(1 << n) {
            if mask.count_ones() > 1 && !test(ElemSet::from_mask(mask), &mut out)? {
                return Ok(out);
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
        for _ in 0..budget.samples {
            let a = random_subset(&mut rng, n);
            if !a.is_empty() && !test(a, &mut out)? {
                return Ok(out);
            }
        }
    }
    Ok(out)
}

/// Decides whether `h` conjugates `f` to `g` in `mode`. Fails with
/// `NotAnIsomorphism` when `h` is not an isomorphism in the matching
/// proximity; discontinuous `f` or `g` yields a failed verdict.
pub fn check_conjugacy(
    f: &VertexMap,
    g: &VertexMap,
    h: &VertexMap,
    x: &ProximitySpace,
    y: &ProximitySpace,
    mode: ConjugacyMode,
    budget: &Budget,
) -> Result<ConjugacyVerdict, ConjugacyError> {
    let prox = mode.proximity();
    if !is_proximal_isomorphism(h, x, y, prox, budget)?.holds() {
        return Err(ConjugacyError::NotAnIsomorphism(prox));
    }
    let mut verdict = ConjugacyVerdict {
        mode,
        holds: false,
        counterexample: None,
        failure: None,
        exhaustive: true,
        checked: 0,
    };
    for (name, map, space) in [("f", f, x), ("g", g, y)] {
        if !check_continuity(map, space, space, prox, budget)?.continuous {
            verdict.failure = Some(format!("{name} is not {prox} continuous"));
            return Ok(verdict);
        }
    }
    let s = sweep(mode, &g.compose(h), &h.compose(f), y, budget)?;
    verdict.holds = s.counterexample.is_none();
    verdict.counterexample = s.counterexample;
    verdict.exhaustive = s.exhaustive;
    verdict.checked = s.checked;
    Ok(verdict)
}

/// A conjugacy that has passed `check_conjugacy`.
#[derive(Debug, Clone)]
pub struct ConjugacyWitness {
    mode: ConjugacyMode,
    f: VertexMap,
    g: VertexMap,
    h: VertexMap,
    x: ProximitySpace,
    y: ProximitySpace,
    verdict: ConjugacyVerdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PowerReport {
    pub n: usize,
    pub holds: bool,
    #[serde(skip)]
    pub counterexample: Option<ElemSet>,
    pub checked: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Implication {
    Holds,
    Violated,
    /// The premise is false for this subset.
    Vacuous,
}

impl Implication {
    fn of(premise: bool, conclusion: bool) -> Self {
        match (premise, conclusion) {
            (false, _) => Implication::Vacuous,
            (true, true) => Implication::Holds,
            (true, false) => Implication::Violated,
        }
    }

    pub fn violated(self) -> bool {
        self == Implication::Violated
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FixedSetTransport {
    pub mode: ConjugacyMode,
    pub source: FixedSetReport,
    pub image: FixedSetReport,
    /// Fixed under `f` ⇒ `h(A)` fixed under `g`.
    pub fixed: Implication,
    /// Eventually fixed with index `n` ⇒ `h(A)` eventually fixed with `n`.
    pub eventual: Implication,
    /// Almost fixed ⇒ `h(A)` almost fixed.
    pub almost: Implication,
    /// Almost fixed ⇒ `h(A)` fixed. Stronger than `almost` and false in
    /// general; reported for comparison.
    pub almost_to_fixed: Implication,
}

impl FixedSetTransport {
    pub fn holds(&self) -> bool {
        !(self.fixed.violated() || self.eventual.violated() || self.almost.violated())
    }
}

impl ConjugacyWitness {
    /// Runs `check_conjugacy` and keeps the triple if it passes.
    pub fn establish(
        f: VertexMap,
        g: VertexMap,
        h: VertexMap,
        x: ProximitySpace,
        y: ProximitySpace,
        mode: ConjugacyMode,
        budget: &Budget,
    ) -> Result<Self, ConjugacyError> {
        let verdict = check_conjugacy(&f, &g, &h, &x, &y, mode, budget)?;
        if !verdict.holds {
            return Err(ConjugacyError::NotConjugate(Box::new(verdict)));
        }
        Ok(ConjugacyWitness {
            mode,
            f,
            g,
            h,
            x,
            y,
            verdict,
        })
    }

    pub fn mode(&self) -> ConjugacyMode {
        self.mode
    }

    pub fn maps(&self) -> (&VertexMap, &VertexMap, &VertexMap) {
        (&self.f, &self.g, &self.h)
    }

    pub fn spaces(&self) -> (&ProximitySpace, &ProximitySpace) {
        (&self.x, &self.y)
    }

    pub fn verdict(&self) -> &ConjugacyVerdict {
        &self.verdict
    }

    /// `h⁻¹` as a conjugacy from `g` to `f`, checked afresh.
    pub fn reversed(&self, budget: &Budget) -> Result<ConjugacyWitness, ConjugacyError> {
        let inv = self.h.inverse()?;
        ConjugacyWitness::establish(
            self.g.clone(),
            self.f.clone(),
            inv,
            self.y.clone(),
            self.x.clone(),
            self.mode,
            budget,
        )
    }

    /// Checks `h(f^n(A)) ~ g^n(h(A))` in the witness's mode.
    pub fn transport_power(
        &self,
        n: usize,
        budget: &Budget,
    ) -> Result<PowerReport, ConjugacyError> {
        if n == 0 {
            return Err(ConjugacyError::PreconditionViolated(
                "n must be positive".into(),
            ));
        }
        let (mut fnn, mut gn) = (self.f.clone(), self.g.clone());
        for _ in 1..n {
            fnn = self.f.compose(&fnn);
            gn = self.g.compose(&gn);
        }
        let s = sweep(
            self.mode,
            &gn.compose(&self.h),
            &self.h.compose(&fnn),
            &self.y,
            budget,
        )?;
        Ok(PowerReport {
            n,
            holds: s.counterexample.is_none(),
            counterexample: s.counterexample,
            checked: s.checked,
        })
    }

    /// Classifies `A` under `f` and `h(A)` under `g` independently and
    /// compares the classes. Descriptive modes use descriptive classes,
    /// the others spatial ones.
    pub fn transport_fixed_sets(
        &self,
        a: &ElemSet,
        cap: usize,
    ) -> Result<FixedSetTransport, ConjugacyError> {
        let source = classify(&self.f, &self.x, a, cap)?;
        let image = classify(&self.g, &self.y, &self.h.apply(a), cap)?;
        let (fixed, eventual, almost, almost_to_fixed) = match self.mode.proximity() {
            Mode::Spatial => {
                let (s, i) = (&source, &image);
                let eventual = match s.spatial {
                    SpatialClass::EventualFixed(n) => {
                        Implication::of(true, i.spatial == SpatialClass::EventualFixed(n))
                    }
                    _ => Implication::Vacuous,
                };
                (
                    Implication::of(
                        s.spatial == SpatialClass::Fixed,
                        i.spatial == SpatialClass::Fixed,
                    ),
                    eventual,
                    Implication::of(s.almost_fixed, i.almost_fixed),
                    Implication::of(s.almost_fixed, i.spatial == SpatialClass::Fixed),
                )
            }
            Mode::Descriptive => {
                let missing =
                    || ConjugacyError::PreconditionViolated("both spaces need a probe".into());
                let s = source.descriptive.as_ref().ok_or_else(missing)?;
                let i = image.descriptive.as_ref().ok_or_else(missing)?;
                (
                    Implication::of(s.fixed, i.fixed),
                    Implication::of(
                        s.eventual_return.is_some(),
                        i.eventual_return == s.eventual_return,
                    ),
                    Implication::of(s.almost, i.almost),
                    Implication::of(s.almost, i.fixed),
                )
            }
        };
        Ok(FixedSetTransport {
            mode: self.mode,
            source,
            image,
            fixed,
            eventual,
            almost,
            almost_to_fixed,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::DEFAULT_ORBIT_CAP;
    use crate::elemset::Carrier;
    use crate::proximity::{FeatureVector, ProbeAssignment};

    fn path(n: usize, values: &[i64]) -> ProximitySpace {
        let probe = ProbeAssignment::pointwise(
            "v",
            values
                .iter()
                .map(|&v| FeatureVector::from_ints(&[v]))
                .collect(),
        )
        .unwrap();
        ProximitySpace::new(Carrier::numbered(n).unwrap())
            .with_adjacency((1..n).map(|i| (i - 1, i)))
            .unwrap()
            .with_probe(probe)
            .unwrap()
    }

    fn map(t: &[usize]) -> VertexMap {
        VertexMap::endo(t.to_vec()).unwrap()
    }

    #[test]
    fn identity_conjugates_a_map_to_itself() {
        let x = path(4, &[0, 1, 0, 1]);
        let f = map(&[1, 0, 1, 2]);
        let id = VertexMap::identity(4);
        for mode in ConjugacyMode::ALL {
            let v = check_conjugacy(&f, &f, &id, &x, &x, mode, &Budget::default()).unwrap();
            assert!(v.holds, "{mode}");
        }
    }

    #[test]
    fn relabelling_gives_strict_conjugates() {
        // Reversing the path is an automorphism; g = h f h⁻¹.
        let x = path(4, &[0, 1, 2, 3]);
        let f = map(&[1, 2, 2, 3]);
        let h = map(&[3, 2, 1, 0]);
        let g = h.compose(&f).compose(&h.inverse().unwrap());
        let v = check_conjugacy(
            &f,
            &g,
            &h,
            &x,
            &x,
            ConjugacyMode::Strict,
            &Budget::default(),
        )
        .unwrap();
        assert!(v.holds && v.exhaustive);
        let wrong = map(&[0, 0, 1, 2]);
        let v = check_conjugacy(
            &f,
            &wrong,
            &h,
            &x,
            &x,
            ConjugacyMode::Strict,
            &Budget::default(),
        )
        .unwrap();
        assert!(!v.holds && v.counterexample.is_some());
    }

    #[test]
    fn weak_but_not_descriptive() {
        // g shifts the path one step right; every image is adjacent to its
        // source but carries a different value.
        let x = path(4, &[0, 1, 2, 3]);
        let f = VertexMap::identity(4);
        let g = map(&[1, 2, 3, 3]);
        let h = VertexMap::identity(4);
        let b = Budget::default();
        assert!(
            check_conjugacy(&f, &g, &h, &x, &x, ConjugacyMode::Weak, &b)
                .unwrap()
                .holds
        );
        let v = check_conjugacy(&f, &g, &h, &x, &x, ConjugacyMode::Descriptive, &b).unwrap();
        assert!(!v.holds);
        assert_eq!(v.counterexample, Some(ElemSet::singleton(0)));
    }

    #[test]
    fn weak_transport_fails_beyond_one_step() {
        let x = path(4, &[0, 1, 2, 3]);
        let w = ConjugacyWitness::establish(
            VertexMap::identity(4),
            map(&[1, 2, 3, 3]),
            VertexMap::identity(4),
            x.clone(),
            x,
            ConjugacyMode::Weak,
            &Budget::default(),
        )
        .unwrap();
        assert!(w.transport_power(1, &Budget::default()).unwrap().holds);
        let r = w.transport_power(2, &Budget::default()).unwrap();
        assert!(!r.holds);
        assert_eq!(r.counterexample, Some(ElemSet::singleton(0)));
    }

    #[test]
    fn collapsing_descriptions_break_the_inverse() {
        let x = ProximitySpace::new(Carrier::numbered(4).unwrap())
            .with_probe(
                ProbeAssignment::pointwise(
                    "v",
                    (0..4).map(|v| FeatureVector::from_ints(&[v])).collect(),
                )
                .unwrap(),
            )
            .unwrap();
        let y = ProximitySpace::new(Carrier::numbered(4).unwrap())
            .with_probe(
                ProbeAssignment::pointwise(
                    "v",
                    [0, 0, 1, 2]
                        .iter()
                        .map(|&v| FeatureVector::from_ints(&[v]))
                        .collect(),
                )
                .unwrap(),
            )
            .unwrap();
        let id = VertexMap::identity(4);
        let v =
            is_proximal_isomorphism(&id, &x, &y, Mode::Descriptive, &Budget::default()).unwrap();
        assert!(v.forward.continuous);
        assert!(!v.backward.continuous);
        assert!(v.backward.counterexample.is_some());
        assert_eq!(
            is_proximal_isomorphism(
                &map(&[0, 0, 1, 2]),
                &x,
                &y,
                Mode::Descriptive,
                &Budget::default()
            ),
            Err(ConjugacyError::NotBijective)
        );
    }

    #[test]
    fn strict_transport_of_classes() {
        let x = path(6, &[0, 1, 0, 1, 0, 1]);
        let f = map(&[1, 2, 2, 3, 3, 4]);
        let h = map(&[5, 4, 3, 2, 1, 0]);
        let g = h.compose(&f).compose(&h.inverse().unwrap());
        let y = ProximitySpace::new(Carrier::numbered(6).unwrap())
            .with_adjacency((1..6).map(|i| (i - 1, i)))
            .unwrap();
        let w =
            ConjugacyWitness::establish(f, g, h, x, y, ConjugacyMode::Strict, &Budget::default())
                .unwrap();
        for n in 1..=5 {
            assert!(w.transport_power(n, &Budget::default()).unwrap().holds);
        }
        for mask in 1u64..64 {
            let t = w
                .transport_fixed_sets(&ElemSet::from_mask(mask), DEFAULT_ORBIT_CAP)
                .unwrap();
            assert!(t.holds());
            assert_eq!(t.source.spatial, t.image.spatial);
        }
        assert!(w.reversed(&Budget::default()).is_ok());
    }

    fn weak_witness(f: &[usize], g: &[usize]) -> ConjugacyWitness {
        let x = path(4, &[0, 1, 2, 3]);
        let id = VertexMap::identity(4);
        ConjugacyWitness::establish(
            map(f),
            map(g),
            id,
            x.clone(),
            x,
            ConjugacyMode::Weak,
            &Budget::default(),
        )
        .unwrap()
    }

    #[test]
    fn weak_conjugacy_does_not_transport_fixed_sets() {
        let a = ElemSet::singleton(0);
        let t = weak_witness(&[0, 1, 2, 3], &[1, 2, 3, 3])
            .transport_fixed_sets(&a, DEFAULT_ORBIT_CAP)
            .unwrap();
        assert_eq!(t.fixed, Implication::Violated);

        // {0, 1} reaches the fixed set {0} in one step under f, but is
        // already fixed under g.
        let a = ElemSet::from_mask(0b11);
        let t = weak_witness(&[0, 0, 0, 0], &[1, 0, 0, 0])
            .transport_fixed_sets(&a, DEFAULT_ORBIT_CAP)
            .unwrap();
        assert_eq!(t.source.spatial, SpatialClass::EventualFixed(1));
        assert_eq!(t.image.spatial, SpatialClass::Fixed);
        assert_eq!(t.eventual, Implication::Violated);

        // {0} is near f({0}) = {1} but not near g({0}) = {2}.
        let a = ElemSet::singleton(0);
        let t = weak_witness(&[1, 0, 0, 0], &[2, 1, 0, 0])
            .transport_fixed_sets(&a, DEFAULT_ORBIT_CAP)
            .unwrap();
        assert_eq!(t.almost, Implication::Violated);
    }
}
