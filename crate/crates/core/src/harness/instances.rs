//! Random proximity spaces, continuous maps and conjugate pairs on small
//! carriers, for property tests and the acceptance suite.

use std::ops::RangeInclusive;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;

use crate::conjugacy::ConjugacyMode;
use crate::dynamics::VertexMap;
use crate::elemset::{Carrier, ElemSet};
use crate::proximity::{FeatureVector, ProbeAssignment, ProximitySpace};

#[derive(Debug, Clone, PartialEq)]
pub struct SpaceConfig {
    pub size: RangeInclusive<usize>,
    /// Chance that two distinct elements are adjacent.
    pub adjacency: f64,
    pub arity: usize,
    pub values: RangeInclusive<i64>,
}

impl Default for SpaceConfig {
    fn default() -> Self {
        SpaceConfig {
            size: 1..=8,
            adjacency: 0.3,
            arity: 1,
            values: 0..=2,
        }
    }
}

/// A numbered carrier with random adjacency and a random pointwise probe.
pub fn random_space<R: Rng>(rng: &mut R, cfg: &SpaceConfig) -> ProximitySpace {
    let n = rng.random_range(cfg.size.clone());
    let mut pairs = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.random_bool(cfg.adjacency) {
                pairs.push((a, b));
            }
        }
    }
    let values = (0..n)
        .map(|_| {
            FeatureVector::from_ints(
                &(0..cfg.arity)
                    .map(|_| rng.random_range(cfg.values.clone()))
                    .collect::<Vec<_>>(),
            )
        })
        .collect();
    ProximitySpace::new(Carrier::numbered(n).expect("nonempty"))
        .with_adjacency(pairs)
        .expect("distinct pairs")
        .with_probe(ProbeAssignment::pointwise("phi", values).expect("valid values"))
        .expect("sized probe")
}

pub fn random_permutation<R: Rng>(rng: &mut R, n: usize) -> VertexMap {
    let mut t: Vec<usize> = (0..n).collect();
    t.shuffle(rng);
    VertexMap::endo(t).expect("in range")
}

/// Elements of each probe class.
fn class_members(space: &ProximitySpace) -> Vec<Vec<usize>> {
    let p = space
        .probe()
        .and_then(|p| p.as_pointwise())
        .expect("pointwise probe");
    let mut members = vec![Vec::new(); p.classes().len()];
    for x in 0..space.len() {
        members[p.class_of(x)].push(x);
    }
    members
}

/// A descriptively continuous self-map: a random function on probe classes,
/// realised by arbitrary members of the target classes.
pub fn random_descriptive_map<R: Rng>(rng: &mut R, space: &ProximitySpace) -> VertexMap {
    let p = space
        .probe()
        .and_then(|p| p.as_pointwise())
        .expect("pointwise probe");
    let members = class_members(space);
    let on_classes: Vec<usize> = (0..members.len())
        .map(|_| rng.random_range(0..members.len()))
        .collect();
    let table = (0..space.len())
        .map(|x| {
            *members[on_classes[p.class_of(x)]]
                .choose(rng)
                .expect("classes are nonempty")
        })
        .collect();
    VertexMap::endo(table).expect("in range")
}

/// `x` equals or is adjacent to `y`.
fn linked(space: &ProximitySpace, x: usize, y: usize) -> bool {
    x == y || space.neighbours(x).contains(y)
}

/// Extends `table[..i]` to a map whose linked pairs go to linked pairs,
/// choosing images from `candidates(x)` in random order.
fn extend<R: Rng>(
    rng: &mut R,
    space: &ProximitySpace,
    target: &ProximitySpace,
    table: &mut Vec<usize>,
    candidates: &dyn Fn(usize) -> Vec<usize>,
    budget: &mut usize,
) -> bool {
    let i = table.len();
    if i == space.len() {
        return true;
    }
    if *budget == 0 {
        return false;
    }
    *budget -= 1;
    let mut options = candidates(i);
    options.shuffle(rng);
    for c in options {
        let ok = (0..i).all(|j| !space.neighbours(i).contains(j) || linked(target, table[j], c));
        if ok {
            table.push(c);
            if extend(rng, space, target, table, candidates, budget) {
                return true;
            }
            table.pop();
        }
    }
    false
}

/// A spatially continuous self-map, i.e. one sending adjacent elements to
/// equal or adjacent ones. Falls back to a constant map if the search runs
/// out of steps.
pub fn random_spatial_map<R: Rng>(rng: &mut R, space: &ProximitySpace) -> VertexMap {
    let n = space.len();
    let mut table = Vec::with_capacity(n);
    let mut budget = 10_000;
    if extend(
        rng,
        space,
        space,
        &mut table,
        &|_| (0..n).collect(),
        &mut budget,
    ) {
        return VertexMap::endo(table).expect("in range");
    }
    VertexMap::endo(vec![rng.random_range(0..n); n]).expect("in range")
}

/// The image of `space` under the bijection `h`: adjacency is carried
/// across and the probe is pulled back, `Φ₂(h(x)) = Φ₁(x)`.
pub fn relabel(space: &ProximitySpace, h: &VertexMap) -> ProximitySpace {
    let n = space.len();
    let pairs: Vec<(usize, usize)> = space
        .adjacency_pairs()
        .into_iter()
        .map(|(a, b)| (h.at(a), h.at(b)))
        .collect();
    let inv = h.inverse().expect("bijection");
    let mut y =
        ProximitySpace::new(Carrier::new((0..n).map(|i| format!("y{i}"))).expect("nonempty"))
            .with_adjacency(pairs)
            .expect("distinct pairs");
    if let Some(p) = space.probe().and_then(|p| p.as_pointwise()) {
        let values = (0..n).map(|yy| p.value(inv.at(yy)).clone()).collect();
        y = y
            .with_probe(ProbeAssignment::pointwise("phi", values).expect("valid values"))
            .expect("sized probe");
    }
    y
}

/// Maps `f`, `g` and a conjugacy `h` between spaces `x` and `y`.
#[derive(Debug, Clone)]
pub struct ConjugateInstance {
    pub x: ProximitySpace,
    pub y: ProximitySpace,
    pub f: VertexMap,
    pub g: VertexMap,
    pub h: VertexMap,
}

/// A conjugate pair in `mode`, built so the defining relation holds:
///
/// * strict: `g = h f h⁻¹`;
/// * descriptive (and weak descriptive): `g(y)` is any element with the
///   description of `h f h⁻¹(y)`;
/// * weak: `g(y)` is `h f h⁻¹(y)` or adjacent to it, chosen so that `g`
///   stays continuous.
pub fn conjugate_pair<R: Rng>(
    rng: &mut R,
    mode: ConjugacyMode,
    cfg: &SpaceConfig,
) -> ConjugateInstance {
    let x = random_space(rng, cfg);
    let n = x.len();
    let h = random_permutation(rng, n);
    let y = relabel(&x, &h);
    let inv = h.inverse().expect("bijection");
    let f = match mode {
        ConjugacyMode::Strict | ConjugacyMode::Weak => random_spatial_map(rng, &x),
        ConjugacyMode::Descriptive | ConjugacyMode::WeakDescriptive => {
            random_descriptive_map(rng, &x)
        }
    };
    let phi = h.compose(&f).compose(&inv);
    let g = match mode {
        ConjugacyMode::Strict => phi,
        ConjugacyMode::Descriptive | ConjugacyMode::WeakDescriptive => {
            let p = y
                .probe()
                .and_then(|p| p.as_pointwise())
                .expect("pointwise probe");
            let members = class_members(&y);
            let table = (0..n)
                .map(|yy| {
                    *members[p.class_of(phi.at(yy))]
                        .choose(rng)
                        .expect("nonempty")
                })
                .collect();
            VertexMap::endo(table).expect("in range")
        }
        ConjugacyMode::Weak => {
            let candidates = |yy: usize| -> Vec<usize> {
                let mut c: Vec<usize> = y.neighbours(phi.at(yy)).iter().collect();
                c.push(phi.at(yy));
                c
            };
            let mut table = Vec::with_capacity(n);
            let mut budget = 10_000;
            if extend(rng, &y, &y, &mut table, &candidates, &mut budget) {
                VertexMap::endo(table).expect("in range")
            } else {
                phi
            }
        }
    };
    ConjugateInstance { x, y, f, g, h }
}

/// A random subset, each element kept with probability one half.
pub fn random_set<R: Rng>(rng: &mut R, n: usize) -> ElemSet {
    (0..n).filter(|_| rng.random_bool(0.5)).collect()
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::conjugacy::check_conjugacy;
    use crate::dynamics::check_continuity;
    use crate::proximity::{Budget, Mode};

    #[test]
    fn generated_maps_are_continuous() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let s = random_space(&mut rng, &SpaceConfig::default());
            let f = random_spatial_map(&mut rng, &s);
            assert!(
                check_continuity(&f, &s, &s, Mode::Spatial, &Budget::default())
                    .unwrap()
                    .continuous
            );
            let f = random_descriptive_map(&mut rng, &s);
            assert!(
                check_continuity(&f, &s, &s, Mode::Descriptive, &Budget::default())
                    .unwrap()
                    .continuous
            );
        }
    }

    #[test]
    fn generated_pairs_are_conjugate() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for mode in ConjugacyMode::ALL {
            for _ in 0..30 {
                let c = conjugate_pair(&mut rng, mode, &SpaceConfig::default());
                let v = check_conjugacy(&c.f, &c.g, &c.h, &c.x, &c.y, mode, &Budget::default())
                    .unwrap();
                assert!(v.holds, "{mode}: {v:?}");
            }
        }
    }
}
