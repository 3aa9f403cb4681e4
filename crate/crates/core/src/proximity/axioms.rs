//! Exhaustive and sampled checks of the Čech, descriptive Čech and Lodato
//! axioms for an arbitrary relation on subsets.
//!
//! Up to [`MAX_EXHAUSTIVE`] elements the relation is tabulated over all
//! subset pairs. The union axiom is then decided per `A` by counting, for
//! every `S`, the ordered pairs of sets far from `A` whose union is `S`
//! (a subset-sum transform), and Lodato's axiom by closing the sets near `A`
//! upwards. Larger carriers are sampled.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::elemset::ElemSet;

/// Largest carrier checked exhaustively (4096 subsets).
pub const MAX_EXHAUSTIVE: usize = 12;

/// A binary relation on the subsets of `{0, .., size-1}`.
pub trait Proximity {
    fn size(&self) -> usize;

    fn near(&self, a: &ElemSet, b: &ElemSet) -> bool;

    /// `A ⩀ B` when the relation is descriptive.
    fn descriptive_intersection(&self, _a: &ElemSet, _b: &ElemSet) -> Option<ElemSet> {
        None
    }
}

/// A relation given by a closure, for hand-built counterexamples.
pub struct FnRelation<F> {
    size: usize,
    f: F,
}

impl<F: Fn(&ElemSet, &ElemSet) -> bool> FnRelation<F> {
    pub fn new(size: usize, f: F) -> Self {
        FnRelation { size, f }
    }
}

impl<F: Fn(&ElemSet, &ElemSet) -> bool> Proximity for FnRelation<F> {
    fn size(&self) -> usize {
        self.size
    }

    fn near(&self, a: &ElemSet, b: &ElemSet) -> bool {
        (self.f)(a, b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AxiomFamily {
    Cech,
    DescriptiveCech,
    Lodato,
}

impl std::str::FromStr for AxiomFamily {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "cech" => Ok(AxiomFamily::Cech),
            "descriptive_cech" => Ok(AxiomFamily::DescriptiveCech),
            "lodato" => Ok(AxiomFamily::Lodato),
            _ => Err(format!(
                "unknown axiom family `{s}` (cech, descriptive_cech, lodato)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Axiom {
    #[serde(rename = "P.0")]
    P0,
    #[serde(rename = "P.1")]
    P1,
    #[serde(rename = "P.2")]
    P2,
    #[serde(rename = "P.3")]
    P3,
    #[serde(rename = "dP.0")]
    DP0,
    #[serde(rename = "dP.1")]
    DP1,
    #[serde(rename = "dP.2")]
    DP2,
    #[serde(rename = "dP.3")]
    DP3,
    Lodato,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axiom::P0 => "P.0",
            Axiom::P1 => "P.1",
            Axiom::P2 => "P.2",
            Axiom::P3 => "P.3",
            Axiom::DP0 => "dP.0",
            Axiom::DP1 => "dP.1",
            Axiom::DP2 => "dP.2",
            Axiom::DP3 => "dP.3",
            Axiom::Lodato => "Lodato",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AxiomStatus {
    Holds,
    Violated,
    /// The relation lacks an operation the axiom refers to.
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomReport {
    pub axiom: Axiom,
    pub status: AxiomStatus,
    /// The violating subsets, in the order the axiom names them.
    pub counterexample: Option<Vec<ElemSet>>,
    pub exhaustive: bool,
    /// Number of instances examined.
    pub checked: u64,
}

impl AxiomReport {
    pub fn holds(&self) -> bool {
        self.status == AxiomStatus::Holds
    }
}

/// How much work a check may do.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// Carriers up to this size are checked exhaustively (capped at
    /// [`MAX_EXHAUSTIVE`]).
    pub exhaustive_limit: usize,
    /// Samples per axiom above the limit.
    pub samples: usize,
    pub seed: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            exhaustive_limit: MAX_EXHAUSTIVE,
            samples: 20_000,
            seed: 0,
        }
    }
}

impl Budget {
    pub fn is_exhaustive(&self, size: usize) -> bool {
        size <= self.exhaustive_limit.min(MAX_EXHAUSTIVE)
    }
}

/// A uniformly random subset of `{0, .., n-1}`.
pub(crate) fn random_subset<R: Rng>(rng: &mut R, n: usize) -> ElemSet {
    (0..n).filter(|_| rng.random_bool(0.5)).collect()
}

pub fn check_axioms(rel: &dyn Proximity, family: AxiomFamily, budget: &Budget) -> Vec<AxiomReport> {
    let n = rel.size();
    if budget.is_exhaustive(n) {
        let table = NearTable::build(rel);
        match family {
            AxiomFamily::Cech => vec![
                table.p0(Axiom::P0),
                table.p1(Axiom::P1),
                table.p2(Axiom::P2),
                table.p3(Axiom::P3),
            ],
            AxiomFamily::DescriptiveCech => vec![
                table.p0(Axiom::DP0),
                table.p1(Axiom::DP1),
                table.dp2(rel),
                table.p3(Axiom::DP3),
            ],
            AxiomFamily::Lodato => vec![table.lodato()],
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
        let s = Sampler {
            rel,
            n,
            samples: budget.samples,
        };
        match family {
            AxiomFamily::Cech => vec![
                s.p0(Axiom::P0, &mut rng),
                s.p1(Axiom::P1, &mut rng),
                s.p2(&mut rng),
                s.p3(Axiom::P3, &mut rng),
            ],
            AxiomFamily::DescriptiveCech => vec![
                s.p0(Axiom::DP0, &mut rng),
                s.p1(Axiom::DP1, &mut rng),
                s.dp2(&mut rng),
                s.p3(Axiom::DP3, &mut rng),
            ],
            AxiomFamily::Lodato => vec![s.lodato(&mut rng)],
        }
    }
}

fn report(
    axiom: Axiom,
    witness: Option<Vec<ElemSet>>,
    exhaustive: bool,
    checked: u64,
) -> AxiomReport {
    AxiomReport {
        axiom,
        status: if witness.is_some() {
            AxiomStatus::Violated
        } else {
            AxiomStatus::Holds
        },
        counterexample: witness,
        exhaustive,
        checked,
    }
}

/// The relation tabulated over all pairs of subsets of a small carrier.
struct NearTable {
    n: usize,
    bits: Vec<u64>,
}

impl NearTable {
    fn build(rel: &dyn Proximity) -> Self {
        let n = rel.size();
        let count = 1usize << n;
        let mut bits = vec![0u64; (count * count).div_ceil(64)];
        for a in 0..count {
            let sa = ElemSet::from_mask(a as u64);
            for b in 0..count {
                if rel.near(&sa, &ElemSet::from_mask(b as u64)) {
                    let k = (a << n) | b;
                    bits[k / 64] |= 1 << (k % 64);
                }
            }
        }
        NearTable { n, bits }
    }

    fn count(&self) -> usize {
        1 << self.n
    }

    fn near(&self, a: usize, b: usize) -> bool {
        let k = (a << self.n) | b;
        self.bits[k / 64] & (1 << (k % 64)) != 0
    }

    fn pairs(&self) -> u64 {
        (self.count() as u64).pow(2)
    }

    fn p0(&self, axiom: Axiom) -> AxiomReport {
        let w = (0..self.count())
            .find(|&a| self.near(a, 0))
            .map(|a| vec![set(a), ElemSet::EMPTY]);
        report(axiom, w, true, self.count() as u64)
    }

    fn p1(&self, axiom: Axiom) -> AxiomReport {
        let mut w = None;
        'outer: for a in 0..self.count() {
            for b in 0..self.count() {
                if self.near(a, b) && !self.near(b, a) {
                    w = Some(vec![set(a), set(b)]);
                    break 'outer;
                }
            }
        }
        report(axiom, w, true, self.pairs())
    }

    fn p2(&self, axiom: Axiom) -> AxiomReport {
        let mut w = None;
        'outer: for a in 0..self.count() {
            for b in 0..self.count() {
                if a & b != 0 && !self.near(a, b) {
                    w = Some(vec![set(a), set(b)]);
                    break 'outer;
                }
            }
        }
        report(axiom, w, true, self.pairs())
    }

    fn dp2(&self, rel: &dyn Proximity) -> AxiomReport {
        let mut w = None;
        'outer: for a in 0..self.count() {
            for b in 0..self.count() {
                let Some(dcap) = rel.descriptive_intersection(&set(a), &set(b)) else {
                    return AxiomReport {
                        axiom: Axiom::DP2,
                        status: AxiomStatus::NotApplicable,
                        counterexample: None,
                        exhaustive: true,
                        checked: 0,
                    };
                };
                if !dcap.is_empty() && !self.near(a, b) {
                    w = Some(vec![set(a), set(b)]);
                    break 'outer;
                }
            }
        }
        report(Axiom::DP2, w, true, self.pairs())
    }

    /// `A δ (B ∪ C) ⇒ A δ B or A δ C`.
    ///
    /// For each `A`, the number of ordered pairs `(B, C)` of sets far from
    /// `A` with `B ∪ C = S` is the Möbius transform of the squared count of
    /// far subsets of `S`. The axiom fails iff some such `S` is near `A`.
    fn p3(&self, axiom: Axiom) -> AxiomReport {
        let count = self.count();
        let mut far_below = vec![0i64; count];
        for a in 0..count {
            for (s, slot) in far_below.iter_mut().enumerate() {
                *slot = i64::from(!self.near(a, s));
            }
            subset_sum(&mut far_below, self.n);
            for v in far_below.iter_mut() {
                *v *= *v;
            }
            subset_difference(&mut far_below, self.n);
            if let Some(s) = (0..count).find(|&s| far_below[s] > 0 && self.near(a, s)) {
                let (b, c) = self
                    .far_cover(a, s)
                    .expect("a positive pair count has a witness");
                return report(
                    axiom,
                    Some(vec![set(a), set(b), set(c)]),
                    true,
                    (count as u64).pow(3),
                );
            }
        }
        report(axiom, None, true, (count as u64).pow(3))
    }

    /// Sets `B`, `C` far from `a` with `B ∪ C = s`.
    fn far_cover(&self, a: usize, s: usize) -> Option<(usize, usize)> {
        for b in submasks(s) {
            if self.near(a, b) {
                continue;
            }
            let rest = s & !b;
            for extra in submasks(b) {
                let c = rest | extra;
                if !self.near(a, c) {
                    return Some((b, c));
                }
            }
        }
        None
    }

    /// `A δ B` and `{b} δ C` for every `b ∈ B` imply `A δ C`.
    fn lodato(&self) -> AxiomReport {
        let count = self.count();
        let near_c: Vec<usize> = (0..count)
            .map(|c| {
                (0..self.n)
                    .filter(|&b| self.near(1 << b, c))
                    .fold(0, |m, b| m | 1 << b)
            })
            .collect();
        let mut down = vec![0i64; count];
        for a in 0..count {
            for (x, slot) in down.iter_mut().enumerate() {
                *slot = i64::from(self.near(a, x));
            }
            // down[x] > 0 iff some B ⊆ x is near A
            subset_sum(&mut down, self.n);
            for (c, &p) in near_c.iter().enumerate() {
                if down[p] > 0 && !self.near(a, c) {
                    let b = submasks(p)
                        .find(|&b| self.near(a, b))
                        .expect("a positive count has a witness");
                    return report(
                        Axiom::Lodato,
                        Some(vec![set(a), set(b), set(c)]),
                        true,
                        (count as u64).pow(2),
                    );
                }
            }
        }
        report(Axiom::Lodato, None, true, (count as u64).pow(2))
    }
}

fn set(mask: usize) -> ElemSet {
    ElemSet::from_mask(mask as u64)
}

/// All submasks of `s`, including `s` and `0`.
fn submasks(s: usize) -> impl Iterator<Item = usize> {
    let mut next = Some(s);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 { None } else { Some((cur - 1) & s) };
        Some(cur)
    })
}

/// In place: `v[S] ← Σ_{T ⊆ S} v[T]`.
fn subset_sum(v: &mut [i64], n: usize) {
    for bit in 0..n {
        let step = 1 << bit;
        for s in 0..v.len() {
            if s & step != 0 {
                v[s] += v[s ^ step];
            }
        }
    }
}

/// Inverse of [`subset_sum`].
fn subset_difference(v: &mut [i64], n: usize) {
    for bit in 0..n {
        let step = 1 << bit;
        for s in 0..v.len() {
            if s & step != 0 {
                v[s] -= v[s ^ step];
            }
        }
    }
}

struct Sampler<'a> {
    rel: &'a dyn Proximity,
    n: usize,
    samples: usize,
}

impl Sampler<'_> {
    fn subset(&self, rng: &mut ChaCha8Rng) -> ElemSet {
        random_subset(rng, self.n)
    }

    fn finish(&self, axiom: Axiom, w: Option<Vec<ElemSet>>, checked: usize) -> AxiomReport {
        report(axiom, w, false, checked as u64)
    }

    fn p0(&self, axiom: Axiom, rng: &mut ChaCha8Rng) -> AxiomReport {
        for i in 0..self.samples {
            let a = self.subset(rng);
            if self.rel.near(&a, &ElemSet::EMPTY) {
                return self.finish(axiom, Some(vec![a, ElemSet::EMPTY]), i + 1);
            }
        }
        self.finish(axiom, None, self.samples)
    }

    fn p1(&self, axiom: Axiom, rng: &mut ChaCha8Rng) -> AxiomReport {
        for i in 0..self.samples {
            let (a, b) = (self.subset(rng), self.subset(rng));
            if self.rel.near(&a, &b) && !self.rel.near(&b, &a) {
                return self.finish(axiom, Some(vec![a, b]), i + 1);
            }
        }
        self.finish(axiom, None, self.samples)
    }

    fn p2(&self, rng: &mut ChaCha8Rng) -> AxiomReport {
        for i in 0..self.samples {
            let shared = rng.random_range(0..self.n);
            let (mut a, mut b) = (self.subset(rng), self.subset(rng));
            a.insert(shared);
            b.insert(shared);
            if !self.rel.near(&a, &b) {
                return self.finish(Axiom::P2, Some(vec![a, b]), i + 1);
            }
        }
        self.finish(Axiom::P2, None, self.samples)
    }

    fn dp2(&self, rng: &mut ChaCha8Rng) -> AxiomReport {
        for i in 0..self.samples {
            let (a, b) = (self.subset(rng), self.subset(rng));
            let Some(dcap) = self.rel.descriptive_intersection(&a, &b) else {
                return AxiomReport {
                    axiom: Axiom::DP2,
                    status: AxiomStatus::NotApplicable,
                    counterexample: None,
                    exhaustive: false,
                    checked: 0,
                };
            };
            if !dcap.is_empty() && !self.rel.near(&a, &b) {
                return self.finish(Axiom::DP2, Some(vec![a, b]), i + 1);
            }
        }
        self.finish(Axiom::DP2, None, self.samples)
    }

    fn p3(&self, axiom: Axiom, rng: &mut ChaCha8Rng) -> AxiomReport {
        for i in 0..self.samples {
            let (a, b, c) = (self.subset(rng), self.subset(rng), self.subset(rng));
            if self.rel.near(&a, &b.union(&c)) && !self.rel.near(&a, &b) && !self.rel.near(&a, &c) {
                return self.finish(axiom, Some(vec![a, b, c]), i + 1);
            }
        }
        self.finish(axiom, None, self.samples)
    }

    fn lodato(&self, rng: &mut ChaCha8Rng) -> AxiomReport {
        for i in 0..self.samples {
            let (a, c) = (self.subset(rng), self.subset(rng));
            let near_c: ElemSet = (0..self.n)
                .filter(|&x| self.rel.near(&ElemSet::singleton(x), &c))
                .collect();
            let b: ElemSet = near_c.iter().filter(|_| rng.random_bool(0.5)).collect();
            if self.rel.near(&a, &b) && !self.rel.near(&a, &c) {
                return self.finish(Axiom::Lodato, Some(vec![a, b, c]), i + 1);
            }
        }
        self.finish(Axiom::Lodato, None, self.samples)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elemset::all_subsets;

    fn intersection(n: usize) -> FnRelation<impl Fn(&ElemSet, &ElemSet) -> bool> {
        FnRelation::new(n, |a: &ElemSet, b: &ElemSet| a.intersects(b))
    }

    /// Triple-loop oracle for the union axiom.
    fn p3_oracle(rel: &dyn Proximity) -> bool {
        let n = rel.size();
        let subsets: Vec<_> = all_subsets(n).collect();
        subsets.iter().all(|a| {
            subsets.iter().all(|b| {
                subsets
                    .iter()
                    .all(|c| !rel.near(a, &b.union(c)) || rel.near(a, b) || rel.near(a, c))
            })
        })
    }

    /// Direct oracle for Lodato's axiom.
    fn lodato_oracle(rel: &dyn Proximity) -> bool {
        let n = rel.size();
        let subsets: Vec<_> = all_subsets(n).collect();
        subsets.iter().all(|a| {
            subsets.iter().all(|b| {
                subsets.iter().all(|c| {
                    let premise =
                        rel.near(a, b) && b.iter().all(|x| rel.near(&ElemSet::singleton(x), c));
                    !premise || rel.near(a, c)
                })
            })
        })
    }

    #[test]
    fn intersection_relation_is_cech_and_lodato() {
        let rel = intersection(5);
        let reports = check_axioms(&rel, AxiomFamily::Cech, &Budget::default());
        assert!(
            reports.iter().all(|r| r.holds() && r.exhaustive),
            "{reports:?}"
        );
        assert!(check_axioms(&rel, AxiomFamily::Lodato, &Budget::default())[0].holds());
    }

    #[test]
    fn sampled_mode_above_limit() {
        let rel = intersection(20);
        let budget = Budget {
            samples: 500,
            ..Budget::default()
        };
        let reports = check_axioms(&rel, AxiomFamily::Cech, &budget);
        assert!(reports
            .iter()
            .all(|r| r.holds() && !r.exhaustive && r.checked == 500));
    }

    #[test]
    fn union_axiom_violation_has_a_witness() {
        // Large sets are near each other, so {0, 1} is near {2, 3} but far
        // from {2} and from {3}.
        let rel = FnRelation::new(4, |a: &ElemSet, b: &ElemSet| {
            !a.is_empty() && !b.is_empty() && (a.intersects(b) || (a.len() >= 2 && b.len() >= 2))
        });
        let reports = check_axioms(&rel, AxiomFamily::Cech, &Budget::default());
        let p3 = reports.iter().find(|r| r.axiom == Axiom::P3).unwrap();
        assert_eq!(p3.status, AxiomStatus::Violated);
        let w = p3.counterexample.as_ref().unwrap();
        assert!(rel.near(&w[0], &w[1].union(&w[2])));
        assert!(!rel.near(&w[0], &w[1]) && !rel.near(&w[0], &w[2]));
        assert!(reports
            .iter()
            .filter(|r| r.axiom != Axiom::P3)
            .all(AxiomReport::holds));
    }

    #[test]
    fn p0_and_p1_violations() {
        let everything = FnRelation::new(2, |_: &ElemSet, _: &ElemSet| true);
        let r = check_axioms(&everything, AxiomFamily::Cech, &Budget::default());
        assert_eq!(r[0].status, AxiomStatus::Violated);
        let lopsided = FnRelation::new(2, |a: &ElemSet, b: &ElemSet| {
            a.intersects(b) || (a.contains(0) && b.contains(1))
        });
        let r = check_axioms(&lopsided, AxiomFamily::Cech, &Budget::default());
        assert_eq!(r[1].status, AxiomStatus::Violated);
    }

    #[test]
    fn dp2_not_applicable_without_descriptive_intersection() {
        let r = check_axioms(
            &intersection(3),
            AxiomFamily::DescriptiveCech,
            &Budget::default(),
        );
        assert_eq!(r[2].status, AxiomStatus::NotApplicable);
    }

    #[test]
    fn fast_checks_agree_with_oracles_on_all_symmetric_singleton_relations() {
        // Relations on 3 points generated by a reflexive symmetric point
        // relation, plus a size-threshold twist that can break P.3 or Lodato.
        for edges in 0u32..8 {
            for twist in [false, true] {
                let adj = |x: usize, y: usize| {
                    x == y || {
                        let bit = match (x.min(y), x.max(y)) {
                            (0, 1) => 0,
                            (0, 2) => 1,
                            _ => 2,
                        };
                        edges & (1 << bit) != 0
                    }
                };
                let rel = FnRelation::new(3, move |a: &ElemSet, b: &ElemSet| {
                    let pointwise = a.iter().any(|x| b.iter().any(|y| adj(x, y)));
                    pointwise || (twist && a.len() == 3 && b.len() >= 2)
                });
                let r = check_axioms(&rel, AxiomFamily::Cech, &Budget::default());
                assert_eq!(r[3].holds(), p3_oracle(&rel), "edges {edges} twist {twist}");
                let l = check_axioms(&rel, AxiomFamily::Lodato, &Budget::default());
                assert_eq!(
                    l[0].holds(),
                    lodato_oracle(&rel),
                    "edges {edges} twist {twist}"
                );
            }
        }
    }
}
