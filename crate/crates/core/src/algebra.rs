//! Generators of a ribbon's group representation, Betti counts, move-count
//! expressions of vertices, and invariant means on finite Abelian groups.

use std::collections::{BTreeSet, HashMap};

use num::{BigInt, BigRational, Integer, One, Signed, Zero};
use serde::Serialize;

use crate::complex::{Cycle, Ribbon};
use crate::scalar::Scalar;

/// Groups with more elements are not enumerated.
pub const MAX_GROUP_ORDER: u64 = 1 << 20;

/// Amenability witnesses are checked against a test function up to this
/// order; the check is quadratic in the order.
pub const WITNESS_CHECK_ORDER: usize = 1024;

/// Group axioms are verified on construction up to this order.
pub const AXIOM_CHECK_ORDER: u64 = 32;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("the ribbon has no generators")]
    NoGenerators,
    #[error("vertex `{0}` is not on the ribbon")]
    NotOnRibbon(String),
    #[error("vertex `{0}` is unreachable from every generator")]
    Unreachable(String),
    #[error("cyclic factors must have positive order")]
    ZeroOrder,
    #[error("group order exceeds {MAX_GROUP_ORDER}")]
    GroupTooLarge,
    #[error("group axiom `{0}` fails")]
    AxiomFailure(&'static str),
    #[error("expected {expected} values, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("mean weights must be nonnegative and sum to 1")]
    NotAMean,
}

/// Intersection vertices, then bridge endpoints, each group sorted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct GeneratorSet {
    generators: Vec<String>,
}

impl GeneratorSet {
    pub fn as_slice(&self) -> &[String] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn position(&self, v: &str) -> Option<usize> {
        self.generators.iter().position(|g| g == v)
    }
}

pub fn extract_generators(r: &Ribbon) -> GeneratorSet {
    let shared: BTreeSet<&str> = r.shared_vertices().iter().map(String::as_str).collect();
    let endpoints: BTreeSet<&str> = r
        .bridges()
        .iter()
        .flat_map(|b| {
            let (x, y) = b.endpoints();
            [x, y]
        })
        .filter(|v| !shared.contains(v))
        .collect();
    GeneratorSet {
        generators: shared
            .into_iter()
            .chain(endpoints)
            .map(String::from)
            .collect(),
    }
}

/// `β_α = 2k + n` for `k` bridges and `n` shared vertices.
pub fn betti_alpha(r: &Ribbon) -> usize {
    2 * r.bridge_count() + r.intersection_count()
}

/// `β_0` of a cycle: its vertex count.
pub fn betti_zero(c: &Cycle) -> usize {
    c.len()
}

/// A vertex written as a multiple of one generator.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VertexExpression {
    pub target: String,
    pub generators: Vec<String>,
    /// Move counts, one per generator; exactly one is chosen.
    pub coefficients: Vec<usize>,
    pub chosen: usize,
}

impl VertexExpression {
    pub fn generator(&self) -> &str {
        &self.generators[self.chosen]
    }

    pub fn distance(&self) -> usize {
        self.coefficients[self.chosen]
    }

    /// `3·g2` style rendering.
    pub fn render(&self) -> String {
        format!("{} = {}·{}", self.target, self.distance(), self.generator())
    }
}

/// Expresses `v` by the generator nearest to it in the ribbon graph.
/// Equidistant generators are resolved by their order in `gs`.
pub fn express_vertex(
    r: &Ribbon,
    gs: &GeneratorSet,
    v: &str,
) -> Result<VertexExpression, AlgebraError> {
    if !r.outer.contains(v) && !r.inner.contains(v) {
        return Err(AlgebraError::NotOnRibbon(v.to_string()));
    }
    if gs.is_empty() {
        return Err(AlgebraError::NoGenerators);
    }
    let mut best: Option<(usize, usize)> = None;
    for (i, g) in gs.generators.iter().enumerate() {
        if let Some(&d) = r.distances_from(g).get(v) {
            if best.is_none_or(|(_, bd)| d < bd) {
                best = Some((i, d));
            }
        }
    }
    let (chosen, d) = best.ok_or_else(|| AlgebraError::Unreachable(v.to_string()))?;
    let mut coefficients = vec![0; gs.len()];
    coefficients[chosen] = d;
    Ok(VertexExpression {
        target: v.to_string(),
        generators: gs.generators.clone(),
        coefficients,
        chosen,
    })
}

/// `Z_{n1} × .. × Z_{nk}`, elements indexed in mixed radix (last factor
/// varies fastest).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiniteAbelianGroup {
    orders: Vec<u64>,
}

impl FiniteAbelianGroup {
    pub fn new(orders: Vec<u64>) -> Result<Self, AlgebraError> {
        if orders.contains(&0) {
            return Err(AlgebraError::ZeroOrder);
        }
        let mut total: u64 = 1;
        for &o in &orders {
            total = total
                .checked_mul(o)
                .filter(|&t| t <= MAX_GROUP_ORDER)
                .ok_or(AlgebraError::GroupTooLarge)?;
        }
        let g = FiniteAbelianGroup { orders };
        if total <= AXIOM_CHECK_ORDER {
            g.check_axioms()?;
        }
        Ok(g)
    }

    pub fn cyclic(m: u64) -> Result<Self, AlgebraError> {
        Self::new(vec![m])
    }

    pub fn factors(&self) -> &[u64] {
        &self.orders
    }

    pub fn order(&self) -> usize {
        self.orders.iter().product::<u64>() as usize
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn decode(&self, mut i: usize) -> Vec<u64> {
        let mut out = vec![0; self.orders.len()];
        for (slot, &o) in out.iter_mut().zip(&self.orders).rev() {
            *slot = i as u64 % o;
            i /= o as usize;
        }
        out
    }

    pub fn encode(&self, coords: &[u64]) -> usize {
        coords
            .iter()
            .zip(&self.orders)
            .fold(0, |acc, (&c, &o)| acc * o as usize + (c % o) as usize)
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        let (x, y) = (self.decode(a), self.decode(b));
        let sum: Vec<u64> = x
            .iter()
            .zip(&y)
            .zip(&self.orders)
            .map(|((p, q), o)| (p + q) % o)
            .collect();
        self.encode(&sum)
    }

    pub fn neg(&self, a: usize) -> usize {
        let x = self.decode(a);
        let inv: Vec<u64> = x
            .iter()
            .zip(&self.orders)
            .map(|(p, o)| (o - p) % o)
            .collect();
        self.encode(&inv)
    }

    /// Cayley table, `table[a][b] = a + b`.
    pub fn table(&self) -> Vec<Vec<usize>> {
        let m = self.order();
        (0..m)
            .map(|a| (0..m).map(|b| self.add(a, b)).collect())
            .collect()
    }

    /// Exhaustive check of closure, associativity, commutativity, identity
    /// and inverses.
    pub fn check_axioms(&self) -> Result<(), AlgebraError> {
        let m = self.order();
        let t = self.table();
        if t.iter().flatten().any(|&x| x >= m) {
            return Err(AlgebraError::AxiomFailure("closure"));
        }
        for a in 0..m {
            if t[a][0] != a || t[0][a] != a {
                return Err(AlgebraError::AxiomFailure("identity"));
            }
            if t[a][self.neg(a)] != 0 {
                return Err(AlgebraError::AxiomFailure("inverse"));
            }
            for b in 0..m {
                if t[a][b] != t[b][a] {
                    return Err(AlgebraError::AxiomFailure("commutativity"));
                }
                for c in 0..m {
                    if t[t[a][b]][c] != t[a][t[b][c]] {
                        return Err(AlgebraError::AxiomFailure("associativity"));
                    }
                }
            }
        }
        Ok(())
    }
}

/// A finitely supported mean: `μ(θ) = Σ w(x) θ(x)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct MeanFunctional {
    weights: Vec<Scalar>,
}

impl MeanFunctional {
    pub fn new(weights: Vec<Scalar>) -> Result<Self, AlgebraError> {
        let sum: BigRational = weights.iter().map(|w| w.0.clone()).sum();
        if weights.iter().any(|w| w.0.is_negative()) || !sum.is_one() {
            return Err(AlgebraError::NotAMean);
        }
        Ok(MeanFunctional { weights })
    }

    pub fn weights(&self) -> &[Scalar] {
        &self.weights
    }

    pub fn apply(&self, theta: &[Scalar]) -> Result<BigRational, AlgebraError> {
        if theta.len() != self.weights.len() {
            return Err(AlgebraError::LengthMismatch {
                expected: self.weights.len(),
                got: theta.len(),
            });
        }
        Ok(self
            .weights
            .iter()
            .zip(theta)
            .map(|(w, t)| &w.0 * &t.0)
            .sum())
    }
}

pub fn uniform_mean(g: &FiniteAbelianGroup) -> MeanFunctional {
    let m = g.order() as i64;
    MeanFunctional {
        weights: vec![Scalar::new(1, m); m as usize],
    }
}

/// The mean concentrated on one element.
pub fn point_mass(g: &FiniteAbelianGroup, at: usize) -> MeanFunctional {
    let mut weights = vec![Scalar::zero(); g.order()];
    weights[at] = Scalar::from_int(1);
    MeanFunctional { weights }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvarianceReport {
    pub bounds_ok: bool,
    pub left_invariant: bool,
    pub right_invariant: bool,
    /// First translation `σ` breaking left invariance.
    pub left_witness: Option<usize>,
    pub right_witness: Option<usize>,
}

impl InvarianceReport {
    pub fn all_hold(&self) -> bool {
        self.bounds_ok && self.left_invariant && self.right_invariant
    }
}

/// Scales a list of rationals to integers by the lcm of their denominators.
fn to_integers(values: &[Scalar]) -> Vec<BigInt> {
    let l = values
        .iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.0.denom()));
    values
        .iter()
        .map(|v| v.0.numer() * (&l / v.0.denom()))
        .collect()
}

/// Checks `glb θ ≤ μ(θ) ≤ lub θ` and, for every `σ`, that `μ` takes the
/// same value on `θ` as on the translates `x ↦ θ(σ + x)` and
/// `x ↦ θ(x + σ)`. All arithmetic is exact.
pub fn check_mean_invariance(
    g: &FiniteAbelianGroup,
    mu: &MeanFunctional,
    theta: &[Scalar],
) -> Result<InvarianceReport, AlgebraError> {
    let m = g.order();
    if mu.weights.len() != m {
        return Err(AlgebraError::LengthMismatch {
            expected: m,
            got: mu.weights.len(),
        });
    }
    let value = mu.apply(theta)?;
    let lo = theta.iter().min().expect("groups are nonempty");
    let hi = theta.iter().max().expect("groups are nonempty");
    let bounds_ok = lo.0 <= value && value <= hi.0;

    // Common positive scale factors do not change equality of the sums.
    let w = to_integers(&mu.weights);
    let t = to_integers(theta);
    let weighted = |shift: &dyn Fn(usize) -> usize| -> BigInt {
        (0..m)
            .filter(|&x| !w[x].is_zero())
            .map(|x| &w[x] * &t[shift(x)])
            .sum()
    };
    let base = weighted(&|x| x);
    let left_witness = (0..m).find(|&s| weighted(&|x| g.add(s, x)) != base);
    let right_witness = (0..m).find(|&s| weighted(&|x| g.add(x, s)) != base);
    Ok(InvarianceReport {
        bounds_ok,
        left_invariant: left_witness.is_none(),
        right_invariant: right_witness.is_none(),
        left_witness,
        right_witness,
    })
}

/// A finite Abelian model of a ribbon's representation with an invariant
/// mean.
#[derive(Debug, Clone, Serialize)]
pub struct AmenabilityWitness {
    pub generators: GeneratorSet,
    pub group: FiniteAbelianGroup,
    pub mean: MeanFunctional,
    /// Invariance of the mean against `θ(x) = x` (element index), when the
    /// group has at most [`WITNESS_CHECK_ORDER`] elements.
    pub check: Option<InvarianceReport>,
}

/// One cyclic factor per generator, of order one more than the generator's
/// eccentricity in the ribbon graph, with the uniform mean.
pub fn ribbon_amenability_witness(r: &Ribbon) -> Result<AmenabilityWitness, AlgebraError> {
    let generators = extract_generators(r);
    if generators.is_empty() {
        return Err(AlgebraError::NoGenerators);
    }
    let orders = generators
        .as_slice()
        .iter()
        .map(|g| {
            let dist: HashMap<String, usize> = r.distances_from(g);
            dist.values().max().copied().unwrap_or(0) as u64 + 1
        })
        .collect();
    let group = FiniteAbelianGroup::new(orders)?;
    let mean = uniform_mean(&group);
    let check = if group.order() <= WITNESS_CHECK_ORDER {
        let theta: Vec<Scalar> = (0..group.order() as i64).map(Scalar::from_int).collect();
        Some(check_mean_invariance(&group, &mean, &theta)?)
    } else {
        None
    };
    Ok(AmenabilityWitness {
        generators,
        group,
        mean,
        check,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_groups_pass_axioms() {
        for orders in [vec![1], vec![4], vec![2, 3], vec![2, 2, 2]] {
            let g = FiniteAbelianGroup::new(orders).unwrap();
            g.check_axioms().unwrap();
        }
        assert_eq!(
            FiniteAbelianGroup::new(vec![0]),
            Err(AlgebraError::ZeroOrder)
        );
        assert_eq!(
            FiniteAbelianGroup::new(vec![1 << 11, 1 << 11]),
            Err(AlgebraError::GroupTooLarge)
        );
    }

    #[test]
    fn mixed_radix_round_trip() {
        let g = FiniteAbelianGroup::new(vec![2, 3]).unwrap();
        for i in 0..6 {
            assert_eq!(g.encode(&g.decode(i)), i);
        }
        assert_eq!(g.decode(5), vec![1, 2]);
        assert_eq!(g.add(5, 5), g.encode(&[0, 1]));
    }

    #[test]
    fn uniform_weights() {
        assert_eq!(
            uniform_mean(&FiniteAbelianGroup::cyclic(1).unwrap()).weights(),
            [Scalar::from_int(1)]
        );
        let z4 = uniform_mean(&FiniteAbelianGroup::cyclic(4).unwrap());
        assert!(z4.weights().iter().all(|w| *w == Scalar::new(1, 4)));
        let z23 = uniform_mean(&FiniteAbelianGroup::new(vec![2, 3]).unwrap());
        assert_eq!(z23.weights().len(), 6);
        assert!(z23.weights().iter().all(|w| *w == Scalar::new(1, 6)));
    }

    #[test]
    fn point_mass_is_not_invariant() {
        let z2 = FiniteAbelianGroup::cyclic(2).unwrap();
        let r = check_mean_invariance(
            &z2,
            &point_mass(&z2, 0),
            &[Scalar::from_int(0), Scalar::from_int(1)],
        )
        .unwrap();
        assert!(r.bounds_ok);
        assert!(!r.left_invariant);
        assert_eq!(r.left_witness, Some(1));
    }

    #[test]
    fn constant_theta_is_invariant_under_any_mean() {
        let g = FiniteAbelianGroup::new(vec![2, 2]).unwrap();
        let mu = MeanFunctional::new(vec![
            Scalar::new(1, 2),
            Scalar::new(1, 3),
            Scalar::new(1, 6),
            Scalar::zero(),
        ])
        .unwrap();
        let r = check_mean_invariance(&g, &mu, &vec![Scalar::from_int(7); 4]).unwrap();
        assert!(r.all_hold());
    }

    #[test]
    fn invalid_means_rejected() {
        assert_eq!(
            MeanFunctional::new(vec![Scalar::new(1, 2)]),
            Err(AlgebraError::NotAMean)
        );
        assert_eq!(
            MeanFunctional::new(vec![Scalar::from_int(2), Scalar::from_int(-1)]),
            Err(AlgebraError::NotAMean)
        );
    }

    proptest! {
        #[test]
        fn uniform_mean_is_invariant_on_z6(theta in prop::collection::vec((-50i64..50, 1i64..7), 6)) {
            let g = FiniteAbelianGroup::cyclic(6).unwrap();
            let theta: Vec<Scalar> = theta.into_iter().map(|(p, q)| Scalar::new(p, q)).collect();
            let r = check_mean_invariance(&g, &uniform_mean(&g), &theta).unwrap();
            prop_assert!(r.all_hold());
        }
    }
}
