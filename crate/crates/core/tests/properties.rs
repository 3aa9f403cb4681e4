use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ribbon_core::conjugacy::{check_conjugacy, ConjugacyMode, ConjugacyWitness};
use ribbon_core::dynamics::{check_continuity, classify, random_map, DEFAULT_ORBIT_CAP};
use ribbon_core::elemset::all_subsets;
use ribbon_core::harness::instances::{
    conjugate_pair, random_permutation, random_set, random_space, relabel, SpaceConfig,
};
use ribbon_core::proximity::{Budget, Mode};

fn cfg() -> SpaceConfig {
    SpaceConfig {
        size: 1..=6,
        ..SpaceConfig::default()
    }
}

fn mode() -> impl Strategy<Value = ConjugacyMode> {
    prop::sample::select(ConjugacyMode::ALL.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    /// Renaming the carrier renames the classification and nothing else.
    #[test]
    fn classify_is_equivariant(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_space(&mut rng, &cfg());
        let f = random_map(&mut rng, x.len());
        let p = random_permutation(&mut rng, x.len());
        let y = relabel(&x, &p);
        let g = p.compose(&f).compose(&p.inverse().unwrap());
        let a = random_set(&mut rng, x.len());
        let r = classify(&f, &x, &a, DEFAULT_ORBIT_CAP).unwrap();
        let s = classify(&g, &y, &p.apply(&a), DEFAULT_ORBIT_CAP).unwrap();
        prop_assert_eq!(r.spatial, s.spatial);
        prop_assert_eq!(r.almost_fixed, s.almost_fixed);
        prop_assert_eq!(r.spatial_invariant, s.spatial_invariant);
        prop_assert_eq!(r.descriptive, s.descriptive);
    }

    /// Fixed sets are invariant, and nonempty descriptively fixed sets are
    /// amiable.
    #[test]
    fn fixed_implies_invariant_and_amiable(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_space(&mut rng, &cfg());
        let f = random_map(&mut rng, x.len());
        for a in all_subsets(x.len()) {
            let r = classify(&f, &x, &a, DEFAULT_ORBIT_CAP).unwrap();
            let d = r.descriptive.unwrap();
            if f.apply(&a) == a {
                prop_assert!(r.spatial_invariant);
            }
            if d.fixed {
                prop_assert!(d.invariant);
                prop_assert!(a.is_empty() || d.amiable);
            }
        }
    }

    /// `h⁻¹` conjugates `g` back to `f` in the same mode.
    #[test]
    fn conjugacy_is_symmetric(seed in any::<u64>(), mode in mode()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = conjugate_pair(&mut rng, mode, &cfg());
        let b = Budget::default();
        let w = ConjugacyWitness::establish(c.f, c.g, c.h, c.x, c.y, mode, &b).unwrap();
        prop_assert!(w.reversed(&b).is_ok());
    }

    /// Strict conjugacy gives descriptive conjugacy under the pulled-back
    /// probe, which gives weak conjugacy, whenever the maps are continuous
    /// in the weaker sense.
    #[test]
    fn strict_implies_descriptive_implies_weak(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = conjugate_pair(&mut rng, ConjugacyMode::Strict, &cfg());
        let b = Budget::default();
        let check = |m| check_conjugacy(&c.f, &c.g, &c.h, &c.x, &c.y, m, &b).unwrap().holds;
        prop_assert!(check(ConjugacyMode::Strict));
        prop_assert!(check(ConjugacyMode::Weak));
        if check_continuity(&c.f, &c.x, &c.x, Mode::Descriptive, &b).unwrap().continuous {
            prop_assert!(check(ConjugacyMode::Descriptive));
            prop_assert!(check(ConjugacyMode::WeakDescriptive));
        }
    }

    /// Weak descriptive conjugates have `g(h(A)) ⩀ h(f(A))` nonempty for
    /// every nonempty `A`, and `h` preserves descriptive equality.
    #[test]
    fn weak_descriptive_images_meet(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = conjugate_pair(&mut rng, ConjugacyMode::WeakDescriptive, &cfg());
        let n = c.x.len();
        for a in all_subsets(n).filter(|a| !a.is_empty()) {
            let gh = c.g.apply(&c.h.apply(&a));
            let hf = c.h.apply(&c.f.apply(&a));
            prop_assert!(!c.y.descriptive_intersection(&gh, &hf).unwrap().is_empty());
            let b = random_set(&mut rng, n);
            if c.x.des_eq(&a, &b).unwrap() {
                prop_assert!(c.y.des_eq(&c.h.apply(&a), &c.h.apply(&b)).unwrap());
            }
        }
    }
}
