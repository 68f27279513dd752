//! Structural properties of the exact condition layer.

use proptest::prelude::*;

use hbl_core::conditions::{
    constraint_b1, constraint_b2, constraint_c, constraint_c1, constraint_c2, constraints_a,
    ProjectionConfig, QVec, Relation,
};
use hbl_core::heisenberg::witness::BoxWitness;
use hbl_core::linalg::Subspace;
use hbl_core::rat::{rat, Rat};
use num::{Signed, Zero};

fn coordinate_subspace(n: usize, mask: u32) -> Subspace {
    let idx: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
    Subspace::coordinate(n, &idx)
}

fn coord_cfg() -> impl Strategy<Value = ProjectionConfig> {
    (1usize..=4)
        .prop_flat_map(|n| {
            (Just(n), prop::collection::vec(0u32..(1 << n), 1..=3))
        })
        .prop_map(|(n, masks)| {
            let subs = masks.into_iter().map(|m| coordinate_subspace(n, m)).collect();
            ProjectionConfig::new(n, subs).unwrap()
        })
}

fn swap_halves(v: &[Rat]) -> Vec<Rat> {
    let m = v.len() / 2;
    v[m..].iter().chain(&v[..m]).cloned().collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dilating_the_full_space_recovers_the_scaling_equality(cfg in coord_cfg()) {
        let [a1, a2] = constraints_a(&cfg);
        let full = Subspace::full(cfg.n());
        let b1 = constraint_b1(&cfg, &full);
        let b2 = constraint_b2(&cfg, &full);
        prop_assert_eq!(&b1.coeffs, &a1.coeffs);
        prop_assert_eq!(&b1.rhs, &a1.rhs);
        prop_assert_eq!(&b2.coeffs, &a2.coeffs);
        prop_assert_eq!(&b2.rhs, &a2.rhs);
    }

    #[test]
    fn the_two_sides_are_mirror_images(cfg in coord_cfg(), mask in 0u32..16) {
        let v = coordinate_subspace(cfg.n(), mask & ((1 << cfg.n()) - 1));
        let [a1, a2] = constraints_a(&cfg);
        prop_assert_eq!(swap_halves(&a1.coeffs), a2.coeffs.clone());
        let b1 = constraint_b1(&cfg, &v);
        let b2 = constraint_b2(&cfg, &v);
        prop_assert_eq!(swap_halves(&b1.coeffs), b2.coeffs.clone());
        prop_assert_eq!(&b1.rhs, &b2.rhs);
    }

    #[test]
    fn balance_coefficients_are_antisymmetric(cfg in coord_cfg(), mask in 0u32..16) {
        let v = coordinate_subspace(cfg.n(), mask & ((1 << cfg.n()) - 1));
        let c = constraint_c(&cfg, &v);
        let m = cfg.m();
        prop_assert!(c.rhs.is_zero());
        for j in 0..m {
            prop_assert_eq!(c.coeffs[j].clone(), -c.coeffs[j + m].clone());
        }
    }

    #[test]
    fn compressed_pair_at_the_orthocomplement_collapses_to_balance(
        cfg in coord_cfg(),
        mask in 0u32..16,
    ) {
        // With w = v-perp the two one-sided bounds face each other exactly,
        // and for coordinate data they reproduce the balance equality.
        let v = coordinate_subspace(cfg.n(), mask & ((1 << cfg.n()) - 1));
        let w = v.orth_complement();
        let c1 = constraint_c1(&cfg, &v, &w).unwrap();
        let c2 = constraint_c2(&cfg, &v, &w).unwrap();
        prop_assert_eq!(c1.relation, Relation::Ge);
        prop_assert_eq!(c2.relation, Relation::Le);
        prop_assert!(c1.rhs.is_zero());
        prop_assert!(c2.rhs.is_zero());
        prop_assert_eq!(&c1.coeffs, &c2.coeffs);
        let c = constraint_c(&cfg, &v);
        let same = c1.coeffs == c.coeffs;
        let negated = c1
            .coeffs
            .iter()
            .zip(&c.coeffs)
            .all(|(a, b)| *a == -b.clone());
        prop_assert!(same || negated);
    }

    #[test]
    fn scaling_witness_predictions_match_the_scaling_equality(cfg in coord_cfg()) {
        let [a1, _] = constraints_a(&cfg);
        let w = BoxWitness::scaling(&cfg);
        let exps: Vec<Rat> = w
            .predicted_image_exps
            .iter()
            .map(|&e| rat(e, 1))
            .collect();
        let dom = rat(w.predicted_domain_exp, 1);
        // Proportionality via cross-multiplication (normalization may have
        // rescaled the stored constraint).
        for i in 0..exps.len() {
            prop_assert_eq!(&exps[i] * &a1.rhs, &dom * &a1.coeffs[i]);
        }
    }

    #[test]
    fn reciprocal_exponent_roundtrip(nums in prop::collection::vec(0i64..=8, 1..=6)) {
        let q = QVec(nums.into_iter().map(|k| rat(k, 8)).collect());
        let back = QVec::from_p(&q.to_p()).unwrap();
        prop_assert_eq!(back.0, q.0);
    }

    #[test]
    fn dilation_bounds_hold_on_scaled_down_scaling_points(cfg in coord_cfg(), mask in 0u32..16) {
        // Any q on the scaling plane, shrunk toward 0, satisfies every
        // dilation lower bound strictly ... at least the nonnegative ones
        // stay consistent: evaluate and compare against rhs directly.
        let v = coordinate_subspace(cfg.n(), mask & ((1 << cfg.n()) - 1));
        let b1 = constraint_b1(&cfg, &v);
        let q = vec![Rat::zero(); cfg.num_exponents()];
        // At q = 0 the left side is 0 and the rhs is dim V + 1 > 0.
        prop_assert!(b1.eval(&q).is_zero());
        prop_assert!(b1.rhs.is_positive());
    }
}
