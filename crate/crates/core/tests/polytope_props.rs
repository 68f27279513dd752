//! Cross-validation of the two vertex enumerators on random small systems.

use proptest::prelude::*;

use hbl_core::conditions::{LinearConstraint, Relation, Tag};
use hbl_core::polytope::HPolytope;
use hbl_core::rat::rat;

fn random_constraint(d: usize) -> impl Strategy<Value = LinearConstraint> {
    (
        prop::collection::vec(-3i64..=3, d),
        0usize..=5,
        -4i64..=4,
    )
        .prop_map(move |(coeffs, rel, rhs)| {
            let relation = match rel {
                0 => Relation::Eq,
                1 | 2 => Relation::Ge,
                _ => Relation::Le,
            };
            LinearConstraint::new(
                coeffs.into_iter().map(|c| rat(c, 1)).collect(),
                relation,
                rat(rhs, 4),
                Tag::QLower(0),
            )
        })
}

fn random_system() -> impl Strategy<Value = (usize, Vec<LinearConstraint>)> {
    (2usize..=3)
        .prop_flat_map(|d| {
            (Just(d), prop::collection::vec(random_constraint(d), 0..=6))
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn double_description_agrees_with_brute_force((d, rows) in random_system()) {
        let hp = HPolytope::new(d, rows);
        let dd = hp.enumerate_vertices().unwrap();
        let bf = hp.brute_force_vertices().unwrap();
        prop_assert_eq!(dd.is_empty(), bf.is_empty());
        prop_assert_eq!(&dd.vertices, &bf.vertices);
        prop_assert_eq!(dd.affine_dim, bf.affine_dim);
    }

    #[test]
    fn every_enumerated_vertex_satisfies_the_system((d, rows) in random_system()) {
        let hp = HPolytope::new(d, rows);
        let poly = hp.enumerate_vertices().unwrap();
        for v in &poly.vertices {
            prop_assert!(hp.contains(v), "vertex {:?} outside system", v);
            for x in v {
                prop_assert!(*x >= rat(0, 1) && *x <= rat(1, 1));
            }
        }
    }
}
