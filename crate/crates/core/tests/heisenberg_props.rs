//! Group-law, projection, and measure-bracket invariants on random data.

use proptest::prelude::*;

use hbl_core::conditions::ProjectionConfig;
use hbl_core::heisenberg::measure::{image_measure_bracket, GridParams};
use hbl_core::heisenberg::witness::BoxWitness;
use hbl_core::heisenberg::{Point, VerticalProjection};
use hbl_core::linalg::Subspace;
use hbl_core::rat::{rat, rat_i, rat_pow, Rat};

fn rat_strategy() -> impl Strategy<Value = Rat> {
    (-8i64..=8, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

fn point_strategy(n: usize) -> impl Strategy<Value = Point<Rat>> {
    (
        prop::collection::vec(rat_strategy(), n),
        prop::collection::vec(rat_strategy(), n),
        rat_strategy(),
    )
        .prop_map(|(x, y, t)| Point { x, y, t })
}

fn coordinate_subspace(n: usize, mask: u32) -> Subspace {
    let idx: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
    Subspace::coordinate(n, &idx)
}

fn coord_cfg(n: usize, masks: &[u32]) -> ProjectionConfig {
    let subs = masks
        .iter()
        .map(|&m| coordinate_subspace(n, m & ((1 << n) - 1)))
        .collect();
    ProjectionConfig::new(n, subs).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn group_law_axioms(
        n in 1usize..=3,
        seeds in prop::collection::vec((-8i64..=8, 1i64..=4), 21),
    ) {
        let mut it = seeds.into_iter().map(|(p, q)| rat(p, q));
        let mut take_point = |n: usize| Point {
            x: (0..n).map(|_| it.next().unwrap()).collect(),
            y: (0..n).map(|_| it.next().unwrap()).collect(),
            t: it.next().unwrap(),
        };
        let a = take_point(n);
        let b = take_point(n);
        let c = take_point(n);
        let e = Point::<Rat>::identity(n);
        let ab_c = a.group_op(&b).group_op(&c);
        let a_bc = a.group_op(&b.group_op(&c));
        prop_assert_eq!(ab_c.x, a_bc.x);
        prop_assert_eq!(ab_c.y, a_bc.y);
        prop_assert_eq!(ab_c.t, a_bc.t);
        let ai = a.group_op(&a.inverse());
        prop_assert_eq!(&ai.x, &e.x);
        prop_assert_eq!(&ai.y, &e.y);
        prop_assert_eq!(&ai.t, &e.t);
        let ea = e.group_op(&a);
        prop_assert_eq!(ea.x, a.x);
        prop_assert_eq!(ea.y, a.y);
        prop_assert_eq!(ea.t, a.t);
    }

    #[test]
    fn paired_twists_cancel(
        mask in 0u32..4,
        p in point_strategy(2),
        raw_a in prop::collection::vec(rat_strategy(), 2),
        raw_b in prop::collection::vec(rat_strategy(), 2),
    ) {
        let cfg = coord_cfg(2, &[mask]);
        let proj_k = cfg.kernel(0).orthogonal_projection();
        let a = proj_k.mul_vec(&raw_a);
        let b = proj_k.mul_vec(&raw_b);
        let px = VerticalProjection::x_side(&cfg, 0, a.clone(), b.clone()).unwrap();
        let py = VerticalProjection::y_side(&cfg, 0, a, b).unwrap();
        let (_, _, tau_x) = px.apply(&p);
        let (_, _, tau_y) = py.apply(&p);
        prop_assert_eq!(tau_x + tau_y, rat(2, 1) * p.t);
    }

    #[test]
    fn witness_volume_scales_by_the_predicted_power(
        n in 1usize..=3,
        mask_v in 0u32..8,
        mask_w in 0u32..8,
        masks in prop::collection::vec(0u32..8, 1..=2),
    ) {
        let cfg = coord_cfg(n, &masks);
        let full = (1u32 << n) - 1;
        let v = coordinate_subspace(n, mask_v & full);
        let w = coordinate_subspace(n, mask_w & full & !(mask_v & full));
        let mut witnesses = vec![BoxWitness::scaling(&cfg), BoxWitness::dilation(&cfg, &v)];
        if let Ok(ws) = BoxWitness::compressed_small(&cfg, &v, &w) {
            witnesses.push(ws);
        }
        if let Ok(wl) = BoxWitness::compressed_large(&cfg, &v, &w) {
            witnesses.push(wl);
        }
        for wit in &witnesses {
            let small = wit.instantiate(&rat_i(3)).unwrap();
            let big = wit.instantiate(&rat_i(6)).unwrap();
            let ratio = big.coordinate_volume() / small.coordinate_volume();
            prop_assert_eq!(ratio, rat_pow(&rat(2, 1), wit.predicted_domain_exp as i32));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn brackets_are_sound_and_consistent_across_refinement(
        mask in 0u32..4,
        y_side in proptest::bool::ANY,
    ) {
        let cfg = coord_cfg(2, &[mask]);
        let wit = BoxWitness::scaling(&cfg);
        let boxi = wit.instantiate(&rat_i(1)).unwrap();
        let zero = vec![rat(0, 1); 2];
        let proj = if y_side {
            VerticalProjection::y_side(&cfg, 0, zero.clone(), zero).unwrap()
        } else {
            VerticalProjection::x_side(&cfg, 0, zero.clone(), zero).unwrap()
        };
        let coarse = GridParams { max_step: rat(1, 2), ..GridParams::default() };
        let fine = GridParams { max_step: rat(1, 4), ..GridParams::default() };
        let bc = image_measure_bracket(&proj, &boxi, &coarse).unwrap();
        let bf = image_measure_bracket(&proj, &boxi, &fine).unwrap();
        prop_assert!(bc.lower >= rat(0, 1));
        prop_assert!(bc.lower <= bc.upper);
        prop_assert!(bf.lower <= bf.upper);
        // Both brackets contain the true measure, so they must overlap.
        prop_assert!(bc.lower <= bf.upper);
        prop_assert!(bf.lower <= bc.upper);
    }
}
