//! Oracle equivalence for the caterpillar fast path.

mod common;

use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ted_core::caterpillar::{
    as_caterpillar, caterpillar_ted, reverse_matching_table, spine_prefix_table, Caterpillar,
    LeafSide,
};
use ted_core::cost::Cost;
use ted_core::model::CostModel;
use ted_core::solver::{brute_force_matching_with_limit, optimal_matching};
use ted_core::tree::Label;

#[test]
fn round_trip_build_then_parse() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..200 {
        let n = rng.gen_range(1..=10);
        let side = if rng.gen_bool(0.5) {
            LeafSide::Right
        } else {
            LeafSide::Left
        };
        let cat = random_caterpillar(&mut rng, n, 4, side);
        let tree = cat.to_tree();
        let back = as_caterpillar(&tree, side).unwrap();
        assert_eq!(back, cat);
    }
}

#[test]
fn reverse_table_boundaries_and_example() {
    // R[0][j] = 0 everywhere.
    let mut model = CostModel::new_matching(2);
    model.set_match(Label(0), Label(0), Cost::from(-1)).unwrap();
    model.set_match(Label(1), Label(1), Cost::from(-1)).unwrap();
    // s = "ab", t = "ba" with matchCost(x,x) = -1: R[2][2] = -2.
    let s = [Label(0), Label(1)];
    let t = [Label(1), Label(0)];
    let r = reverse_matching_table(&s, &t, &model).unwrap();
    for j in 0..=2 {
        assert_eq!(r.get(0, j), &Cost::zero());
        assert_eq!(r.get(j, 0), &Cost::zero());
    }
    assert_eq!(r.get(2, 2), &Cost::from(-2));
    // s[1] = 'a' only pairs with t[2] = 'a'.
    assert_eq!(r.get(1, 1), &Cost::zero());
    assert_eq!(r.get(1, 2), &Cost::from(-1));
}

#[test]
fn reverse_table_equals_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for round in 0..300 {
        let ns = rng.gen_range(0..=7);
        let nt = rng.gen_range(0..=7);
        let s: Vec<Label> = (0..ns).map(|_| Label(rng.gen_range(0..3))).collect();
        let t: Vec<Label> = (0..nt).map(|_| Label(rng.gen_range(0..3))).collect();
        let model = random_matching_model(&mut rng, 3, 0.6);
        let table = reverse_matching_table(&s, &t, &model).unwrap();
        for i in 0..=ns {
            for j in 0..=nt {
                let expected = enumerate_reverse_matching(&s, &t, &model, i, j);
                assert_eq!(table.get(i, j), &expected, "round {round}, ({i}, {j})");
            }
        }
        // Monotonicity: more characters never hurt.
        for i in 0..=ns {
            for j in 0..=nt {
                if i > 0 {
                    assert!(table.get(i, j) <= table.get(i - 1, j));
                }
                if j > 0 {
                    assert!(table.get(i, j) <= table.get(i, j - 1));
                }
            }
        }
    }
}

#[test]
fn spine_prefix_table_boundaries_and_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    // All pairs forbidden: the table is identically zero.
    let f = random_caterpillar(&mut rng, 4, 2, LeafSide::Right);
    let g = random_caterpillar(&mut rng, 4, 2, LeafSide::Left);
    let empty = CostModel::new_matching(2);
    let p = spine_prefix_table(&f, &g, &empty).unwrap();
    for row in &p {
        for v in row {
            assert_eq!(v, &Cost::zero());
        }
    }
    // Oracle agreement on random instances.
    for _ in 0..100 {
        let nf = rng.gen_range(1..=6);
        let ng = rng.gen_range(1..=6);
        let f = random_caterpillar(&mut rng, nf, 3, LeafSide::Right);
        let g = random_caterpillar(&mut rng, ng, 3, LeafSide::Left);
        let model = random_matching_model(&mut rng, 3, 0.6);
        let p = spine_prefix_table(&f, &g, &model).unwrap();
        for i in 0..=nf {
            assert_eq!(p[i][0], Cost::zero());
            for j in 0..=ng {
                let expected =
                    enumerate_spine_prefix(&f.spine_labels, &g.spine_labels, &model, i, j);
                assert_eq!(p[i][j], expected);
            }
        }
    }
}

#[test]
fn caterpillar_examples() {
    // Identical caterpillars, spine [1,2], leaves [1,2], matchCost(x,x) = -1:
    // both spines plus the deep leaf; the shallow leaf pair would cross.
    let f = Caterpillar::new(
        vec![Label(1), Label(2)],
        vec![Label(1), Label(2)],
        LeafSide::Right,
    );
    let g = Caterpillar::new(
        vec![Label(1), Label(2)],
        vec![Label(1), Label(2)],
        LeafSide::Left,
    );
    let mut model = CostModel::new_matching(3);
    for a in 0..3 {
        model.set_match(Label(a), Label(a), Cost::from(-1)).unwrap();
    }
    assert_eq!(caterpillar_ted(&f, &g, &model).unwrap(), Cost::from(-3));

    // All pairs forbidden: 0.
    let empty = CostModel::new_matching(3);
    assert_eq!(caterpillar_ted(&f, &g, &empty).unwrap(), Cost::zero());
}

#[test]
fn caterpillar_boundary_case_spine_and_its_leaf_both_matched() {
    // Spine pair at the cross position: f1-g1 matched while f'1 pairs with
    // the g spine and f2 pairs with the g leaf. Value -30 requires the
    // inclusive prefix boundary.
    let f = Caterpillar::new(
        vec![Label(0), Label(1)],
        vec![Label(2), Label(3)],
        LeafSide::Right,
    );
    let g = Caterpillar::new(
        vec![Label(4), Label(5)],
        vec![Label(6), Label(7)],
        LeafSide::Left,
    );
    let mut model = CostModel::new_matching(8);
    model.set_match(Label(0), Label(4), Cost::from(-10)).unwrap(); // f1 - g1
    model.set_match(Label(2), Label(5), Cost::from(-10)).unwrap(); // f'1 - g2
    model.set_match(Label(1), Label(6), Cost::from(-10)).unwrap(); // f2 - g'1
    let brute = brute_force_matching_with_limit(&f.to_tree(), &g.to_tree(), &model, 16).unwrap();
    assert_eq!(brute.value, Cost::from(-30));
    assert_eq!(caterpillar_ted(&f, &g, &model).unwrap(), Cost::from(-30));
}

#[test]
fn caterpillar_equals_dp_and_brute_on_random_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(20260810);
    for round in 0..500 {
        let nf = rng.gen_range(1..=12);
        let ng = rng.gen_range(1..=12);
        let f = random_caterpillar(&mut rng, nf, 4, LeafSide::Right);
        let g = random_caterpillar(&mut rng, ng, 4, LeafSide::Left);
        let model = random_matching_model(&mut rng, 4, 0.5);
        let ft = f.to_tree();
        let gt = g.to_tree();
        let dp = optimal_matching(&ft, &gt, &model).unwrap();
        let fast = caterpillar_ted(&f, &g, &model).unwrap();
        assert_eq!(fast, dp.value, "round {round} (nf={nf}, ng={ng})");
        if nf <= 6 && ng <= 6 {
            let brute = brute_force_matching_with_limit(&ft, &gt, &model, 12).unwrap();
            assert_eq!(brute.value, fast, "round {round} brute");
        }
    }
}

#[test]
fn caterpillar_symmetry() {
    // Swapping the trees and transposing the model leaves the value unchanged.
    let mut rng = ChaCha8Rng::seed_from_u64(808);
    for _ in 0..100 {
        let nf = rng.gen_range(1..=8);
        let ng = rng.gen_range(1..=8);
        let f = random_caterpillar(&mut rng, nf, 3, LeafSide::Right);
        let g = random_caterpillar(&mut rng, ng, 3, LeafSide::Left);
        let model = random_matching_model(&mut rng, 3, 0.5);
        let forward = caterpillar_ted(&f, &g, &model).unwrap();
        let f_swapped = Caterpillar::new(g.spine_labels.clone(), g.leaf_labels.clone(), LeafSide::Right);
        let g_swapped = Caterpillar::new(f.spine_labels.clone(), f.leaf_labels.clone(), LeafSide::Left);
        let backward = caterpillar_ted(&f_swapped, &g_swapped, &model.transpose()).unwrap();
        assert_eq!(forward, backward);
    }
}
