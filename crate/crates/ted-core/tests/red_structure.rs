//! Every brute-force-optimal matching on caterpillar instances decomposes
//! into the spine-prefix / reversed-leaf / cross-pair structure.

mod common;

use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ted_core::caterpillar::LeafSide;
use ted_core::solver::{brute_force_matching_with_limit, decompose_red_structure};

#[test]
fn optimal_matchings_decompose() {
    let mut rng = ChaCha8Rng::seed_from_u64(60);
    for round in 0..200 {
        let nf = rng.gen_range(1..=6);
        let ng = rng.gen_range(1..=6);
        let f = random_caterpillar(&mut rng, nf, 3, LeafSide::Right).to_tree();
        let g = random_caterpillar(&mut rng, ng, 3, LeafSide::Left).to_tree();
        let model = random_matching_model(&mut rng, 3, 0.6);
        let opt = brute_force_matching_with_limit(&f, &g, &model, 12).unwrap();
        let rs = decompose_red_structure(&f, &g, &opt.matching)
            .unwrap_or_else(|e| panic!("round {round}: {e}"));
        assert_eq!(
            rs.p + rs.q
                + rs.optional_spine_leaf_f.iter().count()
                + rs.optional_spine_leaf_g.iter().count(),
            opt.matching.len()
        );
    }
}

#[test]
fn parts_land_where_expected() {
    // The hand-built boundary instance: spine pair at the cross position plus
    // both cross pairs.
    use ted_core::caterpillar::Caterpillar;
    use ted_core::cost::Cost;
    use ted_core::model::CostModel;
    use ted_core::tree::Label;
    let f = Caterpillar::new(
        vec![Label(0), Label(1)],
        vec![Label(2), Label(3)],
        LeafSide::Right,
    )
    .to_tree();
    let g = Caterpillar::new(
        vec![Label(4), Label(5)],
        vec![Label(6), Label(7)],
        LeafSide::Left,
    )
    .to_tree();
    let mut model = CostModel::new_matching(8);
    model.set_match(Label(0), Label(4), Cost::from(-10)).unwrap();
    model.set_match(Label(2), Label(5), Cost::from(-10)).unwrap();
    model.set_match(Label(1), Label(6), Cost::from(-10)).unwrap();
    let opt = brute_force_matching_with_limit(&f, &g, &model, 16).unwrap();
    assert_eq!(opt.value, Cost::from(-30));
    let rs = decompose_red_structure(&f, &g, &opt.matching).unwrap();
    assert_eq!(rs.spine_prefix_pairs, vec![(1, 1)]);
    assert_eq!(rs.optional_spine_leaf_f, Some((2, 1)));
    assert_eq!(rs.optional_spine_leaf_g, Some((1, 2)));
    assert_eq!(rs.q, 0);
}
