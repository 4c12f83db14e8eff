mod common;

use common::*;

#[test]
fn hundred_instances_per_row_are_solvable_and_unsolved() {
    for (id, params) in rows() {
        check_generation(id, &params, 100).unwrap();
    }
}

#[test]
fn generation_is_a_function_of_the_seed() {
    use puzzles_core::rng::Rng;
    for (id, params) in rows() {
        let pz = puzzle(id, &params);
        for seed in [0, 17, u64::MAX] {
            let a = pz.generate(&mut Rng::seed_from_u64(seed)).unwrap();
            let b = pz.generate(&mut Rng::seed_from_u64(seed)).unwrap();
            assert_eq!(a, b, "{id} {params}");
        }
    }
}

#[test]
fn different_seeds_give_varied_instances() {
    use puzzles_core::rng::Rng;
    for (id, params) in rows() {
        let pz = puzzle(id, &params);
        let distinct = histogram((0..40).map(|s| {
            serde_json::to_string(&pz.generate(&mut Rng::seed_from_u64(s)).unwrap()).unwrap()
        }))
        .len();
        assert!(distinct >= 2, "{id} {params}: {distinct} distinct instances");
    }
}
