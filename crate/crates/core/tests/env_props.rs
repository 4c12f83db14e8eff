mod common;

use common::*;
use proptest::prelude::*;
use puzzles_core::env::{Env, EnvConfig, ObsType};
use puzzles_core::puzzles::{PuzzleId, Status};
use puzzles_core::rng::Rng;

#[test]
fn masks_match_brute_force_transitions() {
    for (id, params, _, _) in BASELINE {
        check_masks(id, params, 100).unwrap();
    }
}

#[test]
fn observation_streams_are_deterministic() {
    for (id, params, _, _) in BASELINE {
        check_determinism(id, params, ObsType::State, 300).unwrap();
        check_determinism(id, params, ObsType::Pixels, 60).unwrap();
    }
}

#[test]
fn early_termination_fires_on_eleventh_visit() {
    check_early_termination().unwrap();
}

#[test]
fn no_early_termination_when_disabled() {
    let mut env = Env::new(EnvConfig::new(PuzzleId::Flip, "3x3c").unwrap().with_max_steps(None)).unwrap();
    env.reset(Some(4)).unwrap();
    let mask = env.action_mask().unwrap();
    let a = mask.iter().rposition(|&m| m).unwrap();
    for _ in 0..500 {
        let r = env.step(a).unwrap();
        if r.terminated {
            return;
        }
        assert!(!r.truncated);
    }
}

#[test]
fn fifteen_parity_survives_random_walks() {
    check_fifteen_parity(10_000).unwrap();
}

#[test]
fn samegame_gravity_survives_random_walks() {
    check_samegame_gravity(10_000).unwrap();
}

#[test]
fn max_steps_truncates_exactly() {
    for (id, params, _, _) in BASELINE {
        let mut env = Env::new(EnvConfig::new(id, params).unwrap().with_max_steps(Some(7))).unwrap();
        env.reset(Some(3)).unwrap();
        let mut rng = Rng::seed_from_u64(1);
        for step in 1..=7 {
            let r = env.step(rng.index(env.action_count())).unwrap();
            if r.terminated {
                break;
            }
            assert_eq!(r.truncated, step == 7, "{id} step {step}");
        }
    }
}

#[test]
fn rewards_are_terminal_only() {
    for (id, params, _, _) in BASELINE {
        let mut env = Env::new(EnvConfig::new(id, params).unwrap().with_max_steps(Some(3000))).unwrap();
        let mut rng = Rng::seed_from_u64(8);
        for ep in 0..5 {
            env.reset(Some(ep)).unwrap();
            loop {
                let r = env.step(rng.index(env.action_count())).unwrap();
                match env.puzzle().status(env.state().unwrap()) {
                    Status::Solved => assert_eq!(r.reward, 1.0),
                    Status::Failed => assert_eq!(r.reward, -1.0),
                    Status::InProgress => assert_eq!(r.reward, 0.0),
                }
                if r.terminated || r.truncated {
                    break;
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// A reset with an explicit seed ignores everything that came before.
    #[test]
    fn seed_isolation(row in 0..BASELINE.len(), seed in any::<u64>(), noise in prop::collection::vec(0usize..16, 0..40)) {
        let (id, params, _, _) = BASELINE[row];
        let cfg = EnvConfig::new(id, params).unwrap();
        let mut fresh = Env::new(cfg.clone()).unwrap();
        let clean = obs_bytes(&fresh.reset(Some(seed)).unwrap().0);

        let mut used = Env::new(cfg.with_base_seed(seed ^ 1)).unwrap();
        used.reset(None).unwrap();
        for a in noise {
            let a = a % used.action_count();
            if used.step(a).map(|r| r.terminated || r.truncated).unwrap_or(true) {
                used.reset(None).unwrap();
            }
        }
        prop_assert_eq!(obs_bytes(&used.reset(Some(seed)).unwrap().0), clean);
    }

    /// Transitions are pure: same input, same output, input untouched.
    #[test]
    fn transitions_are_pure(row in 0..BASELINE.len(), seed in any::<u64>(), walk in prop::collection::vec(0usize..16, 1..60)) {
        let (id, params, _, _) = BASELINE[row];
        let pz = puzzle(id, params);
        let mut s = pz.generate(&mut Rng::seed_from_u64(seed)).unwrap();
        for a in walk {
            let a = a % pz.action_count();
            let before = s.clone();
            let (x, cx) = pz.transition(&s, a);
            let (y, cy) = pz.transition(&s, a);
            prop_assert_eq!(&s, &before);
            prop_assert_eq!(&x, &y);
            prop_assert_eq!(cx, cy);
            prop_assert_eq!(cx, x != s);
            if pz.status(&x) != Status::InProgress {
                break;
            }
            s = x;
        }
    }

    /// Base-seeded resets follow a per-episode stream.
    #[test]
    fn base_seed_streams_repeat(row in 0..BASELINE.len(), base in any::<u64>()) {
        let (id, params, _, _) = BASELINE[row];
        let cfg = EnvConfig::new(id, params).unwrap().with_base_seed(base);
        let run = || {
            let mut env = Env::new(cfg.clone()).unwrap();
            (0..3).map(|_| obs_bytes(&env.reset(None).unwrap().0)).collect::<Vec<_>>()
        };
        prop_assert_eq!(run(), run());
    }
}
