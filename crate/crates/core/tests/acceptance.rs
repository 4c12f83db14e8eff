//! Acceptance gate: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails. Runs as a plain binary so the report is always shown.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use common::*;
use puzzles_core::bench::{evaluate, optimal_upper_bound, BenchStats, PolicySpec};
use puzzles_core::env::{EnvConfig, ObsType, DEFAULT_MAX_STEPS};
use puzzles_core::puzzles::PuzzleId;

const EPISODES: u64 = 1000;

struct Gate {
    failed: usize,
}

impl Gate {
    fn record(&mut self, name: &str, result: Check) {
        match result {
            Ok(()) => println!("PASS  {name}"),
            Err(why) => {
                self.failed += 1;
                println!("FAIL  {name}: {why}");
            }
        }
    }
}

fn run_row(id: PuzzleId, params: &str, policy: PolicySpec) -> BenchStats {
    let cfg = EnvConfig::new(id, params).unwrap().with_max_steps(Some(DEFAULT_MAX_STEPS));
    evaluate(&cfg, &policy, EPISODES, 0).unwrap().0
}

fn all(checks: impl IntoIterator<Item = Check>) -> Check {
    let errors: Vec<String> = checks.into_iter().filter_map(Result::err).collect();
    if errors.is_empty() {
        Ok(())
    } else {
        Err(errors.join("; "))
    }
}

fn main() -> ExitCode {
    let started = Instant::now();
    let mut gate = Gate { failed: 0 };

    let mut unmasked = Vec::new();
    let mut masked = Vec::new();
    println!("{:<10} {:<9} {:>8} {:>8} {:>8} {:>8} {:>8}", "puzzle", "params", "steps", "ref", "success", "ref", "masked");
    for (id, params, ref_steps, ref_success) in BASELINE {
        let u = run_row(id, params, PolicySpec::Random);
        let m = run_row(id, params, PolicySpec::RandomMasked);
        println!(
            "{:<10} {:<9} {:>8.0} {:>8.0} {:>8.3} {:>8.3} {:>8.3}",
            id.name(),
            params,
            u.mean_steps_successful.unwrap_or(f64::NAN),
            ref_steps,
            u.success_rate,
            ref_success,
            m.success_rate
        );
        unmasked.push(u);
        masked.push(m);
    }

    gate.record(
        "random baseline within ±10pp success and ±35% mean steps (1000 episodes, 10000 max steps)",
        all(BASELINE.iter().zip(&unmasked).map(|(&(id, params, ref_steps, ref_success), u)| {
            let steps = u.mean_steps_successful.unwrap_or(0.0);
            let ok_rate = (u.success_rate - ref_success).abs() <= SUCCESS_TOLERANCE + 1e-12;
            let ok_steps = (steps - ref_steps).abs() <= STEPS_TOLERANCE * ref_steps;
            if ok_rate && ok_steps {
                Ok(())
            } else {
                Err(format!("{id} {params}: {steps:.0} steps / {:.3}", u.success_rate))
            }
        })),
    );

    gate.record(
        "masked random success >= unmasked - 0.02 on every puzzle",
        all(BASELINE.iter().zip(unmasked.iter().zip(&masked)).map(|(&(id, params, _, _), (u, m))| {
            if m.success_rate >= u.success_rate - 0.02 {
                Ok(())
            } else {
                Err(format!("{id} {params}: masked {:.3} < unmasked {:.3}", m.success_rate, u.success_rate))
            }
        })),
    );

    let table = [
        (PuzzleId::Cube, "c3x3", 54),
        (PuzzleId::Fifteen, "2x2", 256),
        (PuzzleId::Flip, "3x3c", 63),
        (PuzzleId::Flood, "3x3c6m5", 63),
        (PuzzleId::Net, "2x2", 28),
        (PuzzleId::Netslide, "2x3b1", 48),
        (PuzzleId::Netslide, "3x3b1", 90),
        (PuzzleId::SameGame, "2x3c3s2", 42),
        (PuzzleId::SameGame, "5x5c3s2", 300),
        (PuzzleId::Sixteen, "2x3", 48),
        (PuzzleId::Twiddle, "2x3n2", 98),
        (PuzzleId::Untangle, "4", 150),
        (PuzzleId::Untangle, "6", 79),
    ];
    gate.record(
        "optimal table returns the reference values for every row",
        all(table.iter().map(|&(id, params, want)| match optimal_upper_bound(id, params) {
            Ok(v) if v == want => Ok(()),
            Ok(v) => Err(format!("{id} {params}: {v} != {want}")),
            Err(e) => Err(e.to_string()),
        })),
    );

    gate.record(
        "(a) 100 generated instances per row are solvable and not initially solved",
        all(rows().iter().map(|(id, params)| check_generation(*id, params, 100))),
    );
    gate.record(
        "(b) masks match brute-force transitions on 100 reachable states per puzzle",
        all(BASELINE.iter().map(|&(id, params, _, _)| check_masks(id, params, 100))),
    );
    gate.record(
        "(c) identical config, seed and actions give byte-identical observations (state and pixels)",
        all(BASELINE.iter().flat_map(|&(id, params, _, _)| {
            [check_determinism(id, params, ObsType::State, 300), check_determinism(id, params, ObsType::Pixels, 60)]
        })),
    );
    gate.record("(d) early termination with threshold 10 fires on the 11th visit exactly", check_early_termination());
    gate.record(
        "(e) fifteen parity and same game gravity hold over 10^4-step random walks",
        all([check_fifteen_parity(10_000), check_samegame_gravity(10_000)]),
    );
    gate.record("(f) untangle solved predicate matches the O(E^2) oracle on 1000 configurations", check_untangle_oracle(1000));
    gate.record(
        "(g) pixel observations are (3,128,128) u8",
        all(rows().iter().map(|(id, params)| check_pixels(*id, params, 40))),
    );
    gate.record("protocol: 10^4 malformed lines, all answered with errors, session survives", check_protocol_fuzz(10_000));

    println!("{} failed, {:.1}s", gate.failed, started.elapsed().as_secs_f64());
    if gate.failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
