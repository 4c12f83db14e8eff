//! Checks shared by the property tests and the acceptance gate. Each returns
//! `Err` with a description of the first counterexample.

#![allow(dead_code)]

use std::collections::HashMap;
use std::io::Cursor;

use puzzles_core::bench::optimal_table;
use puzzles_core::env::{Env, EnvConfig, EpisodeStatus, ObsType};
use puzzles_core::observation::Observation;
use puzzles_core::protocol;
use puzzles_core::puzzles::planar::Point;
use puzzles_core::puzzles::untangle::UntangleState;
use puzzles_core::puzzles::{GameState, Puzzle, PuzzleId, Status};
use puzzles_core::rng::Rng;
use rayon::prelude::*;
use serde_json::Value;

pub type Check = Result<(), String>;

/// Reference random-policy rows: (puzzle, params, mean steps of solved episodes, success rate).
pub const BASELINE: [(PuzzleId, &str, f64, f64); 10] = [
    (PuzzleId::Fifteen, "2x2", 54.0, 1.000),
    (PuzzleId::Flood, "3x3c6m5", 134.0, 0.974),
    (PuzzleId::Net, "2x2", 1279.0, 1.000),
    (PuzzleId::Netslide, "2x3b1", 766.0, 1.000),
    (PuzzleId::SameGame, "2x3c3s2", 76.0, 1.000),
    (PuzzleId::Sixteen, "2x3", 2908.0, 0.941),
    (PuzzleId::Twiddle, "2x3n2", 851.0, 1.000),
    (PuzzleId::Untangle, "4", 141.0, 1.000),
    (PuzzleId::Flip, "3x3c", 3138.0, 0.889),
    (PuzzleId::Cube, "c3x3", 4181.0, 0.669),
];

pub const SUCCESS_TOLERANCE: f64 = 0.10;
pub const STEPS_TOLERANCE: f64 = 0.35;

/// Every parameter row with a reference optimal value (a superset of the
/// baseline rows).
pub fn rows() -> Vec<(PuzzleId, String)> {
    optimal_table().into_iter().map(|(p, s, _)| (p, s)).collect()
}

pub fn puzzle(id: PuzzleId, params: &str) -> Puzzle {
    Puzzle::from_text(id, params).expect("valid row")
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Generated instances are solvable and not already solved.
pub fn check_generation(id: PuzzleId, params: &str, count: u64) -> Check {
    let pz = puzzle(id, params);
    (0..count).into_par_iter().try_for_each(|seed| {
        let s = pz
            .generate(&mut Rng::seed_from_u64(seed))
            .map_err(|e| format!("{id} {params} seed {seed}: {e}"))?;
        ensure(pz.status(&s) == Status::InProgress, || format!("{id} {params} seed {seed}: starts finished"))?;
        match pz.verify_solvable(&s) {
            Ok(true) => Ok(()),
            Ok(false) => Err(format!("{id} {params} seed {seed}: unsolvable")),
            Err(e) => Err(format!("{id} {params} seed {seed}: {e}")),
        }
    })
}

/// In-progress states reached by random walks from generated instances.
pub fn reachable_states(pz: &Puzzle, count: usize, seed: u64) -> Vec<GameState> {
    let mut rng = Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let mut instance = 0;
    while out.len() < count {
        let mut s = pz.generate(&mut Rng::seed_from_u64(seed ^ instance)).expect("generation");
        instance += 1;
        let len = rng.index(200);
        for _ in 0..len {
            let (next, _) = pz.transition(&s, rng.index(pz.action_count()));
            if pz.status(&next) != Status::InProgress {
                break;
            }
            s = next;
        }
        out.push(s);
    }
    out
}

/// The mask marks exactly the actions whose step changes the state.
pub fn check_masks(id: PuzzleId, params: &str, count: usize) -> Check {
    let pz = puzzle(id, params);
    let mut env = Env::new(EnvConfig::new(id, params).unwrap()).unwrap();
    for (i, s) in reachable_states(&pz, count, 0xA11CE).into_iter().enumerate() {
        env.reset_to(s.clone()).unwrap();
        let mask = env.action_mask().unwrap();
        for (a, &allowed) in mask.iter().enumerate() {
            env.reset_to(s.clone()).unwrap();
            env.step(a).unwrap();
            let changed = env.state().unwrap() != &s;
            ensure(allowed == changed, || {
                format!("{id} {params} state {i} action {a}: mask says {allowed}, step changed={changed}")
            })?;
        }
    }
    Ok(())
}

pub fn obs_bytes(obs: &Observation) -> Vec<u8> {
    match obs {
        Observation::State(s) => serde_json::to_vec(s).unwrap(),
        Observation::Pixels(p) => p.data.clone(),
    }
}

/// Observation stream of a fixed seeded action script; episodes that end
/// are restarted with the next seed.
pub fn observation_stream(cfg: &EnvConfig, seed: u64, steps: usize) -> Vec<Vec<u8>> {
    let mut env = Env::new(cfg.clone()).unwrap();
    let mut script = Rng::seed_from_u64(seed.wrapping_mul(31).wrapping_add(7));
    let mut episode_seed = seed;
    let mut out = vec![obs_bytes(&env.reset(Some(episode_seed)).unwrap().0)];
    for _ in 0..steps {
        let r = env.step(script.index(env.action_count())).unwrap();
        out.push(obs_bytes(&r.observation));
        out.push(r.reward.to_le_bytes().to_vec());
        if r.terminated || r.truncated {
            episode_seed += 1;
            out.push(obs_bytes(&env.reset(Some(episode_seed)).unwrap().0));
        }
    }
    out
}

/// Identical config, seed and actions give byte-identical observations.
pub fn check_determinism(id: PuzzleId, params: &str, obs: ObsType, steps: usize) -> Check {
    let cfg = EnvConfig::new(id, params).unwrap().with_obs(obs).with_max_steps(Some(60));
    for seed in [0u64, 1, 0xDEAD_BEEF] {
        let a = observation_stream(&cfg, seed, steps);
        let b = observation_stream(&cfg, seed, steps);
        ensure(a == b, || format!("{id} {params} {obs:?} seed {seed}: streams differ"))?;
    }
    Ok(())
}

/// Bouncing between two states with the threshold at 10: the reset state is
/// visited for the 11th time at step 20, and that step (not earlier) truncates.
pub fn check_early_termination() -> Check {
    const K: u32 = 10;
    for (id, params) in [(PuzzleId::Fifteen, "3x3"), (PuzzleId::Flip, "3x3c"), (PuzzleId::Net, "3x3")] {
        let pz = puzzle(id, params);
        let cfg = EnvConfig::new(id, params).unwrap().with_repeat_threshold(Some(K));
        let mut found = false;
        for seed in 0..50u64 {
            let start = pz.generate(&mut Rng::seed_from_u64(seed)).unwrap();
            // (a, b) with b undoing a up to move counters, via an unsolved state.
            let pair = (0..pz.action_count()).flat_map(|a| (0..pz.action_count()).map(move |b| (a, b))).find(|&(a, b)| {
                let (mid, changed) = pz.transition(&start, a);
                changed
                    && pz.status(&mid) == Status::InProgress
                    && pz.repetition_key(&pz.transition(&mid, b).0) == pz.repetition_key(&start)
            });
            let Some((a, b)) = pair else { continue };
            found = true;
            let mut env = Env::new(cfg.clone()).unwrap();
            env.reset_to(start).unwrap();
            for step in 1..=2 * K {
                let r = env.step(if step % 2 == 1 { a } else { b }).unwrap();
                let last = step == 2 * K;
                ensure(r.truncated == last && !r.terminated, || {
                    format!("{id}: step {step} truncated={} terminated={}", r.truncated, r.terminated)
                })?;
                ensure(r.reward == 0.0, || format!("{id}: nonzero reward on truncation"))?;
            }
            ensure(env.status() == Some(EpisodeStatus::Truncated), || format!("{id}: not truncated"))?;
            break;
        }
        ensure(found, || format!("{id}: no reversible move found"))?;
    }
    Ok(())
}

/// Random walk of `steps` total steps across episodes, calling `check` on
/// every visited state.
pub fn walk(id: PuzzleId, params: &str, steps: usize, mut check: impl FnMut(&GameState) -> Check) -> Check {
    let pz = puzzle(id, params);
    let mut rng = Rng::seed_from_u64(0x5EED);
    let mut seed = 0;
    let mut s = pz.generate(&mut Rng::seed_from_u64(seed)).unwrap();
    check(&s)?;
    for _ in 0..steps {
        s = pz.transition(&s, rng.index(pz.action_count())).0;
        check(&s)?;
        if pz.status(&s) != Status::InProgress {
            seed += 1;
            s = pz.generate(&mut Rng::seed_from_u64(seed)).unwrap();
            check(&s)?;
        }
    }
    Ok(())
}

pub fn check_fifteen_parity(steps: usize) -> Check {
    for params in ["3x3", "4x4", "3x5"] {
        walk(PuzzleId::Fifteen, params, steps, |s| {
            let GameState::Fifteen(f) = s else { unreachable!() };
            ensure(f.parity_matches(), || format!("fifteen {params}: parity broken at {:?}", f.tiles))
        })?;
    }
    Ok(())
}

/// No gap under a tile in any column, and no empty column left of a
/// non-empty one.
pub fn gravity_holds(cells: &[u8], w: usize, h: usize) -> bool {
    let column_empty = |x: usize| (0..h).all(|y| cells[y * w + x] == 0);
    for x in 0..w {
        for y in 0..h - 1 {
            if cells[y * w + x] != 0 && cells[(y + 1) * w + x] == 0 {
                return false;
            }
        }
        if x + 1 < w && column_empty(x) && !column_empty(x + 1) {
            return false;
        }
    }
    true
}

pub fn check_samegame_gravity(steps: usize) -> Check {
    for params in ["5x5c3s2", "4x6c4s2", "2x3c3s2"] {
        walk(PuzzleId::SameGame, params, steps, |s| {
            let GameState::SameGame(g) = s else { unreachable!() };
            ensure(gravity_holds(&g.cells, g.width, g.height), || {
                format!("samegame {params}: floating tiles in {:?}", g.cells)
            })
        })?;
    }
    Ok(())
}

fn cross(a: (i128, i128), b: (i128, i128)) -> i128 {
    a.0 * b.1 - a.1 * b.0
}

fn dot(a: (i128, i128), b: (i128, i128)) -> i128 {
    a.0 * b.0 + a.1 * b.1
}

fn sub(a: Point, b: Point) -> (i128, i128) {
    ((a.0 - b.0) as i128, (a.1 - b.1) as i128)
}

/// Whether segments `pq` and `rs` meet anywhere other than at a shared
/// endpoint, by solving `p + t(q-p) = r + u(s-r)` with Cramer's rule in exact
/// integer arithmetic.
pub fn segments_conflict(e: (usize, usize), f: (usize, usize), pts: &[Point]) -> bool {
    let (p, q, r, s) = (pts[e.0], pts[e.1], pts[f.0], pts[f.1]);
    let d1 = sub(q, p);
    let d2 = sub(s, r);
    let rp = sub(r, p);
    let den = cross(d1, d2);
    // Parameter t on pq (as a fraction) of the meeting point, if any.
    let shared = |t_num: i128, t_den: i128| -> bool {
        let at_p = t_num == 0;
        let at_q = t_num == t_den;
        (at_p && (e.0 == f.0 || e.0 == f.1)) || (at_q && (e.1 == f.0 || e.1 == f.1))
    };
    if den != 0 {
        let (mut t, mut u, mut dd) = (cross(rp, d2), cross(rp, d1), den);
        if dd < 0 {
            t = -t;
            u = -u;
            dd = -dd;
        }
        let meets = (0..=dd).contains(&t) && (0..=dd).contains(&u);
        meets && !shared(t, dd)
    } else if cross(rp, d1) != 0 {
        false
    } else {
        // Collinear: project rs onto pq.
        let len = dot(d1, d1);
        let a = dot(rp, d1);
        let b = dot(sub(s, p), d1);
        let (lo, hi) = (a.min(b).max(0), a.max(b).min(len));
        if lo > hi {
            false
        } else if lo < hi {
            true
        } else {
            !shared(lo, len)
        }
    }
}

/// Exact O(E²) plane-drawing test plus vertices resting on foreign edges.
pub fn plane_oracle(pts: &[Point], edges: &[(usize, usize)]) -> bool {
    for (i, &e) in edges.iter().enumerate() {
        for &f in &edges[i + 1..] {
            if segments_conflict(e, f, pts) {
                return false;
            }
        }
        for (v, &p) in pts.iter().enumerate() {
            if v == e.0 || v == e.1 {
                continue;
            }
            let (a, b) = (pts[e.0], pts[e.1]);
            let d = sub(b, a);
            let ap = sub(p, a);
            if cross(d, ap) == 0 && (0..=dot(d, d)).contains(&dot(ap, d)) {
                return false;
            }
        }
    }
    true
}

/// Untangle's solved predicate against the oracle on random drawings.
pub fn check_untangle_oracle(configs: u64) -> Check {
    let pz = puzzle(PuzzleId::Untangle, "6");
    let mut rng = Rng::seed_from_u64(0x0DDC0FFEE);
    let mut solved = 0;
    for c in 0..configs {
        let n = 4 + rng.index(6);
        // Small lattices make collinear and touching cases common.
        let lattice = 3 + rng.index(8) as i32;
        let mut pts: Vec<(i32, i32)> = Vec::new();
        while pts.len() < n {
            let p = (rng.index(lattice as usize) as i32, rng.index(lattice as usize) as i32);
            if !pts.contains(&p) {
                pts.push(p);
            }
        }
        let density = 0.2 + 0.5 * (rng.index(100) as f64 / 100.0);
        let mut edges = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                if (rng.index(1000) as f64) < density * 1000.0 {
                    edges.push((a as u16, b as u16));
                }
            }
        }
        let state = UntangleState {
            lattice,
            xs: pts.iter().map(|p| p.0).collect(),
            ys: pts.iter().map(|p| p.1).collect(),
            edges,
            selected: 0,
            grabbed: false,
            move_count: 0,
        };
        let expected = plane_oracle(&state.points(), &state.edge_list());
        solved += expected as u32;
        let got = pz.status(&GameState::Untangle(state.clone())) == Status::Solved;
        ensure(got == expected, || format!("config {c}: predicate {got}, oracle {expected}: {state:?}"))?;
    }
    ensure(solved > 0 && solved < configs as u32, || format!("degenerate sample: {solved} plane of {configs}"))
}

/// Pixel observations along a random walk are (3, 128, 128).
pub fn check_pixels(id: PuzzleId, params: &str, steps: usize) -> Check {
    let cfg = EnvConfig::new(id, params).unwrap().with_obs(ObsType::Pixels).with_max_steps(Some(50));
    let mut env = Env::new(cfg).unwrap();
    let mut rng = Rng::seed_from_u64(99);
    let mut obs = env.reset(Some(0)).unwrap().0;
    for i in 0..=steps {
        let Observation::Pixels(p) = &obs else { return Err("state observation in pixel mode".into()) };
        ensure(p.shape() == [3, 128, 128] && p.data.len() == 3 * 128 * 128, || {
            format!("{id} {params} step {i}: shape {:?}, {} bytes", p.shape(), p.data.len())
        })?;
        let r = env.step(rng.index(env.action_count())).unwrap();
        obs = if r.terminated || r.truncated { env.reset(Some(i as u64)).unwrap().0 } else { r.observation };
    }
    Ok(())
}

/// Deterministic corpus of lines that are each an invalid request for a
/// session holding a freshly reset env.
pub fn malformed_lines(count: usize, seed: u64) -> Vec<Vec<u8>> {
    let mut rng = Rng::seed_from_u64(seed);
    let templates: &[&str] = &[
        "",
        "{",
        "}",
        "[]",
        "null",
        "42",
        "\"step\"",
        "{}",
        r#"{"cmd":null}"#,
        r#"{"cmd":7}"#,
        r#"{"cmd":["step"]}"#,
        r#"{"cmd":"STEP","action":0}"#,
        r#"{"cmd":"jump"}"#,
        r#"{"cmd":"step"}"#,
        r#"{"cmd":"step","action":-1}"#,
        r#"{"cmd":"step","action":1.5}"#,
        r#"{"cmd":"step","action":"0"}"#,
        r#"{"cmd":"step","action":1e300}"#,
        r#"{"cmd":"step","action":18446744073709551615}"#,
        r#"{"cmd":"step","action":99}"#,
        r#"{"cmd":"make"}"#,
        r#"{"cmd":"make","puzzle":"chess","params":"8x8"}"#,
        r#"{"cmd":"make","puzzle":"flood","params":"0x0"}"#,
        r#"{"cmd":"make","puzzle":"flood","params":"3x3c99"}"#,
        r#"{"cmd":"make","puzzle":"fifteen","params":"2x2","obs":"audio"}"#,
        r#"{"cmd":"make","puzzle":"fifteen","params":"2x2","pixel_size":3,"obs":"pixels"}"#,
        r#"{"cmd":"make","puzzle":"fifteen","params":"2x2","max_steps":0}"#,
        r#"{"cmd":"make","puzzle":"fifteen","params":"2x2","early_term":-3}"#,
        r#"{"cmd":"make","puzzle":5,"params":"2x2"}"#,
        r#"{"cmd":"reset","seed":-1}"#,
        r#"{"cmd":"reset","seed":"abc"}"#,
        r#"{"id":1}"#,
        "{\"cmd\":\"step\",\"action\":0",
        "cmd=step action=0",
    ];
    (0..count)
        .map(|_| match rng.index(4) {
            // Random printable noise that is never a JSON object.
            0 => {
                let len = rng.index(40);
                let mut s: Vec<u8> = (0..len).map(|_| b' ' + rng.index(95) as u8).collect();
                s.insert(0, b'#');
                s
            }
            // Raw bytes, including invalid UTF-8.
            1 => {
                let len = 1 + rng.index(30);
                let mut s: Vec<u8> = (0..len).map(|_| rng.index(256) as u8).filter(|&b| b != b'\n').collect();
                s.insert(0, 0xFF);
                s
            }
            // A valid-looking object truncated at a random point.
            2 => {
                let t = r#"{"cmd":"step","action":1,"id":"x"}"#;
                t.as_bytes()[..rng.index(t.len())].to_vec()
            }
            _ => templates[rng.index(templates.len())].as_bytes().to_vec(),
        })
        .collect()
}

/// Feeds `lines` to one session (after a valid make/reset); every line must
/// get exactly one error response, and the session must still work after.
pub fn check_protocol_fuzz(count: usize) -> Check {
    let lines = malformed_lines(count, 0xF022);
    let mut input = Vec::new();
    input.extend_from_slice(b"{\"cmd\":\"make\",\"puzzle\":\"fifteen\",\"params\":\"3x3\"}\n{\"cmd\":\"reset\",\"seed\":1}\n");
    for l in &lines {
        input.extend_from_slice(l);
        input.push(b'\n');
    }
    input.extend_from_slice(b"{\"cmd\":\"mask\",\"id\":\"end\"}\n");
    let mut output = Vec::new();
    protocol::serve(Cursor::new(input), &mut output).map_err(|e| format!("session loop failed: {e}"))?;
    let text = String::from_utf8(output).map_err(|_| "non-UTF-8 output".to_string())?;
    let replies: Vec<&str> = text.lines().collect();
    ensure(replies.len() == lines.len() + 3, || format!("{} replies for {} requests", replies.len(), lines.len() + 3))?;
    for (i, r) in replies[2..replies.len() - 1].iter().enumerate() {
        let v: Value = serde_json::from_str(r).map_err(|e| format!("line {i}: unparsable reply {e}"))?;
        ensure(v["v"] == 1 && v["ok"] == false && v["error"].is_string(), || {
            format!("line {i} ({:?}) got {r}", String::from_utf8_lossy(&lines[i]))
        })?;
    }
    let last: Value = serde_json::from_str(replies[replies.len() - 1]).unwrap();
    ensure(last["ok"] == true && last["id"] == "end", || format!("session dead after fuzz: {last}"))
}

/// Counts of each distinct value.
pub fn histogram<T: std::hash::Hash + Eq>(items: impl IntoIterator<Item = T>) -> HashMap<T, usize> {
    let mut h = HashMap::new();
    for i in items {
        *h.entry(i).or_insert(0) += 1;
    }
    h
}
