//! Seeded evaluation campaigns: policies, episode records and statistics.

use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::env::{Env, EnvConfig, EnvError, EpisodeStatus};
use crate::params::{format_params, parse_params};
use crate::puzzles::{Action, PuzzleId};
use crate::rng::{splitmix64, Rng};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BenchError {
    #[error(transparent)]
    Env(#[from] EnvError),
    #[error("mask has no allowed action")]
    EmptyMask,
    #[error("no reference value for {puzzle} `{params}`")]
    UnknownConfiguration { puzzle: PuzzleId, params: String },
    #[error("bad policy: {0}")]
    BadPolicy(String),
    #[error("n_episodes must be at least 1")]
    NoEpisodes,
}

/// Uniform action, restricted to allowed actions when a mask is given.
pub fn random_policy(rng: &mut Rng, mask: Option<&[bool]>, cardinality: usize) -> Result<usize, BenchError> {
    match mask {
        None => Ok(rng.index(cardinality)),
        Some(mask) => {
            let allowed = mask.iter().filter(|&&m| m).count();
            if allowed == 0 {
                return Err(BenchError::EmptyMask);
            }
            let k = rng.index(allowed);
            Ok(mask.iter().enumerate().filter(|(_, &m)| m).nth(k).expect("k < allowed").0)
        }
    }
}

/// Chooses actions for a running episode.
pub trait Policy {
    /// Called after each reset with the episode's seed.
    fn begin(&mut self, _seed: u64) {}

    fn act(&mut self, env: &Env) -> Result<usize, BenchError>;
}

pub struct RandomPolicy {
    rng: Rng,
    masked: bool,
}

impl RandomPolicy {
    pub fn new(masked: bool) -> Self {
        RandomPolicy { rng: Rng::seed_from_u64(0), masked }
    }
}

/// Policy streams are decorrelated from the instance stream of the same seed.
const POLICY_SALT: u64 = 0x706f_6c69_6379;

impl Policy for RandomPolicy {
    fn begin(&mut self, seed: u64) {
        self.rng = Rng::seed_from_u64(splitmix64(seed ^ POLICY_SALT));
    }

    fn act(&mut self, env: &Env) -> Result<usize, BenchError> {
        if self.masked {
            let mask = env.action_mask()?;
            random_policy(&mut self.rng, Some(&mask), mask.len())
        } else {
            random_policy(&mut self.rng, None, env.action_count())
        }
    }
}

/// Replays a fixed action list, cycling when it runs out.
pub struct ScriptPolicy {
    actions: Vec<usize>,
    next: usize,
}

impl ScriptPolicy {
    pub fn new(actions: Vec<usize>) -> Self {
        ScriptPolicy { actions, next: 0 }
    }
}

impl Policy for ScriptPolicy {
    fn begin(&mut self, _seed: u64) {
        self.next = 0;
    }

    fn act(&mut self, _env: &Env) -> Result<usize, BenchError> {
        let a = self.actions[self.next % self.actions.len()];
        self.next += 1;
        Ok(a)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PolicySpec {
    Random,
    RandomMasked,
    /// Action names, played in order and repeated.
    Script(Vec<Action>),
}

impl PolicySpec {
    /// `random`, `random-masked` or `script:<file>` where the file holds
    /// whitespace-separated action names.
    pub fn parse(text: &str) -> Result<PolicySpec, BenchError> {
        match text {
            "random" => Ok(PolicySpec::Random),
            "random-masked" => Ok(PolicySpec::RandomMasked),
            _ => {
                let path = text
                    .strip_prefix("script:")
                    .ok_or_else(|| BenchError::BadPolicy(format!("unknown policy `{text}`")))?;
                Self::script_from_file(Path::new(path))
            }
        }
    }

    pub fn script_from_file(path: &Path) -> Result<PolicySpec, BenchError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| BenchError::BadPolicy(format!("{}: {e}", path.display())))?;
        Self::script_from_str(&text)
    }

    pub fn script_from_str(text: &str) -> Result<PolicySpec, BenchError> {
        let actions = text
            .split_whitespace()
            .map(|w| w.parse::<Action>().map_err(BenchError::BadPolicy))
            .collect::<Result<Vec<_>, _>>()?;
        if actions.is_empty() {
            return Err(BenchError::BadPolicy("script is empty".into()));
        }
        Ok(PolicySpec::Script(actions))
    }

    pub fn build(&self, puzzle: PuzzleId) -> Result<Box<dyn Policy>, BenchError> {
        Ok(match self {
            PolicySpec::Random => Box::new(RandomPolicy::new(false)),
            PolicySpec::RandomMasked => Box::new(RandomPolicy::new(true)),
            PolicySpec::Script(actions) => {
                let names = puzzle.actions();
                let idx = actions
                    .iter()
                    .map(|a| {
                        names.iter().position(|b| b == a).ok_or_else(|| {
                            BenchError::BadPolicy(format!("{puzzle} has no action {}", a.name()))
                        })
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Box::new(ScriptPolicy::new(idx))
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Solved,
    Failed,
    Truncated,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpisodeRecord {
    pub seed: u64,
    pub steps: u32,
    pub outcome: Outcome,
    pub reward: f64,
}

/// Resets `env` with `seed` and plays `policy` until the episode ends.
pub fn run_episode(env: &mut Env, policy: &mut dyn Policy, seed: u64) -> Result<EpisodeRecord, BenchError> {
    if env.config().max_steps.is_none() {
        return Err(BenchError::Env(EnvError::InvalidConfig("benchmarks need a step cap".into())));
    }
    env.reset(Some(seed))?;
    policy.begin(seed);
    loop {
        let action = policy.act(env)?;
        let t = env.advance(action)?;
        let outcome = match t.status {
            EpisodeStatus::InProgress => continue,
            EpisodeStatus::Solved => Outcome::Solved,
            EpisodeStatus::Failed => Outcome::Failed,
            EpisodeStatus::Truncated => Outcome::Truncated,
        };
        return Ok(EpisodeRecord { seed, steps: t.step_count, outcome, reward: t.reward });
    }
}

/// Streaming mean and variance with an order-independent merge.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Welford {
    pub n: u64,
    pub mean: f64,
    pub m2: f64,
}

impl Welford {
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    pub fn merge(self, o: Welford) -> Welford {
        if self.n == 0 {
            return o;
        }
        if o.n == 0 {
            return self;
        }
        let n = self.n + o.n;
        let d = o.mean - self.mean;
        Welford {
            n,
            mean: self.mean + d * o.n as f64 / n as f64,
            m2: self.m2 + o.m2 + d * d * (self.n as f64 * o.n as f64) / n as f64,
        }
    }

    /// Population standard deviation.
    pub fn std(&self) -> f64 {
        if self.n == 0 {
            0.0
        } else {
            (self.m2 / self.n as f64).sqrt()
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
struct Tally {
    solved_steps: Welford,
    failed: u64,
    truncated: u64,
}

impl Tally {
    fn add(&mut self, r: &EpisodeRecord) {
        match r.outcome {
            Outcome::Solved => self.solved_steps.push(r.steps as f64),
            Outcome::Failed => self.failed += 1,
            Outcome::Truncated => self.truncated += 1,
        }
    }

    fn merge(self, o: Tally) -> Tally {
        Tally {
            solved_steps: self.solved_steps.merge(o.solved_steps),
            failed: self.failed + o.failed,
            truncated: self.truncated + o.truncated,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchStats {
    pub n_episodes: u64,
    pub solved: u64,
    pub failed: u64,
    pub truncated: u64,
    pub success_rate: f64,
    /// Over solved episodes; `None` when nothing was solved.
    pub mean_steps_successful: Option<f64>,
    pub std_steps_successful: Option<f64>,
}

impl BenchStats {
    fn from_tally(t: Tally) -> BenchStats {
        let solved = t.solved_steps.n;
        let n = solved + t.failed + t.truncated;
        BenchStats {
            n_episodes: n,
            solved,
            failed: t.failed,
            truncated: t.truncated,
            success_rate: if n == 0 { 0.0 } else { solved as f64 / n as f64 },
            mean_steps_successful: (solved > 0).then_some(t.solved_steps.mean),
            std_steps_successful: (solved > 0).then(|| t.solved_steps.std()),
        }
    }

    /// Statistics of a record list in one sequential pass.
    pub fn from_records(records: &[EpisodeRecord]) -> BenchStats {
        let mut t = Tally::default();
        for r in records {
            t.add(r);
        }
        BenchStats::from_tally(t)
    }
}

/// Episodes per parallel shard.
const SHARD: u64 = 16;

/// Runs `n_episodes` with reset seeds `base_seed..base_seed + n` in parallel
/// shards. Records come back in seed order.
pub fn evaluate(
    config: &EnvConfig,
    policy: &PolicySpec,
    n_episodes: u64,
    base_seed: u64,
) -> Result<(BenchStats, Vec<EpisodeRecord>), BenchError> {
    if n_episodes == 0 {
        return Err(BenchError::NoEpisodes);
    }
    Env::new(config.clone())?;
    policy.build(config.puzzle)?;
    let shards: Vec<(u64, u64)> = (0..n_episodes)
        .step_by(SHARD as usize)
        .map(|start| (start, (start + SHARD).min(n_episodes)))
        .collect();
    let results: Vec<(Tally, Vec<EpisodeRecord>)> = shards
        .into_par_iter()
        .map(|(lo, hi)| {
            let mut env = Env::new(config.clone())?;
            let mut p = policy.build(config.puzzle)?;
            let mut tally = Tally::default();
            let mut records = Vec::with_capacity((hi - lo) as usize);
            for i in lo..hi {
                let r = run_episode(&mut env, p.as_mut(), base_seed.wrapping_add(i))?;
                tally.add(&r);
                records.push(r);
            }
            Ok((tally, records))
        })
        .collect::<Result<_, BenchError>>()?;
    let mut tally = Tally::default();
    let mut records = Vec::with_capacity(n_episodes as usize);
    for (t, r) in results {
        tally = tally.merge(t);
        records.extend(r);
    }
    Ok((BenchStats::from_tally(tally), records))
}

#[derive(Debug, Deserialize)]
struct OptimalRow {
    puzzle: PuzzleId,
    params: String,
    optimal: u32,
}

const OPTIMAL_TABLE: &str = include_str!("../data/optimal.json");

/// Reference upper bound on optimal episode length, looked up by canonical
/// parameters.
pub fn optimal_upper_bound(puzzle: PuzzleId, params: &str) -> Result<u32, BenchError> {
    let unknown = || BenchError::UnknownConfiguration { puzzle, params: params.to_string() };
    let canonical = |p: PuzzleId, text: &str| -> Option<String> {
        let (map, _) = parse_params(p, text).ok()?;
        format_params(p, &map).ok()
    };
    let wanted = canonical(puzzle, params).ok_or_else(unknown)?;
    let rows: Vec<OptimalRow> = serde_json::from_str(OPTIMAL_TABLE).expect("bundled table parses");
    rows.into_iter()
        .find(|r| r.puzzle == puzzle && canonical(r.puzzle, &r.params).as_deref() == Some(&wanted))
        .map(|r| r.optimal)
        .ok_or_else(unknown)
}

/// Every `(puzzle, params)` row of the reference table.
pub fn optimal_table() -> Vec<(PuzzleId, String, u32)> {
    let rows: Vec<OptimalRow> = serde_json::from_str(OPTIMAL_TABLE).expect("bundled table parses");
    rows.into_iter().map(|r| (r.puzzle, r.params, r.optimal)).collect()
}
