//! The environment state machine: reset/step, rewards, truncation and
//! repetition-based early termination.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::observation::{Observation, StateObservation};
use crate::params::{parse_params, ParamError, ParamMap};
use crate::puzzles::{GameState, Puzzle, PuzzleError, PuzzleId, Status};
use crate::raster::{self, RasterError, DEFAULT_PIXEL_SIZE, MIN_PIXEL_SIZE};
use crate::rng::Rng;

pub const DEFAULT_MAX_STEPS: u32 = 10_000;
/// Threshold used when early termination is switched on without a value.
pub const DEFAULT_REPEAT_THRESHOLD: u32 = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ObsType {
    State,
    Pixels,
}

impl std::str::FromStr for ObsType {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "state" => Ok(ObsType::State),
            "pixels" | "pixel" | "rgb" => Ok(ObsType::Pixels),
            other => Err(format!("unknown observation type `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvConfig {
    pub puzzle: PuzzleId,
    pub params: ParamMap,
    /// Seed from a `#` suffix on the parameter string; pins every reset that
    /// has no explicit override to that one instance.
    pub fixed_seed: Option<u64>,
    pub obs_type: ObsType,
    pub pixel_size: usize,
    pub max_steps: Option<u32>,
    pub repeat_threshold: Option<u32>,
    pub reward_solved: f64,
    pub reward_failed: f64,
    pub base_seed: u64,
}

impl EnvConfig {
    /// Defaults for everything but the puzzle and its parameter string.
    pub fn new(puzzle: PuzzleId, params: &str) -> Result<Self, EnvError> {
        let (params, fixed_seed) = parse_params(puzzle, params)?;
        Ok(EnvConfig {
            puzzle,
            params,
            fixed_seed,
            obs_type: ObsType::State,
            pixel_size: DEFAULT_PIXEL_SIZE,
            max_steps: Some(DEFAULT_MAX_STEPS),
            repeat_threshold: None,
            reward_solved: 1.0,
            reward_failed: -1.0,
            base_seed: 0,
        })
    }

    pub fn with_obs(mut self, obs_type: ObsType) -> Self {
        self.obs_type = obs_type;
        self
    }

    pub fn with_max_steps(mut self, max_steps: Option<u32>) -> Self {
        self.max_steps = max_steps;
        self
    }

    pub fn with_repeat_threshold(mut self, k: Option<u32>) -> Self {
        self.repeat_threshold = k;
        self
    }

    pub fn with_base_seed(mut self, seed: u64) -> Self {
        self.base_seed = seed;
        self
    }

    pub fn validate(&self) -> Result<(), EnvError> {
        let bad = |m: &str| Err(EnvError::InvalidConfig(m.to_string()));
        if self.pixel_size < MIN_PIXEL_SIZE {
            return bad("pixel_size must be at least 16");
        }
        if self.max_steps == Some(0) {
            return bad("max_steps must be at least 1");
        }
        if self.repeat_threshold == Some(0) {
            return bad("repeat_threshold must be at least 1");
        }
        if !(self.reward_solved > 0.0 && self.reward_failed < 0.0) {
            return bad("rewards must satisfy reward_solved > 0 > reward_failed");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EnvError {
    #[error(transparent)]
    Params(#[from] ParamError),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Generation(#[from] PuzzleError),
    #[error(transparent)]
    Raster(#[from] RasterError),
    #[error("no active episode; call reset first")]
    NotReset,
    #[error("episode is over; call reset")]
    EpisodeOver,
    #[error("action {action} out of range for {cardinality} actions")]
    ActionOutOfRange { action: usize, cardinality: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EpisodeStatus {
    InProgress,
    Solved,
    Failed,
    Truncated,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Info {
    pub puzzle_state: StateObservation,
    pub action_mask: Vec<bool>,
    pub step_count: u32,
    pub status: EpisodeStatus,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepResult {
    pub observation: Observation,
    pub reward: f64,
    pub terminated: bool,
    pub truncated: bool,
    pub info: Info,
}

/// Outcome of one step, without payloads.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transition {
    pub reward: f64,
    pub terminated: bool,
    pub truncated: bool,
    pub status: EpisodeStatus,
    pub step_count: u32,
}

#[derive(Debug, Clone)]
struct Episode {
    state: GameState,
    step_count: u32,
    repeat_counts: HashMap<Vec<u8>, u32>,
    status: EpisodeStatus,
}

#[derive(Debug)]
pub struct Env {
    config: EnvConfig,
    puzzle: Puzzle,
    episodes_started: u64,
    episode: Option<Episode>,
}

impl Env {
    pub fn new(config: EnvConfig) -> Result<Env, EnvError> {
        config.validate()?;
        let puzzle = Puzzle::new(config.puzzle, &config.params)?;
        Ok(Env { config, puzzle, episodes_started: 0, episode: None })
    }

    pub fn config(&self) -> &EnvConfig {
        &self.config
    }

    pub fn puzzle(&self) -> &Puzzle {
        &self.puzzle
    }

    pub fn action_count(&self) -> usize {
        self.puzzle.action_count()
    }

    /// The current logical state, if an episode has been started.
    pub fn state(&self) -> Option<&GameState> {
        self.episode.as_ref().map(|e| &e.state)
    }

    pub fn status(&self) -> Option<EpisodeStatus> {
        self.episode.as_ref().map(|e| e.status)
    }

    pub fn reset(&mut self, seed_override: Option<u64>) -> Result<(Observation, Info), EnvError> {
        let mut rng = match seed_override.or(self.config.fixed_seed) {
            Some(seed) => Rng::seed_from_u64(seed),
            None => Rng::for_episode(self.config.base_seed, self.episodes_started),
        };
        self.episodes_started += 1;
        self.episode = None;
        let state = self.puzzle.generate(&mut rng)?;
        self.start(state)
    }

    /// Starts an episode from a given state, e.g. one read back from a log.
    pub fn reset_to(&mut self, state: GameState) -> Result<(Observation, Info), EnvError> {
        self.episode = None;
        self.start(state)
    }

    fn start(&mut self, state: GameState) -> Result<(Observation, Info), EnvError> {
        let status = match self.puzzle.status(&state) {
            Status::InProgress => EpisodeStatus::InProgress,
            Status::Solved => EpisodeStatus::Solved,
            Status::Failed => EpisodeStatus::Failed,
        };
        let repeat_counts = HashMap::from([(self.puzzle.repetition_key(&state), 1)]);
        let episode = Episode { state, step_count: 0, repeat_counts, status };
        let observation = self.observe(&episode.state)?;
        let info = self.info(&episode);
        self.episode = Some(episode);
        Ok((observation, info))
    }

    pub fn step(&mut self, action: usize) -> Result<StepResult, EnvError> {
        let t = self.advance(action)?;
        let episode = self.episode.as_ref().expect("advanced episode exists");
        Ok(StepResult {
            observation: self.observe(&episode.state)?,
            reward: t.reward,
            terminated: t.terminated,
            truncated: t.truncated,
            info: self.info(episode),
        })
    }

    /// [`Env::step`] without building the observation and info record.
    pub fn advance(&mut self, action: usize) -> Result<Transition, EnvError> {
        let cardinality = self.action_count();
        let cfg = &self.config;
        let episode = self.episode.as_mut().ok_or(EnvError::NotReset)?;
        if episode.status != EpisodeStatus::InProgress {
            return Err(EnvError::EpisodeOver);
        }
        if action >= cardinality {
            return Err(EnvError::ActionOutOfRange { action, cardinality });
        }
        if let Some(next) = self.puzzle.apply(&episode.state, action) {
            episode.state = next;
        }
        episode.step_count += 1;
        // Visit counts only matter when early termination is on.
        let looped = match cfg.repeat_threshold {
            Some(k) => {
                let visits = episode
                    .repeat_counts
                    .entry(self.puzzle.repetition_key(&episode.state))
                    .or_insert(0);
                *visits += 1;
                *visits > k
            }
            None => false,
        };

        let (reward, status) = match self.puzzle.status(&episode.state) {
            Status::Solved => (cfg.reward_solved, EpisodeStatus::Solved),
            Status::Failed => (cfg.reward_failed, EpisodeStatus::Failed),
            Status::InProgress => {
                let capped = cfg.max_steps.is_some_and(|m| episode.step_count >= m);
                let status = if capped || looped { EpisodeStatus::Truncated } else { EpisodeStatus::InProgress };
                (0.0, status)
            }
        };
        episode.status = status;
        Ok(Transition {
            reward,
            terminated: matches!(status, EpisodeStatus::Solved | EpisodeStatus::Failed),
            truncated: status == EpisodeStatus::Truncated,
            status,
            step_count: episode.step_count,
        })
    }

    /// Observation of the current state in the configured modality.
    pub fn observation(&self) -> Result<Observation, EnvError> {
        self.observe(self.state().ok_or(EnvError::NotReset)?)
    }

    /// Which actions would change the current state.
    pub fn action_mask(&self) -> Result<Vec<bool>, EnvError> {
        let episode = self.episode.as_ref().ok_or(EnvError::NotReset)?;
        if episode.status != EpisodeStatus::InProgress {
            return Err(EnvError::EpisodeOver);
        }
        Ok(self.puzzle.action_mask(&episode.state))
    }

    fn observe(&self, state: &GameState) -> Result<Observation, EnvError> {
        Ok(match self.config.obs_type {
            ObsType::State => Observation::State(self.puzzle.encode_state(state)),
            ObsType::Pixels => {
                Observation::Pixels(raster::rasterize(&self.puzzle.render(state), self.config.pixel_size)?)
            }
        })
    }

    fn info(&self, episode: &Episode) -> Info {
        Info {
            puzzle_state: self.puzzle.encode_state(&episode.state),
            action_mask: self.puzzle.action_mask(&episode.state),
            step_count: episode.step_count,
            status: episode.status,
        }
    }
}
