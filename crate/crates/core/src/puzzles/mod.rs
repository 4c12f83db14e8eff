//! Game logic for the supported puzzles.
//!
//! Each puzzle implements [`Game`] over its own state type. [`Puzzle`] wraps a
//! configured game behind dynamic dispatch and works on the tagged
//! [`GameState`]; adding a puzzle means implementing [`Game`], adding a
//! [`PuzzleId`] and a [`GameState`] variant, and registering it in
//! [`Puzzle::new`].

use std::fmt;
use std::str::FromStr;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::draw::DrawList;
use crate::observation::StateObservation;
use crate::params::{parse_params, validate, ParamError, ParamMap};
use crate::rng::Rng;

pub mod cube;
pub mod fifteen;
pub mod flip;
pub mod flood;
mod frame;
mod grid;
pub mod net;
pub mod netslide;
pub mod network;
pub mod planar;
pub mod samegame;
pub mod sixteen;
pub mod twiddle;
pub mod untangle;

pub use frame::FrameCursor;
pub use grid::KeyWriter;

/// Rejection-sampling attempts before generation gives up.
pub const GENERATION_ATTEMPTS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PuzzleId {
    Cube,
    Fifteen,
    Flip,
    Flood,
    Net,
    Netslide,
    #[serde(rename = "samegame")]
    SameGame,
    Sixteen,
    Twiddle,
    Untangle,
}

impl PuzzleId {
    pub const ALL: [PuzzleId; 10] = [
        PuzzleId::Cube,
        PuzzleId::Fifteen,
        PuzzleId::Flip,
        PuzzleId::Flood,
        PuzzleId::Net,
        PuzzleId::Netslide,
        PuzzleId::SameGame,
        PuzzleId::Sixteen,
        PuzzleId::Twiddle,
        PuzzleId::Untangle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PuzzleId::Cube => "cube",
            PuzzleId::Fifteen => "fifteen",
            PuzzleId::Flip => "flip",
            PuzzleId::Flood => "flood",
            PuzzleId::Net => "net",
            PuzzleId::Netslide => "netslide",
            PuzzleId::SameGame => "samegame",
            PuzzleId::Sixteen => "sixteen",
            PuzzleId::Twiddle => "twiddle",
            PuzzleId::Untangle => "untangle",
        }
    }

    /// Actions in index order.
    pub fn actions(self) -> &'static [Action] {
        use Action::*;
        match self {
            PuzzleId::Cube | PuzzleId::Fifteen => &[Up, Down, Left, Right],
            PuzzleId::Flip
            | PuzzleId::Flood
            | PuzzleId::Net
            | PuzzleId::Netslide
            | PuzzleId::Untangle => &[Up, Down, Left, Right, Select],
            PuzzleId::SameGame => &[Up, Down, Left, Right, Select, Undo],
            PuzzleId::Sixteen | PuzzleId::Twiddle => &[Up, Down, Left, Right, Select, Select2],
        }
    }
}

impl fmt::Display for PuzzleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PuzzleId {
    type Err = ParamError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.trim().to_ascii_lowercase().replace([' ', '_', '-'], "");
        PuzzleId::ALL
            .into_iter()
            .find(|p| p.name() == lower)
            .ok_or_else(|| ParamError::UnknownPuzzle(s.to_string()))
    }
}

/// Keyboard-style actions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Action {
    Up,
    Down,
    Left,
    Right,
    Select,
    Select2,
    Undo,
}

impl Action {
    pub fn name(self) -> &'static str {
        match self {
            Action::Up => "UP",
            Action::Down => "DOWN",
            Action::Left => "LEFT",
            Action::Right => "RIGHT",
            Action::Select => "SELECT",
            Action::Select2 => "SELECT2",
            Action::Undo => "UNDO",
        }
    }

    /// Unit step `(dx, dy)` for arrows, with `y` growing downwards.
    pub fn delta(self) -> Option<(i32, i32)> {
        match self {
            Action::Up => Some((0, -1)),
            Action::Down => Some((0, 1)),
            Action::Left => Some((-1, 0)),
            Action::Right => Some((1, 0)),
            _ => None,
        }
    }
}

impl FromStr for Action {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s.trim().to_ascii_uppercase().as_str() {
            "UP" | "U" => Action::Up,
            "DOWN" | "D" => Action::Down,
            "LEFT" | "L" => Action::Left,
            "RIGHT" | "R" => Action::Right,
            "SELECT" | "S" => Action::Select,
            "SELECT2" | "S2" => Action::Select2,
            "UNDO" => Action::Undo,
            other => return Err(format!("unknown action `{other}`")),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    InProgress,
    Solved,
    Failed,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PuzzleError {
    #[error("{puzzle}: no acceptable instance after {attempts} attempts")]
    GenerationFailure { puzzle: PuzzleId, attempts: usize },
    #[error("{puzzle}: solvability oracle exceeded its search budget")]
    OracleBudgetExceeded { puzzle: PuzzleId },
}

/// Logic of one puzzle kind, configured with its parameters.
pub trait Game: Send + Sync {
    type State: Clone + PartialEq + Eq + fmt::Debug + Serialize + DeserializeOwned + Variant;

    fn id(&self) -> PuzzleId;

    /// One generation attempt. `None` rejects the candidate; solved
    /// candidates are rejected by the caller.
    fn candidate(&self, rng: &mut Rng) -> Option<Self::State>;

    /// Successor state, or `None` when the action leaves the state unchanged.
    fn apply(&self, state: &Self::State, action: Action) -> Option<Self::State>;

    fn status(&self, state: &Self::State) -> Status;

    fn encode(&self, state: &Self::State) -> StateObservation;

    /// Canonical bytes of the logical state, without counters or history.
    fn write_key(&self, state: &Self::State, out: &mut KeyWriter);

    fn render(&self, state: &Self::State) -> DrawList;

    fn verify_solvable(&self, state: &Self::State) -> Result<bool, PuzzleError>;

    fn ascii(&self, state: &Self::State) -> String;
}

/// Conversion between a puzzle's own state and the tagged [`GameState`].
pub trait Variant: Sized {
    fn wrap(self) -> GameState;
    fn peel(state: &GameState) -> Option<&Self>;
}

macro_rules! game_states {
    ($($variant:ident($state:ty)),* $(,)?) => {
        /// Tagged logical state of any supported puzzle.
        #[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
        #[serde(tag = "puzzle", content = "state", rename_all = "lowercase")]
        pub enum GameState {
            $($variant($state)),*
        }

        $(
            impl Variant for $state {
                fn wrap(self) -> GameState {
                    GameState::$variant(self)
                }

                fn peel(state: &GameState) -> Option<&Self> {
                    match state {
                        GameState::$variant(s) => Some(s),
                        #[allow(unreachable_patterns)]
                        _ => None,
                    }
                }
            }
        )*
    };
}

game_states! {
    Cube(cube::CubeState),
    Fifteen(fifteen::FifteenState),
    Flip(flip::FlipState),
    Flood(flood::FloodState),
    Net(net::NetState),
    Netslide(netslide::NetslideState),
    SameGame(samegame::SameGameState),
    Sixteen(sixteen::SixteenState),
    Twiddle(twiddle::TwiddleState),
    Untangle(untangle::UntangleState),
}

trait DynGame: Send + Sync {
    fn generate(&self, rng: &mut Rng) -> Result<GameState, PuzzleError>;
    fn apply(&self, state: &GameState, action: Action) -> Option<GameState>;
    fn status(&self, state: &GameState) -> Status;
    fn encode(&self, state: &GameState) -> StateObservation;
    fn key(&self, state: &GameState) -> Vec<u8>;
    fn render(&self, state: &GameState) -> DrawList;
    fn verify_solvable(&self, state: &GameState) -> Result<bool, PuzzleError>;
    fn ascii(&self, state: &GameState) -> String;
}

fn peel<'a, G: Game>(game: &G, state: &'a GameState) -> &'a G::State {
    G::State::peel(state)
        .unwrap_or_else(|| panic!("state passed to {} is of another puzzle", game.id()))
}

impl<G: Game> DynGame for G {
    fn generate(&self, rng: &mut Rng) -> Result<GameState, PuzzleError> {
        for _ in 0..GENERATION_ATTEMPTS {
            if let Some(state) = self.candidate(rng) {
                if self.status(&state) == Status::InProgress {
                    return Ok(state.wrap());
                }
            }
        }
        Err(PuzzleError::GenerationFailure {
            puzzle: self.id(),
            attempts: GENERATION_ATTEMPTS,
        })
    }

    fn apply(&self, state: &GameState, action: Action) -> Option<GameState> {
        Game::apply(self, peel(self, state), action).map(Variant::wrap)
    }

    fn status(&self, state: &GameState) -> Status {
        Game::status(self, peel(self, state))
    }

    fn encode(&self, state: &GameState) -> StateObservation {
        Game::encode(self, peel(self, state))
    }

    fn key(&self, state: &GameState) -> Vec<u8> {
        let mut out = KeyWriter::new(self.id());
        self.write_key(peel(self, state), &mut out);
        out.finish()
    }

    fn render(&self, state: &GameState) -> DrawList {
        Game::render(self, peel(self, state))
    }

    fn verify_solvable(&self, state: &GameState) -> Result<bool, PuzzleError> {
        Game::verify_solvable(self, peel(self, state))
    }

    fn ascii(&self, state: &GameState) -> String {
        Game::ascii(self, peel(self, state))
    }
}

/// A puzzle kind configured with validated parameters.
pub struct Puzzle {
    id: PuzzleId,
    params: ParamMap,
    game: Box<dyn DynGame>,
}

impl fmt::Debug for Puzzle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Puzzle")
            .field("id", &self.id)
            .field("params", &self.params)
            .finish()
    }
}

impl Puzzle {
    pub fn new(id: PuzzleId, params: &ParamMap) -> Result<Puzzle, ParamError> {
        validate(id, params)?;
        let p = params;
        let game: Box<dyn DynGame> = match id {
            PuzzleId::Cube => Box::new(cube::Cube::new(p)),
            PuzzleId::Fifteen => Box::new(fifteen::Fifteen::new(p)),
            PuzzleId::Flip => Box::new(flip::Flip::new(p)),
            PuzzleId::Flood => Box::new(flood::Flood::new(p)),
            PuzzleId::Net => Box::new(net::Net::new(p)),
            PuzzleId::Netslide => Box::new(netslide::Netslide::new(p)),
            PuzzleId::SameGame => Box::new(samegame::SameGame::new(p)),
            PuzzleId::Sixteen => Box::new(sixteen::Sixteen::new(p)),
            PuzzleId::Twiddle => Box::new(twiddle::Twiddle::new(p)),
            PuzzleId::Untangle => Box::new(untangle::Untangle::new(p)),
        };
        Ok(Puzzle { id, params: params.clone(), game })
    }

    /// Parses `text` (seed suffix allowed and ignored) and configures the puzzle.
    pub fn from_text(id: PuzzleId, text: &str) -> Result<Puzzle, ParamError> {
        let (params, _) = parse_params(id, text)?;
        Puzzle::new(id, &params)
    }

    pub fn id(&self) -> PuzzleId {
        self.id
    }

    pub fn params(&self) -> &ParamMap {
        &self.params
    }

    pub fn actions(&self) -> &'static [Action] {
        self.id.actions()
    }

    pub fn action_count(&self) -> usize {
        self.actions().len()
    }

    /// A fresh, unsolved, solvable instance drawn from `rng`.
    pub fn generate(&self, rng: &mut Rng) -> Result<GameState, PuzzleError> {
        self.game.generate(rng)
    }

    /// Applies action index `action`. Returns the successor and whether it differs.
    ///
    /// Panics if `action` is out of range or `state` belongs to another puzzle.
    pub fn transition(&self, state: &GameState, action: usize) -> (GameState, bool) {
        match self.game.apply(state, self.actions()[action]) {
            Some(next) => (next, true),
            None => (state.clone(), false),
        }
    }

    /// Like [`Puzzle::transition`] but without cloning unchanged states.
    pub fn apply(&self, state: &GameState, action: usize) -> Option<GameState> {
        self.game.apply(state, self.actions()[action])
    }

    pub fn status(&self, state: &GameState) -> Status {
        self.game.status(state)
    }

    pub fn encode_state(&self, state: &GameState) -> StateObservation {
        self.game.encode(state)
    }

    pub fn repetition_key(&self, state: &GameState) -> Vec<u8> {
        self.game.key(state)
    }

    pub fn render(&self, state: &GameState) -> DrawList {
        self.game.render(state)
    }

    pub fn verify_solvable(&self, state: &GameState) -> Result<bool, PuzzleError> {
        self.game.verify_solvable(state)
    }

    pub fn ascii(&self, state: &GameState) -> String {
        self.game.ascii(state)
    }

    /// Mask of actions that change `state`.
    pub fn action_mask(&self, state: &GameState) -> Vec<bool> {
        self.actions()
            .iter()
            .map(|&a| self.game.apply(state, a).is_some())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cardinalities() {
        let expect = [
            (PuzzleId::Fifteen, 4),
            (PuzzleId::Cube, 4),
            (PuzzleId::Flood, 5),
            (PuzzleId::Net, 5),
            (PuzzleId::Netslide, 5),
            (PuzzleId::Flip, 5),
            (PuzzleId::Untangle, 5),
            (PuzzleId::SameGame, 6),
            (PuzzleId::Sixteen, 6),
            (PuzzleId::Twiddle, 6),
        ];
        for (p, n) in expect {
            assert_eq!(p.actions().len(), n, "{p}");
        }
    }

    #[test]
    fn ids_round_trip() {
        for p in PuzzleId::ALL {
            assert_eq!(p.name().parse::<PuzzleId>().unwrap(), p);
        }
        assert_eq!("Same Game".parse::<PuzzleId>().unwrap(), PuzzleId::SameGame);
        assert!(matches!("solo".parse::<PuzzleId>(), Err(ParamError::UnknownPuzzle(_))));
    }
}
