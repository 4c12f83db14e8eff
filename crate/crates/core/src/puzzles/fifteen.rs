//! Fifteen: slide tiles into the blank until they read in order.
//!
//! An arrow moves the tile next to the blank in the arrow's direction, so
//! UP slides the tile below the blank upwards.

use serde::{Deserialize, Serialize};

use super::grid::{ascii_numbers, draw_number_tiles, permutation_is_odd};
use super::{Action, Game, KeyWriter, PuzzleError, PuzzleId, Status};
use crate::draw::DrawList;
use crate::observation::StateObservation;
use crate::params::ParamMap;
use crate::rng::Rng;

#[derive(Debug, Clone)]
pub struct Fifteen {
    width: usize,
    height: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FifteenState {
    pub width: usize,
    pub height: usize,
    /// Row-major tile numbers, `0` for the blank.
    pub tiles: Vec<u16>,
    pub move_count: u32,
}

impl FifteenState {
    pub fn solved(width: usize, height: usize) -> Self {
        let n = width * height;
        let mut tiles: Vec<u16> = (1..n as u16).collect();
        tiles.push(0);
        FifteenState { width, height, tiles, move_count: 0 }
    }

    pub fn blank(&self) -> usize {
        self.tiles.iter().position(|&t| t == 0).expect("no blank")
    }

    /// Index of the tile that `action` would slide into the blank.
    fn source(&self, action: Action) -> Option<usize> {
        let (w, h) = (self.width, self.height);
        let b = self.blank();
        let (x, y) = (b % w, b / w);
        match action {
            Action::Up if y + 1 < h => Some(b + w),
            Action::Down if y > 0 => Some(b - w),
            Action::Left if x + 1 < w => Some(b + 1),
            Action::Right if x > 0 => Some(b - 1),
            _ => None,
        }
    }

    /// The classic invariant: permutation parity equals the parity of the
    /// blank's taxicab distance from its home corner exactly when solvable.
    pub fn parity_matches(&self) -> bool {
        let n = self.tiles.len();
        let perm: Vec<usize> = self
            .tiles
            .iter()
            .map(|&t| if t == 0 { n - 1 } else { t as usize - 1 })
            .collect();
        let b = self.blank();
        let dist = (self.width - 1 - b % self.width) + (self.height - 1 - b / self.width);
        permutation_is_odd(&perm) == (dist % 2 == 1)
    }
}

const ARROWS: [Action; 4] = [Action::Up, Action::Down, Action::Left, Action::Right];

impl Fifteen {
    pub fn new(p: &ParamMap) -> Self {
        let (width, height) = p.dims().expect("validated");
        Fifteen { width, height }
    }
}

impl Game for Fifteen {
    type State = FifteenState;

    fn id(&self) -> PuzzleId {
        PuzzleId::Fifteen
    }

    fn candidate(&self, rng: &mut Rng) -> Option<FifteenState> {
        let mut s = FifteenState::solved(self.width, self.height);
        for _ in 0..3 * self.width * self.height {
            let legal: Vec<Action> = ARROWS.into_iter().filter(|&a| s.source(a).is_some()).collect();
            let a = *rng.choose(&legal)?;
            s = self.apply(&s, a)?;
        }
        s.move_count = 0;
        Some(s)
    }

    fn apply(&self, s: &FifteenState, action: Action) -> Option<FifteenState> {
        let src = s.source(action)?;
        let mut next = s.clone();
        let b = s.blank();
        next.tiles.swap(b, src);
        next.move_count += 1;
        Some(next)
    }

    fn status(&self, s: &FifteenState) -> Status {
        let n = s.tiles.len();
        let ordered = s.tiles[..n - 1].iter().enumerate().all(|(i, &t)| t as usize == i + 1);
        if ordered && s.tiles[n - 1] == 0 {
            Status::Solved
        } else {
            Status::InProgress
        }
    }

    fn encode(&self, s: &FifteenState) -> StateObservation {
        StateObservation::new()
            .scalar("height", s.height as i64)
            .scalar("move_count", s.move_count)
            .array("tiles", &[s.tiles.len()], &s.tiles)
            .scalar("width", s.width as i64)
    }

    fn write_key(&self, s: &FifteenState, out: &mut KeyWriter) {
        out.u16s(&s.tiles);
    }

    fn render(&self, s: &FifteenState) -> DrawList {
        let mut list = DrawList::new(s.width as f64, s.height as f64);
        list.rect(0.0, 0.0, s.width as f64, s.height as f64, crate::draw::Color::WHITE);
        draw_number_tiles(&mut list, &s.tiles, s.width, 0.0, 0.0);
        list
    }

    fn verify_solvable(&self, s: &FifteenState) -> Result<bool, PuzzleError> {
        let n = s.tiles.len();
        let mut seen = vec![false; n];
        for &t in &s.tiles {
            if t as usize >= n || std::mem::replace(&mut seen[t as usize], true) {
                return Ok(false);
            }
        }
        Ok(s.parity_matches())
    }

    fn ascii(&self, s: &FifteenState) -> String {
        ascii_numbers(&s.tiles, s.width)
    }
}
