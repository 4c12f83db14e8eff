//! Sixteen: slide whole rows and columns to put the numbers in order.

use serde::{Deserialize, Serialize};

use super::frame::{self, FrameCursor, Line};
use super::grid::{ascii_numbers, draw_number_tiles, permutation_is_odd};
use super::{Action, Game, KeyWriter, PuzzleError, PuzzleId, Status};
use crate::draw::{Color, DrawList};
use crate::observation::StateObservation;
use crate::params::ParamMap;
use crate::rng::Rng;

/// Boards up to this many cells are checked by exhaustive search.
const EXACT_CELLS: usize = 9;

#[derive(Debug, Clone)]
pub struct Sixteen {
    width: usize,
    height: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SixteenState {
    pub width: usize,
    pub height: usize,
    pub tiles: Vec<u16>,
    pub cursor: FrameCursor,
    pub move_count: u32,
}

impl Sixteen {
    pub fn new(p: &ParamMap) -> Self {
        let (width, height) = p.dims().expect("validated");
        Sixteen { width, height }
    }
}

fn ordered(tiles: &[u16]) -> bool {
    tiles.iter().enumerate().all(|(i, &t)| t as usize == i + 1)
}

/// Solvability without search. With a single row (or column) only cyclic
/// rotations are reachable; otherwise every permutation is, except that an
/// odd by odd board only reaches even ones since each slide is then an odd
/// cycle.
pub fn reachable_by_rule(tiles: &[u16], w: usize, h: usize) -> bool {
    let n = tiles.len();
    let mut perm = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    for &t in tiles {
        let v = t as usize;
        if v == 0 || v > n || std::mem::replace(&mut seen[v - 1], true) {
            return false;
        }
        perm.push(v - 1);
    }
    if w == 1 || h == 1 {
        let start = perm[0];
        return perm.iter().enumerate().all(|(i, &p)| p == (start + i) % n);
    }
    !(w % 2 == 1 && h % 2 == 1 && permutation_is_odd(&perm))
}

impl Game for Sixteen {
    type State = SixteenState;

    fn id(&self) -> PuzzleId {
        PuzzleId::Sixteen
    }

    fn candidate(&self, rng: &mut Rng) -> Option<SixteenState> {
        let (w, h) = (self.width, self.height);
        let mut tiles: Vec<u16> = (1..=(w * h) as u16).collect();
        let lines = frame::all_lines(w, h);
        for _ in 0..4 * w * h {
            frame::shift(&mut tiles, w, h, *rng.choose(&lines)?);
        }
        Some(SixteenState { width: w, height: h, tiles, cursor: FrameCursor::start(), move_count: 0 })
    }

    fn apply(&self, s: &SixteenState, action: Action) -> Option<SixteenState> {
        let line = match action {
            Action::Select => s.cursor.line(s.width, s.height),
            Action::Select2 => s.cursor.line(s.width, s.height).reversed(),
            _ => {
                let cursor = s.cursor.step(action, s.width, s.height)?;
                return Some(SixteenState { cursor, ..s.clone() });
            }
        };
        let mut next = s.clone();
        frame::shift(&mut next.tiles, s.width, s.height, line);
        if next.tiles == s.tiles {
            return None;
        }
        next.move_count += 1;
        Some(next)
    }

    fn status(&self, s: &SixteenState) -> Status {
        if ordered(&s.tiles) {
            Status::Solved
        } else {
            Status::InProgress
        }
    }

    fn encode(&self, s: &SixteenState) -> StateObservation {
        StateObservation::new()
            .array("cursor_pos", &[2], &[s.cursor.x, s.cursor.y])
            .scalar("height", s.height as i64)
            .scalar("move_count", s.move_count)
            .array("tiles", &[s.tiles.len()], &s.tiles)
            .scalar("width", s.width as i64)
    }

    fn write_key(&self, s: &SixteenState, out: &mut KeyWriter) {
        out.u16s(&s.tiles).i32(s.cursor.x).i32(s.cursor.y);
    }

    fn render(&self, s: &SixteenState) -> DrawList {
        let (w, h) = (s.width as f64, s.height as f64);
        let mut list = DrawList::new(w + 2.0, h + 2.0);
        list.rect(1.0, 1.0, w, h, Color::WHITE);
        draw_number_tiles(&mut list, &s.tiles, s.width, 1.0, 1.0);
        let (dx, dy) = match s.cursor.line(s.width, s.height) {
            Line::Row(_, d) => (d, 0),
            Line::Col(_, d) => (0, d),
        };
        list.arrow(s.cursor.x as f64 + 1.0, s.cursor.y as f64 + 1.0, dx, dy, Color::RED);
        list
    }

    fn verify_solvable(&self, s: &SixteenState) -> Result<bool, PuzzleError> {
        if s.tiles.len() <= EXACT_CELLS {
            let cells: Vec<u8> = s.tiles.iter().map(|&t| t.min(15) as u8).collect();
            if let Some(found) = frame::slide_search(
                &cells,
                s.width,
                s.height,
                |c| c.iter().enumerate().all(|(i, &t)| t as usize == i + 1),
                usize::MAX,
            ) {
                return Ok(found);
            }
        }
        Ok(reachable_by_rule(&s.tiles, s.width, s.height))
    }

    fn ascii(&self, s: &SixteenState) -> String {
        format!("cursor ({}, {})\n{}", s.cursor.x, s.cursor.y, ascii_numbers(&s.tiles, s.width))
    }
}
