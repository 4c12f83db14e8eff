//! Flip: pressing a cell toggles it and its orthogonal neighbours; light every cell.

use serde::{Deserialize, Serialize};

use super::grid::{neighbours, step_cursor};
use super::{Action, Game, KeyWriter, PuzzleError, PuzzleId, Status};
use crate::draw::{Color, DrawList};
use crate::observation::StateObservation;
use crate::params::ParamMap;
use crate::rng::Rng;

#[derive(Debug, Clone)]
pub struct Flip {
    width: usize,
    height: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlipState {
    pub width: usize,
    pub height: usize,
    pub lights: Vec<bool>,
    pub cursor: (usize, usize),
    pub move_count: u32,
}

impl FlipState {
    pub fn press(&mut self, cell: usize) {
        self.lights[cell] = !self.lights[cell];
        for j in neighbours(cell, self.width, self.height) {
            self.lights[j] = !self.lights[j];
        }
    }
}

impl Flip {
    pub fn new(p: &ParamMap) -> Self {
        let (width, height) = p.dims().expect("validated");
        Flip { width, height }
    }

    /// One scrambled board together with the press set that produced it.
    /// Pressing the same cells again restores the all-lit board.
    pub fn generate_with_witness(&self, rng: &mut Rng) -> (FlipState, Vec<usize>) {
        let n = self.width * self.height;
        let mut state = FlipState {
            width: self.width,
            height: self.height,
            lights: vec![true; n],
            cursor: (0, 0),
            move_count: 0,
        };
        let presses: Vec<usize> = (0..n).filter(|_| rng.coin()).collect();
        for &c in &presses {
            state.press(c);
        }
        (state, presses)
    }
}

impl Game for Flip {
    type State = FlipState;

    fn id(&self) -> PuzzleId {
        PuzzleId::Flip
    }

    fn candidate(&self, rng: &mut Rng) -> Option<FlipState> {
        let (state, presses) = self.generate_with_witness(rng);
        (!presses.is_empty()).then_some(state)
    }

    fn apply(&self, s: &FlipState, action: Action) -> Option<FlipState> {
        match action {
            Action::Select => {
                let mut next = s.clone();
                next.press(s.cursor.1 * s.width + s.cursor.0);
                next.move_count += 1;
                Some(next)
            }
            _ => {
                let cursor = step_cursor(s.cursor, action, s.width, s.height)?;
                Some(FlipState { cursor, ..s.clone() })
            }
        }
    }

    fn status(&self, s: &FlipState) -> Status {
        if s.lights.iter().all(|&l| l) {
            Status::Solved
        } else {
            Status::InProgress
        }
    }

    fn encode(&self, s: &FlipState) -> StateObservation {
        let lights: Vec<u8> = s.lights.iter().map(|&l| l as u8).collect();
        StateObservation::new()
            .array("cursor_pos", &[2], &[s.cursor.0 as i64, s.cursor.1 as i64])
            .scalar("height", s.height as i64)
            .array("lights", &[lights.len()], &lights)
            .scalar("move_count", s.move_count)
            .scalar("width", s.width as i64)
    }

    fn write_key(&self, s: &FlipState, out: &mut KeyWriter) {
        out.bools(&s.lights).i32(s.cursor.0 as i32).i32(s.cursor.1 as i32);
    }

    fn render(&self, s: &FlipState) -> DrawList {
        let mut list = DrawList::new(s.width as f64, s.height as f64);
        list.rect(0.0, 0.0, s.width as f64, s.height as f64, Color::BLACK);
        for (i, &lit) in s.lights.iter().enumerate() {
            let (x, y) = ((i % s.width) as f64, (i / s.width) as f64);
            let c = if lit { Color::YELLOW } else { Color::NAVY };
            list.rect(x + 0.05, y + 0.05, 0.9, 0.9, c);
        }
        let (cx, cy) = (s.cursor.0 as f64, s.cursor.1 as f64);
        list.outline(cx + 0.05, cy + 0.05, 0.9, 0.9, 0.1, Color::RED);
        list
    }

    /// Gaussian elimination over GF(2): is there a press set lighting every cell?
    fn verify_solvable(&self, s: &FlipState) -> Result<bool, PuzzleError> {
        let n = s.lights.len();
        // Row r: which presses toggle cell r, augmented with "cell r is dark".
        let mut rows: Vec<Vec<bool>> = (0..n)
            .map(|r| {
                let mut row = vec![false; n + 1];
                row[r] = true;
                for j in neighbours(r, s.width, s.height) {
                    row[j] = true;
                }
                row[n] = !s.lights[r];
                row
            })
            .collect();
        let mut pivot_row = 0;
        for col in 0..n {
            let Some(p) = (pivot_row..n).find(|&r| rows[r][col]) else {
                continue;
            };
            rows.swap(pivot_row, p);
            for r in 0..n {
                if r != pivot_row && rows[r][col] {
                    let pivot = rows[pivot_row].clone();
                    for (a, b) in rows[r].iter_mut().zip(pivot) {
                        *a ^= b;
                    }
                }
            }
            pivot_row += 1;
        }
        Ok(rows[pivot_row..].iter().all(|row| !row[n]))
    }

    fn ascii(&self, s: &FlipState) -> String {
        let mut out = String::new();
        for y in 0..s.height {
            for x in 0..s.width {
                let lit = s.lights[y * s.width + x];
                let c = match (lit, (x, y) == s.cursor) {
                    (true, false) => '#',
                    (false, false) => '.',
                    (true, true) => '@',
                    (false, true) => 'o',
                };
                out.push(c);
            }
            out.push('\n');
        }
        out
    }
}
