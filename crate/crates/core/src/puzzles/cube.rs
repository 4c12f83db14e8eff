//! Cube: roll a cube over the grid, picking up blue squares on its faces.
//!
//! Faces are stored as `[top, bottom, north, south, east, west]`. When the
//! cube lands, its bottom face and the cell under it swap blue-ness if exactly
//! one of them is blue.

use std::collections::{HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::grid::step_cursor;
use super::{Action, Game, KeyWriter, PuzzleError, PuzzleId, Status};
use crate::draw::{Color, DrawList};
use crate::observation::StateObservation;
use crate::params::ParamMap;
use crate::rng::Rng;

pub const FACES: usize = 6;
const TOP: usize = 0;
const BOTTOM: usize = 1;
const NORTH: usize = 2;
const SOUTH: usize = 3;
const EAST: usize = 4;
const WEST: usize = 5;

/// States the solvability search may visit.
const SEARCH_BUDGET: usize = 4_000_000;

#[derive(Debug, Clone)]
pub struct Cube {
    width: usize,
    height: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CubeState {
    pub width: usize,
    pub height: usize,
    pub blue: Vec<bool>,
    pub pos: (usize, usize),
    pub faces: [bool; FACES],
    pub move_count: u32,
}

/// Face array after tipping the cube one cell in `action`'s direction.
pub fn roll(f: [bool; FACES], action: Action) -> [bool; FACES] {
    let mut n = f;
    match action {
        Action::Right => {
            n[TOP] = f[WEST];
            n[BOTTOM] = f[EAST];
            n[EAST] = f[TOP];
            n[WEST] = f[BOTTOM];
        }
        Action::Left => {
            n[TOP] = f[EAST];
            n[BOTTOM] = f[WEST];
            n[EAST] = f[BOTTOM];
            n[WEST] = f[TOP];
        }
        Action::Up => {
            n[TOP] = f[SOUTH];
            n[BOTTOM] = f[NORTH];
            n[NORTH] = f[TOP];
            n[SOUTH] = f[BOTTOM];
        }
        Action::Down => {
            n[TOP] = f[NORTH];
            n[BOTTOM] = f[SOUTH];
            n[NORTH] = f[BOTTOM];
            n[SOUTH] = f[TOP];
        }
        _ => {}
    }
    n
}

const ARROWS: [Action; 4] = [Action::Up, Action::Down, Action::Left, Action::Right];

impl Cube {
    pub fn new(p: &ParamMap) -> Self {
        let (width, height) = p.dims().expect("validated");
        Cube { width, height }
    }
}

impl Game for Cube {
    type State = CubeState;

    fn id(&self) -> PuzzleId {
        PuzzleId::Cube
    }

    fn candidate(&self, rng: &mut Rng) -> Option<CubeState> {
        let n = self.width * self.height;
        let mut cells: Vec<usize> = (0..n).collect();
        rng.shuffle(&mut cells);
        let mut blue = vec![false; n];
        for &c in &cells[..FACES] {
            blue[c] = true;
        }
        let free: Vec<usize> = (0..n).filter(|&i| !blue[i]).collect();
        let at = *rng.choose(&free)?;
        Some(CubeState {
            width: self.width,
            height: self.height,
            blue,
            pos: (at % self.width, at / self.width),
            faces: [false; FACES],
            move_count: 0,
        })
    }

    fn apply(&self, s: &CubeState, action: Action) -> Option<CubeState> {
        let pos = step_cursor(s.pos, action, s.width, s.height)?;
        let mut next = s.clone();
        next.pos = pos;
        next.faces = roll(s.faces, action);
        let cell = pos.1 * s.width + pos.0;
        if next.faces[BOTTOM] != next.blue[cell] {
            std::mem::swap(&mut next.faces[BOTTOM], &mut next.blue[cell]);
        }
        next.move_count += 1;
        Some(next)
    }

    fn status(&self, s: &CubeState) -> Status {
        if s.faces.iter().all(|&f| f) {
            Status::Solved
        } else {
            Status::InProgress
        }
    }

    fn encode(&self, s: &CubeState) -> StateObservation {
        StateObservation::new()
            .array("blue", &[s.blue.len()], &s.blue.iter().map(|&b| b as u8).collect::<Vec<_>>())
            .array("cursor_pos", &[2], &[s.pos.0 as i64, s.pos.1 as i64])
            .array("faces", &[FACES], &s.faces.map(|b| b as u8))
            .scalar("height", s.height as i64)
            .scalar("move_count", s.move_count)
            .scalar("width", s.width as i64)
    }

    fn write_key(&self, s: &CubeState, out: &mut KeyWriter) {
        out.bools(&s.blue).bools(&s.faces).i32(s.pos.0 as i32).i32(s.pos.1 as i32);
    }

    fn render(&self, s: &CubeState) -> DrawList {
        let mut list = DrawList::new(s.width as f64, s.height as f64);
        for (i, &b) in s.blue.iter().enumerate() {
            let (x, y) = ((i % s.width) as f64, (i / s.width) as f64);
            list.rect(x, y, 1.0, 1.0, Color::BLACK);
            list.rect(x + 0.04, y + 0.04, 0.92, 0.92, if b { Color::BLUE } else { Color::LIGHT_GRAY });
        }
        // The cube as an unfolded net: top in the middle, sides at the edges.
        let (x, y) = (s.pos.0 as f64, s.pos.1 as f64);
        let face = |b: bool| if b { Color::NAVY } else { Color::DARK_GRAY };
        list.rect(x + 0.1, y + 0.1, 0.8, 0.8, Color::WHITE);
        list.rect(x + 0.3, y + 0.3, 0.4, 0.4, face(s.faces[TOP]));
        list.rect(x + 0.3, y + 0.12, 0.4, 0.14, face(s.faces[NORTH]));
        list.rect(x + 0.3, y + 0.74, 0.4, 0.14, face(s.faces[SOUTH]));
        list.rect(x + 0.74, y + 0.3, 0.14, 0.4, face(s.faces[EAST]));
        list.rect(x + 0.12, y + 0.3, 0.14, 0.4, face(s.faces[WEST]));
        if s.faces[BOTTOM] {
            list.circle(x + 0.5, y + 0.5, 0.08, Color::YELLOW, true);
        }
        list
    }

    fn verify_solvable(&self, s: &CubeState) -> Result<bool, PuzzleError> {
        let mut seen = HashSet::new();
        let mut queue = VecDeque::from([s.clone()]);
        let strip = |s: &CubeState| (s.blue.clone(), s.pos, s.faces);
        seen.insert(strip(s));
        while let Some(cur) = queue.pop_front() {
            if self.status(&cur) == Status::Solved {
                return Ok(true);
            }
            for a in ARROWS {
                if let Some(n) = self.apply(&cur, a) {
                    if seen.insert(strip(&n)) {
                        if seen.len() > SEARCH_BUDGET {
                            return Err(PuzzleError::OracleBudgetExceeded { puzzle: PuzzleId::Cube });
                        }
                        queue.push_back(n);
                    }
                }
            }
        }
        Ok(false)
    }

    fn ascii(&self, s: &CubeState) -> String {
        let mut out = String::new();
        for y in 0..s.height {
            for x in 0..s.width {
                let c = if (x, y) == s.pos {
                    '@'
                } else if s.blue[y * s.width + x] {
                    '#'
                } else {
                    '.'
                };
                out.push(c);
            }
            out.push('\n');
        }
        let faces: String = s.faces.iter().map(|&f| if f { '#' } else { '.' }).collect();
        out.push_str(&format!("faces TBNSEW {faces}\n"));
        out
    }
}
