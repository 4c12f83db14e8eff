//! Netslide: slide whole rows and columns until the network reconnects.
//!
//! The board wraps: pipes leaving one border continue from the opposite
//! one, so any translation of a connected network also counts as solved.

use serde::{Deserialize, Serialize};

use super::frame::{self, FrameCursor, Line};
use super::network;
use super::{Action, Game, KeyWriter, PuzzleError, PuzzleId, Status};
use crate::draw::{Color, DrawList};
use crate::observation::StateObservation;
use crate::params::ParamMap;
use crate::rng::Rng;

const SEARCH_BUDGET: usize = 2_000_000;

#[derive(Debug, Clone)]
pub struct Netslide {
    width: usize,
    height: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetslideState {
    pub width: usize,
    pub height: usize,
    pub tiles: Vec<u8>,
    pub cursor: FrameCursor,
    pub move_count: u32,
    pub movetarget: u32,
    /// Row, column (-1 when unused) and direction of the latest slide.
    pub last_move: Option<(i32, i32, i32)>,
}

impl Netslide {
    pub fn new(p: &ParamMap) -> Self {
        let (width, height) = p.dims().expect("validated");
        Netslide { width, height }
    }
}

fn last_move_of(line: Line) -> (i32, i32, i32) {
    match line {
        Line::Row(y, d) => (y as i32, -1, d),
        Line::Col(x, d) => (-1, x as i32, d),
    }
}

impl Game for Netslide {
    type State = NetslideState;

    fn id(&self) -> PuzzleId {
        PuzzleId::Netslide
    }

    fn candidate(&self, rng: &mut Rng) -> Option<NetslideState> {
        let (w, h) = (self.width, self.height);
        let mut tiles = network::spanning_tree(w, h, rng);
        let lines = frame::all_lines(w, h);
        let slides = 2 * (w + h);
        for _ in 0..slides {
            frame::shift(&mut tiles, w, h, *rng.choose(&lines)?);
        }
        Some(NetslideState {
            width: w,
            height: h,
            tiles,
            cursor: FrameCursor::start(),
            move_count: 0,
            movetarget: slides as u32,
            last_move: None,
        })
    }

    fn apply(&self, s: &NetslideState, action: Action) -> Option<NetslideState> {
        match action {
            Action::Select => {
                let line = s.cursor.line(s.width, s.height);
                let mut next = s.clone();
                frame::shift(&mut next.tiles, s.width, s.height, line);
                next.move_count += 1;
                next.last_move = Some(last_move_of(line));
                (next.tiles != s.tiles).then_some(next)
            }
            _ => {
                let cursor = s.cursor.step(action, s.width, s.height)?;
                Some(NetslideState { cursor, ..s.clone() })
            }
        }
    }

    fn status(&self, s: &NetslideState) -> Status {
        if network::is_solved_on(true, &s.tiles, s.width, s.height) {
            Status::Solved
        } else {
            Status::InProgress
        }
    }

    fn encode(&self, s: &NetslideState) -> StateObservation {
        let n = s.tiles.len();
        let (row, col, dir) = s.last_move.unwrap_or((-1, -1, 0));
        StateObservation::new()
            .array("barriers", &[n], &vec![0u8; n])
            .array("cursor_pos", &[2], &[s.cursor.x, s.cursor.y])
            .scalar("height", s.height as i64)
            .scalar("last_move_col", col)
            .scalar("last_move_dir", dir)
            .scalar("last_move_row", row)
            .scalar("move_count", s.move_count)
            .scalar("movetarget", s.movetarget)
            .array("tiles", &[n], &s.tiles)
            .scalar("width", s.width as i64)
            .scalar("wrapping", 1)
    }

    fn write_key(&self, s: &NetslideState, out: &mut KeyWriter) {
        out.bytes(&s.tiles).i32(s.cursor.x).i32(s.cursor.y);
    }

    fn render(&self, s: &NetslideState) -> DrawList {
        let (w, h) = (s.width as f64, s.height as f64);
        let mut list = DrawList::new(w + 2.0, h + 2.0);
        network::draw(&mut list, &s.tiles, s.width, 1.0, 1.0);
        let (cx, cy) = (s.cursor.x as f64 + 1.0, s.cursor.y as f64 + 1.0);
        let (dx, dy) = match s.cursor.line(s.width, s.height) {
            Line::Row(_, d) => (d, 0),
            Line::Col(_, d) => (0, d),
        };
        list.arrow(cx, cy, dx, dy, Color::RED);
        list
    }

    fn verify_solvable(&self, s: &NetslideState) -> Result<bool, PuzzleError> {
        let (w, h) = (s.width, s.height);
        frame::slide_search(&s.tiles, w, h, |t| network::is_solved_on(true, t, w, h), SEARCH_BUDGET)
            .ok_or(PuzzleError::OracleBudgetExceeded { puzzle: PuzzleId::Netslide })
    }

    fn ascii(&self, s: &NetslideState) -> String {
        let (w, h) = (s.width as i32, s.height as i32);
        let mut out = String::new();
        for y in -1..=h {
            for x in -1..=w {
                let c = if s.cursor.x == x && s.cursor.y == y {
                    '*'
                } else if (0..w).contains(&x) && (0..h).contains(&y) {
                    network::glyph(s.tiles[(y * w + x) as usize])
                } else {
                    '·'
                };
                out.push(c);
            }
            out.push('\n');
        }
        out
    }
}
