//! Net: rotate tiles until the pipes form one connected network.

use serde::{Deserialize, Serialize};

use super::grid::step_cursor;
use super::network::{self, rotate_cw, D, L, R, U};
use super::{Action, Game, KeyWriter, PuzzleError, PuzzleId, Status};
use crate::draw::{Color, DrawList};
use crate::observation::StateObservation;
use crate::params::ParamMap;
use crate::rng::Rng;

const SEARCH_BUDGET: u64 = 5_000_000;

#[derive(Debug, Clone)]
pub struct Net {
    width: usize,
    height: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetState {
    pub width: usize,
    pub height: usize,
    pub tiles: Vec<u8>,
    pub cursor: (usize, usize),
    pub move_count: u32,
}

impl Net {
    pub fn new(p: &ParamMap) -> Self {
        let (width, height) = p.dims().expect("validated");
        Net { width, height }
    }
}

/// Distinct orientations of a tile.
fn orientations(t: u8) -> Vec<u8> {
    let mut out = vec![t];
    let mut r = rotate_cw(t);
    while r != t {
        out.push(r);
        r = rotate_cw(r);
    }
    out
}

/// Whether some choice of rotations solves the board.
pub fn rotations_solve(tiles: &[u8], w: usize, h: usize, budget: u64) -> Option<bool> {
    fn place(i: usize, cur: &mut Vec<u8>, tiles: &[u8], w: usize, h: usize, nodes: &mut u64, budget: u64) -> Option<bool> {
        *nodes += 1;
        if *nodes > budget {
            return None;
        }
        if i == tiles.len() {
            return Some(network::is_solved(cur, w, h));
        }
        let (x, y) = (i % w, i / w);
        for t in orientations(tiles[i]) {
            let left_ok = if x == 0 { t & L == 0 } else { (t & L != 0) == (cur[i - 1] & R != 0) };
            let up_ok = if y == 0 { t & U == 0 } else { (t & U != 0) == (cur[i - w] & D != 0) };
            let right_ok = x + 1 < w || t & R == 0;
            let down_ok = y + 1 < h || t & D == 0;
            if left_ok && up_ok && right_ok && down_ok {
                cur[i] = t;
                if place(i + 1, cur, tiles, w, h, nodes, budget)? {
                    return Some(true);
                }
            }
        }
        Some(false)
    }
    let mut nodes = 0;
    place(0, &mut tiles.to_vec(), tiles, w, h, &mut nodes, budget)
}

impl Game for Net {
    type State = NetState;

    fn id(&self) -> PuzzleId {
        PuzzleId::Net
    }

    fn candidate(&self, rng: &mut Rng) -> Option<NetState> {
        let mut tiles = network::spanning_tree(self.width, self.height, rng);
        for t in tiles.iter_mut() {
            for _ in 0..rng.below(4) {
                *t = rotate_cw(*t);
            }
        }
        Some(NetState { width: self.width, height: self.height, tiles, cursor: (0, 0), move_count: 0 })
    }

    fn apply(&self, s: &NetState, action: Action) -> Option<NetState> {
        match action {
            Action::Select => {
                let i = s.cursor.1 * s.width + s.cursor.0;
                let r = rotate_cw(s.tiles[i]);
                if r == s.tiles[i] {
                    return None;
                }
                let mut next = s.clone();
                next.tiles[i] = r;
                next.move_count += 1;
                Some(next)
            }
            _ => {
                let cursor = step_cursor(s.cursor, action, s.width, s.height)?;
                Some(NetState { cursor, ..s.clone() })
            }
        }
    }

    fn status(&self, s: &NetState) -> Status {
        if network::is_solved(&s.tiles, s.width, s.height) {
            Status::Solved
        } else {
            Status::InProgress
        }
    }

    fn encode(&self, s: &NetState) -> StateObservation {
        StateObservation::new()
            .array("cursor_pos", &[2], &[s.cursor.0 as i64, s.cursor.1 as i64])
            .scalar("height", s.height as i64)
            .scalar("move_count", s.move_count)
            .array("tiles", &[s.tiles.len()], &s.tiles)
            .scalar("width", s.width as i64)
    }

    fn write_key(&self, s: &NetState, out: &mut KeyWriter) {
        out.bytes(&s.tiles).i32(s.cursor.0 as i32).i32(s.cursor.1 as i32);
    }

    fn render(&self, s: &NetState) -> DrawList {
        let mut list = DrawList::new(s.width as f64, s.height as f64);
        network::draw(&mut list, &s.tiles, s.width, 0.0, 0.0);
        let (x, y) = (s.cursor.0 as f64, s.cursor.1 as f64);
        list.outline(x + 0.03, y + 0.03, 0.94, 0.94, 0.07, Color::RED);
        list
    }

    fn verify_solvable(&self, s: &NetState) -> Result<bool, PuzzleError> {
        rotations_solve(&s.tiles, s.width, s.height, SEARCH_BUDGET)
            .ok_or(PuzzleError::OracleBudgetExceeded { puzzle: PuzzleId::Net })
    }

    fn ascii(&self, s: &NetState) -> String {
        let mut out = String::new();
        for y in 0..s.height {
            for x in 0..s.width {
                let here = (x, y) == s.cursor;
                out.push(if here { '[' } else { ' ' });
                out.push(network::glyph(s.tiles[y * s.width + x]));
                out.push(if here { ']' } else { ' ' });
            }
            out.push('\n');
        }
        out
    }
}
