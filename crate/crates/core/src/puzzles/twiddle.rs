//! Twiddle: rotate square blocks of tiles to put the numbers in order.

use std::collections::{HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::grid::{ascii_numbers, draw_number_tiles, permutation_is_odd, step_cursor};
use super::{Action, Game, KeyWriter, PuzzleError, PuzzleId, Status};
use crate::draw::{Color, DrawList};
use crate::observation::StateObservation;
use crate::params::ParamMap;
use crate::rng::Rng;

/// Boards up to this many cells are checked by exhaustive search.
const EXACT_CELLS: usize = 9;

#[derive(Debug, Clone)]
pub struct Twiddle {
    width: usize,
    height: usize,
    block: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwiddleState {
    pub width: usize,
    pub height: usize,
    pub block: usize,
    pub tiles: Vec<u16>,
    /// Top-left corner of the block to rotate.
    pub cursor: (usize, usize),
    pub move_count: u32,
}

/// Rotates the `n` x `n` block at `(ax, ay)` a quarter turn.
pub fn rotate_block(tiles: &mut [u16], w: usize, n: usize, (ax, ay): (usize, usize), clockwise: bool) {
    let old = tiles.to_vec();
    for i in 0..n {
        for j in 0..n {
            // Local (column i, row j) moves to its rotated position.
            let (ti, tj) = if clockwise { (n - 1 - j, i) } else { (j, n - 1 - i) };
            tiles[(ay + tj) * w + ax + ti] = old[(ay + j) * w + ax + i];
        }
    }
}

impl Twiddle {
    pub fn new(p: &ParamMap) -> Self {
        let (width, height) = p.dims().expect("validated");
        Twiddle { width, height, block: p.block_size.expect("validated") as usize }
    }

    fn anchors(&self) -> (usize, usize) {
        (self.width - self.block + 1, self.height - self.block + 1)
    }

    fn solvable_by_search(&self, tiles: &[u16]) -> bool {
        let (aw, ah) = self.anchors();
        let mut seen = HashSet::from([tiles.to_vec()]);
        let mut queue = VecDeque::from([tiles.to_vec()]);
        while let Some(cur) = queue.pop_front() {
            if ordered(&cur) {
                return true;
            }
            for ay in 0..ah {
                for ax in 0..aw {
                    let mut next = cur.clone();
                    rotate_block(&mut next, self.width, self.block, (ax, ay), false);
                    if seen.insert(next.clone()) {
                        queue.push_back(next);
                    }
                }
            }
        }
        false
    }

    /// Parity argument for boards too large to search: a quarter turn of an
    /// n x n block is floor(n²/4) four-cycles, so when that count is even no
    /// odd permutation is reachable.
    fn solvable_by_rule(&self, tiles: &[u16]) -> bool {
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
        let odd_moves = (self.block * self.block / 4) % 2 == 1;
        odd_moves || !permutation_is_odd(&perm)
    }
}

fn ordered(tiles: &[u16]) -> bool {
    tiles.iter().enumerate().all(|(i, &t)| t as usize == i + 1)
}

impl Game for Twiddle {
    type State = TwiddleState;

    fn id(&self) -> PuzzleId {
        PuzzleId::Twiddle
    }

    fn candidate(&self, rng: &mut Rng) -> Option<TwiddleState> {
        let (w, h) = (self.width, self.height);
        let (aw, ah) = self.anchors();
        let mut tiles: Vec<u16> = (1..=(w * h) as u16).collect();
        for _ in 0..4 * w * h {
            let anchor = (rng.index(aw), rng.index(ah));
            rotate_block(&mut tiles, w, self.block, anchor, rng.coin());
        }
        Some(TwiddleState { width: w, height: h, block: self.block, tiles, cursor: (0, 0), move_count: 0 })
    }

    fn apply(&self, s: &TwiddleState, action: Action) -> Option<TwiddleState> {
        let clockwise = match action {
            Action::Select => false,
            Action::Select2 => true,
            _ => {
                let (aw, ah) = self.anchors();
                let cursor = step_cursor(s.cursor, action, aw, ah)?;
                return Some(TwiddleState { cursor, ..s.clone() });
            }
        };
        let mut next = s.clone();
        rotate_block(&mut next.tiles, s.width, s.block, s.cursor, clockwise);
        if next.tiles == s.tiles {
            return None;
        }
        next.move_count += 1;
        Some(next)
    }

    fn status(&self, s: &TwiddleState) -> Status {
        if ordered(&s.tiles) {
            Status::Solved
        } else {
            Status::InProgress
        }
    }

    fn encode(&self, s: &TwiddleState) -> StateObservation {
        StateObservation::new()
            .array("cursor_pos", &[2], &[s.cursor.0 as i64, s.cursor.1 as i64])
            .scalar("height", s.height as i64)
            .scalar("move_count", s.move_count)
            .scalar("n", s.block as i64)
            .array("tiles", &[s.tiles.len()], &s.tiles)
            .scalar("width", s.width as i64)
    }

    fn write_key(&self, s: &TwiddleState, out: &mut KeyWriter) {
        out.u16s(&s.tiles).i32(s.cursor.0 as i32).i32(s.cursor.1 as i32);
    }

    fn render(&self, s: &TwiddleState) -> DrawList {
        let mut list = DrawList::new(s.width as f64, s.height as f64);
        list.rect(0.0, 0.0, s.width as f64, s.height as f64, Color::WHITE);
        draw_number_tiles(&mut list, &s.tiles, s.width, 0.0, 0.0);
        let n = s.block as f64;
        list.outline(s.cursor.0 as f64, s.cursor.1 as f64, n, n, 0.06, Color::RED);
        list
    }

    fn verify_solvable(&self, s: &TwiddleState) -> Result<bool, PuzzleError> {
        if s.tiles.len() <= EXACT_CELLS {
            Ok(self.solvable_by_search(&s.tiles))
        } else {
            Ok(self.solvable_by_rule(&s.tiles))
        }
    }

    fn ascii(&self, s: &TwiddleState) -> String {
        format!("block at ({}, {})\n{}", s.cursor.0, s.cursor.1, ascii_numbers(&s.tiles, s.width))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rotation_directions() {
        let mut t = vec![1, 2, 3, 4];
        rotate_block(&mut t, 2, 2, (0, 0), false);
        assert_eq!(t, vec![2, 4, 1, 3]);
        let mut t = vec![1, 2, 3, 4];
        rotate_block(&mut t, 2, 2, (0, 0), true);
        assert_eq!(t, vec![3, 1, 4, 2]);
    }

    #[test]
    fn select_then_select2_restores() {
        let g = Twiddle { width: 2, height: 3, block: 2 };
        let s = TwiddleState { width: 2, height: 3, block: 2, tiles: (1..=6).collect(), cursor: (0, 1), move_count: 0 };
        let a = g.apply(&s, Action::Select).unwrap();
        assert_ne!(a.tiles, s.tiles);
        let b = g.apply(&a, Action::Select2).unwrap();
        assert_eq!(b.tiles, s.tiles);
        assert!(g.apply(&s, Action::Down).is_none());
        assert!(g.apply(&s, Action::Right).is_none());
    }

    #[test]
    fn parity_rule_matches_search_on_3x3() {
        let g = Twiddle { width: 3, height: 3, block: 2 };
        let h = Twiddle { width: 3, height: 3, block: 3 };
        let mut rng = Rng::seed_from_u64(4);
        for _ in 0..4 {
            let mut tiles: Vec<u16> = (1..=9).collect();
            rng.shuffle(&mut tiles);
            assert_eq!(g.solvable_by_rule(&tiles), g.solvable_by_search(&tiles));
        }
        // A single full-board block only reaches its four rotations.
        let mut tiles: Vec<u16> = (1..=9).collect();
        tiles.swap(0, 2);
        tiles.swap(1, 3);
        assert!(!h.solvable_by_search(&tiles));
    }
}
