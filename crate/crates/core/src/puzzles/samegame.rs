//! Same Game: remove groups of same-coloured squares until the grid is empty.
//!
//! SELECT removes the group under the cursor when it is large enough. Tiles
//! then fall down and empty columns close up to the left; UNDO puts the last
//! removal back.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::grid::{component, step_cursor};
use super::{Action, Game, KeyWriter, PuzzleError, PuzzleId, Status};
use crate::draw::{Color, DrawList, CELL_COLORS};
use crate::observation::StateObservation;
use crate::params::ParamMap;
use crate::rng::Rng;

/// Boards the clearing search may expand per query.
const SEARCH_BUDGET: usize = 400_000;

#[derive(Debug, Clone)]
pub struct SameGame {
    width: usize,
    height: usize,
    colors: u8,
    group_min: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SameGameState {
    pub width: usize,
    pub height: usize,
    /// Row-major colours `1..=c`, `0` for empty.
    pub cells: Vec<u8>,
    pub cursor: (usize, usize),
    pub score: u32,
    pub move_count: u32,
    /// Boards and scores before each removal.
    pub undo: Vec<(Vec<u8>, u32)>,
}

/// Lets tiles fall and closes empty columns leftwards.
pub fn settle(cells: &mut [u8], w: usize, h: usize) {
    let mut columns: Vec<Vec<u8>> = Vec::with_capacity(w);
    for x in 0..w {
        let stack: Vec<u8> = (0..h).rev().map(|y| cells[y * w + x]).filter(|&c| c != 0).collect();
        if !stack.is_empty() {
            columns.push(stack);
        }
    }
    cells.fill(0);
    for (x, stack) in columns.iter().enumerate() {
        for (k, &c) in stack.iter().enumerate() {
            cells[(h - 1 - k) * w + x] = c;
        }
    }
}

/// Removable groups, each as sorted cell indices.
pub fn groups(cells: &[u8], w: usize, h: usize, min: usize) -> Vec<Vec<usize>> {
    let mut seen = vec![false; cells.len()];
    let mut out = Vec::new();
    for i in 0..cells.len() {
        if cells[i] == 0 || seen[i] {
            continue;
        }
        let mut g = component(cells, w, h, i);
        for &j in &g {
            seen[j] = true;
        }
        if g.len() >= min.max(1) {
            g.sort_unstable();
            out.push(g);
        }
    }
    out
}

/// Whether some removal order empties the board. `None` past the budget.
pub fn clearable(cells: &[u8], w: usize, h: usize, min: usize, budget: usize) -> Option<bool> {
    fn go(cells: &[u8], w: usize, h: usize, min: usize, memo: &mut HashMap<Vec<u8>, bool>, budget: usize) -> Option<bool> {
        if cells.iter().all(|&c| c == 0) {
            return Some(true);
        }
        if let Some(&known) = memo.get(cells) {
            return Some(known);
        }
        if memo.len() >= budget {
            return None;
        }
        let mut counts = [0usize; 256];
        for &c in cells {
            counts[c as usize] += 1;
        }
        // A colour with too few tiles left can never be removed.
        let stranded = counts[1..].iter().any(|&n| n > 0 && n < min);
        let mut found = false;
        if !stranded {
            for g in groups(cells, w, h, min) {
                let mut next = cells.to_vec();
                for i in g {
                    next[i] = 0;
                }
                settle(&mut next, w, h);
                if go(&next, w, h, min, memo, budget)? {
                    found = true;
                    break;
                }
            }
        }
        memo.insert(cells.to_vec(), found);
        Some(found)
    }
    go(cells, w, h, min, &mut HashMap::new(), budget)
}

impl SameGame {
    pub fn new(p: &ParamMap) -> Self {
        let (width, height) = p.dims().expect("validated");
        SameGame {
            width,
            height,
            colors: p.colors.expect("validated") as u8,
            group_min: p.group_min.expect("validated") as usize,
        }
    }

    fn group_at(&self, s: &SameGameState) -> Option<Vec<usize>> {
        let i = s.cursor.1 * s.width + s.cursor.0;
        if s.cells[i] == 0 {
            return None;
        }
        let mut g = component(&s.cells, s.width, s.height, i);
        g.sort_unstable();
        (g.len() >= self.group_min).then_some(g)
    }
}

impl Game for SameGame {
    type State = SameGameState;

    fn id(&self) -> PuzzleId {
        PuzzleId::SameGame
    }

    fn candidate(&self, rng: &mut Rng) -> Option<SameGameState> {
        let (w, h) = (self.width, self.height);
        let cells: Vec<u8> = (0..w * h).map(|_| 1 + rng.below(self.colors as u64) as u8).collect();
        if !clearable(&cells, w, h, self.group_min, SEARCH_BUDGET)? {
            return None;
        }
        Some(SameGameState {
            width: w,
            height: h,
            cells,
            cursor: (0, 0),
            score: 0,
            move_count: 0,
            undo: Vec::new(),
        })
    }

    fn apply(&self, s: &SameGameState, action: Action) -> Option<SameGameState> {
        match action {
            Action::Select => {
                let group = self.group_at(s)?;
                let mut next = s.clone();
                next.undo.push((s.cells.clone(), s.score));
                for &i in &group {
                    next.cells[i] = 0;
                }
                settle(&mut next.cells, s.width, s.height);
                let k = group.len().saturating_sub(2) as u32;
                next.score += k * k;
                next.move_count += 1;
                Some(next)
            }
            Action::Undo => {
                let mut next = s.clone();
                let (cells, score) = next.undo.pop()?;
                next.cells = cells;
                next.score = score;
                next.move_count += 1;
                Some(next)
            }
            _ => {
                let cursor = step_cursor(s.cursor, action, s.width, s.height)?;
                Some(SameGameState { cursor, ..s.clone() })
            }
        }
    }

    fn status(&self, s: &SameGameState) -> Status {
        if s.cells.iter().all(|&c| c == 0) {
            Status::Solved
        } else if s.undo.is_empty() && groups(&s.cells, s.width, s.height, self.group_min).is_empty() {
            Status::Failed
        } else {
            Status::InProgress
        }
    }

    fn encode(&self, s: &SameGameState) -> StateObservation {
        let n = s.cells.len();
        StateObservation::new()
            .array("cells", &[n], &s.cells)
            .array("cursor_pos", &[2], &[s.cursor.0 as i64, s.cursor.1 as i64])
            .scalar("height", s.height as i64)
            .scalar("move_count", s.move_count)
            .scalar("score", s.score)
            .scalar("undo_depth", s.undo.len() as i64)
            .scalar("width", s.width as i64)
    }

    fn write_key(&self, s: &SameGameState, out: &mut KeyWriter) {
        out.bytes(&s.cells).i32(s.cursor.0 as i32).i32(s.cursor.1 as i32);
    }

    fn render(&self, s: &SameGameState) -> DrawList {
        let mut list = DrawList::new(s.width as f64, s.height as f64);
        list.rect(0.0, 0.0, s.width as f64, s.height as f64, Color::BLACK);
        for (i, &c) in s.cells.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let (x, y) = ((i % s.width) as f64, (i / s.width) as f64);
            list.rect(x + 0.05, y + 0.05, 0.9, 0.9, CELL_COLORS[(c as usize - 1) % CELL_COLORS.len()]);
        }
        let (x, y) = (s.cursor.0 as f64, s.cursor.1 as f64);
        list.outline(x, y, 1.0, 1.0, 0.06, Color::WHITE);
        list
    }

    fn verify_solvable(&self, s: &SameGameState) -> Result<bool, PuzzleError> {
        let boards = std::iter::once(&s.cells).chain(s.undo.iter().map(|(c, _)| c));
        for cells in boards {
            let ok = clearable(cells, s.width, s.height, self.group_min, SEARCH_BUDGET * 10)
                .ok_or(PuzzleError::OracleBudgetExceeded { puzzle: PuzzleId::SameGame })?;
            if ok {
                return Ok(true);
            }
        }
        Ok(false)
    }

    fn ascii(&self, s: &SameGameState) -> String {
        let mut out = String::new();
        for y in 0..s.height {
            for x in 0..s.width {
                let i = y * s.width + x;
                let c = match s.cells[i] {
                    0 => '.',
                    v => (b'A' + v - 1) as char,
                };
                out.push(c);
                out.push(if (x, y) == s.cursor { '<' } else { ' ' });
            }
            out.push('\n');
        }
        out.push_str(&format!("score {}\n", s.score));
        out
    }
}
