//! Flood: recolour the top-left region until the whole grid is one colour,
//! within a move budget.

use serde::{Deserialize, Serialize};

use super::grid::{component, neighbours, step_cursor};
use super::{Action, Game, KeyWriter, PuzzleError, PuzzleId, Status};
use crate::draw::{Color, DrawList, CELL_COLORS};
use crate::observation::StateObservation;
use crate::params::ParamMap;
use crate::rng::Rng;

/// Node budget of the optimal-move search before falling back to greedy.
const SEARCH_BUDGET: u64 = 2_000_000;

#[derive(Debug, Clone)]
pub struct Flood {
    width: usize,
    height: usize,
    colors: u8,
    extra_moves: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FloodState {
    pub width: usize,
    pub height: usize,
    pub cells: Vec<u8>,
    pub cursor: (usize, usize),
    pub moves_made: u32,
    pub move_limit: u32,
}

/// Recolours the region connected to cell 0.
pub fn fill(cells: &mut [u8], w: usize, h: usize, color: u8) {
    for i in component(cells, w, h, 0) {
        cells[i] = color;
    }
}

fn distinct(cells: &[u8]) -> u32 {
    let mut seen = 0u32;
    for &c in cells {
        seen |= 1 << c;
    }
    seen.count_ones()
}

/// Colours bordering the top-left region.
fn frontier_colors(cells: &[u8], w: usize, h: usize) -> Vec<u8> {
    let region = component(cells, w, h, 0);
    let mut inside = vec![false; cells.len()];
    for &i in &region {
        inside[i] = true;
    }
    let mut out: Vec<u8> = Vec::new();
    for &i in &region {
        for j in neighbours(i, w, h) {
            if !inside[j] && !out.contains(&cells[j]) {
                out.push(cells[j]);
            }
        }
    }
    out.sort_unstable();
    out
}

/// Fewest fills that make the grid monochrome, by iterative deepening with
/// the admissible bound "distinct colours left minus one". `None` when the
/// node budget runs out.
pub fn min_fill_moves(cells: &[u8], w: usize, h: usize, budget: u64) -> Option<u32> {
    fn search(cells: &[u8], w: usize, h: usize, depth: u32, bound: u32, nodes: &mut u64, budget: u64) -> Option<bool> {
        *nodes += 1;
        if *nodes > budget {
            return None;
        }
        let left = distinct(cells) - 1;
        if left == 0 {
            return Some(true);
        }
        if depth + left > bound {
            return Some(false);
        }
        for c in frontier_colors(cells, w, h) {
            let mut next = cells.to_vec();
            fill(&mut next, w, h, c);
            if search(&next, w, h, depth + 1, bound, nodes, budget)? {
                return Some(true);
            }
        }
        Some(false)
    }

    let mut nodes = 0;
    let mut bound = distinct(cells) - 1;
    loop {
        if search(cells, w, h, 0, bound, &mut nodes, budget)? {
            return Some(bound);
        }
        bound += 1;
    }
}

/// Moves used by always picking the fill that grows the region most.
pub fn greedy_fill_moves(cells: &[u8], w: usize, h: usize) -> u32 {
    let mut cells = cells.to_vec();
    let mut moves = 0;
    while distinct(&cells) > 1 {
        let best = frontier_colors(&cells, w, h)
            .into_iter()
            .max_by_key(|&c| {
                let mut next = cells.clone();
                fill(&mut next, w, h, c);
                (component(&next, w, h, 0).len(), std::cmp::Reverse(c))
            })
            .expect("non-monochrome grid has a frontier");
        fill(&mut cells, w, h, best);
        moves += 1;
    }
    moves
}

impl Flood {
    pub fn new(p: &ParamMap) -> Self {
        let (width, height) = p.dims().expect("validated");
        Flood {
            width,
            height,
            colors: p.colors.expect("validated") as u8,
            extra_moves: p.extra_moves.expect("validated"),
        }
    }

    /// Move budget for a fresh board: optimal fills plus the slack.
    pub fn budget_for(&self, cells: &[u8]) -> u32 {
        let base = min_fill_moves(cells, self.width, self.height, SEARCH_BUDGET)
            .unwrap_or_else(|| greedy_fill_moves(cells, self.width, self.height));
        base + self.extra_moves
    }
}

impl Game for Flood {
    type State = FloodState;

    fn id(&self) -> PuzzleId {
        PuzzleId::Flood
    }

    fn candidate(&self, rng: &mut Rng) -> Option<FloodState> {
        let n = self.width * self.height;
        let cells: Vec<u8> = (0..n).map(|_| rng.below(self.colors as u64) as u8).collect();
        if distinct(&cells) == 1 {
            return None;
        }
        let move_limit = self.budget_for(&cells);
        Some(FloodState {
            width: self.width,
            height: self.height,
            cells,
            cursor: (0, 0),
            moves_made: 0,
            move_limit,
        })
    }

    fn apply(&self, s: &FloodState, action: Action) -> Option<FloodState> {
        match action {
            Action::Select => {
                let target = s.cells[s.cursor.1 * s.width + s.cursor.0];
                if target == s.cells[0] {
                    return None;
                }
                let mut next = s.clone();
                fill(&mut next.cells, s.width, s.height, target);
                next.moves_made += 1;
                Some(next)
            }
            _ => {
                let cursor = step_cursor(s.cursor, action, s.width, s.height)?;
                Some(FloodState { cursor, ..s.clone() })
            }
        }
    }

    fn status(&self, s: &FloodState) -> Status {
        if s.cells.iter().all(|&c| c == s.cells[0]) {
            Status::Solved
        } else if s.moves_made >= s.move_limit {
            Status::Failed
        } else {
            Status::InProgress
        }
    }

    fn encode(&self, s: &FloodState) -> StateObservation {
        StateObservation::new()
            .array("cells", &[s.cells.len()], &s.cells)
            .array("cursor_pos", &[2], &[s.cursor.0 as i64, s.cursor.1 as i64])
            .scalar("height", s.height as i64)
            .scalar("move_limit", s.move_limit)
            .scalar("moves_made", s.moves_made)
            .scalar("width", s.width as i64)
    }

    fn write_key(&self, s: &FloodState, out: &mut KeyWriter) {
        out.bytes(&s.cells).i32(s.cursor.0 as i32).i32(s.cursor.1 as i32);
    }

    fn render(&self, s: &FloodState) -> DrawList {
        let (w, h) = (s.width as f64, s.height as f64);
        let mut list = DrawList::new(w, h);
        for (i, &c) in s.cells.iter().enumerate() {
            let (x, y) = ((i % s.width) as f64, (i / s.width) as f64);
            list.rect(x, y, 1.0, 1.0, CELL_COLORS[c as usize % CELL_COLORS.len()]);
        }
        let (cx, cy) = (s.cursor.0 as f64, s.cursor.1 as f64);
        list.outline(cx + 0.1, cy + 0.1, 0.8, 0.8, 0.08, Color::BLACK);
        list.outline(cx + 0.18, cy + 0.18, 0.64, 0.64, 0.06, Color::WHITE);
        list
    }

    fn verify_solvable(&self, s: &FloodState) -> Result<bool, PuzzleError> {
        let need = min_fill_moves(&s.cells, s.width, s.height, SEARCH_BUDGET)
            .ok_or(PuzzleError::OracleBudgetExceeded { puzzle: PuzzleId::Flood })?;
        Ok(s.moves_made + need <= s.move_limit)
    }

    fn ascii(&self, s: &FloodState) -> String {
        let mut out = String::new();
        for y in 0..s.height {
            for x in 0..s.width {
                let c = s.cells[y * s.width + x];
                let mark = if (x, y) == s.cursor { '*' } else { ' ' };
                out.push_str(&format!("{c}{mark}"));
            }
            out.push('\n');
        }
        out.push_str(&format!("moves {}/{}\n", s.moves_made, s.move_limit));
        out
    }
}
