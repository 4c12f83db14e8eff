//! Cursor on the one-cell frame around a grid (Netslide, Sixteen).
//!
//! Frame cells are `(x, -1)` and `(x, h)` for `x` in `0..w`, and `(-1, y)` and
//! `(w, y)` for `y` in `0..h`; corners are not part of the frame. The cells
//! form a clockwise loop starting at `(0, -1)`. RIGHT and DOWN step the
//! cursor clockwise along the loop, LEFT and UP anticlockwise.

use serde::{Deserialize, Serialize};

use super::Action;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FrameCursor {
    pub x: i32,
    pub y: i32,
}

/// Row or column push selected by a frame cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Line {
    /// Row `y`; `+1` pushes rightwards.
    Row(usize, i32),
    /// Column `x`; `+1` pushes downwards.
    Col(usize, i32),
}

impl FrameCursor {
    pub fn start() -> Self {
        FrameCursor { x: 0, y: -1 }
    }

    fn index(self, w: i32, h: i32) -> i32 {
        if self.y == -1 {
            self.x
        } else if self.x == w {
            w + self.y
        } else if self.y == h {
            w + h + (w - 1 - self.x)
        } else {
            2 * w + h + (h - 1 - self.y)
        }
    }

    fn at(i: i32, w: i32, h: i32) -> Self {
        let n = 2 * (w + h);
        let i = i.rem_euclid(n);
        if i < w {
            FrameCursor { x: i, y: -1 }
        } else if i < w + h {
            FrameCursor { x: w, y: i - w }
        } else if i < 2 * w + h {
            FrameCursor { x: w - 1 - (i - w - h), y: h }
        } else {
            FrameCursor { x: -1, y: h - 1 - (i - 2 * w - h) }
        }
    }

    pub fn is_valid(self, w: usize, h: usize) -> bool {
        let (w, h) = (w as i32, h as i32);
        let on_x = (0..w).contains(&self.x) && (self.y == -1 || self.y == h);
        let on_y = (0..h).contains(&self.y) && (self.x == -1 || self.x == w);
        on_x || on_y
    }

    /// Cursor after an arrow key, or `None` if it does not move.
    pub fn step(self, action: Action, w: usize, h: usize) -> Option<FrameCursor> {
        let (wi, hi) = (w as i32, h as i32);
        let diff = match action {
            Action::Right | Action::Down => 1,
            Action::Left | Action::Up => -1,
            _ => return None,
        };
        let next = FrameCursor::at(self.index(wi, hi) + diff, wi, hi);
        (next != self).then_some(next)
    }

    /// The row or column this cell faces, with the inward push direction.
    pub fn line(self, w: usize, h: usize) -> Line {
        let (wi, hi) = (w as i32, h as i32);
        if self.y == -1 {
            Line::Col(self.x as usize, 1)
        } else if self.y == hi {
            Line::Col(self.x as usize, -1)
        } else if self.x == -1 {
            Line::Row(self.y as usize, 1)
        } else {
            debug_assert_eq!(self.x, wi);
            Line::Row(self.y as usize, -1)
        }
    }
}

/// Cyclically shifts `line` one cell in `cells` (row-major `w` x `h`).
pub fn shift<T: Copy>(cells: &mut [T], w: usize, h: usize, line: Line) {
    match line {
        Line::Row(y, dir) => {
            let row = &mut cells[y * w..(y + 1) * w];
            if dir > 0 {
                row.rotate_right(1);
            } else {
                row.rotate_left(1);
            }
        }
        Line::Col(x, dir) => {
            let mut col: Vec<T> = (0..h).map(|y| cells[y * w + x]).collect();
            if dir > 0 {
                col.rotate_right(1);
            } else {
                col.rotate_left(1);
            }
            for (y, v) in col.into_iter().enumerate() {
                cells[y * w + x] = v;
            }
        }
    }
}

/// Every distinct push: each row and column in both directions.
pub fn all_lines(w: usize, h: usize) -> Vec<Line> {
    let mut out = Vec::with_capacity(2 * (w + h));
    for y in 0..h {
        out.push(Line::Row(y, 1));
        out.push(Line::Row(y, -1));
    }
    for x in 0..w {
        out.push(Line::Col(x, 1));
        out.push(Line::Col(x, -1));
    }
    out
}

/// Breadth-first search over slide-reachable arrangements for a state where
/// `goal` holds. Cells are packed four bits each, so at most 16 cells with
/// values below 16; `None` when that does not fit or the budget runs out.
pub fn slide_search(cells: &[u8], w: usize, h: usize, goal: impl Fn(&[u8]) -> bool, budget: usize) -> Option<bool> {
    use std::collections::{HashSet, VecDeque};
    if cells.len() > 16 || cells.iter().any(|&c| c >= 16) {
        return None;
    }
    let pack = |c: &[u8]| c.iter().fold(0u64, |acc, &v| acc << 4 | v as u64);
    let lines = all_lines(w, h);
    let mut seen = HashSet::from([pack(cells)]);
    let mut queue = VecDeque::from([cells.to_vec()]);
    while let Some(cur) = queue.pop_front() {
        if goal(&cur) {
            return Some(true);
        }
        for &line in &lines {
            let mut next = cur.clone();
            shift(&mut next, w, h, line);
            if seen.insert(pack(&next)) {
                if seen.len() > budget {
                    return None;
                }
                queue.push_back(next);
            }
        }
    }
    Some(false)
}

impl Line {
    pub fn reversed(self) -> Line {
        match self {
            Line::Row(y, d) => Line::Row(y, -d),
            Line::Col(x, d) => Line::Col(x, -d),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loop_indexing_round_trips() {
        let (w, h) = (2, 3);
        for i in 0..2 * (w + h) {
            let c = FrameCursor::at(i, w, h);
            assert!(c.is_valid(w as usize, h as usize), "{c:?}");
            assert_eq!(c.index(w, h), i);
        }
    }

    #[test]
    fn frame_is_connected() {
        let (w, h) = (3, 2);
        let mut seen = vec![FrameCursor::start()];
        let mut head = 0;
        while head < seen.len() {
            let c = seen[head];
            head += 1;
            for a in [Action::Up, Action::Down, Action::Left, Action::Right] {
                if let Some(n) = c.step(a, w, h) {
                    assert!(n.is_valid(w, h));
                    if !seen.contains(&n) {
                        seen.push(n);
                    }
                }
            }
        }
        assert_eq!(seen.len(), 2 * (w + h));
    }

    #[test]
    fn row_push_from_left() {
        let mut cells = ['a', 'b', 'c'];
        shift(&mut cells, 3, 1, FrameCursor { x: -1, y: 0 }.line(3, 1));
        assert_eq!(cells, ['c', 'a', 'b']);
    }

    #[test]
    fn column_push_from_top() {
        let mut cells = [1, 2, 3, 4, 5, 6];
        shift(&mut cells, 2, 3, Line::Col(0, 1));
        assert_eq!(cells, [5, 2, 1, 4, 3, 6]);
    }
}
