//! Small grid helpers shared by the puzzles.

use super::{Action, PuzzleId};

/// Builder for repetition keys.
pub struct KeyWriter {
    bytes: Vec<u8>,
}

impl KeyWriter {
    pub fn new(puzzle: PuzzleId) -> Self {
        KeyWriter { bytes: vec![puzzle as u8] }
    }

    pub fn u8(&mut self, v: u8) -> &mut Self {
        self.bytes.push(v);
        self
    }

    pub fn i32(&mut self, v: i32) -> &mut Self {
        self.bytes.extend_from_slice(&v.to_le_bytes());
        self
    }

    pub fn bytes(&mut self, v: &[u8]) -> &mut Self {
        self.i32(v.len() as i32);
        self.bytes.extend_from_slice(v);
        self
    }

    pub fn u16s(&mut self, v: &[u16]) -> &mut Self {
        self.i32(v.len() as i32);
        for x in v {
            self.bytes.extend_from_slice(&x.to_le_bytes());
        }
        self
    }

    pub fn bools(&mut self, v: &[bool]) -> &mut Self {
        self.i32(v.len() as i32);
        self.bytes.extend(v.iter().map(|&b| b as u8));
        self
    }

    pub fn finish(self) -> Vec<u8> {
        self.bytes
    }
}

/// Moves an in-grid cursor one cell; `None` at the border.
pub fn step_cursor(pos: (usize, usize), action: Action, w: usize, h: usize) -> Option<(usize, usize)> {
    let (dx, dy) = action.delta()?;
    let x = pos.0 as i64 + dx as i64;
    let y = pos.1 as i64 + dy as i64;
    (x >= 0 && y >= 0 && (x as usize) < w && (y as usize) < h).then_some((x as usize, y as usize))
}

/// 4-neighbours of cell `i` in a `w` x `h` grid.
pub fn neighbours(i: usize, w: usize, h: usize) -> impl Iterator<Item = usize> {
    let (x, y) = (i % w, i / w);
    let left = (x > 0).then(|| i - 1);
    let right = (x + 1 < w).then(|| i + 1);
    let up = (y > 0).then(|| i - w);
    let down = (y + 1 < h).then(|| i + w);
    [left, right, up, down].into_iter().flatten()
}

/// Cells 4-connected to `start` whose value equals `cells[start]`, in visit order.
pub fn component<T: PartialEq>(cells: &[T], w: usize, h: usize, start: usize) -> Vec<usize> {
    let mut seen = vec![false; cells.len()];
    let mut out = vec![start];
    seen[start] = true;
    let mut head = 0;
    while head < out.len() {
        let i = out[head];
        head += 1;
        for j in neighbours(i, w, h) {
            if !seen[j] && cells[j] == cells[start] {
                seen[j] = true;
                out.push(j);
            }
        }
    }
    out
}

/// Parity of a permutation given as a slice of distinct values `0..n` (true = odd).
pub fn permutation_is_odd(perm: &[usize]) -> bool {
    let mut seen = vec![false; perm.len()];
    let mut odd = false;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = perm[i];
            len += 1;
        }
        if len % 2 == 0 {
            odd = !odd;
        }
    }
    odd
}

/// Numbered square tiles; `0` is drawn as an empty slot.
pub fn draw_number_tiles(list: &mut crate::draw::DrawList, tiles: &[u16], w: usize, ox: f64, oy: f64) {
    use crate::draw::Color;
    for (i, &t) in tiles.iter().enumerate() {
        let x = ox + (i % w) as f64;
        let y = oy + (i / w) as f64;
        if t == 0 {
            list.rect(x + 0.04, y + 0.04, 0.92, 0.92, Color::DARK_GRAY);
        } else {
            list.rect(x + 0.04, y + 0.04, 0.92, 0.92, Color::LIGHT_GRAY);
            list.number(t as u32, x + 0.04, y + 0.04, 0.92, 0.92, Color::BLACK);
        }
    }
}

/// Space-separated rows of numbers, `.` for zero.
pub fn ascii_numbers(tiles: &[u16], w: usize) -> String {
    let width = tiles.iter().max().map_or(1, |m| m.to_string().len());
    let mut out = String::new();
    for row in tiles.chunks(w) {
        let cells: Vec<String> = row
            .iter()
            .map(|&t| {
                let s = if t == 0 { ".".to_string() } else { t.to_string() };
                format!("{s:>width$}")
            })
            .collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
    out
}
