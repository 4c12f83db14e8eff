//! Pipe networks shared by Net and Netslide.
//!
//! Each tile is a bit set of the borders it connects to.

use crate::draw::{Color, DrawList};
use crate::rng::Rng;

pub const R: u8 = 1;
pub const U: u8 = 2;
pub const L: u8 = 4;
pub const D: u8 = 8;

const DIRS: [(u8, i32, i32, u8); 4] = [(R, 1, 0, L), (U, 0, -1, D), (L, -1, 0, R), (D, 0, 1, U)];

/// Quarter turn clockwise: R -> D -> L -> U -> R.
pub fn rotate_cw(t: u8) -> u8 {
    let mut out = 0;
    if t & R != 0 {
        out |= D;
    }
    if t & D != 0 {
        out |= L;
    }
    if t & L != 0 {
        out |= U;
    }
    if t & U != 0 {
        out |= R;
    }
    out
}

fn neighbour(i: usize, w: usize, h: usize, dx: i32, dy: i32) -> Option<usize> {
    let x = (i % w) as i32 + dx;
    let y = (i / w) as i32 + dy;
    (x >= 0 && y >= 0 && (x as usize) < w && (y as usize) < h).then(|| y as usize * w + x as usize)
}

fn neighbour_on(wrap: bool, i: usize, w: usize, h: usize, dx: i32, dy: i32) -> Option<usize> {
    if !wrap {
        return neighbour(i, w, h, dx, dy);
    }
    let x = ((i % w) as i32 + dx).rem_euclid(w as i32) as usize;
    let y = ((i / w) as i32 + dy).rem_euclid(h as i32) as usize;
    Some(y * w + x)
}

/// Uniform spanning tree of the `w` x `h` grid graph (Wilson's algorithm).
pub fn spanning_tree(w: usize, h: usize, rng: &mut Rng) -> Vec<u8> {
    let n = w * h;
    let mut tiles = vec![0u8; n];
    let mut in_tree = vec![false; n];
    in_tree[rng.index(n)] = true;
    let mut next = vec![usize::MAX; n];
    for start in 0..n {
        let mut i = start;
        while !in_tree[i] {
            let options: Vec<usize> = DIRS
                .iter()
                .filter_map(|&(_, dx, dy, _)| neighbour(i, w, h, dx, dy))
                .collect();
            next[i] = *rng.choose(&options).expect("grid has neighbours");
            i = next[i];
        }
        let mut i = start;
        while !in_tree[i] {
            in_tree[i] = true;
            let j = next[i];
            let (bit, _, _, back) = DIRS
                .iter()
                .copied()
                .find(|&(_, dx, dy, _)| neighbour(i, w, h, dx, dy) == Some(j))
                .expect("walk steps to a neighbour");
            tiles[i] |= bit;
            tiles[j] |= back;
            i = j;
        }
    }
    tiles
}

/// Tiles reachable from `start` through matched connections.
pub fn connected_from(tiles: &[u8], w: usize, h: usize, start: usize) -> Vec<bool> {
    connected_on(false, tiles, w, h, start)
}

fn connected_on(wrap: bool, tiles: &[u8], w: usize, h: usize, start: usize) -> Vec<bool> {
    let mut seen = vec![false; tiles.len()];
    let mut stack = vec![start];
    seen[start] = true;
    while let Some(i) = stack.pop() {
        for &(bit, dx, dy, back) in &DIRS {
            if tiles[i] & bit == 0 {
                continue;
            }
            if let Some(j) = neighbour_on(wrap, i, w, h, dx, dy) {
                if tiles[j] & back != 0 && !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
    }
    seen
}

/// Every connection is matched by its neighbour, none leaves the grid, and
/// all tiles form one component.
pub fn is_solved(tiles: &[u8], w: usize, h: usize) -> bool {
    is_solved_on(false, tiles, w, h)
}

/// [`is_solved`] where `wrap` joins opposite borders, as on a torus.
pub fn is_solved_on(wrap: bool, tiles: &[u8], w: usize, h: usize) -> bool {
    for (i, &t) in tiles.iter().enumerate() {
        for &(bit, dx, dy, back) in &DIRS {
            let mine = t & bit != 0;
            let theirs = neighbour_on(wrap, i, w, h, dx, dy).is_some_and(|j| tiles[j] & back != 0);
            if mine != theirs {
                return false;
            }
        }
    }
    connected_on(wrap, tiles, w, h, 0).iter().all(|&c| c)
}

/// Pipes on a square grid, lit from the middle tile.
pub fn draw(list: &mut DrawList, tiles: &[u8], w: usize, ox: f64, oy: f64) {
    let h = tiles.len() / w;
    let lit = connected_from(tiles, w, h, (h / 2) * w + w / 2);
    for (i, &t) in tiles.iter().enumerate() {
        let x = ox + (i % w) as f64;
        let y = oy + (i / w) as f64;
        list.rect(x, y, 1.0, 1.0, Color::DARK_GRAY);
        list.rect(x + 0.03, y + 0.03, 0.94, 0.94, Color::BLACK);
        let color = if lit[i] { Color::CYAN } else { Color::LIGHT_GRAY };
        let k = 0.09;
        if t & R != 0 {
            list.rect(x + 0.5 - k, y + 0.5 - k, 0.5 + k, 2.0 * k, color);
        }
        if t & L != 0 {
            list.rect(x, y + 0.5 - k, 0.5 + k, 2.0 * k, color);
        }
        if t & U != 0 {
            list.rect(x + 0.5 - k, y, 2.0 * k, 0.5 + k, color);
        }
        if t & D != 0 {
            list.rect(x + 0.5 - k, y + 0.5 - k, 2.0 * k, 0.5 + k, color);
        }
        if t.count_ones() == 1 {
            list.rect(x + 0.3, y + 0.3, 0.4, 0.4, color);
        }
    }
}

/// Box-drawing rendering of a tile.
pub fn glyph(t: u8) -> char {
    const GLYPHS: [char; 16] = [
        ' ', '╶', '╵', '└', '╴', '─', '┘', '┴', '╷', '┌', '│', '├', '┐', '┬', '┤', '┼',
    ];
    GLYPHS[t as usize & 15]
}
