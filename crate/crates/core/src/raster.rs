//! Software rasterizer from draw lists to square RGB tensors.
//!
//! The board is scaled uniformly to fit the canvas and centred; the bands
//! left over are filled with the padding colour. Shapes cover a pixel when
//! the pixel's centre is inside them. There is no anti-aliasing, so output is
//! a pure function of the draw list and the canvas size.

use thiserror::Error;

use crate::draw::{Color, DrawCommand, DrawList};
use crate::observation::PixelObservation;

pub const MIN_PIXEL_SIZE: usize = 16;
pub const DEFAULT_PIXEL_SIZE: usize = 128;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RasterError {
    #[error("canvas of {0} pixels is below the minimum of {MIN_PIXEL_SIZE}")]
    CanvasTooSmall(usize),
}

struct Canvas {
    size: usize,
    data: Vec<u8>,
}

impl Canvas {
    fn put(&mut self, x: i64, y: i64, color: Color) {
        let s = self.size as i64;
        if x < 0 || y < 0 || x >= s || y >= s {
            return;
        }
        let plane = self.size * self.size;
        let i = y as usize * self.size + x as usize;
        let [r, g, b] = color.rgb();
        self.data[i] = r;
        self.data[plane + i] = g;
        self.data[2 * plane + i] = b;
    }

    fn span(&mut self, y: i64, x0: i64, x1: i64, color: Color) {
        for x in x0.max(0)..x1.min(self.size as i64) {
            self.put(x, y, color);
        }
    }
}

/// Pixels whose centres fall in `[a, b)`.
fn covered(a: f64, b: f64) -> (i64, i64) {
    ((a - 0.5).ceil() as i64, (b - 0.5).ceil() as i64)
}

pub fn rasterize(list: &DrawList, size: usize) -> Result<PixelObservation, RasterError> {
    if size < MIN_PIXEL_SIZE {
        return Err(RasterError::CanvasTooSmall(size));
    }
    let mut canvas = Canvas { size, data: vec![0; 3 * size * size] };
    let [r, g, b] = Color::PADDING.rgb();
    let plane = size * size;
    canvas.data[..plane].fill(r);
    canvas.data[plane..2 * plane].fill(g);
    canvas.data[2 * plane..].fill(b);

    let longest = list.width.max(list.height);
    let scale = if longest > 0.0 { size as f64 / longest } else { 1.0 };
    // Offsets are whole pixels so both padding bands differ by at most one.
    let ox = ((size as f64 - list.width * scale) / 2.0).floor();
    let oy = ((size as f64 - list.height * scale) / 2.0).floor();
    let px = |x: f64| ox + x * scale;
    let py = |y: f64| oy + y * scale;

    for cmd in &list.commands {
        match cmd {
            &DrawCommand::Rect { x, y, w, h, color } => {
                let (x0, x1) = covered(px(x), px(x + w));
                let (y0, y1) = covered(py(y), py(y + h));
                for row in y0..y1 {
                    canvas.span(row, x0, x1, color);
                }
            }
            DrawCommand::Polygon { points, color } => {
                let pts: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (px(x), py(y))).collect();
                fill_polygon(&mut canvas, &pts, *color);
            }
            &DrawCommand::Line { x0, y0, x1, y1, color } => {
                let a = (px(x0).floor() as i64, py(y0).floor() as i64);
                let b = (px(x1).floor() as i64, py(y1).floor() as i64);
                bresenham(&mut canvas, a, b, color);
            }
            &DrawCommand::Circle { cx, cy, r, color, filled } => {
                let c = (px(cx).floor() as i64, py(cy).floor() as i64);
                circle(&mut canvas, c, (r * scale).round() as i64, color, filled);
            }
        }
    }
    Ok(PixelObservation { size, data: canvas.data })
}

/// Even-odd scanline fill sampled at pixel centres.
fn fill_polygon(canvas: &mut Canvas, pts: &[(f64, f64)], color: Color) {
    if pts.len() < 3 {
        return;
    }
    let ymin = pts.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    let ymax = pts.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    let (r0, r1) = covered(ymin, ymax);
    let mut xs = Vec::new();
    for row in r0.max(0)..r1.min(canvas.size as i64) {
        let sy = row as f64 + 0.5;
        xs.clear();
        for k in 0..pts.len() {
            let (a, b) = (pts[k], pts[(k + 1) % pts.len()]);
            // Half-open in y so shared vertices count once.
            if (a.1 <= sy) != (b.1 <= sy) {
                xs.push(a.0 + (sy - a.1) / (b.1 - a.1) * (b.0 - a.0));
            }
        }
        xs.sort_by(f64::total_cmp);
        for pair in xs.chunks_exact(2) {
            let (x0, x1) = covered(pair[0], pair[1]);
            canvas.span(row, x0, x1, color);
        }
    }
}

fn bresenham(canvas: &mut Canvas, (mut x0, mut y0): (i64, i64), (x1, y1): (i64, i64), color: Color) {
    let dx = (x1 - x0).abs();
    let dy = -(y1 - y0).abs();
    let sx = if x0 < x1 { 1 } else { -1 };
    let sy = if y0 < y1 { 1 } else { -1 };
    let mut err = dx + dy;
    loop {
        canvas.put(x0, y0, color);
        if x0 == x1 && y0 == y1 {
            break;
        }
        let e2 = 2 * err;
        if e2 >= dy {
            err += dy;
            x0 += sx;
        }
        if e2 <= dx {
            err += dx;
            y0 += sy;
        }
    }
}

/// Midpoint circle; filled circles draw spans between the octant points.
fn circle(canvas: &mut Canvas, (cx, cy): (i64, i64), r: i64, color: Color, filled: bool) {
    if r <= 0 {
        canvas.put(cx, cy, color);
        return;
    }
    let (mut x, mut y) = (r, 0i64);
    let mut err = 1 - r;
    while x >= y {
        if filled {
            canvas.span(cy + y, cx - x, cx + x + 1, color);
            canvas.span(cy - y, cx - x, cx + x + 1, color);
            canvas.span(cy + x, cx - y, cx + y + 1, color);
            canvas.span(cy - x, cx - y, cx + y + 1, color);
        } else {
            for (px, py) in [(x, y), (y, x), (-y, x), (-x, y), (-x, -y), (-y, -x), (y, -x), (x, -y)] {
                canvas.put(cx + px, cy + py, color);
            }
        }
        y += 1;
        if err < 0 {
            err += 2 * y + 1;
        } else {
            x -= 1;
            err += 2 * (y - x) + 1;
        }
    }
}
