//! Resolution-independent draw lists in board coordinates.

use serde::Serialize;

/// Index into the fixed 16-entry [`PALETTE`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Color(pub u8);

impl Color {
    /// Canvas padding outside the board.
    pub const PADDING: Color = Color(0);
    pub const BLACK: Color = Color(1);
    pub const WHITE: Color = Color(2);
    pub const RED: Color = Color(3);
    pub const GREEN: Color = Color(4);
    pub const BLUE: Color = Color(5);
    pub const YELLOW: Color = Color(6);
    pub const ORANGE: Color = Color(7);
    pub const PURPLE: Color = Color(8);
    pub const CYAN: Color = Color(9);
    pub const PINK: Color = Color(10);
    pub const BROWN: Color = Color(11);
    pub const DARK_GRAY: Color = Color(12);
    pub const LIGHT_GRAY: Color = Color(13);
    pub const NAVY: Color = Color(14);
    pub const LIME: Color = Color(15);

    pub fn rgb(self) -> [u8; 3] {
        PALETTE[self.0 as usize & 15]
    }
}

pub const PALETTE: [[u8; 3]; 16] = [
    [160, 160, 160], // padding
    [0, 0, 0],
    [255, 255, 255],
    [220, 40, 40],
    [40, 170, 60],
    [40, 80, 220],
    [240, 210, 40],
    [240, 140, 20],
    [150, 60, 190],
    [40, 200, 210],
    [240, 120, 180],
    [140, 90, 40],
    [80, 80, 80],
    [225, 225, 225],
    [20, 30, 120],
    [170, 230, 60],
];

/// Colours used for puzzles whose cells carry a colour index.
pub const CELL_COLORS: [Color; 10] = [
    Color::RED,
    Color::GREEN,
    Color::BLUE,
    Color::YELLOW,
    Color::ORANGE,
    Color::PURPLE,
    Color::CYAN,
    Color::PINK,
    Color::BROWN,
    Color::LIME,
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum DrawCommand {
    Rect { x: f64, y: f64, w: f64, h: f64, color: Color },
    Line { x0: f64, y0: f64, x1: f64, y1: f64, color: Color },
    Circle { cx: f64, cy: f64, r: f64, color: Color, filled: bool },
    Polygon { points: Vec<(f64, f64)>, color: Color },
}

/// Ordered draw commands over a `width` x `height` board.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DrawList {
    pub width: f64,
    pub height: f64,
    pub commands: Vec<DrawCommand>,
}

impl DrawList {
    pub fn new(width: f64, height: f64) -> Self {
        DrawList { width, height, commands: Vec::new() }
    }

    pub fn rect(&mut self, x: f64, y: f64, w: f64, h: f64, color: Color) {
        self.commands.push(DrawCommand::Rect { x, y, w, h, color });
    }

    pub fn line(&mut self, x0: f64, y0: f64, x1: f64, y1: f64, color: Color) {
        self.commands.push(DrawCommand::Line { x0, y0, x1, y1, color });
    }

    pub fn circle(&mut self, cx: f64, cy: f64, r: f64, color: Color, filled: bool) {
        self.commands.push(DrawCommand::Circle { cx, cy, r, color, filled });
    }

    pub fn polygon(&mut self, points: Vec<(f64, f64)>, color: Color) {
        self.commands.push(DrawCommand::Polygon { points, color });
    }

    /// Rectangle border of thickness `t`, drawn inside the rectangle.
    pub fn outline(&mut self, x: f64, y: f64, w: f64, h: f64, t: f64, color: Color) {
        self.rect(x, y, w, t, color);
        self.rect(x, y + h - t, w, t, color);
        self.rect(x, y + t, t, h - 2.0 * t, color);
        self.rect(x + w - t, y + t, t, h - 2.0 * t, color);
    }

    /// Seven-segment rendering of `value` centred in the given box.
    pub fn number(&mut self, value: u32, x: f64, y: f64, w: f64, h: f64, color: Color) {
        let digits: Vec<u8> = value.to_string().bytes().map(|b| b - b'0').collect();
        let n = digits.len() as f64;
        let dh = h * 0.6;
        let dw = (dh * 0.5).min(w * 0.8 / n);
        let gap = dw * 0.25;
        let total = n * dw + (n - 1.0) * gap;
        let mut dx = x + (w - total) / 2.0;
        let dy = y + (h - dh) / 2.0;
        for d in digits {
            self.digit(d, dx, dy, dw, dh, color);
            dx += dw + gap;
        }
    }

    fn digit(&mut self, d: u8, x: f64, y: f64, w: f64, h: f64, color: Color) {
        // Segment order: top, top-right, bottom-right, bottom, bottom-left, top-left, middle.
        const SEGMENTS: [u8; 10] = [
            0b0111111, 0b0000110, 0b1011011, 0b1001111, 0b1100110,
            0b1101101, 0b1111101, 0b0000111, 0b1111111, 0b1101111,
        ];
        let t = (w * 0.22).max(h * 0.1);
        let half = h / 2.0;
        let boxes = [
            (x, y, w, t),
            (x + w - t, y, t, half),
            (x + w - t, y + half, t, half),
            (x, y + h - t, w, t),
            (x, y + half, t, half),
            (x, y, t, half),
            (x, y + half - t / 2.0, w, t),
        ];
        let mask = SEGMENTS[d as usize % 10];
        for (i, &(bx, by, bw, bh)) in boxes.iter().enumerate() {
            if mask & (1 << i) != 0 {
                self.polygon(vec![(bx, by), (bx + bw, by), (bx + bw, by + bh), (bx, by + bh)], color);
            }
        }
    }

    /// Arrow-head triangle filling the cell at (x, y), pointing along (dx, dy).
    pub fn arrow(&mut self, x: f64, y: f64, dx: i32, dy: i32, color: Color) {
        let (cx, cy) = (x + 0.5, y + 0.5);
        let tip = (cx + 0.35 * dx as f64, cy + 0.35 * dy as f64);
        let back = (cx - 0.3 * dx as f64, cy - 0.3 * dy as f64);
        let side = (0.3 * dy as f64, 0.3 * dx as f64);
        self.polygon(
            vec![tip, (back.0 + side.0, back.1 + side.1), (back.0 - side.0, back.1 - side.1)],
            color,
        );
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digits_differ() {
        let render = |v| {
            let mut d = DrawList::new(1.0, 1.0);
            d.number(v, 0.0, 0.0, 1.0, 1.0, Color::BLACK);
            d
        };
        for a in 0..20 {
            for b in 0..a {
                assert_ne!(render(a), render(b), "{a} vs {b}");
            }
        }
    }
}
