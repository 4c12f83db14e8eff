//! Parameter strings such as `3x3c6m5#42`.
//!
//! Grammar: a dimension pair `<w>x<h>` (a bare `<n>` for Untangle, an
//! optional solid letter before the pair for Cube), then letter-keyed
//! integers (`b1`, `c6`, `m5`, `n2`, `s2`), then bare flags (`c`, `r`,
//! `de`, `dt`), optionally followed by `#<seed>`.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::puzzles::PuzzleId;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParamError {
    #[error("unknown puzzle `{0}`")]
    UnknownPuzzle(String),
    #[error("malformed parameters `{text}`: {reason}")]
    MalformedParams { text: String, reason: String },
    #[error("malformed seed `{0}`")]
    MalformedSeed(String),
    #[error("invalid parameters for {puzzle}: {reason}")]
    InvalidParamCombination { puzzle: PuzzleId, reason: String },
}

/// Typed generation parameters. Which fields are set depends on the puzzle;
/// after parsing, every field the puzzle uses is filled (defaults applied).
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ParamMap {
    pub width: Option<u32>,
    pub height: Option<u32>,
    /// Palette size (Flood, Same Game).
    pub colors: Option<u32>,
    /// Flood move slack on top of the minimal solution (`m`).
    pub extra_moves: Option<u32>,
    /// Net / Netslide barrier level (`b`), accepted but inert.
    pub barrier_level: Option<u32>,
    /// Twiddle rotating block size (`n`).
    pub block_size: Option<u32>,
    /// Same Game minimum removable group size (`s`).
    pub group_min: Option<u32>,
    /// Untangle vertex count.
    pub points: Option<u32>,
    pub flags: BTreeSet<String>,
}

impl ParamMap {
    pub fn has_flag(&self, flag: &str) -> bool {
        self.flags.contains(flag)
    }

    /// Width and height, for puzzles that have them.
    pub fn dims(&self) -> Option<(usize, usize)> {
        Some((self.width? as usize, self.height? as usize))
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Key {
    Barrier,
    Colors,
    Moves,
    Block,
    Group,
}

impl Key {
    fn from_letter(c: char) -> Option<Key> {
        Some(match c {
            'b' => Key::Barrier,
            'c' => Key::Colors,
            'm' => Key::Moves,
            'n' => Key::Block,
            's' => Key::Group,
            _ => return None,
        })
    }

    fn slot(self, p: &mut ParamMap) -> &mut Option<u32> {
        match self {
            Key::Barrier => &mut p.barrier_level,
            Key::Colors => &mut p.colors,
            Key::Moves => &mut p.extra_moves,
            Key::Block => &mut p.block_size,
            Key::Group => &mut p.group_min,
        }
    }
}

struct Grammar {
    keys: &'static [Key],
    flags: &'static [&'static str],
}

fn grammar(puzzle: PuzzleId) -> Grammar {
    use PuzzleId::*;
    match puzzle {
        Fifteen | Sixteen | Cube | Untangle => Grammar { keys: &[], flags: &[] },
        Flip => Grammar { keys: &[], flags: &["c"] },
        Flood => Grammar { keys: &[Key::Colors, Key::Moves], flags: &[] },
        Net | Netslide => Grammar { keys: &[Key::Barrier], flags: &[] },
        SameGame => Grammar { keys: &[Key::Colors, Key::Group], flags: &[] },
        Twiddle => Grammar { keys: &[Key::Block], flags: &["r"] },
    }
}

fn malformed(text: &str, reason: impl Into<String>) -> ParamError {
    ParamError::MalformedParams {
        text: text.to_string(),
        reason: reason.into(),
    }
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn number(&mut self) -> Option<u64> {
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()?
            .parse()
            .ok()
    }
}

/// Parses `<params>[#<seed>]` for `puzzle`.
pub fn parse_params(puzzle: PuzzleId, text: &str) -> Result<(ParamMap, Option<u64>), ParamError> {
    let (body, seed) = match text.split_once('#') {
        Some((body, seed)) => {
            if seed.is_empty() || !seed.bytes().all(|b| b.is_ascii_digit()) {
                return Err(ParamError::MalformedSeed(seed.to_string()));
            }
            let value = seed
                .parse::<u64>()
                .map_err(|_| ParamError::MalformedSeed(seed.to_string()))?;
            (body, Some(value))
        }
        None => (text, None),
    };
    if body.is_empty() {
        return Err(malformed(text, "empty parameter string"));
    }

    let mut params = ParamMap::default();
    let mut cur = Cursor { bytes: body.as_bytes(), pos: 0 };
    let dim = |cur: &mut Cursor, what: &str| -> Result<u32, ParamError> {
        let n = cur
            .number()
            .ok_or_else(|| malformed(body, format!("expected {what}")))?;
        if n == 0 {
            return Err(malformed(body, format!("{what} must be positive")));
        }
        u32::try_from(n).map_err(|_| malformed(body, format!("{what} too large")))
    };

    if puzzle == PuzzleId::Untangle {
        params.points = Some(dim(&mut cur, "point count")?);
    } else {
        if puzzle == PuzzleId::Cube {
            match cur.peek() {
                Some(b'c') => cur.pos += 1,
                Some(b't' | b'o' | b'i') => {
                    return Err(malformed(body, "only the cube solid (`c`) is supported"))
                }
                _ => {}
            }
        }
        params.width = Some(dim(&mut cur, "width")?);
        if cur.peek() != Some(b'x') {
            return Err(malformed(body, "expected `x` between width and height"));
        }
        cur.pos += 1;
        params.height = Some(dim(&mut cur, "height")?);
    }

    let g = grammar(puzzle);
    while let Some(b) = cur.peek() {
        let letter = b as char;
        if !letter.is_ascii_lowercase() {
            return Err(malformed(body, format!("unexpected character `{letter}`")));
        }
        cur.pos += 1;
        if letter == 'd' && matches!(cur.peek(), Some(b'a'..=b'z')) {
            let flag = format!("d{}", cur.peek().unwrap() as char);
            cur.pos += 1;
            if !params.flags.insert(flag.clone()) {
                return Err(malformed(body, format!("duplicate token `{flag}`")));
            }
            continue;
        }
        match cur.number() {
            Some(value) => {
                let key = Key::from_letter(letter)
                    .filter(|k| g.keys.contains(k))
                    .ok_or_else(|| malformed(body, format!("unknown token `{letter}{value}`")))?;
                let value = u32::try_from(value)
                    .map_err(|_| malformed(body, format!("value of `{letter}` too large")))?;
                let slot = key.slot(&mut params);
                if slot.replace(value).is_some() {
                    return Err(malformed(body, format!("duplicate token `{letter}`")));
                }
            }
            None => {
                let flag = letter.to_string();
                if !g.flags.contains(&flag.as_str()) {
                    return Err(malformed(body, format!("unknown flag `{flag}`")));
                }
                if !params.flags.insert(flag) {
                    return Err(malformed(body, format!("duplicate flag `{letter}`")));
                }
            }
        }
    }

    apply_defaults(puzzle, &mut params);
    validate(puzzle, &params)?;
    Ok((params, seed))
}

fn apply_defaults(puzzle: PuzzleId, p: &mut ParamMap) {
    match puzzle {
        PuzzleId::Flood => {
            p.colors.get_or_insert(6);
            p.extra_moves.get_or_insert(5);
        }
        PuzzleId::SameGame => {
            p.colors.get_or_insert(3);
            p.group_min.get_or_insert(2);
        }
        PuzzleId::Twiddle => {
            p.block_size.get_or_insert(2);
        }
        _ => {}
    }
}

/// Checks that `params` is complete and consistent for `puzzle`.
pub fn validate(puzzle: PuzzleId, p: &ParamMap) -> Result<(), ParamError> {
    let bad = |reason: String| ParamError::InvalidParamCombination { puzzle, reason };
    let g = grammar(puzzle);
    let stray = [
        (Key::Barrier, p.barrier_level),
        (Key::Colors, p.colors),
        (Key::Moves, p.extra_moves),
        (Key::Block, p.block_size),
        (Key::Group, p.group_min),
    ];
    for (key, value) in stray {
        if value.is_some() && !g.keys.contains(&key) {
            return Err(bad(format!("{key:?} does not apply")));
        }
    }
    for flag in &p.flags {
        let difficulty = flag.len() == 2 && flag.starts_with('d');
        if !difficulty && !g.flags.contains(&flag.as_str()) {
            return Err(bad(format!("flag `{flag}` does not apply")));
        }
    }

    if puzzle == PuzzleId::Untangle {
        if p.width.is_some() || p.height.is_some() {
            return Err(bad("takes a point count, not dimensions".into()));
        }
        let n = p.points.ok_or_else(|| bad("missing point count".into()))?;
        if !(4..=32).contains(&n) {
            return Err(bad(format!("point count {n} outside 4..=32")));
        }
        return Ok(());
    }
    if p.points.is_some() {
        return Err(bad("point count does not apply".into()));
    }
    let (w, h) = match (p.width, p.height) {
        (Some(w), Some(h)) if w >= 1 && h >= 1 => (w, h),
        _ => return Err(bad("width and height must be positive".into())),
    };
    if w > 64 || h > 64 {
        return Err(bad("dimensions above 64".into()));
    }
    let cells = w * h;
    match puzzle {
        PuzzleId::Fifteen | PuzzleId::Sixteen | PuzzleId::Net | PuzzleId::Netslide if cells < 2 => {
            Err(bad("needs at least two cells".into()))
        }
        PuzzleId::Cube if cells < 7 => Err(bad("needs at least 7 cells for 6 blue squares".into())),
        PuzzleId::Flood => match p.colors {
            Some(c) if (2..=10).contains(&c) => Ok(()),
            _ => Err(bad("colors must be within 2..=10".into())),
        },
        PuzzleId::SameGame => {
            match p.colors {
                Some(c) if (2..=9).contains(&c) => {}
                _ => return Err(bad("colors must be within 2..=9".into())),
            }
            match p.group_min {
                Some(s) if s >= 1 => Ok(()),
                _ => Err(bad("minimum group size must be positive".into())),
            }
        }
        PuzzleId::Twiddle => match p.block_size {
            Some(n) if n >= 2 && n <= w.min(h) => Ok(()),
            _ => Err(bad("block size must be within 2..=min(width, height)".into())),
        },
        _ => Ok(()),
    }
}

/// Canonical parameter string (no seed suffix).
pub fn format_params(puzzle: PuzzleId, p: &ParamMap) -> Result<String, ParamError> {
    validate(puzzle, p)?;
    let mut out = String::new();
    if puzzle == PuzzleId::Untangle {
        write!(out, "{}", p.points.unwrap_or_default()).unwrap();
    } else {
        if puzzle == PuzzleId::Cube {
            out.push('c');
        }
        write!(out, "{}x{}", p.width.unwrap(), p.height.unwrap()).unwrap();
    }
    for (letter, value) in [
        ('b', p.barrier_level),
        ('c', p.colors),
        ('m', p.extra_moves),
        ('n', p.block_size),
        ('s', p.group_min),
    ] {
        if let Some(v) = value {
            write!(out, "{letter}{v}").unwrap();
        }
    }
    for flag in &p.flags {
        out.push_str(flag);
    }
    Ok(out)
}
