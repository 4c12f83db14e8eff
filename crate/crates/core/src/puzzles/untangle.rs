//! Untangle: move points around until no two edges cross.
//!
//! LEFT/RIGHT cycle through the points and SELECT picks the current one up.
//! While a point is held the arrows move it one lattice step; SELECT drops it.

use serde::{Deserialize, Serialize};

use super::planar::{self, Point};
use super::{Action, Game, KeyWriter, PuzzleError, PuzzleId, Status};
use crate::draw::{Color, DrawList};
use crate::observation::StateObservation;
use crate::params::ParamMap;
use crate::rng::Rng;

/// Side of the square lattice the points live on.
pub const LATTICE: i32 = 16;

const PLANARITY_BUDGET: u64 = 20_000_000;

#[derive(Debug, Clone)]
pub struct Untangle {
    points: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UntangleState {
    pub lattice: i32,
    pub xs: Vec<i32>,
    pub ys: Vec<i32>,
    pub edges: Vec<(u16, u16)>,
    pub selected: usize,
    pub grabbed: bool,
    pub move_count: u32,
}

impl UntangleState {
    pub fn points(&self) -> Vec<Point> {
        self.xs.iter().zip(&self.ys).map(|(&x, &y)| (x as i64, y as i64)).collect()
    }

    pub fn edge_list(&self) -> Vec<(usize, usize)> {
        self.edges.iter().map(|&(a, b)| (a as usize, b as usize)).collect()
    }
}

impl Untangle {
    pub fn new(p: &ParamMap) -> Self {
        Untangle { points: p.points.expect("validated") as usize }
    }

    fn sample_points(&self, rng: &mut Rng) -> Option<Vec<Point>> {
        let mut pts: Vec<Point> = Vec::with_capacity(self.points);
        let mut tries = 0;
        while pts.len() < self.points {
            tries += 1;
            if tries > 100 * self.points {
                return None;
            }
            let p = (rng.below(LATTICE as u64) as i64, rng.below(LATTICE as u64) as i64);
            pts.push(p);
            let ok = !pts[..pts.len() - 1].contains(&p) && planar::general_position(&pts);
            if !ok {
                pts.pop();
            }
        }
        Some(pts)
    }
}

impl Game for Untangle {
    type State = UntangleState;

    fn id(&self) -> PuzzleId {
        PuzzleId::Untangle
    }

    fn candidate(&self, rng: &mut Rng) -> Option<UntangleState> {
        let pts = self.sample_points(rng)?;
        let edges = planar::delaunay_edges(&pts);
        let mut placed = pts.clone();
        rng.shuffle(&mut placed);
        Some(UntangleState {
            lattice: LATTICE,
            xs: placed.iter().map(|p| p.0 as i32).collect(),
            ys: placed.iter().map(|p| p.1 as i32).collect(),
            edges: edges.into_iter().map(|(a, b)| (a as u16, b as u16)).collect(),
            selected: 0,
            grabbed: false,
            move_count: 0,
        })
    }

    fn apply(&self, s: &UntangleState, action: Action) -> Option<UntangleState> {
        let n = s.xs.len();
        match (action, s.grabbed) {
            (Action::Select, _) => Some(UntangleState { grabbed: !s.grabbed, ..s.clone() }),
            (Action::Left, false) | (Action::Right, false) => {
                let step = if action == Action::Right { 1 } else { n - 1 };
                Some(UntangleState { selected: (s.selected + step) % n, ..s.clone() })
            }
            (_, true) => {
                let (dx, dy) = action.delta()?;
                let (x, y) = (s.xs[s.selected] + dx, s.ys[s.selected] + dy);
                if !(0..s.lattice).contains(&x) || !(0..s.lattice).contains(&y) {
                    return None;
                }
                if (0..n).any(|i| s.xs[i] == x && s.ys[i] == y) {
                    return None;
                }
                let mut next = s.clone();
                next.xs[s.selected] = x;
                next.ys[s.selected] = y;
                next.move_count += 1;
                Some(next)
            }
            _ => None,
        }
    }

    fn status(&self, s: &UntangleState) -> Status {
        if planar::drawing_is_plane(&s.points(), &s.edge_list()) {
            Status::Solved
        } else {
            Status::InProgress
        }
    }

    fn encode(&self, s: &UntangleState) -> StateObservation {
        let flat: Vec<u16> = s.edges.iter().flat_map(|&(a, b)| [a, b]).collect();
        StateObservation::new()
            .array("edges", &[s.edges.len(), 2], &flat)
            .scalar("grabbed", s.grabbed as i64)
            .scalar("lattice", s.lattice)
            .scalar("move_count", s.move_count)
            .scalar("selected", s.selected as i64)
            .array("xs", &[s.xs.len()], &s.xs)
            .array("ys", &[s.ys.len()], &s.ys)
    }

    fn write_key(&self, s: &UntangleState, out: &mut KeyWriter) {
        for (&x, &y) in s.xs.iter().zip(&s.ys) {
            out.i32(x).i32(y);
        }
        out.i32(s.selected as i32).u8(s.grabbed as u8);
    }

    fn render(&self, s: &UntangleState) -> DrawList {
        let size = s.lattice as f64;
        let mut list = DrawList::new(size, size);
        list.rect(0.0, 0.0, size, size, Color::WHITE);
        let at = |i: usize| (s.xs[i] as f64 + 0.5, s.ys[i] as f64 + 0.5);
        for &(a, b) in &s.edges {
            let (p, q) = (at(a as usize), at(b as usize));
            list.line(p.0, p.1, q.0, q.1, Color::BLACK);
        }
        for i in 0..s.xs.len() {
            let (x, y) = at(i);
            let color = if i != s.selected {
                Color::BLUE
            } else if s.grabbed {
                Color::RED
            } else {
                Color::ORANGE
            };
            list.circle(x, y, 0.4, color, true);
            if i == s.selected {
                list.circle(x, y, 0.45, Color::BLACK, false);
            }
        }
        list
    }

    fn verify_solvable(&self, s: &UntangleState) -> Result<bool, PuzzleError> {
        planar::is_planar(s.xs.len(), &s.edge_list(), PLANARITY_BUDGET)
            .ok_or(PuzzleError::OracleBudgetExceeded { puzzle: PuzzleId::Untangle })
    }

    fn ascii(&self, s: &UntangleState) -> String {
        let mut out = String::new();
        for (i, (x, y)) in s.xs.iter().zip(&s.ys).enumerate() {
            let mark = match (i == s.selected, s.grabbed) {
                (true, true) => " (held)",
                (true, false) => " (selected)",
                _ => "",
            };
            out.push_str(&format!("{i}: ({x}, {y}){mark}\n"));
        }
        let edges: Vec<String> = s.edges.iter().map(|(a, b)| format!("{a}-{b}")).collect();
        out.push_str(&format!("edges {}\n", edges.join(" ")));
        out
    }
}
