//! Headless logic-puzzle environments for reinforcement learning.

pub mod bench;
pub mod draw;
pub mod env;
pub mod observation;
pub mod params;
pub mod protocol;
pub mod puzzles;
pub mod raster;
pub mod rng;
