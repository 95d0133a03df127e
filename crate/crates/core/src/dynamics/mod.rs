//! Orbits under `f` through the annulus system, escape-grid rendering,
//! box counting and Whitney sums.
//!
//! The escape classification is one-sided: entering a band `B_k` proves the
//! orbit escapes (each band maps into the next), while `JuliaCandidate` only
//! says the orbit stayed in the `A_k` annuli as far as the ledger reaches.

mod boxcount;
mod export;
mod orbit;
mod render;
mod whitney;

pub use boxcount::{box_count, BoxCountResult};
pub use export::{boxcount_csv, grid_png, grid_ppm, mask_pbm, palette, whitney_csv};
pub use orbit::{classify_interval, classify_region, iterate_orbit, FinalClass, OrbitRecord, OrbitStep, Region};
pub use render::{julia_mask, render, Cell, Grid, Mask, Window};
pub use whitney::{whitney_squares, whitney_tsum, WhitneySquare};

use thiserror::Error;

/// Default iteration budget; values grow doubly exponentially, so only
/// orbits lingering near the Cantor set in `D_1` use more than a few steps.
pub const DEFAULT_BUDGET: usize = 64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DynamicsError {
    #[error("mask has no set pixels")]
    EmptySet,
    #[error("box counting needs at least 3 scales, got {0}")]
    DegenerateFit(usize),
    #[error("invalid arguments: {0}")]
    BadArguments(String),
}
