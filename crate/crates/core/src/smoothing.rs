//! Route smoothing by grid line of sight.
//!
//! From each anchor node the route jumps to the farthest later node that is
//! visible from it, dropping the nodes in between.

use thiserror::Error;

use crate::grid::{GridIndex, OccupancyGrid, SafetyWeightField};
use crate::trace::supercover;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum SmoothingError {
    #[error("cannot smooth an empty path")]
    EmptyPath,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SmoothingOptions {
    /// Also treat navigable cells with a safety weight above 1 as blocking.
    pub strict_safety: bool,
}

/// True when no cell touched by the segment between the two cell centers
/// is blocked (or, under `strict_safety`, weighted above 1).
pub fn line_of_sight(
    grid: &OccupancyGrid,
    weights: &SafetyWeightField,
    a: GridIndex,
    b: GridIndex,
    opts: SmoothingOptions,
) -> bool {
    supercover(a, b)
        .into_iter()
        .all(|cell| !grid.is_blocked(cell) && !(opts.strict_safety && weights.is_elevated(cell)))
}

/// Greedy string pulling over `path`.
///
/// The step from a node to its direct successor is always kept, even when
/// strict line of sight fails on it: that step is the planner's own move
/// and dropping it would disconnect the route.
pub fn smooth(
    path: &[GridIndex],
    grid: &OccupancyGrid,
    weights: &SafetyWeightField,
    opts: SmoothingOptions,
) -> Result<Vec<GridIndex>, SmoothingError> {
    let (&first, _) = path.split_first().ok_or(SmoothingError::EmptyPath)?;
    let last = path.len() - 1;
    let mut out = vec![first];
    let mut anchor = 0;
    while anchor < last {
        let next = (anchor + 2..=last)
            .rev()
            .find(|&j| line_of_sight(grid, weights, path[anchor], path[j], opts))
            .unwrap_or(anchor + 1);
        out.push(path[next]);
        anchor = next;
    }
    Ok(out)
}
