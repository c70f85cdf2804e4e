//! Occupancy grid over a geographic extent, plus the sailing safety weight
//! field derived from it.
//!
//! Columns run west to east and rows run south to north, so `row + 1` is
//! one cell further north.

mod raster;
pub(crate) mod weights;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chart::{Extent, GeoPoint};

pub use raster::{rasterize, rasterize_region, RasterOptions, DEFAULT_MAX_CELLS};
pub use weights::{blocked_neighbor_count, safety_weight, SafetyWeightField};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GridError {
    #[error("cell size must be positive and finite, got {0}")]
    InvalidCellSize(f64),
    #[error("grid must have at least one row and column")]
    EmptyGrid,
    #[error("grid of {cols}x{rows} cells exceeds the limit of {limit} cells")]
    GridTooLarge { cols: usize, rows: usize, limit: usize },
    #[error("cell ({col}, {row}) is outside the {cols}x{rows} grid")]
    OutOfBounds {
        col: i64,
        row: i64,
        cols: usize,
        rows: usize,
    },
    #[error("point ({lon}, {lat}) is outside the grid coverage")]
    PointOutside { lon: f64, lat: f64 },
    #[error("blocked mask has {got} cells, expected {expected}")]
    MaskSize { got: usize, expected: usize },
    #[error("grid cache: {0}")]
    Cache(String),
}

/// A grid cell, `(C_i, R_i)` in column/row order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GridIndex {
    pub col: usize,
    pub row: usize,
}

impl GridIndex {
    pub const fn new(col: usize, row: usize) -> Self {
        Self { col, row }
    }

    /// Neighbor at a signed offset, if it stays non-negative.
    pub fn offset(self, dc: i64, dr: i64) -> Option<Self> {
        let col = self.col as i64 + dc;
        let row = self.row as i64 + dr;
        (col >= 0 && row >= 0).then(|| Self::new(col as usize, row as usize))
    }

    pub fn is_adjacent(self, other: Self) -> bool {
        self != other && self.col.abs_diff(other.col) <= 1 && self.row.abs_diff(other.row) <= 1
    }
}

impl From<(usize, usize)> for GridIndex {
    fn from((col, row): (usize, usize)) -> Self {
        Self { col, row }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    /// South-west corner of cell (0, 0).
    pub origin: GeoPoint,
    /// Edge length of a square cell, in degrees.
    pub cell_size: f64,
    pub cols: usize,
    pub rows: usize,
}

/// Number of whole cells needed to span `length`, forgiving the rounding
/// noise of decimal degree arithmetic (0.5 / 0.005 must give 100, not 101).
fn cells_spanning(length: f64, cell_size: f64) -> usize {
    let n = length / cell_size;
    let snapped = n.round();
    let count = if (n - snapped).abs() <= 1e-9 * snapped.max(1.0) {
        snapped
    } else {
        n.ceil()
    };
    (count as usize).max(1)
}

impl GridSpec {
    pub fn new(origin: GeoPoint, cell_size: f64, cols: usize, rows: usize) -> Result<Self, GridError> {
        if !(cell_size > 0.0 && cell_size.is_finite()) {
            return Err(GridError::InvalidCellSize(cell_size));
        }
        if cols == 0 || rows == 0 {
            return Err(GridError::EmptyGrid);
        }
        Ok(Self {
            origin,
            cell_size,
            cols,
            rows,
        })
    }

    /// Smallest grid anchored at `extent.min` that covers the extent.
    pub fn covering(extent: &Extent, cell_size: f64) -> Result<Self, GridError> {
        if !(cell_size > 0.0 && cell_size.is_finite()) {
            return Err(GridError::InvalidCellSize(cell_size));
        }
        let cols = cells_spanning(extent.width(), cell_size);
        let rows = cells_spanning(extent.height(), cell_size);
        Self::new(extent.min, cell_size, cols, rows)
    }

    pub fn cell_count(&self) -> usize {
        self.cols * self.rows
    }

    pub fn contains(&self, idx: GridIndex) -> bool {
        idx.col < self.cols && idx.row < self.rows
    }

    pub(crate) fn check(&self, idx: GridIndex) -> Result<(), GridError> {
        if self.contains(idx) {
            Ok(())
        } else {
            Err(self.out_of_bounds(idx.col as i64, idx.row as i64))
        }
    }

    pub(crate) fn out_of_bounds(&self, col: i64, row: i64) -> GridError {
        GridError::OutOfBounds {
            col,
            row,
            cols: self.cols,
            rows: self.rows,
        }
    }

    /// Row-major linear index.
    pub fn linear(&self, idx: GridIndex) -> usize {
        idx.row * self.cols + idx.col
    }

    pub fn index_at(&self, linear: usize) -> GridIndex {
        GridIndex::new(linear % self.cols, linear / self.cols)
    }

    pub fn indices(&self) -> impl Iterator<Item = GridIndex> + '_ {
        (0..self.cell_count()).map(|i| self.index_at(i))
    }

    pub fn cell_center(&self, idx: GridIndex) -> Result<GeoPoint, GridError> {
        self.check(idx)?;
        Ok(GeoPoint::new(
            self.origin.lon + (idx.col as f64 + 0.5) * self.cell_size,
            self.origin.lat + (idx.row as f64 + 0.5) * self.cell_size,
        ))
    }

    /// Cell containing `p`. Points on the north or east edge of the grid map
    /// to the last row or column.
    pub fn index_of(&self, p: GeoPoint) -> Result<GridIndex, GridError> {
        let u = (p.lon - self.origin.lon) / self.cell_size;
        let v = (p.lat - self.origin.lat) / self.cell_size;
        let outside = || GridError::PointOutside { lon: p.lon, lat: p.lat };
        if !(u >= 0.0 && v >= 0.0 && u <= self.cols as f64 && v <= self.rows as f64) {
            return Err(outside());
        }
        let col = (u.floor() as usize).min(self.cols - 1);
        let row = (v.floor() as usize).min(self.rows - 1);
        Ok(GridIndex::new(col, row))
    }

    pub fn extent(&self) -> Extent {
        Extent {
            min: self.origin,
            max: GeoPoint::new(
                self.origin.lon + self.cols as f64 * self.cell_size,
                self.origin.lat + self.rows as f64 * self.cell_size,
            ),
        }
    }
}

/// Navigable/blocked mask. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct OccupancyGrid {
    spec: GridSpec,
    blocked: Vec<bool>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GridCache {
    spec: GridSpec,
    /// Row-major run-length encoding: `[value, count]`, value 1 = blocked.
    blocked: Vec<[u64; 2]>,
}

impl OccupancyGrid {
    pub fn open(spec: GridSpec) -> Self {
        Self {
            blocked: vec![false; spec.cell_count()],
            spec,
        }
    }

    /// Build from a row-major blocked mask.
    pub fn from_mask(spec: GridSpec, blocked: Vec<bool>) -> Result<Self, GridError> {
        if blocked.len() != spec.cell_count() {
            return Err(GridError::MaskSize {
                got: blocked.len(),
                expected: spec.cell_count(),
            });
        }
        Ok(Self { spec, blocked })
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn cols(&self) -> usize {
        self.spec.cols
    }

    pub fn rows(&self) -> usize {
        self.spec.rows
    }

    pub fn contains(&self, idx: GridIndex) -> bool {
        self.spec.contains(idx)
    }

    /// Out-of-bounds cells read as blocked.
    pub fn is_blocked(&self, idx: GridIndex) -> bool {
        !self.contains(idx) || self.blocked[self.spec.linear(idx)]
    }

    pub fn is_navigable(&self, idx: GridIndex) -> bool {
        !self.is_blocked(idx)
    }

    /// Signed lookup; anything off the grid counts as blocked.
    pub fn is_blocked_at(&self, col: i64, row: i64) -> bool {
        if col < 0 || row < 0 {
            return true;
        }
        self.is_blocked(GridIndex::new(col as usize, row as usize))
    }

    pub fn mask(&self) -> &[bool] {
        &self.blocked
    }

    pub fn blocked_count(&self) -> usize {
        self.blocked.iter().filter(|b| **b).count()
    }

    pub fn to_cache_json(&self) -> String {
        let mut runs: Vec<[u64; 2]> = Vec::new();
        for &b in &self.blocked {
            let v = u64::from(b);
            match runs.last_mut() {
                Some(run) if run[0] == v => run[1] += 1,
                _ => runs.push([v, 1]),
            }
        }
        let cache = GridCache {
            spec: self.spec,
            blocked: runs,
        };
        serde_json::to_string(&cache).expect("grid cache serializes")
    }

    pub fn from_cache_json(text: &str) -> Result<Self, GridError> {
        let cache: GridCache = serde_json::from_str(text).map_err(|e| GridError::Cache(e.to_string()))?;
        let spec = GridSpec::new(
            cache.spec.origin,
            cache.spec.cell_size,
            cache.spec.cols,
            cache.spec.rows,
        )?;
        let mut blocked = Vec::with_capacity(spec.cell_count());
        for [value, count] in cache.blocked {
            let value = match value {
                0 => false,
                1 => true,
                other => return Err(GridError::Cache(format!("run value {other} is not 0 or 1"))),
            };
            if blocked.len() as u64 + count > spec.cell_count() as u64 {
                return Err(GridError::MaskSize {
                    got: blocked.len() + count as usize,
                    expected: spec.cell_count(),
                });
            }
            blocked.extend(std::iter::repeat_n(value, count as usize));
        }
        Self::from_mask(spec, blocked)
    }
}
