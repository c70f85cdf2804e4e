use super::{GridError, GridIndex, GridSpec, OccupancyGrid};

/// Moore offsets in emission order N, NE, E, SE, S, SW, W, NW.
pub(crate) const MOORE: [(i64, i64); 8] = [(0, 1), (1, 1), (1, 0), (1, -1), (0, -1), (-1, -1), (-1, 0), (-1, 1)];

const BLOCKED: u8 = u8::MAX;

/// Number of blocked cells among the eight around `idx`; off-grid
/// neighbors count as blocked.
pub fn blocked_neighbor_count(grid: &OccupancyGrid, idx: GridIndex) -> Result<u8, GridError> {
    grid.spec().check(idx)?;
    let (c, r) = (idx.col as i64, idx.row as i64);
    Ok(MOORE
        .iter()
        .filter(|(dc, dr)| grid.is_blocked_at(c + dc, r + dr))
        .count() as u8)
}

/// Sailing safety weight for a cell with `n` blocked neighbors:
/// `1 + 2^(n-1) / 2` for `n >= 1`, and exactly 1 for a hazard-free cell.
pub fn safety_weight(n: u8) -> f64 {
    f64::from(safety_weight_halves(n)) / 2.0
}

/// Twice the safety weight. All weights are multiples of one half, so this
/// is the exact integer form used by the planner's cost arithmetic.
pub(crate) fn safety_weight_halves(n: u8) -> u32 {
    debug_assert!(n <= 8, "at most eight neighbors");
    if n == 0 {
        2
    } else {
        2 + (1 << (n - 1))
    }
}

/// Per-cell sailing safety weight `w(C_i, R_i)`. Blocked cells read as
/// `f64::INFINITY` and are never entered by the planner.
#[derive(Debug, Clone, PartialEq)]
pub struct SafetyWeightField {
    spec: GridSpec,
    counts: Vec<u8>,
}

impl SafetyWeightField {
    pub fn compute(grid: &OccupancyGrid) -> Self {
        let spec = *grid.spec();
        let counts = spec
            .indices()
            .map(|idx| {
                if grid.is_blocked(idx) {
                    BLOCKED
                } else {
                    blocked_neighbor_count(grid, idx).expect("index from spec")
                }
            })
            .collect();
        Self { spec, counts }
    }

    /// Field with unit weight on every navigable cell, for plain-distance runs.
    pub fn uniform(grid: &OccupancyGrid) -> Self {
        let counts = grid.mask().iter().map(|&b| if b { BLOCKED } else { 0 }).collect();
        Self {
            spec: *grid.spec(),
            counts,
        }
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    /// `None` for blocked cells.
    pub fn neighbor_count(&self, idx: GridIndex) -> Option<u8> {
        self.spec.check(idx).ok()?;
        let n = self.counts[self.spec.linear(idx)];
        (n != BLOCKED).then_some(n)
    }

    pub fn weight(&self, idx: GridIndex) -> f64 {
        self.neighbor_count(idx).map_or(f64::INFINITY, safety_weight)
    }

    pub(crate) fn weight_halves(&self, idx: GridIndex) -> Option<u32> {
        self.neighbor_count(idx).map(safety_weight_halves)
    }

    /// True when the cell is navigable but next to something blocked.
    pub fn is_elevated(&self, idx: GridIndex) -> bool {
        matches!(self.neighbor_count(idx), Some(n) if n > 0)
    }
}
