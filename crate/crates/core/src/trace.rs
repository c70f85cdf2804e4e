//! Supercover traversal of segments between cell centers.
//!
//! Everything is done in doubled integer coordinates, where cell `(c, r)`
//! spans `[2c, 2c + 2] x [2r, 2r + 2]` and its center is `(2c + 1, 2r + 1)`,
//! so corner contacts are detected exactly.

use std::collections::HashSet;

use crate::grid::GridIndex;

fn floor_div(a: i64, b: i64) -> i64 {
    a.div_euclid(b)
}

fn ceil_div(a: i64, b: i64) -> i64 {
    -(-a).div_euclid(b)
}

/// Every cell whose closed square meets the segment from the center of `a`
/// to the center of `b`, including cells touched only at a corner.
/// Cells are emitted column by column from the west end.
pub fn supercover(a: GridIndex, b: GridIndex) -> Vec<GridIndex> {
    let (mut p, mut q) = (a, b);
    if p.col > q.col {
        std::mem::swap(&mut p, &mut q);
    }
    let (x0, y0) = (2 * p.col as i64 + 1, 2 * p.row as i64 + 1);
    let (x1, y1) = (2 * q.col as i64 + 1, 2 * q.row as i64 + 1);
    let dx = x1 - x0;
    let dy = y1 - y0;

    let mut cells = Vec::new();
    if dx == 0 {
        let (lo, hi) = (p.row.min(q.row), p.row.max(q.row));
        cells.extend((lo..=hi).map(|r| GridIndex::new(p.col, r)));
        return cells;
    }

    // For column c the segment spans x in [max(2c, x0), min(2c + 2, x1)];
    // y(x) = (y0 * dx + (x - x0) * dy) / dx with dx > 0.
    for c in p.col as i64..=q.col as i64 {
        let xa = (2 * c).max(x0);
        let xb = (2 * c + 2).min(x1);
        let na = y0 * dx + (xa - x0) * dy;
        let nb = y0 * dx + (xb - x0) * dy;
        let (lo, hi) = (na.min(nb), na.max(nb));
        // rows r with 2r <= hi/dx and 2r + 2 >= lo/dx
        let r_lo = ceil_div(lo - 2 * dx, 2 * dx).max(0);
        let r_hi = floor_div(hi, 2 * dx);
        cells.extend((r_lo..=r_hi).map(|r| GridIndex::new(c as usize, r as usize)));
    }
    cells
}

/// Distinct cells of a polyline's supercover, in order of first contact.
pub fn trace_path(path: &[GridIndex]) -> Vec<GridIndex> {
    match path {
        [] => Vec::new(),
        [only] => vec![*only],
        _ => {
            let mut seen = HashSet::new();
            path.windows(2)
                .flat_map(|pair| supercover(pair[0], pair[1]))
                .filter(|cell| seen.insert(*cell))
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    fn ix(c: usize, r: usize) -> GridIndex {
        GridIndex::new(c, r)
    }

    fn set(cells: Vec<GridIndex>) -> BTreeSet<GridIndex> {
        cells.into_iter().collect()
    }

    /// Oracle: sample the segment densely, with a sample count chosen so
    /// every grid-line crossing is hit exactly, and collect every cell whose
    /// closed square holds a sample.
    fn sampled(a: GridIndex, b: GridIndex) -> BTreeSet<GridIndex> {
        let (ax, ay) = (a.col as f64 + 0.5, a.row as f64 + 0.5);
        let (bx, by) = (b.col as f64 + 0.5, b.row as f64 + 0.5);
        let dc = a.col.abs_diff(b.col).max(1);
        let dr = a.row.abs_diff(b.row).max(1);
        let n = 2 * dc * dr * 40;
        let eps = 1e-9;
        let mut out = BTreeSet::new();
        for i in 0..=n {
            let x = ax + (i as f64 * (bx - ax)) / n as f64;
            let y = ay + (i as f64 * (by - ay)) / n as f64;
            for c in [(x - eps).floor(), (x + eps).floor()] {
                for r in [(y - eps).floor(), (y + eps).floor()] {
                    out.insert(ix(c as usize, r as usize));
                }
            }
        }
        out
    }

    #[test]
    fn single_cell() {
        assert_eq!(supercover(ix(3, 3), ix(3, 3)), vec![ix(3, 3)]);
    }

    #[test]
    fn horizontal_and_vertical() {
        assert_eq!(
            supercover(ix(1, 2), ix(4, 2)),
            vec![ix(1, 2), ix(2, 2), ix(3, 2), ix(4, 2)]
        );
        assert_eq!(supercover(ix(1, 4), ix(1, 2)), vec![ix(1, 2), ix(1, 3), ix(1, 4)]);
    }

    #[test]
    fn diagonal_includes_corner_cells() {
        assert_eq!(
            set(supercover(ix(0, 0), ix(1, 1))),
            set(vec![ix(0, 0), ix(1, 0), ix(0, 1), ix(1, 1)])
        );
    }

    #[test]
    fn shallow_slope() {
        // (0.5,0.5) -> (3.5,1.5): crosses y = 1 at x = 2, a vertical grid line
        // only at a corner -> cells (1,0),(2,0),(1,1),(2,1) around (2,1)
        let cells = set(supercover(ix(0, 0), ix(3, 1)));
        assert_eq!(
            cells,
            set(vec![ix(0, 0), ix(1, 0), ix(2, 0), ix(1, 1), ix(2, 1), ix(3, 1)])
        );
    }

    #[test]
    fn trace_lists_each_cell_once() {
        let t = trace_path(&[ix(0, 0), ix(2, 0), ix(2, 2)]);
        assert_eq!(t, vec![ix(0, 0), ix(1, 0), ix(2, 0), ix(2, 1), ix(2, 2)]);
    }

    proptest! {
        #[test]
        fn matches_dense_sampling(a in (0usize..12, 0usize..12), b in (0usize..12, 0usize..12)) {
            let (a, b) = (ix(a.0, a.1), ix(b.0, b.1));
            prop_assert_eq!(set(supercover(a, b)), sampled(a, b));
            prop_assert_eq!(set(supercover(a, b)), set(supercover(b, a)));
        }
    }
}
