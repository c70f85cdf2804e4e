//! Test-only reference implementations. Nothing here calls the planner,
//! the weight field or the cost type under test.
#![allow(dead_code)]

use std::cmp::Ordering;

use chartroute_core::{GeoPoint, GridIndex, GridSpec, OccupancyGrid};
use rand::Rng;

/// `(a + b * sqrt 2) / 2`, with integer parts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Exact {
    pub a: i64,
    pub b: i64,
}

impl Exact {
    pub const ZERO: Exact = Exact { a: 0, b: 0 };

    pub fn plus(self, o: Exact) -> Exact {
        Exact {
            a: self.a + o.a,
            b: self.b + o.b,
        }
    }

    pub fn value(self) -> f64 {
        (self.a as f64 + self.b as f64 * std::f64::consts::SQRT_2) / 2.0
    }

    /// Exact comparison of `a1 + b1 sqrt2` against `a2 + b2 sqrt2`.
    pub fn compare(self, o: Exact) -> Ordering {
        let x = (self.a - o.a) as i128; // compare x with y * sqrt2
        let y = (o.b - self.b) as i128;
        if x == 0 && y == 0 {
            return Ordering::Equal;
        }
        if x >= 0 && y <= 0 {
            return Ordering::Greater;
        }
        if x <= 0 && y >= 0 {
            return Ordering::Less;
        }
        if x > 0 {
            (x * x).cmp(&(2 * y * y))
        } else {
            (2 * y * y).cmp(&(x * x))
        }
    }
}

pub fn unit_spec(cols: usize, rows: usize) -> GridSpec {
    GridSpec::new(GeoPoint::new(109.35, 18.10), 0.005, cols, rows).unwrap()
}

/// Random obstacle field: scattered cells plus a few rectangular blocks.
pub fn random_grid(rng: &mut impl Rng, cols: usize, rows: usize) -> OccupancyGrid {
    let density = rng.gen_range(0.05..0.3);
    let mut mask: Vec<bool> = (0..cols * rows).map(|_| rng.gen_bool(density)).collect();
    for _ in 0..rng.gen_range(0..4) {
        let (w, h) = (rng.gen_range(1..=cols.div_ceil(3)), rng.gen_range(1..=rows.div_ceil(3)));
        let (c0, r0) = (rng.gen_range(0..=cols - w), rng.gen_range(0..=rows - h));
        for r in r0..r0 + h {
            for c in c0..c0 + w {
                mask[r * cols + c] = true;
            }
        }
    }
    OccupancyGrid::from_mask(unit_spec(cols, rows), mask).unwrap()
}

pub fn random_open_cell(rng: &mut impl Rng, grid: &OccupancyGrid) -> Option<GridIndex> {
    let open: Vec<GridIndex> = grid.spec().indices().filter(|i| !grid.is_blocked(*i)).collect();
    (!open.is_empty()).then(|| open[rng.gen_range(0..open.len())])
}

fn blocked(grid: &OccupancyGrid, c: i64, r: i64) -> bool {
    c < 0
        || r < 0
        || c >= grid.cols() as i64
        || r >= grid.rows() as i64
        || grid.mask()[r as usize * grid.cols() + c as usize]
}

/// Blocked Moore neighbors, counting off-grid cells as blocked.
pub fn naive_count(grid: &OccupancyGrid, idx: GridIndex) -> u32 {
    let (c, r) = (idx.col as i64, idx.row as i64);
    let mut n = 0;
    for dr in -1..=1 {
        for dc in -1..=1 {
            if (dc, dr) != (0, 0) && blocked(grid, c + dc, r + dr) {
                n += 1;
            }
        }
    }
    n
}

/// Twice the safety weight: `2` for no blocked neighbors, else `2 + 2^(n-1)`.
pub fn naive_weight_halves(grid: &OccupancyGrid, idx: GridIndex) -> i64 {
    match naive_count(grid, idx) {
        0 => 2,
        n => 2 + (1i64 << (n - 1)),
    }
}

/// Legal moves between two in-grid cells: both navigable, adjacent, and a
/// diagonal needs both side cells navigable.
pub fn legal_move(grid: &OccupancyGrid, from: GridIndex, to: GridIndex) -> bool {
    let (fc, fr, tc, tr) = (from.col as i64, from.row as i64, to.col as i64, to.row as i64);
    let (dc, dr) = (tc - fc, tr - fr);
    if (dc, dr) == (0, 0) || dc.abs() > 1 || dr.abs() > 1 || blocked(grid, fc, fr) || blocked(grid, tc, tr) {
        return false;
    }
    dc == 0 || dr == 0 || (!blocked(grid, tc, fr) && !blocked(grid, fc, tr))
}

pub fn move_cost(grid: &OccupancyGrid, from: GridIndex, to: GridIndex, weighted: bool) -> Exact {
    let h = if weighted { naive_weight_halves(grid, to) } else { 2 };
    if from.col != to.col && from.row != to.row {
        Exact { a: 0, b: h }
    } else {
        Exact { a: h, b: 0 }
    }
}

/// Cost from every cell to `goal` (None when unreachable). Quadratic
/// selection, no heap, so it shares nothing with the planner's queue.
pub fn cost_to_goal(grid: &OccupancyGrid, goal: GridIndex, weighted: bool) -> Vec<Option<Exact>> {
    let (cols, rows) = (grid.cols(), grid.rows());
    let n = cols * rows;
    let at = |i: usize| GridIndex::new(i % cols, i / cols);
    let mut dist: Vec<Option<Exact>> = vec![None; n];
    let mut done = vec![false; n];
    dist[goal.row * cols + goal.col] = Some(Exact::ZERO);
    loop {
        let mut best: Option<usize> = None;
        for i in 0..n {
            if done[i] {
                continue;
            }
            if let Some(d) = dist[i] {
                if best.is_none_or(|b| d.compare(dist[b].unwrap()) == Ordering::Less) {
                    best = Some(i);
                }
            }
        }
        let Some(v) = best else { break };
        done[v] = true;
        let dv = dist[v].unwrap();
        let vi = at(v);
        for dr in -1i64..=1 {
            for dc in -1i64..=1 {
                let (c, r) = (vi.col as i64 + dc, vi.row as i64 + dr);
                if c < 0 || r < 0 || c >= cols as i64 || r >= rows as i64 {
                    continue;
                }
                let u = GridIndex::new(c as usize, r as usize);
                if !legal_move(grid, u, vi) {
                    continue;
                }
                // the reversed edge u -> v pays for entering v
                let cand = dv.plus(move_cost(grid, u, vi, weighted));
                let ui = u.row * cols + u.col;
                if !done[ui] && dist[ui].is_none_or(|d| cand.compare(d) == Ordering::Less) {
                    dist[ui] = Some(cand);
                }
            }
        }
    }
    dist
}

pub fn polyline_length(path: &[GridIndex]) -> f64 {
    path.windows(2)
        .map(|w| (w[0].col as f64 - w[1].col as f64).hypot(w[0].row as f64 - w[1].row as f64))
        .sum()
}
