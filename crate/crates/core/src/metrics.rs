//! Route evaluation: sailing distance, node counts, hazards, turns.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::grid::{GridIndex, GridSpec, OccupancyGrid};
use crate::search::PlanResult;
use crate::trace::trace_path;

/// Nautical miles per degree of latitude.
pub const NM_PER_DEGREE: f64 = 60.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricsError {
    #[error("route has no nodes")]
    EmptyPath,
    #[error("compared routes come from different grids")]
    MixedGrids,
    #[error("nothing to compare")]
    NoRoutes,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RouteMetrics {
    /// Cell edge length in degrees.
    pub grid_accuracy: f64,
    pub distance_nm: f64,
    pub route_nodes: usize,
    pub expanded_nodes: usize,
    pub potential_hazards: usize,
    pub turn_count: usize,
    #[serde(skip)]
    pub grid: GridSpec,
}

/// Sum of segment lengths between cell centers, in nautical miles. East-west
/// components are scaled by the cosine of the segment's mean latitude.
pub fn route_distance_nm(path: &[GridIndex], spec: &GridSpec) -> Result<f64, MetricsError> {
    if path.is_empty() {
        return Err(MetricsError::EmptyPath);
    }
    let total = path
        .windows(2)
        .map(|pair| {
            let (a, b) = (pair[0], pair[1]);
            let d_lat = (b.row as f64 - a.row as f64) * spec.cell_size;
            let d_lon = (b.col as f64 - a.col as f64) * spec.cell_size;
            let mean_row = (a.row + b.row) as f64 / 2.0 + 0.5;
            let mean_lat = spec.origin.lat + mean_row * spec.cell_size;
            NM_PER_DEGREE * d_lat.hypot(d_lon * mean_lat.to_radians().cos())
        })
        .sum();
    Ok(total)
}

/// Distinct blocked cells within one cell (Chebyshev) of the route's trace.
pub fn potential_hazards(path: &[GridIndex], grid: &OccupancyGrid) -> usize {
    let mut hazards = BTreeSet::new();
    for cell in trace_path(path) {
        for dr in -1..=1i64 {
            for dc in -1..=1i64 {
                if let Some(n) = cell.offset(dc, dr) {
                    if grid.contains(n) && grid.is_blocked(n) {
                        hazards.insert(n);
                    }
                }
            }
        }
    }
    hazards.len()
}

fn direction(a: GridIndex, b: GridIndex) -> (i64, i64) {
    (
        (b.col as i64 - a.col as i64).signum(),
        (b.row as i64 - a.row as i64).signum(),
    )
}

/// Interior nodes where the heading's sign pattern changes.
pub fn turn_count(path: &[GridIndex]) -> usize {
    path.windows(3)
        .filter(|w| direction(w[0], w[1]) != direction(w[1], w[2]))
        .count()
}

pub fn evaluate(result: &PlanResult, path: &[GridIndex], grid: &OccupancyGrid) -> Result<RouteMetrics, MetricsError> {
    let spec = grid.spec();
    Ok(RouteMetrics {
        grid_accuracy: spec.cell_size,
        distance_nm: route_distance_nm(path, spec)?,
        route_nodes: path.len(),
        expanded_nodes: result.expanded,
        potential_hazards: potential_hazards(path, grid),
        turn_count: turn_count(path),
        grid: *spec,
    })
}

pub const ROW_LABELS: [&str; 6] = [
    "grid accuracy (degrees)",
    "sailing distance (Nautical mile)",
    "number of route nodes",
    "number of nodes traversed",
    "number of potential hazards",
    "route turn times",
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonTable {
    pub columns: Vec<String>,
    /// One row per entry of [`ROW_LABELS`], one cell per column.
    pub rows: Vec<(String, Vec<String>)>,
}

impl ComparisonTable {
    pub fn to_text(&self) -> String {
        let label_w = self.rows.iter().map(|(l, _)| l.len()).max().unwrap_or(0);
        let col_w: Vec<usize> = self
            .columns
            .iter()
            .enumerate()
            .map(|(i, c)| {
                self.rows
                    .iter()
                    .map(|(_, v)| v[i].len())
                    .chain([c.len()])
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let mut out = String::new();
        let _ = write!(out, "{:label_w$}", "");
        for (c, w) in self.columns.iter().zip(&col_w) {
            let _ = write!(out, "  {c:>w$}");
        }
        out.push('\n');
        for (label, cells) in &self.rows {
            let _ = write!(out, "{label:label_w$}");
            for (v, w) in cells.iter().zip(&col_w) {
                let _ = write!(out, "  {v:>w$}");
            }
            out.push('\n');
        }
        out
    }
}

/// Lay out metrics side by side in the fixed row order.
pub fn compare(entries: &[(String, RouteMetrics)]) -> Result<ComparisonTable, MetricsError> {
    let (_, first) = entries.first().ok_or(MetricsError::NoRoutes)?;
    if entries.iter().any(|(_, m)| m.grid != first.grid) {
        return Err(MetricsError::MixedGrids);
    }
    let row = |f: &dyn Fn(&RouteMetrics) -> String| entries.iter().map(|(_, m)| f(m)).collect::<Vec<_>>();
    let values = [
        row(&|m| format!("{}*{}", m.grid_accuracy, m.grid_accuracy)),
        row(&|m| format!("{:.2}", m.distance_nm)),
        row(&|m| m.route_nodes.to_string()),
        row(&|m| m.expanded_nodes.to_string()),
        row(&|m| m.potential_hazards.to_string()),
        row(&|m| m.turn_count.to_string()),
    ];
    Ok(ComparisonTable {
        columns: entries.iter().map(|(l, _)| l.clone()).collect(),
        rows: ROW_LABELS.iter().map(|l| l.to_string()).zip(values).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::GeoPoint;

    fn ix(c: usize, r: usize) -> GridIndex {
        GridIndex::new(c, r)
    }

    fn scs() -> GridSpec {
        GridSpec::new(GeoPoint::new(109.35, 18.10), 0.005, 100, 60).unwrap()
    }

    fn grid(cols: usize, rows: usize, blocked: &[(usize, usize)]) -> OccupancyGrid {
        let spec = GridSpec::new(GeoPoint::new(0.0, 0.0), 1.0, cols, rows).unwrap();
        let mut mask = vec![false; cols * rows];
        for &(c, r) in blocked {
            mask[r * cols + c] = true;
        }
        OccupancyGrid::from_mask(spec, mask).unwrap()
    }

    /// Haversine on a sphere whose meridian degree is 60 NM.
    fn haversine_nm(a: GeoPoint, b: GeoPoint) -> f64 {
        let r = NM_PER_DEGREE * 180.0 / std::f64::consts::PI;
        let (p1, p2) = (a.lat.to_radians(), b.lat.to_radians());
        let dp = p2 - p1;
        let dl = (b.lon - a.lon).to_radians();
        let h = (dp / 2.0).sin().powi(2) + p1.cos() * p2.cos() * (dl / 2.0).sin().powi(2);
        2.0 * r * h.sqrt().asin()
    }

    #[test]
    fn meridian_step_is_three_tenths() {
        assert_eq!(route_distance_nm(&[ix(4, 10), ix(4, 11)], &scs()).unwrap(), 0.3);
        assert_eq!(route_distance_nm(&[ix(4, 10)], &scs()).unwrap(), 0.0);
        assert_eq!(route_distance_nm(&[], &scs()), Err(MetricsError::EmptyPath));
    }

    #[test]
    fn east_west_step_at_mid_latitude() {
        // row 29 center is 18.2475; pick a spec whose row-0 center is 18.25
        let spec = GridSpec::new(GeoPoint::new(109.35, 18.2475), 0.005, 100, 60).unwrap();
        let d = route_distance_nm(&[ix(3, 0), ix(4, 0)], &spec).unwrap();
        assert!((d - 0.3 * 18.25f64.to_radians().cos()).abs() < 1e-12);
        let (a, b) = (spec.cell_center(ix(3, 0)).unwrap(), spec.cell_center(ix(4, 0)).unwrap());
        assert!((d - haversine_nm(a, b)).abs() / d < 1e-3);
    }

    #[test]
    fn distance_is_reversal_invariant() {
        let path = [ix(0, 0), ix(1, 1), ix(2, 1), ix(5, 7)];
        let rev: Vec<_> = path.iter().rev().copied().collect();
        let (f, r) = (
            route_distance_nm(&path, &scs()).unwrap(),
            route_distance_nm(&rev, &scs()).unwrap(),
        );
        assert!((f - r).abs() < 1e-12);
    }

    #[test]
    fn hazards() {
        let open = grid(6, 6, &[]);
        assert_eq!(potential_hazards(&[ix(0, 2), ix(5, 2)], &open), 0);
        let single = grid(6, 6, &[(3, 3)]);
        assert_eq!(potential_hazards(&[ix(0, 2), ix(5, 2)], &single), 1);
        // wall of three cells along row 3, route along row 2
        let wall = grid(6, 6, &[(1, 3), (2, 3), (3, 3)]);
        assert_eq!(
            potential_hazards(&[ix(0, 2), ix(1, 2), ix(2, 2), ix(3, 2), ix(4, 2), ix(5, 2)], &wall),
            3
        );
        // the smoothed form of the same route sees the same wall
        assert_eq!(potential_hazards(&[ix(0, 2), ix(5, 2)], &wall), 3);
    }

    #[test]
    fn turns() {
        assert_eq!(turn_count(&[ix(0, 0), ix(1, 0), ix(2, 0)]), 0);
        assert_eq!(turn_count(&[ix(0, 0), ix(1, 0), ix(1, 1)]), 1);
        assert_eq!(turn_count(&[ix(0, 0), ix(1, 1), ix(2, 0), ix(3, 1)]), 2);
        assert_eq!(turn_count(&[ix(0, 0)]), 0);
    }

    fn metrics(spec: GridSpec) -> RouteMetrics {
        RouteMetrics {
            grid_accuracy: spec.cell_size,
            distance_nm: 35.4812,
            route_nodes: 97,
            expanded_nodes: 3186,
            potential_hazards: 32,
            turn_count: 13,
            grid: spec,
        }
    }

    #[test]
    fn comparison_layout() {
        let m = metrics(scs());
        let one = compare(&[("dijkstra".into(), m)]).unwrap();
        assert_eq!(one.columns, vec!["dijkstra"]);
        assert_eq!(one.rows.len(), 6);
        assert_eq!(one.rows[0].1, vec!["0.005*0.005"]);
        assert_eq!(one.rows[1].1, vec!["35.48"]);

        let three = compare(&[("dijkstra".into(), m), ("astar".into(), m), ("improved".into(), m)]).unwrap();
        let labels: Vec<_> = three.rows.iter().map(|(l, _)| l.as_str()).collect();
        assert_eq!(labels, ROW_LABELS);
        assert!(three.rows.iter().all(|(_, v)| v.len() == 3));
        let text = three.to_text();
        assert_eq!(text.lines().count(), 7);
        assert!(text.lines().nth(4).unwrap().starts_with("number of nodes traversed"));
    }

    #[test]
    fn mixed_grids_rejected() {
        let other = GridSpec::new(GeoPoint::new(0.0, 0.0), 0.01, 10, 10).unwrap();
        let err = compare(&[("a".into(), metrics(scs())), ("b".into(), metrics(other))]).unwrap_err();
        assert_eq!(err, MetricsError::MixedGrids);
        assert_eq!(compare(&[]).unwrap_err(), MetricsError::NoRoutes);
    }
}
