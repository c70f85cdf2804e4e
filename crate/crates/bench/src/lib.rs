//! Shared fixtures for the planning benchmarks.

use chartroute_core::genmap::{generate, GenMapParams};
use chartroute_core::{
    plan, rasterize, Algorithm, GridIndex, ObstacleDocument, OccupancyGrid, PlanRequest, RasterOptions,
    SafetyWeightField,
};

pub struct Scenario {
    pub doc: ObstacleDocument,
    pub grid: OccupancyGrid,
    pub weights: SafetyWeightField,
    pub start: GridIndex,
    pub goal: GridIndex,
}

/// Seeded 100x60 archipelago at 0.005 degrees with corner-to-corner endpoints.
pub fn archipelago(seed: u64) -> Scenario {
    let doc = generate(&GenMapParams::new(seed, 100, 60, 8)).expect("default map parameters fit");
    let grid = rasterize(&doc, 0.005, RasterOptions::default()).expect("100x60 grid is within limits");
    let weights = SafetyWeightField::compute(&grid);
    let start = nearest_open(&grid, GridIndex::new(2, 2));
    let goal = nearest_open(&grid, GridIndex::new(97, 57));
    Scenario {
        doc,
        grid,
        weights,
        start,
        goal,
    }
}

fn nearest_open(grid: &OccupancyGrid, at: GridIndex) -> GridIndex {
    grid.spec()
        .indices()
        .filter(|i| grid.is_navigable(*i))
        .min_by_key(|i| i.col.abs_diff(at.col).pow(2) + i.row.abs_diff(at.row).pow(2))
        .expect("map has open water")
}

impl Scenario {
    pub fn request(&self, algorithm: Algorithm) -> PlanRequest {
        PlanRequest::new(self.start, self.goal, algorithm)
    }

    pub fn raw_path(&self, algorithm: Algorithm) -> Vec<GridIndex> {
        plan(&self.grid, &self.weights, &self.request(algorithm))
            .expect("archipelago is connected")
            .path
    }
}
