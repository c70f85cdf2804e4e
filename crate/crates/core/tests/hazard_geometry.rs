mod support;

use chartroute_core::{
    plan, potential_hazards, smooth, Algorithm, GridIndex, OccupancyGrid, PlanRequest, SafetyWeightField,
    SmoothingOptions,
};

/// Wall on columns 10..=12 from the south edge up to row 12.
fn wall_grid() -> OccupancyGrid {
    let (cols, rows) = (20, 20);
    let mask = (0..cols * rows)
        .map(|i| (10..=12).contains(&(i % cols)) && i / cols <= 12)
        .collect();
    OccupancyGrid::from_mask(support::unit_spec(cols, rows), mask).unwrap()
}

#[test]
fn shallow_detour_is_hazard_free_after_strict_smoothing() {
    let grid = wall_grid();
    let weights = SafetyWeightField::compute(&grid);
    let (s, g) = (GridIndex::new(0, 11), GridIndex::new(19, 11));
    let r = plan(&grid, &weights, &PlanRequest::new(s, g, Algorithm::ImprovedAStar)).unwrap();
    let out = smooth(&r.path, &grid, &weights, SmoothingOptions { strict_safety: true }).unwrap();
    assert_eq!(potential_hazards(&out, &grid), 0);
}

/// A route that climbs beside the weighted ring and turns 90 degrees round
/// its corner keeps every node at weight 1, yet its diagonal step at the
/// turn touches a ring cell at a corner. No subsequence of the route avoids
/// that contact, so strict smoothing cannot clear the hazard.
#[test]
fn right_angle_turn_round_a_wall_end_keeps_a_corner_contact() {
    let grid = wall_grid();
    let weights = SafetyWeightField::compute(&grid);
    let (s, g) = (GridIndex::new(8, 4), GridIndex::new(14, 4));
    let r = plan(&grid, &weights, &PlanRequest::new(s, g, Algorithm::ImprovedAStar)).unwrap();
    assert!(r.path.iter().all(|idx| !weights.is_elevated(*idx)));
    let out = smooth(&r.path, &grid, &weights, SmoothingOptions { strict_safety: true }).unwrap();
    assert!(potential_hazards(&out, &grid) > 0);
}
