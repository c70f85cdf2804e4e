//! Best-first route planners over the occupancy grid.
//!
//! Dijkstra, plain A* and the pilot-quantity A* share one search core and
//! differ only in the heuristic. The queue is a binary heap with lazy
//! deletion: an improved cost re-inserts the node and stale entries are
//! skipped when popped, which also lets a node be re-expanded if a cheaper
//! route to it turns up later.

mod cost;

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grid::weights::MOORE;
use crate::grid::{GridIndex, OccupancyGrid, SafetyWeightField};

pub use cost::SailingCost;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("no navigable route from {start:?} to {goal:?}")]
    NoPath { start: GridIndex, goal: GridIndex },
    #[error("{which} cell {idx:?} is blocked or off the grid")]
    InvalidEndpoint { which: &'static str, idx: GridIndex },
    #[error("start and goal coincide, the start-goal baseline is undefined")]
    DegenerateBaseline,
    #[error("cells {from:?} and {to:?} are not 8-neighbors")]
    NotAdjacent { from: GridIndex, to: GridIndex },
    #[error("weight field does not match the grid layout")]
    MismatchedWeights,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Dijkstra,
    #[serde(rename = "astar")]
    AStar,
    #[serde(rename = "improved")]
    ImprovedAStar,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::Dijkstra, Algorithm::AStar, Algorithm::ImprovedAStar];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Dijkstra => "dijkstra",
            Algorithm::AStar => "astar",
            Algorithm::ImprovedAStar => "improved",
        }
    }

    /// Baselines run on plain distance, the improved planner on weighted cost.
    pub fn default_cost_model(self) -> CostModel {
        match self {
            Algorithm::ImprovedAStar => CostModel::SafetyWeighted,
            _ => CostModel::PlainDistance,
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "dijkstra" => Ok(Algorithm::Dijkstra),
            "astar" => Ok(Algorithm::AStar),
            "improved" => Ok(Algorithm::ImprovedAStar),
            other => Err(format!(
                "unknown algorithm {other:?} (expected dijkstra, astar or improved)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CostModel {
    /// Step length only.
    #[serde(rename = "plain")]
    PlainDistance,
    /// Step length times the safety weight of the cell entered.
    #[serde(rename = "weighted")]
    SafetyWeighted,
}

impl CostModel {
    pub fn name(self) -> &'static str {
        match self {
            CostModel::PlainDistance => "plain",
            CostModel::SafetyWeighted => "weighted",
        }
    }
}

impl FromStr for CostModel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "plain" => Ok(CostModel::PlainDistance),
            "weighted" => Ok(CostModel::SafetyWeighted),
            other => Err(format!("unknown cost model {other:?} (expected plain or weighted)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PlanRequest {
    pub start: GridIndex,
    pub goal: GridIndex,
    pub algorithm: Algorithm,
    pub cost_model: CostModel,
}

impl PlanRequest {
    pub fn new(start: GridIndex, goal: GridIndex, algorithm: Algorithm) -> Self {
        Self {
            start,
            goal,
            algorithm,
            cost_model: algorithm.default_cost_model(),
        }
    }

    pub fn with_cost(mut self, cost_model: CostModel) -> Self {
        self.cost_model = cost_model;
        self
    }
}

/// A queue entry: `f = g + h`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchNode {
    pub idx: GridIndex,
    pub g: SailingCost,
    pub h: f64,
    pub f: f64,
    pub parent: Option<GridIndex>,
    seq: u64,
}

impl Eq for SearchNode {}

impl Ord for SearchNode {
    // BinaryHeap is a max-heap; the smallest f (then h, then insertion
    // order) must compare greatest.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .f
            .total_cmp(&self.f)
            .then_with(|| other.h.total_cmp(&self.h))
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

impl PartialOrd for SearchNode {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlanResult {
    pub path: Vec<GridIndex>,
    pub total_cost: f64,
    pub cost: SailingCost,
    /// Nodes popped and expanded, counting re-expansions.
    pub expanded: usize,
    /// Distinct nodes ever placed on the queue.
    pub generated: usize,
}

impl PlanResult {
    /// Check the path against the result invariants: endpoints, adjacency,
    /// navigability, and cost consistency with `step_cost`.
    pub fn verify(&self, grid: &OccupancyGrid, weights: &SafetyWeightField, req: &PlanRequest) -> Result<(), String> {
        if self.path.first() != Some(&req.start) || self.path.last() != Some(&req.goal) {
            return Err("path does not run from start to goal".into());
        }
        if let Some(idx) = self.path.iter().find(|idx| grid.is_blocked(**idx)) {
            return Err(format!("path enters blocked cell {idx:?}"));
        }
        let mut sum = 0.0;
        for pair in self.path.windows(2) {
            sum += step_cost(pair[0], pair[1], req.cost_model, weights).map_err(|e| e.to_string())?;
            if pair[0].col != pair[1].col && pair[0].row != pair[1].row {
                let side_a = GridIndex::new(pair[1].col, pair[0].row);
                let side_b = GridIndex::new(pair[0].col, pair[1].row);
                if grid.is_blocked(side_a) || grid.is_blocked(side_b) {
                    return Err(format!(
                        "diagonal step {:?} -> {:?} cuts a blocked corner",
                        pair[0], pair[1]
                    ));
                }
            }
        }
        if (sum - self.total_cost).abs() > 1e-9 * sum.max(1.0) {
            return Err(format!("total cost {} differs from step sum {sum}", self.total_cost));
        }
        Ok(())
    }
}

/// Navigable Moore neighbors in N, NE, E, SE, S, SW, W, NW order.
/// Diagonals are dropped when either orthogonal side cell is blocked.
pub fn neighbors(grid: &OccupancyGrid, idx: GridIndex) -> Vec<GridIndex> {
    let mut out = Vec::with_capacity(8);
    push_neighbors(grid, idx, &mut out);
    out
}

fn push_neighbors(grid: &OccupancyGrid, idx: GridIndex, out: &mut Vec<GridIndex>) {
    let (c, r) = (idx.col as i64, idx.row as i64);
    for &(dc, dr) in &MOORE {
        if grid.is_blocked_at(c + dc, r + dr) {
            continue;
        }
        if dc != 0 && dr != 0 && (grid.is_blocked_at(c + dc, r) || grid.is_blocked_at(c, r + dr)) {
            continue;
        }
        out.push(GridIndex::new((c + dc) as usize, (r + dr) as usize));
    }
}

fn exact_step(
    from: GridIndex,
    to: GridIndex,
    model: CostModel,
    weights: &SafetyWeightField,
) -> Result<SailingCost, SearchError> {
    if !from.is_adjacent(to) {
        return Err(SearchError::NotAdjacent { from, to });
    }
    let diagonal = from.col != to.col && from.row != to.row;
    let halves = match model {
        CostModel::PlainDistance => 2,
        CostModel::SafetyWeighted => weights.weight_halves(to).unwrap_or(u32::MAX),
    };
    Ok(SailingCost::step(diagonal, halves))
}

/// Cost of one move: cell-unit distance (1 or sqrt 2), times the safety
/// weight of `to` under [`CostModel::SafetyWeighted`].
pub fn step_cost(
    from: GridIndex,
    to: GridIndex,
    model: CostModel,
    weights: &SafetyWeightField,
) -> Result<f64, SearchError> {
    let dist = if from.col != to.col && from.row != to.row {
        std::f64::consts::SQRT_2
    } else {
        1.0
    };
    exact_step(from, to, model, weights)?;
    Ok(match model {
        CostModel::PlainDistance => dist,
        CostModel::SafetyWeighted => dist * weights.weight(to),
    })
}

fn euclid(a: GridIndex, b: GridIndex) -> f64 {
    let dx = a.col as f64 - b.col as f64;
    let dy = a.row as f64 - b.row as f64;
    dx.hypot(dy)
}

/// Sine of the angle at `goal` between the start-goal and node-goal vectors,
/// `|(C - G) x (S - G)| / (|C - G| |S - G|)`, clamped to [0, 1]. Zero at the goal.
pub fn cross_sine(start: GridIndex, goal: GridIndex, node: GridIndex) -> Result<f64, SearchError> {
    if start == goal {
        return Err(SearchError::DegenerateBaseline);
    }
    if node == goal {
        return Ok(0.0);
    }
    let (gx, gy) = (goal.col as f64, goal.row as f64);
    let (cx, cy) = (node.col as f64 - gx, node.row as f64 - gy);
    let (sx, sy) = (start.col as f64 - gx, start.row as f64 - gy);
    let cross = cx * sy - sx * cy;
    Ok((cross.abs() / (cx.hypot(cy) * sx.hypot(sy))).clamp(0.0, 1.0))
}

/// Pilot quantity `3 / (4 - sin theta)`, in [0.75, 1].
pub fn pilot_quantity(sin_theta: f64) -> f64 {
    3.0 / (4.0 - sin_theta)
}

/// Euclidean distance to the goal scaled by the pilot quantity.
pub fn heuristic_improved(node: GridIndex, start: GridIndex, goal: GridIndex) -> Result<f64, SearchError> {
    Ok(euclid(node, goal) * pilot_quantity(cross_sine(start, goal, node)?))
}

pub fn heuristic_plain(node: GridIndex, goal: GridIndex) -> f64 {
    euclid(node, goal)
}

pub fn plan(grid: &OccupancyGrid, weights: &SafetyWeightField, req: &PlanRequest) -> Result<PlanResult, SearchError> {
    plan_observed(grid, weights, req, |_| {})
}

/// [`plan`], calling `observe` with every node as it is expanded.
pub fn plan_observed(
    grid: &OccupancyGrid,
    weights: &SafetyWeightField,
    req: &PlanRequest,
    mut observe: impl FnMut(&SearchNode),
) -> Result<PlanResult, SearchError> {
    if weights.spec().cols != grid.cols() || weights.spec().rows != grid.rows() {
        return Err(SearchError::MismatchedWeights);
    }
    for (which, idx) in [("start", req.start), ("goal", req.goal)] {
        if grid.is_blocked(idx) {
            return Err(SearchError::InvalidEndpoint { which, idx });
        }
    }

    let spec = *grid.spec();
    let (start, goal) = (req.start, req.goal);
    let heuristic = |idx: GridIndex| -> f64 {
        match req.algorithm {
            Algorithm::Dijkstra => 0.0,
            Algorithm::AStar => heuristic_plain(idx, goal),
            // start != goal here: the start == goal case returns on the first pop
            Algorithm::ImprovedAStar if start == goal => 0.0,
            Algorithm::ImprovedAStar => heuristic_improved(idx, start, goal).expect("start differs from goal"),
        }
    };

    let mut best: Vec<Option<SailingCost>> = vec![None; spec.cell_count()];
    let mut parent: Vec<Option<GridIndex>> = vec![None; spec.cell_count()];
    let mut heap = BinaryHeap::new();
    let mut seq = 0u64;
    let mut expanded = 0usize;
    let mut generated = 1usize;
    let mut scratch = Vec::with_capacity(8);

    let h0 = heuristic(start);
    best[spec.linear(start)] = Some(SailingCost::ZERO);
    heap.push(SearchNode {
        idx: start,
        g: SailingCost::ZERO,
        h: h0,
        f: h0,
        parent: None,
        seq,
    });

    while let Some(node) = heap.pop() {
        if best[spec.linear(node.idx)] != Some(node.g) {
            continue;
        }
        expanded += 1;
        observe(&node);

        if node.idx == goal {
            let mut path = vec![goal];
            let mut cur = goal;
            while let Some(p) = parent[spec.linear(cur)] {
                path.push(p);
                cur = p;
            }
            path.reverse();
            return Ok(PlanResult {
                path,
                total_cost: node.g.to_f64(),
                cost: node.g,
                expanded,
                generated,
            });
        }

        scratch.clear();
        push_neighbors(grid, node.idx, &mut scratch);
        for &next in &scratch {
            let g = node.g + exact_step(node.idx, next, req.cost_model, weights)?;
            let slot = &mut best[spec.linear(next)];
            if slot.is_some_and(|old| g >= old) {
                continue;
            }
            if slot.is_none() {
                generated += 1;
            }
            *slot = Some(g);
            parent[spec.linear(next)] = Some(node.idx);
            let h = heuristic(next);
            seq += 1;
            heap.push(SearchNode {
                idx: next,
                g,
                h,
                f: g.to_f64() + h,
                parent: Some(node.idx),
                seq,
            });
        }
    }
    Err(SearchError::NoPath { start, goal })
}
