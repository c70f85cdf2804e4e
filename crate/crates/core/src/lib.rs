//! Marine global route planning on electronic-chart obstacle data.
//!
//! The pipeline is: chart ingestion ([`chart`]) → occupancy grid and
//! sailing safety weights ([`grid`]) → best-first planning ([`search`]) →
//! line-of-sight smoothing ([`smoothing`]) → route metrics ([`metrics`]).

pub mod chart;
pub mod genmap;
pub mod grid;
pub mod metrics;
pub mod search;
pub mod smoothing;
pub mod trace;

pub use chart::{load_obstacle_document, Extent, GeoPoint, GeoPolygon, ObstacleDocument};
pub use grid::{
    blocked_neighbor_count, rasterize, rasterize_region, safety_weight, GridError, GridIndex, GridSpec, OccupancyGrid,
    RasterOptions, SafetyWeightField,
};
pub use metrics::{evaluate, potential_hazards, route_distance_nm, turn_count, RouteMetrics};
pub use search::{plan, Algorithm, CostModel, PlanRequest, PlanResult, SailingCost, SearchError};
pub use smoothing::{line_of_sight, smooth, SmoothingOptions};
