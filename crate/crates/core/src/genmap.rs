//! Seeded synthetic archipelagos for desk-scale experiments.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::chart::{Extent, GeoPoint, GeoPolygon, ObstacleDocument};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GenMapError {
    #[error("map needs at least one row and column and a positive cell size")]
    EmptyMap,
    #[error("{islands} islands of radius {radius} cells cannot fit a {cols}x{rows} map")]
    IslandsCoverExtent {
        islands: usize,
        radius: f64,
        cols: usize,
        rows: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenMapParams {
    pub seed: u64,
    pub cols: usize,
    pub rows: usize,
    pub islands: usize,
    /// Largest island radius, in cells.
    pub radius: f64,
    pub origin: GeoPoint,
    pub cell_size: f64,
}

/// Island centers stay this many cells clear of the map edge, beyond their radius.
const EDGE_MARGIN: f64 = 2.0;

impl GenMapParams {
    pub fn new(seed: u64, cols: usize, rows: usize, islands: usize) -> Self {
        Self {
            seed,
            cols,
            rows,
            islands,
            radius: 6.0,
            origin: GeoPoint::new(109.35, 18.10),
            cell_size: 0.005,
        }
    }
}

/// Round to 9 significant digits, the precision of every emitted number.
pub fn round_sig9(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.8e}").parse().expect("formatted float parses")
}

/// Generate convex polygon islands at random positions. Identical
/// parameters give identical documents.
pub fn generate(p: &GenMapParams) -> Result<ObstacleDocument, GenMapError> {
    if p.cols == 0 || p.rows == 0 || p.cell_size.is_nan() || p.cell_size <= 0.0 {
        return Err(GenMapError::EmptyMap);
    }
    let (w, h) = (p.cols as f64, p.rows as f64);
    let too_big = || GenMapError::IslandsCoverExtent {
        islands: p.islands,
        radius: p.radius,
        cols: p.cols,
        rows: p.rows,
    };
    if p.islands > 0 {
        if p.radius.is_nan() || p.radius <= 0.0 || 2.0 * (p.radius + EDGE_MARGIN) >= w.min(h) {
            return Err(too_big());
        }
        if p.islands as f64 * std::f64::consts::PI * p.radius * p.radius > 0.5 * w * h {
            return Err(too_big());
        }
    }

    let to_geo = |x: f64, y: f64| {
        GeoPoint::new(
            round_sig9(p.origin.lon + x * p.cell_size),
            round_sig9(p.origin.lat + y * p.cell_size),
        )
    };
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let polygons = (0..p.islands)
        .map(|_| {
            let r = p.radius * rng.gen_range(0.5..=1.0);
            let cx = rng.gen_range(EDGE_MARGIN + r..=w - EDGE_MARGIN - r);
            let cy = rng.gen_range(EDGE_MARGIN + r..=h - EDGE_MARGIN - r);
            let n = rng.gen_range(5..=9usize);
            let phase = rng.gen_range(0.0..TAU);
            // one vertex per angular sector keeps the angles increasing, and
            // equal radii keep the ring convex
            let ring = (0..n)
                .map(|i| {
                    let theta = phase + (i as f64 + rng.gen_range(0.0..0.8)) * TAU / n as f64;
                    to_geo(cx + r * theta.cos(), cy + r * theta.sin())
                })
                .collect();
            GeoPolygon::new(ring)
        })
        .collect();

    Ok(ObstacleDocument {
        extent: Extent {
            min: to_geo(0.0, 0.0),
            max: to_geo(w, h),
        },
        polygons,
    })
}
