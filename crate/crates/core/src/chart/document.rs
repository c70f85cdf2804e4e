//! Obstacle polygon document: the canonical planner input.
//!
//! JSON layout:
//! `{"extent": {"min": [lon, lat], "max": [lon, lat]}, "polygons": [[[lon, lat], ...], ...]}`

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DocumentError {
    #[error("obstacle document schema error: {0}")]
    Schema(#[from] serde_json::Error),
    #[error("obstacle document invariant violated: {0}")]
    InvariantViolation(String),
}

/// Geographic position in decimal degrees. Serialized as `[lon, lat]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct GeoPoint {
    pub lon: f64,
    pub lat: f64,
}

impl GeoPoint {
    pub const fn new(lon: f64, lat: f64) -> Self {
        Self { lon, lat }
    }

    pub fn is_valid(&self) -> bool {
        (-180.0..=180.0).contains(&self.lon) && (-90.0..=90.0).contains(&self.lat)
    }
}

impl From<[f64; 2]> for GeoPoint {
    fn from([lon, lat]: [f64; 2]) -> Self {
        Self { lon, lat }
    }
}

impl From<GeoPoint> for [f64; 2] {
    fn from(p: GeoPoint) -> Self {
        [p.lon, p.lat]
    }
}

/// A closed ring; the last vertex implicitly connects back to the first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GeoPolygon {
    pub ring: Vec<GeoPoint>,
}

impl GeoPolygon {
    pub fn new(ring: Vec<GeoPoint>) -> Self {
        Self { ring }
    }

    /// Ring edges, including the closing edge.
    pub fn edges(&self) -> impl Iterator<Item = (GeoPoint, GeoPoint)> + '_ {
        let n = self.ring.len();
        (0..n).map(move |i| (self.ring[i], self.ring[(i + 1) % n]))
    }

    /// Even-odd containment test.
    pub fn contains(&self, p: GeoPoint) -> bool {
        let mut inside = false;
        for (a, b) in self.edges() {
            if (a.lat > p.lat) != (b.lat > p.lat) {
                let x = a.lon + (p.lat - a.lat) / (b.lat - a.lat) * (b.lon - a.lon);
                if p.lon < x {
                    inside = !inside;
                }
            }
        }
        inside
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Extent {
    pub min: GeoPoint,
    pub max: GeoPoint,
}

impl Extent {
    pub fn contains(&self, p: GeoPoint) -> bool {
        p.lon >= self.min.lon && p.lon <= self.max.lon && p.lat >= self.min.lat && p.lat <= self.max.lat
    }

    pub fn width(&self) -> f64 {
        self.max.lon - self.min.lon
    }

    pub fn height(&self) -> f64 {
        self.max.lat - self.min.lat
    }

    /// Bounding box of a point set; `None` when empty.
    pub fn bounding<'a>(points: impl IntoIterator<Item = &'a GeoPoint>) -> Option<Self> {
        let mut iter = points.into_iter();
        let first = *iter.next()?;
        Some(iter.fold(Extent { min: first, max: first }, |e, p| Extent {
            min: GeoPoint::new(e.min.lon.min(p.lon), e.min.lat.min(p.lat)),
            max: GeoPoint::new(e.max.lon.max(p.lon), e.max.lat.max(p.lat)),
        }))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObstacleDocument {
    pub extent: Extent,
    pub polygons: Vec<GeoPolygon>,
}

impl ObstacleDocument {
    pub fn validate(&self) -> Result<(), DocumentError> {
        let bad = |msg: String| Err(DocumentError::InvariantViolation(msg));
        let Extent { min, max } = self.extent;
        if !min.is_valid() || !max.is_valid() {
            return bad("extent corner outside lon [-180, 180] / lat [-90, 90]".into());
        }
        if !(min.lon < max.lon && min.lat < max.lat) {
            return bad("extent min must be below max on both axes".into());
        }
        for (i, poly) in self.polygons.iter().enumerate() {
            if poly.ring.len() < 3 {
                return bad(format!("polygon {i} has {} vertices, need at least 3", poly.ring.len()));
            }
            if let Some(p) = poly.ring.iter().find(|p| !self.extent.contains(**p)) {
                return bad(format!(
                    "polygon {i} vertex ({}, {}) lies outside the extent",
                    p.lon, p.lat
                ));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("obstacle document serializes")
    }
}

pub fn load_obstacle_document(text: &str) -> Result<ObstacleDocument, DocumentError> {
    let doc: ObstacleDocument = serde_json::from_str(text)?;
    doc.validate()?;
    Ok(doc)
}
