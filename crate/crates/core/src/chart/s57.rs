//! S-57 geometry extraction on top of the ISO 8211 container.
//!
//! Feature-to-spatial pointers are not followed. Every data record whose
//! SG2D fields carry at least three coordinates is taken as one closed
//! obstacle ring.

use thiserror::Error;

use super::document::{Extent, GeoPoint, GeoPolygon, ObstacleDocument};
use super::iso8211::{LogicalRecord, FIELD_TERMINATOR};

/// Coordinate multiplication factor used when the file carries no DSPM field.
pub const DEFAULT_COMF: f64 = 10_000_000.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum S57Error {
    #[error("SG2D payload of {len} bytes is not a whole number of (Y, X) pairs")]
    OddByteCount { len: usize },
    #[error("coordinate multiplication factor must be positive, got {0}")]
    InvalidComf(f64),
    #[error("no record yields a polygon of at least three points")]
    NoGeometry,
    #[error("obstacle coordinates span a zero-width extent")]
    DegenerateExtent,
}

/// Decode every SG2D field of `record` into geographic points, in record order.
///
/// Each SG2D payload is a run of `(Y, X)` pairs of little-endian `i32`; an
/// optional trailing field terminator is ignored.
pub fn extract_coordinates(record: &LogicalRecord, comf: f64) -> Result<Vec<GeoPoint>, S57Error> {
    if comf.is_nan() || comf <= 0.0 {
        return Err(S57Error::InvalidComf(comf));
    }
    let mut points = Vec::new();
    for payload in record.fields_tagged("SG2D") {
        let payload = payload.strip_suffix(&[FIELD_TERMINATOR]).unwrap_or(payload);
        if payload.len() % 8 != 0 {
            return Err(S57Error::OddByteCount { len: payload.len() });
        }
        points.extend(payload.chunks_exact(8).map(|pair| {
            let y = i32::from_le_bytes(pair[0..4].try_into().unwrap());
            let x = i32::from_le_bytes(pair[4..8].try_into().unwrap());
            GeoPoint::new(f64::from(x) / comf, f64::from(y) / comf)
        }));
    }
    Ok(points)
}

/// COMF from the first DSPM field found in a data record.
pub fn dataset_comf(records: &[LogicalRecord]) -> Option<f64> {
    records
        .iter()
        .filter(|r| !r.leader.is_descriptive())
        .flat_map(|r| r.fields_tagged("DSPM"))
        .find_map(|dspm| {
            let bytes: [u8; 4] = dspm.get(16..20)?.try_into().ok()?;
            let comf = u32::from_le_bytes(bytes);
            (comf > 0).then_some(f64::from(comf))
        })
}

pub fn s57_to_obstacles(records: &[LogicalRecord], comf: f64) -> Result<ObstacleDocument, S57Error> {
    let mut polygons = Vec::new();
    for record in records.iter().filter(|r| !r.leader.is_descriptive()) {
        let ring = extract_coordinates(record, comf)?;
        if ring.len() >= 3 {
            polygons.push(GeoPolygon::new(ring));
        }
    }
    let extent = Extent::bounding(polygons.iter().flat_map(|p| &p.ring)).ok_or(S57Error::NoGeometry)?;
    if extent.width() <= 0.0 || extent.height() <= 0.0 {
        return Err(S57Error::DegenerateExtent);
    }
    Ok(ObstacleDocument { extent, polygons })
}
