use super::{GridError, GridIndex, GridSpec, OccupancyGrid};
use crate::chart::{Extent, GeoPolygon, ObstacleDocument};

pub const DEFAULT_MAX_CELLS: usize = 16_777_216;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RasterOptions {
    pub max_cells: usize,
}

impl Default for RasterOptions {
    fn default() -> Self {
        Self {
            max_cells: DEFAULT_MAX_CELLS,
        }
    }
}

/// Point in cell units: `x = (lon - origin.lon) / cell_size`.
#[derive(Debug, Clone, Copy)]
struct P {
    x: f64,
    y: f64,
}

/// Rasterize obstacle polygons over the document extent.
///
/// A cell is blocked when any polygon overlaps the open interior of its
/// rectangle: either the cell center lies inside the polygon or a polygon
/// edge passes through the cell. Cells that only share a boundary line or
/// corner with a polygon stay navigable.
///
/// The region is the rectangular document extent, so every cell of the
/// bounding rectangle belongs to it and the padding rule (cells outside the
/// region are obstacles) blocks nothing extra.
pub fn rasterize(doc: &ObstacleDocument, cell_size: f64, opts: RasterOptions) -> Result<OccupancyGrid, GridError> {
    rasterize_region(&doc.polygons, &doc.extent, cell_size, opts)
}

/// Rasterize polygons over an explicit region instead of a document extent.
pub fn rasterize_region(
    polygons: &[GeoPolygon],
    extent: &Extent,
    cell_size: f64,
    opts: RasterOptions,
) -> Result<OccupancyGrid, GridError> {
    if !(cell_size > 0.0 && cell_size.is_finite()) {
        return Err(GridError::InvalidCellSize(cell_size));
    }
    let spec = GridSpec::covering(extent, cell_size)?;
    if spec.cols.checked_mul(spec.rows).is_none_or(|n| n > opts.max_cells) {
        return Err(GridError::GridTooLarge {
            cols: spec.cols,
            rows: spec.rows,
            limit: opts.max_cells,
        });
    }
    Ok(rasterize_onto(spec, polygons))
}

/// Rasterize polygons onto an existing grid layout. Polygon parts outside
/// the grid are ignored.
pub(crate) fn rasterize_onto(spec: GridSpec, polygons: &[GeoPolygon]) -> OccupancyGrid {
    let mut blocked = vec![false; spec.cell_count()];
    for poly in polygons {
        let ring: Vec<P> = poly
            .ring
            .iter()
            .map(|g| P {
                x: (g.lon - spec.origin.lon) / spec.cell_size,
                y: (g.lat - spec.origin.lat) / spec.cell_size,
            })
            .collect();
        if ring.is_empty() {
            continue;
        }
        mark_edges(&spec, &ring, &mut blocked);
        fill_centers(&spec, &ring, &mut blocked);
    }
    OccupancyGrid { spec, blocked }
}

fn edges(ring: &[P]) -> impl Iterator<Item = (P, P)> + '_ {
    (0..ring.len()).map(move |i| (ring[i], ring[(i + 1) % ring.len()]))
}

fn clamp_range(lo: f64, hi: f64, n: usize) -> Option<(usize, usize)> {
    let lo = lo.max(0.0);
    let hi = hi.min(n as f64 - 1.0);
    (lo <= hi).then_some((lo as usize, hi as usize))
}

/// Clip `a -> b` to the closed box, returning the parameter interval.
fn clip(a: P, b: P, x0: f64, x1: f64, y0: f64, y1: f64) -> Option<(f64, f64)> {
    let (dx, dy) = (b.x - a.x, b.y - a.y);
    let mut t0: f64 = 0.0;
    let mut t1: f64 = 1.0;
    for (p, q) in [(-dx, a.x - x0), (dx, x1 - a.x), (-dy, a.y - y0), (dy, y1 - a.y)] {
        if p == 0.0 {
            if q < 0.0 {
                return None;
            }
        } else {
            let r = q / p;
            if p < 0.0 {
                t0 = t0.max(r);
            } else {
                t1 = t1.min(r);
            }
        }
    }
    (t0 <= t1).then_some((t0, t1))
}

/// Whether segment `a -> b` has a point strictly inside cell `(c, r)`.
///
/// The clipped chord of a convex box either lies on one side of the box or
/// has its midpoint in the interior, so testing the midpoint is exact.
fn touches_interior(a: P, b: P, c: usize, r: usize) -> bool {
    let (x0, y0) = (c as f64, r as f64);
    let Some((t0, t1)) = clip(a, b, x0, x0 + 1.0, y0, y0 + 1.0) else {
        return false;
    };
    let t = 0.5 * (t0 + t1);
    let x = a.x + t * (b.x - a.x);
    let y = a.y + t * (b.y - a.y);
    x > x0 && x < x0 + 1.0 && y > y0 && y < y0 + 1.0
}

fn mark_edges(spec: &GridSpec, ring: &[P], blocked: &mut [bool]) {
    for (a, b) in edges(ring) {
        let Some((r_lo, r_hi)) = clamp_range(a.y.min(b.y).floor() - 1.0, a.y.max(b.y).floor(), spec.rows) else {
            continue;
        };
        for r in r_lo..=r_hi {
            let Some((t0, t1)) = clip(a, b, f64::NEG_INFINITY, f64::INFINITY, r as f64, r as f64 + 1.0) else {
                continue;
            };
            let xa = a.x + t0 * (b.x - a.x);
            let xb = a.x + t1 * (b.x - a.x);
            let Some((c_lo, c_hi)) = clamp_range(xa.min(xb).floor() - 1.0, xa.max(xb).floor(), spec.cols) else {
                continue;
            };
            for c in c_lo..=c_hi {
                if touches_interior(a, b, c, r) {
                    blocked[spec.linear(GridIndex::new(c, r))] = true;
                }
            }
        }
    }
}

/// Even-odd scanline fill at each row's center line.
fn fill_centers(spec: &GridSpec, ring: &[P], blocked: &mut [bool]) {
    let (y_min, y_max) = ring.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
        (lo.min(p.y), hi.max(p.y))
    });
    let Some((r_lo, r_hi)) = clamp_range((y_min - 0.5).floor(), (y_max - 0.5).ceil(), spec.rows) else {
        return;
    };
    let mut crossings = Vec::new();
    for r in r_lo..=r_hi {
        let yc = r as f64 + 0.5;
        crossings.clear();
        crossings.extend(
            edges(ring)
                .filter(|(a, b)| (a.y > yc) != (b.y > yc))
                .map(|(a, b)| a.x + (yc - a.y) / (b.y - a.y) * (b.x - a.x)),
        );
        crossings.sort_by(f64::total_cmp);
        for pair in crossings.chunks_exact(2) {
            let Some((c_lo, c_hi)) = clamp_range((pair[0] - 0.5).floor(), (pair[1] - 0.5).ceil(), spec.cols) else {
                continue;
            };
            for c in c_lo..=c_hi {
                let xc = c as f64 + 0.5;
                if xc > pair[0] && xc < pair[1] {
                    blocked[spec.linear(GridIndex::new(c, r))] = true;
                }
            }
        }
    }
}
