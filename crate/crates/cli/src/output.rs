//! File artifacts: JSON with fixed float precision, atomic writes, graymaps.

use std::io::Write;
use std::path::Path;

use chartroute_core::genmap::round_sig9;
use chartroute_core::trace::trace_path;
use chartroute_core::{GridIndex, OccupancyGrid, SafetyWeightField};
use serde::Serialize;
use serde_json::Value;
use tempfile::NamedTempFile;

pub const PGM_BLOCKED: u8 = 0;
pub const PGM_FREE: u8 = 255;
pub const PGM_WEIGHTED: u8 = 180;
pub const PGM_RAW_ROUTE: u8 = 100;
pub const PGM_SMOOTHED_ROUTE: u8 = 30;

/// Pretty JSON with every float rounded to 9 significant digits. Object
/// keys come out sorted.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut v = serde_json::to_value(value).expect("output types serialize");
    round_floats(&mut v);
    let mut s = serde_json::to_string_pretty(&v).expect("json value serializes");
    s.push('\n');
    s
}

fn round_floats(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().expect("checked f64");
            if let Some(r) = serde_json::Number::from_f64(round_sig9(x)) {
                *n = r;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_floats),
        Value::Object(map) => map.values_mut().for_each(round_floats),
        _ => {}
    }
}

/// Write through a temporary file in the target directory, then rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

/// Binary graymap, north up. Raw route cells are painted over the grid,
/// then the cells traced by the smoothed polyline.
pub fn render_pgm(
    grid: &OccupancyGrid,
    weights: &SafetyWeightField,
    raw: &[GridIndex],
    smoothed: Option<&[GridIndex]>,
) -> Vec<u8> {
    let (cols, rows) = (grid.cols(), grid.rows());
    let mut pixels: Vec<u8> = grid
        .spec()
        .indices()
        .map(|idx| {
            if grid.is_blocked(idx) {
                PGM_BLOCKED
            } else if weights.is_elevated(idx) {
                PGM_WEIGHTED
            } else {
                PGM_FREE
            }
        })
        .collect();
    for idx in raw {
        pixels[grid.spec().linear(*idx)] = PGM_RAW_ROUTE;
    }
    if let Some(path) = smoothed {
        for idx in trace_path(path) {
            pixels[grid.spec().linear(idx)] = PGM_SMOOTHED_ROUTE;
        }
    }
    let mut out = format!("P5\n{cols} {rows}\n255\n").into_bytes();
    for row in (0..rows).rev() {
        out.extend_from_slice(&pixels[row * cols..(row + 1) * cols]);
    }
    out
}
