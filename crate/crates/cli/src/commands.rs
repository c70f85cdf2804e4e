use std::io::Write;
use std::path::{Path, PathBuf};

use chartroute_core::chart::{dataset_comf, parse_file, s57_to_obstacles, S57Error, DEFAULT_COMF};
use chartroute_core::genmap::{generate, GenMapParams};
use chartroute_core::metrics::{compare, ComparisonTable};
use chartroute_core::{
    evaluate, load_obstacle_document, plan, rasterize, rasterize_region, smooth, Algorithm, CostModel, Extent,
    GeoPoint, GridIndex, GridSpec, OccupancyGrid, PlanRequest, PlanResult, RasterOptions, RouteMetrics,
    SafetyWeightField, SearchError, SmoothingOptions,
};
use serde::Serialize;
use thiserror::Error;

use crate::args::{Cli, Command, CompareArgs, GenmapArgs, ParseS57Args, PlanArgs, Preset, RasterizeArgs, RouteArgs};
use crate::output::{render_pgm, to_json, write_atomic};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub const MAX_CELLS_ENV: &str = "CHARTROUTE_MAX_CELLS";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    NoPath(String),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::NoPath(_) => 3,
            CliError::Input(_) | CliError::Io { .. } => 2,
        }
    }
}

fn input(e: impl std::fmt::Display) -> CliError {
    CliError::Input(e.to_string())
}

fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

fn write(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    write_atomic(path, bytes).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

/// Run one subcommand. Reports go to `out`, warnings to `err`.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::ParseS57(a) => cmd_parse_s57(&a, out, err),
        Command::Rasterize(a) => cmd_rasterize(&a, out),
        Command::Plan(a) => cmd_plan(&a, out),
        Command::Compare(a) => cmd_compare(&a, out),
        Command::Genmap(a) => cmd_genmap(&a, out),
    }
}

fn report(out: &mut dyn Write, line: std::fmt::Arguments<'_>) {
    // a closed stdout must not turn a finished run into a failure
    let _ = writeln!(out, "{line}");
}

pub fn cmd_parse_s57(a: &ParseS57Args, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let bytes = read(&a.file)?;
    let records = parse_file(&bytes).map_err(|e| CliError::Input(format!("{}: {e}", a.file.display())))?;
    let comf = a.comf.or_else(|| dataset_comf(&records)).unwrap_or(DEFAULT_COMF);
    match s57_to_obstacles(&records, comf) {
        Ok(doc) => {
            write(&a.output, doc.to_json().as_bytes())?;
            report(
                out,
                format_args!("records: {}, polygons: {}", records.len(), doc.polygons.len()),
            );
            Ok(())
        }
        Err(S57Error::NoGeometry) => {
            report(out, format_args!("records: {}, polygons: 0", records.len()));
            let _ = writeln!(
                err,
                "warning: {}: {}; no output written",
                a.file.display(),
                S57Error::NoGeometry
            );
            Ok(())
        }
        Err(e) => Err(CliError::Input(format!("{}: {e}", a.file.display()))),
    }
}

fn preset_region(p: Preset) -> (Extent, f64) {
    match p {
        Preset::Scs => (
            Extent {
                min: GeoPoint::new(109.35, 18.10),
                max: GeoPoint::new(109.85, 18.40),
            },
            0.005,
        ),
    }
}

fn raster_options() -> Result<RasterOptions, CliError> {
    match std::env::var(MAX_CELLS_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map(|max_cells| RasterOptions { max_cells })
            .map_err(|e| CliError::Input(format!("{MAX_CELLS_ENV}={v:?}: {e}"))),
        Err(_) => Ok(RasterOptions::default()),
    }
}

fn rasterize_doc(
    path: &Path,
    text: &str,
    cell_size: Option<f64>,
    preset: Option<Preset>,
) -> Result<OccupancyGrid, CliError> {
    let doc = load_obstacle_document(text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let opts = raster_options()?;
    let grid = match (preset.map(preset_region), cell_size) {
        (Some((extent, preset_cell)), cell) => {
            rasterize_region(&doc.polygons, &extent, cell.unwrap_or(preset_cell), opts)
        }
        (None, Some(cell)) => rasterize(&doc, cell, opts),
        (None, None) => return Err(input("an obstacle document needs --cell-size or --preset")),
    };
    grid.map_err(input)
}

pub fn cmd_rasterize(a: &RasterizeArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let bytes = read(&a.doc)?;
    let text = String::from_utf8(bytes).map_err(|e| CliError::Input(format!("{}: {e}", a.doc.display())))?;
    let grid = rasterize_doc(&a.doc, &text, a.cell_size, a.preset)?;
    write(&a.output, grid.to_cache_json().as_bytes())?;
    let pct = 100.0 * grid.blocked_count() as f64 / grid.spec().cell_count() as f64;
    report(
        out,
        format_args!("{}x{} cells, {pct:.2}% blocked", grid.cols(), grid.rows()),
    );
    Ok(())
}

/// Load a grid cache, or rasterize an obstacle document.
pub fn load_grid(a: &RouteArgs) -> Result<OccupancyGrid, CliError> {
    let bytes = read(&a.input)?;
    let text = String::from_utf8(bytes).map_err(|e| CliError::Input(format!("{}: {e}", a.input.display())))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", a.input.display())))?;
    if value.get("spec").is_some() {
        OccupancyGrid::from_cache_json(&text).map_err(|e| CliError::Input(format!("{}: {e}", a.input.display())))
    } else {
        rasterize_doc(&a.input, &text, a.cell_size, a.preset)
    }
}

fn endpoint(spec: &GridSpec, p: GeoPoint, which: &str) -> Result<GridIndex, CliError> {
    spec.index_of(p).map_err(|e| CliError::Input(format!("{which}: {e}")))
}

fn search_error(e: SearchError) -> CliError {
    match e {
        SearchError::NoPath { .. } => CliError::NoPath(e.to_string()),
        other => CliError::Input(other.to_string()),
    }
}

#[derive(Debug, Clone, Serialize)]
struct Endpoints {
    start: GeoPoint,
    goal: GeoPoint,
    start_cell: GridIndex,
    goal_cell: GridIndex,
}

#[derive(Debug, Clone, Serialize)]
struct SearchStats {
    total_cost: f64,
    generated_nodes: usize,
}

#[derive(Debug, Clone, Serialize)]
struct RouteMetricsBlock {
    raw: RouteMetrics,
    smoothed: Option<RouteMetrics>,
    search: SearchStats,
}

#[derive(Debug, Clone, Serialize)]
struct PlanConfig {
    input: String,
    grid: GridSpec,
    algorithm: Algorithm,
    cost_model: CostModel,
    #[serde(flatten)]
    endpoints: Endpoints,
    smooth: bool,
    strict_safety: bool,
}

#[derive(Debug, Clone, Serialize)]
struct RouteOutput {
    config: PlanConfig,
    raw_path: Vec<GeoPoint>,
    smoothed_path: Option<Vec<GeoPoint>>,
    metrics: RouteMetricsBlock,
    version: &'static str,
}

struct PlannedRoute {
    result: PlanResult,
    smoothed: Option<Vec<GridIndex>>,
    raw_metrics: RouteMetrics,
    smoothed_metrics: Option<RouteMetrics>,
}

fn plan_route(
    grid: &OccupancyGrid,
    weights: &SafetyWeightField,
    req: &PlanRequest,
    smoothing: Option<SmoothingOptions>,
) -> Result<PlannedRoute, CliError> {
    let result = plan(grid, weights, req).map_err(search_error)?;
    let smoothed = smoothing
        .map(|opts| smooth(&result.path, grid, weights, opts))
        .transpose()
        .map_err(input)?;
    let raw_metrics = evaluate(&result, &result.path, grid).map_err(input)?;
    let smoothed_metrics = smoothed
        .as_deref()
        .map(|p| evaluate(&result, p, grid))
        .transpose()
        .map_err(input)?;
    Ok(PlannedRoute {
        result,
        smoothed,
        raw_metrics,
        smoothed_metrics,
    })
}

fn centers(spec: &GridSpec, path: &[GridIndex]) -> Vec<GeoPoint> {
    path.iter()
        .map(|idx| spec.cell_center(*idx).expect("planned cells lie on the grid"))
        .collect()
}

fn resolve(a: &RouteArgs, grid: &OccupancyGrid) -> Result<Endpoints, CliError> {
    Ok(Endpoints {
        start: a.start,
        goal: a.goal,
        start_cell: endpoint(grid.spec(), a.start, "start")?,
        goal_cell: endpoint(grid.spec(), a.goal, "goal")?,
    })
}

pub fn cmd_plan(a: &PlanArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let grid = load_grid(&a.route)?;
    let weights = SafetyWeightField::compute(&grid);
    let endpoints = resolve(&a.route, &grid)?;
    let cost_model = a.route.cost.unwrap_or(a.algo.default_cost_model());
    let req = PlanRequest::new(endpoints.start_cell, endpoints.goal_cell, a.algo).with_cost(cost_model);
    let smoothing = a.smooth.then_some(SmoothingOptions {
        strict_safety: a.route.strict_safety,
    });
    let route = plan_route(&grid, &weights, &req, smoothing)?;

    let spec = grid.spec();
    let doc = RouteOutput {
        config: PlanConfig {
            input: a.route.input.display().to_string(),
            grid: *spec,
            algorithm: a.algo,
            cost_model,
            endpoints,
            smooth: a.smooth,
            strict_safety: a.route.strict_safety,
        },
        raw_path: centers(spec, &route.result.path),
        smoothed_path: route.smoothed.as_deref().map(|p| centers(spec, p)),
        metrics: RouteMetricsBlock {
            raw: route.raw_metrics,
            smoothed: route.smoothed_metrics,
            search: SearchStats {
                total_cost: route.result.total_cost,
                generated_nodes: route.result.generated,
            },
        },
        version: VERSION,
    };
    write(&a.output, to_json(&doc).as_bytes())?;
    if let Some(path) = &a.render {
        write(
            path,
            &render_pgm(&grid, &weights, &route.result.path, route.smoothed.as_deref()),
        )?;
    }
    let m = route.smoothed_metrics.unwrap_or(route.raw_metrics);
    report(
        out,
        format_args!(
            "{}: {} nodes, {:.2} NM, {} expanded, {} hazards, {} turns",
            a.algo, m.route_nodes, m.distance_nm, m.expanded_nodes, m.potential_hazards, m.turn_count
        ),
    );
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
struct CompareConfig {
    input: String,
    grid: GridSpec,
    algorithms: Vec<Algorithm>,
    cost_override: Option<CostModel>,
    #[serde(flatten)]
    endpoints: Endpoints,
    strict_safety: bool,
}

#[derive(Debug, Clone, Serialize)]
struct CompareRoute {
    algorithm: Algorithm,
    cost_model: CostModel,
    raw_path: Vec<GeoPoint>,
    smoothed_path: Vec<GeoPoint>,
    metrics: RouteMetricsBlock,
}

#[derive(Debug, Clone, Serialize)]
struct Tables {
    raw: ComparisonTable,
    smoothed: ComparisonTable,
}

#[derive(Debug, Clone, Serialize)]
struct CompareOutput {
    config: CompareConfig,
    routes: Vec<CompareRoute>,
    tables: Tables,
    version: &'static str,
}

fn plan_all(
    grid: &OccupancyGrid,
    weights: &SafetyWeightField,
    requests: &[PlanRequest],
    smoothing: SmoothingOptions,
    jobs: usize,
) -> Vec<Result<PlannedRoute, CliError>> {
    let run = |req: &PlanRequest| plan_route(grid, weights, req, Some(smoothing));
    if jobs <= 1 || requests.len() <= 1 {
        return requests.iter().map(run).collect();
    }
    let chunk = requests.len().div_ceil(jobs);
    std::thread::scope(|s| {
        let handles: Vec<_> = requests
            .chunks(chunk)
            .map(|part| s.spawn(move || part.iter().map(run).collect::<Vec<_>>()))
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("planner thread panicked"))
            .collect()
    })
}

pub fn cmd_compare(a: &CompareArgs, out: &mut dyn Write) -> Result<(), CliError> {
    if a.algos.is_empty() {
        return Err(input("--algos needs at least one algorithm"));
    }
    let grid = load_grid(&a.route)?;
    let weights = SafetyWeightField::compute(&grid);
    let endpoints = resolve(&a.route, &grid)?;
    let requests: Vec<PlanRequest> = a
        .algos
        .iter()
        .map(|&algo| {
            PlanRequest::new(endpoints.start_cell, endpoints.goal_cell, algo)
                .with_cost(a.route.cost.unwrap_or(algo.default_cost_model()))
        })
        .collect();
    let smoothing = SmoothingOptions {
        strict_safety: a.route.strict_safety,
    };
    let planned = plan_all(&grid, &weights, &requests, smoothing, a.jobs)
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;

    let spec = grid.spec();
    let mut raw_entries = Vec::new();
    let mut smoothed_entries = Vec::new();
    let mut routes = Vec::new();
    for (req, route) in requests.iter().zip(planned) {
        let smoothed = route.smoothed.expect("compare always smooths");
        let smoothed_metrics = route.smoothed_metrics.expect("compare always smooths");
        raw_entries.push((req.algorithm.to_string(), route.raw_metrics));
        smoothed_entries.push((req.algorithm.to_string(), smoothed_metrics));
        routes.push(CompareRoute {
            algorithm: req.algorithm,
            cost_model: req.cost_model,
            raw_path: centers(spec, &route.result.path),
            smoothed_path: centers(spec, &smoothed),
            metrics: RouteMetricsBlock {
                raw: route.raw_metrics,
                smoothed: Some(smoothed_metrics),
                search: SearchStats {
                    total_cost: route.result.total_cost,
                    generated_nodes: route.result.generated,
                },
            },
        });
    }
    let tables = Tables {
        raw: compare(&raw_entries).map_err(input)?,
        smoothed: compare(&smoothed_entries).map_err(input)?,
    };
    let text = format!(
        "raw routes\n{}\nsmoothed routes\n{}",
        tables.raw.to_text(),
        tables.smoothed.to_text()
    );
    let doc = CompareOutput {
        config: CompareConfig {
            input: a.route.input.display().to_string(),
            grid: *spec,
            algorithms: a.algos.clone(),
            cost_override: a.route.cost,
            endpoints,
            strict_safety: a.route.strict_safety,
        },
        routes,
        tables,
        version: VERSION,
    };
    write(&a.output, to_json(&doc).as_bytes())?;
    if let Some(path) = &a.table {
        write(path, text.as_bytes())?;
    }
    let _ = out.write_all(text.as_bytes());
    Ok(())
}

pub fn cmd_genmap(a: &GenmapArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let params = GenMapParams {
        radius: a.radius,
        ..GenMapParams::new(a.seed, a.cols, a.rows, a.islands)
    };
    let doc = generate(&params).map_err(input)?;
    write(&a.output, doc.to_json().as_bytes())?;
    report(
        out,
        format_args!("{} islands on a {}x{} map", doc.polygons.len(), a.cols, a.rows),
    );
    Ok(())
}
