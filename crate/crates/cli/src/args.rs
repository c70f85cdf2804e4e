use std::path::PathBuf;

use chartroute_core::{Algorithm, CostModel, GeoPoint};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "chartroute",
    version,
    about = "Route planning over electronic-chart obstacle data"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Extract obstacle polygons from an ISO 8211 chart file.
    #[command(name = "parse-s57")]
    ParseS57(ParseS57Args),
    /// Rasterize an obstacle document into a grid cache.
    Rasterize(RasterizeArgs),
    /// Plan one route.
    Plan(PlanArgs),
    /// Plan with several algorithms and tabulate the metrics.
    Compare(CompareArgs),
    /// Generate a seeded synthetic archipelago.
    Genmap(GenmapArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    /// 109.35-109.85 E, 18.10-18.40 N at 0.005 degrees.
    Scs,
}

#[derive(Debug, Args)]
pub struct ParseS57Args {
    pub file: PathBuf,
    /// Coordinate multiplication factor; read from DSPM when omitted.
    #[arg(long)]
    pub comf: Option<f64>,
    #[arg(short, long)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct RasterizeArgs {
    pub doc: PathBuf,
    /// Cell edge length in degrees.
    #[arg(long, required_unless_present = "preset")]
    pub cell_size: Option<f64>,
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
    #[arg(short, long)]
    pub output: PathBuf,
}

/// Grid source and endpoints shared by `plan` and `compare`.
#[derive(Debug, Clone, Args)]
pub struct RouteArgs {
    /// Grid cache or obstacle document.
    pub input: PathBuf,
    /// Cell size used when the input is an obstacle document.
    #[arg(long)]
    pub cell_size: Option<f64>,
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
    /// Override the cost model of every algorithm.
    #[arg(long)]
    pub cost: Option<CostModel>,
    #[arg(long, value_parser = parse_lon_lat, allow_hyphen_values = true)]
    pub start: GeoPoint,
    #[arg(long, value_parser = parse_lon_lat, allow_hyphen_values = true)]
    pub goal: GeoPoint,
    /// Treat weighted cells as blocking during smoothing.
    #[arg(long)]
    pub strict_safety: bool,
}

#[derive(Debug, Args)]
pub struct PlanArgs {
    #[command(flatten)]
    pub route: RouteArgs,
    #[arg(long, default_value = "improved")]
    pub algo: Algorithm,
    #[arg(long)]
    pub smooth: bool,
    /// Write a P5 graymap of the grid and route.
    #[arg(long)]
    pub render: Option<PathBuf>,
    #[arg(short, long)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub route: RouteArgs,
    #[arg(long, value_delimiter = ',', default_value = "dijkstra,astar,improved")]
    pub algos: Vec<Algorithm>,
    /// Worker threads for the per-algorithm plans.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// Also write the text table here.
    #[arg(long)]
    pub table: Option<PathBuf>,
    #[arg(short, long)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct GenmapArgs {
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value_t = 100)]
    pub cols: usize,
    #[arg(long, default_value_t = 60)]
    pub rows: usize,
    #[arg(long, default_value_t = 8)]
    pub islands: usize,
    /// Largest island radius, in cells.
    #[arg(long, default_value_t = 6.0)]
    pub radius: f64,
    #[arg(short, long)]
    pub output: PathBuf,
}

pub fn parse_lon_lat(s: &str) -> Result<GeoPoint, String> {
    let (lon, lat) = s
        .split_once(',')
        .ok_or_else(|| format!("expected LON,LAT, got {s:?}"))?;
    let parse = |v: &str| v.trim().parse::<f64>().map_err(|e| format!("{v:?}: {e}"));
    let p = GeoPoint::new(parse(lon)?, parse(lat)?);
    if !p.is_valid() {
        return Err(format!("{s:?} is not a valid longitude/latitude"));
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn lon_lat() {
        assert_eq!(parse_lon_lat("109.4,18.2").unwrap(), GeoPoint::new(109.4, 18.2));
        assert_eq!(parse_lon_lat("-70.5, -33").unwrap(), GeoPoint::new(-70.5, -33.0));
        assert!(parse_lon_lat("109.4").is_err());
        assert!(parse_lon_lat("200,0").is_err());
    }

    #[test]
    fn algorithm_list() {
        let cli = Cli::try_parse_from([
            "chartroute",
            "compare",
            "g.json",
            "--start",
            "1,1",
            "--goal",
            "2,2",
            "--algos",
            "astar,improved",
            "-o",
            "out.json",
        ])
        .unwrap();
        let Command::Compare(args) = cli.command else {
            panic!("wrong subcommand")
        };
        assert_eq!(args.algos, vec![Algorithm::AStar, Algorithm::ImprovedAStar]);
        assert!(Cli::try_parse_from([
            "chartroute",
            "compare",
            "g.json",
            "--start",
            "1,1",
            "--goal",
            "2,2",
            "--algos",
            "bfs",
            "-o",
            "o.json",
        ])
        .is_err());
    }
}
