use std::fs;
use std::path::{Path, PathBuf};

use nrfair::evaluate::EvaluationReport;
use nrfair::experiment::{compare, format_table, run_algorithm, Algorithm, RunParams};
use nrfair::fair::count_centers_curve;
use nrfair::geoio::{self, Column, CoordinateColumns, CsvSchema, ProjectionSpec, Records};
use nrfair::neighborhood::neighborhood_radii_with_leaf_size;
use nrfair::oracle::{fixtures, optimal_alpha};
use nrfair::{Error, Instance, NeighborhoodProfile, PointSet, Result};
use serde::Serialize;

use crate::{AlgoArgs, Command, CompareArgs, CurveArgs, FixtureAction, InputArgs, RunArgs, Schema};

/// Row errors echoed to the log before the rest are summarized.
const SHOWN_ROW_ERRORS: usize = 10;

pub fn dispatch(command: &Command) -> Result<()> {
    match command {
        Command::Nr(args) => cmd_nr(args),
        Command::Run(args) => cmd_run(args),
        Command::Compare(args) => cmd_compare(args),
        Command::Curve(args) => cmd_curve(args),
        Command::Oracle(args) => cmd_oracle(args),
        Command::Fixtures { action } => cmd_fixtures(action),
    }
}

struct Loaded {
    instance: Instance,
    projection: Option<ProjectionSpec>,
}

fn schema_of(args: &InputArgs) -> Result<CsvSchema> {
    let column = |name: &str| -> Result<Column> {
        if !args.no_header {
            return Ok(Column::Name(name.to_string()));
        }
        name.parse()
            .map(Column::Index)
            .map_err(|_| Error::InvalidParameter(format!("without a header, columns must be positions, got `{name}`")))
    };
    let (a, b) = match (&args.columns, args.schema, args.no_header) {
        (Some(c), _, _) => (column(&c[0])?, column(&c[1])?),
        (None, _, true) => (Column::Index(0), Column::Index(1)),
        (None, Schema::Latlon, false) => ("lat".into(), "lon".into()),
        (None, Schema::Xy, false) => ("x".into(), "y".into()),
    };
    let columns = match args.schema {
        Schema::Latlon => CoordinateColumns::LatLon { lat: a, lon: b },
        Schema::Xy => CoordinateColumns::Xy { x: a, y: b },
    };
    Ok(CsvSchema { columns, label: None, has_header: !args.no_header })
}

fn load(args: &InputArgs) -> Result<Loaded> {
    if let Some(name) = &args.fixture {
        let fixture = fixtures::by_name(name)?;
        let k = args.k.unwrap_or(fixture.k);
        return Ok(Loaded { instance: Instance::new(fixture.metric()?, k)?, projection: None });
    }
    let path = args.input.as_ref().expect("clap requires --input or --fixture");
    let k = args.k.ok_or_else(|| Error::InvalidParameter("--k is required with --input".into()))?;
    let report = geoio::load_points_csv(path, &schema_of(args)?)?;
    if !report.errors.is_empty() {
        for e in report.errors.iter().take(SHOWN_ROW_ERRORS) {
            log::warn!("{}: {e}", path.display());
        }
        log::warn!("{}: skipped {} of {} rows", path.display(), report.errors.len(), report.rows);
    }
    let (points, projection) = match report.records {
        Records::Planar(points) => (points, None),
        Records::Geo(records) => {
            if records.is_empty() {
                return Err(Error::EmptyPointSet);
            }
            let zone = geoio::auto_zone(&records)?;
            log::info!("projecting {} records into {}", records.len(), zone.spec);
            (geoio::project(&records, &zone.spec)?, Some(zone.spec))
        }
    };
    log::info!("loaded {} points from {}", points.len(), path.display());
    Ok(Loaded { instance: Instance::euclidean(PointSet::new(points)?, k)?, projection })
}

fn profile(args: &InputArgs, instance: &Instance) -> Result<NeighborhoodProfile> {
    if args.leaf_size == 0 {
        return Err(Error::InvalidParameter("--leaf-size must be at least 1".into()));
    }
    Ok(neighborhood_radii_with_leaf_size(instance, args.leaf_size))
}

fn output_path(args: &InputArgs, file: &str) -> Result<PathBuf> {
    fs::create_dir_all(&args.out).map_err(|e| Error::Io { path: args.out.clone(), source: e })?;
    Ok(args.out.join(file))
}

fn csv_writer(path: &Path) -> Result<csv::Writer<fs::File>> {
    csv::Writer::from_path(path).map_err(Error::from)
}

fn finish(mut w: csv::Writer<fs::File>, path: &Path) -> Result<()> {
    w.flush().map_err(|e| Error::Io { path: path.to_path_buf(), source: e })
}

fn fmt_f64(v: f64) -> String {
    if v.is_infinite() {
        "inf".to_string()
    } else {
        v.to_string()
    }
}

fn run_params(a: &AlgoArgs) -> RunParams {
    RunParams { t: a.t, seed: a.seed, first: a.first }
}

fn cmd_nr(args: &InputArgs) -> Result<()> {
    let loaded = load(args)?;
    let inst = &loaded.instance;
    let p = profile(args, inst)?;
    let path = output_path(args, "nr.csv")?;
    let mut w = csv_writer(&path)?;
    w.write_record(["id", "x", "y", "nr"])?;
    for i in 0..inst.n() {
        let (x, y) = inst.points().map_or((String::new(), String::new()), |pts| {
            let pt = pts.get(i);
            (pt.x.to_string(), pt.y.to_string())
        });
        w.write_record([i.to_string(), x, y, fmt_f64(p.radius(i))])?;
    }
    finish(w, &path)?;
    println!("wrote {} radii (m = {}) to {}", inst.n(), p.m(), path.display());
    Ok(())
}

/// Field names are stable; downstream plotting reads them.
#[derive(Serialize)]
struct RunReport<'a> {
    algorithm: &'a str,
    n: usize,
    k: usize,
    projection: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    alpha_param: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    center_ids: Option<&'a [usize]>,
    #[serde(flatten)]
    report: &'a EvaluationReport,
}

fn cmd_run(args: &RunArgs) -> Result<()> {
    let algorithm = if args.algo == "alphafair" {
        Algorithm::parse("alphafair", args.alpha)?
    } else {
        if args.alpha.is_some() {
            log::warn!("--alpha is ignored by {}", args.algo);
        }
        args.algo.parse::<Algorithm>()?
    };
    let loaded = load(&args.input)?;
    let inst = &loaded.instance;
    let p = profile(&args.input, inst)?;
    let outcome = run_algorithm(algorithm, inst, &p, &run_params(&args.algo_args))?;

    let centers_path = output_path(&args.input, "centers.csv")?;
    if inst.points().is_some() {
        geoio::write_centers(&centers_path, &outcome.centers, loaded.projection.as_ref())?;
    } else {
        let mut w = csv_writer(&centers_path)?;
        w.write_record(["id"])?;
        for id in outcome.center_ids.iter().flatten() {
            w.write_record([id.to_string()])?;
        }
        finish(w, &centers_path)?;
    }

    let json = RunReport {
        algorithm: &outcome.algorithm,
        n: inst.n(),
        k: inst.k(),
        projection: loaded.projection.map(|s| s.to_string()),
        alpha_param: outcome.alpha_param,
        center_ids: outcome.center_ids.as_deref(),
        report: &outcome.report,
    };
    let report_path = output_path(&args.input, "report.json")?;
    let text = serde_json::to_string_pretty(&json).expect("report serializes");
    fs::write(&report_path, text + "\n").map_err(|e| Error::Io { path: report_path.clone(), source: e })?;
    println!(
        "{}: {} centers, alpha = {}, kcenter_max = {:.3}, size_stddev = {:.3}",
        outcome.algorithm,
        outcome.report.num_facilities,
        outcome.report.alpha,
        outcome.report.kcenter_max,
        outcome.report.size_stddev
    );
    Ok(())
}

fn cmd_compare(args: &CompareArgs) -> Result<()> {
    let algorithms = args.algos.iter().map(|a| a.trim().parse::<Algorithm>()).collect::<Result<Vec<_>>>()?;
    if algorithms.is_empty() {
        return Err(Error::InvalidParameter("--algos is empty".into()));
    }
    let loaded = load(&args.input)?;
    let inst = &loaded.instance;
    let p = profile(&args.input, inst)?;
    let rows = compare(&algorithms, inst, &p, &run_params(&args.algo_args))?;
    let path = output_path(&args.input, "compare.csv")?;
    let mut w = csv_writer(&path)?;
    w.write_record(["algorithm", "alpha", "kmeans_mean", "kmedians_mean", "kcenter_max", "size_stddev"])?;
    for r in &rows {
        w.write_record([
            r.algorithm.clone(),
            r.alpha.to_string(),
            fmt_f64(r.kmeans_mean),
            fmt_f64(r.kmedians_mean),
            fmt_f64(r.kcenter_max),
            fmt_f64(r.size_stddev),
        ])?;
    }
    finish(w, &path)?;
    print!("{}", format_table(&rows));
    Ok(())
}

/// 1.00, 1.05, ..., 2.00
fn default_grid() -> Vec<f64> {
    (0..=20).map(|i| 1.0 + i as f64 / 20.0).collect()
}

fn cmd_curve(args: &CurveArgs) -> Result<()> {
    let alphas = args.alphas.clone().unwrap_or_else(default_grid);
    let loaded = load(&args.input)?;
    let inst = &loaded.instance;
    let p = profile(&args.input, inst)?;
    let curve = count_centers_curve(inst, &p, &alphas)?;
    let path = output_path(&args.input, "curve.csv")?;
    let mut w = csv_writer(&path)?;
    w.write_record(["alpha", "count"])?;
    for (a, c) in &curve {
        w.write_record([a.to_string(), c.to_string()])?;
    }
    finish(w, &path)?;
    println!("k = {}", inst.k());
    for (a, c) in &curve {
        println!("{a:>8.4} {c:>8}");
    }
    Ok(())
}

fn cmd_oracle(args: &InputArgs) -> Result<()> {
    let loaded = load(args)?;
    let (alpha, solution) = optimal_alpha(&loaded.instance)?;
    let ids: Vec<String> = solution.centers.iter().map(usize::to_string).collect();
    println!("alpha* = {alpha}");
    println!("centers = {}", ids.join(" "));
    Ok(())
}

fn cmd_fixtures(action: &FixtureAction) -> Result<()> {
    match action {
        FixtureAction::List => {
            for (name, about) in fixtures::CATALOG {
                println!("{name:<26} {about}");
            }
            Ok(())
        }
        FixtureAction::Emit { name, out } => {
            let fixture = fixtures::by_name(name)?;
            let text = serde_json::to_string_pretty(&fixture).expect("fixture serializes") + "\n";
            match out {
                Some(path) => fs::write(path, text).map_err(|e| Error::Io { path: path.clone(), source: e }),
                None => {
                    print!("{text}");
                    Ok(())
                }
            }
        }
    }
}
