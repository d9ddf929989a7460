//! CSV ingestion of address points and UTM projection to planar meters.

use std::fmt;
use std::io::Read;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::metric::Point2D;

/// WGS84 semi-major axis in meters.
pub const WGS84_A: f64 = 6_378_137.0;
/// WGS84 flattening.
pub const WGS84_F: f64 = 1.0 / 298.257_223_563;
pub const UTM_SCALE: f64 = 0.9996;
pub const FALSE_EASTING: f64 = 500_000.0;
pub const FALSE_NORTHING_SOUTH: f64 = 10_000_000.0;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeoRecord {
    pub lat: f64,
    pub lon: f64,
    pub label: Option<String>,
}

impl GeoRecord {
    pub fn new(lat: f64, lon: f64) -> Result<Self> {
        check_lat_lon(lat, lon).map_err(Error::InvalidParameter)?;
        Ok(GeoRecord { lat, lon, label: None })
    }
}

fn check_lat_lon(lat: f64, lon: f64) -> std::result::Result<(), String> {
    if !(lat.is_finite() && (-90.0..=90.0).contains(&lat)) {
        return Err(format!("latitude {lat} outside [-90, 90]"));
    }
    if !(lon.is_finite() && (-180.0..180.0).contains(&lon)) {
        return Err(format!("longitude {lon} outside [-180, 180)"));
    }
    Ok(())
}

/// A CSV column, by header name or zero-based position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Column {
    Name(String),
    Index(usize),
}

impl From<&str> for Column {
    fn from(s: &str) -> Self {
        Column::Name(s.to_string())
    }
}

impl From<usize> for Column {
    fn from(i: usize) -> Self {
        Column::Index(i)
    }
}

impl fmt::Display for Column {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Column::Name(s) => f.write_str(s),
            Column::Index(i) => write!(f, "#{i}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoordinateColumns {
    LatLon { lat: Column, lon: Column },
    /// Already planar; no projection.
    Xy { x: Column, y: Column },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CsvSchema {
    pub columns: CoordinateColumns,
    pub label: Option<Column>,
    pub has_header: bool,
}

impl CsvSchema {
    pub fn lat_lon() -> Self {
        CsvSchema {
            columns: CoordinateColumns::LatLon { lat: "lat".into(), lon: "lon".into() },
            label: None,
            has_header: true,
        }
    }

    pub fn xy() -> Self {
        CsvSchema { columns: CoordinateColumns::Xy { x: "x".into(), y: "y".into() }, label: None, has_header: true }
    }

    pub fn is_planar(&self) -> bool {
        matches!(self.columns, CoordinateColumns::Xy { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RowError {
    /// One-based line number in the input file.
    pub line: u64,
    pub message: String,
}

impl fmt::Display for RowError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Records {
    Geo(Vec<GeoRecord>),
    Planar(Vec<Point2D>),
}

impl Records {
    pub fn len(&self) -> usize {
        match self {
            Records::Geo(r) => r.len(),
            Records::Planar(p) => p.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LoadReport {
    pub records: Records,
    pub errors: Vec<RowError>,
    /// Data rows read; always `records.len() + errors.len()`.
    pub rows: usize,
}

pub fn load_points_csv(path: impl AsRef<Path>, schema: &CsvSchema) -> Result<LoadReport> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    load_points_reader(file, schema)
}

pub fn load_points_reader<R: Read>(reader: R, schema: &CsvSchema) -> Result<LoadReport> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(schema.has_header)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = if schema.has_header { Some(rdr.headers()?.clone()) } else { None };
    let resolve = |c: &Column| -> Result<usize> {
        match (c, &headers) {
            (Column::Index(i), _) => Ok(*i),
            (Column::Name(name), Some(h)) => {
                h.iter().position(|f| f == name).ok_or_else(|| Error::MissingColumn(name.clone()))
            }
            (Column::Name(name), None) => Err(Error::MissingColumn(name.clone())),
        }
    };
    let (a, b) = match &schema.columns {
        CoordinateColumns::LatLon { lat, lon } => (resolve(lat)?, resolve(lon)?),
        CoordinateColumns::Xy { x, y } => (resolve(x)?, resolve(y)?),
    };
    let label = schema.label.as_ref().map(resolve).transpose()?;

    let mut geo = Vec::new();
    let mut planar = Vec::new();
    let mut errors = Vec::new();
    let mut rows = 0usize;
    let mut record = csv::StringRecord::new();
    loop {
        let line = rdr.position().line();
        match rdr.read_record(&mut record) {
            Ok(false) => break,
            Ok(true) => {}
            Err(e) => {
                rows += 1;
                errors.push(RowError { line, message: e.to_string() });
                continue;
            }
        }
        rows += 1;
        let line = record.position().map_or(line, |p| p.line());
        let field = |idx: usize| -> std::result::Result<f64, String> {
            let raw = record.get(idx).ok_or_else(|| format!("missing field {idx}"))?;
            raw.parse::<f64>().map_err(|_| format!("non-numeric value `{raw}` in field {idx}"))
        };
        let parsed = field(a).and_then(|u| field(b).map(|v| (u, v)));
        let outcome = parsed.and_then(|(u, v)| {
            if schema.is_planar() {
                if u.is_finite() && v.is_finite() {
                    planar.push(Point2D::new(u, v));
                    Ok(())
                } else {
                    Err(format!("non-finite coordinate ({u}, {v})"))
                }
            } else {
                check_lat_lon(u, v)?;
                let label = label.and_then(|i| record.get(i)).map(str::to_string);
                geo.push(GeoRecord { lat: u, lon: v, label });
                Ok(())
            }
        });
        if let Err(message) = outcome {
            errors.push(RowError { line, message });
        }
    }
    let records = if schema.is_planar() { Records::Planar(planar) } else { Records::Geo(geo) };
    debug_assert_eq!(records.len() + errors.len(), rows);
    Ok(LoadReport { records, errors, rows })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Hemisphere {
    North,
    South,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ProjectionSpec {
    Utm { zone: u8, hemisphere: Hemisphere },
    None,
}

impl ProjectionSpec {
    pub fn utm(zone: u8, hemisphere: Hemisphere) -> Result<Self> {
        if !(1..=60).contains(&zone) {
            return Err(Error::InvalidParameter(format!("UTM zone {zone} outside 1..=60")));
        }
        Ok(ProjectionSpec::Utm { zone, hemisphere })
    }
}

impl fmt::Display for ProjectionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProjectionSpec::Utm { zone, hemisphere } => {
                write!(f, "UTM {zone}{}", if *hemisphere == Hemisphere::North { 'N' } else { 'S' })
            }
            ProjectionSpec::None => f.write_str("none"),
        }
    }
}

pub fn central_meridian(zone: u8) -> f64 {
    6.0 * zone as f64 - 183.0
}

pub fn zone_of(lon: f64) -> u8 {
    (((lon + 180.0) / 6.0).floor() as i64).rem_euclid(60) as u8 + 1
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZoneChoice {
    pub spec: ProjectionSpec,
    pub warning: Option<String>,
}

/// Picks the zone of the mean longitude and the hemisphere of the mean latitude.
pub fn auto_zone(records: &[GeoRecord]) -> Result<ZoneChoice> {
    if records.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    let n = records.len() as f64;
    let lat = records.iter().map(|r| r.lat).sum::<f64>() / n;
    let lon = records.iter().map(|r| r.lon).sum::<f64>() / n;
    let hemisphere = if lat < 0.0 { Hemisphere::South } else { Hemisphere::North };
    let spec = ProjectionSpec::utm(zone_of(lon), hemisphere)?;
    let mut zones: Vec<u8> = records.iter().map(|r| zone_of(r.lon)).collect();
    zones.sort_unstable();
    zones.dedup();
    let warning = (zones.len() > 2).then(|| {
        format!("records span {} UTM zones; projecting into {spec} distorts distances far from it", zones.len())
    });
    if let Some(w) = &warning {
        log::warn!("{w}");
    }
    Ok(ZoneChoice { spec, warning })
}

/// Transverse Mercator series in the third flattening, carried to sixth order.
struct Series {
    e: f64,
    a_rect: f64,
    alpha: [f64; 6],
    beta: [f64; 6],
}

impl Series {
    fn wgs84() -> Self {
        let f = WGS84_F;
        let n = f / (2.0 - f);
        let (n2, n3, n4, n5, n6) = (n * n, n.powi(3), n.powi(4), n.powi(5), n.powi(6));
        let alpha = [
            n / 2.0 - 2.0 * n2 / 3.0 + 5.0 * n3 / 16.0 + 41.0 * n4 / 180.0 - 127.0 * n5 / 288.0
                + 7891.0 * n6 / 37800.0,
            13.0 * n2 / 48.0 - 3.0 * n3 / 5.0 + 557.0 * n4 / 1440.0 + 281.0 * n5 / 630.0
                - 1_983_433.0 * n6 / 1_935_360.0,
            61.0 * n3 / 240.0 - 103.0 * n4 / 140.0 + 15061.0 * n5 / 26880.0 + 167_603.0 * n6 / 181_440.0,
            49561.0 * n4 / 161_280.0 - 179.0 * n5 / 168.0 + 6_601_661.0 * n6 / 7_257_600.0,
            34729.0 * n5 / 80640.0 - 3_418_889.0 * n6 / 1_995_840.0,
            212_378_941.0 * n6 / 319_334_400.0,
        ];
        let beta = [
            n / 2.0 - 2.0 * n2 / 3.0 + 37.0 * n3 / 96.0 - n4 / 360.0 - 81.0 * n5 / 512.0 + 96199.0 * n6 / 604_800.0,
            n2 / 48.0 + n3 / 15.0 - 437.0 * n4 / 1440.0 + 46.0 * n5 / 105.0 - 1_118_711.0 * n6 / 3_870_720.0,
            17.0 * n3 / 480.0 - 37.0 * n4 / 840.0 - 209.0 * n5 / 4480.0 + 5569.0 * n6 / 90720.0,
            4397.0 * n4 / 161_280.0 - 11.0 * n5 / 504.0 - 830_251.0 * n6 / 7_257_600.0,
            4583.0 * n5 / 161_280.0 - 108_847.0 * n6 / 3_991_680.0,
            20_648_693.0 * n6 / 638_668_800.0,
        ];
        Series {
            e: (f * (2.0 - f)).sqrt(),
            a_rect: WGS84_A / (1.0 + n) * (1.0 + n2 / 4.0 + n4 / 64.0 + n6 / 256.0),
            alpha,
            beta,
        }
    }

    /// tan of the conformal latitude from tan of the geodetic latitude.
    fn conformal_tan(&self, tau: f64) -> f64 {
        let sigma = (self.e * (self.e * tau / tau.hypot(1.0)).atanh()).sinh();
        tau * sigma.hypot(1.0) - sigma * tau.hypot(1.0)
    }

    fn geodetic_tan(&self, tau_prime: f64) -> f64 {
        let e2m = 1.0 - self.e * self.e;
        let mut tau = tau_prime / e2m;
        for _ in 0..8 {
            let tp = self.conformal_tan(tau);
            let step = (tau_prime - tp) / tp.hypot(1.0) * (1.0 + e2m * tau * tau) / (e2m * tau.hypot(1.0));
            tau += step;
            if step.abs() <= 1e-14 * tau.abs().max(1.0) {
                break;
            }
        }
        tau
    }
}

fn series() -> &'static Series {
    static SERIES: std::sync::OnceLock<Series> = std::sync::OnceLock::new();
    SERIES.get_or_init(Series::wgs84)
}

/// Wraps a longitude difference into `[-180, 180)`.
fn wrap_degrees(d: f64) -> f64 {
    (d + 180.0).rem_euclid(360.0) - 180.0
}

/// Projects one record. Fails when the longitude is more than 6 degrees
/// from the zone's central meridian.
pub fn utm_forward(record: &GeoRecord, spec: &ProjectionSpec) -> Result<Point2D> {
    let (zone, hemisphere) = match *spec {
        ProjectionSpec::Utm { zone, hemisphere } => (zone, hemisphere),
        ProjectionSpec::None => return Ok(Point2D::new(record.lon, record.lat)),
    };
    let dlon = wrap_degrees(record.lon - central_meridian(zone));
    if dlon.abs() > 6.0 {
        return Err(Error::OutOfZone { lon: record.lon, zone });
    }
    let s = series();
    let lam = dlon.to_radians();
    let tau_p = s.conformal_tan(record.lat.to_radians().tan());
    let xi_p = tau_p.atan2(lam.cos());
    let eta_p = (lam.sin() / tau_p.hypot(lam.cos())).asinh();
    let (mut xi, mut eta) = (xi_p, eta_p);
    for (j, a) in s.alpha.iter().enumerate() {
        let r = 2.0 * (j + 1) as f64;
        xi += a * (r * xi_p).sin() * (r * eta_p).cosh();
        eta += a * (r * xi_p).cos() * (r * eta_p).sinh();
    }
    let x = FALSE_EASTING + UTM_SCALE * s.a_rect * eta;
    let mut y = UTM_SCALE * s.a_rect * xi;
    if hemisphere == Hemisphere::South {
        y += FALSE_NORTHING_SOUTH;
    }
    Ok(Point2D::new(x, y))
}

/// Inverse of [`utm_forward`], used only to label exported centers.
pub fn utm_inverse(point: &Point2D, spec: &ProjectionSpec) -> Result<(f64, f64)> {
    let (zone, hemisphere) = match *spec {
        ProjectionSpec::Utm { zone, hemisphere } => (zone, hemisphere),
        ProjectionSpec::None => return Ok((point.y, point.x)),
    };
    let s = series();
    let northing = if hemisphere == Hemisphere::South { point.y - FALSE_NORTHING_SOUTH } else { point.y };
    let xi = northing / (UTM_SCALE * s.a_rect);
    let eta = (point.x - FALSE_EASTING) / (UTM_SCALE * s.a_rect);
    let (mut xi_p, mut eta_p) = (xi, eta);
    for (j, b) in s.beta.iter().enumerate() {
        let r = 2.0 * (j + 1) as f64;
        xi_p -= b * (r * xi).sin() * (r * eta).cosh();
        eta_p -= b * (r * xi).cos() * (r * eta).sinh();
    }
    let tau_p = xi_p.sin() / eta_p.sinh().hypot(xi_p.cos());
    let lam = eta_p.sinh().atan2(xi_p.cos());
    let lat = s.geodetic_tan(tau_p).atan().to_degrees();
    let lon = wrap_degrees(central_meridian(zone) + lam.to_degrees());
    Ok((lat, lon))
}

/// Projects every record, in parallel and in input order.
pub fn project(records: &[GeoRecord], spec: &ProjectionSpec) -> Result<Vec<Point2D>> {
    records.par_iter().map(|r| utm_forward(r, spec)).collect()
}

/// Writes `x,y` rows, plus `lat,lon` when a projection is given to invert.
pub fn write_centers(path: impl AsRef<Path>, centers: &[Point2D], inverse: Option<&ProjectionSpec>) -> Result<()> {
    let path = path.as_ref();
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    write_centers_to(file, centers, inverse)
}

pub fn write_centers_to<W: std::io::Write>(
    writer: W,
    centers: &[Point2D],
    inverse: Option<&ProjectionSpec>,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    match inverse {
        Some(_) => w.write_record(["x", "y", "lat", "lon"])?,
        None => w.write_record(["x", "y"])?,
    }
    for c in centers {
        let mut row = vec![c.x.to_string(), c.y.to_string()];
        if let Some(spec) = inverse {
            let (lat, lon) = utm_inverse(c, spec)?;
            row.push(lat.to_string());
            row.push(lon.to_string());
        }
        w.write_record(&row)?;
    }
    w.flush().map_err(|e| Error::io("<centers>", e))?;
    Ok(())
}
