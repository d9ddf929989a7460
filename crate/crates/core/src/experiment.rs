//! Running a named algorithm on an instance and scoring the result.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::baselines::{greedy_k_center, lloyd_k_means, lloyd_k_medians, LloydConfig};
use crate::error::{Error, Result};
use crate::evaluate::{report, EvaluationReport, ExtendedReal, Facilities};
use crate::fair::{alpha_fair_k_center, fair_k_center, real_line_fair, two_fair_k_center, DEFAULT_ITERATIONS};
use crate::metric::{Instance, Point2D};
use crate::neighborhood::NeighborhoodProfile;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Fair,
    #[serde(rename = "2fair")]
    TwoFair,
    AlphaFair(f64),
    KCenter,
    KMeans,
    KMedians,
    RealLine,
}

impl Algorithm {
    /// The four algorithms compared by default.
    pub const COMPARISON: [Algorithm; 4] = [Algorithm::Fair, Algorithm::KMeans, Algorithm::KMedians, Algorithm::KCenter];

    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::Fair => "fair",
            Algorithm::TwoFair => "2fair",
            Algorithm::AlphaFair(_) => "alphafair",
            Algorithm::KCenter => "kcenter",
            Algorithm::KMeans => "kmeans",
            Algorithm::KMedians => "kmedians",
            Algorithm::RealLine => "realline",
        }
    }

    /// Parses a name; `alphafair` takes its parameter from `alpha`.
    pub fn parse(name: &str, alpha: Option<f64>) -> Result<Self> {
        Ok(match name {
            "fair" => Algorithm::Fair,
            "2fair" => Algorithm::TwoFair,
            "alphafair" => Algorithm::AlphaFair(
                alpha.ok_or_else(|| Error::InvalidParameter("alphafair needs an alpha value".into()))?,
            ),
            "kcenter" => Algorithm::KCenter,
            "kmeans" => Algorithm::KMeans,
            "kmedians" => Algorithm::KMedians,
            "realline" => Algorithm::RealLine,
            other => return Err(Error::InvalidParameter(format!("unknown algorithm `{other}`"))),
        })
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Algorithm::AlphaFair(a) => write!(f, "alphafair({a})"),
            other => f.write_str(other.name()),
        }
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    /// Accepts the plain names and `alphafair(<alpha>)`.
    fn from_str(s: &str) -> Result<Self> {
        if let Some(inner) = s.strip_prefix("alphafair(").and_then(|r| r.strip_suffix(')')) {
            let alpha = inner.trim().parse().map_err(|_| Error::InvalidParameter(format!("bad alpha in `{s}`")))?;
            return Ok(Algorithm::AlphaFair(alpha));
        }
        Algorithm::parse(s, None)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunParams {
    /// Bisection depth of `fair`.
    pub t: u32,
    /// Seed of the Lloyd baselines.
    pub seed: u64,
    /// Starting id of greedy k-center.
    pub first: usize,
}

impl Default for RunParams {
    fn default() -> Self {
        RunParams { t: DEFAULT_ITERATIONS, seed: 0, first: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunOutcome {
    pub algorithm: String,
    /// Population ids of the centers, for algorithms that pick them from the population.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub center_ids: Option<Vec<usize>>,
    /// Center coordinates (Euclidean instances only).
    pub centers: Vec<Point2D>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha_param: Option<f64>,
    pub report: EvaluationReport,
}

fn line_values(instance: &Instance) -> Result<Vec<f64>> {
    let points = instance.points().ok_or(Error::NotEuclidean("realline"))?.points();
    let y0 = points[0].y;
    if points.iter().any(|p| p.y != y0) {
        return Err(Error::InvalidParameter("realline needs every point on one horizontal line".into()));
    }
    Ok(points.iter().map(|p| p.x).collect())
}

pub fn run_algorithm(
    algorithm: Algorithm,
    instance: &Instance,
    profile: &NeighborhoodProfile,
    params: &RunParams,
) -> Result<RunOutcome> {
    profile.ensure_matches(instance)?;
    let by_ids = |ids: Vec<usize>, alpha_param: Option<f64>| -> Result<RunOutcome> {
        let report = report(instance, profile, Facilities::Population(&ids))?;
        let centers = instance.points().map_or_else(Vec::new, |p| ids.iter().map(|&i| p.get(i)).collect());
        Ok(RunOutcome { algorithm: algorithm.to_string(), center_ids: Some(ids), centers, alpha_param, report })
    };
    let free = |centers: Vec<Point2D>| -> Result<RunOutcome> {
        let report = report(instance, profile, Facilities::Coordinates(&centers))?;
        Ok(RunOutcome { algorithm: algorithm.to_string(), center_ids: None, centers, alpha_param: None, report })
    };
    let lloyd = LloydConfig::new(instance.k()).with_seed(params.seed);
    match algorithm {
        Algorithm::Fair => {
            let s = fair_k_center(params.t, instance, profile)?;
            by_ids(s.centers, s.alpha_param)
        }
        Algorithm::TwoFair => by_ids(two_fair_k_center(instance, profile)?.centers, Some(2.0)),
        Algorithm::AlphaFair(alpha) => {
            let s = alpha_fair_k_center(alpha, instance, profile)?;
            by_ids(s.centers, Some(alpha))
        }
        Algorithm::KCenter => by_ids(greedy_k_center(instance, params.first)?.centers, None),
        Algorithm::KMeans => {
            let points = instance.points().ok_or(Error::NotEuclidean("kmeans"))?;
            free(lloyd_k_means(points, &lloyd)?.facilities.facilities)
        }
        Algorithm::KMedians => {
            let points = instance.points().ok_or(Error::NotEuclidean("kmedians"))?;
            free(lloyd_k_medians(points, &lloyd)?.facilities.facilities)
        }
        Algorithm::RealLine => by_ids(real_line_fair(&line_values(instance)?, instance.k())?.centers, Some(1.0)),
    }
}

/// One row of a comparison table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompareRow {
    pub algorithm: String,
    pub alpha: ExtendedReal,
    pub kmeans_mean: f64,
    pub kmedians_mean: f64,
    pub kcenter_max: f64,
    pub size_stddev: f64,
}

impl From<&RunOutcome> for CompareRow {
    fn from(o: &RunOutcome) -> Self {
        CompareRow {
            algorithm: o.algorithm.clone(),
            alpha: o.report.alpha,
            kmeans_mean: o.report.kmeans_mean,
            kmedians_mean: o.report.kmedians_mean,
            kcenter_max: o.report.kcenter_max,
            size_stddev: o.report.size_stddev,
        }
    }
}

/// Runs every algorithm against the same profile.
pub fn compare(
    algorithms: &[Algorithm],
    instance: &Instance,
    profile: &NeighborhoodProfile,
    params: &RunParams,
) -> Result<Vec<CompareRow>> {
    algorithms
        .iter()
        .map(|&a| run_algorithm(a, instance, profile, params).map(|o| CompareRow::from(&o)))
        .collect()
}

/// Fixed-width text rendering of comparison rows.
pub fn format_table(rows: &[CompareRow]) -> String {
    let mut out = format!(
        "{:<16} {:>12} {:>16} {:>14} {:>14} {:>12}\n",
        "algorithm", "alpha", "kmeans_mean", "kmedians_mean", "kcenter_max", "size_stddev"
    );
    for r in rows {
        let alpha = if r.alpha.is_finite() { format!("{:.5}", r.alpha.value()) } else { "inf".to_string() };
        out.push_str(&format!(
            "{:<16} {:>12} {:>16.3} {:>14.3} {:>14.3} {:>12.3}\n",
            r.algorithm, alpha, r.kmeans_mean, r.kmedians_mean, r.kcenter_max, r.size_stddev
        ));
    }
    out
}
