//! Named example instances.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::metric::{discrete_metric, euclidean_metric, graph_metric, Instance, MetricView, Point2D, PointSet};

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FixtureData {
    Euclidean { points: Vec<Point2D> },
    Graph { n: usize, edges: Vec<(usize, usize)> },
    Discrete { n: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Fixture {
    pub name: String,
    pub k: usize,
    #[serde(flatten)]
    pub data: FixtureData,
}

impl Fixture {
    pub fn metric(&self) -> Result<MetricView> {
        match &self.data {
            FixtureData::Euclidean { points } => Ok(euclidean_metric(PointSet::new(points.clone())?)),
            FixtureData::Graph { n, edges } => graph_metric(*n, edges),
            FixtureData::Discrete { n } => discrete_metric(*n),
        }
    }

    pub fn instance(&self) -> Result<Instance> {
        Instance::new(self.metric()?, self.k)
    }

    pub fn points(&self) -> Option<&[Point2D]> {
        match &self.data {
            FixtureData::Euclidean { points } => Some(points),
            _ => None,
        }
    }
}

/// Names accepted by [`by_name`], with a one-line description each.
pub const CATALOG: &[(&str, &str)] = &[
    ("example1", "line {-100, 0, 0, 1, 1, 100}, k = 3"),
    ("star", "star graph with 5 leaves, k = 2"),
    ("discrete", "discrete metric on 6 points, k = 2"),
    ("three_squares_graph", "three disjoint 4-cycles under the graph metric, k = 4"),
    ("three_squares_euclidean", "three unit squares 10 m apart, k = 4"),
    ("real_line_random", "50 uniform points on [0, 1000) along a line, k = 5, seed 0"),
    ("two_density", "dense blob of 900 plus sparse ring of 100, k = 10, seed 0"),
];

pub fn by_name(name: &str) -> Result<Fixture> {
    match name {
        "example1" => example1(100.0),
        "star" => star(5, 2),
        "discrete" => discrete(6, 2),
        "three_squares_graph" => Ok(three_squares_graph()),
        "three_squares_euclidean" => three_squares_euclidean(10.0),
        "real_line_random" => real_line_random(50, 5, 0),
        "two_density" => Ok(two_density(0)),
        _ => Err(Error::UnknownFixture(name.to_string())),
    }
}

fn on_line(values: &[f64]) -> Vec<Point2D> {
    values.iter().map(|&x| Point2D::new(x, 0.0)).collect()
}

/// `{-x, 0, 0, 1, 1, x}` on the line with `k = 3`.
pub fn example1(x: f64) -> Result<Fixture> {
    if !(x.is_finite() && x > 1.0) {
        return Err(Error::InvalidParameter(format!("example1 needs x > 1, got {x}")));
    }
    Ok(Fixture {
        name: "example1".into(),
        k: 3,
        data: FixtureData::Euclidean { points: on_line(&[-x, 0.0, 0.0, 1.0, 1.0, x]) },
    })
}

/// Star with hub `0` and leaves `1..=leaves`.
pub fn star(leaves: usize, k: usize) -> Result<Fixture> {
    if leaves == 0 || k == 0 || k > leaves + 1 {
        return Err(Error::InvalidParameter("star needs leaves >= 1 and 1 <= k <= leaves + 1".into()));
    }
    Ok(Fixture {
        name: "star".into(),
        k,
        data: FixtureData::Graph { n: leaves + 1, edges: (1..=leaves).map(|x| (0, x)).collect() },
    })
}

pub fn discrete(n: usize, k: usize) -> Result<Fixture> {
    if n == 0 || k == 0 || k > n {
        return Err(Error::InvalidK { k, n });
    }
    Ok(Fixture { name: "discrete".into(), k, data: FixtureData::Discrete { n } })
}

/// Three 4-cycles; square `s` holds ids `4s..4s+4` in cycle order.
pub fn three_squares_graph() -> Fixture {
    let mut edges = Vec::new();
    for s in 0..3 {
        let b = 4 * s;
        edges.extend([(b, b + 1), (b + 1, b + 2), (b + 2, b + 3), (b + 3, b)]);
    }
    Fixture { name: "three_squares_graph".into(), k: 4, data: FixtureData::Graph { n: 12, edges } }
}

/// Three unit squares side by side, `gap` meters apart. The gap must exceed
/// the square diagonal so that every neighborhood stays inside its square.
pub fn three_squares_euclidean(gap: f64) -> Result<Fixture> {
    if !(gap.is_finite() && gap > std::f64::consts::SQRT_2) {
        return Err(Error::InvalidParameter(format!("square gap {gap} must exceed sqrt(2)")));
    }
    let mut points = Vec::with_capacity(12);
    for s in 0..3 {
        let x0 = s as f64 * (1.0 + gap);
        points.extend([
            Point2D::new(x0, 0.0),
            Point2D::new(x0 + 1.0, 0.0),
            Point2D::new(x0 + 1.0, 1.0),
            Point2D::new(x0, 1.0),
        ]);
    }
    Ok(Fixture { name: "three_squares_euclidean".into(), k: 4, data: FixtureData::Euclidean { points } })
}

/// `n` uniform values on `[0, 1000)` placed on the x-axis.
pub fn real_line_random(n: usize, k: usize, seed: u64) -> Result<Fixture> {
    if n == 0 || k == 0 || k > n {
        return Err(Error::InvalidK { k, n });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..1000.0)).collect();
    Ok(Fixture { name: "real_line_random".into(), k, data: FixtureData::Euclidean { points: on_line(&values) } })
}

/// `n` uniform points in a 1000 m square.
pub fn random_plane(n: usize, k: usize, seed: u64) -> Result<Fixture> {
    if n == 0 || k == 0 || k > n {
        return Err(Error::InvalidK { k, n });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = (0..n).map(|_| Point2D::new(rng.gen_range(0.0..1000.0), rng.gen_range(0.0..1000.0))).collect();
    Ok(Fixture { name: "random_plane".into(), k, data: FixtureData::Euclidean { points } })
}

/// Synthetic town: 900 points in a dense core (uniform in a disc of radius
/// 1 km) and 100 on a sparse ring 8 to 12 km out, with `k = 10`.
pub fn two_density(seed: u64) -> Fixture {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = Vec::with_capacity(1000);
    let mut polar = |r_min: f64, r_max: f64| {
        let theta = rng.gen_range(0.0..std::f64::consts::TAU);
        // uniform over the annulus area
        let r = rng.gen_range(r_min * r_min..r_max * r_max).sqrt();
        Point2D::new(r * theta.cos(), r * theta.sin())
    };
    for _ in 0..900 {
        points.push(polar(0.0, 1_000.0));
    }
    for _ in 0..100 {
        points.push(polar(8_000.0, 12_000.0));
    }
    Fixture { name: "two_density".into(), k: 10, data: FixtureData::Euclidean { points } }
}
