//! Points, finite metric spaces and problem instances.
//!
//! A [`MetricView`] is an immutable pairwise-distance provider over population
//! ids `0..n`. Euclidean distances are computed on demand; explicit matrices,
//! graph shortest paths and the discrete metric are materialized or implicit.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A planar point in meters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point2D {
    pub x: f64,
    pub y: f64,
}

impl Point2D {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    #[inline]
    pub fn distance_squared(&self, other: &Point2D) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }

    /// Euclidean distance. Every distance in the crate goes through this
    /// expression so that comparisons between code paths are bit-exact.
    #[inline]
    pub fn distance(&self, other: &Point2D) -> f64 {
        self.distance_squared(other).sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

/// Ordered multiset of planar points; ids are positions.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    points: Vec<Point2D>,
}

impl PointSet {
    pub fn new(points: Vec<Point2D>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyPointSet);
        }
        if let Some(index) = points.iter().position(|p| !p.is_finite()) {
            return Err(Error::NonFinitePoint { index });
        }
        Ok(Self { points })
    }

    /// Points on the x-axis, one per value.
    pub fn from_line(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&x| Point2D::new(x, 0.0)).collect())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point2D] {
        &self.points
    }

    pub fn get(&self, id: usize) -> Point2D {
        self.points[id]
    }

    pub fn into_inner(self) -> Vec<Point2D> {
        self.points
    }
}

/// Dense symmetric distance table.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DistanceMatrix {
    #[inline]
    fn at(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }
}

/// All-pairs hop counts of an unweighted graph. Unreachable pairs hold the
/// sentinel `n + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct HopTable {
    n: usize,
    hops: Vec<u32>,
}

impl HopTable {
    fn sentinel(&self) -> u32 {
        self.n as u32 + 1
    }

    #[inline]
    fn at(&self, i: usize, j: usize) -> f64 {
        let h = self.hops[i * self.n + j];
        if h == self.sentinel() {
            f64::INFINITY
        } else {
            f64::from(h)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum MetricView {
    Euclidean(PointSet),
    Matrix(DistanceMatrix),
    Graph(HopTable),
    Discrete(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MetricKind {
    Euclidean,
    Matrix,
    Graph,
    Discrete,
}

impl MetricView {
    pub fn len(&self) -> usize {
        match self {
            MetricView::Euclidean(p) => p.len(),
            MetricView::Matrix(m) => m.n,
            MetricView::Graph(g) => g.n,
            MetricView::Discrete(n) => *n,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn kind(&self) -> MetricKind {
        match self {
            MetricView::Euclidean(_) => MetricKind::Euclidean,
            MetricView::Matrix(_) => MetricKind::Matrix,
            MetricView::Graph(_) => MetricKind::Graph,
            MetricView::Discrete(_) => MetricKind::Discrete,
        }
    }

    /// Distance between population ids `i` and `j`. Disconnected graph pairs
    /// are `+inf`.
    #[inline]
    pub fn distance(&self, i: usize, j: usize) -> f64 {
        match self {
            MetricView::Euclidean(p) => p.points[i].distance(&p.points[j]),
            MetricView::Matrix(m) => m.at(i, j),
            MetricView::Graph(g) => g.at(i, j),
            MetricView::Discrete(_) => {
                if i == j {
                    0.0
                } else {
                    1.0
                }
            }
        }
    }

    pub fn points(&self) -> Option<&PointSet> {
        match self {
            MetricView::Euclidean(p) => Some(p),
            _ => None,
        }
    }

    /// Exhaustive O(n^3) check of the metric axioms. Reports the first
    /// violating pair or triple.
    pub fn check_axioms(&self) -> Result<()> {
        let n = self.len();
        for i in 0..n {
            let d = self.distance(i, i);
            if d != 0.0 {
                return Err(Error::NonzeroDiagonal { i });
            }
        }
        for i in 0..n {
            for j in 0..n {
                let dij = self.distance(i, j);
                if dij.is_nan() || dij < 0.0 {
                    return Err(Error::InvalidDistance { i, j, value: dij });
                }
                let dji = self.distance(j, i);
                if dij != dji {
                    return Err(Error::Asymmetric { i, j, dij, dji });
                }
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                let dij = self.distance(i, j);
                for via in 0..n {
                    let bound = self.distance(i, via) + self.distance(via, j);
                    if dij > bound {
                        return Err(Error::TriangleViolation { i, j, via, dij, bound });
                    }
                }
            }
        }
        Ok(())
    }
}

pub fn euclidean_metric(points: PointSet) -> MetricView {
    MetricView::Euclidean(points)
}

/// Unweighted shortest-path metric; BFS from every vertex.
pub fn graph_metric(n: usize, edges: &[(usize, usize)]) -> Result<MetricView> {
    if n == 0 {
        return Err(Error::EmptyPointSet);
    }
    let mut adjacency = vec![Vec::new(); n];
    for &(u, v) in edges {
        for id in [u, v] {
            if id >= n {
                return Err(Error::IdOutOfRange { id, n });
            }
        }
        if u != v {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
    }
    for list in &mut adjacency {
        list.sort_unstable();
        list.dedup();
    }

    let sentinel = n as u32 + 1;
    let mut hops = vec![sentinel; n * n];
    let mut queue = VecDeque::new();
    for source in 0..n {
        let row = &mut hops[source * n..(source + 1) * n];
        row[source] = 0;
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            let next = row[u] + 1;
            for &v in &adjacency[u] {
                if row[v] == sentinel {
                    row[v] = next;
                    queue.push_back(v);
                }
            }
        }
    }
    Ok(MetricView::Graph(HopTable { n, hops }))
}

/// Metric backed by an explicit matrix, validated on construction.
pub fn matrix_metric(rows: Vec<Vec<f64>>) -> Result<MetricView> {
    let n = rows.len();
    if n == 0 {
        return Err(Error::EmptyPointSet);
    }
    let mut data = Vec::with_capacity(n * n);
    for (row, values) in rows.into_iter().enumerate() {
        if values.len() != n {
            return Err(Error::NotSquare { rows: n, row, len: values.len() });
        }
        data.extend(values);
    }
    let view = MetricView::Matrix(DistanceMatrix { n, data });
    view.check_axioms()?;
    Ok(view)
}

pub fn discrete_metric(n: usize) -> Result<MetricView> {
    if n == 0 {
        return Err(Error::EmptyPointSet);
    }
    Ok(MetricView::Discrete(n))
}

/// A population under a metric together with the facility budget `k`.
#[derive(Debug, Clone)]
pub struct Instance {
    metric: MetricView,
    k: usize,
}

impl Instance {
    pub fn new(metric: MetricView, k: usize) -> Result<Self> {
        let n = metric.len();
        if k == 0 || k > n {
            return Err(Error::InvalidK { k, n });
        }
        Ok(Self { metric, k })
    }

    pub fn euclidean(points: PointSet, k: usize) -> Result<Self> {
        Self::new(euclidean_metric(points), k)
    }

    pub fn metric(&self) -> &MetricView {
        &self.metric
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.metric.len()
    }

    #[inline]
    pub fn distance(&self, i: usize, j: usize) -> f64 {
        self.metric.distance(i, j)
    }

    pub fn points(&self) -> Option<&PointSet> {
        self.metric.points()
    }

    /// Same population, different budget.
    pub fn with_k(&self, k: usize) -> Result<Self> {
        Self::new(self.metric.clone(), k)
    }
}
