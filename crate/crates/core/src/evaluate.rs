//! Objective functions over an (instance, facilities) pair: the fairness
//! ratio, the k-center / k-medians / k-means costs and load balance.

use std::cmp::Ordering;
use std::fmt;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::kdtree::{KdTree, DEFAULT_LEAF_SIZE};
use crate::metric::{Instance, MetricView, Point2D};
use crate::neighborhood::NeighborhoodProfile;

/// Nonnegative real or `+inf`, never NaN. Ordered totally.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtendedReal(f64);

impl ExtendedReal {
    pub const ZERO: Self = ExtendedReal(0.0);
    pub const ONE: Self = ExtendedReal(1.0);
    pub const INFINITY: Self = ExtendedReal(f64::INFINITY);

    pub fn new(value: f64) -> Option<Self> {
        (value >= 0.0).then_some(ExtendedReal(value))
    }

    /// `num / den` with `0/0 = inf/inf = 1` and `c/0 = inf` for `c > 0`.
    #[inline]
    pub fn ratio(num: f64, den: f64) -> Self {
        debug_assert!(num >= 0.0 && den >= 0.0);
        if den == 0.0 {
            if num == 0.0 {
                Self::ONE
            } else {
                Self::INFINITY
            }
        } else if den.is_infinite() && num.is_infinite() {
            Self::ONE
        } else {
            ExtendedReal(num / den)
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }
}

impl Eq for ExtendedReal {}

impl PartialOrd for ExtendedReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtendedReal {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

impl PartialEq<f64> for ExtendedReal {
    fn eq(&self, other: &f64) -> bool {
        self.0 == *other
    }
}

impl PartialOrd<f64> for ExtendedReal {
    fn partial_cmp(&self, other: &f64) -> Option<Ordering> {
        self.0.partial_cmp(other)
    }
}

impl fmt::Display for ExtendedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_infinite() {
            f.write_str("inf")
        } else {
            fmt::Display::fmt(&self.0, f)
        }
    }
}

/// Finite values serialize as numbers, infinity as the string `"inf"`.
impl Serialize for ExtendedReal {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0.is_finite() {
            serializer.serialize_f64(self.0)
        } else {
            serializer.serialize_str("inf")
        }
    }
}

/// Where facilities sit: on population points, or at free coordinates
/// (Euclidean instances only).
#[derive(Debug, Clone, Copy)]
pub enum Facilities<'a> {
    Population(&'a [usize]),
    Coordinates(&'a [Point2D]),
}

impl Facilities<'_> {
    pub fn len(&self) -> usize {
        match self {
            Facilities::Population(ids) => ids.len(),
            Facilities::Coordinates(c) => c.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Nearest-facility ownership. `owner[i]` indexes the facility list.
#[derive(Debug, Clone, PartialEq)]
pub struct Assignment {
    pub owner: Vec<usize>,
    /// `d(i, S)` per point.
    pub distance: Vec<f64>,
    pub sizes: Vec<usize>,
}

impl Assignment {
    /// Point ids served by each facility.
    pub fn clusters(&self) -> Vec<Vec<usize>> {
        let mut clusters = vec![Vec::new(); self.sizes.len()];
        for (i, &f) in self.owner.iter().enumerate() {
            clusters[f].push(i);
        }
        clusters
    }
}

// Facility counts above this use a KD-tree over the facilities.
const KD_MIN_FACILITIES: usize = 32;
const KD_MIN_POINTS: usize = 2048;

/// Assigns every point to its closest facility; ties go to the lowest
/// facility index.
pub fn assign(metric: &MetricView, facilities: Facilities<'_>) -> Result<Assignment> {
    if facilities.is_empty() {
        return Err(Error::NoFacilities);
    }
    let n = metric.len();
    let nearest: Vec<(usize, f64)> = match (facilities, metric) {
        (Facilities::Population(ids), _) => {
            if let Some(&id) = ids.iter().find(|&&id| id >= n) {
                return Err(Error::IdOutOfRange { id, n });
            }
            match metric.points() {
                Some(points) if ids.len() >= KD_MIN_FACILITIES && n >= KD_MIN_POINTS => {
                    let coords: Vec<Point2D> = ids.iter().map(|&s| points.get(s)).collect();
                    nearest_by_tree(points.points(), &coords)
                }
                _ => (0..n)
                    .into_par_iter()
                    .map(|i| scan_min(ids.iter().map(|&s| metric.distance(i, s))))
                    .collect(),
            }
        }
        (Facilities::Coordinates(coords), MetricView::Euclidean(points)) => {
            if coords.len() >= KD_MIN_FACILITIES && n >= KD_MIN_POINTS {
                nearest_by_tree(points.points(), coords)
            } else {
                points
                    .points()
                    .par_iter()
                    .map(|p| scan_min(coords.iter().map(|c| p.distance(c))))
                    .collect()
            }
        }
        (Facilities::Coordinates(_), _) => return Err(Error::NotEuclidean("coordinate facilities")),
    };

    let mut sizes = vec![0usize; facilities.len()];
    let mut owner = Vec::with_capacity(n);
    let mut distance = Vec::with_capacity(n);
    for (f, d) in nearest {
        sizes[f] += 1;
        owner.push(f);
        distance.push(d);
    }
    Ok(Assignment { owner, distance, sizes })
}

fn scan_min(distances: impl Iterator<Item = f64>) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    let mut first = true;
    for (f, d) in distances.enumerate() {
        if first || d < best.1 {
            best = (f, d);
            first = false;
        }
    }
    best
}

fn nearest_by_tree(points: &[Point2D], facilities: &[Point2D]) -> Vec<(usize, f64)> {
    let tree = KdTree::build(facilities, DEFAULT_LEAF_SIZE).expect("facilities nonempty");
    points.par_iter().map(|p| tree.nearest(p)).collect()
}

/// `max_i d(i,S) / NR(i)` under the 0/0 and inf/inf conventions.
pub fn alpha_of(profile: &NeighborhoodProfile, metric: &MetricView, facilities: Facilities<'_>) -> Result<ExtendedReal> {
    let assignment = assign(metric, facilities)?;
    alpha_from_assignment(profile, &assignment)
}

pub fn alpha_from_assignment(profile: &NeighborhoodProfile, assignment: &Assignment) -> Result<ExtendedReal> {
    if profile.n() != assignment.distance.len() {
        return Err(Error::ProfileMismatch {
            profile_n: profile.n(),
            profile_k: profile.k(),
            n: assignment.distance.len(),
            k: profile.k(),
        });
    }
    Ok(assignment
        .distance
        .iter()
        .zip(profile.radii())
        .map(|(&d, &r)| ExtendedReal::ratio(d, r))
        .max()
        .unwrap_or(ExtendedReal::ZERO))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Objectives {
    pub kcenter_max: f64,
    pub kmedians_sum: f64,
    pub kmedians_mean: f64,
    pub kmeans_sum: f64,
    pub kmeans_mean: f64,
}

pub fn objectives(assignment: &Assignment) -> Objectives {
    let n = assignment.distance.len() as f64;
    let (max, sum, sq) = assignment
        .distance
        .iter()
        .fold((0.0f64, 0.0f64, 0.0f64), |(max, sum, sq), &d| (max.max(d), sum + d, sq + d * d));
    Objectives { kcenter_max: max, kmedians_sum: sum, kmedians_mean: sum / n, kmeans_sum: sq, kmeans_mean: sq / n }
}

/// Population standard deviation of cluster sizes over the facilities
/// actually present.
pub fn load_balance_stddev(assignment: &Assignment) -> f64 {
    let sizes = &assignment.sizes;
    if sizes.is_empty() {
        return 0.0;
    }
    let count = sizes.len() as f64;
    let mean = sizes.iter().sum::<usize>() as f64 / count;
    let var = sizes.iter().map(|&s| (s as f64 - mean).powi(2)).sum::<f64>() / count;
    var.sqrt()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvaluationReport {
    pub alpha: ExtendedReal,
    pub num_facilities: usize,
    pub kcenter_max: f64,
    pub kmedians_sum: f64,
    pub kmedians_mean: f64,
    pub kmeans_sum: f64,
    pub kmeans_mean: f64,
    pub sizes: Vec<usize>,
    pub size_stddev: f64,
}

pub fn report(instance: &Instance, profile: &NeighborhoodProfile, facilities: Facilities<'_>) -> Result<EvaluationReport> {
    profile.ensure_matches(instance)?;
    let assignment = assign(instance.metric(), facilities)?;
    let alpha = alpha_from_assignment(profile, &assignment)?;
    let obj = objectives(&assignment);
    Ok(EvaluationReport {
        alpha,
        num_facilities: facilities.len(),
        kcenter_max: obj.kcenter_max,
        kmedians_sum: obj.kmedians_sum,
        kmedians_mean: obj.kmedians_mean,
        kmeans_sum: obj.kmeans_sum,
        kmeans_mean: obj.kmeans_mean,
        size_stddev: load_balance_stddev(&assignment),
        sizes: assignment.sizes,
    })
}
