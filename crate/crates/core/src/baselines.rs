//! Standard clustering baselines: farthest-first k-center and Lloyd-style
//! k-means / k-medians with k-means++ seeding.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fair::Solution;
use crate::metric::{Instance, Point2D, PointSet};

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FacilityOrigin {
    /// Facilities sit on these population ids.
    PopulationSubset(Vec<usize>),
    Free,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FacilitySet {
    pub facilities: Vec<Point2D>,
    pub origin: FacilityOrigin,
}

impl FacilitySet {
    pub fn from_solution(points: &PointSet, solution: &Solution) -> Self {
        FacilitySet {
            facilities: solution.centers.iter().map(|&i| points.get(i)).collect(),
            origin: FacilityOrigin::PopulationSubset(solution.centers.clone()),
        }
    }

    pub fn len(&self) -> usize {
        self.facilities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.facilities.is_empty()
    }
}

/// Farthest-first traversal from `first`. Stops early once every point
/// coincides with a center, so duplicates never produce repeated centers.
pub fn greedy_k_center(instance: &Instance, first: usize) -> Result<Solution> {
    let n = instance.n();
    if first >= n {
        return Err(Error::IdOutOfRange { id: first, n });
    }
    let k = instance.k();
    let mut nearest = vec![f64::INFINITY; n];
    let mut centers = vec![first];
    while centers.len() < k {
        let last = *centers.last().unwrap();
        nearest.par_iter_mut().enumerate().for_each(|(i, d)| {
            let dist = instance.distance(i, last);
            if dist < *d {
                *d = dist;
            }
        });
        let (far, far_d) = nearest
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |best, (i, &d)| if d > best.1 { (i, d) } else { best });
        if far_d <= 0.0 {
            break;
        }
        centers.push(far);
    }
    Ok(Solution::new(centers, "kcenter"))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LloydConfig {
    pub k: usize,
    pub seed: u64,
    pub max_iter: usize,
    /// Stop once the relative objective improvement drops below this.
    pub rel_tol: f64,
}

impl LloydConfig {
    pub fn new(k: usize) -> Self {
        LloydConfig { k, seed: 0, max_iter: 300, rel_tol: 1e-6 }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LloydResult {
    pub facilities: FacilitySet,
    /// Objective after each accepted assignment step; nonincreasing.
    pub objective_trace: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Update {
    Mean,
    CoordinateMedian,
}

/// k-means: squared-distance objective, centroid update.
pub fn lloyd_k_means(points: &PointSet, config: &LloydConfig) -> Result<LloydResult> {
    lloyd(points, config, Update::Mean)
}

/// k-medians: distance-sum objective, per-axis median update. The median
/// step does not guarantee descent under Euclidean assignment, so a round
/// that fails to improve is rolled back and ends the run.
pub fn lloyd_k_medians(points: &PointSet, config: &LloydConfig) -> Result<LloydResult> {
    lloyd(points, config, Update::CoordinateMedian)
}

fn lloyd(points: &PointSet, config: &LloydConfig, update: Update) -> Result<LloydResult> {
    let n = points.len();
    let k = config.k;
    if k == 0 || k > n {
        return Err(Error::InvalidK { k, n });
    }
    if config.max_iter == 0 {
        return Err(Error::InvalidParameter("max_iter must be at least 1".into()));
    }
    if config.rel_tol.is_nan() || config.rel_tol < 0.0 {
        return Err(Error::InvalidParameter(format!("rel_tol = {}", config.rel_tol)));
    }
    let pts = points.points();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut centers = plus_plus_seeds(pts, k, &mut rng);
    let cost = |d2: f64| match update {
        Update::Mean => d2,
        Update::CoordinateMedian => d2.sqrt(),
    };

    let mut trace: Vec<f64> = Vec::new();
    let mut converged = false;
    let mut previous_centers = centers.clone();
    let mut iterations = 0;
    while iterations < config.max_iter {
        iterations += 1;
        let mut nearest: Vec<(usize, f64)> = pts.par_iter().map(|p| closest(p, &centers)).collect();
        // sequential sum: float addition order must not depend on thread count
        let objective: f64 = nearest.iter().map(|&(_, d2)| cost(d2)).sum();

        if let Some(&prev) = trace.last() {
            if objective > prev {
                // a median step that lost ground, or rounding noise at a
                // k-means fixed point
                centers = previous_centers;
                converged = true;
                break;
            }
            trace.push(objective);
            if objective == 0.0 || prev - objective < config.rel_tol * prev {
                converged = true;
                break;
            }
        } else {
            trace.push(objective);
            if objective == 0.0 {
                converged = true;
                break;
            }
        }

        repair_empty_clusters(&mut nearest, &centers);
        previous_centers = centers.clone();
        centers = match update {
            Update::Mean => centroids(pts, &nearest, &previous_centers),
            Update::CoordinateMedian => coordinate_medians(pts, &nearest, &previous_centers),
        };
    }

    Ok(LloydResult {
        facilities: FacilitySet { facilities: centers, origin: FacilityOrigin::Free },
        objective_trace: trace,
        iterations,
        converged,
    })
}

/// k-means++ seeding: first center uniform, the rest sampled with
/// probability proportional to squared distance to the chosen set.
fn plus_plus_seeds(pts: &[Point2D], k: usize, rng: &mut ChaCha8Rng) -> Vec<Point2D> {
    let n = pts.len();
    let mut centers = Vec::with_capacity(k);
    centers.push(pts[rng.gen_range(0..n)]);
    let mut d2: Vec<f64> = pts.iter().map(|p| p.distance_squared(&centers[0])).collect();
    while centers.len() < k {
        let total: f64 = d2.iter().sum();
        let pick = if total > 0.0 {
            let target = rng.gen::<f64>() * total;
            let mut acc = 0.0;
            let mut chosen = n - 1;
            for (i, &w) in d2.iter().enumerate() {
                acc += w;
                if acc > target && w > 0.0 {
                    chosen = i;
                    break;
                }
            }
            if d2[chosen] == 0.0 {
                // rounding ran past the end; take the last positive weight
                chosen = d2.iter().rposition(|&w| w > 0.0).unwrap();
            }
            chosen
        } else {
            rng.gen_range(0..n)
        };
        let c = pts[pick];
        centers.push(c);
        for (p, d) in pts.iter().zip(d2.iter_mut()) {
            *d = d.min(p.distance_squared(&c));
        }
    }
    centers
}

/// Index and squared distance of the closest center; ties to lowest index.
fn closest(p: &Point2D, centers: &[Point2D]) -> (usize, f64) {
    let mut best = (0, p.distance_squared(&centers[0]));
    for (j, c) in centers.iter().enumerate().skip(1) {
        let d2 = p.distance_squared(c);
        if d2 < best.1 {
            best = (j, d2);
        }
    }
    best
}

/// Gives every empty cluster the point farthest from its own center, taken
/// from a cluster that can spare one.
fn repair_empty_clusters(nearest: &mut [(usize, f64)], centers: &[Point2D]) {
    let k = centers.len();
    let mut sizes = vec![0usize; k];
    for &(c, _) in nearest.iter() {
        sizes[c] += 1;
    }
    for empty in 0..k {
        if sizes[empty] > 0 {
            continue;
        }
        let donor = nearest
            .iter()
            .enumerate()
            .filter(|(_, &(c, _))| sizes[c] > 1)
            .fold(None, |best: Option<(usize, f64)>, (i, &(_, d2))| match best {
                Some((_, bd)) if d2 <= bd => best,
                _ => Some((i, d2)),
            });
        let Some((i, _)) = donor else { break };
        sizes[nearest[i].0] -= 1;
        sizes[empty] += 1;
        nearest[i] = (empty, 0.0);
    }
}

fn centroids(pts: &[Point2D], nearest: &[(usize, f64)], old: &[Point2D]) -> Vec<Point2D> {
    let k = old.len();
    let mut sum = vec![(0.0f64, 0.0f64, 0usize); k];
    for (p, &(c, _)) in pts.iter().zip(nearest) {
        sum[c].0 += p.x;
        sum[c].1 += p.y;
        sum[c].2 += 1;
    }
    sum.iter()
        .zip(old)
        .map(|(&(sx, sy, count), &prev)| {
            if count == 0 {
                prev
            } else {
                Point2D::new(sx / count as f64, sy / count as f64)
            }
        })
        .collect()
}

fn coordinate_medians(pts: &[Point2D], nearest: &[(usize, f64)], old: &[Point2D]) -> Vec<Point2D> {
    let k = old.len();
    let mut xs = vec![Vec::new(); k];
    let mut ys = vec![Vec::new(); k];
    for (p, &(c, _)) in pts.iter().zip(nearest) {
        xs[c].push(p.x);
        ys[c].push(p.y);
    }
    xs.into_iter()
        .zip(ys)
        .zip(old)
        .map(|((mut x, mut y), &prev)| {
            if x.is_empty() {
                prev
            } else {
                Point2D::new(median(&mut x), median(&mut y))
            }
        })
        .collect()
}

/// Median of a nonempty slice; even lengths average the two middle values.
pub fn median(values: &mut [f64]) -> f64 {
    let n = values.len();
    values.sort_by(f64::total_cmp);
    if n % 2 == 1 {
        values[n / 2]
    } else {
        (values[n / 2 - 1] + values[n / 2]) / 2.0
    }
}
