//! Neighborhood radii: for each population point, the smallest radius of a
//! closed ball around it holding at least `ceil(n/k)` population points,
//! the point itself included.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kdtree::{KdTree, DEFAULT_LEAF_SIZE};
use crate::metric::{Instance, MetricView};

/// Largest population the brute-force profile accepts.
pub const BRUTEFORCE_LIMIT: usize = 10_000;

/// Rows handed to one worker at a time.
const BLOCK: usize = 1024;

#[derive(Debug, Clone, PartialEq)]
pub struct NeighborhoodProfile {
    nr: Vec<f64>,
    m: usize,
    k: usize,
}

impl NeighborhoodProfile {
    pub fn radii(&self) -> &[f64] {
        &self.nr
    }

    #[inline]
    pub fn radius(&self, i: usize) -> f64 {
        self.nr[i]
    }

    /// Neighbor threshold `ceil(n/k)`.
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.nr.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn ensure_matches(&self, instance: &Instance) -> Result<()> {
        if self.n() != instance.n() || self.k != instance.k() {
            return Err(Error::ProfileMismatch {
                profile_n: self.n(),
                profile_k: self.k,
                n: instance.n(),
                k: instance.k(),
            });
        }
        Ok(())
    }
}

pub fn neighbor_threshold(n: usize, k: usize) -> usize {
    n.div_ceil(k)
}

/// Profile with the default KD-tree leaf size.
pub fn neighborhood_radii(instance: &Instance) -> NeighborhoodProfile {
    neighborhood_radii_with_leaf_size(instance, DEFAULT_LEAF_SIZE)
}

/// Euclidean instances go through a KD-tree; every other metric sorts each
/// row of distances. Output order is fixed by point id regardless of how
/// the rayon pool splits the work.
pub fn neighborhood_radii_with_leaf_size(instance: &Instance, leaf_size: usize) -> NeighborhoodProfile {
    let n = instance.n();
    let k = instance.k();
    let m = neighbor_threshold(n, k);
    let nr = match instance.metric() {
        MetricView::Euclidean(points) => {
            let tree = KdTree::build(points.points(), leaf_size.max(1)).expect("point set is nonempty");
            let pts = points.points();
            let mut nr = vec![0.0; n];
            nr.par_chunks_mut(BLOCK).enumerate().for_each(|(block, out)| {
                let base = block * BLOCK;
                for (offset, slot) in out.iter_mut().enumerate() {
                    *slot = tree.kth_smallest_distance(&pts[base + offset], m).expect("1 <= m <= n");
                }
            });
            nr
        }
        metric => (0..n).into_par_iter().map(|i| row_select(metric, i, m)).collect(),
    };
    NeighborhoodProfile { nr, m, k }
}

fn row_select(metric: &MetricView, i: usize, m: usize) -> f64 {
    let mut row: Vec<f64> = (0..metric.len()).map(|j| metric.distance(i, j)).collect();
    let (_, value, _) = row.select_nth_unstable_by(m - 1, f64::total_cmp);
    *value
}

/// Reference profile: full sort of every distance row.
pub fn neighborhood_radii_bruteforce(instance: &Instance) -> Result<NeighborhoodProfile> {
    let n = instance.n();
    if n > BRUTEFORCE_LIMIT {
        return Err(Error::GuardExceeded { what: "brute-force neighborhood radii", limit: BRUTEFORCE_LIMIT, n });
    }
    let k = instance.k();
    let m = neighbor_threshold(n, k);
    let nr = (0..n)
        .map(|i| {
            let mut row: Vec<f64> = (0..n).map(|j| instance.distance(i, j)).collect();
            row.sort_by(f64::total_cmp);
            row[m - 1]
        })
        .collect();
    Ok(NeighborhoodProfile { nr, m, k })
}

/// Build a profile from precomputed radii, e.g. read back from disk.
pub fn profile_from_radii(radii: Vec<f64>, k: usize) -> Result<NeighborhoodProfile> {
    let n = radii.len();
    if k == 0 || k > n {
        return Err(Error::InvalidK { k, n });
    }
    if let Some(i) = radii.iter().position(|r| r.is_nan() || *r < 0.0) {
        return Err(Error::InvalidDistance { i, j: i, value: radii[i] });
    }
    Ok(NeighborhoodProfile { nr: radii, m: neighbor_threshold(n, k), k })
}
