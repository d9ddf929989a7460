//! Fair center selection.
//!
//! All greedy variants share one loop: keep a candidate set `Z` ordered by
//! neighborhood radius (ties by id), repeatedly open the first remaining
//! candidate `s` as a center and drop from `Z` every point the new center
//! serves well enough. They differ only in that removal rule:
//!
//! * [`two_fair_k_center`]: `d(i,s) <= NR(i) + NR(s)`. Opened centers have
//!   pairwise disjoint `NR`-balls, so at most `k` are opened, and every point
//!   ends within `2 * NR(i)` of a center.
//! * [`alpha_fair_k_center`]: `d(i,s) / NR(i) <= alpha`. Always `alpha`-fair,
//!   but may open more than `k` centers when `alpha < 2`.
//!
//! [`fair_k_center`] bisects `alpha` over `[1, 2]` to find the smallest value
//! whose center count still fits in `k`.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::evaluate::ExtendedReal;
use crate::metric::Instance;
use crate::neighborhood::{neighbor_threshold, NeighborhoodProfile};

/// Default bisection depth.
pub const DEFAULT_ITERATIONS: u32 = 20;

const PAR_MIN: usize = 4096;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Solution {
    /// Population ids in selection order.
    pub centers: Vec<usize>,
    pub algorithm: &'static str,
    /// Fairness parameter the centers were selected with, when there is one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha_param: Option<f64>,
}

impl Solution {
    pub fn new(centers: Vec<usize>, algorithm: &'static str) -> Self {
        Self { centers, algorithm, alpha_param: None }
    }

    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    /// Checks `1 <= |S| <= k` and that ids are distinct and in range.
    pub fn validate(&self, n: usize, k: usize) -> Result<()> {
        if self.centers.is_empty() || self.centers.len() > k {
            return Err(Error::InvalidParameter(format!(
                "solution has {} centers, expected 1..={k}",
                self.centers.len()
            )));
        }
        let mut seen = vec![false; n];
        for &id in &self.centers {
            if id >= n {
                return Err(Error::IdOutOfRange { id, n });
            }
            if std::mem::replace(&mut seen[id], true) {
                return Err(Error::InvalidParameter(format!("center {id} repeated")));
            }
        }
        Ok(())
    }
}

/// Output of [`alpha_fair_k_center`]; unlike a [`Solution`] it may hold more
/// than `k` centers.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CandidateSolution {
    pub centers: Vec<usize>,
    pub alpha_param: f64,
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(1.0..=2.0).contains(&alpha) {
        return Err(Error::AlphaOutOfRange(alpha));
    }
    Ok(())
}

/// Point ids sorted by `(NR, id)`.
fn radius_order(profile: &NeighborhoodProfile) -> Vec<usize> {
    let nr = profile.radii();
    let mut order: Vec<usize> = (0..nr.len()).collect();
    order.sort_by(|&a, &b| nr[a].total_cmp(&nr[b]).then(a.cmp(&b)));
    order
}

/// The shared selection loop. Stops early once more than `cap` centers are
/// open.
fn select_centers<F>(order: Vec<usize>, cap: usize, removes: F) -> Vec<usize>
where
    F: Fn(usize, usize) -> bool + Sync,
{
    let mut candidates = order;
    let mut centers = Vec::new();
    while let Some(&s) = candidates.first() {
        centers.push(s);
        if centers.len() > cap {
            break;
        }
        let keep = |&i: &usize| i != s && !removes(i, s);
        candidates = if candidates.len() >= PAR_MIN {
            candidates.par_iter().copied().filter(keep).collect()
        } else {
            candidates.into_iter().filter(keep).collect()
        };
    }
    centers
}

pub fn two_fair_k_center(instance: &Instance, profile: &NeighborhoodProfile) -> Result<Solution> {
    profile.ensure_matches(instance)?;
    let nr = profile.radii();
    let centers = select_centers(radius_order(profile), usize::MAX, |i, s| {
        instance.distance(i, s) <= nr[i] + nr[s]
    });
    Ok(Solution::new(centers, "2fair"))
}

fn alpha_fair_capped(alpha: f64, instance: &Instance, profile: &NeighborhoodProfile, cap: usize) -> Vec<usize> {
    let nr = profile.radii();
    // The ratio form matches `alpha_of` bit for bit, so the output is
    // alpha-fair with no rounding slack.
    select_centers(radius_order(profile), cap, |i, s| {
        ExtendedReal::ratio(instance.distance(i, s), nr[i]) <= alpha
    })
}

pub fn alpha_fair_k_center(alpha: f64, instance: &Instance, profile: &NeighborhoodProfile) -> Result<CandidateSolution> {
    check_alpha(alpha)?;
    profile.ensure_matches(instance)?;
    Ok(CandidateSolution { centers: alpha_fair_capped(alpha, instance, profile, usize::MAX), alpha_param: alpha })
}

/// `f(alpha)`: number of centers [`alpha_fair_k_center`] opens, per alpha.
pub fn count_centers_curve(
    instance: &Instance,
    profile: &NeighborhoodProfile,
    alphas: &[f64],
) -> Result<Vec<(f64, usize)>> {
    profile.ensure_matches(instance)?;
    alphas
        .iter()
        .map(|&alpha| {
            check_alpha(alpha)?;
            Ok((alpha, alpha_fair_capped(alpha, instance, profile, usize::MAX).len()))
        })
        .collect()
}

/// Probe record of one [`fair_k_center`] run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchTrace {
    /// `(alpha, feasible)` per bisection step, in order.
    pub probes: Vec<(f64, bool)>,
    pub low: f64,
    pub high: f64,
}

pub fn fair_k_center(t: u32, instance: &Instance, profile: &NeighborhoodProfile) -> Result<Solution> {
    fair_k_center_traced(t, instance, profile).map(|(s, _)| s)
}

/// Bisection over `[1, 2]` keeping `high` feasible (`f(high) <= k`). `f` is
/// not monotone in general, so `high` is the last feasible probe rather than
/// a global minimum; the returned centers are always valid.
pub fn fair_k_center_traced(
    t: u32,
    instance: &Instance,
    profile: &NeighborhoodProfile,
) -> Result<(Solution, SearchTrace)> {
    if t == 0 {
        return Err(Error::InvalidParameter("bisection depth t must be at least 1".into()));
    }
    profile.ensure_matches(instance)?;
    let k = instance.k();
    let mut low = 1.0f64;
    let mut high = 2.0f64;
    let mut best: Option<Vec<usize>> = None;
    let mut probes = Vec::with_capacity(t as usize);
    for _ in 0..t {
        let mid = (low + high) / 2.0;
        let centers = alpha_fair_capped(mid, instance, profile, k);
        let feasible = centers.len() <= k;
        probes.push((mid, feasible));
        if feasible {
            high = mid;
            best = Some(centers);
        } else {
            low = mid;
        }
    }
    let centers = match best {
        Some(c) => c,
        None => alpha_fair_capped(high, instance, profile, usize::MAX),
    };
    if centers.len() > k {
        // Only reachable through floating-point rounding of the metric:
        // alpha = 2 satisfies the disjoint-ball bound for exact distances.
        log::warn!("alpha = {high} opened {} > k = {k} centers; falling back to 2fair", centers.len());
        let fallback = two_fair_k_center(instance, profile)?;
        return Ok((
            Solution { alpha_param: Some(2.0), ..fallback },
            SearchTrace { probes, low, high },
        ));
    }
    let solution = Solution { centers, algorithm: "fair", alpha_param: Some(high) };
    Ok((solution, SearchTrace { probes, low, high }))
}

/// One-dimensional selection: sort the values and take every
/// `ceil(n/k)`-th one starting from the smallest. Yields at most `k`
/// centers and is 1-fair on the line.
pub fn real_line_fair(values: &[f64], k: usize) -> Result<Solution> {
    let n = values.len();
    if n == 0 {
        return Err(Error::EmptyPointSet);
    }
    if k == 0 || k > n {
        return Err(Error::InvalidK { k, n });
    }
    if let Some(index) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinitePoint { index });
    }
    let m = neighbor_threshold(n, k);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let centers = order.into_iter().step_by(m).collect();
    Ok(Solution::new(centers, "realline"))
}
