//! Exact solvers for small instances and the canonical fixtures.
//!
//! Deciding whether some `<= k` subset of the population is `alpha`-fair is
//! a set-cover question: center `c` covers point `j` when
//! `d(c, j) / NR(j) <= alpha`. [`feasible_alpha`] answers it by
//! branch-and-bound over bitmasks; [`optimal_alpha`] bisects the finite set
//! of ratios `d(i, j) / NR(j)`, one of which is always the optimum.

pub mod fixtures;
pub mod reduction;

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::evaluate::ExtendedReal;
use crate::fair::{two_fair_k_center, Solution};
use crate::evaluate::{alpha_of, Facilities};
use crate::metric::Instance;
use crate::neighborhood::{neighborhood_radii_bruteforce, NeighborhoodProfile};

pub use reduction::{bruteforce_dominating_set, dominating_set_reduction, ReductionOutput, SimpleGraph};

/// Population limit of the bitmask cover search.
pub const EXACT_LIMIT: usize = 64;
/// Population limit of [`optimal_alpha`].
pub const OPTIMAL_LIMIT: usize = 30;

#[derive(Debug, Clone, PartialEq)]
pub struct Feasibility {
    pub feasible: bool,
    pub witness: Option<Solution>,
}

/// Coverage masks for one alpha, with dominated candidates dropped.
struct CoverSystem {
    full: u64,
    /// `(center id, mask of covered points)`, undominated only.
    sets: Vec<(usize, u64)>,
    /// For each point, indices into `sets` covering it.
    coverers: Vec<Vec<usize>>,
}

impl CoverSystem {
    fn build(instance: &Instance, profile: &NeighborhoodProfile, alpha: f64) -> Self {
        let n = instance.n();
        let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        let masks: Vec<u64> = (0..n)
            .map(|c| {
                (0..n)
                    .filter(|&j| ExtendedReal::ratio(instance.distance(c, j), profile.radius(j)) <= alpha)
                    .fold(0u64, |m, j| m | (1 << j))
            })
            .collect();
        // A set contained in another is never needed; among equal sets keep
        // the lowest id.
        let sets: Vec<(usize, u64)> = (0..n)
            .filter(|&c| {
                !(0..n).any(|o| {
                    o != c && masks[c] & !masks[o] == 0 && (masks[o] != masks[c] || o < c)
                })
            })
            .map(|c| (c, masks[c]))
            .collect();
        let mut coverers = vec![Vec::new(); n];
        for (idx, &(_, mask)) in sets.iter().enumerate() {
            for (j, list) in coverers.iter_mut().enumerate() {
                if mask >> j & 1 == 1 {
                    list.push(idx);
                }
            }
        }
        CoverSystem { full, sets, coverers }
    }

    fn search(&self, covered: u64, budget: usize, chosen: &mut Vec<usize>, failed: &mut HashMap<u64, usize>) -> bool {
        if covered == self.full {
            return true;
        }
        if budget == 0 {
            return false;
        }
        if failed.get(&covered).is_some_and(|&b| b >= budget) {
            return false;
        }
        let uncovered = self.full & !covered;
        let best_gain = self.sets.iter().map(|&(_, m)| (m & uncovered).count_ones()).max().unwrap_or(0);
        if best_gain == 0 || (uncovered.count_ones() as usize).div_ceil(best_gain as usize) > budget {
            failed.insert(covered, budget);
            return false;
        }
        // branch on the uncovered point with the fewest covering sets
        let pivot = (0..self.coverers.len())
            .filter(|&j| uncovered >> j & 1 == 1)
            .min_by_key(|&j| (self.coverers[j].len(), j))
            .expect("some point is uncovered");
        let mut options: Vec<usize> = self.coverers[pivot].clone();
        options.sort_by_key(|&idx| std::cmp::Reverse((self.sets[idx].1 & uncovered).count_ones()));
        for idx in options {
            let (center, mask) = self.sets[idx];
            chosen.push(center);
            if self.search(covered | mask, budget - 1, chosen, failed) {
                return true;
            }
            chosen.pop();
        }
        let entry = failed.entry(covered).or_insert(0);
        *entry = (*entry).max(budget);
        false
    }
}

/// Decides whether at most `limit` population points can serve everyone
/// within `alpha` times their neighborhood radius; returns a witness when
/// they can.
pub fn feasible_alpha(
    instance: &Instance,
    profile: &NeighborhoodProfile,
    alpha: f64,
    limit: usize,
) -> Result<Feasibility> {
    let n = instance.n();
    if n > EXACT_LIMIT {
        return Err(Error::GuardExceeded { what: "exact cover search", limit: EXACT_LIMIT, n });
    }
    if alpha.is_nan() || alpha < 0.0 {
        return Err(Error::InvalidParameter(format!("alpha = {alpha}")));
    }
    if profile.n() != n {
        return Err(Error::ProfileMismatch { profile_n: profile.n(), profile_k: profile.k(), n, k: instance.k() });
    }
    let system = CoverSystem::build(instance, profile, alpha);
    if system.coverers.iter().any(Vec::is_empty) {
        return Ok(Feasibility { feasible: false, witness: None });
    }
    let mut chosen = Vec::new();
    let mut failed = HashMap::new();
    if system.search(0, limit, &mut chosen, &mut failed) {
        chosen.sort_unstable();
        let mut witness = Solution::new(chosen, "exact");
        witness.alpha_param = Some(alpha);
        Ok(Feasibility { feasible: true, witness: Some(witness) })
    } else {
        Ok(Feasibility { feasible: false, witness: None })
    }
}

/// Every value `alpha_of` can take on this instance, ascending.
pub fn candidate_alphas(instance: &Instance, profile: &NeighborhoodProfile) -> Vec<ExtendedReal> {
    let n = instance.n();
    let mut values: Vec<ExtendedReal> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| ExtendedReal::ratio(instance.distance(i, j), profile.radius(j)))
        .collect();
    values.sort();
    values.dedup();
    values
}

/// Optimal fairness `alpha*` and a solution attaining it.
pub fn optimal_alpha(instance: &Instance) -> Result<(ExtendedReal, Solution)> {
    let n = instance.n();
    if n > OPTIMAL_LIMIT {
        return Err(Error::GuardExceeded { what: "optimal alpha search", limit: OPTIMAL_LIMIT, n });
    }
    let k = instance.k();
    let profile = neighborhood_radii_bruteforce(instance)?;
    let candidates = candidate_alphas(instance, &profile);

    // The 2-fair solution bounds alpha* from above and is itself a
    // candidate value.
    let upper_solution = two_fair_k_center(instance, &profile)?;
    let upper = alpha_of(&profile, instance.metric(), Facilities::Population(&upper_solution.centers))?;
    let mut hi = candidates.partition_point(|&c| c < upper);
    debug_assert_eq!(candidates[hi], upper);
    let mut best = Solution { alpha_param: Some(upper.value()), ..upper_solution };

    // first feasible index in [lo, hi]; hi is known feasible
    let mut lo = 0usize;
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        let check = feasible_alpha(instance, &profile, candidates[mid].value(), k)?;
        if check.feasible {
            hi = mid;
            best = check.witness.expect("feasible result carries a witness");
        } else {
            lo = mid + 1;
        }
    }
    let alpha_star = candidates[hi];
    best.algorithm = "optimal";
    best.alpha_param = Some(alpha_star.value());
    Ok((alpha_star, best))
}
