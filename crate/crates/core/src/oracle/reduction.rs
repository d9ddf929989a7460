//! Dominating set to 1-fairness reduction, and a brute-force dominating
//! set check to test it against.
//!
//! From a graph `G` on `n` vertices and a budget `k` (with `n - k` even) we
//! build `G'`: `G` itself, two pendant vertices hanging off every vertex of
//! `G`, and `3(n - k)/2` disjoint 4-cycles. With `k' = 3n - 2k` the
//! population has exactly `3k'` points, so every neighborhood holds three
//! points: radius 1 for original and cycle vertices, 2 for pendants. `G`
//! has a dominating set of size `<= k` iff `G'` admits a 1-fair solution
//! with `<= k'` centers.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::metric::{graph_metric, Instance};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SimpleGraph {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

impl SimpleGraph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if let Some(&(u, v)) = edges.iter().find(|&&(u, v)| u >= n || v >= n) {
            return Err(Error::IdOutOfRange { id: u.max(v), n });
        }
        Ok(SimpleGraph { n, edges })
    }

    /// Closed neighborhoods as bitmasks (requires `n <= 64`).
    fn closed_neighborhoods(&self) -> Vec<u64> {
        let mut nb: Vec<u64> = (0..self.n).map(|u| 1u64 << u).collect();
        for &(u, v) in &self.edges {
            nb[u] |= 1 << v;
            nb[v] |= 1 << u;
        }
        nb
    }
}

#[derive(Debug, Clone)]
pub struct ReductionOutput {
    pub instance: Instance,
    pub k_prime: usize,
    /// Vertices `0..n` of the population are the vertices of the input graph.
    pub graph_vertices: usize,
    /// `(pendant id, graph vertex it hangs from)`.
    pub pendants: Vec<(usize, usize)>,
    /// Vertex ids of each 4-cycle, in cycle order.
    pub squares: Vec<[usize; 4]>,
}

pub fn dominating_set_reduction(graph: &SimpleGraph, k: usize) -> Result<ReductionOutput> {
    let n = graph.n;
    if k == 0 || k > n {
        return Err(Error::InvalidK { k, n });
    }
    if !(n - k).is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!("n - k = {} must be even", n - k)));
    }
    let mut edges = graph.edges.clone();
    let mut pendants = Vec::with_capacity(2 * n);
    for u in 0..n {
        for side in 0..2 {
            let v = n + 2 * u + side;
            edges.push((u, v));
            pendants.push((v, u));
        }
    }
    let base = 3 * n;
    let squares: Vec<[usize; 4]> = (0..3 * (n - k) / 2)
        .map(|q| {
            let b = base + 4 * q;
            [b, b + 1, b + 2, b + 3]
        })
        .collect();
    for sq in &squares {
        for r in 0..4 {
            edges.push((sq[r], sq[(r + 1) % 4]));
        }
    }
    let total = base + 4 * squares.len();
    let k_prime = 3 * n - 2 * k;
    debug_assert_eq!(total, 3 * k_prime);
    let instance = Instance::new(graph_metric(total, &edges)?, k_prime)?;
    Ok(ReductionOutput { instance, k_prime, graph_vertices: n, pendants, squares })
}

/// Largest graph [`bruteforce_dominating_set`] accepts.
pub const DOMINATING_LIMIT: usize = 12;

/// Whether `graph` has a dominating set with at most `k` vertices, by
/// enumerating every vertex subset.
pub fn bruteforce_dominating_set(graph: &SimpleGraph, k: usize) -> Result<bool> {
    let n = graph.n;
    if n > DOMINATING_LIMIT {
        return Err(Error::GuardExceeded { what: "brute-force dominating set", limit: DOMINATING_LIMIT, n });
    }
    let nb = graph.closed_neighborhoods();
    let full = (1u64 << n) - 1;
    Ok((0u64..=full).filter(|s| s.count_ones() as usize <= k).any(|s| {
        (0..n).filter(|&u| s >> u & 1 == 1).fold(0u64, |acc, u| acc | nb[u]) == full
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::neighborhood::neighborhood_radii;

    fn triangle() -> SimpleGraph {
        SimpleGraph::new(3, vec![(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    #[test]
    fn triangle_sizes() {
        let out = dominating_set_reduction(&triangle(), 1).unwrap();
        assert_eq!(out.instance.n(), 21);
        assert_eq!(out.k_prime, 7);
        assert_eq!(out.instance.n() / out.k_prime, 3);
        assert_eq!(out.squares.len(), 3);
        assert_eq!(out.pendants.len(), 6);
    }

    #[test]
    fn radii_follow_the_construction() {
        let g = SimpleGraph::new(5, vec![(0, 1), (2, 3)]).unwrap();
        let out = dominating_set_reduction(&g, 1).unwrap();
        let p = neighborhood_radii(&out.instance);
        for u in 0..5 {
            assert_eq!(p.radius(u), 1.0);
        }
        for &(v, _) in &out.pendants {
            assert_eq!(p.radius(v), 2.0);
        }
        for sq in &out.squares {
            for &w in sq {
                assert_eq!(p.radius(w), 1.0);
            }
        }
    }

    #[test]
    fn rejects_bad_parity_and_budget() {
        assert!(dominating_set_reduction(&triangle(), 2).is_err());
        assert!(dominating_set_reduction(&triangle(), 4).is_err());
        assert!(dominating_set_reduction(&triangle(), 0).is_err());
        assert!(dominating_set_reduction(&triangle(), 3).is_ok());
    }

    #[test]
    fn brute_force_small_cases() {
        assert!(bruteforce_dominating_set(&triangle(), 1).unwrap());
        let empty = SimpleGraph::new(3, vec![]).unwrap();
        assert!(!bruteforce_dominating_set(&empty, 2).unwrap());
        assert!(bruteforce_dominating_set(&empty, 3).unwrap());
        let big = SimpleGraph::new(13, vec![]).unwrap();
        assert!(bruteforce_dominating_set(&big, 13).is_err());
    }
}
