//! Reference implementations used only by tests. Each one is written from
//! the definitions and shares no code with the library beyond plain types.
#![allow(dead_code)]

use nrfair::Point2D;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

const A: f64 = 6_378_137.0;
const F: f64 = 1.0 / 298.257_223_563;
const K0: f64 = 0.9996;

/// UTM by the classic power series in longitude offset (USGS style).
pub fn utm_series(lat_deg: f64, lon_deg: f64, zone: u8, north: bool) -> (f64, f64) {
    let e2 = F * (2.0 - F);
    let ep2 = e2 / (1.0 - e2);
    let phi = lat_deg.to_radians();
    let lon0 = (6.0 * zone as f64 - 183.0).to_radians();
    let (s, c) = phi.sin_cos();
    let n = A / (1.0 - e2 * s * s).sqrt();
    let t = (s / c).powi(2);
    let cc = ep2 * c * c;
    let a = (lon_deg.to_radians() - lon0) * c;
    let e4 = e2 * e2;
    let e6 = e4 * e2;
    let m = A
        * ((1.0 - e2 / 4.0 - 3.0 * e4 / 64.0 - 5.0 * e6 / 256.0) * phi
            - (3.0 * e2 / 8.0 + 3.0 * e4 / 32.0 + 45.0 * e6 / 1024.0) * (2.0 * phi).sin()
            + (15.0 * e4 / 256.0 + 45.0 * e6 / 1024.0) * (4.0 * phi).sin()
            - (35.0 * e6 / 3072.0) * (6.0 * phi).sin());
    let x = K0
        * n
        * (a + (1.0 - t + cc) * a.powi(3) / 6.0
            + (5.0 - 18.0 * t + t * t + 72.0 * cc - 58.0 * ep2) * a.powi(5) / 120.0);
    let y = K0
        * (m + n
            * (s / c)
            * (a * a / 2.0
                + (5.0 - t + 9.0 * cc + 4.0 * cc * cc) * a.powi(4) / 24.0
                + (61.0 - 58.0 * t + t * t + 600.0 * cc - 330.0 * ep2) * a.powi(6) / 720.0));
    (x + 500_000.0, if north { y } else { y + 10_000_000.0 })
}

/// Great-circle distance on the mean-radius sphere.
pub fn haversine(lat1: f64, lon1: f64, lat2: f64, lon2: f64) -> f64 {
    const R: f64 = 6_371_008.8;
    let (p1, p2) = (lat1.to_radians(), lat2.to_radians());
    let dp = p2 - p1;
    let dl = (lon2 - lon1).to_radians();
    let h = (dp / 2.0).sin().powi(2) + p1.cos() * p2.cos() * (dl / 2.0).sin().powi(2);
    2.0 * R * h.sqrt().asin()
}

/// Ellipsoidal distance for short separations, from the metric
/// `ds^2 = (M dphi)^2 + (N cos(phi) dlambda)^2` at the midpoint latitude.
pub fn short_geodesic(lat1: f64, lon1: f64, lat2: f64, lon2: f64) -> f64 {
    let e2 = F * (2.0 - F);
    let phi = ((lat1 + lat2) / 2.0).to_radians();
    let w = 1.0 - e2 * phi.sin().powi(2);
    let m = A * (1.0 - e2) / w.powf(1.5);
    let n = A / w.sqrt();
    let dphi = (lat2 - lat1).to_radians();
    let dlam = (lon2 - lon1).to_radians();
    (m * dphi).hypot(n * phi.cos() * dlam)
}

/// `NR` by sorting every distance row.
pub fn radii_by_sorting(n: usize, k: usize, dist: impl Fn(usize, usize) -> f64) -> Vec<f64> {
    let m = n.div_ceil(k);
    (0..n)
        .map(|i| {
            let mut row: Vec<f64> = (0..n).map(|j| dist(i, j)).collect();
            row.sort_by(f64::total_cmp);
            row[m - 1]
        })
        .collect()
}

/// `max_i d(i, S) / NR(i)` with `0/0 = inf/inf = 1` and `c/0 = inf`.
pub fn alpha_by_definition(n: usize, centers: &[usize], radii: &[f64], dist: impl Fn(usize, usize) -> f64) -> f64 {
    (0..n)
        .map(|i| {
            let d = centers.iter().map(|&c| dist(i, c)).fold(f64::INFINITY, f64::min);
            let r = radii[i];
            match (d, r) {
                (d, r) if d == 0.0 && r == 0.0 => 1.0,
                (d, r) if d.is_infinite() && r.is_infinite() => 1.0,
                (_, 0.0) => f64::INFINITY,
                (d, r) => d / r,
            }
        })
        .fold(0.0, f64::max)
}

/// Dominating set of size `<= k`, by recursion over the vertex order.
pub fn has_dominating_set(n: usize, edges: &[(usize, usize)], k: usize) -> bool {
    let mut adj = vec![vec![false; n]; n];
    for &(u, v) in edges {
        adj[u][v] = true;
        adj[v][u] = true;
    }
    fn go(v: usize, n: usize, left: usize, chosen: &mut Vec<usize>, adj: &[Vec<bool>]) -> bool {
        let dominated = (0..n).all(|u| chosen.iter().any(|&c| c == u || adj[c][u]));
        if dominated {
            return true;
        }
        if v == n || left == 0 {
            return false;
        }
        chosen.push(v);
        if go(v + 1, n, left - 1, chosen, adj) {
            return true;
        }
        chosen.pop();
        go(v + 1, n, left, chosen, adj)
    }
    go(0, n, k, &mut Vec::new(), &adj)
}

/// Shortest-path metric of a complete graph with integer weights.
pub fn integer_metric(n: usize, rng: &mut ChaCha8Rng, max_weight: u32) -> Vec<Vec<f64>> {
    let mut d = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let w = rng.gen_range(1..=max_weight) as f64;
            d[i][j] = w;
            d[j][i] = w;
        }
    }
    for via in 0..n {
        for i in 0..n {
            for j in 0..n {
                let alt = d[i][via] + d[via][j];
                if alt < d[i][j] {
                    d[i][j] = alt;
                }
            }
        }
    }
    d
}

pub fn random_edges(n: usize, p: f64, rng: &mut ChaCha8Rng) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    edges
}

/// Points from one of several shapes: uniform, clustered, or a coarse
/// integer grid with many duplicates.
pub fn random_points(n: usize, rng: &mut ChaCha8Rng) -> Vec<Point2D> {
    match rng.gen_range(0..3) {
        0 => (0..n).map(|_| Point2D::new(rng.gen_range(0.0..1000.0), rng.gen_range(0.0..1000.0))).collect(),
        1 => {
            let hubs: Vec<(f64, f64, f64)> = (0..rng.gen_range(1..6))
                .map(|_| (rng.gen_range(0.0..10_000.0), rng.gen_range(0.0..10_000.0), rng.gen_range(1.0..500.0)))
                .collect();
            (0..n)
                .map(|_| {
                    let (x, y, s) = hubs[rng.gen_range(0..hubs.len())];
                    Point2D::new(x + rng.gen_range(-s..s), y + rng.gen_range(-s..s))
                })
                .collect()
        }
        _ => {
            let side = rng.gen_range(2..12);
            (0..n).map(|_| Point2D::new(rng.gen_range(0..side) as f64, rng.gen_range(0..side) as f64)).collect()
        }
    }
}
