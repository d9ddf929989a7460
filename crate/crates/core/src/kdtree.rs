//! Static 2-D KD-tree with exact m-th-nearest and nearest-with-tie-break
//! queries.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::metric::Point2D;

pub const DEFAULT_LEAF_SIZE: usize = 16;

#[derive(Debug, Clone, Copy)]
struct BBox {
    min: Point2D,
    max: Point2D,
}

impl BBox {
    /// Squared distance from `q` to the box. Never exceeds the computed
    /// squared distance from `q` to any point inside, since float subtraction
    /// and multiplication round monotonically.
    #[inline]
    fn distance_squared(&self, q: &Point2D) -> f64 {
        let dx = if q.x < self.min.x {
            self.min.x - q.x
        } else if q.x > self.max.x {
            q.x - self.max.x
        } else {
            0.0
        };
        let dy = if q.y < self.min.y {
            self.min.y - q.y
        } else if q.y > self.max.y {
            q.y - self.max.y
        } else {
            0.0
        };
        dx * dx + dy * dy
    }
}

#[derive(Debug, Clone)]
enum NodeKind {
    Leaf { start: usize, end: usize },
    Inner { left: usize, right: usize },
}

#[derive(Debug, Clone)]
struct Node {
    bbox: BBox,
    kind: NodeKind,
}

#[derive(Debug, Clone)]
pub struct KdTree {
    /// Points in leaf order.
    points: Vec<Point2D>,
    /// Original id of each entry of `points`.
    ids: Vec<usize>,
    nodes: Vec<Node>,
    leaf_size: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct MaxF64(f64);

impl Eq for MaxF64 {}

impl PartialOrd for MaxF64 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MaxF64 {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

impl KdTree {
    /// Builds the tree. Each internal node splits on the wider axis of its
    /// bounding box at the median, ties broken toward the lower id, so the
    /// structure depends only on the input order.
    pub fn build(points: &[Point2D], leaf_size: usize) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyPointSet);
        }
        if leaf_size == 0 {
            return Err(Error::InvalidParameter("leaf_size must be positive".into()));
        }
        let mut order: Vec<usize> = (0..points.len()).collect();
        let mut nodes = Vec::with_capacity(2 * points.len() / leaf_size + 1);
        build_node(points, &mut order, 0, leaf_size, &mut nodes);
        Ok(KdTree {
            points: order.iter().map(|&i| points[i]).collect(),
            ids: order,
            nodes,
            leaf_size,
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn leaf_size(&self) -> usize {
        self.leaf_size
    }

    /// Number of levels on the longest root-to-leaf path (a lone leaf has
    /// depth 1).
    pub fn depth(&self) -> usize {
        fn walk(nodes: &[Node], at: usize) -> usize {
            match nodes[at].kind {
                NodeKind::Leaf { .. } => 1,
                NodeKind::Inner { left, right } => 1 + walk(nodes, left).max(walk(nodes, right)),
            }
        }
        walk(&self.nodes, 0)
    }

    /// Ids stored in each leaf, in tree order.
    pub fn leaves(&self) -> Vec<&[usize]> {
        self.nodes
            .iter()
            .filter_map(|node| match node.kind {
                NodeKind::Leaf { start, end } => Some(&self.ids[start..end]),
                NodeKind::Inner { .. } => None,
            })
            .collect()
    }

    /// The `m`-th smallest distance (1-indexed) from `query` to the stored
    /// multiset of points. Exact.
    pub fn kth_smallest_distance(&self, query: &Point2D, m: usize) -> Result<f64> {
        if m == 0 || m > self.len() {
            return Err(Error::RankOutOfRange { m, n: self.len() });
        }
        let mut heap = BinaryHeap::with_capacity(m + 1);
        self.collect_nearest(0, query, m, &mut heap);
        let worst = heap.peek().expect("heap holds m entries").0;
        Ok(worst.sqrt())
    }

    fn collect_nearest(&self, at: usize, q: &Point2D, m: usize, heap: &mut BinaryHeap<MaxF64>) {
        let node = &self.nodes[at];
        match node.kind {
            NodeKind::Leaf { start, end } => {
                for p in &self.points[start..end] {
                    let d2 = q.distance_squared(p);
                    if heap.len() < m {
                        heap.push(MaxF64(d2));
                    } else if d2 < heap.peek().unwrap().0 {
                        heap.pop();
                        heap.push(MaxF64(d2));
                    }
                }
            }
            NodeKind::Inner { left, right } => {
                let dl = self.nodes[left].bbox.distance_squared(q);
                let dr = self.nodes[right].bbox.distance_squared(q);
                let (first, d_first, second, d_second) =
                    if dl <= dr { (left, dl, right, dr) } else { (right, dr, left, dl) };
                if heap.len() < m || d_first <= heap.peek().unwrap().0 {
                    self.collect_nearest(first, q, m, heap);
                }
                if heap.len() < m || d_second <= heap.peek().unwrap().0 {
                    self.collect_nearest(second, q, m, heap);
                }
            }
        }
    }

    /// Nearest stored point to `query` as `(id, distance)`; equal distances
    /// go to the lowest id.
    pub fn nearest(&self, query: &Point2D) -> (usize, f64) {
        let mut best = (usize::MAX, f64::INFINITY);
        self.nearest_in(0, query, &mut best);
        best
    }

    fn nearest_in(&self, at: usize, q: &Point2D, best: &mut (usize, f64)) {
        let node = &self.nodes[at];
        match node.kind {
            NodeKind::Leaf { start, end } => {
                for (p, &id) in self.points[start..end].iter().zip(&self.ids[start..end]) {
                    let d = q.distance(p);
                    if d < best.1 || (d == best.1 && id < best.0) {
                        *best = (id, d);
                    }
                }
            }
            NodeKind::Inner { left, right } => {
                let dl = self.nodes[left].bbox.distance_squared(q).sqrt();
                let dr = self.nodes[right].bbox.distance_squared(q).sqrt();
                let (first, d_first, second, d_second) =
                    if dl <= dr { (left, dl, right, dr) } else { (right, dr, left, dl) };
                // Only strictly farther subtrees are skipped: an equal
                // distance may still carry a lower id.
                if d_first <= best.1 {
                    self.nearest_in(first, q, best);
                }
                if d_second <= best.1 {
                    self.nearest_in(second, q, best);
                }
            }
        }
    }
}

fn build_node(
    points: &[Point2D],
    order: &mut [usize],
    offset: usize,
    leaf_size: usize,
    nodes: &mut Vec<Node>,
) -> usize {
    let bbox = {
        let mut min = points[order[0]];
        let mut max = min;
        for &i in &order[1..] {
            let p = points[i];
            min.x = min.x.min(p.x);
            min.y = min.y.min(p.y);
            max.x = max.x.max(p.x);
            max.y = max.y.max(p.y);
        }
        BBox { min, max }
    };
    let at = nodes.len();
    if order.len() <= leaf_size {
        nodes.push(Node { bbox, kind: NodeKind::Leaf { start: offset, end: offset + order.len() } });
        return at;
    }
    nodes.push(Node { bbox, kind: NodeKind::Leaf { start: 0, end: 0 } });

    let split_x = bbox.max.x - bbox.min.x >= bbox.max.y - bbox.min.y;
    let mid = order.len() / 2;
    order.select_nth_unstable_by(mid, |&a, &b| {
        let (ca, cb) = if split_x { (points[a].x, points[b].x) } else { (points[a].y, points[b].y) };
        ca.total_cmp(&cb).then(a.cmp(&b))
    });
    let (lo, hi) = order.split_at_mut(mid);
    let left = build_node(points, lo, offset, leaf_size, nodes);
    let right = build_node(points, hi, offset + mid, leaf_size, nodes);
    nodes[at].kind = NodeKind::Inner { left, right };
    at
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_points(n: usize, seed: u64) -> Vec<Point2D> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| Point2D::new(rng.gen_range(0.0..1000.0), rng.gen_range(0.0..1000.0))).collect()
    }

    fn brute_kth(points: &[Point2D], q: &Point2D, m: usize) -> f64 {
        let mut d: Vec<f64> = points.iter().map(|p| q.distance(p)).collect();
        d.sort_by(f64::total_cmp);
        d[m - 1]
    }

    #[test]
    fn single_point_is_a_leaf() {
        let t = KdTree::build(&[Point2D::new(1.0, 2.0)], 16).unwrap();
        assert_eq!(t.depth(), 1);
        assert_eq!(t.leaves(), vec![&[0usize][..]]);
    }

    #[test]
    fn empty_input_rejected() {
        assert!(matches!(KdTree::build(&[], 16), Err(Error::EmptyPointSet)));
    }

    #[test]
    fn depth_bound_and_leaf_partition() {
        let pts = random_points(1000, 7);
        let t = KdTree::build(&pts, 16).unwrap();
        let bound = (1000f64 / 16.0).log2().ceil() as usize + 2;
        assert!(t.depth() <= bound, "depth {} > {}", t.depth(), bound);
        let mut seen: Vec<usize> = t.leaves().into_iter().flatten().copied().collect();
        assert!(t.leaves().iter().all(|l| l.len() <= 16));
        seen.sort_unstable();
        assert_eq!(seen, (0..1000).collect::<Vec<_>>());
    }

    #[test]
    fn duplicates_all_at_distance_zero() {
        let pts = vec![Point2D::new(3.0, 3.0); 50];
        let t = KdTree::build(&pts, 4).unwrap();
        for m in 1..=50 {
            assert_eq!(t.kth_smallest_distance(&Point2D::new(3.0, 3.0), m).unwrap(), 0.0);
        }
    }

    #[test]
    fn kth_on_small_lines() {
        let pts: Vec<_> = [0.0, 0.0, 1.0].iter().map(|&x| Point2D::new(x, 0.0)).collect();
        let t = KdTree::build(&pts, 1).unwrap();
        assert_eq!(t.kth_smallest_distance(&Point2D::new(0.0, 0.0), 2).unwrap(), 0.0);

        let pts: Vec<_> =
            [-100.0, 0.0, 0.0, 1.0, 1.0, 100.0].iter().map(|&x| Point2D::new(x, 0.0)).collect();
        let t = KdTree::build(&pts, 2).unwrap();
        assert_eq!(t.kth_smallest_distance(&Point2D::new(100.0, 0.0), 2).unwrap(), 99.0);
    }

    #[test]
    fn rank_out_of_range() {
        let t = KdTree::build(&random_points(5, 1), 2).unwrap();
        let q = Point2D::new(0.0, 0.0);
        assert!(matches!(t.kth_smallest_distance(&q, 0), Err(Error::RankOutOfRange { .. })));
        assert!(matches!(t.kth_smallest_distance(&q, 6), Err(Error::RankOutOfRange { .. })));
    }

    #[test]
    fn kth_matches_sorting() {
        let pts = random_points(500, 11);
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for leaf in [1, 16, 256] {
            let t = KdTree::build(&pts, leaf).unwrap();
            for _ in 0..50 {
                let q = Point2D::new(rng.gen_range(-100.0..1100.0), rng.gen_range(-100.0..1100.0));
                let m = rng.gen_range(1..=500);
                assert_eq!(t.kth_smallest_distance(&q, m).unwrap(), brute_kth(&pts, &q, m));
            }
        }
    }

    #[test]
    fn nearest_breaks_ties_by_id() {
        let pts = vec![
            Point2D::new(5.0, 0.0),
            Point2D::new(-1.0, 0.0),
            Point2D::new(1.0, 0.0),
            Point2D::new(0.0, 1.0),
            Point2D::new(1.0, 0.0),
        ];
        let t = KdTree::build(&pts, 1).unwrap();
        assert_eq!(t.nearest(&Point2D::new(0.0, 0.0)), (1, 1.0));
        assert_eq!(t.nearest(&Point2D::new(1.0, 0.0)), (2, 0.0));
    }

    #[test]
    fn nearest_matches_scan() {
        let pts = random_points(300, 5);
        let t = KdTree::build(&pts, 8).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..500 {
            let q = Point2D::new(rng.gen_range(0.0..1000.0), rng.gen_range(0.0..1000.0));
            let mut best = (usize::MAX, f64::INFINITY);
            for (i, p) in pts.iter().enumerate() {
                let d = q.distance(p);
                if d < best.1 {
                    best = (i, d);
                }
            }
            assert_eq!(t.nearest(&q), best);
        }
    }
}
