use std::cmp::Ordering;

use super::{axis_gap, distance_sq, distance_sq_within, PointSet, Topology};
use crate::error::{domain, Result};

/// Rank-1..k neighbour distances for every point, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct NeighborDistances {
    max_rank: usize,
    distances: Vec<f64>,
}

impl NeighborDistances {
    pub fn max_rank(&self) -> usize {
        self.max_rank
    }

    pub fn len(&self) -> usize {
        self.distances.len() / self.max_rank
    }

    pub fn is_empty(&self) -> bool {
        self.distances.is_empty()
    }

    /// Sorted distances from point `i` to its `max_rank` nearest neighbours.
    pub fn row(&self, i: usize) -> &[f64] {
        &self.distances[i * self.max_rank..(i + 1) * self.max_rank]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.distances.chunks_exact(self.max_rank)
    }
}

fn check_rank(points: &PointSet, max_rank: usize) -> Result<()> {
    if max_rank == 0 || max_rank >= points.len() {
        return Err(domain(format!(
            "max_rank must satisfy 1 <= max_rank < N (max_rank = {max_rank}, N = {})",
            points.len()
        )));
    }
    Ok(())
}

/// Bounded list of the k best `(squared distance, index)` pairs, ascending.
/// Ties on distance go to the lower index.
struct Best {
    k: usize,
    items: Vec<(f64, usize)>,
}

impl Best {
    fn new(k: usize) -> Self {
        Self { k, items: Vec::with_capacity(k + 1) }
    }

    fn clear(&mut self) {
        self.items.clear();
    }

    #[inline]
    fn worst(&self) -> f64 {
        if self.items.len() < self.k {
            f64::INFINITY
        } else {
            self.items[self.k - 1].0
        }
    }

    #[inline]
    fn offer(&mut self, d2: f64, j: usize) {
        if self.items.len() == self.k {
            let (wd, wj) = self.items[self.k - 1];
            if cmp_pair((d2, j), (wd, wj)) != Ordering::Less {
                return;
            }
            self.items.pop();
        }
        let pos = self.items.partition_point(|&p| cmp_pair(p, (d2, j)) == Ordering::Less);
        self.items.insert(pos, (d2, j));
    }

    fn write_into(&self, out: &mut Vec<f64>) {
        out.extend(self.items.iter().map(|&(d2, _)| d2.sqrt()));
    }
}

#[inline]
fn cmp_pair(a: (f64, usize), b: (f64, usize)) -> Ordering {
    a.0.total_cmp(&b.0).then(a.1.cmp(&b.1))
}

/// O(N^2) reference: for each point, the sorted `max_rank` smallest distances
/// to the other points.
pub fn nn_distances_bruteforce(points: &PointSet, max_rank: usize, topology: Topology) -> Result<NeighborDistances> {
    check_rank(points, max_rank)?;
    let n = points.len();
    let mut distances = Vec::with_capacity(n * max_rank);
    let mut best = Best::new(max_rank);
    for i in 0..n {
        best.clear();
        let p = points.point(i);
        for j in (0..n).filter(|&j| j != i) {
            best.offer(distance_sq(p, points.point(j), topology), j);
        }
        best.write_into(&mut distances);
    }
    Ok(NeighborDistances { max_rank, distances })
}

/// Same contract as [`nn_distances_bruteforce`], answered with a k-d tree.
pub fn nn_distances_accelerated(points: &PointSet, max_rank: usize, topology: Topology) -> Result<NeighborDistances> {
    check_rank(points, max_rank)?;
    let tree = KdTree::build(points);
    let n = points.len();
    let mut distances = Vec::with_capacity(n * max_rank);
    let mut best = Best::new(max_rank);
    for i in 0..n {
        best.clear();
        tree.search(i, topology, &mut best);
        best.write_into(&mut distances);
    }
    Ok(NeighborDistances { max_rank, distances })
}

const LEAF_SIZE: usize = 16;

enum Node {
    Leaf { start: usize, end: usize },
    Split { left: usize, right: usize },
}

/// Bucketed k-d tree over a [`PointSet`] with a tight bounding box per node.
///
/// Under the torus topology the box lower bound measures each axis gap on
/// the circle, which accounts for every periodic image of the box.
pub struct KdTree<'a> {
    points: &'a PointSet,
    order: Vec<usize>,
    // coordinates permuted into `order`, so leaves are contiguous
    sorted: Vec<f64>,
    nodes: Vec<Node>,
    // lo[0..dim], hi[0..dim] per node
    bounds: Vec<f64>,
}

impl<'a> KdTree<'a> {
    pub fn build(points: &'a PointSet) -> Self {
        let mut tree = Self {
            points,
            order: (0..points.len()).collect(),
            sorted: Vec::new(),
            nodes: Vec::new(),
            bounds: Vec::new(),
        };
        if !points.is_empty() {
            tree.build_node(0, points.len());
        }
        tree.sorted = tree.order.iter().flat_map(|&i| points.point(i).iter().copied()).collect();
        tree
    }

    fn build_node(&mut self, start: usize, end: usize) -> usize {
        let dim = self.points.dim();
        let id = self.nodes.len();
        let mut lo = vec![f64::INFINITY; dim];
        let mut hi = vec![f64::NEG_INFINITY; dim];
        for &i in &self.order[start..end] {
            for (a, &x) in self.points.point(i).iter().enumerate() {
                lo[a] = lo[a].min(x);
                hi[a] = hi[a].max(x);
            }
        }
        self.bounds.extend_from_slice(&lo);
        self.bounds.extend_from_slice(&hi);
        self.nodes.push(Node::Leaf { start, end });
        if end - start <= LEAF_SIZE {
            return id;
        }

        let axis = (0..dim).max_by(|&a, &b| (hi[a] - lo[a]).total_cmp(&(hi[b] - lo[b]))).unwrap_or(0);
        if hi[axis] <= lo[axis] {
            // all points coincide
            return id;
        }
        let mid = start + (end - start) / 2;
        let pts = self.points;
        self.order[start..end].select_nth_unstable_by(mid - start, |&a, &b| {
            pts.point(a)[axis].total_cmp(&pts.point(b)[axis]).then(a.cmp(&b))
        });
        let left = self.build_node(start, mid);
        let right = self.build_node(mid, end);
        self.nodes[id] = Node::Split { left, right };
        id
    }

    fn lower_bound_sq(&self, node: usize, q: &[f64], topology: Topology) -> f64 {
        let dim = q.len();
        let base = node * 2 * dim;
        let (lo, hi) = self.bounds[base..base + 2 * dim].split_at(dim);
        let mut acc = 0.0;
        for ((&x, &l), &h) in q.iter().zip(lo).zip(hi) {
            if x >= l && x <= h {
                continue;
            }
            let g = axis_gap(x, l, topology).min(axis_gap(x, h, topology));
            acc += g * g;
        }
        acc
    }

    fn search(&self, query: usize, topology: Topology, best: &mut Best) {
        if !self.nodes.is_empty() {
            let q = self.points.point(query);
            self.visit(0, query, q, topology, best);
        }
    }

    // Depth-first, nearer child first; a subtree is skipped once its box
    // lower bound exceeds the current k-th distance.
    fn visit(&self, node: usize, query: usize, q: &[f64], topology: Topology, best: &mut Best) {
        match self.nodes[node] {
            Node::Leaf { start, end } => self.scan_leaf(start, end, query, q, topology, best),
            Node::Split { left, right } => {
                let bl = self.lower_bound_sq(left, q, topology);
                let br = self.lower_bound_sq(right, q, topology);
                let (near, bn, far, bf) = if bl <= br { (left, bl, right, br) } else { (right, br, left, bl) };
                if bn <= best.worst() {
                    self.visit(near, query, q, topology, best);
                }
                if bf <= best.worst() {
                    self.visit(far, query, q, topology, best);
                }
            }
        }
    }

    #[inline]
    fn scan_leaf(&self, start: usize, end: usize, query: usize, q: &[f64], topology: Topology, best: &mut Best) {
        let dim = q.len();
        let coords = self.sorted[start * dim..end * dim].chunks_exact(dim);
        for (&j, p) in self.order[start..end].iter().zip(coords) {
            if j == query {
                continue;
            }
            if let Some(d2) = distance_sq_within(q, p, topology, best.worst()) {
                best.offer(d2, j);
            }
        }
    }
}
