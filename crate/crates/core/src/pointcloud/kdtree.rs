//! Static k-d tree with median splits and leaves of at most 16 points.
//!
//! Query results are ordered by `(squared distance, point index)`, so equal
//! distances always resolve to the lower index regardless of build order.

use alloc::vec::Vec;

const LEAF_SIZE: usize = 16;

#[derive(Debug, Clone)]
enum Node {
    Leaf {
        start: usize,
        end: usize,
    },
    Split {
        dim: usize,
        value: f64,
        left: usize,
        right: usize,
    },
}

#[derive(Debug, Clone)]
pub struct KdTree<const D: usize> {
    points: Vec<[f64; D]>,
    // point indices, permuted so every leaf is a contiguous range
    order: Vec<usize>,
    nodes: Vec<Node>,
}

#[inline]
fn dist2<const D: usize>(a: &[f64; D], b: &[f64; D]) -> f64 {
    let mut s = 0.0;
    for k in 0..D {
        let d = a[k] - b[k];
        s += d * d;
    }
    s
}

impl<const D: usize> KdTree<D> {
    pub fn new(points: Vec<[f64; D]>) -> Self {
        let mut tree = Self {
            order: (0..points.len()).collect(),
            points,
            nodes: Vec::new(),
        };
        if !tree.points.is_empty() {
            tree.build(0, tree.points.len());
        }
        tree
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, index: usize) -> &[f64; D] {
        &self.points[index]
    }

    fn build(&mut self, start: usize, end: usize) -> usize {
        let id = self.nodes.len();
        if end - start <= LEAF_SIZE {
            self.nodes.push(Node::Leaf { start, end });
            return id;
        }
        let mut dim = 0;
        let mut widest = f64::NEG_INFINITY;
        for k in 0..D {
            let (lo, hi) = self.order[start..end]
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &i| {
                    (lo.min(self.points[i][k]), hi.max(self.points[i][k]))
                });
            if hi - lo > widest {
                widest = hi - lo;
                dim = k;
            }
        }
        let points = &self.points;
        self.order[start..end].sort_by(|&a, &b| points[a][dim].total_cmp(&points[b][dim]).then(a.cmp(&b)));
        let mid = start + (end - start) / 2;
        let value = self.points[self.order[mid]][dim];
        self.nodes.push(Node::Leaf { start: 0, end: 0 });
        let left = self.build(start, mid);
        let right = self.build(mid, end);
        self.nodes[id] = Node::Split {
            dim,
            value,
            left,
            right,
        };
        id
    }

    /// The `k` nearest points as `(index, squared distance)`.
    pub fn nearest(&self, query: &[f64; D], k: usize) -> Vec<(usize, f64)> {
        let mut best: Vec<(usize, f64)> = Vec::with_capacity(k + 1);
        if k > 0 && !self.points.is_empty() {
            self.knn(0, query, k, &mut best);
        }
        best
    }

    fn knn(&self, node: usize, query: &[f64; D], k: usize, best: &mut Vec<(usize, f64)>) {
        match self.nodes[node] {
            Node::Leaf { start, end } => {
                for &i in &self.order[start..end] {
                    let d = dist2(&self.points[i], query);
                    let key = (d, i);
                    if best.len() == k {
                        let last = best[k - 1];
                        if (key.0, key.1) >= (last.1, last.0) {
                            continue;
                        }
                    }
                    let pos = best
                        .iter()
                        .position(|&(j, e)| (d, i) < (e, j))
                        .unwrap_or(best.len());
                    best.insert(pos, (i, d));
                    best.truncate(k);
                }
            }
            Node::Split {
                dim,
                value,
                left,
                right,
            } => {
                let diff = query[dim] - value;
                let (near, far) = if diff < 0.0 { (left, right) } else { (right, left) };
                self.knn(near, query, k, best);
                if best.len() < k || diff * diff <= best[k - 1].1 {
                    self.knn(far, query, k, best);
                }
            }
        }
    }

    /// Indices of all points within `radius` (inclusive), ascending.
    pub fn within_radius(&self, query: &[f64; D], radius: f64) -> Vec<usize> {
        let mut out = Vec::new();
        if !self.points.is_empty() {
            self.range(0, query, radius * radius, &mut out);
        }
        out.sort_unstable();
        out
    }

    fn range(&self, node: usize, query: &[f64; D], r2: f64, out: &mut Vec<usize>) {
        match self.nodes[node] {
            Node::Leaf { start, end } => {
                out.extend(
                    self.order[start..end]
                        .iter()
                        .copied()
                        .filter(|&i| dist2(&self.points[i], query) <= r2),
                );
            }
            Node::Split {
                dim,
                value,
                left,
                right,
            } => {
                let diff = query[dim] - value;
                if diff <= 0.0 || diff * diff <= r2 {
                    self.range(left, query, r2, out);
                }
                if diff >= 0.0 || diff * diff <= r2 {
                    self.range(right, query, r2, out);
                }
            }
        }
    }
}
